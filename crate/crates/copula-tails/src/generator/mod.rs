//! Archimedean generators: construction, transforms, inversion, derivatives.

mod derivative;
mod families;
mod transforms;

pub use derivative::{
    check_d_monotone, default_monotone_grid, dk_phi_inv, DMonotoneReport, OrderCheck,
};
pub use families::NelsenFamily;
pub use transforms::Transformed;

use std::sync::Arc;

use crate::error::{CopulaError, Result};

/// Regular-variation index entry for kappa in a closed-form registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    /// The generator is not in the strict asymptotic-independence case, so
    /// kappa plays no role.
    NotApplicable,
    /// Known closed-form value (may be `-inf`).
    Known(f64),
    /// No general formula exists; must be estimated numerically.
    Unknown,
}

/// Closed-form tail quantities of a generator: `-phi'(1)`, `theta1`,
/// `phi(0)`, `theta0` and `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Registry {
    pub neg_dphi1: f64,
    pub theta1: f64,
    pub phi_at_zero: f64,
    /// `None` when no general formula exists (exponential transform).
    pub theta0: Option<f64>,
    pub kappa: Kappa,
}

/// An Archimedean generator: convex, strictly decreasing on (0,1] with
/// `phi(1) = 0`; possibly `phi(0) = inf` (strict generator).
///
/// `phi_one_minus` / `dphi_one_minus` evaluate at `t = 1 - s` through
/// cancellation-safe expressions, since upper-tail estimators probe `s` far
/// below the precision of `1.0 - s`.
pub trait Generator: Send + Sync {
    fn phi(&self, t: f64) -> f64;
    fn dphi(&self, t: f64) -> f64;
    fn phi_inv(&self, y: f64) -> f64;
    fn phi_at_zero(&self) -> f64;

    fn phi_one_minus(&self, s: f64) -> f64 {
        self.phi(1.0 - s)
    }
    fn dphi_one_minus(&self, s: f64) -> f64 {
        self.dphi(1.0 - s)
    }

    fn registry(&self) -> Option<Registry> {
        None
    }

    /// Closed-form `(-D)^k phi_inv(y)` when one is registered.
    fn dk_phi_inv_closed(&self, _y: f64, _k: u32) -> Option<f64> {
        None
    }

    /// Generator spec string (round-trips through the parser).
    fn describe(&self) -> String;
}

/// Shared, immutable handle to a generator.
#[derive(Clone)]
pub struct GeneratorHandle {
    inner: Arc<dyn Generator>,
}

impl std::fmt::Debug for GeneratorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GeneratorHandle({})", self.describe())
    }
}

impl GeneratorHandle {
    pub fn new(g: Arc<dyn Generator>) -> Self {
        GeneratorHandle { inner: g }
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.inner.phi(t)
    }
    pub fn phi_one_minus(&self, s: f64) -> f64 {
        self.inner.phi_one_minus(s)
    }
    pub fn dphi(&self, t: f64) -> f64 {
        self.inner.dphi(t)
    }
    pub fn dphi_one_minus(&self, s: f64) -> f64 {
        self.inner.dphi_one_minus(s)
    }
    pub fn phi_inv(&self, y: f64) -> f64 {
        self.inner.phi_inv(y)
    }
    pub fn phi_at_zero(&self) -> f64 {
        self.inner.phi_at_zero()
    }
    pub fn registry(&self) -> Option<Registry> {
        self.inner.registry()
    }
    pub fn describe(&self) -> String {
        self.inner.describe()
    }
    pub(crate) fn dk_phi_inv_closed(&self, y: f64, k: u32) -> Option<f64> {
        self.inner.dk_phi_inv_closed(y, k)
    }
}

/// Construct a Table-1 family generator.
pub fn make_generator(family_id: u8, theta: f64) -> Result<GeneratorHandle> {
    Ok(GeneratorHandle::new(Arc::new(NelsenFamily::new(
        family_id, theta,
    )?)))
}

/// Apply a Table-2 transform to an existing generator.
pub fn apply_transform(
    base: GeneratorHandle,
    transform_id: u8,
    alpha: f64,
) -> Result<GeneratorHandle> {
    Ok(GeneratorHandle::new(Arc::new(Transformed::new(
        base,
        transform_id,
        alpha,
    )?)))
}

/// Generalized-inverse fallback: bisection in `log t`, monotone in `phi`.
///
/// Stops once the bracket is below 1e-14 in `t` (equivalently 1e-13 in
/// `log t`), with a 200-iteration cap.
pub fn bisect_phi_inv(g: &dyn Generator, y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let phi0 = g.phi_at_zero();
    if y >= phi0 {
        return 0.0;
    }
    // phi at the smallest representable probe; if even that is below y, the
    // inverse is indistinguishable from zero.
    let mut lo_u = (1e-300f64).ln();
    let phi_lo = g.phi(lo_u.exp());
    if !(phi_lo >= y) {
        return 0.0;
    }
    let mut hi_u = 0.0f64;
    for _ in 0..200 {
        if hi_u - lo_u < 1e-13 && (hi_u.exp() - lo_u.exp()).abs() < 1e-14 {
            break;
        }
        let mid = 0.5 * (lo_u + hi_u);
        let v = g.phi(mid.exp());
        if v > y {
            lo_u = mid;
        } else {
            hi_u = mid;
        }
    }
    (0.5 * (lo_u + hi_u)).exp()
}

/// Parse a generator spec: `family:<id>,theta:<v>[,transform:<id>,alpha:<v>]*`.
pub fn parse_spec(spec: &str) -> Result<GeneratorHandle> {
    let parts: Vec<&str> = spec.split(',').collect();
    let parse_pair = |part: &str, key: &str| -> Result<f64> {
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| CopulaError::ParseError(format!("expected `{key}:<value>`, got `{part}`")))?;
        if k != key {
            return Err(CopulaError::ParseError(format!(
                "expected key `{key}`, got `{k}`"
            )));
        }
        v.parse::<f64>()
            .map_err(|_| CopulaError::ParseError(format!("invalid number `{v}` for `{key}`")))
    };
    if parts.len() < 2 {
        return Err(CopulaError::ParseError(
            "spec must start with `family:<id>,theta:<value>`".into(),
        ));
    }
    let fam = parse_pair(parts[0], "family")?;
    if fam.fract() != 0.0 || !(1.0..=255.0).contains(&fam) {
        return Err(CopulaError::ParseError(format!("invalid family id `{fam}`")));
    }
    let theta = parse_pair(parts[1], "theta")?;
    let mut handle = make_generator(fam as u8, theta)?;
    let rest = &parts[2..];
    if rest.len() % 2 != 0 {
        return Err(CopulaError::ParseError(
            "transforms must come in `transform:<id>,alpha:<value>` pairs".into(),
        ));
    }
    for pair in rest.chunks(2) {
        let id = parse_pair(pair[0], "transform")?;
        if id.fract() != 0.0 && !(1.0..=255.0).contains(&id) {
            return Err(CopulaError::ParseError(format!(
                "invalid transform id `{id}`"
            )));
        }
        let alpha = parse_pair(pair[1], "alpha")?;
        handle = apply_transform(handle, id as u8, alpha)?;
    }
    Ok(handle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let h = parse_spec("family:4,theta:2").unwrap();
        assert_eq!(h.describe(), "family:4,theta:2");
        let h = parse_spec("family:1,theta:1,transform:5,alpha:0.5").unwrap();
        assert_eq!(h.describe(), "family:1,theta:1,transform:5,alpha:0.5");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_spec("family:4").is_err());
        assert!(parse_spec("family:99,theta:2").is_err());
        assert!(parse_spec("theta:2,family:4").is_err());
        assert!(parse_spec("family:4,theta:x").is_err());
        assert!(parse_spec("family:4,theta:2,transform:1").is_err());
    }

    #[test]
    fn bisection_inverse_matches_closed_form() {
        // Gumbel theta=2 has a closed inverse; the fallback must agree.
        let g = NelsenFamily::new(4, 2.0).unwrap();
        for &y in &[1e-6, 1e-3, 0.5, 1.0, 4.0, 100.0] {
            let exact = g.phi_inv(y);
            let num = bisect_phi_inv(&g, y);
            assert!(
                (exact - num).abs() <= 1e-12 * exact.max(1e-3),
                "y={y}: exact={exact}, bisect={num}"
            );
        }
    }

    #[test]
    fn bisection_inverse_endpoints() {
        let g = NelsenFamily::new(4, 2.0).unwrap();
        assert_eq!(bisect_phi_inv(&g, 0.0), 1.0);
        assert_eq!(bisect_phi_inv(&g, f64::INFINITY), 0.0);
        // non-strict generator: zero beyond phi(0)
        let g = NelsenFamily::new(2, 2.0).unwrap();
        assert_eq!(bisect_phi_inv(&g, 1.5), 0.0);
    }
}
