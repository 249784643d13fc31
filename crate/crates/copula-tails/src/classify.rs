//! Tail classification of an Archimedean generator.
//!
//! Five decision quantities drive the classification:
//!   * `-phi'(1)  = lim phi(1-s)/s`
//!   * `theta1    = -lim s phi'(1-s)/phi(1-s)`        (upper-tail index)
//!   * `phi(0)`   finite or infinite                  (strictness)
//!   * `theta0    = -lim s phi'(s)/phi(s)`            (lower-tail index)
//!   * `kappa`    = regular-variation index at infinity of
//!                  `psi = -1/D(log phi_inv)`, only relevant when the
//!                  generator is strict and `theta0 = 0`.
//!
//! The decision tree: upper tail is near-independent when `phi'(1) < 0`,
//! asymptotically independent when `phi'(1) = 0` and `theta1 = 1`, and
//! asymptotically dependent when `theta1 > 1`.  Lower tail is trivially
//! independent when `phi(0) < inf`, asymptotically independent (with rate
//! index `kappa`) when the generator is strict with `theta0 = 0`, and
//! asymptotically dependent when `theta0 > 0`.
//!
//! When a family registry provides closed forms they are authoritative
//! (exact-equality branches cannot be certified numerically); otherwise the
//! quantities are extrapolated on geometric grids and zero/one comparisons
//! use a tolerance.

use crate::error::{CopulaError, Result};
use crate::extrapolate::{aitken_iterated, limit_ratio_estimate, neville_at_zero, GridSpec, LimitEstimate};
use crate::generator::{GeneratorHandle, Kappa};

/// Upper-tail regimes (cases 1-3 of the decision tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperCase {
    /// `phi'(1) < 0`: joint exceedances factorize like independence.
    NearIndependent,
    /// `phi'(1) = 0`, `theta1 = 1`: dependent but `lambda_U = 0`.
    NearAsymptoticDependent,
    /// `theta1 > 1`: `lambda_U = 2 - 2^(1/theta1) > 0`.
    AsymptoticDependent,
}

/// Lower-tail regimes (cases 4-6 of the decision tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerCase {
    /// `phi(0) < inf`: the copula has a zero region around the lower corner.
    NonStrict,
    /// Strict with `theta0 = 0`: asymptotic independence at rate index kappa.
    AsymptoticIndependent,
    /// `theta0 > 0`: `lambda_L = 2^(-1/theta0) > 0`.
    AsymptoticDependent,
}

impl UpperCase {
    pub fn index(self) -> u8 {
        match self {
            UpperCase::NearIndependent => 1,
            UpperCase::NearAsymptoticDependent => 2,
            UpperCase::AsymptoticDependent => 3,
        }
    }
    pub fn label(self) -> &'static str {
        match self {
            UpperCase::NearIndependent => "near-independent",
            UpperCase::NearAsymptoticDependent => "near-asymptotic-dependent",
            UpperCase::AsymptoticDependent => "asymptotic-dependent",
        }
    }
}

impl LowerCase {
    pub fn index(self) -> u8 {
        match self {
            LowerCase::NonStrict => 4,
            LowerCase::AsymptoticIndependent => 5,
            LowerCase::AsymptoticDependent => 6,
        }
    }
    pub fn label(self) -> &'static str {
        match self {
            LowerCase::NonStrict => "non-strict",
            LowerCase::AsymptoticIndependent => "asymptotic-independent",
            LowerCase::AsymptoticDependent => "asymptotic-dependent",
        }
    }
}

/// Where a decision quantity came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Registry,
    Numeric,
}

/// Per-quantity estimator trace.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub quantity: &'static str,
    pub source: Source,
    pub value: f64,
    pub converged: bool,
    pub error_indicator: f64,
    pub method: String,
}

impl Diagnostic {
    fn registry(quantity: &'static str, value: f64) -> Self {
        Diagnostic {
            quantity,
            source: Source::Registry,
            value,
            converged: true,
            error_indicator: 0.0,
            method: "closed form".into(),
        }
    }

    fn numeric(quantity: &'static str, est: &LimitEstimate) -> Self {
        Diagnostic {
            quantity,
            source: Source::Numeric,
            value: est.value,
            converged: est.converged,
            error_indicator: est.error_indicator,
            method: est.method.clone(),
        }
    }
}

/// Full classification output.
#[derive(Debug, Clone)]
pub struct TailClassification {
    /// `phi'(1)` (non-positive; 0 exactly when snapped or known).
    pub dphi_at_1: f64,
    /// Upper-tail index, in `[1, inf]`.
    pub theta1: f64,
    /// `phi(0)`; `inf` for strict generators.
    pub phi_at_zero: f64,
    /// Lower-tail index, in `[0, inf]`.
    pub theta0: f64,
    /// Rate index for the strict asymptotically independent lower tail.
    pub kappa: Kappa,
    pub upper_case: UpperCase,
    pub lower_case: LowerCase,
    /// True when any decision used a numeric tolerance rather than a closed
    /// form ("numeric, tolerance-based").
    pub tolerance_based: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Classifier configuration.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Use closed-form registry values when the generator provides them.
    pub use_registry: bool,
    /// Tolerance for equality-with-zero decisions on extrapolated limits.
    pub zero_tol: f64,
    pub grid: GridSpec,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            use_registry: true,
            zero_tol: 1e-3,
            grid: GridSpec::CLASSIFIER,
        }
    }
}

/// Estimated upper-tail quantities.
#[derive(Debug, Clone)]
pub struct UpperEstimate {
    pub dphi_at_1: f64,
    pub theta1: f64,
    pub diagnostics: Vec<Diagnostic>,
}

/// Estimated lower-tail quantities.
#[derive(Debug, Clone)]
pub struct LowerEstimate {
    pub phi_at_zero: f64,
    pub theta0: f64,
    pub kappa: Kappa,
    pub diagnostics: Vec<Diagnostic>,
}

/// Accept an extrapolated estimate unless its self-consistency error is far
/// beyond the comparison tolerances used downstream.
fn usable(est: &LimitEstimate) -> bool {
    est.diverged || est.error_indicator <= 2e-2 * est.value.abs().max(0.1)
}

/// `phi'(1)` and `theta1` by pure numerics.
pub fn estimate_upper_quantities(handle: &GeneratorHandle, opts: &ClassifyOptions) -> Result<UpperEstimate> {
    let mut diagnostics = Vec::new();

    let dphi_est = limit_ratio_estimate(|s| -handle.phi_one_minus(s) / s, &opts.grid)?;
    diagnostics.push(Diagnostic::numeric("dphi_at_1", &dphi_est));
    if !usable(&dphi_est) {
        return Err(CopulaError::Indeterminate("phi'(1) estimator did not converge".into()));
    }
    let mut dphi_at_1 = dphi_est.value.min(0.0);
    if dphi_at_1.abs() < opts.zero_tol {
        dphi_at_1 = 0.0;
    }

    let theta1 = if dphi_at_1 < 0.0 {
        // Convexity: a strictly negative one-sided slope at 1 forces
        // theta1 = 1, no estimation needed.
        diagnostics.push(Diagnostic {
            quantity: "theta1",
            source: Source::Numeric,
            value: 1.0,
            converged: true,
            error_indicator: 0.0,
            method: "implied by phi'(1) < 0".into(),
        });
        1.0
    } else {
        let est = limit_ratio_estimate(
            |s| -s * handle.dphi_one_minus(s) / handle.phi_one_minus(s),
            &opts.grid,
        )?;
        diagnostics.push(Diagnostic::numeric("theta1", &est));
        if !usable(&est) {
            return Err(CopulaError::Indeterminate("theta1 estimator did not converge".into()));
        }
        if est.diverged {
            f64::INFINITY
        } else if (est.value - 1.0).abs() < opts.zero_tol {
            1.0
        } else {
            est.value.max(1.0)
        }
    };

    Ok(UpperEstimate {
        dphi_at_1,
        theta1,
        diagnostics,
    })
}

/// Decide `phi(0)` finiteness by probing far below the working grid: a
/// strict generator keeps growing (or overflows), a non-strict one
/// stagnates to machine precision.
fn probe_phi_at_zero(handle: &GeneratorHandle) -> (f64, Diagnostic) {
    let probes = [1e-50, 1e-100, 1e-150, 1e-200, 1e-250, 1e-300];
    let vals: Vec<f64> = probes.iter().map(|&s| handle.phi(s)).collect();
    let finite = vals.iter().all(|v| v.is_finite()) && {
        let scale = vals[5].abs().max(1.0);
        (vals[5] - vals[3]).abs() <= 1e-7 * scale
    };
    let value = if finite { vals[5] } else { f64::INFINITY };
    let diag = Diagnostic {
        quantity: "phi_at_zero",
        source: Source::Numeric,
        value,
        converged: true,
        error_indicator: if finite { (vals[5] - vals[3]).abs() } else { 0.0 },
        method: "deep-probe stagnation test".into(),
    };
    (value, diag)
}

/// Regular-variation index of `psi` at infinity via doubling ratios
/// `log[psi(2t)/psi(t)] / log 2` along `t_k = phi(s_k)`, using the identity
/// `psi(phi(s)) = -s phi'(s)` so that `phi_inv` is never differentiated.
fn estimate_kappa(handle: &GeneratorHandle, opts: &ClassifyOptions) -> Result<(f64, Diagnostic)> {
    // Kappa converges like 1/log(phi(s)), and phi can grow as slowly as
    // -theta*log(s); a grid down to 1e-14 only reaches log(phi) ~ 2 there.
    // Closed-form phi/phi_inv are cancellation-safe at extreme arguments, so
    // sample far deeper (same density, so the divergence heuristic keeps its
    // step scale) and let the validity guards cut the grid off where the
    // doubled inverse underflows.
    let kappa_grid = GridSpec::new(opts.grid.start, 0.1, 300);
    let mut ts = Vec::new();
    let mut fs = Vec::new();
    for s in kappa_grid.points() {
        let t = handle.phi(s);
        if !t.is_finite() || t <= 0.0 {
            break;
        }
        let sigma2 = handle.phi_inv(2.0 * t);
        if !(sigma2 > 0.0) || sigma2 >= 1.0 {
            break;
        }
        let psi1 = -s * handle.dphi(s);
        let psi2 = -sigma2 * handle.dphi(sigma2);
        if !(psi1 > 0.0) || !(psi2 > 0.0) || !psi1.is_finite() || !psi2.is_finite() {
            break;
        }
        let f = (psi2 / psi1).ln() / std::f64::consts::LN_2;
        if !f.is_finite() {
            break;
        }
        ts.push(t);
        fs.push(f);
    }
    if fs.len() < 4 {
        return Err(CopulaError::Indeterminate(
            "kappa estimator: too few valid doubling ratios".into(),
        ));
    }

    // Divergence to -inf: the ratios keep falling with steps that do not
    // die out (a finite index would make them settle).
    let n = fs.len();
    let steps: Vec<f64> = fs.windows(2).map(|w| w[0] - w[1]).collect();
    let monotone_down = steps.iter().all(|&d| d >= 0.0);
    let last_steps_alive = steps[n - 4..].iter().all(|&d| d > 0.04);
    if monotone_down && last_steps_alive && fs[n - 1] < -1.5 {
        let diag = Diagnostic {
            quantity: "kappa",
            source: Source::Numeric,
            value: f64::NEG_INFINITY,
            converged: true,
            error_indicator: 0.0,
            method: "monotone divergence of doubling ratios".into(),
        };
        return Ok((f64::NEG_INFINITY, diag));
    }

    let (ait_val, ait_err) = aitken_iterated(&fs);
    let mut best = (ait_val, ait_err, "iterated aitken");
    // Neville in 1/log t, valid once log t is bounded away from zero.  The
    // grid is dense in s but log t moves slowly, so walk from the deepest
    // sample upward and keep nodes separated in log t; near-coincident nodes
    // would make the tableau ill-conditioned.
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut last_logt = f64::INFINITY;
    for (&t, &f) in ts.iter().zip(&fs).rev() {
        let lt = t.ln();
        if lt <= 0.5 {
            break;
        }
        if last_logt - lt >= 0.25 {
            nodes.push((1.0 / lt, f));
            last_logt = lt;
        }
        if nodes.len() == 8 {
            break;
        }
    }
    if nodes.len() >= 4 {
        nodes.reverse();
        let xs: Vec<f64> = nodes.iter().map(|&(x, _)| x).collect();
        let ys: Vec<f64> = nodes.iter().map(|&(_, y)| y).collect();
        let (nv, ne) = neville_at_zero(&xs, &ys);
        if nv.is_finite() && ne < best.1 {
            best = (nv, ne, "neville in 1/log t");
        }
    }
    // Second model: ratios whose error dies like a power of t (generators
    // where psi is an exact power up to 1/t corrections).  Nodes a factor of
    // two apart in t keep the tableau conditioned.
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    let mut last_logt = f64::INFINITY;
    for (&t, &f) in ts.iter().zip(&fs).rev() {
        if t <= 1.0 {
            break;
        }
        if last_logt - t.ln() >= std::f64::consts::LN_2 {
            nodes.push((1.0 / t, f));
            last_logt = t.ln();
        }
        if nodes.len() == 8 {
            break;
        }
    }
    if nodes.len() >= 4 {
        nodes.reverse();
        let xs: Vec<f64> = nodes.iter().map(|&(x, _)| x).collect();
        let ys: Vec<f64> = nodes.iter().map(|&(_, y)| y).collect();
        let (nv, ne) = neville_at_zero(&xs, &ys);
        if nv.is_finite() && ne < best.1 {
            best = (nv, ne, "neville in 1/t");
        }
    }
    let (mut value, err, method) = best;
    if !value.is_finite() || err > 2e-2 * value.abs().max(0.1) {
        return Err(CopulaError::Indeterminate("kappa estimator did not converge".into()));
    }
    if value.abs() < opts.zero_tol {
        value = 0.0;
    }
    value = value.min(1.0);
    let diag = Diagnostic {
        quantity: "kappa",
        source: Source::Numeric,
        value,
        converged: err <= 1e-3 * value.abs().max(0.1),
        error_indicator: err,
        method: method.into(),
    };
    Ok((value, diag))
}

/// `phi(0)`, `theta0` and (in the strict independent case) `kappa` by pure
/// numerics.
pub fn estimate_lower_quantities(handle: &GeneratorHandle, opts: &ClassifyOptions) -> Result<LowerEstimate> {
    let mut diagnostics = Vec::new();

    let (phi_at_zero, diag) = probe_phi_at_zero(handle);
    diagnostics.push(diag);

    let theta0 = if phi_at_zero.is_finite() {
        // A non-strict generator always has theta0 = 0.
        diagnostics.push(Diagnostic {
            quantity: "theta0",
            source: Source::Numeric,
            value: 0.0,
            converged: true,
            error_indicator: 0.0,
            method: "implied by phi(0) < inf".into(),
        });
        0.0
    } else {
        // Retry on a shallow grid when phi overflows on the whole deep grid
        // (doubly exponential generators): the truncated shallow prefix still
        // identifies divergence.
        let f = |s: f64| -s * handle.dphi(s) / handle.phi(s);
        let est = limit_ratio_estimate(f, &opts.grid)
            .or_else(|_| limit_ratio_estimate(f, &GridSpec::new(0.5, 0.5, 30)))?;
        diagnostics.push(Diagnostic::numeric("theta0", &est));
        if !usable(&est) {
            return Err(CopulaError::Indeterminate("theta0 estimator did not converge".into()));
        }
        if est.diverged {
            f64::INFINITY
        } else if est.value.abs() < opts.zero_tol {
            0.0
        } else {
            est.value.max(0.0)
        }
    };

    let kappa = if phi_at_zero.is_finite() || theta0 > 0.0 {
        Kappa::NotApplicable
    } else {
        let (v, diag) = estimate_kappa(handle, opts)?;
        diagnostics.push(diag);
        Kappa::Known(v)
    };

    Ok(LowerEstimate {
        phi_at_zero,
        theta0,
        kappa,
        diagnostics,
    })
}

/// Classify with default options (registry-first, tolerance 1e-3).
pub fn classify(handle: &GeneratorHandle) -> Result<TailClassification> {
    classify_with(handle, &ClassifyOptions::default())
}

/// Classify with explicit options.
pub fn classify_with(handle: &GeneratorHandle, opts: &ClassifyOptions) -> Result<TailClassification> {
    let registry = if opts.use_registry { handle.registry() } else { None };
    let mut diagnostics = Vec::new();
    let mut tolerance_based = false;

    // Upper tail.
    let (dphi_at_1, theta1) = match &registry {
        Some(reg) => {
            let d = -reg.neg_dphi1;
            diagnostics.push(Diagnostic::registry("dphi_at_1", d));
            diagnostics.push(Diagnostic::registry("theta1", reg.theta1));
            (d, reg.theta1)
        }
        None => {
            let est = estimate_upper_quantities(handle, opts)?;
            diagnostics.extend(est.diagnostics);
            tolerance_based = true;
            (est.dphi_at_1, est.theta1)
        }
    };
    let upper_case = if dphi_at_1 < 0.0 {
        UpperCase::NearIndependent
    } else if theta1 > 1.0 {
        UpperCase::AsymptoticDependent
    } else {
        UpperCase::NearAsymptoticDependent
    };

    // Lower tail.  A registry may still leave theta0/kappa open (the
    // exponential transform has no general closed forms there).
    let (phi_at_zero, theta0) = match &registry {
        Some(reg) => {
            diagnostics.push(Diagnostic::registry("phi_at_zero", reg.phi_at_zero));
            let theta0 = match reg.theta0 {
                Some(t0) => {
                    diagnostics.push(Diagnostic::registry("theta0", t0));
                    t0
                }
                None if reg.phi_at_zero.is_finite() => {
                    diagnostics.push(Diagnostic::registry("theta0", 0.0));
                    0.0
                }
                None => {
                    let est = limit_ratio_estimate(|s| -s * handle.dphi(s) / handle.phi(s), &opts.grid)?;
                    diagnostics.push(Diagnostic::numeric("theta0", &est));
                    if !usable(&est) {
                        return Err(CopulaError::Indeterminate(
                            "theta0 estimator did not converge".into(),
                        ));
                    }
                    tolerance_based = true;
                    if est.diverged {
                        f64::INFINITY
                    } else if est.value.abs() < opts.zero_tol {
                        0.0
                    } else {
                        est.value.max(0.0)
                    }
                }
            };
            (reg.phi_at_zero, theta0)
        }
        None => {
            let est = estimate_lower_quantities(handle, opts)?;
            // kappa handled below from scratch so registry/numeric paths share
            // the same branch; keep the numeric diagnostics except kappa's.
            for d in est.diagnostics {
                if d.quantity != "kappa" {
                    diagnostics.push(d);
                }
            }
            tolerance_based = true;
            (est.phi_at_zero, est.theta0)
        }
    };

    let lower_case = if phi_at_zero.is_finite() {
        LowerCase::NonStrict
    } else if theta0 > 0.0 {
        LowerCase::AsymptoticDependent
    } else {
        LowerCase::AsymptoticIndependent
    };

    let kappa = if lower_case != LowerCase::AsymptoticIndependent {
        Kappa::NotApplicable
    } else {
        match registry.as_ref().map(|r| r.kappa) {
            Some(Kappa::Known(v)) => {
                diagnostics.push(Diagnostic::registry("kappa", v));
                Kappa::Known(v)
            }
            Some(Kappa::NotApplicable) => Kappa::NotApplicable,
            _ => {
                let (v, diag) = estimate_kappa(handle, opts)?;
                diagnostics.push(diag);
                tolerance_based = true;
                Kappa::Known(v)
            }
        }
    };

    Ok(TailClassification {
        dphi_at_1,
        theta1,
        phi_at_zero,
        theta0,
        kappa,
        upper_case,
        lower_case,
        tolerance_based,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::make_generator;

    fn numeric_opts() -> ClassifyOptions {
        ClassifyOptions {
            use_registry: false,
            ..ClassifyOptions::default()
        }
    }

    #[test]
    fn registry_gumbel() {
        let h = make_generator(4, 2.0).unwrap();
        let c = classify(&h).unwrap();
        assert_eq!(c.upper_case, UpperCase::AsymptoticDependent);
        assert_eq!(c.lower_case, LowerCase::AsymptoticIndependent);
        assert_eq!(c.theta1, 2.0);
        assert_eq!(c.kappa, Kappa::Known(0.5));
        assert!(!c.tolerance_based);
    }

    #[test]
    fn registry_clayton() {
        let h = make_generator(1, 2.0).unwrap();
        let c = classify(&h).unwrap();
        assert_eq!(c.upper_case, UpperCase::NearIndependent);
        assert_eq!(c.lower_case, LowerCase::AsymptoticDependent);
        assert_eq!(c.dphi_at_1, -1.0);
        assert_eq!(c.theta0, 2.0);
        assert_eq!(c.kappa, Kappa::NotApplicable);
    }

    #[test]
    fn registry_non_strict() {
        let h = make_generator(2, 2.0).unwrap();
        let c = classify(&h).unwrap();
        assert_eq!(c.upper_case, UpperCase::AsymptoticDependent);
        assert_eq!(c.theta1, 2.0);
        assert_eq!(c.lower_case, LowerCase::NonStrict);
        assert_eq!(c.phi_at_zero, 1.0);
        assert_eq!(c.theta0, 0.0);
    }

    #[test]
    fn numeric_frank() {
        let h = make_generator(5, 1.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert!(c.tolerance_based);
        assert_eq!(c.upper_case, UpperCase::NearIndependent);
        let want = -1.0 / (1f64.exp() - 1.0);
        assert!(
            (c.dphi_at_1 - want).abs() < 1e-2 * want.abs(),
            "dphi1 {} want {want}",
            c.dphi_at_1
        );
        assert_eq!(c.theta1, 1.0);
        assert_eq!(c.lower_case, LowerCase::AsymptoticIndependent);
        assert_eq!(c.theta0, 0.0);
        assert_eq!(c.kappa, Kappa::Known(0.0));
    }

    #[test]
    fn numeric_gumbel() {
        let h = make_generator(4, 2.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert_eq!(c.dphi_at_1, 0.0);
        assert!((c.theta1 - 2.0).abs() < 1e-2, "theta1 {}", c.theta1);
        assert_eq!(c.upper_case, UpperCase::AsymptoticDependent);
        assert_eq!(c.lower_case, LowerCase::AsymptoticIndependent);
        match c.kappa {
            Kappa::Known(v) => assert!((v - 0.5).abs() < 1e-2, "kappa {v}"),
            other => panic!("kappa {other:?}"),
        }
    }

    #[test]
    fn numeric_clayton() {
        let h = make_generator(1, 2.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert_eq!(c.upper_case, UpperCase::NearIndependent);
        assert!((c.dphi_at_1 + 1.0).abs() < 1e-2);
        assert_eq!(c.lower_case, LowerCase::AsymptoticDependent);
        assert!((c.theta0 - 2.0).abs() < 2e-2, "theta0 {}", c.theta0);
    }

    #[test]
    fn numeric_kappa_minus_infinity() {
        let h = make_generator(9, 1.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert_eq!(c.lower_case, LowerCase::AsymptoticIndependent);
        assert_eq!(c.kappa, Kappa::Known(f64::NEG_INFINITY));
    }

    #[test]
    fn numeric_non_strict_probe() {
        let h = make_generator(2, 2.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert_eq!(c.lower_case, LowerCase::NonStrict);
        assert!((c.phi_at_zero - 1.0).abs() < 1e-9);
        assert_eq!(c.theta0, 0.0);
    }

    #[test]
    fn numeric_theta1_infinite() {
        let h = make_generator(18, 2.0).unwrap();
        let c = classify_with(&h, &numeric_opts()).unwrap();
        assert_eq!(c.upper_case, UpperCase::AsymptoticDependent);
        assert_eq!(c.theta1, f64::INFINITY);
    }

    #[test]
    fn invariants_hold() {
        for (fam, theta) in [(1u8, -0.5), (3, 0.5), (4, 3.0), (12, 1.5), (19, 1.0), (23, 1.0)] {
            let h = make_generator(fam, theta).unwrap();
            for opts in [ClassifyOptions::default(), numeric_opts()] {
                let c = classify_with(&h, &opts).unwrap();
                assert!(c.theta1 >= 1.0, "family {fam}: theta1 {}", c.theta1);
                assert!(c.theta0 >= 0.0);
                assert!(c.dphi_at_1 <= 0.0);
                if c.dphi_at_1 < 0.0 {
                    assert_eq!(c.theta1, 1.0, "family {fam}");
                }
                if c.phi_at_zero.is_finite() {
                    assert_eq!(c.theta0, 0.0);
                    assert_eq!(c.lower_case, LowerCase::NonStrict);
                }
                if let Kappa::Known(v) = c.kappa {
                    assert!(v <= 1.0, "family {fam}: kappa {v}");
                }
            }
        }
    }
}
