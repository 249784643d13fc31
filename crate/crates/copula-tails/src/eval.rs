//! Exact copula, rectangle, survival and union probabilities.
//!
//! Rectangle probabilities use the alternating inclusion-exclusion sum over
//! the 2^d corner evaluations, accumulated with compensated summation.  Deep
//! in the tails the sum subtracts nearly equal numbers, so results carry a
//! `cancellation_limited` flag when they fall below the noise floor of the
//! largest term.

use crate::error::{CopulaError, Result};
use crate::generator::GeneratorHandle;

pub const DEFAULT_MAX_DIM: usize = 8;

/// Half-open box (u, v] in [0,1]^d.
#[derive(Debug, Clone)]
pub struct RectangleQuery {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl RectangleQuery {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::with_max_dim(lower, upper, DEFAULT_MAX_DIM)
    }

    /// Override the 2^d cost guard.
    pub fn with_max_dim(lower: Vec<f64>, upper: Vec<f64>, max_dim: usize) -> Result<Self> {
        let d = lower.len();
        if d < 2 {
            return Err(CopulaError::DimensionTooSmall(d));
        }
        if d != upper.len() || d > max_dim {
            return Err(CopulaError::DimensionTooLarge { dim: d, cap: max_dim });
        }
        for j in 0..d {
            if !(0.0..=1.0).contains(&lower[j]) || !(0.0..=1.0).contains(&upper[j]) {
                return Err(CopulaError::DomainError {
                    name: "bounds",
                    value: lower[j].min(upper[j]),
                    domain: "[0, 1]",
                });
            }
            if lower[j] > upper[j] {
                return Err(CopulaError::InvalidRectangle(j));
            }
        }
        Ok(RectangleQuery { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// A probability together with its conditioning diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    /// True when the alternating sum lost essentially all significant digits.
    pub cancellation_limited: bool,
}

/// `C(u) = phi_inv(phi(u_1) + ... + phi(u_d))`.
pub fn copula_cdf(handle: &GeneratorHandle, u: &[f64]) -> Result<f64> {
    if u.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(u.len()));
    }
    let mut sum = 0.0;
    for &uj in u {
        if !(0.0..=1.0).contains(&uj) {
            return Err(CopulaError::DomainError {
                name: "u",
                value: uj,
                domain: "[0, 1]",
            });
        }
        if uj == 0.0 {
            return Ok(0.0);
        }
        sum += handle.phi(uj);
    }
    Ok(handle.phi_inv(sum))
}

/// Alternating sum over corner subsets with precomputed generator values
/// `a_j` (taken when j is in the subset) and `b_j` (otherwise); the sign of
/// a subset is (-1)^|subset|.
fn corner_sum(handle: &GeneratorHandle, a: &[f64], b: &[f64]) -> EvalResult {
    let d = a.len();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut max_term = 0.0f64;
    for mask in 0u32..(1u32 << d) {
        let mut arg = 0.0;
        for j in 0..d {
            arg += if mask & (1 << j) != 0 { a[j] } else { b[j] };
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * handle.phi_inv(arg);
        max_term = max_term.max(term.abs());
        let yk = term - comp;
        let t = sum + yk;
        comp = (t - sum) - yk;
        sum = t;
    }
    let cancellation_limited = max_term > 0.0 && sum.abs() < 1e3 * f64::EPSILON * max_term;
    EvalResult {
        value: sum,
        cancellation_limited,
    }
}

/// `Pr[forall j: u_j < U_j <= v_j]` via inclusion-exclusion.
pub fn rectangle_prob(handle: &GeneratorHandle, q: &RectangleQuery) -> Result<EvalResult> {
    let a: Vec<f64> = q.lower.iter().map(|&u| handle.phi(u)).collect();
    let b: Vec<f64> = q.upper.iter().map(|&v| handle.phi(v)).collect();
    Ok(corner_sum(handle, &a, &b))
}

/// `Pr[forall i: U_i > 1 - s*x_i]`, evaluated through the cancellation-safe
/// `phi(1-s*x)` path.
pub fn survival_prob(handle: &GeneratorHandle, s: f64, x: &[f64]) -> Result<EvalResult> {
    if x.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(x.len()));
    }
    if x.len() > DEFAULT_MAX_DIM {
        return Err(CopulaError::DimensionTooLarge {
            dim: x.len(),
            cap: DEFAULT_MAX_DIM,
        });
    }
    let mut a = Vec::with_capacity(x.len());
    for &xi in x {
        let sx = s * xi;
        if !(0.0..=1.0).contains(&sx) {
            return Err(CopulaError::DomainError {
                name: "s*x",
                value: sx,
                domain: "[0, 1]",
            });
        }
        a.push(handle.phi_one_minus(sx));
    }
    let b = vec![0.0; x.len()];
    Ok(corner_sum(handle, &a, &b))
}

/// `Pr[exists i: U_i >= 1 - s*x_i] = 1 - C(1 - s*x)`; accepts d >= 1.
pub fn union_exceedance_prob(handle: &GeneratorHandle, s: f64, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    let mut sum = 0.0;
    for &xi in x {
        let sx = s * xi;
        if !(0.0..=1.0).contains(&sx) {
            return Err(CopulaError::DomainError {
                name: "s*x",
                value: sx,
                domain: "[0, 1]",
            });
        }
        sum += handle.phi_one_minus(sx);
    }
    Ok(1.0 - handle.phi_inv(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::make_generator;

    #[test]
    fn independence_cdf() {
        let h = make_generator(1, 0.0).unwrap();
        let v = copula_cdf(&h, &[0.5, 0.5]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn clayton_cdf_closed_form() {
        // C(u,v) = uv/(u+v-uv) for family 1 theta=1
        let h = make_generator(1, 1.0).unwrap();
        let v = copula_cdf(&h, &[0.5, 0.5]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn countermonotone_cdf() {
        let h = make_generator(2, 1.0).unwrap();
        let v = copula_cdf(&h, &[0.3, 0.6]).unwrap();
        assert_eq!(v, 0.0);
        let v = copula_cdf(&h, &[0.7, 0.6]).unwrap();
        assert!((v - 0.3).abs() < 1e-14);
    }

    #[test]
    fn zero_coordinate_short_circuits() {
        let h = make_generator(4, 2.0).unwrap();
        assert_eq!(copula_cdf(&h, &[0.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn rectangle_independence_quadrant() {
        let h = make_generator(1, 0.0).unwrap();
        let q = RectangleQuery::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        let r = rectangle_prob(&h, &q).unwrap();
        assert!((r.value - 0.25).abs() < 1e-14);
    }

    #[test]
    fn degenerate_rectangle_is_zero() {
        let h = make_generator(4, 2.0).unwrap();
        let q = RectangleQuery::new(vec![0.3, 0.4], vec![0.3, 0.4]).unwrap();
        let r = rectangle_prob(&h, &q).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn gumbel_survival_closed_form() {
        // Pr[U1 > 1-s, U2 > 1-s] = 2s - 1 + (1-s)^(2^(1/2)) for theta=2
        let h = make_generator(4, 2.0).unwrap();
        let s = 1e-4f64;
        let want = 2.0 * s - 1.0 + (1.0 - s).powf(2f64.sqrt());
        let r = survival_prob(&h, s, &[1.0, 1.0]).unwrap();
        assert!(
            (r.value - want).abs() < 1e-12 * want,
            "got {}, want {want}",
            r.value
        );
    }

    #[test]
    fn survival_equals_rectangle() {
        let h = make_generator(5, 1.0).unwrap();
        let s = 1e-3;
        let a = survival_prob(&h, s, &[1.0, 2.0]).unwrap().value;
        let q = RectangleQuery::new(vec![1.0 - s, 1.0 - 2.0 * s], vec![1.0, 1.0]).unwrap();
        let b = rectangle_prob(&h, &q).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn union_examples() {
        let h = make_generator(1, 0.0).unwrap();
        let v = union_exceedance_prob(&h, 0.1, &[1.0, 1.0]).unwrap();
        assert!((v - 0.19).abs() < 1e-12);
        // d = 1 reduces to the uniform margin
        let v = union_exceedance_prob(&h, 0.1, &[0.5]).unwrap();
        assert!((v - 0.05).abs() < 1e-12);
        // Gumbel theta=2: 1 - (1-s)^(2^(1/2))
        let h = make_generator(4, 2.0).unwrap();
        let v = union_exceedance_prob(&h, 0.01, &[1.0, 1.0]).unwrap();
        let want = 1.0 - 0.99f64.powf(2f64.sqrt());
        assert!((v - want).abs() < 1e-12, "got {v}, want {want}");
    }

    #[test]
    fn margins_recovered() {
        let h = make_generator(1, 2.0).unwrap();
        let q = RectangleQuery::new(vec![0.2, 0.0], vec![0.7, 1.0]).unwrap();
        let r = rectangle_prob(&h, &q).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn dimension_guards() {
        let h = make_generator(1, 0.0).unwrap();
        assert!(copula_cdf(&h, &[0.5]).is_err());
        assert!(RectangleQuery::new(vec![0.0; 9], vec![1.0; 9]).is_err());
        assert!(RectangleQuery::with_max_dim(vec![0.0; 9], vec![1.0; 9], 10).is_ok());
        assert!(RectangleQuery::new(vec![0.5, 0.5], vec![0.4, 1.0]).is_err());
    }

    #[test]
    fn cancellation_flag_fires_deep() {
        // Survival of independence at s=1e-12 is ~1e-24, far below the
        // noise of the O(1) corner terms.
        let h = make_generator(1, 0.0).unwrap();
        let r = survival_prob(&h, 1e-12, &[1.0, 1.0]).unwrap();
        assert!(r.cancellation_limited, "{r:?}");
    }
}
