//! Asymptotic limit formulas and auxiliary functions.
//!
//! Every operation here evaluates the *right-hand side* of one of the limit
//! statements; the convergence harness pairs each formula with its
//! finite-scale probability and scaling.  The tail indices (`theta0`,
//! `theta1`, `kappa`) are explicit inputs so that formula correctness is
//! testable independently of the estimators.

use std::sync::Arc;

use crate::classify::{LowerCase, TailClassification, UpperCase};
use crate::error::{CopulaError, Result};
use crate::generator::{dk_phi_inv, Generator, GeneratorHandle, Kappa};
use crate::quadrature::nested_adaptive;

/// Pairwise tail-dependence and tail-order coefficients.
#[derive(Debug, Clone, Copy)]
pub struct TailCoefficients {
    pub lambda_l: f64,
    pub lambda_u: f64,
    pub eta_l: f64,
    pub eta_u: f64,
}

/// Coefficients from a classification.
pub fn tail_coefficients(c: &TailClassification) -> Result<TailCoefficients> {
    let lambda_l = match c.lower_case {
        LowerCase::AsymptoticDependent => {
            if c.theta0.is_infinite() {
                1.0
            } else {
                2f64.powf(-1.0 / c.theta0)
            }
        }
        _ => 0.0,
    };
    let lambda_u = if c.theta1.is_infinite() {
        1.0
    } else {
        2.0 - 2f64.powf(1.0 / c.theta1)
    };
    let eta_l = match c.lower_case {
        LowerCase::NonStrict => 0.0,
        LowerCase::AsymptoticDependent => 1.0,
        LowerCase::AsymptoticIndependent => match c.kappa {
            Kappa::Known(k) => {
                if k == f64::NEG_INFINITY {
                    0.0
                } else {
                    2f64.powf(k - 1.0)
                }
            }
            _ => return Err(CopulaError::KappaMissing),
        },
    };
    let eta_u = match c.upper_case {
        UpperCase::NearIndependent => 0.5,
        _ => 1.0,
    };
    Ok(TailCoefficients {
        lambda_l,
        lambda_u,
        eta_l,
        eta_u,
    })
}

fn check_subset(i_set: &[usize], d: usize) -> Result<()> {
    if i_set.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    let mut seen = vec![false; d];
    for &i in i_set {
        if i >= d || seen[i] {
            return Err(CopulaError::DomainError {
                name: "subset",
                value: i as f64,
                domain: "distinct indices below d",
            });
        }
        seen[i] = true;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Lower tail, asymptotic dependence.
// ---------------------------------------------------------------------------

/// `lim s^{-1} Pr[forall i: U_i <= s x_i]`: `0` at `theta0 = 0`,
/// `(sum x_i^{-theta0})^{-1/theta0}` for finite positive `theta0`, `min x`
/// at `theta0 = inf`.
pub fn lower_ad_limit(theta0: f64, x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(x.len()));
    }
    if theta0 < 0.0 {
        return Err(CopulaError::DomainError {
            name: "theta0",
            value: theta0,
            domain: "[0, inf]",
        });
    }
    if theta0 == 0.0 {
        return Ok(0.0);
    }
    if theta0.is_infinite() {
        return Ok(x.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    let sum: f64 = x.iter().map(|&v| v.powf(-theta0)).sum();
    Ok(sum.powf(-1.0 / theta0))
}

/// Limiting conditional CDF of `(U_i / s)` given `U_i <= s x_i` on `I`:
/// `((sum_{I^c} y_i^-t0 + sum_I (x_i ^ y_i)^-t0) / sum_I x_i^-t0)^(-1/t0)`,
/// with the min form at `theta0 = inf`.  `x` is indexed along `i_set`, `y`
/// along all of `1..d`.
pub fn lower_ad_conditional(theta0: f64, i_set: &[usize], x: &[f64], y: &[f64]) -> Result<f64> {
    let d = y.len();
    check_subset(i_set, d)?;
    if x.len() != i_set.len() {
        return Err(CopulaError::DomainError {
            name: "x",
            value: x.len() as f64,
            domain: "one entry per subset index",
        });
    }
    if theta0 <= 0.0 {
        return Err(CopulaError::NotAsymptoticallyDependent);
    }
    let in_i = {
        let mut m = vec![false; d];
        for &i in i_set {
            m[i] = true;
        }
        m
    };
    if theta0.is_infinite() {
        let mut num = f64::INFINITY;
        let mut den = f64::INFINITY;
        for (j, &i) in i_set.iter().enumerate() {
            num = num.min(x[j].min(y[i]));
            den = den.min(x[j]);
        }
        for (i, &yi) in y.iter().enumerate() {
            if !in_i[i] {
                num = num.min(yi);
            }
        }
        return Ok(num / den);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &i) in i_set.iter().enumerate() {
        num += x[j].min(y[i]).powf(-theta0);
        den += x[j].powf(-theta0);
    }
    for (i, &yi) in y.iter().enumerate() {
        if !in_i[i] {
            num += yi.powf(-theta0);
        }
    }
    Ok((num / den).powf(-1.0 / theta0))
}

/// Exact-zero-region thresholds of a non-strict generator: the diagonal
/// copula value `C(s, ..., s)` vanishes for `s` at or below the returned
/// `(pairwise, d-variate)` thresholds `phi_inv(phi(0)/2)` and
/// `phi_inv(phi(0)/d)`.
pub fn zero_region_threshold(handle: &GeneratorHandle, d: usize) -> Result<(f64, f64)> {
    let phi0 = handle.phi_at_zero();
    if !phi0.is_finite() {
        return Err(CopulaError::StrictGenerator);
    }
    if d < 2 {
        return Err(CopulaError::DimensionTooSmall(d));
    }
    Ok((handle.phi_inv(phi0 / 2.0), handle.phi_inv(phi0 / d as f64)))
}

// ---------------------------------------------------------------------------
// Lower tail, strict asymptotic independence.
// ---------------------------------------------------------------------------

/// `psi(phi(s)) = -s phi'(s)`: the auxiliary function `psi = -1/D(log
/// phi_inv)` evaluated at `t = phi(s)` without differentiating `phi_inv`.
pub fn psi_at_phi(handle: &GeneratorHandle, s: f64) -> f64 {
    -s * handle.dphi(s)
}

/// Scaling of the strict asymptotically independent lower tail:
/// `phi_inv(m * phi(s))` for a subset of size `m`.
pub fn ai_scaling(handle: &GeneratorHandle, m: usize, s: f64) -> f64 {
    handle.phi_inv(m as f64 * handle.phi(s))
}

/// `lim Pr[forall i in I: U_i <= s x_i] / phi_inv(|I| phi(s)) =
/// prod x_i^(|I|^-kappa)`.
pub fn lower_ai_rate_limit(kappa: f64, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    if kappa == f64::NEG_INFINITY {
        return Err(CopulaError::KappaMinusInfinity);
    }
    if !(kappa <= 1.0) {
        return Err(CopulaError::DomainError {
            name: "kappa",
            value: kappa,
            domain: "[-inf, 1]",
        });
    }
    let e = (x.len() as f64).powf(-kappa);
    Ok(x.iter().map(|&v| v.powf(e)).product())
}

/// Conditional normalization `chi_s(y) = phi_inv(y^-1 psi(phi(s)))`.
pub fn chi_s(handle: &GeneratorHandle, s: f64, y: f64) -> f64 {
    handle.phi_inv(psi_at_phi(handle, s) / y)
}

/// Limiting conditional probability in the strict asymptotically
/// independent case: `prod_I (y_i/x_i ^ 1)^(m^-kappa) * prod_{I^c}
/// exp(-m^-kappa / y_i)` with `m = |I|`.
pub fn lower_ai_conditional(kappa: f64, i_set: &[usize], x: &[f64], y: &[f64]) -> Result<f64> {
    let d = y.len();
    check_subset(i_set, d)?;
    if x.len() != i_set.len() {
        return Err(CopulaError::DomainError {
            name: "x",
            value: x.len() as f64,
            domain: "one entry per subset index",
        });
    }
    if kappa == f64::NEG_INFINITY {
        return Err(CopulaError::KappaMinusInfinity);
    }
    let e = (i_set.len() as f64).powf(-kappa);
    let in_i = {
        let mut m = vec![false; d];
        for &i in i_set {
            m[i] = true;
        }
        m
    };
    let mut p = 1.0;
    for (j, &i) in i_set.iter().enumerate() {
        p *= (y[i] / x[j]).min(1.0).powf(e);
    }
    for (i, &yi) in y.iter().enumerate() {
        if !in_i[i] {
            p *= (-e / yi).exp();
        }
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// Upper tail, asymptotic dependence.
// ---------------------------------------------------------------------------

/// `r_k(u; theta1) = sum_{J != 0} (-1)^(|J|-1) (sum_J u_i^theta1)^(1/theta1)`
/// for finite `theta1 > 1`, `min(u)` at `theta1 = inf`.  At `theta1 = 1` the
/// alternating sum telescopes to `u_1` for `k = 1` and `0` for `k >= 2`.
pub fn upper_r(theta1: f64, u: &[f64]) -> Result<f64> {
    if u.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    if !(theta1 >= 1.0) {
        return Err(CopulaError::DomainError {
            name: "theta1",
            value: theta1,
            domain: "[1, inf]",
        });
    }
    if theta1.is_infinite() {
        return Ok(u.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    let k = u.len();
    let mut acc = 0.0f64;
    for mask in 1u32..(1u32 << k) {
        let mut sum = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += ui.powf(theta1);
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * sum.powf(1.0 / theta1);
    }
    Ok(acc)
}

/// `lim s^-1 Pr[forall i in I: U_i >= 1 - s x_i]` for `|I| >= 2`.
pub fn upper_ad_limit(theta1: f64, x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(x.len()));
    }
    if theta1 == 1.0 {
        return Ok(0.0);
    }
    upper_r(theta1, x)
}

/// Limiting conditional distribution of `(1 - U_i)/s` given exceedances on
/// `I`: `r_d(z)/r_|I|(x)` with `z_i = x_i ^ y_i` on `I` and `z_i = y_i` on
/// `I^c`.  Requires `theta1 > 1`.
pub fn upper_ad_conditional(theta1: f64, i_set: &[usize], x: &[f64], y: &[f64]) -> Result<f64> {
    let d = y.len();
    check_subset(i_set, d)?;
    if x.len() != i_set.len() {
        return Err(CopulaError::DomainError {
            name: "x",
            value: x.len() as f64,
            domain: "one entry per subset index",
        });
    }
    if !(theta1 > 1.0) {
        return Err(CopulaError::WrongCase {
            expected: "theta1 > 1 (upper asymptotic dependence)".into(),
            got: format!("theta1 = {theta1}"),
        });
    }
    let mut z = y.to_vec();
    for (j, &i) in i_set.iter().enumerate() {
        z[i] = x[j].min(y[i]);
    }
    Ok(upper_r(theta1, &z)? / upper_r(theta1, x)?)
}

// ---------------------------------------------------------------------------
// Upper tail, near independence.
// ---------------------------------------------------------------------------

/// `lim s^-|I| Pr[forall I: U_i >= 1 - s x_i; forall I^c: U_i <= y_i] =
/// |phi'(1)|^|I| prod_I x_i * (-D)^|I| phi_inv(sum_{I^c} phi(y_i))`.
///
/// `dphi_at_1` is the classification quantity `phi'(1)` (must be < 0);
/// `x` has one entry per index of `I`, `y` one entry per index of `I^c`.
pub fn near_indep_limit(
    handle: &GeneratorHandle,
    dphi_at_1: f64,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    if x.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    if !(dphi_at_1 < 0.0) {
        return Err(CopulaError::WrongCase {
            expected: "phi'(1) < 0 (near independence)".into(),
            got: format!("phi'(1) = {dphi_at_1}"),
        });
    }
    let m = x.len() as u32;
    let arg: f64 = y.iter().map(|&v| handle.phi(v)).sum();
    let dk = dk_phi_inv(handle, arg, m)?;
    Ok(dphi_at_1.abs().powi(m as i32) * x.iter().product::<f64>() * dk)
}

/// Conditional form: `prod_I y_i * (-D)^|I| phi_inv(sum_{I^c} phi(y_ic)) /
/// (-D)^|I| phi_inv(0)`, for `y_i` in `(0,1]`.  `y_in_i` are the entries on
/// `I`, `y_out` the entries on `I^c`.
pub fn near_indep_conditional(
    handle: &GeneratorHandle,
    y_in_i: &[f64],
    y_out: &[f64],
) -> Result<f64> {
    if y_in_i.is_empty() {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    let m = y_in_i.len() as u32;
    let norm = dk_phi_inv(handle, 0.0, m)?;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(CopulaError::DegenerateLimit { order: m });
    }
    let arg: f64 = y_out.iter().map(|&v| handle.phi(v)).sum();
    let dk = dk_phi_inv(handle, arg, m)?;
    Ok(y_in_i.iter().product::<f64>() * dk / norm)
}

/// Generator of the limiting conditional copula of `(U_i)_{i in I^c}`:
/// the inverse of `y -> (-D)^m phi_inv(y) / (-D)^m phi_inv(0)`.
struct NormalizedDerivInv {
    base: GeneratorHandle,
    m: u32,
    norm: f64,
}

impl NormalizedDerivInv {
    fn inv(&self, y: f64) -> f64 {
        match dk_phi_inv(&self.base, y, self.m) {
            Ok(v) => (v / self.norm).clamp(0.0, 1.0),
            Err(_) => f64::NAN,
        }
    }
}

impl Generator for NormalizedDerivInv {
    fn phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        if t <= 0.0 {
            return self.phi_at_zero();
        }
        // self.inv is decreasing from 1 at y = 0; bracket then bisect.
        let mut hi = 1.0;
        while self.inv(hi) > t {
            hi *= 2.0;
            if hi > 1e15 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.inv(mid) > t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    fn dphi(&self, t: f64) -> f64 {
        let h = 1e-6 * t.min(1.0 - t).max(1e-9);
        (self.phi(t + h) - self.phi(t - h)) / (2.0 * h)
    }

    fn phi_inv(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 1.0;
        }
        self.inv(y)
    }

    fn phi_at_zero(&self) -> f64 {
        // Finite exactly when the normalized derivative hits zero at finite
        // argument (truncated inverses); probe, then bisect the boundary.
        let probe = 1e6;
        if self.inv(probe) > 0.0 {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0, probe);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.inv(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn describe(&self) -> String {
        format!("limiting(order={}, base={})", self.m, self.base.describe())
    }
}

/// Construct the limiting generator `((-D)^m phi_inv(.) / (-D)^m
/// phi_inv(0))^(-1)` as a full generator handle.
pub fn limiting_generator(handle: &GeneratorHandle, m: u32) -> Result<GeneratorHandle> {
    if m == 0 {
        return Err(CopulaError::DimensionTooSmall(0));
    }
    let norm = dk_phi_inv(handle, 0.0, m)?;
    if !norm.is_finite() {
        return Err(CopulaError::DerivativeResolution { order: m, y: 0.0 });
    }
    if !(norm > 0.0) {
        return Err(CopulaError::DegenerateLimit { order: m });
    }
    Ok(GeneratorHandle::new(Arc::new(NormalizedDerivInv {
        base: handle.clone(),
        m,
        norm,
    })))
}

// ---------------------------------------------------------------------------
// Upper tail, near asymptotic dependence.
// ---------------------------------------------------------------------------

/// `ell(s) = phi(1-s)/s`, increasing and slowly varying at zero in the
/// near-asymptotic-dependence case.
pub fn nad_ell(handle: &GeneratorHandle, s: f64) -> f64 {
    handle.phi_one_minus(s) / s
}

/// `eta_s(x) = ell_inverse(ell(s)/x)` by bisection on the increasing `ell`.
pub fn eta_s(handle: &GeneratorHandle, s: f64, x: f64) -> Result<f64> {
    if !(0.0 < x && x <= 1.0) {
        return Err(CopulaError::DomainError {
            name: "x",
            value: x,
            domain: "(0, 1]",
        });
    }
    let target = nad_ell(handle, s) / x;
    // Monotonicity sanity check across the working bracket.
    let hi0 = 1.0 - 1e-9;
    if !(nad_ell(handle, hi0) >= nad_ell(handle, s) && nad_ell(handle, s) >= nad_ell(handle, s * 0.5)) {
        return Err(CopulaError::WrongCase {
            expected: "ell increasing (near asymptotic dependence)".into(),
            got: "ell not increasing on bracket".into(),
        });
    }
    if nad_ell(handle, hi0) < target {
        return Ok(hi0);
    }
    // Bisect in log t between s (ell(s) <= target since x <= 1) and ~1.
    let (mut lo, mut hi) = (s.ln(), hi0.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if nad_ell(handle, mid.exp()) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Single-conditioning limit: `x_1 * min(x_2, ..., x_d)`.
pub fn nad_single_cond_limit(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(x.len()));
    }
    for &xi in x {
        if !(0.0 < xi && xi <= 1.0) {
            return Err(CopulaError::DomainError {
                name: "x",
                value: xi,
                domain: "(0, 1]",
            });
        }
    }
    Ok(x[0] * x[1..].iter().cloned().fold(f64::INFINITY, f64::min))
}

/// `L(s) = -phi'(1-s) - phi(1-s)/s` (slowly varying under the joint-limit
/// assumptions).
pub fn nad_l(handle: &GeneratorHandle, s: f64) -> f64 {
    -handle.dphi_one_minus(s) - handle.phi_one_minus(s) / s
}

/// `g(s) = s L(s)/phi(1-s) = -s phi'(1-s)/phi(1-s) - 1`; tends to zero.
pub fn nad_g(handle: &GeneratorHandle, s: f64) -> f64 {
    -s * handle.dphi_one_minus(s) / handle.phi_one_minus(s) - 1.0
}

/// `r_k(u) = sum_{J != 0} (-1)^|J| (sum_J u_i) log(sum_J u_i)`, the joint
/// survival limit relative to `s g(s)`.
pub fn nad_r(u: &[f64]) -> Result<f64> {
    let k = u.len();
    if k < 2 {
        return Err(CopulaError::DimensionTooSmall(k));
    }
    let mut acc = 0.0f64;
    for mask in 1u32..(1u32 << k) {
        let mut sum = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += ui;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * sum * sum.ln();
    }
    Ok(acc)
}

/// Integral form of `nad_r`: `(k-2)! * integral over prod [0, u_i] of
/// (t_1+...+t_k)^-(k-1)`; quadrature oracle, `k` in {2, 3}.
pub fn nad_r_integral_oracle(u: &[f64]) -> Result<f64> {
    let k = u.len();
    if k < 2 {
        return Err(CopulaError::DimensionTooSmall(k));
    }
    if k > 3 {
        return Err(CopulaError::DimensionTooLarge { dim: k, cap: 3 });
    }
    let factorial = if k == 2 { 1.0 } else { 1.0 };
    let p = -((k - 1) as f64);
    let v = nested_adaptive(
        &|t: &[f64]| t.iter().sum::<f64>().powf(p),
        u,
        1e-9,
    )?;
    Ok(factorial * v)
}

/// NAD conditional: `r_d(z)/r_|I|(x)` with `z_i = x_i ^ (x_i y_i)` on `I`
/// and `z_i = x_i y_i` on `I^c` (the exceedance thresholds are
/// `1 - s x_i y_i`, so the conditioning caps the subset coordinates at
/// `x_i`).
pub fn nad_joint_conditional(i_set: &[usize], x: &[f64], y: &[f64]) -> Result<f64> {
    let d = y.len();
    check_subset(i_set, d)?;
    if i_set.len() < 2 {
        return Err(CopulaError::DimensionTooSmall(i_set.len()));
    }
    if x.len() != d {
        return Err(CopulaError::DomainError {
            name: "x",
            value: x.len() as f64,
            domain: "one entry per coordinate",
        });
    }
    let in_i = {
        let mut m = vec![false; d];
        for &i in i_set {
            m[i] = true;
        }
        m
    };
    let mut z = Vec::with_capacity(d);
    for i in 0..d {
        let xy = x[i] * y[i];
        z.push(if in_i[i] { x[i].min(xy) } else { xy });
    }
    let xi: Vec<f64> = i_set.iter().map(|&i| x[i]).collect();
    Ok(nad_r(&z)? / nad_r(&xi)?)
}
