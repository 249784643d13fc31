//! Adaptive Simpson quadrature, plain and nested.
//!
//! Oracle-grade only: used to cross-check alternating-sum identities against
//! their integral forms, never on a hot path.  Nested integration offsets the
//! lower limit of every non-innermost axis by a tiny delta and integrates
//! those axes in log space, so weakly singular integrands (like
//! `(t_1+...+t_k)^(-(k-1))` at the origin corner) are sampled geometrically
//! and never evaluated exactly at the singular point.

use crate::error::{CopulaError, Result};

/// Lower-limit offset applied to outer axes of nested integrals.  The
/// truncation error for the integrands used here is of order
/// `offset * log(offset)`, well below the oracle comparison tolerances.
const CORNER_OFFSET: f64 = 1e-9;

const MAX_DEPTH: u32 = 50;

/// Relative acceptance targets per nesting level, innermost first.  Each
/// outer level accepts two orders of magnitude looser than the level whose
/// values it integrates, so inner quadrature noise cannot stall the outer
/// refinement.
const LEVEL_REL: [f64; 3] = [1e-10, 1e-8, 3e-7];

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    rel: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(CopulaError::QuadratureNonConvergent);
    }
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // Relative floor: panel values can be huge near integrable
    // singularities, where an absolute target is unattainable.
    if delta.abs() <= 15.0 * tol.max(rel * whole.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(CopulaError::QuadratureNonConvergent);
    }
    // Halve the budget per side but keep it above machine precision, or
    // integrable singularities exhaust the depth limit.
    let half_tol = (0.5 * tol).max(1e-16);
    let l = adapt(f, a, m, fa, flm, fm, left, half_tol, rel, depth + 1)?;
    let r = adapt(f, m, b, fm, frm, fb, right, half_tol, rel, depth + 1)?;
    Ok(l + r)
}

fn simpson_outer<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, rel: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(CopulaError::QuadratureNonConvergent);
    }
    let whole = simpson(fa, fm, fb, b - a);
    adapt(f, a, b, fa, fm, fb, whole, tol, rel, 0)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    simpson_outer(f, a, b, tol, 1e-12)
}

fn nest<F: Fn(&[f64]) -> f64>(f: &F, upper: &[f64], prefix: &[f64], tol: f64) -> Result<f64> {
    let axis = prefix.len();
    let level = upper.len() - 1 - axis; // 0 = innermost
    let rel = LEVEL_REL[level];
    if level == 0 {
        let g = |t: f64| -> f64 {
            let mut point = prefix.to_vec();
            point.push(t);
            f(&point)
        };
        return simpson_outer(&g, 0.0, upper[axis], tol, rel);
    }
    // Outer axes: integrate in log space from the corner offset, so a
    // singularity concentrated at the origin is sampled geometrically.
    let g = |v: f64| -> f64 {
        let t = v.exp();
        let mut point = prefix.to_vec();
        point.push(t);
        t * nest(f, upper, &point, tol * 0.5).unwrap_or(f64::NAN)
    };
    simpson_outer(&g, CORNER_OFFSET.ln(), upper[axis].ln(), tol, rel)
}

/// Iterated integral of `f` over the box `[0, upper_1] x ... x [0, upper_k]`,
/// `k` at most 3.
pub fn nested_adaptive<F: Fn(&[f64]) -> f64>(f: &F, upper: &[f64], tol: f64) -> Result<f64> {
    if upper.is_empty() || upper.len() > 3 {
        return Err(CopulaError::DimensionTooLarge {
            dim: upper.len(),
            cap: 3,
        });
    }
    if upper.iter().any(|&u| !(u > 0.0) || !u.is_finite()) {
        return Err(CopulaError::DomainError {
            name: "upper",
            value: f64::NAN,
            domain: "(0, inf)",
        });
    }
    nest(f, upper, &[], tol)
}
