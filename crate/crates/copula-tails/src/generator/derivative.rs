//! Higher derivatives of the generator inverse and the d-monotonicity check.

use super::GeneratorHandle;
use crate::error::{CopulaError, Result};

const MAX_ORDER: u32 = 5;

fn binomial(n: u32, k: u32) -> f64 {
    let mut v = 1.0;
    for j in 0..k {
        v = v * (n - j) as f64 / (j + 1) as f64;
    }
    v
}

/// k-fold central difference of f at y with step h (evaluation points
/// y + (k/2 - j) h, half-integer offsets allowed).
fn central_diff(f: &dyn Fn(f64) -> f64, y: f64, k: u32, h: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = y + (k as f64 / 2.0 - j as f64) * h;
        acc += sign * binomial(k, j) * f(x);
    }
    acc / h.powi(k as i32)
}

/// k-fold forward difference of f at y with step h.
fn forward_diff(f: &dyn Fn(f64) -> f64, y: f64, k: u32, h: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..=k {
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(k, j) * f(y + j as f64 * h);
    }
    acc / h.powi(k as i32)
}

/// Richardson/Neville extrapolation of derivative estimates to step zero.
/// `order` is the error order in h (1 for forward, 2 for central).
fn richardson(estimates: &[(f64, f64)], order: i32) -> (f64, f64) {
    let xs: Vec<f64> = estimates.iter().map(|&(h, _)| h.powi(order)).collect();
    let mut p: Vec<f64> = estimates.iter().map(|&(_, v)| v).collect();
    let n = p.len();
    let mut best = p[n - 1];
    let mut err = f64::INFINITY;
    let mut prev = best;
    for level in 1..n {
        for i in 0..n - level {
            p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i]);
        }
        let cur = p[0];
        // Successive-level correction as the self-consistency indicator; a
        // growing correction means noise took over, so keep the earlier entry.
        let e = (cur - prev).abs();
        if e < err {
            err = e;
            best = cur;
        }
        prev = cur;
    }
    (best, err)
}

/// `(-D)^k phi_inv(y)`: closed form when registered, otherwise finite
/// differences with step-halving extrapolation.
pub fn dk_phi_inv(handle: &GeneratorHandle, y: f64, k: u32) -> Result<f64> {
    if y < 0.0 {
        return Err(CopulaError::DomainError {
            name: "y",
            value: y,
            domain: "[0, inf)",
        });
    }
    if k == 0 {
        return Ok(handle.phi_inv(y));
    }
    if let Some(v) = handle.dk_phi_inv_closed(y, k) {
        return Ok(v);
    }
    if k > MAX_ORDER {
        return Err(CopulaError::DerivativeResolution { order: k, y });
    }
    let f = |x: f64| handle.phi_inv(x);
    // Base step grows with the order: the rounding error of a k-fold
    // difference scales like eps / h^k.
    let h0 = (6e-3 * (k * k) as f64).max(1e-3 * y);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };

    let use_central = y - (k as f64 / 2.0) * h0 > 0.0;
    let (val, err) = if use_central {
        let ests: Vec<(f64, f64)> = (0..4)
            .map(|i| {
                let h = h0 / 2f64.powi(i);
                (h, sign * central_diff(&f, y, k, h))
            })
            .collect();
        richardson(&ests, 2)
    } else {
        let ests: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let h = h0 / 2f64.powi(i);
                (h, sign * forward_diff(&f, y, k, h))
            })
            .collect();
        richardson(&ests, 1)
    };
    if !val.is_finite() || err > val.abs().max(1e-4) * 1e-3 {
        return Err(CopulaError::DerivativeResolution { order: k, y });
    }
    Ok(val)
}

/// Per-order outcome of the d-monotonicity check.
#[derive(Debug, Clone)]
pub struct OrderCheck {
    pub k: u32,
    pub min_value: f64,
    pub pass: bool,
}

/// Report of `check_d_monotone`.
#[derive(Debug, Clone)]
pub struct DMonotoneReport {
    pub d: usize,
    pub orders: Vec<OrderCheck>,
    /// Smallest second divided difference of `(-D)^{d-2} phi_inv` on the grid.
    pub convexity_min: f64,
    pub convexity_pass: bool,
    /// Grid points where derivative estimation failed.
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Check d-monotonicity of `phi_inv` on a grid: `(-D)^k phi_inv >= 0` for
/// `k = 0..=d-2` and convexity of `(-D)^{d-2} phi_inv`.
pub fn check_d_monotone(handle: &GeneratorHandle, d: usize, grid: &[f64]) -> Result<DMonotoneReport> {
    if d < 2 {
        return Err(CopulaError::DimensionTooSmall(d));
    }
    if grid.is_empty() || grid.iter().any(|&y| y <= 0.0) {
        return Err(CopulaError::DomainError {
            name: "grid",
            value: f64::NAN,
            domain: "nonempty, strictly positive",
        });
    }
    let mut grid = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut failures = Vec::new();
    let mut orders = Vec::new();
    let top = (d - 2) as u32;
    let mut top_vals: Vec<(f64, f64)> = Vec::new();

    for k in 0..=top {
        let mut min_value = f64::INFINITY;
        let mut ok = true;
        for &y in &grid {
            match dk_phi_inv(handle, y, k) {
                Ok(v) => {
                    min_value = min_value.min(v);
                    if k == top {
                        top_vals.push((y, v));
                    }
                }
                Err(e) => {
                    failures.push(format!("order {k} at y={y}: {e}"));
                    ok = false;
                }
            }
        }
        let scale = if min_value.is_finite() {
            min_value.abs().max(1.0)
        } else {
            1.0
        };
        let pass = ok && min_value >= -1e-7 * scale;
        orders.push(OrderCheck { k, min_value, pass });
    }

    // Convexity of the highest-order derivative via second divided
    // differences on consecutive grid triples.
    let mut convexity_min = f64::INFINITY;
    for w in top_vals.windows(3) {
        let (y0, f0) = w[0];
        let (y1, f1) = w[1];
        let (y2, f2) = w[2];
        let dd = ((f2 - f1) / (y2 - y1) - (f1 - f0) / (y1 - y0)) / (y2 - y0);
        convexity_min = convexity_min.min(dd);
    }
    let conv_scale = top_vals
        .iter()
        .map(|&(_, v)| v.abs())
        .fold(1.0f64, f64::max);
    let convexity_pass = top_vals.len() >= 3 && convexity_min >= -1e-5 * conv_scale;

    let pass = orders.iter().all(|o| o.pass) && convexity_pass && failures.is_empty();
    Ok(DMonotoneReport {
        d,
        orders,
        convexity_min,
        convexity_pass,
        failures,
        pass,
    })
}

/// Default grid for d-monotonicity checks: log-spaced on [1e-3, 50].
pub fn default_monotone_grid() -> Vec<f64> {
    let n = 40;
    let (a, b) = (1e-3f64.ln(), 50f64.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
