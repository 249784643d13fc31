//! Sequence-limit estimation on geometric grids.
//!
//! The decision quantities of the tail classifier are all limits of the form
//! `lim_{s -> 0} f(s)` where `f` often contains slowly varying factors, so the
//! raw sequence converges like `1/(-log s)`.  Two accelerators are run side by
//! side: iterated Aitken delta-squared on the raw sequence, and Neville
//! polynomial extrapolation in the variable `xi = 1/(-log s)` (which turns
//! harmonic-in-`log` tails into smooth polynomials).  The estimate with the
//! smaller self-consistency indicator wins.

use crate::error::{CopulaError, Result};

/// Geometric evaluation grid `s_k = start * ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

impl GridSpec {
    pub const DEFAULT: GridSpec = GridSpec {
        start: 1e-2,
        ratio: 0.25,
        count: 12,
    };

    /// Deep grid used by the classifier (cancellation-safe closed forms allow
    /// probing well below 1e-12).
    pub const CLASSIFIER: GridSpec = GridSpec {
        start: 1e-2,
        ratio: 0.1,
        count: 13,
    };

    pub fn new(start: f64, ratio: f64, count: usize) -> Self {
        GridSpec {
            start,
            ratio,
            count,
        }
    }

    /// Grid from `start` down to (approximately) `stop` with the given ratio.
    pub fn down_to(start: f64, stop: f64, ratio: f64) -> Self {
        let mut count = 1;
        let mut s = start;
        while s * ratio >= stop * 0.999_999 && count < 200 {
            s *= ratio;
            count += 1;
        }
        GridSpec {
            start,
            ratio,
            count,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.count);
        let mut s = self.start;
        for _ in 0..self.count {
            v.push(s);
            s *= self.ratio;
        }
        v
    }
}

/// Outcome of a limit estimation.
#[derive(Debug, Clone)]
pub struct LimitEstimate {
    /// Extrapolated limit; may be an infinity sentinel when divergence was
    /// detected.
    pub value: f64,
    /// True when the accelerated sequence settled (or divergence was
    /// positively identified).
    pub converged: bool,
    /// True when the value is a divergence sentinel.
    pub diverged: bool,
    /// Raw `(s, f(s))` samples actually used.
    pub samples: Vec<(f64, f64)>,
    /// Self-consistency indicator of the chosen accelerator (absolute).
    pub error_indicator: f64,
    /// Human-readable note about how the value was obtained.
    pub method: String,
}

/// Iterated Aitken delta-squared.  Returns the deepest stable entry together
/// with the magnitude of its last correction.
pub(crate) fn aitken_iterated(seq: &[f64]) -> (f64, f64) {
    let mut cur = seq.to_vec();
    let mut best = *cur.last().unwrap();
    let mut err = f64::INFINITY;
    if cur.len() >= 2 {
        err = (cur[cur.len() - 1] - cur[cur.len() - 2]).abs();
    }
    while cur.len() >= 3 {
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let denom = (c - b) - (b - a);
            if denom.abs() < 1e-300 || !denom.is_finite() {
                next.push(c);
            } else {
                next.push(c - (c - b) * (c - b) / denom);
            }
        }
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        let cand = *next.last().unwrap();
        let cand_err = (cand - best).abs();
        // Keep iterating while corrections shrink; noise blows the table up.
        if cand_err <= err || !err.is_finite() {
            best = cand;
            err = cand_err;
        } else {
            break;
        }
        cur = next;
    }
    (best, err)
}

/// Neville tableau evaluated at x = 0.
pub(crate) fn neville_at_zero(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mut p = ys.to_vec();
    let mut prev = p[n - 1];
    let mut err = f64::INFINITY;
    for level in 1..n {
        for i in 0..n - level {
            // P_{i..i+level}(0)
            let xi = xs[i];
            let xj = xs[i + level];
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
        let cur = p[0];
        let cur_err = (cur - prev).abs();
        if cur.is_finite() {
            if cur_err < err {
                err = cur_err;
            } else if level > 2 && cur_err > 4.0 * err {
                // tableau started to diverge (noise amplification); stop.
                return (prev, err);
            }
            prev = cur;
        }
    }
    (prev, err)
}

/// Detect monotone divergence in a finite sample prefix.
fn divergence_direction(vals: &[f64], truncated_by_overflow: bool) -> Option<f64> {
    let n = vals.len();
    if n == 0 {
        return None;
    }
    let increasing_mag = vals.windows(2).all(|w| w[1].abs() >= w[0].abs());
    let monotone_up = vals.windows(2).all(|w| w[1] >= w[0]);
    let monotone_down = vals.windows(2).all(|w| w[1] <= w[0]);
    let last = vals[n - 1];
    // Evaluations overflowed deeper in the grid while the finite prefix was
    // growing: the ratio itself blew up.
    if truncated_by_overflow && increasing_mag && (monotone_up || monotone_down || n == 1) {
        return Some(if last >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        });
    }
    if last.abs() > 1e12 && increasing_mag && (monotone_up || monotone_down) {
        return Some(if last > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        });
    }
    // Sustained geometric growth across the tail of the grid.
    if n >= 4 && (monotone_up || monotone_down) && last.abs() > 1e3 {
        let tail_ratio_growth = vals[n - 4..]
            .windows(2)
            .all(|w| w[1].abs() >= 1.5 * w[0].abs());
        if tail_ratio_growth {
            return Some(if last > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            });
        }
    }
    None
}

/// Extrapolate `lim_{s->0} f(s)` along a geometric grid.
///
/// Divergence is reported via infinity sentinels with `diverged = true`.
pub fn limit_ratio_estimate<F: Fn(f64) -> f64>(f: F, grid: &GridSpec) -> Result<LimitEstimate> {
    let pts = grid.points();
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    let mut truncated = false;
    for &s in &pts {
        let v = f(s);
        if v.is_finite() {
            samples.push((s, v));
        } else {
            truncated = true;
            break;
        }
    }
    if samples.is_empty() {
        return Err(CopulaError::NotFiniteOnGrid);
    }
    let vals: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();

    if let Some(dir) = divergence_direction(&vals, truncated) {
        return Ok(LimitEstimate {
            value: dir,
            converged: true,
            diverged: true,
            samples,
            error_indicator: 0.0,
            method: "monotone divergence sentinel".into(),
        });
    }

    if vals.len() == 1 {
        return Ok(LimitEstimate {
            value: vals[0],
            converged: false,
            diverged: false,
            samples,
            error_indicator: f64::INFINITY,
            method: "single finite sample".into(),
        });
    }

    let (ait_val, ait_err) = aitken_iterated(&vals);

    // Neville in xi = 1/(-log s), restricted to the deepest nodes where the
    // polynomial model in xi is cleanest.
    let tail = 8.min(vals.len());
    let xs: Vec<f64> = samples[vals.len() - tail..]
        .iter()
        .map(|&(s, _)| 1.0 / (-s.ln()))
        .collect();
    let ys: Vec<f64> = vals[vals.len() - tail..].to_vec();
    let (nev_val, nev_err) = neville_at_zero(&xs, &ys);

    let scale = ait_val.abs().max(nev_val.abs()).max(1e-3);
    let (value, error_indicator, method) = if nev_val.is_finite() && nev_err < ait_err {
        (nev_val, nev_err, "neville in 1/(-log s)".to_string())
    } else {
        (ait_val, ait_err, "iterated aitken".to_string())
    };
    let converged = error_indicator <= 1e-4 * scale;

    Ok(LimitEstimate {
        value,
        converged,
        diverged: false,
        samples,
        error_indicator,
        method,
    })
}
