//! The 23 parametric generator families.
//!
//! Closed forms for `phi`, `phi'`, the inverse, and the evaluation at
//! `t = 1 - s` are kept separate so that upper-tail probes at `s ~ 1e-14`
//! do not lose precision to the rounding of `1 - s`.  Families 1, 5 and 17
//! accept `theta = 0` as a dedicated limit form.

use super::{bisect_phi_inv, Generator, Kappa, Registry};
use crate::error::{CopulaError, Result};

/// Format a float the way the spec-string grammar expects (no trailing `.0`).
pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() && v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NelsenFamily {
    pub id: u8,
    pub theta: f64,
}

/// (range check, printable range) per family.
fn theta_range(id: u8) -> Option<(fn(f64) -> bool, &'static str)> {
    Some(match id {
        1 => (|t| t >= -1.0, "[-1, inf)"),
        2 | 4 | 6 | 8 | 12 | 14 | 15 | 21 => (|t| t >= 1.0, "[1, inf)"),
        3 => (|t| (-1.0..1.0).contains(&t), "[-1, 1)"),
        5 | 17 => (|t: f64| t.is_finite(), "(-inf, inf)"),
        7 | 9 | 10 | 22 => (|t| t > 0.0 && t <= 1.0, "(0, 1]"),
        11 => (|t| t > 0.0 && t <= 0.5, "(0, 1/2]"),
        13 | 19 | 20 | 23 => (|t| t > 0.0, "(0, inf)"),
        16 => (|t| t >= 0.0, "[0, inf)"),
        18 => (|t| t >= 2.0, "[2, inf)"),
        _ => return None,
    })
}

impl NelsenFamily {
    pub fn new(id: u8, theta: f64) -> Result<Self> {
        let (check, range) = theta_range(id).ok_or(CopulaError::UnknownFamily(id))?;
        if !theta.is_finite() || !check(theta) {
            return Err(CopulaError::ParameterOutOfRange {
                family: id,
                theta,
                range,
            });
        }
        Ok(NelsenFamily { id, theta })
    }

    /// True when the parameter value makes this generator `-log t`.
    fn is_independence(&self) -> bool {
        match self.id {
            1 | 5 => self.theta == 0.0,
            4 | 6 => self.theta == 1.0,
            7 => self.theta == 1.0,
            _ => false,
        }
    }
}

impl Generator for NelsenFamily {
    fn phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        if t <= 0.0 {
            return self.phi_at_zero();
        }
        let th = self.theta;
        match self.id {
            1 => {
                if th == 0.0 {
                    -t.ln()
                } else {
                    (-th * t.ln()).exp_m1() / th
                }
            }
            2 => (1.0 - t).powf(th),
            3 => (1.0 - th * (1.0 - t)).ln() - t.ln(),
            4 => (-t.ln()).powf(th),
            5 => {
                if th == 0.0 {
                    -t.ln()
                } else {
                    -((-th * t).exp_m1() / (-th).exp_m1()).ln()
                }
            }
            6 => -(-(1.0 - t).powf(th)).ln_1p(),
            7 => -(th * (t - 1.0)).ln_1p(),
            8 => (1.0 - t) / (1.0 + (th - 1.0) * t),
            9 => (-th * t.ln()).ln_1p(),
            10 => (2.0 * (-th * t.ln()).exp_m1()).ln_1p(),
            11 => (-(th * t.ln()).exp_m1()).ln_1p(),
            12 => (1.0 / t - 1.0).powf(th),
            13 => (th * (-t.ln()).ln_1p()).exp_m1(),
            14 => (-t.ln() / th).exp_m1().powf(th),
            15 => (-(t.ln() / th).exp_m1()).powf(th),
            16 => (th / t + 1.0) * (1.0 - t),
            17 => {
                if th == 0.0 {
                    -(t.ln_1p() / 2f64.ln()).ln()
                } else {
                    -((-th * t.ln_1p()).exp_m1() / (-th * 2f64.ln()).exp_m1()).ln()
                }
            }
            18 => (th / (t - 1.0)).exp(),
            19 => th.exp() * (th * (1.0 - t) / t).exp_m1(),
            20 => std::f64::consts::E * (-th * t.ln()).exp_m1().exp_m1(),
            21 => 1.0 - (1.0 - (1.0 - t).powf(th)).powf(1.0 / th),
            22 => (1.0 - t.powf(th)).asin(),
            23 => (1.0 - t) / (-(-t).ln_1p()).powf(th),
            _ => unreachable!(),
        }
    }

    fn phi_one_minus(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return self.phi_at_zero();
        }
        let th = self.theta;
        let ln1ms = (-s).ln_1p(); // log(1-s)
        match self.id {
            1 => {
                if th == 0.0 {
                    -ln1ms
                } else {
                    (-th * ln1ms).exp_m1() / th
                }
            }
            2 => s.powf(th),
            3 => (-th * s).ln_1p() - ln1ms,
            4 => (-ln1ms).powf(th),
            5 => {
                if th == 0.0 {
                    -ln1ms
                } else {
                    -((th * s).exp_m1() / (1.0 - th.exp())).ln_1p()
                }
            }
            6 => -(-s.powf(th)).ln_1p(),
            7 => -(-th * s).ln_1p(),
            8 => s / (th - (th - 1.0) * s),
            9 => (-th * ln1ms).ln_1p(),
            10 => (2.0 * (-th * ln1ms).exp_m1()).ln_1p(),
            11 => (-(th * ln1ms).exp_m1()).ln_1p(),
            12 => (s / (1.0 - s)).powf(th),
            13 => (th * (-ln1ms).ln_1p()).exp_m1(),
            14 => (-ln1ms / th).exp_m1().powf(th),
            15 => (-(ln1ms / th).exp_m1()).powf(th),
            16 => (th / (1.0 - s) + 1.0) * s,
            17 => {
                if th == 0.0 {
                    -((-s / 2.0).ln_1p() / 2f64.ln()).ln_1p()
                } else {
                    let c = (-th * 2f64.ln()).exp_m1();
                    let ratio_m1 = (1.0 + c) * (-th * (-s / 2.0).ln_1p()).exp_m1() / c;
                    -ratio_m1.ln_1p()
                }
            }
            18 => (-th / s).exp(),
            19 => th.exp() * (th * s / (1.0 - s)).exp_m1(),
            20 => std::f64::consts::E * (-th * ln1ms).exp_m1().exp_m1(),
            21 => -((-s.powf(th)).ln_1p() / th).exp_m1(),
            22 => (-(th * ln1ms).exp_m1()).asin(),
            23 => s * (-s.ln()).powf(-th),
            _ => unreachable!(),
        }
    }

    fn dphi(&self, t: f64) -> f64 {
        let th = self.theta;
        match self.id {
            1 => {
                if th == 0.0 {
                    -1.0 / t
                } else {
                    -((-th - 1.0) * t.ln()).exp()
                }
            }
            2 => -th * (1.0 - t).powf(th - 1.0),
            3 => th / (1.0 - th * (1.0 - t)) - 1.0 / t,
            4 => -th * (-t.ln()).powf(th - 1.0) / t,
            5 => {
                if th == 0.0 {
                    -1.0 / t
                } else {
                    -th / (th * t).exp_m1()
                }
            }
            6 => {
                let u = (1.0 - t).powf(th);
                -th * (1.0 - t).powf(th - 1.0) / (1.0 - u)
            }
            7 => -th / (th * t + 1.0 - th),
            8 => -th / (1.0 + (th - 1.0) * t).powi(2),
            9 => -th / (t * (1.0 - th * t.ln())),
            10 => {
                let x = (-th * t.ln()).exp();
                -2.0 * th * x / (t * (2.0 * x - 1.0))
            }
            11 => {
                let x = (th * t.ln()).exp();
                -th * x / (t * (2.0 - x))
            }
            12 => -th * (1.0 / t - 1.0).powf(th - 1.0) / (t * t),
            13 => -th * (1.0 - t.ln()).powf(th - 1.0) / t,
            14 => {
                let u = (-t.ln() / th).exp_m1();
                -u.powf(th - 1.0) * ((-1.0 / th - 1.0) * t.ln()).exp()
            }
            15 => {
                let u = -(t.ln() / th).exp_m1();
                -u.powf(th - 1.0) * ((1.0 / th - 1.0) * t.ln()).exp()
            }
            16 => -th / (t * t) - 1.0,
            17 => {
                if th == 0.0 {
                    -1.0 / ((1.0 + t) * t.ln_1p())
                } else {
                    th * (-(th + 1.0) * t.ln_1p()).exp() / (-th * t.ln_1p()).exp_m1()
                }
            }
            18 => {
                if t >= 1.0 {
                    0.0
                } else {
                    -th / ((t - 1.0) * (t - 1.0)) * (th / (t - 1.0)).exp()
                }
            }
            19 => -th / (t * t) * (th / t).exp(),
            20 => -th * ((-th - 1.0) * t.ln()).exp() * ((-th * t.ln()).exp()).exp(),
            21 => {
                let u = 1.0 - (1.0 - t).powf(th);
                -u.powf(1.0 / th - 1.0) * (1.0 - t).powf(th - 1.0)
            }
            22 => {
                let x = t.powf(th);
                -th * t.powf(th - 1.0) / (x * (2.0 - x)).sqrt()
            }
            23 => {
                let s = 1.0 - t;
                let l = -s.ln();
                -(l.powf(-th) + th * l.powf(-th - 1.0))
            }
            _ => unreachable!(),
        }
    }

    fn dphi_one_minus(&self, s: f64) -> f64 {
        let th = self.theta;
        let ln1ms = (-s).ln_1p(); // log(1-s)
        match self.id {
            1 => {
                if th == 0.0 {
                    -1.0 / (1.0 - s)
                } else {
                    -((-th - 1.0) * ln1ms).exp()
                }
            }
            2 => -th * s.powf(th - 1.0),
            3 => th / (1.0 - th * s) - 1.0 / (1.0 - s),
            4 => -th * (-ln1ms).powf(th - 1.0) / (1.0 - s),
            5 => {
                if th == 0.0 {
                    -1.0 / (1.0 - s)
                } else {
                    -th / (th * (1.0 - s)).exp_m1()
                }
            }
            6 => -th * s.powf(th - 1.0) / (1.0 - s.powf(th)),
            7 => -th / (1.0 - th * s),
            8 => -th / (th - (th - 1.0) * s).powi(2),
            9 => -th / ((1.0 - s) * (1.0 - th * ln1ms)),
            10 => {
                let x = (-th * ln1ms).exp();
                -2.0 * th * x / ((1.0 - s) * (2.0 * x - 1.0))
            }
            11 => {
                let x = (th * ln1ms).exp();
                -th * x / ((1.0 - s) * (2.0 - x))
            }
            12 => -th * (s / (1.0 - s)).powf(th - 1.0) / ((1.0 - s) * (1.0 - s)),
            13 => -th * (1.0 - ln1ms).powf(th - 1.0) / (1.0 - s),
            14 => {
                let u = (-ln1ms / th).exp_m1();
                -u.powf(th - 1.0) * ((-1.0 / th - 1.0) * ln1ms).exp()
            }
            15 => {
                let u = -(ln1ms / th).exp_m1();
                -u.powf(th - 1.0) * ((1.0 / th - 1.0) * ln1ms).exp()
            }
            16 => -th / ((1.0 - s) * (1.0 - s)) - 1.0,
            17 => {
                let ln2ms = (2.0 - s).ln();
                if th == 0.0 {
                    -1.0 / ((2.0 - s) * ln2ms)
                } else {
                    th * (-(th + 1.0) * ln2ms).exp() / (-th * ln2ms).exp_m1()
                }
            }
            18 => {
                if s <= 0.0 {
                    0.0
                } else {
                    -th / (s * s) * (-th / s).exp()
                }
            }
            19 => {
                let t = 1.0 - s;
                -th / (t * t) * (th / t).exp()
            }
            20 => -th * ((-th - 1.0) * ln1ms).exp() * ((-th * ln1ms).exp()).exp(),
            21 => {
                let u = 1.0 - s.powf(th);
                -u.powf(1.0 / th - 1.0) * s.powf(th - 1.0)
            }
            22 => {
                let x = (th * ln1ms).exp();
                -th * ((th - 1.0) * ln1ms).exp() / (x * (2.0 - x)).sqrt()
            }
            23 => {
                let l = -s.ln();
                -(l.powf(-th) + th * l.powf(-th - 1.0))
            }
            _ => unreachable!(),
        }
    }

    fn phi_inv(&self, y: f64) -> f64 {
        if y.is_nan() {
            return f64::NAN;
        }
        if y <= 0.0 {
            return 1.0;
        }
        if y >= self.phi_at_zero() {
            return 0.0;
        }
        let th = self.theta;
        let t = match self.id {
            1 => {
                if th == 0.0 {
                    (-y).exp()
                } else {
                    (-(th * y).ln_1p() / th).exp()
                }
            }
            2 => 1.0 - y.powf(1.0 / th),
            3 => (1.0 - th) / ((1.0 - th) + y.exp_m1()),
            4 => (-y.powf(1.0 / th)).exp(),
            5 => {
                if th == 0.0 {
                    (-y).exp()
                } else {
                    -((-y).exp() * (-th).exp_m1()).ln_1p() / th
                }
            }
            6 => -((-(-y).exp()).ln_1p() / th).exp_m1(),
            7 => 1.0 + (-y).exp_m1() / th,
            8 => (1.0 - y) / (1.0 + (th - 1.0) * y),
            9 => (-y.exp_m1() / th).exp(),
            10 => (2.0 / (y.exp() + 1.0)).powf(1.0 / th),
            11 => (-(y.exp_m1())).ln_1p().exp() .powf(1.0 / th),
            12 => 1.0 / (1.0 + y.powf(1.0 / th)),
            13 => (-(y.ln_1p() / th).exp_m1()).exp(),
            14 => (-th * (y.powf(1.0 / th)).ln_1p()).exp(),
            15 => (-(y.ln() / th).exp_m1()).powf(th),
            16 => {
                let a = y + th - 1.0;
                let disc = (a * a + 4.0 * th).sqrt();
                if a > 0.0 {
                    2.0 * th / (a + disc)
                } else {
                    0.5 * (disc - a)
                }
            }
            17 => {
                if th == 0.0 {
                    ((-y).exp() * 2f64.ln()).exp_m1()
                } else {
                    (-((-y).exp() * (-th * 2f64.ln()).exp_m1()).ln_1p() / th).exp_m1()
                }
            }
            18 => 1.0 + th / y.ln(),
            19 => th / (th + (y * (-th).exp()).ln_1p()),
            20 => (1.0 + (y / std::f64::consts::E).ln_1p()).powf(-1.0 / th),
            21 => -((-(1.0 - y).powf(th)).ln_1p() / th).exp_m1(),
            22 => (-(y.sin() - 1.0)).powf(1.0 / th),
            23 => bisect_phi_inv(self, y),
            _ => unreachable!(),
        };
        t.clamp(0.0, 1.0)
    }

    fn phi_at_zero(&self) -> f64 {
        let th = self.theta;
        match self.id {
            1 => {
                if th < 0.0 {
                    -1.0 / th
                } else {
                    f64::INFINITY
                }
            }
            2 | 8 | 15 | 21 => 1.0,
            7 => {
                if th < 1.0 {
                    -(-th).ln_1p()
                } else {
                    f64::INFINITY
                }
            }
            11 => 2f64.ln(),
            16 => {
                if th > 0.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
            18 => (-th).exp(),
            22 => std::f64::consts::FRAC_PI_2,
            _ => f64::INFINITY,
        }
    }

    fn registry(&self) -> Option<Registry> {
        let th = self.theta;
        let ind = |cond: bool| if cond { 1.0 } else { 0.0 };
        let (neg_dphi1, theta1) = match self.id {
            1 => (1.0, 1.0),
            2 => (ind(th == 1.0), th),
            3 => (1.0 - th, 1.0),
            4 => (ind(th == 1.0), th),
            5 => {
                if th == 0.0 {
                    (1.0, 1.0)
                } else {
                    (th / th.exp_m1(), 1.0)
                }
            }
            6 => (ind(th == 1.0), th),
            7 => (th, 1.0),
            8 => (1.0 / th, 1.0),
            9 => (th, 1.0),
            10 => (2.0 * th, 1.0),
            11 => (th, 1.0),
            12 => (ind(th == 1.0), th),
            13 => (th, 1.0),
            14 => (ind(th == 1.0), th),
            15 => (ind(th == 1.0), th),
            16 => (1.0 + th, 1.0),
            17 => {
                if th == 0.0 {
                    (0.5 / 2f64.ln(), 1.0)
                } else {
                    (th / (2.0 * (th * 2f64.ln()).exp_m1()), 1.0)
                }
            }
            18 => (0.0, f64::INFINITY),
            19 => (th * th.exp(), 1.0),
            20 => (th * std::f64::consts::E, 1.0),
            21 => (ind(th == 1.0), th),
            22 => (th, 1.0),
            23 => (0.0, 1.0),
            _ => return None,
        };
        let theta0 = match self.id {
            1 => th.max(0.0),
            12 | 23 => th,
            14 => 1.0,
            16 => ind(th > 0.0),
            19 | 20 => f64::INFINITY,
            _ => 0.0,
        };
        let phi_at_zero = self.phi_at_zero();
        let kappa = if phi_at_zero.is_finite() || theta0 > 0.0 {
            Kappa::NotApplicable
        } else {
            match self.id {
                4 | 13 => Kappa::Known(1.0 - 1.0 / th),
                9 => Kappa::Known(f64::NEG_INFINITY),
                // every remaining strict family with theta0 = 0 has kappa = 0
                _ => Kappa::Known(0.0),
            }
        };
        Some(Registry {
            neg_dphi1,
            theta1,
            phi_at_zero,
            theta0: Some(theta0),
            kappa,
        })
    }

    fn dk_phi_inv_closed(&self, y: f64, k: u32) -> Option<f64> {
        let th = self.theta;
        match self.id {
            1 => {
                if th == 0.0 || self.is_independence() {
                    return Some((-y).exp());
                }
                // phi_inv(y) = (1 + th*y)^(-1/th), truncated for th < 0.
                let base = 1.0 + th * y;
                let mut coef = 1.0;
                for j in 0..k {
                    let factor = 1.0 + j as f64 * th;
                    if factor == 0.0 {
                        return Some(0.0); // polynomial of lower degree
                    }
                    coef *= factor;
                }
                if base <= 0.0 {
                    return Some(0.0);
                }
                Some(coef * base.powf(-1.0 / th - k as f64))
            }
            2 => {
                // phi_inv(y) = 1 - y^(1/th) for y <= 1, else 0.
                if y > 1.0 {
                    return Some(0.0);
                }
                let a = 1.0 / th;
                let mut coef = -a; // d/dy of -y^a
                for j in 1..k {
                    coef *= a - j as f64;
                }
                // (-D)^k f = (-1)^k f^(k); f^(k) = coef * y^(a-k)
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Some(sign * coef * y.powf(a - k as f64))
            }
            5 | 7 if self.is_independence() => Some((-y).exp()),
            4 | 6 if self.is_independence() => Some((-y).exp()),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        format!("family:{},theta:{}", self.id, fmt_f64(self.theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(id: u8, th: f64) -> NelsenFamily {
        NelsenFamily::new(id, th).unwrap()
    }

    #[test]
    fn range_validation() {
        assert!(NelsenFamily::new(1, -1.5).is_err());
        assert!(NelsenFamily::new(3, 1.0).is_err());
        assert!(NelsenFamily::new(11, 0.6).is_err());
        assert!(NelsenFamily::new(18, 1.5).is_err());
        assert!(NelsenFamily::new(24, 1.0).is_err());
        assert!(NelsenFamily::new(16, 0.0).is_ok());
    }

    #[test]
    fn spec_point_values() {
        // family 1 theta=1: phi(t) = 1/t - 1, phi_inv(y) = 1/(1+y)
        let g = fam(1, 1.0);
        assert!((g.phi(0.5) - 1.0).abs() < 1e-15);
        assert!((g.phi_inv(1.0) - 0.5).abs() < 1e-15);
        // family 1 theta=2: phi_inv(1.5) = (1+3)^{-1/2} = 0.5
        let g = fam(1, 2.0);
        assert!((g.phi_inv(1.5) - 0.5).abs() < 1e-14);
        // family 1 theta=0: independence
        let g = fam(1, 0.0);
        assert!((g.phi(0.25) - 0.25f64.ln().abs()).abs() < 1e-15);
        // family 4 theta=2: phi(e^{-1}) = 1
        let g = fam(4, 2.0);
        assert!((g.phi((-1f64).exp()) - 1.0).abs() < 1e-14);
        // family 23 theta=1: phi(1 - e^{-1}) = e^{-1}
        let g = fam(23, 1.0);
        let t = 1.0 - (-1f64).exp();
        assert!((g.phi(t) - (-1f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn phi_at_one_is_zero() {
        for id in 1..=23u8 {
            let th = default_theta(id);
            let g = fam(id, th);
            assert_eq!(g.phi(1.0), 0.0, "family {id}");
            assert_eq!(g.phi_one_minus(0.0), 0.0, "family {id}");
        }
    }

    /// A representative in-range parameter per family.
    pub(crate) fn default_theta(id: u8) -> f64 {
        match id {
            1 => 2.0,
            3 => 0.5,
            7 | 9 | 10 | 22 => 0.5,
            11 => 0.3,
            13 | 19 | 20 | 23 => 1.0,
            16 => 1.0,
            17 => 1.0,
            18 => 2.0,
            5 => 1.0,
            _ => 2.0,
        }
    }

    #[test]
    fn roundtrip_inverse_all_families() {
        for id in 1..=23u8 {
            let g = fam(id, default_theta(id));
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let y = g.phi(t);
                if y >= g.phi_at_zero() {
                    continue;
                }
                let back = g.phi_inv(y);
                assert!(
                    (back - t).abs() < 1e-10,
                    "family {id}: t={t}, phi={y}, back={back}"
                );
            }
        }
    }

    #[test]
    fn one_minus_forms_agree_with_direct() {
        for id in 1..=23u8 {
            let g = fam(id, default_theta(id));
            for i in 1..10 {
                let s = i as f64 / 10.0 * 0.5;
                let direct = g.phi(1.0 - s);
                let safe = g.phi_one_minus(s);
                assert!(
                    (direct - safe).abs() <= 1e-10 * direct.abs().max(1e-10),
                    "family {id} phi_one_minus({s}): {direct} vs {safe}"
                );
                let d1 = g.dphi(1.0 - s);
                let d2 = g.dphi_one_minus(s);
                assert!(
                    (d1 - d2).abs() <= 1e-9 * d1.abs().max(1e-9),
                    "family {id} dphi_one_minus({s}): {d1} vs {d2}"
                );
            }
        }
    }

    #[test]
    fn dphi_matches_finite_difference() {
        for id in 1..=23u8 {
            let g = fam(id, default_theta(id));
            for &t in &[0.2, 0.5, 0.8] {
                let h = 1e-6;
                let fd = (g.phi(t + h) - g.phi(t - h)) / (2.0 * h);
                let an = g.dphi(t);
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1.0),
                    "family {id} dphi({t}): analytic={an}, fd={fd}"
                );
            }
        }
    }

    #[test]
    fn convexity_on_grid() {
        for id in 1..=23u8 {
            let g = fam(id, default_theta(id));
            let mut prev = None;
            for i in 1..40 {
                let t = i as f64 / 40.0;
                let v = g.phi(t);
                if let Some((tp, vp)) = prev {
                    assert!(v < vp, "family {id}: phi not strictly decreasing at t={t}");
                    let _ = tp;
                }
                prev = Some((t, v));
            }
        }
    }

    #[test]
    fn frank_theta_negative_works() {
        let g = fam(5, -2.0);
        assert!(g.phi(0.5) > 0.0);
        assert!((g.phi_inv(g.phi(0.3)) - 0.3).abs() < 1e-12);
        let r = g.registry().unwrap();
        assert!((r.neg_dphi1 - (-2.0f64) / (-2.0f64).exp_m1()).abs() < 1e-14);
    }

    #[test]
    fn deep_one_minus_probes_are_clean() {
        // phi(1-s)/s must tend to -phi'(1) smoothly at s = 1e-14.
        let g = fam(5, 1.0); // Frank: -phi'(1) = 1/(e-1)
        let s = 1e-14;
        let v = g.phi_one_minus(s) / s;
        let expected = 1.0 / 1f64.exp_m1();
        assert!((v - expected).abs() < 1e-10, "got {v}, want {expected}");
        // Gumbel theta=2: phi(1-s)/s = s*(1+o(1)) -> 0 without noise
        let g = fam(4, 2.0);
        let v = g.phi_one_minus(1e-14) / 1e-14;
        assert!(v > 0.0 && v < 1.1e-14, "got {v}");
    }

    #[test]
    fn family16_theta_zero_is_linear() {
        let g = fam(16, 0.0);
        assert!((g.phi(0.25) - 0.75).abs() < 1e-15);
        assert!((g.phi_inv(0.75) - 0.25).abs() < 1e-15);
        assert_eq!(g.phi_at_zero(), 1.0);
    }

    #[test]
    fn clayton_closed_dk() {
        let g = fam(1, 1.0);
        // (-D)^2 (1+y)^{-1} = 2 (1+y)^{-3}; at y=0 -> 2
        assert!((g.dk_phi_inv_closed(0.0, 2).unwrap() - 2.0).abs() < 1e-14);
        // truncated Clayton: (-D)^1 of (1-y/2)^2 is (1-y/2), zero beyond y=2
        let g = fam(1, -0.5);
        assert!((g.dk_phi_inv_closed(1.0, 1).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(g.dk_phi_inv_closed(3.0, 1).unwrap(), 0.0);
        // third derivative of the quadratic vanishes
        assert_eq!(g.dk_phi_inv_closed(1.0, 3).unwrap(), 0.0);
    }

    #[test]
    fn family2_closed_dk() {
        let g = fam(2, 2.0);
        // phi_inv = 1 - sqrt(y); (-D)^1 = 0.5 y^{-1/2}
        let v = g.dk_phi_inv_closed(0.25, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "got {v}");
        // (-D)^2 = (-1)^2 * d2/dy2 (1 - y^{1/2}) = 0.25 y^{-3/2}
        let v = g.dk_phi_inv_closed(0.25, 2).unwrap();
        assert!((v - 2.0).abs() < 1e-14, "got {v}");
    }
}
