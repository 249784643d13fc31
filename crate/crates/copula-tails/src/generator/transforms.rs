//! Generator transformations: power, exponential, argument-power (both
//! tails), and scaling.  Each row derives the tail registry of the result
//! from the registry of the base generator.

use super::families::fmt_f64;
use super::{Generator, GeneratorHandle, Kappa, Registry};
use crate::error::{CopulaError, Result};

#[derive(Clone)]
pub struct Transformed {
    pub base: GeneratorHandle,
    pub id: u8,
    pub alpha: f64,
}

fn alpha_range(id: u8) -> Option<(fn(f64) -> bool, &'static str)> {
    Some(match id {
        1 | 4 => (|a| a > 1.0, "(1, inf)"),
        2 => (|a| a > 0.0, "(0, inf)"),
        3 | 5 => (|a| a > 0.0 && a < 1.0, "(0, 1)"),
        _ => return None,
    })
}

impl Transformed {
    pub fn new(base: GeneratorHandle, id: u8, alpha: f64) -> Result<Self> {
        let (check, range) = alpha_range(id).ok_or(CopulaError::UnknownTransform(id))?;
        if !alpha.is_finite() || !check(alpha) {
            return Err(CopulaError::AlphaOutOfRange {
                transform: id,
                alpha,
                range,
            });
        }
        Ok(Transformed { base, id, alpha })
    }

    /// phi(alpha*(1-s)) - phi(alpha), switching to a Taylor form when the
    /// direct difference loses too many digits (scaling transform only).
    fn scaled_tail(&self, s: f64) -> f64 {
        let a = self.alpha;
        if s > 1e-7 {
            return self.base.phi(a * (1.0 - s)) - self.base.phi(a);
        }
        // phi(a - h) - phi(a) = -h phi'(a) + h^2/2 phi''(a) + O(h^3)
        let h = a * s;
        let d1 = self.base.dphi(a);
        let delta = 1e-5 * a.min(1.0 - a);
        let d2 = (self.base.dphi(a + delta) - self.base.dphi(a - delta)) / (2.0 * delta);
        -h * d1 + 0.5 * h * h * d2
    }
}

impl Generator for Transformed {
    fn phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        if t <= 0.0 {
            return self.phi_at_zero();
        }
        let a = self.alpha;
        match self.id {
            1 => self.base.phi(t).powf(a),
            2 => (a * self.base.phi(t)).exp_m1() / a,
            3 => self.base.phi((a * t.ln()).exp()),
            // 1 - (1-t)^a = -expm1(a*log1p(-t)), exact down to tiny t where
            // the complementary form 1 - exp(...) would round to zero.
            4 => self.base.phi(-(a * (-t).ln_1p()).exp_m1()),
            5 => self.base.phi(a * t) - self.base.phi(a),
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
        let a = self.alpha;
        match self.id {
            1 => self.base.phi_one_minus(s).powf(a),
            2 => (a * self.base.phi_one_minus(s)).exp_m1() / a,
            // (1-s)^a = 1 - s' with s' = -expm1(a*log1p(-s))
            3 => self.base.phi_one_minus(-(a * (-s).ln_1p()).exp_m1()),
            4 => self.base.phi_one_minus(s.powf(a)),
            5 => self.scaled_tail(s),
            _ => unreachable!(),
        }
    }

    fn dphi(&self, t: f64) -> f64 {
        let a = self.alpha;
        match self.id {
            1 => a * self.base.phi(t).powf(a - 1.0) * self.base.dphi(t),
            2 => (a * self.base.phi(t)).exp() * self.base.dphi(t),
            3 => {
                let ta = (a * t.ln()).exp();
                a * ta / t * self.base.dphi(ta)
            }
            4 => {
                let sa = (a * (-t).ln_1p()).exp(); // (1-t)^a
                let u = -(a * (-t).ln_1p()).exp_m1(); // 1 - (1-t)^a, stable
                a * sa / (1.0 - t) * self.base.dphi(u)
            }
            5 => a * self.base.dphi(a * t),
            _ => unreachable!(),
        }
    }

    fn dphi_one_minus(&self, s: f64) -> f64 {
        let a = self.alpha;
        match self.id {
            1 => a * self.base.phi_one_minus(s).powf(a - 1.0) * self.base.dphi_one_minus(s),
            2 => (a * self.base.phi_one_minus(s)).exp() * self.base.dphi_one_minus(s),
            3 => {
                let sp = -(a * (-s).ln_1p()).exp_m1(); // 1 - (1-s)^a
                a * (1.0 - sp) / (1.0 - s) * self.base.dphi_one_minus(sp)
            }
            4 => a * s.powf(a - 1.0) * self.base.dphi_one_minus(s.powf(a)),
            5 => a * self.base.dphi(a * (1.0 - s)),
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
        let a = self.alpha;
        match self.id {
            1 => self.base.phi_inv(y.powf(1.0 / a)),
            2 => self.base.phi_inv((a * y).ln_1p() / a),
            3 => (self.base.phi_inv(y).ln() / a).exp(),
            4 => -((-self.base.phi_inv(y)).ln_1p() / a).exp_m1(),
            5 => self.base.phi_inv(y + self.base.phi(a)) / a,
            _ => unreachable!(),
        }
    }

    fn phi_at_zero(&self) -> f64 {
        let a = self.alpha;
        let p0 = self.base.phi_at_zero();
        match self.id {
            1 => p0.powf(a),
            2 => {
                if p0.is_finite() {
                    (a * p0).exp_m1() / a
                } else {
                    f64::INFINITY
                }
            }
            3 | 4 => p0,
            5 => p0 - self.base.phi(a),
            _ => unreachable!(),
        }
    }

    fn registry(&self) -> Option<Registry> {
        let b = self.base.registry()?;
        let a = self.alpha;
        let reg = match self.id {
            1 => Registry {
                neg_dphi1: 0.0,
                theta1: a * b.theta1,
                phi_at_zero: b.phi_at_zero.powf(a),
                theta0: b.theta0.map(|v| a * v),
                kappa: match b.kappa {
                    Kappa::Known(k) => Kappa::Known(k / a + 1.0 - 1.0 / a),
                    other => other,
                },
            },
            2 => {
                let phi_at_zero = if b.phi_at_zero.is_finite() {
                    (a * b.phi_at_zero).exp_m1() / a
                } else {
                    f64::INFINITY
                };
                // No general formulas for theta0/kappa; a finite phi(0)
                // still forces theta0 = 0 and makes kappa irrelevant.
                let (theta0, kappa) = if phi_at_zero.is_finite() {
                    (Some(0.0), Kappa::NotApplicable)
                } else {
                    (None, Kappa::Unknown)
                };
                Registry {
                    neg_dphi1: b.neg_dphi1,
                    theta1: b.theta1,
                    phi_at_zero,
                    theta0,
                    kappa,
                }
            }
            3 => Registry {
                neg_dphi1: a * b.neg_dphi1,
                theta1: b.theta1,
                phi_at_zero: b.phi_at_zero,
                theta0: b.theta0.map(|v| a * v),
                kappa: b.kappa,
            },
            4 => Registry {
                neg_dphi1: 0.0,
                theta1: a * b.theta1,
                phi_at_zero: b.phi_at_zero,
                theta0: b.theta0,
                kappa: b.kappa,
            },
            5 => Registry {
                neg_dphi1: -a * self.base.dphi(a),
                theta1: 1.0,
                phi_at_zero: if b.phi_at_zero.is_finite() {
                    b.phi_at_zero - self.base.phi(a)
                } else {
                    f64::INFINITY
                },
                theta0: b.theta0,
                kappa: b.kappa,
            },
            _ => return None,
        };
        Some(reg)
    }

    fn describe(&self) -> String {
        format!(
            "{},transform:{},alpha:{}",
            self.base.describe(),
            self.id,
            fmt_f64(self.alpha)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::make_generator;

    fn transformed(fam: u8, th: f64, id: u8, a: f64) -> GeneratorHandle {
        let base = make_generator(fam, th).unwrap();
        GeneratorHandle::new(std::sync::Arc::new(
            Transformed::new(base, id, a).unwrap(),
        ))
    }

    #[test]
    fn alpha_validation() {
        let base = make_generator(1, 1.0).unwrap();
        assert!(Transformed::new(base.clone(), 1, 1.0).is_err());
        assert!(Transformed::new(base.clone(), 3, 1.0).is_err());
        assert!(Transformed::new(base.clone(), 6, 0.5).is_err());
        assert!(Transformed::new(base, 5, 0.5).is_ok());
    }

    #[test]
    fn scaling_transform_spec_example() {
        // base family 1 theta=1, transform 5, alpha=0.5:
        // phi_a(t) = 2/t - 2, so phi_a(0.5) = 2.
        let g = transformed(1, 1.0, 5, 0.5);
        assert!((g.phi(0.5) - 2.0).abs() < 1e-14);
        assert!((g.phi_inv(2.0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn power_transform_registry_spec_example() {
        // base family 4 theta=2, transform 1, alpha=2: theta1 = 4, kappa = 0.75
        let g = transformed(4, 2.0, 1, 2.0);
        let r = g.registry().unwrap();
        assert_eq!(r.theta1, 4.0);
        match r.kappa {
            Kappa::Known(k) => assert!((k - 0.75).abs() < 1e-14),
            other => panic!("unexpected kappa {other:?}"),
        }
    }

    #[test]
    fn transform_matches_direct_substitution() {
        // Pointwise agreement with direct formula substitution for each row.
        let base = make_generator(1, 1.0).unwrap();
        let phi = |t: f64| 1.0 / t - 1.0;
        let cases: Vec<(u8, f64, Box<dyn Fn(f64) -> f64>)> = vec![
            (1, 2.0, Box::new(move |t: f64| phi(t).powi(2))),
            (2, 2.0, Box::new(move |t: f64| ((2.0 * phi(t)).exp() - 1.0) / 2.0)),
            (3, 0.5, Box::new(move |t: f64| phi(t.sqrt()))),
            (4, 2.0, Box::new(move |t: f64| phi(1.0 - (1.0 - t).powi(2)))),
            (5, 0.5, Box::new(move |t: f64| phi(0.5 * t) - phi(0.5))),
        ];
        for (id, a, direct) in cases {
            let g = GeneratorHandle::new(std::sync::Arc::new(
                Transformed::new(base.clone(), id, a).unwrap(),
            ));
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let got = g.phi(t);
                let want = direct(t);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "transform {id} at t={t}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn transform_roundtrip_inverse() {
        for id in 1..=5u8 {
            let a = match id {
                1 | 4 => 2.0,
                _ => 0.5,
            };
            let g = transformed(4, 2.0, id, a);
            for i in 1..20 {
                let t = i as f64 / 20.0;
                let y = g.phi(t);
                if !y.is_finite() || y >= g.phi_at_zero() {
                    continue;
                }
                let back = g.phi_inv(y);
                assert!(
                    (back - t).abs() < 1e-9,
                    "transform {id}: t={t}, back={back}"
                );
            }
        }
    }

    #[test]
    fn scaled_tail_is_smooth_at_crossover() {
        // The Taylor branch must join the direct difference continuously.
        let g = transformed(4, 2.0, 5, 0.5);
        let a = g.phi_one_minus(1.2e-7);
        let b = g.phi_one_minus(0.8e-7);
        let ratio = a / b;
        assert!(
            (ratio - 1.5).abs() < 1e-4,
            "tail not smooth across branch: ratio {ratio}"
        );
    }

    #[test]
    fn dphi_one_minus_consistency() {
        for id in 1..=5u8 {
            let a = match id {
                1 | 4 => 2.0,
                _ => 0.5,
            };
            let g = transformed(5, 1.0, id, a);
            for &s in &[0.3, 0.1, 1e-3] {
                let d1 = g.dphi(1.0 - s);
                let d2 = g.dphi_one_minus(s);
                assert!(
                    (d1 - d2).abs() <= 1e-7 * d1.abs().max(1e-9),
                    "transform {id} s={s}: {d1} vs {d2}"
                );
            }
        }
    }
}
