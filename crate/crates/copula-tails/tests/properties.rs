//! Property tests for the module-level invariants: evaluation consistency,
//! formula invariances, classification implications, and oracle agreements.

use proptest::prelude::*;

use copula_tails::classify::{classify, LowerCase, UpperCase};
use copula_tails::eval::{copula_cdf, rectangle_prob, survival_prob, RectangleQuery};
use copula_tails::limits::{
    lower_ad_limit, nad_r, nad_r_integral_oracle, tail_coefficients, upper_r,
};
use copula_tails::quadrature::nested_adaptive;
use copula_tails::{make_generator, GeneratorHandle};

/// Pool of valid (family, theta, max_dim) triples spanning all six tail
/// cases.  `max_dim` is the largest dimension at which the generator inverse
/// is known d-monotone: completely monotone inverses (gamma, logarithmic,
/// Sibuya and stable frailties) get 4; generators valid only bivariately
/// (non-strict inverses with derivative jumps at phi(0), negative
/// parameters) get 2.
const POOL: &[(u8, f64, usize)] = &[
    (1, -0.5, 2),
    (1, 0.0, 4),
    (1, 1.0, 4),
    (1, 2.0, 4),
    (2, 2.0, 2),
    (3, 0.5, 4),
    (4, 1.5, 4),
    (4, 3.0, 4),
    (5, -2.0, 2),
    (5, 2.0, 4),
    (6, 2.0, 4),
    (7, 0.5, 2),
    (9, 0.5, 2),
    (12, 1.5, 2),
    (14, 2.0, 2),
    (16, 1.0, 2),
    (19, 1.0, 2),
    (23, 1.0, 2),
];

fn pool_handle(ix: usize) -> GeneratorHandle {
    let (f, t, _) = POOL[ix % POOL.len()];
    make_generator(f, t).unwrap()
}

fn sorted_pair(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

proptest! {
    /// 2-increasingness up to roundoff: every rectangle has probability
    /// >= -1e-12.
    #[test]
    fn rectangles_are_nonnegative(
        ix in 0usize..POOL.len(),
        coords in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 2..=4),
    ) {
        let h = pool_handle(ix);
        let max_dim = POOL[ix % POOL.len()].2;
        let coords = &coords[..coords.len().min(max_dim)];
        let (lower, upper): (Vec<f64>, Vec<f64>) =
            coords.iter().map(|&(a, b)| sorted_pair(a, b)).unzip();
        let q = RectangleQuery::new(lower, upper).unwrap();
        let r = rectangle_prob(&h, &q).unwrap();
        prop_assert!(r.value >= -1e-12, "negative rectangle: {}", r.value);
        prop_assert!(r.value <= 1.0 + 1e-12);
    }

    /// Joint exceedance from the rectangle form equals direct
    /// inclusion-exclusion over lower-orthant values.
    #[test]
    fn survival_matches_inclusion_exclusion(
        ix in 0usize..POOL.len(),
        x in proptest::collection::vec(0.05f64..=1.0, 2..=4),
        s in 0.01f64..=0.5,
    ) {
        let h = pool_handle(ix);
        let d = x.len();
        let via_rect = survival_prob(&h, s, &x).unwrap().value;
        // Pr[all U_i > a_i] = sum over subsets J of (-1)^|J| Pr[all J: U_j <= a_j].
        let a: Vec<f64> = x.iter().map(|&xi| 1.0 - s * xi).collect();
        let mut direct = 0.0;
        for mask in 0..(1u32 << d) {
            let sub: Vec<f64> = (0..d).filter(|i| mask & (1 << i) != 0).map(|i| a[i]).collect();
            let p = match sub.len() {
                0 => 1.0,
                1 => sub[0],
                _ => copula_cdf(&h, &sub).unwrap(),
            };
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            direct += sign * p;
        }
        prop_assert!((via_rect - direct).abs() <= 1e-10,
            "rect {via_rect} vs inclusion-exclusion {direct}");
    }

    /// A rectangle spanning (0,1] on all but one axis reduces to the margin.
    #[test]
    fn margins_are_uniform(
        ix in 0usize..POOL.len(),
        bounds in (0.0f64..=1.0, 0.0f64..=1.0),
        d in 2usize..=4,
        axis in 0usize..4,
    ) {
        let axis = axis % d;
        let h = pool_handle(ix);
        let (u, v) = sorted_pair(bounds.0, bounds.1);
        let mut lower = vec![0.0; d];
        let mut upper = vec![1.0; d];
        lower[axis] = u;
        upper[axis] = v;
        let q = RectangleQuery::new(lower, upper).unwrap();
        let r = rectangle_prob(&h, &q).unwrap();
        prop_assert!((r.value - (v - u)).abs() <= 1e-12,
            "margin {} vs {}", r.value, v - u);
    }

    /// The power-form alternating sum is monotone in each coordinate, scales
    /// linearly on the diagonal, and reduces to u1 at k = 1.
    #[test]
    fn power_sum_invariances(
        theta1 in 1.05f64..=8.0,
        u in proptest::collection::vec(0.05f64..=2.0, 2..=4),
        bump_ix in 0usize..4,
        bump in 0.01f64..=0.5,
        c in 0.1f64..=3.0,
    ) {
        let base = upper_r(theta1, &u).unwrap();
        let mut bumped = u.clone();
        let i = bump_ix % u.len();
        bumped[i] += bump;
        prop_assert!(upper_r(theta1, &bumped).unwrap() >= base - 1e-12);

        let ones = vec![1.0; u.len()];
        let diag = vec![c; u.len()];
        let lhs = upper_r(theta1, &diag).unwrap();
        let rhs = c * upper_r(theta1, &ones).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));

        prop_assert!((upper_r(theta1, &u[..1]).unwrap() - u[0]).abs() <= 1e-15);
    }

    /// The lower-tail dependent limit is homogeneous of degree one and
    /// permutation symmetric.
    #[test]
    fn lower_dependent_limit_invariances(
        theta0 in 0.2f64..=6.0,
        x in proptest::collection::vec(0.1f64..=3.0, 2..=4),
        c in 0.1f64..=3.0,
    ) {
        let v = lower_ad_limit(theta0, &x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|&xi| c * xi).collect();
        let vs = lower_ad_limit(theta0, &scaled).unwrap();
        prop_assert!((vs - c * v).abs() <= 1e-12 * (c * v).abs().max(1e-12));

        let mut rev = x.clone();
        rev.reverse();
        let vr = lower_ad_limit(theta0, &rev).unwrap();
        prop_assert!((vr - v).abs() <= 1e-12 * v.abs().max(1e-12));
    }

    /// The log-form alternating sum is homogeneous of degree one.
    #[test]
    fn log_form_sum_homogeneous(
        u in proptest::collection::vec(0.5f64..=2.0, 2..=3),
        c in 0.5f64..=2.0,
    ) {
        let v = nad_r(&u).unwrap();
        let scaled: Vec<f64> = u.iter().map(|&x| c * x).collect();
        let vs = nad_r(&scaled).unwrap();
        prop_assert!((vs - c * v).abs() <= 1e-10 * (c * v).abs().max(1.0),
            "{vs} vs {}", c * v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    /// Decision-quantity ranges, case consistency, and coefficient ranges
    /// hold for every pool generator.
    #[test]
    fn classification_implications(ix in 0usize..POOL.len()) {
        let h = pool_handle(ix);
        let c = classify(&h).unwrap();
        prop_assert!(c.theta1 >= 1.0);
        prop_assert!(c.theta0 >= 0.0);
        prop_assert!(c.dphi_at_1 <= 0.0);
        prop_assert!((c.lower_case == LowerCase::NonStrict) == c.phi_at_zero.is_finite());
        prop_assert!((c.upper_case == UpperCase::NearIndependent) == (c.dphi_at_1 < 0.0));
        if c.upper_case == UpperCase::AsymptoticDependent {
            prop_assert!(c.theta1 > 1.0);
        }
        if c.lower_case == LowerCase::AsymptoticDependent {
            prop_assert!(c.theta0 > 0.0);
        }

        let t = tail_coefficients(&c).unwrap();
        prop_assert!((0.0..=1.0).contains(&t.lambda_l));
        prop_assert!((0.0..=1.0).contains(&t.lambda_u));
        prop_assert!((0.0..=1.0).contains(&t.eta_l));
        prop_assert!(t.eta_u == 0.5 || t.eta_u == 1.0);
        // Positive tail dependence coefficients only in the dependent cases.
        prop_assert!((t.lambda_u > 0.0) == (c.upper_case == UpperCase::AsymptoticDependent));
        prop_assert!((t.lambda_l > 0.0) == (c.lower_case == LowerCase::AsymptoticDependent));
    }

    /// The generalized inverse round-trips through the generator.
    #[test]
    fn inverse_round_trip(ix in 0usize..POOL.len(), t in 0.01f64..=0.99) {
        let h = pool_handle(ix);
        let back = h.phi_inv(h.phi(t));
        prop_assert!((back - t).abs() <= 1e-9, "round trip {t} -> {back}");
        // Beyond phi(0), the generalized inverse is identically zero.
        if h.phi_at_zero().is_finite() {
            prop_assert_eq!(h.phi_inv(h.phi_at_zero() * 1.5), 0.0);
        }
    }
}

/// Log-form alternating sum vs the nested quadrature oracle on [0.5, 2]^k.
#[test]
fn log_form_sum_matches_integral_oracle() {
    let cases: [&[f64]; 4] = [
        &[0.5, 2.0],
        &[1.7, 0.6],
        &[2.0, 2.0],
        &[0.9, 1.4, 0.7],
    ];
    for u in cases {
        let sum = nad_r(u).unwrap();
        let oracle = nad_r_integral_oracle(u).unwrap();
        assert!(
            (sum - oracle).abs() <= 1e-6,
            "u = {u:?}: sum {sum} vs oracle {oracle}"
        );
    }
}

/// The diagonal of a generator with infinitely fast lower-tail decay drops
/// below every power of s.
#[test]
fn diagonal_beats_every_power() {
    let h = make_generator(9, 1.0).unwrap();
    for p in [2i32, 5, 10] {
        // Pick s deep enough for the exponent comparison to have resolved.
        let s = 10f64.powi(-(p + 2));
        let c = copula_cdf(&h, &[s, s]).unwrap();
        assert!(
            c <= s.powi(p),
            "p = {p}: C = {c:.3e} vs s^p = {:.3e}",
            s.powi(p)
        );
    }
}

/// For independence (all inverse derivatives known in closed form), the
/// alternating rectangle sum agrees with the iterated-integral form.
#[test]
fn rectangle_sum_matches_integral_for_independence() {
    let h = make_generator(1, 0.0).unwrap();
    // Pr[u < U <= v] over phi-space: integral over prod [phi(v_i), phi(u_i)]
    // of (-D)^d phi_inv(sum y_i); for exp(-.) that integrand is exp(-sum).
    let cases: [(&[f64], &[f64]); 2] = [
        (&[0.2, 0.3], &[0.7, 0.9]),
        (&[0.3, 0.2, 0.4], &[0.8, 0.6, 0.9]),
    ];
    for (lower, upper) in cases {
        let q = RectangleQuery::new(lower.to_vec(), upper.to_vec()).unwrap();
        let direct = rectangle_prob(&h, &q).unwrap().value;
        // Shift to [0, width] boxes: integral of exp(-(base + sum t)).
        let base: f64 = upper.iter().map(|&v| h.phi(v)).sum();
        let widths: Vec<f64> = lower
            .iter()
            .zip(upper)
            .map(|(&u, &v)| h.phi(u) - h.phi(v))
            .collect();
        let integral = nested_adaptive(
            &|t: &[f64]| (-(base + t.iter().sum::<f64>())).exp(),
            &widths,
            1e-9,
        )
        .unwrap();
        assert!(
            (direct - integral).abs() <= 1e-6,
            "rect {direct} vs integral {integral}"
        );
    }
}
