//! Special-function evaluators against independent compensated-arithmetic
//! finite-sum oracles, plus the polynomial identities tying them together.

mod common;

use common::{gauss2f1_oracle, jacobi_oracle, kummer_oracle, laguerre_oracle, log_gamma_ratio_oracle};
use hyperlandau::specfun::{
    gauss2f1_terminating, jacobi, kummer1f1_terminating, laguerre, ln_gamma, log_gamma_ratio,
};
use proptest::prelude::*;

const ALPHA_SAMPLES: [f64; 5] = [0.4, 1.2, 2.4, 4.0, 11.5];

#[test]
fn laguerre_agrees_with_series_oracle_low_degree() {
    let mut worst = 0.0f64;
    for &alpha in &ALPHA_SAMPLES {
        for k in 0..=12 {
            for &x in &[0.05, 0.8, 2.0, 5.5, 11.0, 24.0] {
                let got = laguerre(k, alpha, x).unwrap();
                let oracle = laguerre_oracle(k, alpha, x);
                worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
            }
        }
    }
    assert!(worst < 1e-11, "worst deviation {worst:e}");
}

#[test]
fn laguerre_agrees_with_series_oracle_high_degree() {
    // looser budget at degree up to 200
    let mut worst = 0.0f64;
    for k in [40usize, 120, 200] {
        for &x in &[0.5, 4.0, 17.0] {
            let got = laguerre(k, 2.4, x).unwrap();
            let oracle = laguerre_oracle(k, 2.4, x);
            worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
        }
    }
    assert!(worst < 1e-8, "worst deviation {worst:e}");
}

#[test]
fn jacobi_agrees_with_series_oracle() {
    let mut worst = 0.0f64;
    for &a in &ALPHA_SAMPLES {
        for &b in &[0.4, 1.0, 4.0] {
            for k in 0..=12 {
                for &t in &[-0.95, -0.5, -0.1, 0.0, 0.3, 0.77, 0.99] {
                    let got = jacobi(k, a, b, t).unwrap();
                    let oracle = jacobi_oracle(k, a, b, t);
                    worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
                }
            }
        }
    }
    assert!(worst < 1e-11, "worst deviation {worst:e}");
}

#[test]
fn jacobi_negative_integer_parameter_agrees_with_series_oracle() {
    let mut worst = 0.0f64;
    for s in 1..=6usize {
        for k in s..=8 {
            for &b in &ALPHA_SAMPLES {
                for &t in &[-0.8, -0.2, 0.4, 0.9] {
                    let got = jacobi(k, -(s as f64), b, t).unwrap();
                    let oracle = jacobi_oracle(k, -(s as f64), b, t);
                    worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
                }
            }
        }
    }
    assert!(worst < 1e-11, "worst deviation {worst:e}");
}

#[test]
fn terminating_hypergeometric_sums_agree_with_oracles() {
    let mut worst = 0.0f64;
    for k in 0..=12usize {
        for &b in &[-2.0, 0.7, 3.3] {
            for &c in &[0.9, 2.5, 5.4] {
                for &y in &[-1.1, -0.4, 0.25, 0.9] {
                    let got = gauss2f1_terminating(k, b, c, y).unwrap();
                    let oracle = gauss2f1_oracle(k, b, c, y);
                    worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
                }
            }
        }
    }
    for m in 0..=12usize {
        for &c in &[1.4, 3.0, 6.2] {
            for &x in &[0.3, 2.0, 8.0, 19.0] {
                let got = kummer1f1_terminating(m, c, x).unwrap();
                let oracle = kummer_oracle(m, c, x);
                worst = worst.max((got - oracle.value).abs() / (1.0 + oracle.magnitude));
            }
        }
    }
    assert!(worst < 1e-13, "worst deviation {worst:e}");
}

#[test]
fn parameter_shift_identity_against_oracles() {
    // m!/(m-s)! P_m^{(-s,a)}(t) = Gamma(m+a+1)/Gamma(m-s+a+1) ((t-1)/2)^s P_{m-s}^{(s,a)}(t)
    let mut worst = 0.0f64;
    for m in 1..=6usize {
        for s in 1..=m {
            for &a in &ALPHA_SAMPLES {
                for &t in &[-0.9, -0.3, 0.2, 0.7, 0.97] {
                    let lhs = log_gamma_ratio(m as f64 + 1.0, (m - s) as f64 + 1.0)
                        .unwrap()
                        .exp()
                        * jacobi(m, -(s as f64), a, t).unwrap();
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = log_gamma_ratio(m as f64 + a + 1.0, (m - s) as f64 + a + 1.0)
                        .unwrap()
                        .exp()
                        * sign
                        * (0.5 * (1.0 - t)).powi(s as i32)
                        * jacobi(m - s, s as f64, a, t).unwrap();
                    worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
                }
            }
        }
    }
    assert!(worst < 1e-10, "worst deviation {worst:e}");
}

#[test]
fn kummer_laguerre_reduction_by_independent_sums() {
    let mut worst = 0.0f64;
    for m in 0..=8usize {
        for &alpha in &ALPHA_SAMPLES {
            for &x in &[0.4, 1.5, 5.0, 12.0] {
                let lhs = kummer1f1_terminating(m, 1.0 + alpha, x).unwrap();
                let ratio = (ln_gamma(m as f64 + 1.0) + ln_gamma(1.0 + alpha)
                    - ln_gamma(1.0 + alpha + m as f64))
                .exp();
                let rhs = ratio * laguerre(m, alpha, x).unwrap();
                worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
    }
    assert!(worst < 1e-12, "worst deviation {worst:e}");
}

#[test]
fn bilateral_generating_function_truncation_converges() {
    // sum_k lambda^k 2F1(-k, -m; 1+a; y) L_k^{(a)}(xi), truncated at 200 terms,
    // against the closed product; parameters drawn from admissible levels
    let cases = [(1.6, 1usize), (3.5, 1), (3.5, 2), (10.2, 4)];
    let mut worst = 0.0f64;
    for &(nu, m) in &cases {
        let a = 2.0 * (nu - m as f64) - 1.0;
        for &(lam, y) in &[
            (-0.7f64, -0.5f64),
            (-0.7, -2.0),
            (0.3, -0.5),
            (0.5, -0.5),
            (0.7, -0.1),
        ] {
            {
                for &xi in &[0.7f64, 4.0] {
                    let denom = 1.0 - lam + y * lam;
                    assert!(denom.abs() > 0.2, "sample hits the closed-form pole");
                    let mut lhs = 0.0;
                    let mut mag = 0.0;
                    let mut pow = 1.0;
                    for k in 0..200usize {
                        let term = pow
                            * gauss2f1_terminating(k, -(m as f64), 1.0 + a, y).unwrap()
                            * laguerre(k, a, xi).unwrap();
                        lhs += term;
                        mag += term.abs();
                        pow *= lam;
                    }
                    let x11 = xi * y * lam / ((1.0 - lam) * denom);
                    let rhs = (1.0 - lam).powf(-(m as f64) - 1.0 - a)
                        * denom.powi(m as i32)
                        * (-xi * lam / (1.0 - lam)).exp()
                        * kummer1f1_terminating(m, 1.0 + a, x11).unwrap();
                    // alternating samples cancel heavily; budget the summation noise
                    let floor = 64.0 * f64::EPSILON * mag;
                    worst = worst.max(((lhs - rhs).abs() - floor).max(0.0) / rhs.abs().max(1e-300));
                }
            }
        }
    }
    assert!(worst < 1e-8, "worst deviation {worst:e}");
}

#[test]
fn log_gamma_ratio_matches_compensated_recurrence() {
    let mut worst = 0.0f64;
    for &(p, q) in &[
        (7.5f64, 2.5f64),
        (6.0, 5.0),
        (33.25, 12.25),
        (201.0, 1.0),
        (1000.5, 900.5),
    ] {
        let got = log_gamma_ratio(p, q).unwrap();
        let expect = log_gamma_ratio_oracle(p, q);
        worst = worst.max((got - expect).abs() / expect.abs());
    }
    assert!(worst < 1e-13, "worst deviation {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_symmetry_property(
        k in 0usize..=8,
        a in 0.1f64..6.0,
        b in 0.1f64..6.0,
        t in -0.9f64..0.9,
    ) {
        let lhs = jacobi(k, a, b, t).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = sign * jacobi(k, b, a, -t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn laguerre_matches_oracle_property(
        k in 0usize..=12,
        alpha in -0.5f64..8.0,
        x in 0.0f64..25.0,
    ) {
        let got = laguerre(k, alpha, x).unwrap();
        let oracle = laguerre_oracle(k, alpha, x);
        prop_assert!((got - oracle.value).abs() <= 1e-11 * (1.0 + oracle.magnitude));
    }

    #[test]
    fn hypergeometric_matches_oracle_property(
        k in 0usize..=10,
        b in -4.0f64..4.0,
        c in 0.5f64..6.0,
        y in -2.0f64..1.5,
    ) {
        let got = gauss2f1_terminating(k, b, c, y).unwrap();
        let oracle = gauss2f1_oracle(k, b, c, y);
        prop_assert!((got - oracle.value).abs() <= 1e-12 * (1.0 + oracle.magnitude));
    }
}
