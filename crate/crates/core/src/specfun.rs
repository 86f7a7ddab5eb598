//! Stable evaluation of the polynomial special functions the rest of the crate is
//! built from: generalized Laguerre polynomials, Jacobi polynomials (including
//! negative integer first parameters), terminating hypergeometric sums, and
//! log-Gamma utilities.
//!
//! Laguerre and Jacobi use the three-term recurrence in the degree for generic
//! parameters. When the first Jacobi parameter is a negative integer the recurrence
//! coefficients degenerate, so evaluation switches to the symmetry relation
//! `P_k^{(a,b)}(t) = (-1)^k P_k^{(b,a)}(-t)` followed by the terminating
//! hypergeometric representation, which is well posed there.

use crate::{Error, Result};

/// `ln(pi)`.
const LN_PI: f64 = 1.144_729_885_849_400_2;
/// `ln(2 * sqrt(e / pi))`, auxiliary constant of the Lanczos approximation.
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;
/// Lanczos shift.
const GAMMA_R: f64 = 10.900511;
/// Lanczos partial-fraction coefficients (Pugh's 11-term set).
const GAMMA_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

/// Natural log of the Gamma function, accurate to close to machine precision for
/// positive arguments.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, d)| s + d / (i as f64 - x));
        LN_PI
            - (std::f64::consts::PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / std::f64::consts::E).ln()
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, d)| s + d / (x + i as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).ln()
    }
}

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `ln Gamma(p) - ln Gamma(q)` for positive `p`, `q`.
///
/// When `p - q` is an exactly representable small integer the ratio is expanded by
/// the recurrence `Gamma(x+1) = x Gamma(x)`, which keeps nearby arguments free of
/// cancellation; otherwise the two Lanczos evaluations are subtracted directly.
pub fn log_gamma_ratio(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) || !(q > 0.0) || !p.is_finite() || !q.is_finite() {
        return Err(Error::Domain(format!(
            "log_gamma_ratio requires positive finite arguments, got ({p}, {q})"
        )));
    }
    if p == q {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if p > q { (q, p, 1.0) } else { (p, q, -1.0) };
    let diff = hi - lo;
    let rounded = diff.round();
    // Integer shifts coming from a shared base survive the subtraction to within a
    // few ulps; anything larger goes through the generic path.
    let int_shift = (1.0..=256.0).contains(&rounded)
        && (diff - rounded).abs() <= 16.0 * f64::EPSILON * hi.max(1.0);
    if int_shift {
        let n = rounded as usize;
        let mut acc = 0.0;
        for i in 0..n {
            acc += (lo + i as f64).ln();
        }
        Ok(sign * acc)
    } else {
        Ok(sign * (ln_gamma(hi) - ln_gamma(lo)))
    }
}

pub(crate) fn laguerre_rec(k: usize, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Degree recurrence over the complex plane; Laguerre polynomials are entire, so
/// the same recurrence applies verbatim.
pub(crate) fn laguerre_rec_c(
    k: usize,
    alpha: f64,
    x: num_complex::Complex64,
) -> num_complex::Complex64 {
    use num_complex::Complex64;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = Complex64::new(1.0 + alpha, 0.0) - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((Complex64::new(2.0 * jf + 1.0 + alpha, 0.0) - x) * cur
            - (jf + alpha) * prev)
            / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^{(alpha)}(x)` by the degree recurrence.
pub fn laguerre(k: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!(
            "laguerre parameter must exceed -1, got {alpha}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("laguerre argument not finite: {x}")));
    }
    Ok(laguerre_rec(k, alpha, x))
}

pub(crate) fn jacobi_rec(k: usize, a: f64, b: f64, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * t;
    for j in 2..=k {
        let jf = j as f64;
        let c0 = 2.0 * jf + a + b;
        let c1 = 2.0 * jf * (jf + a + b) * (c0 - 2.0);
        let c2 = (c0 - 1.0) * (c0 * (c0 - 2.0) * t + a * a - b * b);
        let c3 = 2.0 * (jf + a - 1.0) * (jf + b - 1.0) * c0;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_k^{(A, eta)}(x)` for `A > -1` through the terminating hypergeometric
/// representation, written as a fused sum so the two endpoint powers never divide
/// each other. Valid for any real `eta`, in particular negative integers.
fn jacobi_hyp(k: usize, big_a: f64, eta: f64, x: f64) -> f64 {
    let kf = k as f64;
    if x == 1.0 {
        // P_k^{(A, eta)}(1) = (A+1)_k / k!
        return (ln_gamma(big_a + 1.0 + kf) - ln_gamma(kf + 1.0) - ln_gamma(big_a + 1.0)).exp();
    }
    let pref = (ln_gamma(big_a + 1.0 + kf) - ln_gamma(kf + 1.0) - ln_gamma(big_a + 1.0)).exp();
    let xm = 0.5 * (x - 1.0);
    let xp = 0.5 * (x + 1.0);
    // c_j = (-k)_j (-(eta+k))_j / ((1+A)_j j!)
    let mut c = 1.0;
    let mut sum = 0.0;
    for j in 0..=k {
        let term = c * xm.powi(j as i32) * xp.powi((k - j) as i32);
        sum += term;
        if j < k {
            let jf = j as f64;
            c *= (jf - kf) * (jf - eta - kf) / ((1.0 + big_a + jf) * (jf + 1.0));
        }
    }
    pref * sum
}

/// Jacobi polynomial `P_k^{(a,b)}(t)`.
///
/// Generic parameters (`a, b > -1`) evaluate through the degree recurrence. A
/// negative integer `a` is accepted (the recurrence degenerates there) and routed
/// through the symmetry relation plus the terminating hypergeometric sum, which
/// realizes the standard polynomial continuation in the parameter.
pub fn jacobi(k: usize, a: f64, b: f64, t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "jacobi argument must lie in [-1, 1], got {t}"
        )));
    }
    let t = t.clamp(-1.0, 1.0);
    let neg_int_a = a <= -1.0 + 1e-9 && (a - a.round()).abs() < 1e-9;
    if neg_int_a {
        if !(b > -1.0) {
            return Err(Error::Domain(format!(
                "jacobi with integer a <= -1 needs b > -1, got b = {b}"
            )));
        }
        // P_k^{(a,b)}(t) = (-1)^k P_k^{(b,a)}(-t), then expand around the b-side.
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * jacobi_hyp(k, b, a.round(), -t));
    }
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::Domain(format!(
            "jacobi parameters out of range: a = {a}, b = {b}"
        )));
    }
    Ok(jacobi_rec(k, a, b, t))
}

/// Terminating Gauss hypergeometric sum
/// `2F1(-k, b; c; y) = sum_{j=0}^{k} (-k)_j (b)_j / ((c)_j j!) y^j`.
pub fn gauss2f1_terminating(k: usize, b: f64, c: f64, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Domain(format!("2F1 argument not finite: {y}")));
    }
    let kf = k as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..k {
        let jf = j as f64;
        let num = (jf - kf) * (b + jf);
        if num == 0.0 {
            break; // the numerator Pochhammer hit zero, every later term vanishes
        }
        let den = c + jf;
        if den.abs() < 1e-14 * (1.0 + c.abs()) {
            return Err(Error::HypergeometricPole { param: c, term: j + 1 });
        }
        term *= num / (den * (jf + 1.0)) * y;
        sum += term;
    }
    Ok(sum)
}

/// Terminating confluent sum `1F1(-m; c; x) = sum_{j=0}^{m} (-m)_j / ((c)_j j!) x^j`.
pub fn kummer1f1_terminating(m: usize, c: f64, x: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "1F1 denominator parameter must be positive, got {c}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("1F1 argument not finite: {x}")));
    }
    let mf = m as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..m {
        let jf = j as f64;
        term *= (jf - mf) / ((c + jf) * (jf + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn laguerre_degree_zero_is_one() {
        assert_eq!(laguerre(0, 2.3, 7.7).unwrap(), 1.0);
    }

    #[test]
    fn laguerre_degree_one() {
        // L_1^{(0)}(2) = 1 + 0 - 2
        assert_eq!(laguerre(1, 0.0, 2.0).unwrap(), -1.0);
    }

    #[test]
    fn laguerre_frozen_value() {
        // L_4^{(6)}(3) from the series definition: 210 - 360 + 202.5 - 45 + 3.375
        assert_relative_eq!(laguerre(4, 6.0, 3.0).unwrap(), 10.875, max_relative = 1e-13);
    }

    #[test]
    fn laguerre_rejects_bad_input() {
        assert!(laguerre(3, 0.5, f64::NAN).is_err());
        assert!(laguerre(3, -1.5, 1.0).is_err());
    }

    #[test]
    fn jacobi_degree_zero_is_one() {
        assert_eq!(jacobi(0, 1.2, 4.0, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn jacobi_symmetry_even_degree() {
        let lhs = jacobi(2, 1.0, 3.0, -0.3).unwrap();
        let rhs = jacobi(2, 3.0, 1.0, 0.3).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn jacobi_frozen_value() {
        // P_3^{(0, 4.2)}(0.5) from the binomial series: -0.081375 exactly in decimal
        assert_relative_eq!(
            jacobi(3, 0.0, 4.2, 0.5).unwrap(),
            -0.081375,
            max_relative = 1e-12
        );
    }

    #[test]
    fn jacobi_rejects_argument_outside_interval() {
        assert!(jacobi(2, 0.5, 0.5, 1.1).is_err());
        assert!(jacobi(2, 0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn jacobi_negative_integer_parameter_at_one() {
        // P_k^{(-s, b)}(1) = (1-s)_k / k! vanishes once the product crosses zero
        let v = jacobi(3, -2.0, 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn jacobi_negative_integer_matches_series() {
        // P_2^{(-1, 3)}(t): series sum_s C(1, 2-s) C(5, s) ((t-1)/2)^s ((t+1)/2)^{2-s}
        // at t = 0.4: s=1: 1*5*(-0.3)*(0.7) = -1.05 ; s=2: 10*0.09 = 0.9 ; s=0 term 0
        let v = jacobi(2, -1.0, 3.0, 0.4).unwrap();
        assert_relative_eq!(v, -1.05 + 0.9, max_relative = 1e-12);
    }

    #[test]
    fn gauss2f1_terminates_immediately_for_k_zero() {
        assert_eq!(gauss2f1_terminating(0, 3.3, 1.1, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn gauss2f1_two_terms() {
        // 1 - (2/4)(0.5)
        assert_relative_eq!(
            gauss2f1_terminating(1, 2.0, 4.0, 0.5).unwrap(),
            0.75,
            max_relative = 1e-14
        );
    }

    #[test]
    fn gauss2f1_frozen_value() {
        // 2F1(-3, -2; 5.4; -1.1) = 1 - 11/9 + 121/576 = -7/576 (term j=3 vanishes)
        assert_relative_eq!(
            gauss2f1_terminating(3, -2.0, 5.4, -1.1).unwrap(),
            -7.0 / 576.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gauss2f1_detects_pole() {
        // c = -1 gives (c)_2 = 0 with a live numerator
        assert!(matches!(
            gauss2f1_terminating(3, 2.0, -1.0, 0.5),
            Err(Error::HypergeometricPole { .. })
        ));
    }

    #[test]
    fn kummer_trivial_and_two_term() {
        assert_eq!(kummer1f1_terminating(0, 3.0, 9.9).unwrap(), 1.0);
        // 1 - (1/2)*2
        assert_abs_diff_eq!(
            kummer1f1_terminating(1, 2.0, 2.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn kummer_reduces_to_laguerre() {
        // 1F1(-m; 1+alpha; x) = m! Gamma(1+alpha) / Gamma(1+alpha+m) L_m^{(alpha)}(x)
        let (m, alpha, x) = (2usize, 4.0, 1.5);
        let lhs = kummer1f1_terminating(m, 1.0 + alpha, x).unwrap();
        let ratio = (ln_gamma(m as f64 + 1.0) + ln_gamma(1.0 + alpha)
            - ln_gamma(1.0 + alpha + m as f64))
        .exp();
        let rhs = ratio * laguerre(m, alpha, x).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn log_gamma_ratio_identity_and_shift() {
        assert_eq!(log_gamma_ratio(5.0, 5.0).unwrap(), 0.0);
        assert_relative_eq!(
            log_gamma_ratio(6.0, 5.0).unwrap(),
            5.0_f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_gamma_ratio_repeated_recurrence() {
        let expect = (6.5_f64 * 5.5 * 4.5 * 3.5 * 2.5).ln();
        assert_relative_eq!(
            log_gamma_ratio(7.5, 2.5).unwrap(),
            expect,
            max_relative = 1e-14
        );
    }

    #[test]
    fn log_gamma_ratio_rejects_nonpositive() {
        assert!(log_gamma_ratio(-1.0, 2.0).is_err());
        assert!(log_gamma_ratio(2.0, 0.0).is_err());
    }

    #[test]
    fn ln_gamma_small_integers() {
        assert_abs_diff_eq!(gamma(5.0), 24.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma(7.0), 720.0, epsilon = 1e-10);
    }
}
