//! Shared test support: compensated (double-double) arithmetic and the
//! finite-sum reference evaluations used as independent oracles. Nothing here
//! touches the library's recurrence or hypergeometric code paths.

#![allow(dead_code)]

/// Unevaluated sum of two doubles, `hi + lo` with `|lo| <= ulp(hi)/2`;
/// roughly 32 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn add_f(self, o: f64) -> Dd {
        self.add(Dd::from(o))
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let e = e + self.lo * o;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f(q1));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul_f(q2));
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f(q3)
    }

    pub fn div_f(self, o: f64) -> Dd {
        self.div(Dd::from(o))
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

/// Oracle value together with the magnitude sum of its terms (the scale on which
/// rounding noise of any double-precision evaluation must be judged).
pub struct OracleValue {
    pub value: f64,
    pub magnitude: f64,
}

/// `L_k^{(alpha)}(x) = sum_j (-1)^j C(k+alpha, k-j) x^j / j!` in dd arithmetic.
pub fn laguerre_oracle(k: usize, alpha: f64, x: f64) -> OracleValue {
    // leading coefficient C(k+alpha, k)
    let mut term = (1..=k).fold(Dd::ONE, |acc, i| {
        acc.mul(Dd::from(alpha).add_f(i as f64)).div_f(i as f64)
    });
    let mut sum = term;
    let mut mag = term.abs();
    let kf = k as f64;
    for j in 0..k {
        let jf = j as f64;
        term = term
            .mul_f(-(kf - jf))
            .mul_f(x)
            .div(Dd::from(alpha).add_f(jf + 1.0).mul_f(jf + 1.0));
        sum = sum.add(term);
        mag = mag.add(term.abs());
    }
    OracleValue {
        value: sum.value(),
        magnitude: mag.value(),
    }
}

/// Generalized binomial `C(n + shift, r)` as a finite product in dd.
fn binom_shifted(shift: f64, n: usize, r: usize) -> Dd {
    (1..=r).fold(Dd::ONE, |acc, i| {
        acc.mul(Dd::from(shift).add_f((n - r + i) as f64)).div_f(i as f64)
    })
}

/// `P_n^{(a,b)}(t) = sum_s C(n+a, n-s) C(n+b, s) ((t-1)/2)^s ((t+1)/2)^{n-s}`
/// in dd arithmetic; valid for any real parameters including negative integers.
pub fn jacobi_oracle(n: usize, a: f64, b: f64, t: f64) -> OracleValue {
    let tm = Dd::from(t).add_f(-1.0).div_f(2.0);
    let tp = Dd::from(t).add_f(1.0).div_f(2.0);
    let mut sum = Dd::ZERO;
    let mut mag = Dd::ZERO;
    for s in 0..=n {
        let mut term = binom_shifted(a, n, n - s).mul(binom_shifted(b, n, s));
        for _ in 0..s {
            term = term.mul(tm);
        }
        for _ in 0..(n - s) {
            term = term.mul(tp);
        }
        sum = sum.add(term);
        mag = mag.add(term.abs());
    }
    OracleValue {
        value: sum.value(),
        magnitude: mag.value(),
    }
}

/// `2F1(-k, b; c; y)` by its terminating sum in dd.
pub fn gauss2f1_oracle(k: usize, b: f64, c: f64, y: f64) -> OracleValue {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut mag = Dd::ONE;
    let kf = k as f64;
    for j in 0..k {
        let jf = j as f64;
        term = term
            .mul_f(jf - kf)
            .mul(Dd::from(b).add_f(jf))
            .mul_f(y)
            .div(Dd::from(c).add_f(jf).mul_f(jf + 1.0));
        sum = sum.add(term);
        mag = mag.add(term.abs());
    }
    OracleValue {
        value: sum.value(),
        magnitude: mag.value(),
    }
}

/// `1F1(-m; c; x)` by its terminating sum in dd.
pub fn kummer_oracle(m: usize, c: f64, x: f64) -> OracleValue {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut mag = Dd::ONE;
    let mf = m as f64;
    for j in 0..m {
        let jf = j as f64;
        term = term
            .mul_f(jf - mf)
            .mul_f(x)
            .div(Dd::from(c).add_f(jf).mul_f(jf + 1.0));
        sum = sum.add(term);
        mag = mag.add(term.abs());
    }
    OracleValue {
        value: sum.value(),
        magnitude: mag.value(),
    }
}

/// `ln Gamma(p) - ln Gamma(q)` for `p - q` a small positive integer, as the
/// compensated sum of `ln(q + i)`.
pub fn log_gamma_ratio_oracle(p: f64, q: f64) -> f64 {
    assert!(p > q && ((p - q) - (p - q).round()).abs() < 1e-9);
    let n = (p - q).round() as usize;
    let mut acc = Dd::ZERO;
    for i in 0..n {
        acc = acc.add_f((q + i as f64).ln());
    }
    acc.value()
}

#[cfg(test)]
mod dd_sanity {
    use super::*;

    #[test]
    fn dd_add_keeps_tiny_parts() {
        let a = Dd::from(1.0).add_f(1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let b = a.sub(Dd::from(1.0));
        assert_eq!(b.value(), 1e-20);
    }

    #[test]
    fn dd_mul_div_roundtrip() {
        let a = Dd::from(std::f64::consts::PI);
        let b = Dd::from(std::f64::consts::E);
        let c = a.mul(b).div(b);
        assert!((c.value() - std::f64::consts::PI).abs() < 1e-30);
    }

    #[test]
    fn oracle_matches_hand_values() {
        // L_1^{(0)}(2) = -1 ; L_4^{(6)}(3) = 10.875
        assert!((laguerre_oracle(1, 0.0, 2.0).value + 1.0).abs() < 1e-15);
        assert!((laguerre_oracle(4, 6.0, 3.0).value - 10.875).abs() < 1e-13);
        // 2F1(-3, -2; 5.4; -1.1) = -7/576
        assert!((gauss2f1_oracle(3, -2.0, 5.4, -1.1).value + 7.0 / 576.0).abs() < 1e-16);
    }
}
