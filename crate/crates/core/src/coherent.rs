//! The half-line carrier space `L^2((0, inf), dxi/xi)`: its Laguerre-type
//! orthonormal basis, parametric input functions with declared decay, and the
//! coherent-state wave functions in series and closed form.

use std::sync::Arc;

use num_complex::Complex64;

use crate::eigenspace::DiskPoint;
use crate::specfun::{jacobi_rec, laguerre_rec, ln_gamma};
use crate::{Error, ModelParams, Result};

/// Declared growth/decay envelope of a half-line function:
/// `|f(xi)| <~ xi^power * e^{-rate * xi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayTag {
    pub power: f64,
    pub rate: f64,
}

/// A function on `(0, inf)` given as `f(xi) = residual(xi) * xi^power * e^{-rate xi}`
/// with a bounded residual.
///
/// Storing the residual rather than `f` itself keeps the declared envelope exact by
/// construction and lets the quadrature layer fold `xi^power e^{-rate xi}` into its
/// weight instead of sampling huge or tiny values. Transform kernels contribute
/// additional decay `e^{-xi/2}`-and-better, so rates up to `1/2` are admissible.
///
/// The residual is declared on complex arguments and must be entire of
/// subexponential type (polynomials, constants): the transform folds its kernel's
/// phase into a rotated integration ray, which samples the residual slightly off
/// the real axis. All built-in families satisfy this.
#[derive(Clone)]
pub struct RadialFunction {
    residual: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    tag: DecayTag,
}

impl std::fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction").field("tag", &self.tag).finish()
    }
}

impl RadialFunction {
    /// Wraps a residual with its envelope. Requires `power > 0` (membership in the
    /// carrier space near 0) and `rate <= 1/2`; the residual is spot-checked for
    /// boundedness at a few sample points.
    pub fn new(
        tag: DecayTag,
        residual: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(tag.power > 0.0) || !tag.power.is_finite() {
            return Err(Error::DecayBound(format!(
                "power must be positive and finite, got {}",
                tag.power
            )));
        }
        if !(tag.rate <= 0.5) || !tag.rate.is_finite() {
            return Err(Error::DecayBound(format!(
                "decay rate must satisfy rate <= 1/2, got {}",
                tag.rate
            )));
        }
        let f = Self {
            residual: Arc::new(residual),
            tag,
        };
        f.spot_check()?;
        Ok(f)
    }

    /// Orthonormal carrier basis element `psi_k` (see [`psi_basis`]); residual is the
    /// normalized Laguerre polynomial, envelope `xi^{nu-m} e^{-xi/2}`.
    pub fn psi(params: &ModelParams, k: usize) -> Self {
        Self::psi_combo(params, &{
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            c
        })
    }

    /// Finite combination `sum_j coeffs[j] psi_j`; not renormalized.
    pub fn psi_combo(params: &ModelParams, coeffs: &[f64]) -> Self {
        let alpha = params.alpha();
        let coeffs: Vec<f64> = coeffs.to_vec();
        let norms: Vec<f64> = (0..coeffs.len())
            .map(|k| {
                let kf = k as f64;
                (0.5 * (ln_gamma(kf + 1.0) - ln_gamma(alpha + 1.0 + kf))).exp()
            })
            .collect();
        let tag = DecayTag {
            power: params.nu() - params.m_f64(),
            rate: 0.5,
        };
        Self {
            residual: Arc::new(move |xi: Complex64| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut prev = Complex64::new(1.0, 0.0);
                let mut cur = Complex64::new(1.0 + alpha, 0.0) - xi;
                for (k, (&c, &n)) in coeffs.iter().zip(&norms).enumerate() {
                    let lk = match k {
                        0 => Complex64::new(1.0, 0.0),
                        1 => cur,
                        _ => {
                            let jf = (k - 1) as f64;
                            let next = ((Complex64::new(2.0 * jf + 1.0 + alpha, 0.0) - xi)
                                * cur
                                - (jf + alpha) * prev)
                                / (jf + 1.0);
                            prev = cur;
                            cur = next;
                            next
                        }
                    };
                    acc += c * n * lk;
                }
                acc
            }),
            tag,
        }
    }

    /// The parametric family `xi^a e^{-b xi}`; requires `0 < b <= 1/2` so the result
    /// stays square integrable against `dxi/xi` and inside the admissible decay class.
    pub fn power_exp(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::DecayBound(format!(
                "power_exp rate must be positive, got {b}"
            )));
        }
        Self::new(DecayTag { power: a, rate: b }, |_| Complex64::new(1.0, 0.0))
    }

    pub fn tag(&self) -> DecayTag {
        self.tag
    }

    pub fn residual_at(&self, xi: f64) -> Complex64 {
        (self.residual)(Complex64::new(xi, 0.0))
    }

    /// Residual on the complex plane (used by the rotated-ray quadrature).
    pub fn residual_at_c(&self, xi: Complex64) -> Complex64 {
        (self.residual)(xi)
    }

    /// Full value `residual(xi) * xi^power * e^{-rate xi}`.
    pub fn eval(&self, xi: f64) -> Result<Complex64> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::Domain(format!("xi must be positive, got {xi}")));
        }
        Ok(self.residual_at(xi) * xi.powf(self.tag.power) * (-self.tag.rate * xi).exp())
    }

    /// The declared envelope must actually bound the function: sample the residual
    /// and reject wild growth, which would mean a mis-declared tag.
    fn spot_check(&self) -> Result<()> {
        let scale = 1.0 + self.residual_at(1.0).norm();
        for xi in [0.25, 4.0, 32.0, 128.0, 512.0] {
            let r = self.residual_at(xi).norm();
            if !r.is_finite() || r > 1e8 * scale {
                return Err(Error::DecayBound(format!(
                    "residual not bounded at xi = {xi}: {r:e} (declared rate {})",
                    self.tag.rate
                )));
            }
        }
        Ok(())
    }
}

/// Orthonormal basis of the carrier space,
/// `psi_k(xi) = sqrt(k! / Gamma(2(nu-m)+k)) xi^{nu-m} e^{-xi/2} L_k^{(alpha)}(xi)`.
pub fn psi_basis(params: &ModelParams, k: usize, xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi must be positive, got {xi}")));
    }
    let kf = k as f64;
    let a1 = params.alpha() + 1.0;
    let norm = (0.5 * (ln_gamma(kf + 1.0) - ln_gamma(a1 + kf))).exp();
    let nm = params.nu() - params.m_f64();
    Ok(norm * xi.powf(nm) * (-0.5 * xi).exp() * laguerre_rec(k, params.alpha(), xi))
}

/// Truncation policy for the coherent-state series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub max_terms: usize,
    pub target_tol: f64,
}

impl TruncationSpec {
    pub fn new(max_terms: usize, target_tol: f64) -> Result<Self> {
        if max_terms < 1 || !(target_tol > 0.0) {
            return Err(Error::Domain(format!(
                "truncation spec needs max_terms >= 1 and target_tol > 0, got ({max_terms}, {target_tol})"
            )));
        }
        Ok(Self { max_terms, target_tol })
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self {
            max_terms: 4096,
            target_tol: 1e-10,
        }
    }
}

/// A converged partial sum with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

/// Coefficient of `psi_k` in the coherent-state expansion at `z`, without the
/// `(1-|z|^2)^{nu-m}` front factor.
///
/// For `k <= m` this is the printed series term
/// `(-1)^k sqrt(k! Gamma(2(nu-m)+m) / (m! Gamma(2(nu-m)+k))) conj(z)^{m-k}
///  P_k^{(m-k, alpha)}(t)`;
/// for `k > m` the equivalent rewritten term with the swapped Gamma ratio,
/// `(-1)^m sqrt(m! Gamma(2(nu-m)+k) / (k! Gamma(2(nu-m)+m))) z^{k-m}
///  P_m^{(k-m, alpha)}(t)`,
/// which stays evaluable everywhere including `z = 0` (the printed negative power
/// of `conj(z)` is shorthand for exactly this).
pub(crate) fn series_coefficient(params: &ModelParams, k: usize, z: Complex64) -> Complex64 {
    let m = params.m();
    let alpha = params.alpha();
    let a1 = alpha + 1.0;
    let t = 1.0 - 2.0 * z.norm_sqr();
    let kf = k as f64;
    let mf = params.m_f64();
    if k <= m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mag = (0.5
            * (ln_gamma(kf + 1.0) + ln_gamma(a1 + mf) - ln_gamma(mf + 1.0) - ln_gamma(a1 + kf)))
        .exp();
        sign * mag * z.conj().powu((m - k) as u32) * jacobi_rec(k, mf - kf, alpha, t)
    } else {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mag = (0.5
            * (ln_gamma(mf + 1.0) + ln_gamma(a1 + kf) - ln_gamma(kf + 1.0) - ln_gamma(a1 + mf)))
        .exp();
        sign * mag * z.powu((k - m) as u32) * jacobi_rec(m, kf - mf, alpha, t)
    }
}

/// Coherent-state wave function by its basis expansion, truncated adaptively.
///
/// Terms are added until the largest of the last eight falls below
/// `target_tol * (1 + |partial sum|)` (the additive floor keeps zeros of the wave
/// function from stalling the test); if that has not happened by `max_terms` the
/// series is reported as not converged. The tail bound is the geometric
/// extrapolation of the last window.
pub fn coherent_series(
    params: &ModelParams,
    point: &DiskPoint,
    xi: f64,
    trunc: &TruncationSpec,
) -> Result<SeriesValue> {
    point.check_margin()?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi must be positive, got {xi}")));
    }
    let z = point.z();
    let alpha = params.alpha();
    let front = (1.0 - z.norm_sqr()).powf(params.nu() - params.m_f64());
    let env = xi.powf(params.nu() - params.m_f64()) * (-0.5 * xi).exp();

    let mut sum = Complex64::new(0.0, 0.0);
    let mut window = [0.0f64; 8];
    // running Laguerre recurrence in k at fixed xi
    let mut lag_prev = 1.0;
    let mut lag_cur = 1.0 + alpha - xi;
    for k in 0..trunc.max_terms {
        let kf = k as f64;
        let lk = match k {
            0 => 1.0,
            1 => lag_cur,
            _ => {
                let jf = kf - 1.0;
                let next =
                    ((2.0 * jf + 1.0 + alpha - xi) * lag_cur - (jf + alpha) * lag_prev) / (jf + 1.0);
                lag_prev = lag_cur;
                lag_cur = next;
                next
            }
        };
        let norm = (0.5 * (ln_gamma(kf + 1.0) - ln_gamma(alpha + 1.0 + kf))).exp();
        let term = front * series_coefficient(params, k, z) * (norm * env * lk);
        sum += term;
        window[k % 8] = term.norm();
        let window_max = window.iter().cloned().fold(0.0, f64::max);
        // The terms can stay tiny and then grow until L_k(xi) enters its
        // oscillatory regime near k ~ xi, so the window test only counts past it.
        let k_min = params.m() + 8 + xi.ceil() as usize;
        if k >= k_min && window_max <= trunc.target_tol * (1.0 + sum.norm()) {
            let q = z.norm();
            let tail_bound = if q < 1.0 {
                window_max * q / (1.0 - q)
            } else {
                f64::INFINITY
            };
            return Ok(SeriesValue {
                value: sum,
                tail_bound,
                terms_used: k + 1,
            });
        }
    }
    let window_max = window.iter().cloned().fold(0.0, f64::max);
    Err(Error::NotConverged {
        terms: trunc.max_terms,
        tail: window_max,
        tol: trunc.target_tol * (1.0 + sum.norm()),
    })
}

/// Closed form of the coherent-state wave function:
/// `(-1)^m sqrt(m!/Gamma(2nu-m)) |1-z|^{2m} (1-z)^{-2nu} (1-|z|^2)^{nu-m} xi^{nu-m}
///  exp(-(xi/2)(1+z)/(1-z)) L_m^{(alpha)}(xi (1-|z|^2)/|1-z|^2)`.
///
/// The complex power of `1-z` uses the principal branch, which is safe since
/// `Re(1-z) > 0` on the disk.
pub fn coherent_closed(params: &ModelParams, point: &DiskPoint, xi: f64) -> Result<Complex64> {
    point.check_margin()?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi must be positive, got {xi}")));
    }
    let z = point.z();
    let m = params.m();
    let mf = params.m_f64();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (0.5 * (ln_gamma(mf + 1.0) - ln_gamma(params.beta() - mf))).exp();
    let one_minus = Complex64::new(1.0, 0.0) - z;
    let mod2 = one_minus.norm_sqr();
    let pz = 1.0 - z.norm_sqr();
    let power = (-params.beta() * one_minus.ln()).exp();
    let nm = params.nu() - mf;
    let halfline = xi.powf(nm);
    let cayley = (Complex64::new(1.0, 0.0) + z) / one_minus;
    let expo = (-0.5 * xi * cayley).exp();
    let lag = laguerre_rec(m, params.alpha(), xi * pz / mod2);
    Ok(sign * norm * mod2.powi(m as i32) * power * pz.powf(nm) * halfline * expo * lag)
}
