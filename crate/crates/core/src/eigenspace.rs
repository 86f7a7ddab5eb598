//! The level eigenspace on the disk: the orthogonal basis `phi_k`, its norms, the
//! orthonormal basis `Phi_k` in both printed forms, and the reproducing kernel.
//!
//! A point of care: the angular factor `|z|^{|m-k|} e^{-i(m-k) arg z}` is always
//! evaluated in Cartesian form as `conj(z)^{m-k}` or `z^{k-m}`, never through
//! `arg`/modulus splitting, so `z = 0` takes its limit value without special cases.

use num_complex::Complex64;

use crate::specfun::{jacobi, jacobi_rec, ln_gamma};
use crate::{Error, ModelParams, Result};

/// Evaluation routines refuse points with `1 - |z|` below this margin; the measure
/// weight and the `(1-|z|^2)^{-m}` envelope degenerate at the circle.
pub const BOUNDARY_DELTA: f64 = 1e-6;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    /// Requires `|z| < 1` strictly.
    pub fn new(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm_sqr() >= 1.0 {
            return Err(Error::BoundaryProximity {
                modulus: z.norm(),
                limit: 1.0,
            });
        }
        Ok(Self(z))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    /// Errors unless `|z| <= 1 - BOUNDARY_DELTA`.
    pub(crate) fn check_margin(&self) -> Result<()> {
        let modulus = self.0.norm();
        if modulus > 1.0 - BOUNDARY_DELTA {
            return Err(Error::BoundaryProximity {
                modulus,
                limit: 1.0 - BOUNDARY_DELTA,
            });
        }
        Ok(())
    }
}

/// Cartesian form of `|z|^{|m-k|} e^{-i(m-k) arg z}`.
fn angular_factor(z: Complex64, m: usize, k: usize) -> Complex64 {
    if k >= m {
        z.powu((k - m) as u32)
    } else {
        z.conj().powu((m - k) as u32)
    }
}

/// Orthogonal eigenfunction
/// `phi_k(z) = (-1)^{min(m,k)} (1-|z|^2)^{-m} |z|^{|m-k|} e^{-i(m-k) arg z}
///  P_{min(m,k)}^{(|m-k|, alpha)}(1 - 2|z|^2)`.
pub fn phi(params: &ModelParams, k: usize, point: &DiskPoint) -> Result<Complex64> {
    point.check_margin()?;
    let z = point.z();
    let m = params.m();
    let u = z.norm_sqr();
    let t = 1.0 - 2.0 * u;
    let mn = m.min(k);
    let diff = m.abs_diff(k);
    let sign = if mn % 2 == 0 { 1.0 } else { -1.0 };
    let envelope = (1.0 - u).powi(-(m as i32));
    let pj = jacobi_rec(mn, diff as f64, params.alpha(), t);
    Ok(sign * envelope * pj * angular_factor(z, m, k))
}

/// Squared norm of `phi_k` in the weighted space:
/// `(pi / (2(nu-m)-1)) * max! Gamma(2(nu-m)+min) / (min! Gamma(2(nu-m)+max))`
/// with `max = max(m,k)`, `min = min(m,k)`; evaluated in log space.
pub fn rho(params: &ModelParams, k: usize) -> f64 {
    let m = params.m();
    let a1 = params.alpha() + 1.0; // 2 (nu - m)
    let mx = m.max(k) as f64;
    let mn = m.min(k) as f64;
    let log_ratio = ln_gamma(mx + 1.0) + ln_gamma(a1 + mn) - ln_gamma(mn + 1.0) - ln_gamma(a1 + mx);
    std::f64::consts::PI / params.alpha() * log_ratio.exp()
}

/// Orthonormal eigenfunction `Phi_k = phi_k / sqrt(rho_k)`.
pub fn big_phi(params: &ModelParams, k: usize, point: &DiskPoint) -> Result<Complex64> {
    Ok(phi(params, k, point)? / rho(params, k).sqrt())
}

/// The rewritten orthonormal form
/// `Phi_k(z) = (-1)^k sqrt(alpha/pi) sqrt(k! Gamma(2(nu-m)+m) / (m! Gamma(2(nu-m)+k)))
///  (1-|z|^2)^{-m} conj(z)^{m-k} P_k^{(m-k, alpha)}(1-2|z|^2)`,
/// where for `k > m` the negative power `conj(z)^{m-k}` pairs with the continued
/// Jacobi value (its parameter `m - k` is a negative integer). Agreement with
/// [`big_phi`] is an identity of the two printed forms and is covered by tests.
pub fn big_phi_alt(params: &ModelParams, k: usize, point: &DiskPoint) -> Result<Complex64> {
    point.check_margin()?;
    let z = point.z();
    let m = params.m();
    let a1 = params.alpha() + 1.0;
    if z.norm_sqr() == 0.0 {
        // limit value at the origin: only k = m survives
        if k == m {
            let mag = (params.alpha() / std::f64::consts::PI).sqrt();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            return Ok(Complex64::new(sign * mag, 0.0));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let u = z.norm_sqr();
    let t = 1.0 - 2.0 * u;
    let kf = k as f64;
    let mf = params.m_f64();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let coef = (params.alpha() / std::f64::consts::PI).sqrt()
        * (0.5
            * (ln_gamma(kf + 1.0) + ln_gamma(a1 + mf) - ln_gamma(mf + 1.0) - ln_gamma(a1 + kf)))
        .exp();
    let envelope = (1.0 - u).powi(-(m as i32));
    let pj = jacobi(k, mf - kf, params.alpha(), t)?;
    let angular = z.conj().powi(m as i32 - k as i32);
    Ok(sign * coef * envelope * pj * angular)
}

/// Reproducing kernel of the level eigenspace,
/// `K(z,w) = (alpha/pi) (1 - z conj(w))^{-2 nu}
///  (|1 - z conj(w)|^2 / ((1-|z|^2)(1-|w|^2)))^m P_m^{(0, alpha)}(x)`
/// with `x = 2 (1-|z|^2)(1-|w|^2) / |1 - z conj(w)|^2 - 1`.
///
/// The complex power uses the principal branch; this is safe because
/// `Re(1 - z conj(w)) > 0` whenever both points lie in the disk, so the base never
/// crosses the branch cut.
pub fn kernel(params: &ModelParams, z: &DiskPoint, w: &DiskPoint) -> Result<Complex64> {
    z.check_margin()?;
    w.check_margin()?;
    let m = params.m();
    let zc = z.z();
    let wc = w.z();
    let base = Complex64::new(1.0, 0.0) - zc * wc.conj();
    let lead = (params.alpha() / std::f64::consts::PI) * (-params.beta() * base.ln()).exp();
    let mod2 = base.norm_sqr();
    let pz = 1.0 - zc.norm_sqr();
    let pw = 1.0 - wc.norm_sqr();
    let ratio = (mod2 / (pz * pw)).powi(m as i32);
    let x = 2.0 * pz * pw / mod2 - 1.0;
    let pj = jacobi_rec(m, 0.0, params.alpha(), x);
    Ok(lead * ratio * pj)
}

/// Kernel diagonal `K(z,z) = (alpha/pi) (1-|z|^2)^{-2 nu}`; strictly positive and a
/// function of `|z|` only.
pub fn kernel_diag(params: &ModelParams, z: &DiskPoint) -> Result<f64> {
    z.check_margin()?;
    let pz = 1.0 - z.norm_sqr();
    Ok(params.alpha() / std::f64::consts::PI * pz.powf(-params.beta()))
}
