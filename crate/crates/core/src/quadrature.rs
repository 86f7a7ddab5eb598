//! Gauss quadrature engines: generalized Gauss-Laguerre rules on the half-line and a
//! polar product rule on the disk matched to the weight `(1-|z|^2)^{2 nu - 2}`.
//!
//! Nodes and weights come from the Golub-Welsch algorithm: the three-term recurrence
//! of the orthogonal polynomial family is packed into a symmetric tridiagonal matrix
//! whose eigenvalues are the nodes and whose first eigenvector components give the
//! weights. The tridiagonal eigenproblem is solved by QL iteration with implicit
//! shifts, tracking only the first-component row, so construction is O(n^2) and
//! bit-for-bit deterministic.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::grid::PolarGrid;
use crate::specfun::ln_gamma;
use crate::{Error, ModelParams, Result};

/// Requested `r_max` at or above this is treated as "integrate over the full disk".
const FULL_DISK_THRESHOLD: f64 = 1.0 - 1e-9;

/// Symmetric tridiagonal QL with implicit shifts.
///
/// `d` is the diagonal, `e` the subdiagonal (length `n - 1`). Returns the nodes in
/// ascending order together with `mu0 * q0^2` where `q0` is the first component of
/// the corresponding normalized eigenvector and `mu0` the total mass of the weight.
fn gauss_from_recurrence(d: &[f64], e: &[f64], mu0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    assert_eq!(e.len(), n.saturating_sub(1));
    let mut d = d.to_vec();
    let mut e = {
        let mut v = e.to_vec();
        v.push(0.0);
        v
    };
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::RuleConstruction {
                    alpha: f64::NAN,
                    n,
                    reason: format!("QL iteration did not converge at row {l}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalues are finite"));
    let nodes: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();
    Ok((nodes, weights))
}

/// Gauss-Jacobi nodes/weights on `[-1, 1]` for the weight `(1-x)^a (1+x)^b`.
fn gauss_jacobi(a: f64, b: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::RuleConstruction {
            alpha: a,
            n,
            reason: format!("Jacobi exponents must exceed -1, got ({a}, {b})"),
        });
    }
    if n == 0 {
        return Err(Error::RuleConstruction {
            alpha: a,
            n,
            reason: "rule order must be at least 1".into(),
        });
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    d[0] = (b - a) / (a + b + 2.0);
    for j in 1..n {
        let jf = j as f64;
        let den = (2.0 * jf + a + b) * (2.0 * jf + a + b + 2.0);
        d[j] = (b * b - a * a) / den;
        let beta_j = if j == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            let q = 2.0 * jf + a + b;
            4.0 * jf * (jf + a) * (jf + b) * (jf + a + b) / (q * q * (q + 1.0) * (q - 1.0))
        };
        e[j - 1] = beta_j.sqrt();
    }
    let mu0 =
        ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp();
    gauss_from_recurrence(&d, &e, mu0).map_err(|err| match err {
        Error::RuleConstruction { n, reason, .. } => Error::RuleConstruction { alpha: a, n, reason },
        other => other,
    })
}

/// A generalized Gauss-Laguerre rule: nodes and weights for integrals
/// `int_0^inf x^alpha e^{-x} f(x) dx ~ sum_i w_i f(x_i)`.
///
/// A rule of order `n` integrates polynomial `f` of degree up to `2n - 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HalfLineRule {
    /// Builds the rule by Golub-Welsch on the Laguerre recurrence.
    pub fn gauss_laguerre(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::RuleConstruction {
                alpha,
                n,
                reason: "Laguerre exponent must be a finite real above -1".into(),
            });
        }
        if n == 0 {
            return Err(Error::RuleConstruction {
                alpha,
                n,
                reason: "rule order must be at least 1".into(),
            });
        }
        let d: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
        let e: Vec<f64> = (1..n)
            .map(|i| {
                let fi = i as f64;
                (fi * (fi + alpha)).sqrt()
            })
            .collect();
        let mu0 = ln_gamma(alpha + 1.0).exp();
        let (nodes, weights) = gauss_from_recurrence(&d, &e, mu0).map_err(|err| match err {
            Error::RuleConstruction { n, reason, .. } => {
                Error::RuleConstruction { alpha, n, reason }
            }
            other => other,
        })?;
        Ok(Self { alpha, nodes, weights })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)`. The caller is responsible for having factored the weight
    /// `x^alpha e^{-x}` out of the true integrand. Non-finite samples are reported
    /// with their node index.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteSample { index: i, node: x });
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// Real-valued convenience wrapper around [`integrate`](Self::integrate).
    pub fn integrate_real(&self, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
        self.integrate(|x| Complex64::new(f(x), 0.0)).map(|v| v.re)
    }

    /// `node,weight` rows, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "node,weight")?;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            writeln!(out, "{:.16e},{:.16e}", x, w)?;
        }
        Ok(())
    }
}

/// Which radial realization a [`DiskRule`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialScheme {
    /// Gauss-Jacobi in `u = r^2` over the full radial interval. The Jacobi exponent
    /// is `2(nu - m) - 2`: the measure exponent `2 nu - 2` minus the `(1-u)^{-2m}`
    /// envelope every pair of level-`m` eigenfunctions carries, which is folded back
    /// into the stored weights. Eigenfunction pair integrands therefore reduce to
    /// polynomials and the boundary mass is captured exactly.
    FullDiskJacobi,
    /// Gauss-Legendre in `u = r^2` on `[0, r_max^2]` with the measure weight folded
    /// into the stored weights. Truncates the boundary layer.
    TruncatedLegendre,
}

/// Product quadrature on the disk for integrals
/// `int f(z) (1-|z|^2)^{2 nu - 2} dA(z) ~ sum_i W_i f(z_i)`:
/// a Gauss rule in `u = r^2` crossed with the uniform trapezoid rule in the angle
/// (exact on trigonometric polynomials of degree below `n_theta`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiskRule {
    scheme: RadialScheme,
    n_r: usize,
    n_theta: usize,
    r_max: f64,
    /// Radial Gauss nodes in `u = r^2`.
    radial_u: Vec<f64>,
    /// Radial weights including measure/envelope factors and the `du/2` Jacobian.
    radial_w: Vec<f64>,
}

impl DiskRule {
    /// Builds the rule. `r_max >= 1 - 1e-9` (in particular `r_max = 1.0`) selects
    /// the full-disk Gauss-Jacobi radial scheme, whose nodes still stay strictly
    /// inside the disk; smaller values select the truncated Legendre scheme.
    pub fn new(params: &ModelParams, n_r: usize, n_theta: usize, r_max: f64) -> Result<Self> {
        if n_r < 4 || n_theta < 4 {
            return Err(Error::Domain(format!(
                "disk rule needs at least 4 nodes per direction, got {n_r} x {n_theta}"
            )));
        }
        if !(r_max > 0.0 && r_max <= 1.0) {
            return Err(Error::Domain(format!(
                "disk rule r_max must lie in (0, 1], got {r_max}"
            )));
        }
        let beta = params.beta();
        if r_max >= FULL_DISK_THRESHOLD {
            let m2 = 2.0 * params.m_f64();
            let a = beta - m2 - 2.0; // = alpha - 1 > -1
            let (x, wx) = gauss_jacobi(a, 0.0, n_r)?;
            // map x in [-1,1] to u in [0,1]: u = (x+1)/2, weight picks up 2^{-(a+1)}
            let scale = (-(a + 1.0) * std::f64::consts::LN_2).exp();
            let radial_u: Vec<f64> = x.iter().map(|&xi| 0.5 * (xi + 1.0)).collect();
            let radial_w: Vec<f64> = radial_u
                .iter()
                .zip(&wx)
                .map(|(&u, &w)| 0.5 * w * scale * (1.0 - u).powi(m2 as i32))
                .collect();
            Ok(Self {
                scheme: RadialScheme::FullDiskJacobi,
                n_r,
                n_theta,
                r_max: 1.0,
                radial_u,
                radial_w,
            })
        } else {
            let u_max = r_max * r_max;
            let (x, wx) = gauss_jacobi(0.0, 0.0, n_r)?;
            let radial_u: Vec<f64> = x.iter().map(|&xi| 0.5 * u_max * (xi + 1.0)).collect();
            let radial_w: Vec<f64> = radial_u
                .iter()
                .zip(&wx)
                .map(|(&u, &w)| 0.5 * w * (0.5 * u_max) * (1.0 - u).powf(beta - 2.0))
                .collect();
            Ok(Self {
                scheme: RadialScheme::TruncatedLegendre,
                n_r,
                n_theta,
                r_max,
                radial_u,
                radial_w,
            })
        }
    }

    /// Full-disk rule at the default orders used by the verification suite.
    pub fn full_disk(params: &ModelParams, n_r: usize, n_theta: usize) -> Result<Self> {
        Self::new(params, n_r, n_theta, 1.0)
    }

    pub fn scheme(&self) -> RadialScheme {
        self.scheme
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Radial Gauss nodes in the squared-radius variable.
    pub fn radial_u(&self) -> &[f64] {
        &self.radial_u
    }

    /// Total node count.
    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Combined weight of the node at radial index `i`, any angle.
    pub fn node_weight(&self, i_r: usize) -> f64 {
        self.radial_w[i_r] * 2.0 * std::f64::consts::PI / self.n_theta as f64
    }

    /// The polar grid whose points are exactly this rule's nodes.
    pub fn grid(&self) -> PolarGrid {
        let radii: Vec<f64> = self.radial_u.iter().map(|&u| u.sqrt()).collect();
        PolarGrid::from_radii(radii, self.n_theta).expect("rule nodes lie strictly inside the disk")
    }

    /// Iterates `(z, W)` over all nodes in radial-outer order.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let ang_w = 2.0 * std::f64::consts::PI / self.n_theta as f64;
        self.radial_u.iter().zip(&self.radial_w).flat_map(move |(&u, &wr)| {
            let r = u.sqrt();
            (0..self.n_theta).map(move |j| {
                let th = 2.0 * std::f64::consts::PI * j as f64 / self.n_theta as f64;
                (Complex64::from_polar(r, th), wr * ang_w)
            })
        })
    }

    /// `sum_i W_i f(z_i)`; the weight `(1-|z|^2)^{2 nu - 2}` is part of the rule.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in self.nodes() {
            acc += w * f(z);
        }
        acc
    }

    /// Integrates a field already sampled on this rule's grid.
    pub fn integrate_samples(&self, samples: &[Complex64]) -> Result<Complex64> {
        if samples.len() != self.len() {
            return Err(Error::GridMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for ((_, w), &v) in self.nodes().zip(samples) {
            acc += w * v;
        }
        Ok(acc)
    }

    /// Sum of all weights (the quadrature's value for `f == 1`).
    pub fn total_weight(&self) -> f64 {
        self.radial_w.iter().sum::<f64>() * 2.0 * std::f64::consts::PI
    }

    /// `node_re,node_im,weight` rows, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "node_re,node_im,weight")?;
        for (z, w) in self.nodes() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", z.re, z.im, w)?;
        }
        Ok(())
    }
}

/// Free-function form of [`HalfLineRule::integrate`].
pub fn integrate_halfline(
    rule: &HalfLineRule,
    f: impl FnMut(f64) -> Complex64,
) -> Result<Complex64> {
    rule.integrate(f)
}
