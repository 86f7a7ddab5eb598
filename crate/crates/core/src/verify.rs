//! Named verification checks: every analytic identity the library implements,
//! measured by quadrature or finite differences and reported as
//! `(name, value, tolerance, pass)` rows. The CLI's `verify` command and the
//! acceptance tests both drive this module.

use std::collections::HashMap;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coherent::{coherent_closed, coherent_series, RadialFunction, TruncationSpec};
use crate::eigenspace::{big_phi, big_phi_alt, kernel, kernel_diag, rho, DiskPoint};
use crate::grid::PolarGrid;
use crate::quadrature::{DiskRule, HalfLineRule};
use crate::specfun::{
    gauss2f1_terminating, jacobi, kummer1f1_terminating, laguerre, ln_gamma, log_gamma_ratio,
};
use crate::transform::{
    adjoint_reconstruct, bargmann_transform, bargmann_transform_at, bargmann_transform_at_fixed,
    dbar_residual, eigen_residual, eigenbasis_coefficients, isometry_check, second_bargmann_at,
    TransformRequest,
};
use crate::{max_level, Error, ModelParams, Result};

/// One named check with its measured value and pass/fail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Eigenspace,
    Coherent,
    Transform,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "specfun" => Ok(Self::Specfun),
            "eigenspace" => Ok(Self::Eigenspace),
            "coherent" => Ok(Self::Coherent),
            "transform" => Ok(Self::Transform),
            "all" => Ok(Self::All),
            other => Err(Error::Domain(format!(
                "unknown suite '{other}' (expected specfun, eigenspace, coherent, transform or all)"
            ))),
        }
    }
}

/// Configuration of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub nu: f64,
    /// A single level, or `None` to sweep every admissible level of `nu`.
    pub m: Option<usize>,
    pub quad_order: usize,
    pub disk_n_r: usize,
    pub disk_n_theta: usize,
    /// Per-check tolerance overrides keyed by check name.
    pub tol_overrides: HashMap<String, f64>,
}

impl VerifyConfig {
    pub fn new(nu: f64, m: Option<usize>) -> Self {
        Self {
            nu,
            m,
            quad_order: 128,
            disk_n_r: 200,
            disk_n_theta: 256,
            tol_overrides: HashMap::new(),
        }
    }

    fn levels(&self) -> Result<Vec<ModelParams>> {
        match self.m {
            Some(m) => Ok(vec![ModelParams::new(self.nu, m)?]),
            None => (0..=max_level(self.nu)?)
                .map(|m| ModelParams::new(self.nu, m))
                .collect(),
        }
    }

    fn check(&self, name: &'static str, value: f64, default_tol: f64) -> Check {
        let tolerance = self.tol_overrides.get(name).copied().unwrap_or(default_tol);
        Check {
            name,
            value,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        }
    }
}

/// Runs a suite and returns its checks in a fixed order.
pub fn run_suite(cfg: &VerifyConfig, suite: Suite) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    match suite {
        Suite::Specfun => specfun_checks(cfg, &mut out)?,
        Suite::Eigenspace => eigenspace_checks(cfg, &mut out)?,
        Suite::Coherent => coherent_checks(cfg, &mut out)?,
        Suite::Transform => transform_checks(cfg, &mut out)?,
        Suite::All => {
            specfun_checks(cfg, &mut out)?;
            eigenspace_checks(cfg, &mut out)?;
            coherent_checks(cfg, &mut out)?;
            transform_checks(cfg, &mut out)?;
        }
    }
    Ok(out)
}

/// Renders checks as `check,value,tolerance,pass` CSV.
pub fn report_csv(checks: &[Check]) -> String {
    let mut s = String::from("check,value,tolerance,pass\n");
    for c in checks {
        s.push_str(&format!(
            "{},{:.16e},{:.16e},{}\n",
            c.name, c.value, c.tolerance, c.pass
        ));
    }
    s
}

fn rel_dev(got: f64, expect: f64) -> f64 {
    (got - expect).abs() / expect.abs().max(f64::MIN_POSITIVE)
}

// --- special-function checks ------------------------------------------------

/// Plain-f64 finite-sum references, independent of the recurrence paths. Each
/// returns `(value, magnitude_sum)`; deviations are judged against the magnitude
/// sum, which is the rounding-noise scale of a cancelling sum.
mod series_ref {
    /// `sum_j (-1)^j C(k+alpha, k-j) x^j / j!`
    pub fn laguerre(k: usize, alpha: f64, x: f64) -> (f64, f64) {
        let mut term = (1..=k).fold(1.0, |acc, i| acc * (alpha + i as f64) / i as f64);
        let mut sum = term;
        let mut mag = term.abs();
        let kf = k as f64;
        for j in 0..k {
            let jf = j as f64;
            term *= -(kf - jf) / ((alpha + jf + 1.0) * (jf + 1.0)) * x;
            sum += term;
            mag += term.abs();
        }
        (sum, mag)
    }

    /// `sum_s C(n+a, n-s) C(n+b, s) ((t-1)/2)^s ((t+1)/2)^{n-s}`
    pub fn jacobi(n: usize, a: f64, b: f64, t: f64) -> (f64, f64) {
        let binom = |top_shift: f64, r: usize, n: usize| -> f64 {
            // C(n + top_shift, r) as a product, valid for any real shift
            (1..=r).fold(1.0, |acc, i| {
                acc * (top_shift + (n - r + i) as f64) / i as f64
            })
        };
        let mut sum = 0.0;
        let mut mag = 0.0;
        for s in 0..=n {
            let c1 = binom(a, n - s, n);
            let c2 = binom(b, s, n);
            let term =
                c1 * c2 * (0.5 * (t - 1.0)).powi(s as i32) * (0.5 * (t + 1.0)).powi((n - s) as i32);
            sum += term;
            mag += term.abs();
        }
        (sum, mag)
    }
}

fn specfun_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let levels = cfg.levels()?;
    let alphas: Vec<f64> = levels.iter().map(|p| p.alpha()).chain([0.5, 2.0]).collect();

    // polynomial evaluators against the finite-sum references
    let mut worst_lag = 0.0f64;
    for &a in &alphas {
        for k in 0..=12 {
            for &x in &[0.1, 1.0, 3.7, 9.0, 20.0] {
                let got = laguerre(k, a, x)?;
                let (expect, mag) = series_ref::laguerre(k, a, x);
                worst_lag = worst_lag.max((got - expect).abs() / (1.0 + mag));
            }
        }
    }
    out.push(cfg.check("laguerre_series_agreement", worst_lag, 1e-11));

    let mut worst_jac = 0.0f64;
    for &a in &alphas {
        for k in 0..=12 {
            for &t in &[-0.9, -0.4, 0.0, 0.3, 0.8] {
                let got = jacobi(k, a, 0.75, t)?;
                let (expect, mag) = series_ref::jacobi(k, a, 0.75, t);
                worst_jac = worst_jac.max((got - expect).abs() / (1.0 + mag));
            }
        }
    }
    out.push(cfg.check("jacobi_series_agreement", worst_jac, 1e-11));

    // P_k^{(a,b)}(t) = (-1)^k P_k^{(b,a)}(-t)
    let mut worst_sym = 0.0f64;
    for &a in &alphas {
        for &b in &[0.5, 1.0, 2.0] {
            for k in 0..=8 {
                for &t in &[-0.9, -0.5, 0.0, 0.4, 0.9] {
                    let lhs = jacobi(k, a, b, t)?;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = sign * jacobi(k, b, a, -t)?;
                    worst_sym = worst_sym.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
                }
            }
        }
    }
    out.push(cfg.check("jacobi_symmetry", worst_sym, 1e-12));

    // Gamma-shift identity relating a negative integer first parameter to a
    // positive one: m!/(m-s)! P_m^{(-s,a)}(t) =
    //   Gamma(m+a+1)/Gamma(m-s+a+1) ((t-1)/2)^s P_{m-s}^{(s,a)}(t)
    let mut worst_shift = 0.0f64;
    for &a in &alphas {
        for m in 1..=6usize {
            for s in 1..=m {
                for &t in &[-0.7, -0.2, 0.3, 0.8] {
                    let lhs = (log_gamma_ratio(m as f64 + 1.0, (m - s) as f64 + 1.0)?).exp()
                        * jacobi(m, -(s as f64), a, t)?;
                    // (t-1)/2 < 0: compute as (-(1-t)/2)^s with explicit sign
                    let base = (1.0 - t) * 0.5;
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = (log_gamma_ratio(m as f64 + a + 1.0, (m - s) as f64 + a + 1.0)?)
                        .exp()
                        * sign
                        * base.powi(s as i32)
                        * jacobi(m - s, s as f64, a, t)?;
                    worst_shift = worst_shift.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
                }
            }
        }
    }
    out.push(cfg.check("jacobi_parameter_shift", worst_shift, 1e-10));

    // P_k^{(a,eta)}(x) = (a+1)_k/k! ((1+x)/2)^k 2F1(-k, -(eta+k); 1+a; (x-1)/(x+1))
    let mut worst_hyp = 0.0f64;
    for &a in &alphas {
        for k in 0..=8usize {
            for &eta in &[0.5, 2.0] {
                for &x in &[-0.5, 0.0, 0.4, 0.9] {
                    let pref = (ln_gamma(a + 1.0 + k as f64)
                        - ln_gamma(k as f64 + 1.0)
                        - ln_gamma(a + 1.0))
                    .exp();
                    let y = (x - 1.0) / (x + 1.0);
                    let f21 = gauss2f1_terminating(k, -(eta + k as f64), 1.0 + a, y)?;
                    let lhs = pref * (0.5 * (1.0 + x)).powi(k as i32) * f21;
                    let rhs = jacobi(k, a, eta, x)?;
                    worst_hyp = worst_hyp.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
                }
            }
        }
    }
    out.push(cfg.check("jacobi_hypergeometric_form", worst_hyp, 1e-11));

    // 1F1(-m; 1+a; x) = m! Gamma(1+a)/Gamma(1+a+m) L_m^{(a)}(x)
    let mut worst_kum = 0.0f64;
    for &a in &alphas {
        for m in 0..=8usize {
            for &x in &[0.2, 1.5, 6.0, 14.0] {
                let lhs = kummer1f1_terminating(m, 1.0 + a, x)?;
                let ratio = (ln_gamma(m as f64 + 1.0) + ln_gamma(1.0 + a)
                    - ln_gamma(1.0 + a + m as f64))
                .exp();
                let rhs = ratio * laguerre(m, a, x)?;
                worst_kum = worst_kum.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
    }
    out.push(cfg.check("kummer_laguerre_reduction", worst_kum, 1e-12));

    // sum_k lambda^k 2F1(-k, b; 1+a; y) L_k^{(a)}(xi) =
    //   (1-lambda)^{b-1-a} (1-lambda+y lambda)^{-b} e^{-xi lambda/(1-lambda)}
    //   1F1(b; 1+a; xi y lambda / ((1-lambda)(1-lambda+y lambda)))
    let mut worst_bgf = 0.0f64;
    for p in &levels {
        let a = p.alpha();
        let b_int = p.m() as i32;
        let b = -(p.m() as f64);
        for &lam in &[-0.7f64, 0.35, 0.7] {
            for &y in &[-0.4f64, -1.3] {
                for &xi in &[0.6, 3.0] {
                    let denom = 1.0 - lam + y * lam;
                    if denom.abs() < 0.2 {
                        continue;
                    }
                    let mut lhs = 0.0;
                    let mut pow = 1.0;
                    for k in 0..200usize {
                        lhs += pow
                            * gauss2f1_terminating(k, b, 1.0 + a, y)?
                            * laguerre(k, a, xi)?;
                        pow *= lam;
                    }
                    let x11 = xi * y * lam / ((1.0 - lam) * denom);
                    // divides by denom^b with b = -m, so multiply by denom^m
                    let rhs = (1.0 - lam).powf(b - 1.0 - a)
                        * denom.powi(b_int)
                        * (-xi * lam / (1.0 - lam)).exp()
                        * kummer1f1_terminating(p.m(), 1.0 + a, x11)?;
                    worst_bgf = worst_bgf.max(rel_dev(lhs, rhs));
                }
            }
        }
    }
    out.push(cfg.check("bilateral_generating_function", worst_bgf, 1e-8));

    // ln Gamma(p) - ln Gamma(q) against the product of recurrence factors
    let mut worst_lg = 0.0f64;
    for &(p, q) in &[(7.5f64, 2.5f64), (12.0, 5.0), (40.25, 33.25), (6.0, 5.0)] {
        let got = log_gamma_ratio(p, q)?;
        let n = (p - q).round() as usize;
        let expect: f64 = (0..n).map(|i| (q + i as f64).ln()).sum();
        worst_lg = worst_lg.max(rel_dev(got, expect));
    }
    out.push(cfg.check("log_gamma_recurrence", worst_lg, 1e-13));

    // eigenvalues strictly increase along consecutive admissible levels
    let top = max_level(cfg.nu)?;
    let mut inversions = 0usize;
    for m in 0..top {
        let lo = ModelParams::new(cfg.nu, m)?.epsilon();
        let hi = ModelParams::new(cfg.nu, m + 1)?.epsilon();
        let beta = 2.0 * cfg.nu;
        if ((m + 1) as f64) <= (beta - 1.0) / 2.0 && hi <= lo {
            inversions += 1;
        }
    }
    out.push(cfg.check("landau_level_spacing", inversions as f64, 0.5));
    Ok(())
}

// --- eigenspace checks --------------------------------------------------------

fn inner_points() -> Vec<DiskPoint> {
    [
        (0.0, 0.0),
        (0.2, 0.1),
        (-0.35, 0.2),
        (0.0, -0.5),
        (0.42, 0.42),
        (-0.55, -0.2),
    ]
    .iter()
    .map(|&(x, y)| DiskPoint::new(Complex64::new(x, y)).expect("inside the disk"))
    .collect()
}

fn eigenspace_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let levels = cfg.levels()?;
    let kmax = 8usize;

    let mut worst_gram = 0.0f64;
    let mut worst_norm = 0.0f64;
    for p in &levels {
        let rule = DiskRule::full_disk(p, cfg.disk_n_r, cfg.disk_n_theta)?;
        let sampled: Vec<Vec<Complex64>> = (0..=kmax)
            .map(|k| {
                rule.nodes()
                    .map(|(z, _)| big_phi(p, k, &DiskPoint::new(z)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for j in 0..=kmax {
            for k in j..=kmax {
                let mut acc = Complex64::new(0.0, 0.0);
                for ((_, w), idx) in rule.nodes().zip(0..) {
                    acc += w * sampled[j][idx].conj() * sampled[k][idx];
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                worst_gram = worst_gram.max((acc - expect).norm());
            }
            // norm of the unnormalized basis against its closed form
            let quad = rule
                .nodes()
                .zip(0..)
                .map(|((_, w), idx)| w * sampled[j][idx].norm_sqr())
                .sum::<f64>()
                * rho(p, j);
            worst_norm = worst_norm.max(rel_dev(quad, rho(p, j)));
        }
    }
    out.push(cfg.check("basis_orthonormality_gram", worst_gram, 1e-7));
    out.push(cfg.check("norm_formula_vs_quadrature", worst_norm, 1e-8));

    // both printed forms of the orthonormal basis agree pointwise
    let grid = PolarGrid::uniform(20, 32, 1.0 - 1e-3)?;
    let mut worst_dual = 0.0f64;
    for p in &levels {
        for k in 0..=10 {
            for (_, _, z) in grid.points() {
                let zp = DiskPoint::new(z)?;
                let a = big_phi(p, k, &zp)?;
                let b = big_phi_alt(p, k, &zp)?;
                worst_dual = worst_dual.max((a - b).norm() / (1.0 + a.norm()));
            }
        }
    }
    out.push(cfg.check("orthonormal_basis_dual_form", worst_dual, 1e-10));

    // K(z,w) = conj(K(w,z)) and K(z,z) matches the closed diagonal
    let pts = inner_points();
    let mut worst_herm = 0.0f64;
    for p in &levels {
        for z in &pts {
            for w in &pts {
                let kzw = kernel(p, z, w)?;
                let kwz = kernel(p, w, z)?;
                worst_herm = worst_herm.max((kzw - kwz.conj()).norm() / (1.0 + kzw.norm()));
            }
            let diag = kernel(p, z, z)?;
            worst_herm = worst_herm
                .max((diag - kernel_diag(p, z)?).norm() / (1.0 + diag.norm()));
        }
    }
    out.push(cfg.check("kernel_hermitian_symmetry", worst_herm, 1e-12));

    // truncated eigenbasis sums converge to the closed kernel, off and on diagonal
    let mut worst_mercer = 0.0f64;
    let mut worst_diag = 0.0f64;
    for p in &levels {
        for z in &pts {
            for w in &pts {
                let expect = kernel(p, z, w)?;
                let mut sum = Complex64::new(0.0, 0.0);
                let mut k = 0usize;
                let mut settle = 0usize;
                while k < 4096 && settle < 16 {
                    let t = big_phi(p, k, z)? * big_phi(p, k, w)?.conj();
                    sum += t;
                    if t.norm() <= 1e-8 * (1.0 + sum.norm()) {
                        settle += 1;
                    } else {
                        settle = 0;
                    }
                    k += 1;
                }
                worst_mercer = worst_mercer.max((sum - expect).norm() / expect.norm());
            }
            let expect = kernel_diag(p, z)?;
            let mut sum = 0.0;
            let mut k = 0usize;
            let mut settle = 0usize;
            while k < 4096 && settle < 16 {
                let t = big_phi(p, k, z)?.norm_sqr();
                sum += t;
                if t <= 1e-8 * (1.0 + sum) {
                    settle += 1;
                } else {
                    settle = 0;
                }
                k += 1;
            }
            worst_diag = worst_diag.max(rel_dev(sum, expect));
        }
    }
    out.push(cfg.check("kernel_mercer_expansion", worst_mercer, 1e-6));
    out.push(cfg.check("kernel_diagonal_mercer", worst_diag, 1e-6));

    // int K(z,.) Phi_k(.) dmu = Phi_k(z)
    let mut worst_rep = 0.0f64;
    for p in &levels {
        let rule = DiskRule::full_disk(p, cfg.disk_n_r, cfg.disk_n_theta)?;
        let reps: Vec<DiskPoint> = pts.iter().filter(|p| p.norm_sqr() <= 0.25).cloned().collect();
        for k in 0..=5 {
            for z in &reps {
                let mut acc = Complex64::new(0.0, 0.0);
                for (wnode, wgt) in rule.nodes() {
                    let wp = DiskPoint::new(wnode)?;
                    acc += wgt * kernel(p, z, &wp)? * big_phi(p, k, &wp)?;
                }
                worst_rep = worst_rep.max((acc - big_phi(p, k, z)?).norm());
            }
        }
    }
    out.push(cfg.check("kernel_reproducing_property", worst_rep, 1e-6));

    // bottom level is a space of holomorphic functions
    if levels.iter().any(|p| p.m() == 0) {
        let p0 = ModelParams::new(cfg.nu, 0)?;
        let mut worst_hol = 0.0f64;
        for k in 0..=kmax {
            for z in &pts {
                let res = dbar_residual(
                    |w| big_phi(&p0, k, &DiskPoint::new(w)?),
                    z.z(),
                    1e-5,
                )?;
                worst_hol = worst_hol.max(res);
            }
        }
        out.push(cfg.check("bergman_holomorphic_bottom", worst_hol, 1e-6));
    }

    // H Phi_k = epsilon Phi_k by finite differences
    let mut worst_eig = 0.0f64;
    for p in &levels {
        for k in [0usize, 3, kmax] {
            let rep = eigen_residual(
                p,
                |z| big_phi(p, k, &DiskPoint::new(z)?),
                &pts,
                1e-4,
            )?;
            worst_eig = worst_eig.max(rep.max_residual);
        }
    }
    out.push(cfg.check("eigen_equation_basis", worst_eig, 1e-4));
    Ok(())
}

// --- coherent-state checks -----------------------------------------------------

fn coherent_sample_points() -> Vec<DiskPoint> {
    let third = std::f64::consts::PI / 3.0;
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.0),
        Complex64::from_polar(0.5, third),
        Complex64::new(-0.7, 0.0),
    ]
    .iter()
    .map(|&z| DiskPoint::new(z).expect("inside the disk"))
    .collect()
}

fn coherent_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let levels = cfg.levels()?;
    let zs = coherent_sample_points();

    let mut worst_ortho = 0.0f64;
    for p in &levels {
        let rule = HalfLineRule::gauss_laguerre(p.alpha(), 64)?;
        let a1 = p.alpha() + 1.0;
        for j in 0..=8usize {
            for k in j..=8usize {
                let nj = (0.5 * (ln_gamma(j as f64 + 1.0) - ln_gamma(a1 + j as f64))).exp();
                let nk = (0.5 * (ln_gamma(k as f64 + 1.0) - ln_gamma(a1 + k as f64))).exp();
                let got = rule.integrate_real(|x| {
                    nj * nk
                        * crate::specfun::laguerre_rec(j, p.alpha(), x)
                        * crate::specfun::laguerre_rec(k, p.alpha(), x)
                })?;
                let expect = if j == k { 1.0 } else { 0.0 };
                worst_ortho = worst_ortho.max((got - expect).abs());
            }
        }
    }
    out.push(cfg.check("carrier_basis_orthonormality", worst_ortho, 1e-12));

    // expansion vs closed form, sup over the xi rule nodes and sample z
    let trunc = TruncationSpec::new(4096, 1e-12)?;
    let mut worst_series = 0.0f64;
    let mut stability = 0.0f64;
    for p in &levels {
        let rule = HalfLineRule::gauss_laguerre(p.alpha(), 64)?;
        let mut sup_closed = 1.0f64;
        let mut sup_diff = 0.0f64;
        for z in &zs {
            for &xi in rule.nodes() {
                let closed = coherent_closed(p, z, xi)?;
                let series = coherent_series(p, z, xi, &trunc)?;
                sup_closed = sup_closed.max(closed.norm());
                sup_diff = sup_diff.max((series.value - closed).norm());
            }
        }
        worst_series = worst_series.max(sup_diff / sup_closed);

        // stability of a converged sum under 50 extra terms
        let z = &zs[1];
        let xi = 2.0;
        let a = coherent_series(p, z, xi, &trunc)?;
        let b = coherent_series(p, z, xi, &TruncationSpec::new(a.terms_used + 50, 1e-12)?)?;
        stability = stability.max((a.value - b.value).norm() / (1.0 + a.value.norm()));
    }
    out.push(cfg.check("series_vs_closed", worst_series, 1e-8));
    out.push(cfg.check("series_truncation_stability", stability, 1e-9));

    // <Psi_z, Psi_z> = 1 in the carrier space
    let mut worst_normal = 0.0f64;
    for p in &levels {
        let rule = HalfLineRule::gauss_laguerre(p.alpha(), 64)?;
        for z in &zs {
            let zc = z.z();
            let mod2 = (Complex64::new(1.0, 0.0) - zc).norm_sqr();
            let pz = 1.0 - zc.norm_sqr();
            let q = pz / mod2;
            // |Psi|^2/xi = C^2 xi^{2(nu-m)-1} e^{-q xi} L_m(q xi)^2, substituted u = q xi
            let ln_c2 = ln_gamma(p.m_f64() + 1.0) - ln_gamma(p.beta() - p.m_f64())
                + 2.0 * p.m_f64() * mod2.ln()
                - p.beta() * mod2.ln()
                + 2.0 * (p.nu() - p.m_f64()) * pz.ln();
            let scale = (ln_c2 - (p.alpha() + 1.0) * q.ln()).exp();
            let got = scale
                * rule.integrate_real(|u| {
                    let l = crate::specfun::laguerre_rec(p.m(), p.alpha(), u);
                    l * l
                })?;
            worst_normal = worst_normal.max((got - 1.0).abs());
        }
    }
    out.push(cfg.check("coherent_normalization", worst_normal, 1e-8));

    // |<Psi_z, psi_k>| sqrt(K(z,z)) = |Phi_k(z)|
    let mut worst_coef = 0.0f64;
    for p in &levels {
        let rule = HalfLineRule::gauss_laguerre(p.alpha(), 96)?;
        let a1 = p.alpha() + 1.0;
        for z in &zs {
            let zc = z.z();
            let one_minus = Complex64::new(1.0, 0.0) - zc;
            let mod2 = one_minus.norm_sqr();
            let pz = 1.0 - zc.norm_sqr();
            let q = pz / mod2;
            let sign = if p.m() % 2 == 0 { 1.0 } else { -1.0 };
            let d = sign
                * (0.5 * (ln_gamma(p.m_f64() + 1.0) - ln_gamma(p.beta() - p.m_f64()))).exp()
                * mod2.powi(p.m() as i32)
                * (-p.beta() * one_minus.ln()).exp()
                * pz.powf(p.nu() - p.m_f64());
            // <Psi_z, psi_k>: conjugated kernel rate, rotated-ray rule
            let pc = Complex64::new(0.5 * (q + 1.0), -zc.im / mod2);
            let scale = (-(p.alpha() + 1.0) * pc.ln()).exp();
            for k in 0..=5usize {
                let nk = (0.5 * (ln_gamma(k as f64 + 1.0) - ln_gamma(a1 + k as f64))).exp();
                let mut acc = Complex64::new(0.0, 0.0);
                for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
                    let xi = u / pc;
                    acc += w
                        * crate::specfun::laguerre_rec_c(p.m(), p.alpha(), q * xi)
                        * crate::specfun::laguerre_rec_c(k, p.alpha(), xi);
                }
                let coef = d.conj() * nk * scale * acc;
                let got = coef.norm() * kernel_diag(p, z)?.sqrt();
                let expect = big_phi(p, k, z)?.norm();
                worst_coef = worst_coef.max((got - expect).abs());
            }
        }
    }
    out.push(cfg.check("coherent_expansion_coefficients", worst_coef, 1e-8));
    Ok(())
}

// --- transform checks ------------------------------------------------------------

fn mid_points() -> Vec<DiskPoint> {
    [
        (0.0, 0.0),
        (0.4, 0.0),
        (0.0, 0.64),
        (-0.56, 0.56),
        (0.79, 0.1),
        (-0.2, -0.77),
    ]
    .iter()
    .map(|&(x, y)| DiskPoint::new(Complex64::new(x, y)).expect("inside the disk"))
    .collect()
}

fn transform_checks(cfg: &VerifyConfig, out: &mut Vec<Check>) -> Result<()> {
    let levels = cfg.levels()?;
    let pts = mid_points();
    let kmax = 8usize;

    // W[psi_k] lands on the orthonormal eigenbasis
    let mut worst_corr = 0.0f64;
    for p in &levels {
        for k in 0..=kmax {
            let input = RadialFunction::psi(p, k);
            let w = bargmann_transform_at(p, &input, &pts, cfg.quad_order)?;
            for (i, z) in pts.iter().enumerate() {
                worst_corr = worst_corr.max((w[i] - big_phi(p, k, z)?).norm());
            }
        }
    }
    out.push(cfg.check("transform_basis_correspondence", worst_corr, 1e-8));

    // both Gram matrices of the psi span are the identity
    let mut worst_in = 0.0f64;
    let mut worst_out = 0.0f64;
    for p in &levels {
        let disk = DiskRule::full_disk(p, cfg.disk_n_r, cfg.disk_n_theta)?;
        let inputs: Vec<RadialFunction> = (0..=kmax).map(|k| RadialFunction::psi(p, k)).collect();
        let rep = isometry_check(p, &inputs, cfg.quad_order, &disk)?;
        let n = inputs.len();
        for s in 0..n {
            for t in 0..n {
                let expect = if s == t { 1.0 } else { 0.0 };
                worst_in = worst_in.max((rep.input_gram[s * n + t] - expect).norm());
                worst_out = worst_out.max((rep.output_gram[s * n + t] - expect).norm());
            }
        }
    }
    out.push(cfg.check("unitarity_gram_input", worst_in, 1e-6));
    out.push(cfg.check("unitarity_gram_output", worst_out, 1e-6));

    // the image solves the eigen-equation
    let mut worst_eig = 0.0f64;
    for p in &levels {
        let input = RadialFunction::psi(p, 2);
        let order = 2 * cfg.quad_order;
        let rep = eigen_residual(
            p,
            |z| {
                bargmann_transform_at_fixed(p, &input, &[DiskPoint::new(z)?], order)
                    .map(|v| v[0])
            },
            &pts,
            1e-4,
        )?;
        worst_eig = worst_eig.max(rep.max_residual);
    }
    out.push(cfg.check("eigen_equation_transform", worst_eig, 1e-4));

    // the generalized path at m = 0 equals the dedicated bottom-level transform,
    // and the image there is holomorphic
    let p0 = ModelParams::new(cfg.nu, 0)?;
    let mut worst_red = 0.0f64;
    let mut worst_hol = 0.0f64;
    for k in [0usize, 1, 4] {
        let input = RadialFunction::psi(&p0, k);
        let gen = bargmann_transform_at(&p0, &input, &pts, cfg.quad_order)?;
        let ded = second_bargmann_at(cfg.nu, &input, &pts, cfg.quad_order)?;
        for i in 0..pts.len() {
            worst_red = worst_red.max((gen[i] - ded[i]).norm());
        }
        let order = 2 * cfg.quad_order;
        for z in &pts {
            let res = dbar_residual(
                |w| {
                    bargmann_transform_at_fixed(&p0, &input, &[DiskPoint::new(w)?], order)
                        .map(|v| v[0])
                },
                z.z(),
                1e-5,
            )?;
            worst_hol = worst_hol.max(res);
        }
    }
    out.push(cfg.check("second_bargmann_reduction", worst_red, 1e-12));
    out.push(cfg.check("transform_holomorphic_bottom", worst_hol, 1e-6));

    // adjoint round trip on a normalized span element
    let mut worst_rt = 0.0f64;
    for p in &levels {
        let disk = DiskRule::full_disk(p, cfg.disk_n_r, cfg.disk_n_theta)?;
        let input = RadialFunction::psi_combo(p, &[0.6, 0.0, 0.8]);
        let req = TransformRequest::new(*p, &input, disk.grid(), cfg.quad_order)?;
        let field = bargmann_transform(&req)?;
        let xi_targets: Vec<f64> = (0..33)
            .map(|i| 0.1 * (200.0f64).powf(i as f64 / 32.0))
            .collect();
        let rec = adjoint_reconstruct(p, &field, &xi_targets, &disk)?;
        for (i, &xi) in xi_targets.iter().enumerate() {
            worst_rt = worst_rt.max((rec[i] - input.eval(xi)?).norm());
        }
    }
    out.push(cfg.check("reconstruction_roundtrip", worst_rt, 1e-4));

    // a field orthogonal to the range reconstructs to nearly nothing
    let disk0 = DiskRule::full_disk(&p0, cfg.disk_n_r, cfg.disk_n_theta)?;
    let grid0 = disk0.grid();
    let values: Vec<Complex64> = grid0
        .points()
        .map(|(_, _, z)| Ok(big_phi(&p0, 1, &DiskPoint::new(z)?)?.conj()))
        .collect::<Result<Vec<_>>>()?;
    let field = crate::grid::GridField::new(grid0, values)?;
    let coeffs = eigenbasis_coefficients(&p0, &field, &disk0)?;
    let recon_norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let field_norm = disk0
        .integrate_samples(&field.values.iter().map(|v| v * v.conj()).collect::<Vec<_>>())?
        .re
        .sqrt();
    out.push(cfg.check(
        "reconstruction_null_component",
        recon_norm / field_norm,
        1e-3,
    ));

    // transform values are stable under order doubling
    let mut worst_stab = 0.0f64;
    for p in &levels {
        let input = RadialFunction::psi(p, 1);
        let a = bargmann_transform_at_fixed(p, &input, &pts, cfg.quad_order)?;
        let b = bargmann_transform_at_fixed(p, &input, &pts, 2 * cfg.quad_order)?;
        for i in 0..pts.len() {
            worst_stab = worst_stab.max((a[i] - b[i]).norm() / (1.0 + b[i].norm()));
        }
    }
    out.push(cfg.check("quadrature_order_stability", worst_stab, 1e-10));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!(Suite::from_str("all").unwrap(), Suite::All);
        assert_eq!(Suite::from_str("specfun").unwrap(), Suite::Specfun);
        assert!(Suite::from_str("bogus").is_err());
    }

    #[test]
    fn specfun_suite_passes_and_reports() {
        let cfg = VerifyConfig::new(3.5, Some(1));
        let checks = run_suite(&cfg, Suite::Specfun).unwrap();
        assert!(checks.len() >= 8);
        for c in &checks {
            assert!(c.pass, "{} failed: {:e} > {:e}", c.name, c.value, c.tolerance);
        }
        let csv = report_csv(&checks);
        assert!(csv.starts_with("check,value,tolerance,pass\n"));
        assert_eq!(csv.lines().count(), checks.len() + 1);
    }

    #[test]
    fn tolerance_overrides_apply() {
        let mut cfg = VerifyConfig::new(3.5, Some(0));
        cfg.tol_overrides
            .insert("laguerre_series_agreement".into(), 1e-30);
        let checks = run_suite(&cfg, Suite::Specfun).unwrap();
        let c = checks
            .iter()
            .find(|c| c.name == "laguerre_series_agreement")
            .unwrap();
        assert_eq!(c.tolerance, 1e-30);
        assert!(!c.pass);
    }

    #[test]
    fn invalid_nu_is_rejected() {
        let cfg = VerifyConfig::new(0.4, None);
        assert!(run_suite(&cfg, Suite::Eigenspace).is_err());
    }
}
