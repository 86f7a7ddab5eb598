//! Batch front door: evaluate eigenbasis fields, run transforms on built-in
//! inputs, and execute the verification suite with CSV reports.
//!
//! Exit codes: 0 on success, 1 when a verification check fails its tolerance,
//! 2 on usage or validation errors.

// negated comparisons reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperlandau::verify::{report_csv, run_suite, Suite, VerifyConfig};
use hyperlandau::{
    big_phi, isometry_check, DiskPoint, DiskRule, GridField, ModelParams, PolarGrid,
    RadialFunction, TransformRequest,
};

#[derive(Parser)]
#[command(
    name = "hyperlandau",
    about = "Hyperbolic Landau level eigenbases and their Laguerre-kernel transforms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Magnetic parameter; admissible levels require nu > 1/2.
    #[arg(long, default_value_t = 3.5)]
    nu: f64,
    /// Level index m (0 <= m < nu - 1/2). `verify` sweeps every admissible
    /// level when omitted; other commands default to the bottom level.
    #[arg(long)]
    m: Option<usize>,
    /// Output polar grid as n_r:n_theta:r_max.
    #[arg(long, default_value = "200:256:0.999")]
    grid: String,
    /// Base order of the half-line Gauss rules.
    #[arg(long, default_value_t = hyperlandau::transform::DEFAULT_QUAD_ORDER)]
    quad_order: usize,
    /// Output directory (field files) or file (reports).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write one CSV field per requested eigenbasis index.
    Basis {
        #[command(flatten)]
        common: CommonOpts,
        /// Single index `3` or inclusive range `0..3`.
        #[arg(long, default_value = "0")]
        k: String,
    },
    /// Transform a built-in input and write the resulting field plus a norm line.
    Transform {
        #[command(flatten)]
        common: CommonOpts,
        /// One of `psi:K`, `combo:c0,c1,...`, `powerexp:a,b` (requires b < 1/2).
        #[arg(long)]
        input: String,
    },
    /// Run a verification suite and emit a `check,value,tolerance,pass` report.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// specfun, eigenspace, coherent, transform or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Tolerance override `name=value`; repeatable.
        #[arg(long = "tol")]
        tol: Vec<String>,
    },
}

fn parse_grid(spec: &str) -> Result<PolarGrid, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be n_r:n_theta:r_max, got '{spec}'"));
    }
    let n_r: usize = parts[0].parse().map_err(|e| format!("bad n_r: {e}"))?;
    let n_theta: usize = parts[1].parse().map_err(|e| format!("bad n_theta: {e}"))?;
    let r_max: f64 = parts[2].parse().map_err(|e| format!("bad r_max: {e}"))?;
    PolarGrid::uniform(n_r, n_theta, r_max).map_err(|e| e.to_string())
}

fn parse_k_spec(spec: &str) -> Result<Vec<usize>, String> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.parse().map_err(|e| format!("bad range start: {e}"))?;
        let hi: usize = hi.parse().map_err(|e| format!("bad range end: {e}"))?;
        if hi < lo {
            return Err(format!("empty index range '{spec}'"));
        }
        Ok((lo..=hi).collect())
    } else {
        let k: usize = spec.parse().map_err(|e| format!("bad index: {e}"))?;
        Ok(vec![k])
    }
}

fn parse_input(spec: &str, params: &ModelParams) -> Result<RadialFunction, String> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| format!("input must be kind:args, got '{spec}'"))?;
    match kind {
        "psi" => {
            let k: usize = rest.parse().map_err(|e| format!("bad basis index: {e}"))?;
            Ok(RadialFunction::psi(params, k))
        }
        "combo" => {
            let coeffs: Vec<f64> = rest
                .split(',')
                .map(|c| c.parse().map_err(|e| format!("bad coefficient: {e}")))
                .collect::<Result<_, String>>()?;
            if coeffs.is_empty() {
                return Err("combo needs at least one coefficient".into());
            }
            Ok(RadialFunction::psi_combo(params, &coeffs))
        }
        "powerexp" => {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| format!("powerexp needs a,b, got '{rest}'"))?;
            let a: f64 = a.parse().map_err(|e| format!("bad exponent: {e}"))?;
            let b: f64 = b.parse().map_err(|e| format!("bad rate: {e}"))?;
            if b >= 0.5 {
                return Err(format!(
                    "decay bound: powerexp rate must satisfy b < 1/2, got {b}"
                ));
            }
            RadialFunction::power_exp(a, b).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown input kind '{other}'")),
    }
}

fn out_dir(common: &CommonOpts) -> Result<PathBuf, String> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| format!("cannot create output dir: {e}"))?;
    Ok(dir)
}

fn write_field(path: &PathBuf, field: &GridField) -> Result<(), String> {
    let mut buf = Vec::new();
    field
        .write_csv(&mut buf)
        .map_err(|e| format!("serialize: {e}"))?;
    fs::write(path, buf).map_err(|e| format!("write {}: {e}", path.display()))
}

fn cmd_basis(common: &CommonOpts, k_spec: &str) -> Result<ExitCode, String> {
    let m = common.m.unwrap_or(0);
    let params = ModelParams::new(common.nu, m).map_err(|e| e.to_string())?;
    let grid = parse_grid(&common.grid)?;
    let dir = out_dir(common)?;
    for k in parse_k_spec(k_spec)? {
        let values = grid
            .points()
            .map(|(_, _, z)| big_phi(&params, k, &DiskPoint::new(z)?))
            .collect::<hyperlandau::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let field = GridField::new(grid.clone(), values).map_err(|e| e.to_string())?;
        let path = dir.join(format!("basis_m{}_k{}.csv", m, k));
        write_field(&path, &field)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_transform(common: &CommonOpts, input_spec: &str) -> Result<ExitCode, String> {
    let params = ModelParams::new(common.nu, common.m.unwrap_or(0)).map_err(|e| e.to_string())?;
    let input = parse_input(input_spec, &params)?;
    let grid = parse_grid(&common.grid)?;
    let dir = out_dir(common)?;

    let req = TransformRequest::new(params, &input, grid, common.quad_order)
        .map_err(|e| e.to_string())?;
    let field = hyperlandau::bargmann_transform(&req).map_err(|e| e.to_string())?;
    let path = dir.join("transform.csv");
    write_field(&path, &field)?;

    // norm summary through the quadrature-grade disk rule
    let disk = DiskRule::full_disk(&params, 96, 64).map_err(|e| e.to_string())?;
    let rep = isometry_check(&params, std::slice::from_ref(&input), common.quad_order, &disk)
        .map_err(|e| e.to_string())?;
    println!(
        "wrote {}\nnorms: input={:.10} output={:.10} deviation={:.3e}",
        path.display(),
        rep.input_norms[0],
        rep.output_norms[0],
        (rep.input_norms[0] - rep.output_norms[0]).abs()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(common: &CommonOpts, suite: &str, tol: &[String]) -> Result<ExitCode, String> {
    let suite: Suite = suite.parse().map_err(|e: hyperlandau::Error| e.to_string())?;
    let mut overrides = HashMap::new();
    for spec in tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("tolerance override must be name=value, got '{spec}'"))?;
        let value: f64 = value.parse().map_err(|e| format!("bad tolerance: {e}"))?;
        if !(value > 0.0) {
            return Err(format!("tolerance must be positive, got {value}"));
        }
        overrides.insert(name.to_string(), value);
    }
    let mut cfg = VerifyConfig::new(common.nu, common.m);
    cfg.quad_order = common.quad_order;
    cfg.tol_overrides = overrides;

    let checks = run_suite(&cfg, suite).map_err(|e| e.to_string())?;
    let csv = report_csv(&checks);
    print!("{csv}");
    if let Some(path) = &common.out {
        fs::write(path, &csv).map_err(|e| format!("write {}: {e}", path.display()))?;
    }
    if checks.iter().all(|c| c.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Basis { common, k } => cmd_basis(common, k),
        Command::Transform { common, input } => cmd_transform(common, input),
        Command::Verify { common, suite, tol } => cmd_verify(common, suite, tol),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
