//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lpsd_core::cones::{
    frobenius_dist_bound, frobenius_dist_to_psd, in_h_c, in_h_e, in_s_nk, in_s_nk_with,
    min_eig_bound, norm_value, BoundSpec, Norm, Scan, Verdict,
};
use lpsd_core::nls::{
    diag_congruent_to_g, enumerate_sign_cases_42, is_locally_singular, is_nls, is_nls_exact,
    verify_structure_sample, assemble_structure_report, check_structure_params,
};
use lpsd_core::quartic::{find_almost_nonneg_k, has_good_roots, QuarticPoly};
use lpsd_core::realize::{
    dgd_family, realize_h_nminus1, realize_k1, sample_s_nk_indexed, spectrum_residual, Strategy,
};
use lpsd_core::spectra::eigenvalues_sym;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::io::{self, MatrixFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OUTSIDE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lpsd", version, about = "Locally PSD matrices: membership, bounds, realization and structure checks")]
pub struct Cli {
    /// Worker threads for sampling and enumeration (default: all logical CPUs).
    #[arg(long, global = true, env = "LPSD_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Relative tolerance for boundary and singularity decisions.
    #[arg(long, global = true, default_value_t = lpsd_core::cones::DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership in S^{n,k}, H(e_k) or H(c_k).
    Membership(MembershipArgs),
    /// Minimum-eigenvalue and distance bounds, optionally checked by sampling.
    Bound(BoundArgs),
    /// Build a matrix with a prescribed spectrum.
    Realize(RealizeArgs),
    /// Structure checks for locally singular matrices.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SetKind {
    #[value(name = "s_nk")]
    SNk,
    #[value(name = "h_e")]
    HE,
    #[value(name = "h_c")]
    HC,
}

#[derive(Debug, Args)]
pub struct MembershipArgs {
    #[arg(long, value_enum)]
    pub set: SetKind,
    #[arg(long)]
    pub k: usize,
    /// Inline vector for h_e, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
    /// Matrix file (s_nk, h_c) or vector file (h_e).
    pub file: Option<PathBuf>,
    /// List every violating submatrix instead of stopping at the first.
    #[arg(long)]
    pub all_certificates: bool,
    /// Replace a non-symmetric input by (A + A^T)/2 instead of rejecting it.
    #[arg(long)]
    pub symmetrize: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormKind {
    Trace,
    Frobenius,
    Schatten,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum, default_value_t = NormKind::Trace)]
    pub norm: NormKind,
    /// Schatten exponent.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, required_unless_present = "sweep")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "sweep")]
    pub k: Option<usize>,
    /// Also report the Frobenius distance-to-PSD bound.
    #[arg(long)]
    pub dist: bool,
    /// Check the bound on this many sampled matrices.
    #[arg(long)]
    pub verify: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tabulate the bound for all 2 <= k <= n <= N.
    #[arg(long, value_name = "N")]
    pub sweep: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["vector", "quartic"]))]
pub struct RealizeArgs {
    /// `1` or `n-1`.
    #[arg(long, requires = "vector")]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
    /// Quartic coefficients a0,a1,a2,a3 of a0 + a1 x + a2 x^2 + a3 x^3 + x^4.
    #[arg(long, allow_hyphen_values = true)]
    pub quartic: Option<String>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["enumerate_42", "nls", "verify_structure"]))]
pub struct ClassifyArgs {
    /// All 64 unit-diagonal sign patterns of size 4.
    #[arg(long = "enumerate-42")]
    pub enumerate_42: bool,
    /// Is the matrix in FILE nonsingular and locally singular?
    #[arg(long, requires_all = ["k", "file"])]
    pub nls: bool,
    /// Recover D from D G(n,k) D on sampled instances.
    #[arg(long, requires_all = ["n", "k"])]
    pub verify_structure: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub symmetrize: bool,
}

/// A finished command: what to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn json(value: Value, code: i32) -> Self {
        let mut body = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        body.push('\n');
        Outcome { body, code }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        bail!("--tol must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .context("cannot start worker pool")?;
    pool.install(|| match &cli.command {
        Command::Membership(a) => membership(a, cli.tol),
        Command::Bound(a) => bound(a),
        Command::Realize(a) => realize(a, cli.tol),
        Command::Classify(a) => classify(a, cli.tol),
    })
}

/// Parses `args`, runs and writes the report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.body).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout().write_all(outcome.body.as_bytes()).context("cannot write to stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return EXIT_ERROR;
    }
    outcome.code
}

fn verdict_code(v: Verdict) -> i32 {
    if v.is_member() {
        EXIT_OK
    } else {
        EXIT_OUTSIDE
    }
}

fn membership(a: &MembershipArgs, tol: f64) -> anyhow::Result<Outcome> {
    let (n, report) = match a.set {
        SetKind::HE => {
            let x = match (&a.vector, &a.file) {
                (Some(v), _) => io::parse_vector(v)?,
                (None, Some(path)) => io::parse_vector(&io::read_text(path)?)?,
                (None, None) => bail!("h_e needs --vector or a vector file"),
            };
            (x.len(), in_h_e(&x, a.k, tol)?)
        }
        SetKind::SNk | SetKind::HC => {
            let path = a.file.as_ref().ok_or_else(|| anyhow!("a matrix file is required"))?;
            let m = io::read_matrix(path, a.symmetrize)?.to_f64();
            let report = match a.set {
                SetKind::HC => in_h_c(&m, a.k, tol)?,
                _ if a.all_certificates => in_s_nk_with(&m, a.k, tol, Scan::Exhaustive)?,
                _ => in_s_nk(&m, a.k, tol)?,
            };
            (m.n(), report)
        }
    };
    let set = match a.set {
        SetKind::SNk => "s_nk",
        SetKind::HE => "h_e",
        SetKind::HC => "h_c",
    };
    let code = verdict_code(report.verdict);
    Ok(Outcome::json(
        json!({
            "command": "membership",
            "set": set,
            "n": n,
            "k": a.k,
            "tol": tol,
            "report": report,
        }),
        code,
    ))
}

fn norm_of(a: &BoundArgs) -> anyhow::Result<Norm> {
    Ok(match a.norm {
        NormKind::Trace => Norm::Trace,
        NormKind::Frobenius => Norm::Frobenius,
        NormKind::Schatten => Norm::Schatten(a.p.ok_or_else(|| anyhow!("--norm schatten needs --p"))?),
    })
}

fn norm_name(norm: Norm) -> String {
    match norm {
        Norm::Trace => "trace".into(),
        Norm::Frobenius => "frobenius".into(),
        Norm::Schatten(p) => format!("schatten({p})"),
    }
}

const STRATEGIES: [Strategy; 3] = [Strategy::Rejection, Strategy::Congruence, Strategy::PsdMix { psd_weight: None }];

/// Per-sample `(lambda_1, distance)` after normalizing by `norm`.
fn sample_extremes(spec: &BoundSpec, samples: usize, seed: u64) -> anyhow::Result<Vec<(f64, f64)>> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| -> anyhow::Result<(f64, f64)> {
            let m = sample_s_nk_indexed(spec.n, spec.k, seed, i, STRATEGIES[i as usize % 3])?;
            let scale = norm_value(&m, spec.norm)?;
            let m = m.scaled(&(1.0 / scale));
            let f = m.frobenius_norm();
            let dist = frobenius_dist_to_psd(&m)? / f;
            Ok((eigenvalues_sym(&m)?.min(), dist))
        })
        .collect()
}

fn bound(a: &BoundArgs) -> anyhow::Result<Outcome> {
    let norm = norm_of(a)?;
    if let Some(top) = a.sweep {
        let mut rows = Vec::new();
        for n in 2..=top {
            for k in 2..=n {
                rows.push((n, k, min_eig_bound(&BoundSpec::new(norm, n, k)?)));
            }
        }
        return Ok(match a.format {
            Format::Csv => {
                let mut body = String::from("n,k,norm,bound\n");
                for (n, k, b) in rows {
                    body.push_str(&format!("{n},{k},{},{b}\n", norm_name(norm)));
                }
                Outcome { body, code: EXIT_OK }
            }
            Format::Json => Outcome::json(
                json!({
                    "command": "bound",
                    "norm": norm_name(norm),
                    "sweep": rows.iter().map(|(n, k, b)| json!({"n": n, "k": k, "bound": b})).collect::<Vec<_>>(),
                }),
                EXIT_OK,
            ),
        });
    }
    let (n, k) = (a.n.expect("required by clap"), a.k.expect("required by clap"));
    let spec = BoundSpec::new(norm, n, k)?;
    let b = min_eig_bound(&spec);
    let dist = frobenius_dist_bound(n, k)?;
    let mut report = json!({
        "command": "bound",
        "norm": norm_name(norm),
        "n": n,
        "k": k,
        "bound": b,
    });
    if a.dist {
        report["distance_bound"] = json!(dist);
    }
    let mut code = EXIT_OK;
    if let Some(samples) = a.verify {
        if samples == 0 {
            bail!("--verify needs at least one sample");
        }
        let results = sample_extremes(&spec, samples, a.seed)?;
        let worst_eig = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let worst_dist = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let mut passed = worst_eig >= b - 1e-9;
        let mut check = json!({
            "samples": samples,
            "seed": a.seed,
            "worst_min_eigenvalue": worst_eig,
        });
        if a.dist {
            passed &= worst_dist <= dist + 1e-9;
            check["worst_distance"] = json!(worst_dist);
        }
        check["passed"] = json!(passed);
        report["verification"] = check;
        if !passed {
            code = EXIT_FALSIFIED;
        }
    }
    Ok(Outcome::json(report, code))
}

fn realize(a: &RealizeArgs, tol: f64) -> anyhow::Result<Outcome> {
    if let Some(text) = &a.quartic {
        return realize_quartic(&io::parse_quartic(text)?, tol);
    }
    let x = io::parse_vector(a.vector.as_deref().expect("required by clap"))?;
    let n = x.len();
    let k = match a.k.as_deref().map(str::trim) {
        Some("1") => 1,
        Some("n-1") | None => n - 1,
        Some(other) => match other.parse::<usize>() {
            Ok(v) if v == 1 || v + 1 == n => v,
            _ => bail!("--k must be 1 or n-1 (got {other:?})"),
        },
    };
    let membership = in_h_e(&x, k, tol)?;
    if !membership.verdict.is_member() {
        return Ok(Outcome::json(
            json!({
                "command": "realize",
                "k": k,
                "input": x,
                "membership": membership,
            }),
            EXIT_OUTSIDE,
        ));
    }
    let r = if k == 1 { realize_k1(&x, tol)? } else { realize_h_nminus1(&x, tol)? };
    let residual = spectrum_residual(&r.matrix, &x)?;
    let check = in_s_nk(&r.matrix, k, 1e-8)?;
    let passed = residual <= 1e-8 && check.verdict.is_member();
    Ok(Outcome::json(
        json!({
            "command": "realize",
            "k": k,
            "input": x,
            "route": r.route,
            "shift": r.shift,
            "matrix": io::matrix_json(&r.matrix),
            "verification": {
                "eigenvalue_residual": residual,
                "membership": check.verdict,
                "passed": passed,
            },
        }),
        if passed { EXIT_OK } else { EXIT_FALSIFIED },
    ))
}

fn realize_quartic(p: &QuarticPoly, tol: f64) -> anyhow::Result<Outcome> {
    let good = has_good_roots(p, tol.max(1e-9))?;
    if !good {
        return Ok(Outcome::json(
            json!({ "command": "realize", "quartic": p, "good_roots": false }),
            EXIT_OUTSIDE,
        ));
    }
    let Some(cert) = find_almost_nonneg_k(p)? else {
        return Ok(Outcome::json(
            json!({
                "command": "realize",
                "quartic": p,
                "good_roots": true,
                "certificate": null,
                "falsified": "good-rooted quartic without a certificate",
            }),
            EXIT_FALSIFIED,
        ));
    };
    let m = dgd_family(4, 2, &cert.d)?;
    Ok(Outcome::json(
        json!({
            "command": "realize",
            "quartic": p,
            "good_roots": true,
            "certificate": cert,
            "matrix": io::matrix_json(&m),
            "verification": {
                "coefficient_residual": cert.residual,
                "passed": cert.residual <= lpsd_core::quartic::RECONSTRUCTION_TOL,
            },
        }),
        EXIT_OK,
    ))
}

fn classify(a: &ClassifyArgs, tol: f64) -> anyhow::Result<Outcome> {
    if a.enumerate_42 {
        let cases = enumerate_sign_cases_42()?;
        return Ok(Outcome::json(json!(cases), EXIT_OK));
    }
    if a.nls {
        let k = a.k.expect("required by clap");
        let path = a.file.as_ref().expect("required by clap");
        let file = io::read_matrix(path, a.symmetrize)?;
        let m = file.to_f64();
        let (nls, mode) = match &file {
            MatrixFile::Exact(e) => (is_nls_exact(e, k)?, "exact"),
            MatrixFile::Float(f) => (is_nls(f, k, tol)?, "float"),
        };
        let witness = diag_congruent_to_g(&m, k, tol)?;
        return Ok(Outcome::json(
            json!({
                "command": "classify",
                "mode": mode,
                "n": file.n(),
                "k": k,
                "locally_singular": is_locally_singular(&m, k, tol)?,
                "nls": nls,
                "witness": witness,
            }),
            EXIT_OK,
        ));
    }
    let (n, k) = (a.n.expect("required by clap"), a.k.expect("required by clap"));
    check_structure_params(n, k)?;
    if a.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let samples = (0..a.samples as u64)
        .into_par_iter()
        .map(|i| verify_structure_sample(n, k, a.seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    let report = assemble_structure_report(n, k, a.seed, samples);
    let code = if report.all_passed { EXIT_OK } else { EXIT_FALSIFIED };
    Ok(Outcome::json(
        json!({ "command": "classify", "structure": report }),
        code,
    ))
}
