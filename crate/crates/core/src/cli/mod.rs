//! The `sechprolate` command line: `svd`, `bounds`, `widom`, `extrapolate`
//! and `selftest`. Exit codes are 0 on success, 2 on usage or input errors
//! and 3 on numerical or I/O failures.

pub mod cache;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::bounds::{
    beta, bounds_report, fitted_decay_slope, ode_route_rho, widom_slope, BoundsReport,
};
use crate::extrapolation::{
    adaptive_n, builtin_case, cutoff_estimate, n_max, pswf_adaptive_n, pswf_cutoff_estimate,
    rate_sweep, AdaptiveChoice, BuiltinCase, CutoffEstimate, ExtrapolationOptions, NRule,
    ObservationWindow, PenaltySign, DEFAULT_WINDOW_NODES,
};
use crate::pswf::PswfSystem;
use crate::sech_operator::{nystrom_eigensystem, OperatorParams};
use crate::svd_assembly::{compute_svd, SvdDocument, SvdOptions, RAYLEIGH_FLOOR};
use output::{fmt_f, fmt_opt, io_err, sha256_hex, OutputDir};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: u64,
        msg: String,
    },

    #[error(transparent)]
    Numerical(#[from] crate::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("self-test failed: {0}")]
    SelfTest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Numerical(crate::Error::InvalidArgument(_)) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sechprolate",
    version,
    about = "SVD of the Fourier transform truncated to [-c, c] on L2(cosh(b x)) and spectral cut-off extrapolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular triplets of the truncated Fourier transform.
    Svd(SvdArgs),
    /// Eigenvalue, χ and sup-norm bounds next to computed spectra.
    Bounds(BoundsArgs),
    /// Decay exponents of ρ_m^c against c.
    Widom(WidomArgs),
    /// Spectral cut-off extrapolation of window data.
    Extrapolate(ExtrapolateArgs),
    /// Desk-scale checks with deterministic data files.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct SvdArgs {
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    /// Nyström grid size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub m_max: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct WidomArgs {
    /// Values of c; defaults to 0.05, 0.10, ..., 4.00.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
    /// Also fit −log ρ_m over m = 6..=12 on the ODE route.
    #[arg(long)]
    pub fit: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A,
    B,
}

impl From<CaseArg> for BuiltinCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::A => BuiltinCase::A,
            CaseArg::B => BuiltinCase::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for PenaltySign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => PenaltySign::Plus,
            SignArg::Minus => PenaltySign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Cosh,
    Pswf,
}

#[derive(Debug, Args)]
pub struct ExtrapolateArgs {
    #[arg(long, value_enum, required_unless_present = "input")]
    pub case: Option<CaseArg>,
    /// CSV with columns x, f_delta.
    #[arg(long, conflicts_with = "case")]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "case")]
    pub delta: Option<f64>,
    #[arg(long, conflicts_with = "case", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, conflicts_with = "case", default_value_t = 0.5)]
    pub c: f64,
    #[arg(
        long,
        conflicts_with = "case",
        default_value_t = 0.0,
        allow_hyphen_values = true
    )]
    pub x0: f64,
    /// Pick N by the penalised rule (default).
    #[arg(long, conflicts_with = "n")]
    pub adaptive: bool,
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Sign of Σ(N') inside B(N).
    #[arg(long, value_enum, default_value = "plus")]
    pub sign: SignArg,
    #[arg(long, value_enum, default_value = "cosh")]
    pub basis: BasisArg,
    /// Noise levels for a rate table.
    #[arg(long, value_delimiter = ',', requires = "case")]
    pub sweep: Vec<f64>,
    /// Use `⌊ln(1/δ)/(κ+β)⌋` instead of `⌊ln(1/δ)/(2β)⌋` in the sweep.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_WINDOW_NODES)]
    pub window_nodes: usize,
    #[arg(long, default_value_t = 1 << 12)]
    pub fft_len: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value = "selftest-out")]
    pub out: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Svd(a) => cmd_svd(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Widom(a) => cmd_widom(&a),
        Command::Extrapolate(a) => cmd_extrapolate(&a),
        Command::Selftest(a) => cmd_selftest(&a),
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive, got {x}"
        )))
    }
}

fn svd_summary_rows(doc: &SvdDocument) -> Vec<Vec<String>> {
    doc.entries
        .iter()
        .map(|e| {
            vec![
                e.m.to_string(),
                fmt_f(e.sigma),
                fmt_f(e.rho),
                e.trusted.to_string(),
            ]
        })
        .collect()
}

const SVD_SUMMARY_HEADER: [&str; 4] = ["m", "sigma", "rho", "trusted"];

pub fn cmd_svd(a: &SvdArgs) -> Result<(), CliError> {
    let params = OperatorParams::new(positive("b", a.b)?, positive("c", a.c)?)?;
    let mut opts = SvdOptions::default();
    opts.spectrum.n_nystrom = a.n;
    let key = cache::cache_key(
        "svd",
        &[
            ("b", cache::float_field(a.b)),
            ("c", cache::float_field(a.c)),
            ("m_max", a.m_max.to_string()),
            ("n", format!("{:?}", a.n)),
        ],
    );
    let dir = cache::cache_dir();
    let mut out = OutputDir::create(&a.out)?;
    let (bytes, hit) = match cache::load(&dir, &key) {
        Some(bytes) => (bytes, true),
        None => {
            let svd = compute_svd(params, a.m_max, &opts)?;
            let mut bytes =
                serde_json::to_vec_pretty(&SvdDocument::from(&svd)).map_err(|e| CliError::Io {
                    context: "serializing SVD".into(),
                    source: e.into(),
                })?;
            bytes.push(b'\n');
            if let Err(e) = cache::store(&dir, &key, &bytes) {
                log::warn!("cache not written: {e}");
            }
            (bytes, false)
        }
    };
    let doc: SvdDocument = serde_json::from_slice(&bytes).map_err(|e| CliError::Io {
        context: "reading cached SVD".into(),
        source: e.into(),
    })?;
    out.write_bytes("svd.json", &bytes)?;
    out.write_csv(
        "svd_summary.csv",
        &SVD_SUMMARY_HEADER,
        &svd_summary_rows(&doc),
    )?;
    out.finish(
        "svd",
        json!({"b": a.b, "c": a.c, "m_max": a.m_max, "n": a.n}),
        BTreeMap::new(),
        json!({"cache_key": key, "cache_hit": hit, "entries": doc.entries.len()}),
    )
}

const BOUNDS_HEADER: [&str; 17] = [
    "c",
    "m",
    "lower_small_c",
    "lower_all_c",
    "lower_combined",
    "rho",
    "rho_trusted",
    "upper",
    "chi_lo",
    "chi_hi",
    "chi",
    "supnorm_bound",
    "supnorm_observed",
    "lower_exponent",
    "upper_exponent",
    "widom_slope",
    "slope_fit",
];

fn bounds_rows(r: &BoundsReport) -> Vec<Vec<String>> {
    r.rows
        .iter()
        .map(|row| {
            vec![
                fmt_f(r.c),
                row.m.to_string(),
                fmt_opt(row.lower_small_c),
                fmt_f(row.lower_all_c),
                fmt_f(row.lower_combined),
                fmt_f(row.rho_computed),
                row.rho_trusted.to_string(),
                fmt_opt(row.upper),
                fmt_f(row.chi_lo),
                fmt_f(row.chi_hi),
                fmt_f(row.chi_computed),
                fmt_f(row.supnorm_bound),
                fmt_f(row.supnorm_observed),
                fmt_f(r.lower_exponent),
                fmt_opt(r.upper_exponent),
                fmt_f(r.widom_slope),
                fmt_opt(r.slope_fit),
            ]
        })
        .collect()
}

fn write_bounds(
    out: &mut OutputDir,
    cs: &[f64],
    m_max: usize,
) -> Result<Vec<BoundsReport>, CliError> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &c in cs {
        let r = bounds_report(positive("c", c)?, m_max)?;
        rows.extend(bounds_rows(&r));
        reports.push(r);
    }
    out.write_csv("bounds.csv", &BOUNDS_HEADER, &rows)?;
    Ok(reports)
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<(), CliError> {
    let mut out = OutputDir::create(&a.out)?;
    let reports = write_bounds(&mut out, &a.c, a.m_max)?;
    out.write_json("bounds.json", &reports)?;
    out.finish(
        "bounds",
        json!({"c": a.c, "m_max": a.m_max}),
        BTreeMap::new(),
        json!({"rows": reports.iter().map(|r| r.rows.len()).sum::<usize>()}),
    )
}

/// Slope of `−log ρ_m` over `m = 6..=12` from ODE-route Rayleigh quotients
/// above the trusted floor; `None` with fewer than three usable points.
pub fn ode_route_slope(c: f64) -> crate::Result<Option<f64>> {
    let rho = ode_route_rho(c, 12)?;
    let ms: Vec<usize> = (6..=12)
        .filter(|&m| rho[m] >= RAYLEIGH_FLOOR * rho[0])
        .collect();
    Ok((ms.len() >= 3).then(|| fitted_decay_slope(&ms, &rho)))
}

pub fn cmd_widom(a: &WidomArgs) -> Result<(), CliError> {
    let cs: Vec<f64> = if a.c.is_empty() {
        (1..=80).map(|i| i as f64 * 0.05).collect()
    } else {
        a.c.clone()
    };
    let mut rows = Vec::with_capacity(cs.len());
    for &c in &cs {
        let c = positive("c", c)?;
        let fit = if a.fit { ode_route_slope(c)? } else { None };
        rows.push(vec![
            fmt_f(c),
            fmt_f(2.0 * beta(c)),
            fmt_opt((c < 1.0).then(|| 2.0 * (1.0 / c).ln())),
            fmt_f(widom_slope(c)),
            fmt_opt(fit),
        ]);
    }
    let mut out = OutputDir::create(&a.out)?;
    out.write_csv(
        "widom.csv",
        &[
            "c",
            "lower_exponent",
            "upper_exponent",
            "widom_slope",
            "fitted_slope",
        ],
        &rows,
    )?;
    out.finish(
        "widom",
        json!({"c": cs, "fit": a.fit}),
        BTreeMap::new(),
        json!({"rows": rows.len()}),
    )
}

/// Reads `x,f_delta` rows; errors carry the 1-based line number.
pub fn read_window_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>, String), CliError> {
    let bytes = std::fs::read(path).map_err(io_err(format!("reading {}", path.display())))?;
    let hash = sha256_hex(&bytes);
    let name = path.display().to_string();
    let parse_err = |line: u64, msg: String| CliError::Parse {
        path: name.clone(),
        line,
        msg,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let header = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() != 2 || &header[0] != "x" || &header[1] != "f_delta" {
        return Err(parse_err(1, "expected header `x,f_delta`".into()));
    }
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let num = |i: usize| -> Result<f64, CliError> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("`{}` is not a finite number", &rec[i])))
        };
        xs.push(num(0)?);
        vs.push(num(1)?);
    }
    if xs.len() < 2 {
        return Err(parse_err(1, "need at least two data rows".into()));
    }
    Ok((xs, vs, hash))
}

enum Route {
    Cosh(crate::svd_assembly::Svd),
    Pswf(PswfSystem),
}

impl Route {
    fn adaptive(
        &self,
        obs: &ObservationWindow,
        sign: PenaltySign,
    ) -> crate::Result<AdaptiveChoice> {
        match self {
            Route::Cosh(svd) => adaptive_n(obs, svd, sign),
            Route::Pswf(sys) => pswf_adaptive_n(obs, sys, sign),
        }
    }

    fn estimate(
        &self,
        obs: &ObservationWindow,
        n: usize,
        opts: &ExtrapolationOptions,
    ) -> crate::Result<CutoffEstimate> {
        match self {
            Route::Cosh(svd) => cutoff_estimate(obs, svd, n, opts),
            Route::Pswf(sys) => pswf_cutoff_estimate(obs, sys, n, opts),
        }
    }
}

pub fn cmd_extrapolate(a: &ExtrapolateArgs) -> Result<(), CliError> {
    let mut hashes = BTreeMap::new();
    let case: Option<BuiltinCase> = a.case.map(Into::into);
    if a.window_nodes < 2 {
        return Err(CliError::Usage("--window-nodes must be at least 2".into()));
    }
    if let Some(d) = a.delta {
        positive("delta", d)?;
    }
    let (obs, params) = match (case, &a.input) {
        (Some(case), _) => builtin_case(case, a.delta, a.window_nodes)?,
        (None, Some(path)) => {
            let (xs, vs, hash) = read_window_csv(path)?;
            hashes.insert(path.display().to_string(), hash);
            let delta = a
                .delta
                .ok_or_else(|| CliError::Usage("--input needs --delta".into()))?;
            let params = OperatorParams::new(positive("b", a.b)?, positive("c", a.c)?)?;
            (
                ObservationWindow::from_points(a.x0, a.c, delta, &xs, &vs)?,
                params,
            )
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --case or --input is required".into(),
            ))
        }
    };
    if a.basis == BasisArg::Pswf && !a.sweep.is_empty() {
        return Err(CliError::Usage(
            "--sweep runs on the cosh basis only".into(),
        ));
    }
    let sign: PenaltySign = a.sign.into();
    let opts = ExtrapolationOptions {
        fft_len: a.fft_len,
        ..ExtrapolationOptions::default()
    };
    let theorem_rule = match a.kappa {
        Some(k) => NRule::ExpRate(positive("kappa", k)?),
        None => NRule::LogRate,
    };
    let nm = n_max(obs.delta);
    let mut m_max = nm.max(a.n.unwrap_or(0));
    for rule in [theorem_rule, NRule::Adaptive(sign)] {
        m_max = m_max.max(crate::extrapolation::levels_needed(params, &a.sweep, rule));
    }
    let route = match a.basis {
        BasisArg::Cosh => Route::Cosh(compute_svd(params, m_max + 2, &SvdOptions::default())?),
        BasisArg::Pswf => Route::Pswf(PswfSystem::new(params.b, params.c, m_max + 2)?),
    };
    let adaptive = match a.n {
        Some(_) => None,
        None => Some(route.adaptive(&obs, sign)?),
    };
    let n_used =
        a.n.or(adaptive.as_ref().map(|c| c.n_hat))
            .expect("one is set");
    let est = route.estimate(&obs, n_used, &opts)?;
    let r = &est.reconstruction;
    let truth = obs.truth;
    let half = opts.report_half_width;
    let mut out = OutputDir::create(&a.out)?;
    let rows: Vec<Vec<String>> =
        r.z.iter()
            .zip(&r.values)
            .map(|(&z, &v)| {
                let mut row = vec![fmt_f(z), fmt_f(v)];
                if let Some(t) = truth {
                    row.push(fmt_f(t.truth(z)));
                }
                row
            })
            .collect();
    let header: &[&str] = if truth.is_some() {
        &["x", "f_hat", "f_true"]
    } else {
        &["x", "f_hat"]
    };
    out.write_csv("reconstruction.csv", header, &rows)?;

    let mut results = json!({
        "basis": format!("{:?}", a.basis).to_lowercase(),
        "n_used": n_used,
        "n_max": nm,
        "adaptive": adaptive,
        "coefficients": est.d,
        "sigma": est.sigma,
        "grid_points": r.z.len(),
        "max_imag": r.max_imag,
    });
    if let Some(t) = truth {
        let err = r.l2_error(|x| t.truth(x), obs.x0, half);
        let mut per_n = Vec::with_capacity(nm + 1);
        for n in 0..=nm {
            let e = route.estimate(&obs, n, &opts)?;
            per_n.push(e.reconstruction.l2_error(|x| t.truth(x), obs.x0, half));
        }
        let (best_n, best) =
            per_n
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (n, e)| if e < acc.1 { (n, e) } else { acc },
                );
        results["error"] = json!(err);
        results["oracle"] = json!({"errors": per_n, "best_n": best_n, "best_error": best});
    }
    if let (Some(case), false, Route::Cosh(svd)) = (case, a.sweep.is_empty(), &route) {
        let mut sweep_rows = Vec::new();
        let mut slopes = serde_json::Map::new();
        for (label, rule) in [
            ("theorem", theorem_rule),
            ("adaptive", NRule::Adaptive(sign)),
        ] {
            let s = rate_sweep(case, &a.sweep, rule, svd, a.window_nodes, &opts)?;
            for row in &s.rows {
                sweep_rows.push(vec![
                    label.to_string(),
                    fmt_f(row.delta),
                    row.n.to_string(),
                    fmt_f(row.error),
                ]);
            }
            slopes.insert(label.to_string(), json!(s.slope));
        }
        out.write_csv("rate.csv", &["rule", "delta", "n", "error"], &sweep_rows)?;
        results["sweep_slopes"] = serde_json::Value::Object(slopes);
    }
    out.finish(
        "extrapolate",
        json!({
            "case": case,
            "input": a.input.as_ref().map(|p| p.display().to_string()),
            "b": params.b,
            "c": params.c,
            "x0": obs.x0,
            "delta": obs.delta,
            "N": a.n,
            "sign": sign,
            "window_nodes": obs.grid.len(),
            "fft_len": opts.fft_len,
            "sweep": a.sweep,
            "kappa": a.kappa,
        }),
        hashes,
        results,
    )
}

pub fn cmd_selftest(a: &SelftestArgs) -> Result<(), CliError> {
    let mut out = OutputDir::create(&a.out)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, value: f64, limit: f64, pass: bool| {
        checks.push(json!({"name": name, "value": value, "limit": limit, "pass": pass}));
    };

    let mut trace_rows = Vec::new();
    for c in [0.25, 1.0, 4.0] {
        let nys = nystrom_eigensystem(c, 256, 0)?;
        let expect = 2.0 * std::f64::consts::PI * c;
        let rel = (nys.trace() - expect).abs() / expect;
        trace_rows.push(vec![
            fmt_f(c),
            fmt_f(nys.trace()),
            fmt_f(expect),
            fmt_f(rel),
        ]);
        check(&format!("trace c={c}"), rel, 1e-10, rel < 1e-10);
    }
    out.write_csv(
        "trace.csv",
        &["c", "trace", "two_pi_c", "rel_error"],
        &trace_rows,
    )?;

    let svd = compute_svd(OperatorParams::new(1.0, 1.0)?, 8, &SvdOptions::default())?;
    let doc = SvdDocument::from(&svd);
    out.write_csv(
        "svd_summary.csv",
        &SVD_SUMMARY_HEADER,
        &svd_summary_rows(&doc),
    )?;
    let decreasing = svd.triplets.windows(2).all(|w| w[1].sigma < w[0].sigma);
    check("sigma decreasing", 0.0, 0.0, decreasing);
    let orth = (0..=8)
        .flat_map(|i| (0..=8).map(move |j| (i, j)))
        .map(|(i, j)| (svd.phi_inner(i, j).norm() - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    check("phi orthonormal", orth, 1e-4, orth < 1e-4);

    let reports = write_bounds(&mut out, &[0.5], 10)?;
    let sandwich = reports[0].rows.iter().all(|r| {
        r.lower_combined <= r.rho_computed * (1.0 + 1e-8)
            && r.upper.is_none_or(|u| r.rho_computed <= u * (1.0 + 1e-8))
    });
    check("rho sandwich c=0.5", 0.0, 0.0, sandwich);

    let opts = ExtrapolationOptions::default();
    for case in [BuiltinCase::A, BuiltinCase::B] {
        let (obs, params) = builtin_case(case, None, DEFAULT_WINDOW_NODES)?;
        let svd = compute_svd(params, n_max(obs.delta) + 2, &SvdOptions::default())?;
        let choice = adaptive_n(&obs, &svd, PenaltySign::Plus)?;
        let est = cutoff_estimate(&obs, &svd, choice.n_hat, &opts)?;
        let r = &est.reconstruction;
        let rows: Vec<Vec<String>> =
            r.z.iter()
                .zip(&r.values)
                .map(|(&z, &v)| vec![fmt_f(z), fmt_f(v), fmt_f(case.truth(z))])
                .collect();
        let name = format!(
            "extrapolate_{}.csv",
            if case == BuiltinCase::A { "a" } else { "b" }
        );
        out.write_csv(&name, &["x", "f_hat", "f_true"], &rows)?;
        check(
            &format!("{case:?} N_hat <= N_max"),
            choice.n_hat as f64,
            choice.n_max as f64,
            choice.n_hat <= choice.n_max,
        );
        check(
            &format!("{case:?} real reconstruction"),
            r.max_imag,
            1e-8,
            r.max_imag < 1e-8,
        );
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap_or_default().to_string())
        .collect();
    out.write_json("selftest.json", &checks)?;
    out.finish(
        "selftest",
        json!({}),
        BTreeMap::new(),
        json!({"failed": failed}),
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelfTest(failed.join(", ")))
    }
}
