//! The `sharplp` command line.
//!
//! Exit codes: `0` when every check passes, `1` when a mathematical check
//! fails, `2` on usage errors.

use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{audit_chain, ChainContext, DEFAULT_GRID};
use crate::campaign::{
    main_campaign, schatten_campaign, CampaignConfig, SchattenCampaignConfig, DEFAULT_TRIALS,
    SCHATTEN_DIMS, SCHATTEN_EXPONENTS, SCHATTEN_TRIALS,
};
use crate::means::{agm_chain, constant_factor_with, qmeans_sides, sharpness_probe, AgmChain, QMeansSides};
use crate::precision::Precision;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exponents closer than this to `0, 1, 2` without being equal are refused.
pub const SPECIAL_EXPONENT_GAP: f64 = 1e-9;

/// Default `c` grid of the `audit` command.
pub const AUDIT_C_GRID: [f64; 14] = [
    -3.0, -1.0, -0.2, 0.05, 0.2, 0.35, 0.45, 0.55, 0.7, 0.9, 1.3, 2.0, 3.5, 8.0,
];

#[derive(Debug, Parser)]
#[command(name = "sharplp", version, about = "Numerical checks of a sharpened Lp triangle inequality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid of the constant-case factor with q = 2/p, as `alpha,p,value` rows.
    Contour(ContourArgs),
    /// Random campaign for the main inequality.
    Verify(VerifyArgs),
    /// Sign-pattern audit of the auxiliary functions over a grid of c = 1/p.
    Audit(AuditArgs),
    /// Slope and witness search for the exponent r·2/p.
    Sharpness(SharpnessArgs),
    /// Random campaign for the trace inequality and the Lieb–Thirring link.
    Schatten(SchattenArgs),
    /// AGM chain and power-mean sides at one point.
    Means(MeansArgs),
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub p_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub p_max: f64,
    #[arg(long, default_value_t = 400)]
    pub na: usize,
    #[arg(long, default_value_t = 400)]
    pub np: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Comma-separated exponents; defaults to the forward and reverse sets.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p_list: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// A single c; overrides `--c-grid`.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c_grid: Option<Vec<f64>>,
    /// Scan points per function.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct SchattenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SCHATTEN_TRIALS)]
    pub trials: usize,
    /// One dimension; defaults to 2 through 6.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,
    /// Allow exponents other than powers of two; those cells are labelled
    /// conjectural and do not affect the exit code.
    #[arg(long)]
    pub explore: bool,
}

#[derive(Debug, Args)]
pub struct MeansArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub p: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

/// `%.17g`-style formatting: 17 significant digits, no locale.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.16e}");
        let (mantissa, exponent) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

fn near_special(p: f64) -> bool {
    [0.0, 1.0, 2.0]
        .iter()
        .any(|&s| p != s && (p - s).abs() < SPECIAL_EXPONENT_GAP)
}

fn check_exponents(ps: &[f64]) -> std::result::Result<(), Failure> {
    for &p in ps {
        if !p.is_finite() {
            return Err(Failure::Usage(format!("exponent {p} is not finite")));
        }
        if p == 0.0 {
            return Err(Failure::Usage("p = 0 is not an exponent".into()));
        }
        if near_special(p) {
            return Err(Failure::Usage(format!(
                "p = {p} is within {SPECIAL_EXPONENT_GAP} of 0, 1 or 2; use the exact value"
            )));
        }
    }
    Ok(())
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Usage(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn require_json(format: Option<Format>, command: &str) -> std::result::Result<(), Failure> {
    match format {
        Some(Format::Csv) => Err(Failure::Usage(format!("{command} only writes JSON"))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct ContourRow {
    alpha: f64,
    p: f64,
    value: f64,
}

fn contour(args: &ContourArgs, format: Option<Format>, precision: Precision) -> Outcome {
    if args.na < 2 || args.np < 2 {
        return Err(Failure::Usage("grids need at least 2 points per axis".into()));
    }
    if !(args.alpha_min < args.alpha_max) || !(args.p_min < args.p_max) {
        return Err(Failure::Usage("ranges must be ordered, min < max".into()));
    }
    if args.alpha_min < 0.0 || args.alpha_max > 1.0 {
        return Err(Failure::Usage("alpha must lie in [0, 1]".into()));
    }
    let alphas = grid(args.alpha_min, args.alpha_max, args.na);
    let ps = grid(args.p_min, args.p_max, args.np);
    check_exponents(&ps)?;
    let mut rows = Vec::with_capacity(alphas.len() * ps.len());
    for &p in &ps {
        for &alpha in &alphas {
            let value = constant_factor_with(alpha, p, 2.0 / p, precision)?;
            rows.push(ContourRow { alpha, p, value });
        }
    }
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("alpha,p,value\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", format_g17(r.alpha), format_g17(r.p), format_g17(r.value)));
            }
            s
        }
        Format::Json => to_json(&rows)?,
    };
    Ok((text, true))
}

fn verify(args: &VerifyArgs, format: Option<Format>) -> Outcome {
    require_json(format, "verify")?;
    let mut config = CampaignConfig {
        seed: args.seed,
        trials: args.trials,
        ..CampaignConfig::default()
    };
    if let Some(ps) = &args.p_list {
        config.exponents = ps.clone();
    }
    check_exponents(&config.exponents)?;
    let summary = main_campaign(&config)?;
    Ok((to_json(&summary)?, summary.passed()))
}

fn audit(args: &AuditArgs, format: Option<Format>) -> Outcome {
    require_json(format, "audit")?;
    let cs = match (args.c, &args.c_grid) {
        (Some(c), _) => vec![c],
        (None, Some(grid)) => grid.clone(),
        (None, None) => AUDIT_C_GRID.to_vec(),
    };
    let mut reports = Vec::with_capacity(cs.len());
    for c in cs {
        let ctx = ChainContext::from_c(c).map_err(|e| Failure::Usage(e.to_string()))?;
        reports.push(audit_chain(&ctx, args.points).map_err(|e| match e {
            Error::ExponentOutOfRange { .. } | Error::TooCoarse(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        })?);
    }
    let ok = reports.iter().all(|r| r.all_match() && r.endpoints.hold());
    Ok((to_json(&reports)?, ok))
}

fn sharpness(args: &SharpnessArgs, format: Option<Format>) -> Outcome {
    require_json(format, "sharpness")?;
    check_exponents(&[args.p])?;
    let result = sharpness_probe(args.p, args.r).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((to_json(&result)?, true))
}

fn schatten(args: &SchattenArgs, format: Option<Format>) -> Outcome {
    require_json(format, "schatten")?;
    let config = SchattenCampaignConfig {
        seed: args.seed,
        trials: args.trials,
        exponents: args.p_list.clone().unwrap_or_else(|| SCHATTEN_EXPONENTS.to_vec()),
        dims: args.dim.map(|d| vec![d]).unwrap_or_else(|| SCHATTEN_DIMS.to_vec()),
        explore: args.explore,
    };
    let summary = schatten_campaign(&config).map_err(|e| match e {
        Error::UnsupportedExponent { .. } | Error::DimOutOfRange { .. } | Error::ExponentOutOfRange { .. } => {
            Failure::Usage(e.to_string())
        }
        other => Failure::Runtime(other),
    })?;
    Ok((to_json(&summary)?, summary.passed()))
}

#[derive(Serialize)]
struct MeansOutput {
    agm_chain: AgmChain,
    qmeans: QMeansSides,
}

fn means(args: &MeansArgs, format: Option<Format>) -> Outcome {
    require_json(format, "means")?;
    let chain = agm_chain(args.x, args.y, args.p).map_err(|e| Failure::Usage(e.to_string()))?;
    let qmeans = qmeans_sides(args.x, args.y, args.p).map_err(|e| Failure::Usage(e.to_string()))?;
    let ok = chain.is_ordered(1e-12);
    Ok((to_json(&MeansOutput { agm_chain: chain, qmeans })?, ok))
}

fn execute(cli: &Cli, precision: Precision) -> Outcome {
    match &cli.command {
        Command::Contour(a) => contour(a, cli.format, precision),
        Command::Verify(a) => verify(a, cli.format),
        Command::Audit(a) => audit(a, cli.format),
        Command::Sharpness(a) => sharpness(a, cli.format),
        Command::Schatten(a) => schatten(a, cli.format),
        Command::Means(a) => means(a, cli.format),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let precision = match Precision::from_env() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli, precision) {
        Ok((text, ok)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, text.as_bytes()),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

pub fn main_from_env() -> i32 {
    run(std::env::args_os())
}
