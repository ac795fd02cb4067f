//! `hyperperiod`: period matrices, period distributions and the equal-period
//! exclusion check from the command line.
//!
//! Exit codes: 0 success (or not excluded), 3 excluded, 1 any error. Errors
//! are written to stderr as a JSON object with a module-qualified `code`.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperperiod::distribution::{
    argument_spread, concavity_profile, select_entries, sorted_distribution, to_real_list, Entries, Mode, Source,
};
use hyperperiod::hypercurve::curve_from_input;
use hyperperiod::io::{format_distribution_csv, format_matrix_text, format_real, ingest_matrix, parse_curve_json};
use hyperperiod::periods::{period_matrix, raw_periods, riemann_residuals};
use hyperperiod::quadrature::QuadratureConfig;
use hyperperiod::schottky::{
    custom_relation_residual, equal_modulus_abelian_variety, hyperelliptic_exclusion, null_relation_residual,
    synthetic_flat, ExclusionConfig,
};
use hyperperiod::{Complex, Curve, PeriodConfig};
use serde::Serialize;

use report::{
    entries_name, mode_name, pairs, source_name, AnalyzeReport, CheckReport, ErrorReport, HomologyDump,
    PeriodsReport, RunConfig, Transform,
};

const EXIT_EXCLUDED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperperiod", version, about = "Period matrices of hyperelliptic curves")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Gauss-Chebyshev nodes per chord (at least 8).
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(8..))]
    order: u64,
    /// Largest accepted relative asymmetry of the period matrix.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    tolerance: f64,
    /// Flatness below which a pair-period matrix is excluded.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    epsilon: f64,
    /// How periods become reals: modulus, modulus2 or argument.
    #[arg(long, global = true, default_value = "modulus")]
    mode: Mode,
    /// Which matrix entries count as periods: upper or all.
    #[arg(long, global = true, default_value = "upper")]
    entries: Entries,
    /// Continuation step tolerance for sheet tracking.
    #[arg(long, global = true, default_value_t = 0.5, value_parser = positive)]
    step_tolerance: f64,
    /// Relative distance below which two branch points coincide.
    #[arg(long, global = true, default_value_t = hyperperiod::hypercurve::DEFAULT_SEPARATION, value_parser = positive)]
    separation: f64,
    /// Smallest distance from a chord to a foreign branch point, as a
    /// fraction of the chord length.
    #[arg(long, global = true, default_value_t = hyperperiod::homology::DEFAULT_CLEARANCE, value_parser = positive)]
    clearance: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Period matrix of a curve given by its branch points.
    Periods {
        /// Curve JSON `{"branch_points": [[re, im], ...]}`, or `-` for stdin.
        input: PathBuf,
        /// Write the JSON here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Include the spanning path, cycles and intersection data.
        #[arg(long)]
        dump_homology: bool,
    },
    /// Sorted period distribution of a period JSON or matrix text file.
    Analyze {
        /// Period JSON or matrix text, or `-` for stdin.
        input: PathBuf,
        /// Write the `rank,value` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the statistics JSON here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Pair-cycle relation residuals and the equal-period exclusion verdict.
    Check {
        /// Curve JSON, or `-` for stdin. Not used with --synthetic-flat.
        #[arg(required_unless_present = "synthetic_flat")]
        input: Option<PathBuf>,
        /// Coefficients of a custom relation over the pair cycles.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<i64>>,
        /// Check the all-rows-equal matrix of genus G instead of a curve.
        #[arg(long, value_name = "g=G", value_parser = parse_synthetic, conflicts_with = "input")]
        synthetic_flat: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Equal-modulus symmetric matrix with positive definite imaginary part.
    Sample {
        /// Genus, at least 1.
        #[arg(value_parser = parse_genus)]
        genus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn parse_genus(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(g) if g >= 1 => Ok(g),
        _ => Err(format!("genus must be an integer >= 1, got {s:?}")),
    }
}

fn parse_synthetic(s: &str) -> Result<usize, String> {
    parse_genus(s.strip_prefix("g=").unwrap_or(s))
}

#[derive(Debug)]
enum CliError {
    Core(hyperperiod::Error),
    Usage(String),
    Io { path: String, message: String },
    Internal(String),
}

impl CliError {
    fn code(&self) -> String {
        match self {
            CliError::Core(e) => e.code().to_string(),
            CliError::Usage(_) => "cli.Usage".into(),
            CliError::Io { .. } => "cli.Io".into(),
            CliError::Internal(_) => "cli.Internal".into(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) | CliError::Internal(m) => m.clone(),
            CliError::Io { path, message } => format!("{path}: {message}"),
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

from_core!(
    hyperperiod::Error,
    hyperperiod::hypercurve::HypercurveError,
    hyperperiod::periods::PeriodsError,
    hyperperiod::distribution::DistributionError,
    hyperperiod::schottky::SchottkyError
);

impl GlobalOpts {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            quadrature_order: self.order as usize,
            symmetry_tolerance: self.tolerance,
            flatness_epsilon: self.epsilon,
            distribution_mode: mode_name(self.mode),
            entry_selection: entries_name(self.entries),
            step_tolerance: self.step_tolerance,
            separation: self.separation,
            clearance: self.clearance,
        }
    }

    fn period_config(&self) -> PeriodConfig {
        PeriodConfig {
            quadrature: QuadratureConfig {
                order: self.order as usize,
                step_tolerance: self.step_tolerance,
                separation: self.separation,
            },
            clearance: self.clearance,
            symmetry_tolerance: self.tolerance,
            ..PeriodConfig::default()
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |e: io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn load_curve(path: &Path, opts: &GlobalOpts) -> Result<(Curve, Option<Transform>), CliError> {
    let file = parse_curve_json(&read_input(path)?)?;
    let (curve, record) = curve_from_input(file.points(), opts.separation)?;
    let transform = record.map(|r| Transform::new(&r, curve.branch_points()));
    Ok((curve, transform))
}

fn cmd_periods(opts: &GlobalOpts, input: &Path, output: Option<&Path>, dump: bool) -> Result<u8, CliError> {
    let (curve, transform) = load_curve(input, opts)?;
    let (table, pm) = period_matrix(&curve, &opts.period_config())?;
    let report = PeriodsReport {
        config: opts.run_config(),
        genus: curve.genus(),
        omega: pairs(&pm.omega),
        symmetry_residual: pm.symmetry_residual,
        min_imag_eigenvalue: pm.min_imag_eigenvalue,
        error_bound: pm.error_bound,
        condition: pm.condition,
        transform,
        pair_periods: pairs(&table.pair_periods),
        homology: dump.then(|| HomologyDump::new(&table.basis, &table.chord_signs)),
    };
    write_output(output, &to_json(&report)?)?;
    Ok(0)
}

fn cmd_analyze(opts: &GlobalOpts, input: &Path, csv: Option<&Path>, stats: Option<&Path>) -> Result<u8, CliError> {
    let text = read_input(input)?;
    let source = if text.trim_start().starts_with('{') {
        Source::ComputedCurve
    } else {
        Source::IngestedMatrix
    };
    let ingested = ingest_matrix(&text)?;
    let periods = select_entries(&ingested.matrix, opts.entries);
    let list = to_real_list(&periods, opts.mode)?;
    let dist = sorted_distribution(&list, opts.mode, source);
    let concavity = if dist.values.len() >= 3 {
        Some(concavity_profile(&dist)?.into())
    } else {
        None
    };
    let report = AnalyzeReport {
        config: opts.run_config(),
        source: source_name(&dist.source),
        genus: ingested.matrix.len(),
        count: dist.values.len(),
        symmetry_residual: ingested.symmetry_residual,
        min_imag_eigenvalue: ingested.min_imag_eigenvalue,
        concavity,
        argument_spread: argument_spread(&periods).ok(),
        max: dist.values.first().copied(),
        min: dist.values.last().copied(),
    };
    let csv_text = format_distribution_csv(&dist.values);
    let json = to_json(&report)?;
    match (csv, stats) {
        (None, None) => write_output(None, &format!("{csv_text}\n{json}"))?,
        _ => {
            write_output(csv, &csv_text)?;
            write_output(stats, &json)?;
        }
    }
    Ok(0)
}

fn cmd_check(
    opts: &GlobalOpts,
    input: Option<&Path>,
    coeffs: Option<&[i64]>,
    synthetic: Option<usize>,
    output: Option<&Path>,
) -> Result<u8, CliError> {
    let (pair_periods, genus, error_bound, transform, source) = match (synthetic, input) {
        (Some(g), _) => (synthetic_flat::<f64>(g), g, None, None, "synthetic_flat"),
        (None, Some(path)) => {
            let (curve, transform) = load_curve(path, opts)?;
            let table = raw_periods(&curve, &opts.period_config())?;
            let g = curve.genus();
            (table.pair_periods, g, Some(table.error_bound), transform, "computed_curve")
        }
        (None, None) => return Err(CliError::Usage("check needs a curve file or --synthetic-flat".into())),
    };
    let custom = coeffs
        .map(|c| custom_relation_residual(&pair_periods, c))
        .transpose()?;
    let null = null_relation_residual(&pair_periods)?;
    let cfg = ExclusionConfig {
        epsilon: opts.epsilon,
        ..ExclusionConfig::default()
    };
    let verdict = hyperelliptic_exclusion(&pair_periods, &cfg)?;
    let report = CheckReport {
        config: opts.run_config(),
        source,
        genus,
        excluded: verdict.excluded,
        flatness: verdict.flatness,
        witness: verdict.witness,
        null_relation_residual: null.into(),
        custom_relation_residual: custom.map(Into::into),
        bound_constant: verdict.bound_constant,
        error_bound,
        transform,
    };
    write_output(output, &to_json(&report)?)?;
    Ok(if verdict.excluded { EXIT_EXCLUDED } else { 0 })
}

fn cmd_sample(opts: &GlobalOpts, g: usize, seed: u64, output: Option<&Path>) -> Result<u8, CliError> {
    let m: Vec<Vec<Complex>> = equal_modulus_abelian_variety(g, seed)?;
    let (sym, eig) = riemann_residuals(&m);
    let moduli: Vec<f64> = m.iter().flatten().map(|z| z.norm()).collect();
    let spread = moduli.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - moduli.iter().copied().fold(f64::INFINITY, f64::min);
    let config = serde_json::to_string(&opts.run_config()).map_err(|e| CliError::Internal(e.to_string()))?;
    let comments = [
        format!("equal-modulus matrix, genus {g}, seed {seed}"),
        format!("symmetry_residual {}", format_real(sym)),
        format!("min_imag_eigenvalue {}", format_real(eig)),
        format!("modulus_spread {}", format_real(spread)),
        format!("config {config}"),
    ];
    write_output(output, &format_matrix_text(&m, &comments))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Periods {
            input,
            output,
            dump_homology,
        } => cmd_periods(opts, input, output.as_deref(), *dump_homology),
        Command::Analyze { input, csv, stats } => cmd_analyze(opts, input, csv.as_deref(), stats.as_deref()),
        Command::Check {
            input,
            coeffs,
            synthetic_flat,
            output,
        } => cmd_check(opts, input.as_deref(), coeffs.as_deref(), *synthetic_flat, output.as_deref()),
        Command::Sample { genus, seed, output } => cmd_sample(opts, *genus, *seed, output.as_deref()),
    }
}

fn report_error(e: &CliError) {
    let report = ErrorReport {
        code: e.code(),
        message: e.message(),
    };
    let text = serde_json::to_string(&report).unwrap_or_else(|_| format!("{{\"code\":\"{}\"}}", report.code));
    let _ = writeln!(io::stderr(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report_error(&CliError::Usage(e.render().to_string().trim_end().to_string()));
            return ExitCode::from(1);
        }
    };
    // Panics are reported as errors rather than reaching the user as a trace.
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(|| run(cli)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(CliError::Internal(msg))
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}
