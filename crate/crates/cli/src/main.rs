mod dataset;
mod eval;
mod fit;
mod props;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bir_core::inference::FitOptions;
use bir_core::{BirParams, Execution, FamilyParams, FamilyTag};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dataset::Dataset;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::NonConvergence(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Fit, evaluate, summarize and sample the beta inverse Rayleigh
/// distribution and its comparator families.
#[derive(Debug, Parser)]
#[command(name = "bir", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one or all families to data and report estimates and criteria.
    Fit {
        /// Data file, or builtin:guinea.
        #[arg(long)]
        data: String,
        /// bir, eir, ir, r (rayleigh), gr or all.
        #[arg(long, default_value = "all")]
        model: String,
        /// Seed for the multi-start jitter.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate pdf, cdf, quantile, hazard or survival at points.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: eval::Function,
        #[arg(long, default_value = "bir")]
        model: FamilyTag,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated points (probabilities for quantile).
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Linear grid as min,max,count.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Moments, mode, shape measures, mean deviations and entropies of a BIR law.
    Props {
        #[command(flatten)]
        params: ParamArgs,
        /// Moment orders to report besides the mean.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-2,-1,0.5,2"
        )]
        moments: Vec<f64>,
        /// Rényi entropy orders.
        #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
        renyi: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a seeded sample, one value per line.
    Sample {
        #[arg(long, default_value = "bir")]
        model: FamilyTag,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run single-threaded.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// BIR shape a.
    #[arg(short = 'a', allow_negative_numbers = true)]
    a: Option<f64>,
    /// BIR shape b.
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: Option<f64>,
    /// Scale θ of BIR, IR and EIR.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Shape α of EIR and GR.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Scale λ of GR.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Scale σ of Rayleigh.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
}

impl ParamArgs {
    fn family(&self, tag: FamilyTag) -> Result<FamilyParams, CliError> {
        let all = [
            ("a", "-a", self.a),
            ("b", "-b", self.b),
            ("theta", "--theta", self.theta),
            ("alpha", "--alpha", self.alpha),
            ("lambda", "--lambda", self.lambda),
            ("sigma", "--sigma", self.sigma),
        ];
        let wanted = tag.param_names();
        let mut values = Vec::with_capacity(wanted.len());
        for (name, flag, v) in all {
            match (wanted.contains(&name), v) {
                (true, Some(v)) => values.push((name, v)),
                (true, None) => {
                    return Err(CliError::Input(format!("{flag} is required for {tag}")))
                }
                (false, Some(_)) => {
                    return Err(CliError::Input(format!("{flag} does not apply to {tag}")))
                }
                (false, None) => {}
            }
        }
        let ordered: Vec<f64> =
            wanted.iter().map(|w| values.iter().find(|(n, _)| n == w).unwrap().1).collect();
        FamilyParams::from_values(tag, &ordered).map_err(input)
    }

    fn bir(&self) -> Result<BirParams, CliError> {
        match self.family(FamilyTag::Bir)? {
            FamilyParams::Bir(p) => Ok(p),
            _ => unreachable!("asked for BIR"),
        }
    }
}

/// Table label: BIR, EIR, IR, R, GR.
pub fn label(tag: FamilyTag) -> &'static str {
    match tag {
        FamilyTag::Bir => "BIR",
        FamilyTag::Eir => "EIR",
        FamilyTag::Ir => "IR",
        FamilyTag::Rayleigh => "R",
        FamilyTag::Gr => "GR",
    }
}

/// Six significant digits, switching to exponent form far from unity.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..7).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

/// Ten decimals near unity, ten mantissa digits otherwise.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-3..1e7).contains(&v.abs()) {
        format!("{v:.10}")
    } else {
        format!("{v:.10e}")
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(input)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit { data, model, seed, restarts, common } => {
            let model = match model.to_ascii_lowercase().as_str() {
                "all" => None,
                m => Some(m.parse::<FamilyTag>().map_err(input)?),
            };
            let data = Dataset::load(&data)?;
            let opts = FitOptions {
                restarts: restarts as usize,
                seed,
                execution: common.execution(),
                ..FitOptions::default()
            };
            let (text, status) = fit::run(&data, model, &opts, common.format)?;
            emit(&text, common.out.as_ref())?;
            status.map_or(Ok(()), Err)
        }
        Command::Eval { function, model, params, points, grid, common } => {
            let params = params.family(model)?;
            let xs = eval::points(points.as_deref(), grid.as_deref())?;
            let text = eval::run(&params, function, &xs, common.format)?;
            emit(&text, common.out.as_ref())
        }
        Command::Props { params, moments, renyi, common } => {
            let report = props::report(&params.bir()?, &moments, &renyi);
            emit(&props::render(&report, common.format), common.out.as_ref())
        }
        Command::Sample { model, params, n, seed, out, sequential } => {
            let params = params.family(model)?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            eprintln!("seed: {seed}");
            let text = eval::sample(&params, n as usize, seed, exec)?;
            emit(&text, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
