mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multiphoton::exact::parse_rational;
use multiphoton::rates::Filter;
use multiphoton::{Error, ExactRates, RateSet};
use serde::Serialize;

use output::Format;

/// Photon-counting and timing statistics of filtered N-photon bundles.
#[derive(Debug, Parser)]
#[command(name = "multiphoton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

/// Emitter and detector parameters. Rates accept `p/q`, integers and
/// decimals; `--filter none` removes the filter.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RateArgs {
    /// Radiative decay rate γ_a.
    #[arg(long, default_value = "1")]
    pub gamma: String,
    /// Filter bandwidth Γ, or `none`.
    #[arg(long, default_value = "none")]
    pub filter: String,
    /// Detector efficiency ξ.
    #[arg(long, default_value = "1")]
    pub xi: String,
}

impl RateArgs {
    pub fn rate_set(&self) -> multiphoton::Result<RateSet> {
        let gamma = parse_float(&self.gamma)?;
        let filter = match self.filter.trim() {
            "none" | "inf" | "unfiltered" => Filter::Unfiltered,
            s => Filter::Bandwidth(parse_float(s)?),
        };
        RateSet::new(gamma, filter, parse_float(&self.xi)?, 0.0)
    }

    pub fn exact(&self) -> multiphoton::Result<ExactRates> {
        let filter = match self.filter.trim() {
            "none" | "inf" | "unfiltered" => None,
            s => Some(parse_rational(s)?),
        };
        ExactRates::new(parse_rational(&self.gamma)?, filter, parse_rational(&self.xi)?)
    }
}

pub fn parse_float(s: &str) -> multiphoton::Result<f64> {
    match s.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => Ok(multiphoton::exact::to_f64(&parse_rational(t)?)),
    }
}

/// Sample grid `from..=to`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Logarithmic spacing.
    #[arg(long)]
    pub log: bool,
}

impl GridArgs {
    pub fn values(&self) -> multiphoton::Result<Vec<f64>> {
        if !(self.from < self.to) || self.points < 2 {
            return Err(Error::InvalidArgument("grid needs from < to and at least two points".into()));
        }
        if self.log && self.from <= 0.0 {
            return Err(Error::InvalidArgument("a logarithmic grid needs from > 0".into()));
        }
        let m = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let f = i as f64 / m;
                if self.log {
                    (self.from.ln() + f * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + f * (self.to - self.from)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineArg {
    Exact,
    Sum,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Figure {
    #[value(name = "fig1-floor")]
    Fig1Floor,
    #[value(name = "fig2b")]
    Fig2b,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThermalQuantity {
    Spectrum,
    G2,
    Wtd,
    Number,
    Summary,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Single-photon detection efficiency within a window T.
    Efficiency {
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Distribution of detected photons per bundle.
    Counting {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(short = 'N', long = "photons")]
        n: u32,
        /// Detection window, `inf` for all times.
        #[arg(long, default_value = "inf")]
        window: String,
        /// Exact rationals (requires `--window inf`).
        #[arg(long)]
        exact: bool,
    },
    /// Joint density of the ordered detection times.
    Pdf {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(short = 'N', long = "photons")]
        n: u32,
        /// Comma-separated detection times.
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// Density of the k-th detection time.
    Marginal {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(short = 'N', long = "photons")]
        n: u32,
        #[arg(short = 'k', long)]
        k: u32,
        /// Condition on at least k detections instead of the full bundle.
        #[arg(long)]
        broken: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Moments, correlations and lengths of the detection times.
    Moments {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(short = 'N', long = "photons", default_value_t = 2)]
        n: u32,
        #[arg(short = 'k', long)]
        k: Option<u32>,
        #[arg(long)]
        mean: bool,
        #[arg(long)]
        second: bool,
        #[arg(long)]
        std: bool,
        /// ⟨t₁ t_N⟩.
        #[arg(long)]
        cross: bool,
        #[arg(long)]
        pearson: bool,
        #[arg(long)]
        reflective: bool,
        /// Mean and spread of t_N − t₁.
        #[arg(long)]
        length: bool,
        /// Shorthand for `--pipeline exact`.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum)]
        pipeline: Option<PipelineArg>,
        #[arg(long, value_enum)]
        figure: Option<Figure>,
        /// Γ grid for `--figure`.
        #[arg(long, default_value_t = 0.01)]
        gamma_from: f64,
        #[arg(long, default_value_t = 100.0)]
        gamma_to: f64,
        #[arg(long, default_value_t = 41)]
        gamma_points: usize,
    },
    /// Waiting-time distributions and multiphoton-peak averages.
    Wtd {
        #[command(flatten)]
        rates: RateArgs,
        /// Unfiltered thermal light at temperature θ instead of two-photon bundles.
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum)]
        figure: Option<Figure>,
        /// Largest N in `--figure fig2b`.
        #[arg(long = "max-N", default_value_t = 5)]
        max_n: u32,
        /// Thermal temperature shown in `--figure fig2b`.
        #[arg(long, default_value_t = 0.25)]
        figure_theta: f64,
    },
    /// Filtered thermal-field observables.
    Thermal {
        #[arg(long, default_value_t = 0.25)]
        theta: f64,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value = "none")]
        filter: String,
        #[arg(long, value_enum, default_value = "summary")]
        quantity: ThermalQuantity,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Monte Carlo bundles or continuous-wave streams.
    Simulate {
        #[command(flatten)]
        rates: RateArgs,
        #[arg(short = 'N', long = "photons", default_value_t = 2)]
        n: u32,
        /// Independent bundles (the default).
        #[arg(long, conflicts_with = "stream")]
        bundle: bool,
        /// Poisson-triggered stream of bundles.
        #[arg(long)]
        stream: bool,
        #[arg(long, default_value_t = 100_000)]
        trajectories: u64,
        #[arg(long, env = "MULTIPHOTON_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        trigger_rate: f64,
        #[arg(long, default_value_t = 1.0e5)]
        duration: f64,
        /// Halve γ_a, the effective rate that mimics the driven bundler.
        #[arg(long)]
        effective_rate: bool,
        /// Background fit window for the peak average of a stream.
        #[arg(long, default_value_t = 5.0)]
        fit_from: f64,
        #[arg(long, default_value_t = 20.0)]
        fit_to: f64,
        /// Also write every record as JSON lines to this file.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Reference tables.
    Table {
        /// Unfiltered mean detection times (H_N − H_(N−k))/γ_a.
        #[arg(long)]
        unfiltered_means: bool,
        /// Integer coefficients of the filtered standard deviation σ_k^(N).
        #[arg(long)]
        std_coefficients: bool,
        #[arg(long = "max-N", default_value_t = 10)]
        max_n: u32,
        #[arg(short = 'N', long = "photons", default_value_t = 2)]
        n: u32,
        #[arg(short = 'k', long, default_value_t = 1)]
        k: u32,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, env = "MULTIPHOTON_SEED", default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli.command, cli.format, cli.output.as_deref()) {
        Ok(code) => code,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
