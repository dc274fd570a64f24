use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Rate conditions, outer bounds, fading verdicts and block-Markov
/// simulations for correlated sources over multiple-access relay channels.
///
/// Exit status: 0 when every check passes, 2 when a condition fails or a
/// converse is violated, 1 on usage or input errors.
#[derive(Debug, Parser)]
#[command(name = "marc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an achievability theorem on a model, channel and input.
    Region {
        #[arg(long, value_enum)]
        theorem: RegionTheorem,
        #[command(flatten)]
        common: Common,
    },
    /// Search the outer bounds.
    Outer {
        #[arg(long, value_enum)]
        theorem: OuterTheorem,
        #[command(flatten)]
        common: Common,
    },
    /// Fading-channel relay conditions, thresholds or separation verdict.
    Fading {
        #[arg(long, value_enum)]
        check: FadingCheck,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo simulation of a block-Markov scheme.
    Simulate {
        #[arg(long, value_enum)]
        scheme: SimScheme,
        /// Rate offsets (bits) for a separation margin sweep, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sweep: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Uncoded transmission over the semi-orthogonal example channel.
    SomarcDemo {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Source model JSON: a joint pmf over S1, S2, W, W3.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Channel JSON: a kernel p(y, y3 | x1, x2, x3).
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Input distribution JSON for the chosen theorem or scheme.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Command-specific configuration JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Channel uses per source sample.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Typicality parameter for the simulators.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for JSON and CSV reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write CSV exports.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionTheorem {
    #[value(name = "1")]
    Separation,
    #[value(name = "6")]
    CpmA,
    #[value(name = "7")]
    CpmB,
    #[value(name = "crbc")]
    Crbc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OuterTheorem {
    #[value(name = "2")]
    Destination,
    #[value(name = "3")]
    Relay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FadingCheck {
    Df,
    Region,
    Separation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimScheme {
    Sep,
    CpmA,
    CpmB,
}
