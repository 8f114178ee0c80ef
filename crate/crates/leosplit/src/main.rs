//! Thin binary over the command layer in [`leosplit::cli`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leosplit::cli::{
    cmd_compare, cmd_geometry, cmd_optimize, cmd_presets, cmd_sweep, CommonOpts, OutputFormat,
};
use leosplit::scenario::FsplDistanceMode;

#[derive(Parser)]
#[command(
    name = "leosplit",
    version,
    about = "Energy-optimal split learning over a LEO orbital ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario config file (TOML); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Emit machine-readable CSV.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    /// Distance the free-space path loss is evaluated at.
    #[arg(long, value_name = "MODE")]
    fspl_distance: Option<String>,
    /// Multiplier on the derived pass duration.
    #[arg(long, value_name = "X")]
    pass_scale: Option<f64>,
    /// Accept config keys outside the schema.
    #[arg(long)]
    allow_unknown_keys: bool,
}

impl CommonArgs {
    fn to_opts(&self) -> Result<CommonOpts, leosplit::Error> {
        let fspl_distance = match &self.fspl_distance {
            Some(s) => Some(s.parse::<FsplDistanceMode>()?),
            None => None,
        };
        Ok(CommonOpts {
            config: self.config.clone(),
            fspl_distance,
            pass_scale: self.pass_scale,
            allow_unknown_keys: self.allow_unknown_keys,
        })
    }

    fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Pretty
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Derived pass geometry: period, slant ranges, pass duration, ISL.
    Geometry {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Minimize the split-learning pass energy for one workload.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        /// Workload preset to optimize.
        #[arg(long)]
        preset: Option<String>,
        /// Also run the brute-force grid oracle and print the gap.
        #[arg(long)]
        oracle: bool,
        /// Grid points per axis for --oracle.
        #[arg(long, default_value_t = 50)]
        oracle_points: usize,
    },
    /// Split learning vs direct raw-data download, with savings.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Optimize each split point of a catalog; flags the argmin.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated preset names (defaults to the config's workload).
        #[arg(long, value_delimiter = ',')]
        preset: Vec<String>,
    },
    /// List the built-in workload presets.
    Presets {
        /// Emit machine-readable JSON.
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<String, leosplit::Error> {
    match cli.command {
        Command::Geometry { common } => cmd_geometry(&common.to_opts()?, common.format()),
        Command::Optimize {
            common,
            preset,
            oracle,
            oracle_points,
        } => cmd_optimize(
            &common.to_opts()?,
            preset.as_deref(),
            oracle.then_some(oracle_points),
            common.format(),
        ),
        Command::Compare { common, preset } => {
            cmd_compare(&common.to_opts()?, preset.as_deref(), common.format())
        }
        Command::Sweep { common, preset } => {
            cmd_sweep(&common.to_opts()?, &preset, common.format())
        }
        Command::Presets { json } => cmd_presets(if json {
            OutputFormat::Json
        } else {
            OutputFormat::Pretty
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
