//! Command line front end.
//!
//! ```text
//! ciwidth normal   --sigma S --width D [--alpha A] [--power P] [--json]
//! ciwidth poisson  --rate R  --width D [--alpha A] [--power P] [--json]
//! ciwidth binomial --p0 P0   --width D [--alpha A] [--power P] [--json]
//! ciwidth verify   --family F (--sigma|--rate|--p0) --n N --width D [--nsim K] [--seed X] [--json]
//! ciwidth table    1|2|3 [--depth R] [--nsim K] [--seed X] [--out-dir DIR]
//! ```
//!
//! Exit status: 0 on success, 2 for invalid input, 3 when a search does not
//! converge, 1 for i/o failures.

use std::io::Write;
use std::path::PathBuf;

use ciwidth_core::sizing::size;
use ciwidth_core::{DesignSpec, Family, SizingResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::{simulate, SimConfig, SimReport};
use crate::report::{table, write_table_files};

#[derive(Debug, Parser)]
#[command(name = "ciwidth", version, about = "Sample sizes that keep a confidence interval narrow with a given probability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size a study of a Normal mean (Student-t interval).
    Normal {
        /// Assumed standard deviation.
        #[arg(long)]
        sigma: f64,
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Size a study of a Poisson rate (Garwood interval).
    Poisson {
        /// Assumed event rate per unit of exposure.
        #[arg(long)]
        rate: f64,
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Size a study of a Binomial proportion (Wilson interval).
    Binomial {
        /// Assumed proportion.
        #[arg(long)]
        p0: f64,
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Simulate coverage and P(width < d0) at a given sample size.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        p0: Option<f64>,
        /// Sample size (or exposure) to test.
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        design: DesignArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Regenerate a reference table as table{K}.csv and table{K}.md.
    Table {
        /// 1 = Normal, 2 = Poisson, 3 = Binomial.
        #[arg(value_parser = clap::value_parser!(u32).range(1..=3))]
        number: u32,
        /// Number of parameter levels (widths for table 1).
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Normal,
    Poisson,
    Binomial,
}

#[derive(Debug, Args)]
struct DesignArgs {
    /// Full width d0 the interval must not exceed.
    #[arg(long)]
    width: f64,
    /// One minus the confidence level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Required probability that the interval is narrower than the width.
    #[arg(long, default_value_t = 0.8)]
    power: f64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 10_000)]
    nsim: u64,
    #[arg(long, env = "CIWIDTH_SEED", default_value_t = 0)]
    seed: u64,
}

/// JSON document printed by the sizing subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizingOutput {
    pub design: DesignSpec,
    #[serde(flatten)]
    pub result: SizingResult,
}

/// JSON document printed by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub design: DesignSpec,
    pub n: u64,
    #[serde(flatten)]
    pub report: SimReport,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    0
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn design(family: Family, args: &DesignArgs) -> Result<DesignSpec> {
    Ok(DesignSpec::new(family, args.alpha, args.power, args.width)?)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Normal { sigma, design: args } => print_sizing(design(Family::Normal { sigma }, &args)?, args.json, out),
        Command::Poisson { rate, design: args } => print_sizing(design(Family::Poisson { rate }, &args)?, args.json, out),
        Command::Binomial { p0, design: args } => print_sizing(design(Family::Binomial { p0 }, &args)?, args.json, out),
        Command::Verify { family, sigma, rate, p0, n, design: args, sim } => {
            let missing = |flag: &str| Error::Config(format!("--{flag} is required for this family"));
            let family = match family {
                FamilyArg::Normal => Family::Normal { sigma: sigma.ok_or_else(|| missing("sigma"))? },
                FamilyArg::Poisson => Family::Poisson { rate: rate.ok_or_else(|| missing("rate"))? },
                FamilyArg::Binomial => Family::Binomial { p0: p0.ok_or_else(|| missing("p0"))? },
            };
            let spec = design(family, &args)?;
            let report = simulate(&SimConfig { nsim: sim.nsim, seed: sim.seed, spec, n })?;
            if args.json {
                let doc = VerifyOutput { design: spec, n, report };
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                writeln!(
                    out,
                    "coverage={:.4} power={:.4} nsim={} seed={}",
                    report.coverage, report.power, report.nsim, report.seed
                )?;
            }
            Ok(())
        }
        Command::Table { number, depth, sim, out_dir } => {
            let rows = table(number, depth, sim.nsim, sim.seed)?;
            for path in write_table_files(number, &rows, &out_dir)? {
                writeln!(out, "wrote {}", path.display())?;
            }
            Ok(())
        }
    }
}

fn print_sizing(spec: DesignSpec, json: bool, out: &mut dyn Write) -> Result<()> {
    let result = size(&spec)?;
    if json {
        let doc = SizingOutput { design: spec, result };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(());
    }
    write!(out, "expected={} exact={}", result.n_expected, result.n_exact)?;
    if let Some(approx) = result.n_approx {
        write!(out, " approx={approx}")?;
    }
    writeln!(out)?;
    writeln!(out, "width_at_expected={:.6} width_at_exact={:.6}", result.width_at_expected, result.width_at_exact)?;
    if result.is_anomalous() {
        writeln!(out, "note: exact size is below the expected size")?;
    }
    Ok(())
}
