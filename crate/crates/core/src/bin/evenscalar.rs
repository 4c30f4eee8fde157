use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evenscalar::harness::{
    cmd_param_scan, cmd_run_forced, cmd_run_unforced, cmd_verify, CliOptions, RunConfig, ScanSpec,
};

#[derive(Parser)]
#[command(name = "evenscalar", version, about = "Convex-integration runs for even active scalars on T^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    force_infeasible: bool,
    #[arg(long)]
    emit_fields: bool,
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the unforced iteration.
    RunUnforced(Common),
    /// Run the forced sum-difference iteration.
    RunForced(Common),
    /// Scan the (b, beta) plane at the config's (alpha, gamma).
    ParamScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        b_range: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        beta_range: Option<Vec<f64>>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Weak residuals of a stored field.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        field: PathBuf,
        /// Forcing field for the forced equation.
        #[arg(long)]
        forcing: Option<PathBuf>,
    },
}

fn options(c: &Common) -> CliOptions {
    CliOptions {
        out: c.out.clone(),
        force_infeasible: c.force_infeasible,
        emit_fields: c.emit_fields,
        quiet: c.quiet,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::RunUnforced(c) => RunConfig::load(&c.config).and_then(|cfg| cmd_run_unforced(&cfg, &options(c))),
        Command::RunForced(c) => RunConfig::load(&c.config).and_then(|cfg| cmd_run_forced(&cfg, &options(c))),
        Command::ParamScan { common, b_range, beta_range, steps } => {
            let mut spec = ScanSpec::default();
            if let Some(r) = b_range {
                spec.b_range = (r[0], r[1]);
            }
            if let Some(r) = beta_range {
                spec.beta_range = (r[0], r[1]);
            }
            if let Some(s) = steps {
                spec.steps = *s;
            }
            RunConfig::load(&common.config).and_then(|cfg| cmd_param_scan(&cfg, spec, &options(common)))
        }
        Command::Verify { common, field, forcing } => RunConfig::load(&common.config)
            .and_then(|cfg| cmd_verify(field, forcing.as_deref(), &cfg, &options(common))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
