//! Command-line front end for the regime-change solvers: argument and config
//! resolution, the subcommands, and CSV/JSON/table output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::{OsStr, OsString};
use std::fs::File;
use std::io::{BufWriter, Write};

use args::{Cli, Command, OutputArgs};
use clap::Parser;
use config::{FileConfig, Resolver};
pub use error::{exit, CliError};
use output::OutputEnvelope;

/// Result of one invocation before it is written out.
pub struct Invocation {
    pub envelope: OutputEnvelope,
    pub output: OutputArgs,
    pub exit_code: i32,
}

pub fn execute(cli: Cli, config_env: Option<&OsStr>) -> error::Result<Invocation> {
    let file = FileConfig::discover(cli.config.as_deref(), config_env)?;
    let r = Resolver { file: &file };
    let done = |envelope, output: &OutputArgs| Invocation {
        envelope,
        output: output.clone(),
        exit_code: exit::SUCCESS,
    };
    match cli.command {
        Command::Benchmark(a) => {
            let params = commands::resolve_model(&a.model, &r)?;
            let alpha = r.real("alpha", a.alpha, 0.0)?;
            Ok(done(commands::benchmark(alpha, &params)?, &a.output))
        }
        Command::Equilibrium(a) => {
            let params = commands::resolve_model(&a.model, &r)?;
            Ok(done(commands::equilibrium(&params)?, &a.output))
        }
        Command::BestResponse(a) => {
            let params = commands::resolve_model(&a.model, &r)?;
            let theta = r.real("theta", a.theta, commands::DEFAULT_THETA)?;
            let x_star = r.real("x-star", a.x_star, 0.0)?;
            let alpha_star = r.real_opt("alpha-star", a.alpha_star)?;
            let env = commands::best_response(a.side, theta, x_star, alpha_star, &params)?;
            Ok(done(env, &a.output))
        }
        Command::Simulate(a) => {
            let params = commands::resolve_model(&a.model, &r)?;
            let theta = r.real("theta", a.theta, commands::DEFAULT_THETA)?;
            let settings = commands::resolve_sim(&a.sim, theta, params, &r)?;
            Ok(done(commands::simulate(&settings)?, &a.output))
        }
        Command::Sweep(a) => {
            let params = commands::resolve_model(&a.model, &r)?;
            let spec = sweep::SweepSpec::new(a.parameter, a.lo, a.hi, a.steps, params)?;
            let alpha = r.real("alpha", a.alpha, 0.0)?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(CliError::Usage(format!("--alpha must lie in [0, 1], got {alpha}")));
            }
            let (sim, threads) = if a.target == args::SweepTarget::CollapseCurve {
                let theta = r.real("theta", None, commands::DEFAULT_THETA)?;
                let s = commands::resolve_sim(&a.sim, theta, params, &r)?;
                (Some(s.template), s.threads)
            } else {
                (None, None)
            };
            let ctx = sweep::SweepContext { alpha, sim, threads };
            let outcome = sweep::sweep(&spec, a.target, &ctx)?;
            Ok(Invocation {
                envelope: outcome.envelope,
                output: a.output,
                exit_code: if outcome.failed_rows > 0 {
                    exit::PARTIAL_SWEEP
                } else {
                    exit::SUCCESS
                },
            })
        }
    }
}

/// Writes the envelope to `--out` or to `stdout`.
pub fn emit(inv: &Invocation, stdout: &mut dyn Write) -> error::Result<()> {
    match &inv.output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            inv.envelope.write(inv.output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            inv.envelope.write(inv.output.format, stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and writes the
/// result. Returns the process exit code.
pub fn run<I, T>(
    args: I,
    config_env: Option<&OsStr>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                exit::USAGE
            } else {
                let _ = write!(stdout, "{text}");
                exit::SUCCESS
            };
        }
    };
    match execute(cli, config_env).and_then(|inv| emit(&inv, stdout).map(|_| inv.exit_code)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
