use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use rwa_cli::args::{Cli, Command, SampleCommand};
use rwa_cli::{
    cmd_lemma_check, cmd_moment, cmd_plot_data, cmd_sample, cmd_verify, configure_threads,
    CliResult, SampleJob, SampleSource, Status, VerifyConfig,
};
use rwa_core::RwaSpec;

fn run(cli: Cli) -> CliResult<Status> {
    configure_threads()?;
    let stdout = io::stdout();
    match cli.command {
        Command::Moment {
            n,
            k_max,
            a,
            format,
        } => {
            let mut out = stdout.lock();
            let status = cmd_moment(n, k_max, a, format, &mut out)?;
            out.flush()?;
            Ok(status)
        }
        Command::LemmaCheck {
            params,
            r_max,
            format,
        } => {
            let mut out = stdout.lock();
            let status = cmd_lemma_check(&params, r_max, format, &mut out)?;
            out.flush()?;
            Ok(status)
        }
        Command::Sample { source } => {
            let (source, opts, shards, envelope) = match source {
                SampleCommand::Arcsine { a, opts } => (SampleSource::Arcsine { a }, opts, 1, None),
                SampleCommand::Psc { lambda, a, opts } => {
                    (SampleSource::PowerSemicircle { lambda, a }, opts, 1, None)
                }
                SampleCommand::Rwa {
                    n,
                    a,
                    shards,
                    envelope,
                    opts,
                } => (SampleSource::Rwa { n, a }, opts, shards, envelope),
                SampleCommand::Spacings { n, method, opts } => (
                    SampleSource::Spacings {
                        n,
                        method: method.into(),
                    },
                    opts,
                    1,
                    None,
                ),
            };
            if shards == 0 {
                return Err(rwa_cli::CliError::Usage(
                    "--shards must be at least 1".into(),
                ));
            }
            cmd_sample(&SampleJob {
                source,
                count: opts.count,
                seed: opts.seed,
                shards,
                out: opts.out,
                envelope,
            })
        }
        Command::Verify {
            n,
            a,
            count,
            seed,
            shards,
            k_max,
            alpha,
            out,
            lambda_override,
        } => {
            let cfg = VerifyConfig {
                spec: RwaSpec { n, a },
                sample_count: count,
                seed,
                shards,
                max_moment_k: k_max,
                alpha,
                lambda_override,
            };
            cmd_verify(&cfg, out.as_deref()).map(|(status, _)| status)
        }
        Command::PlotData {
            n,
            a,
            bins,
            count,
            seed,
            shards,
            out,
        } => {
            if shards == 0 {
                return Err(rwa_cli::CliError::Usage(
                    "--shards must be at least 1".into(),
                ));
            }
            cmd_plot_data(&RwaSpec { n, a }, bins, count, seed, shards, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
