//! `eqmf` — batch front end for exact equivariant matrix factorization
//! computations. Configs and reports are JSON with embedded schema ids;
//! every claimed isomorphism or splitting in a report carries certificates
//! that `eqmf verify` re-checks independently.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqmf_cli::runner::{run_config, verify_paths, RunOptions};
use eqmf_cli::suite::run_suite;
use eqmf_cli::tasks::Overrides;

#[derive(Parser)]
#[command(
    name = "eqmf",
    version,
    about = "Certified computations with equivariant matrix factorizations",
    after_help = "Exit codes: 0 success, 1 computation or certificate failure, \
                  2 parse error, 3 validation error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonOpts {
    /// Problem configuration (JSON).
    config: PathBuf,
    /// Run only this task from the config's task table.
    task: Option<String>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the degree bound of kstab tasks.
    #[arg(long)]
    degree_bound: Option<i64>,
    /// Override the step bound of kstab tasks.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Directory for report files.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Run independent tasks on separate threads (reports are still written
    /// in task order and byte-identical to a sequential run).
    #[arg(long)]
    parallel: bool,
}

impl CommonOpts {
    fn into_run(self, op_filter: Option<&'static str>) -> (PathBuf, RunOptions) {
        (
            self.config,
            RunOptions {
                op_filter,
                task_name: self.task,
                overrides: Overrides {
                    seed: self.seed,
                    max_steps: self.max_steps,
                    degree_bound: self.degree_bound,
                },
                out_dir: self.out,
                parallel: self.parallel,
            },
        )
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every task in a config (or one named task).
    Run(CommonOpts),
    /// Report violated defining identities of the config's objects.
    Validate(CommonOpts),
    /// Krull–Schmidt decomposition with certificates.
    Decompose(CommonOpts),
    /// Split a strict or homotopy idempotent endomorphism.
    SplitIdempotent(CommonOpts),
    /// Dimensions and representatives of a stable hom space.
    StableHom(CommonOpts),
    /// Stabilized residue-field factorization of the config's ring.
    Kstab(CommonOpts),
    /// Induce an object along the configured group action.
    Induce(CommonOpts),
    /// Strictify a homotopy-coherent equivariant structure.
    Strictify(CommonOpts),
    /// Transport an object along a ring homomorphism.
    BaseChange(CommonOpts),
    /// Re-check the certificates of report files.
    Verify {
        /// Report files to check.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
    /// Run the built-in corpus and write a deterministic report tree.
    Suite {
        /// Seed for the randomized parts of the corpus.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for the report tree.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Run corpus sections on separate threads.
        #[arg(long)]
        parallel: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Run(opts) => {
            let (config, run) = opts.into_run(None);
            run_config(&config, &run)
        }
        Cmd::Validate(opts) => {
            let (config, run) = opts.into_run(Some("validate"));
            run_config(&config, &run)
        }
        Cmd::Decompose(opts) => {
            let (config, run) = opts.into_run(Some("decompose"));
            run_config(&config, &run)
        }
        Cmd::SplitIdempotent(opts) => {
            let (config, run) = opts.into_run(Some("split-idempotent"));
            run_config(&config, &run)
        }
        Cmd::StableHom(opts) => {
            let (config, run) = opts.into_run(Some("stable-hom"));
            run_config(&config, &run)
        }
        Cmd::Kstab(opts) => {
            let (config, run) = opts.into_run(Some("kstab"));
            run_config(&config, &run)
        }
        Cmd::Induce(opts) => {
            let (config, run) = opts.into_run(Some("induce"));
            run_config(&config, &run)
        }
        Cmd::Strictify(opts) => {
            let (config, run) = opts.into_run(Some("strictify"));
            run_config(&config, &run)
        }
        Cmd::BaseChange(opts) => {
            let (config, run) = opts.into_run(Some("base-change"));
            run_config(&config, &run)
        }
        Cmd::Verify { reports } => verify_paths(&reports),
        Cmd::Suite { seed, out, parallel } => run_suite(seed, &out, parallel),
    };
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
