use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gztoda_cli::{init_pool, run_eval, run_verify, suites, CliError, Config, Overrides};
use gztoda_core::verify::Mode;

#[derive(Parser)]
#[command(name = "gztoda", version, about = "Gelfand-Zetlin, Yangian, quantum torus and Toda checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the Toda eigenfunction on a grid as CSV.
    Eval(CommonArgs),
    /// Print the suites and the equations they check.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Randomized,
    Both,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "GZTODA_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, comma list or "all"; repeatable.
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

fn load(path: &Option<PathBuf>, o: &Overrides) -> Result<Config, CliError> {
    let base = match path {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let cfg = base.apply(o);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::List => {
            print!("{}", suites::listing());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(a) => {
            let o = Overrides {
                suites: a.suite,
                n_max: a.n_max,
                mode: a.mode.map(|m| match m {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Randomized => Mode::Randomized,
                    ModeArg::Both => Mode::Both,
                }),
                seed: a.seed,
                jobs: a.common.jobs,
            };
            let cfg = load(&a.common.config, &o)?;
            init_pool(cfg.jobs);
            let report = run_verify(&cfg)?;
            let out = a.common.out.unwrap_or_else(|| PathBuf::from("gztoda-report.json"));
            std::fs::write(&out, report.to_json())?;
            print!("{}", report.human_summary());
            println!("report: {}", out.display());
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Eval(a) => {
            let cfg = load(&a.config, &Overrides { jobs: a.jobs, ..Default::default() })?;
            init_pool(cfg.jobs);
            let table = run_eval(&cfg)?;
            let out = a.out.unwrap_or_else(|| PathBuf::from("psi.csv"));
            std::fs::write(&out, table.to_csv())?;
            println!("wrote {} (max error estimate {:.3e})", out.display(), table.max_error);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("gztoda: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("gztoda: internal error (panic)");
            ExitCode::from(3)
        }
    }
}
