use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use listgrover::circuit::LoweringMode;
use listgrover::cli::{
    self, CircuitPart, CliError, ExportFormat, HistogramOptions, IterationsFlag, SolveMode,
    SolveOptions,
};
use listgrover::problem::DEFAULT_ENUMERATION_CAP;
use listgrover::sim::DEFAULT_WIDTH_CAP;

#[derive(Parser)]
#[command(name = "listgrover", about = "Grover search for graph list colorings", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Unknown,
}

#[derive(Clone, Copy, ValueEnum)]
enum LoweringArg {
    Native,
    Elementary,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceArg {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartArg {
    Init,
    Oracle,
    Diffusion,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Netlist,
    Qasm,
}

#[derive(Args)]
struct SolveFlags {
    /// Problem JSON file
    problem: PathBuf,
    #[arg(long, default_value_t = cli::DEFAULT_SHOTS)]
    shots: u64,
    #[arg(long, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    /// "auto" or an explicit iteration count
    #[arg(long, default_value = "auto")]
    iterations: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = LoweringArg::Native)]
    lowering: LoweringArg,
    #[arg(long, value_enum, default_value_t = ReduceArg::On)]
    reduce: ReduceArg,
}

impl SolveFlags {
    fn options(&self) -> Result<SolveOptions, CliError> {
        let iterations = match self.iterations.as_str() {
            "auto" => IterationsFlag::Auto,
            s => IterationsFlag::Fixed(s.parse().map_err(|_| {
                CliError::BadArgument(format!("--iterations must be \"auto\" or a count, got {s:?}"))
            })?),
        };
        Ok(SolveOptions {
            shots: self.shots,
            seed: self.seed,
            iterations,
            mode: match self.mode {
                ModeArg::Exact => SolveMode::Exact,
                ModeArg::Unknown => SolveMode::Unknown,
            },
            lowering: match self.lowering {
                LoweringArg::Native => LoweringMode::Native,
                LoweringArg::Elementary => LoweringMode::Elementary,
            },
            reduce: matches!(self.reduce, ReduceArg::On),
            width_cap: DEFAULT_WIDTH_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            retry_cap: cli::DEFAULT_RETRY_CAP,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a list-coloring instance and verify the result classically
    Solve {
        #[command(flatten)]
        flags: SolveFlags,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Reduce a single edge constraint to a minimum-cost parity of patterns
    OracleReduce {
        /// Comma-separated color list of the first endpoint, e.g. "1,2,3"
        list_u: String,
        /// Comma-separated color list of the second endpoint
        list_v: String,
    },
    /// Print a synthesized circuit component
    Synth {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t = PartArg::Full)]
        part: PartArg,
        #[arg(long, value_enum, default_value_t = LoweringArg::Native)]
        lowering: LoweringArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Netlist)]
        format: FormatArg,
    },
    /// Export the measurement distribution as semicolon-separated CSV
    Histogram {
        #[command(flatten)]
        flags: SolveFlags,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Write exact probabilities instead of sampled frequencies
        #[arg(long)]
        exact: bool,
    },
    /// Check a coloring file against a problem
    Verify {
        problem: PathBuf,
        /// JSON object mapping vertex name to color
        coloring: PathBuf,
    },
}

fn run(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Solve { flags, json } => {
            let p = cli::load_problem(&flags.problem)?;
            let report = cli::cmd_solve(&p, &flags.options()?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{report}");
            }
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::OracleReduce { list_u, list_v } => {
            print!("{}", cli::cmd_oracle_reduce(&list_u, &list_v)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            problem,
            part,
            lowering,
            format,
        } => {
            let p = cli::load_problem(&problem)?;
            let text = cli::cmd_synth(
                &p,
                match part {
                    PartArg::Init => CircuitPart::Init,
                    PartArg::Oracle => CircuitPart::Oracle,
                    PartArg::Diffusion => CircuitPart::Diffusion,
                    PartArg::Full => CircuitPart::Full,
                },
                match lowering {
                    LoweringArg::Native => LoweringMode::Native,
                    LoweringArg::Elementary => LoweringMode::Elementary,
                },
                match format {
                    FormatArg::Netlist => ExportFormat::Netlist,
                    FormatArg::Qasm => ExportFormat::Qasm,
                },
            )?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Histogram { flags, out, exact } => {
            let p = cli::load_problem(&flags.problem)?;
            let opts = HistogramOptions {
                solve: flags.options()?,
                exact,
            };
            let (csv, report) = cli::cmd_histogram(&p, &opts)?;
            std::fs::write(&out, csv).map_err(|source| CliError::Io {
                path: out.display().to_string(),
                source,
            })?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::Verify { problem, coloring } => {
            let verdict = cli::cmd_verify(&problem, &coloring)?;
            println!("{verdict}");
            Ok(match verdict {
                cli::Verdict::Valid => ExitCode::SUCCESS,
                cli::Verdict::Invalid(_) => ExitCode::FAILURE,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
