use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gtg_cli::commands::{self, CommandOutput};
use gtg_core::window::Window;
use gtg_core::Error;

#[derive(Parser)]
#[command(
    name = "gtg",
    version,
    about = "Exact-arithmetic workbench for group-topology-generating sets and UFSS refinements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct WindowArgs {
    /// Coordinate box radius for integer and rational carriers.
    #[arg(long)]
    bound: Option<u64>,
    /// Maximum n probed in divided-set chains.
    #[arg(long)]
    depth: Option<u64>,
    /// Maximum enumerated elements per operation (GTG_BUDGET overrides the
    /// default).
    #[arg(long)]
    budget: Option<u64>,
}

impl WindowArgs {
    fn window(&self) -> Window {
        let mut w = Window::default();
        if let Ok(env_budget) = std::env::var("GTG_BUDGET") {
            if let Ok(b) = env_budget.parse::<u64>() {
                w.budget = b.max(1);
            }
        }
        if let Some(b) = self.bound {
            w.bound = b.max(1);
        }
        if let Some(d) = self.depth {
            w.depth_n = d.max(1);
        }
        if let Some(b) = self.budget {
            w.budget = b.max(1);
        }
        w
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Emit the machine-readable report on stdout.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this path.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a symmetric set: degree, core, subgroup and small-subgroup
    /// probes.
    AnalyzeSet {
        /// Group descriptor (JSON).
        #[arg(long)]
        group: PathBuf,
        /// Set descriptor (JSON).
        #[arg(long)]
        set: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Greedily construct an almost independent sequence and emit its
    /// certificate, or re-verify an existing certificate.
    BuildSequence {
        /// Metric group descriptor (JSON); required unless --verify is given.
        #[arg(long, required_unless_present = "verify")]
        group: Option<PathBuf>,
        /// Length of the construction: the prefix has n-max + 1 elements.
        #[arg(long = "n-max", required_unless_present = "verify")]
        n_max: Option<usize>,
        /// Where to write the certificate.
        #[arg(long, default_value = "sequence-certificate.json")]
        certificate: PathBuf,
        /// Verifier-only mode: re-derive the stored values of this
        /// certificate instead of building.
        #[arg(long)]
        verify: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Realize the level sets generated by a certified sequence and report
    /// degree, refinement and strictness verdicts.
    RealizeTopology {
        /// Sequence certificate (JSON).
        #[arg(long)]
        certificate: PathBuf,
        /// Support depth of the realization (doubles as the window depth).
        #[arg(long)]
        depth: usize,
        /// Radius for the refinement verdict, as "num/den".
        #[arg(long, default_value = "1/2")]
        eps: String,
        /// Maximum enumerated elements per operation.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the bundled verification suite.
    CheckPaper {
        /// Run only checks whose name or anchor contains this string.
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn emit(output: &OutputArgs, command: CommandOutput) -> ExitCode {
    let json = command.report.to_json();
    if let Some(path) = &output.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(commands::EXIT_INPUT_ERROR as u8);
        }
    }
    if output.json {
        print!("{json}");
    } else {
        print!("{}", command.report.to_text());
    }
    ExitCode::from(command.exit_code as u8)
}

fn input_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    let code = match e {
        Error::BudgetExhausted { .. } => commands::EXIT_BUDGET,
        _ => commands::EXIT_INPUT_ERROR,
    };
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::AnalyzeSet {
            group,
            set,
            window,
            output,
        } => match commands::cmd_analyze_set(&group, &set, &window.window()) {
            Ok(out) => emit(&output, out),
            Err(e) => input_error(&e),
        },
        Command::BuildSequence {
            group,
            n_max,
            certificate,
            verify,
            window,
            output,
        } => {
            let result = match verify {
                Some(cert) => commands::cmd_verify_certificate(&cert, &window.window()),
                None => commands::cmd_build_sequence(
                    group.as_deref().expect("clap enforces --group"),
                    n_max.expect("clap enforces --n-max"),
                    &window.window(),
                    &certificate,
                ),
            };
            match result {
                Ok(out) => emit(&output, out),
                Err(e) => input_error(&e),
            }
        }
        Command::RealizeTopology {
            certificate,
            depth,
            eps,
            budget,
            output,
        } => {
            let window = WindowArgs {
                bound: None,
                depth: Some(depth.max(1) as u64),
                budget,
            };
            match commands::cmd_realize_topology(&certificate, depth, &eps, &window.window()) {
                Ok((value, code)) => {
                    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
                    text.push('\n');
                    if let Some(path) = &output.out {
                        if let Err(e) = std::fs::write(path, &text) {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            return ExitCode::from(commands::EXIT_INPUT_ERROR as u8);
                        }
                    }
                    print!("{text}");
                    ExitCode::from(code as u8)
                }
                Err(e) => input_error(&e),
            }
        }
        Command::CheckPaper {
            only,
            window,
            output,
        } => match commands::cmd_check_paper(only.as_deref(), &window.window()) {
            Ok(out) => emit(&output, out),
            Err(e) => input_error(&e),
        },
    }
}
