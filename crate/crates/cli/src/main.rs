//! `dbplumb` command-line interface.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "dbplumb", version, about = "Exact computations for dg quiver algebras, Tjurina algebras, group rings and surgery gates")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    output: OutputFormat,
    /// Enumeration budget; defaults to $DBP_BUDGET or 2^24.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = commands::DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    W,
    A,
    G,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GkMode {
    Explicit,
    Literal,
    Orbit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    /// Path-algebra reading with one idempotent per vertex.
    Quiver,
    /// Idempotents identified to a single unit.
    Identified,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = Family::W)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<u32>,
    /// `q`, `p:<prime>` or `z`.
    #[arg(long, default_value = "q")]
    pub field: String,
    /// Differential mode for `G_k`.
    #[arg(long, value_enum, default_value_t = GkMode::Explicit)]
    pub mode: GkMode,
}

#[derive(Args, Debug, Clone)]
pub struct GroupInput {
    /// Named group: A4, S4, A5, D<2n>, Z<n>, prism(m,n).
    #[arg(long)]
    pub group: Option<String>,
    /// Presentation file with `generators` and `relators`.
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Comma-separated generator names.
    #[arg(long)]
    pub generators: Option<String>,
    /// Semicolon-separated relators; `lhs = rhs` is allowed.
    #[arg(long)]
    pub relators: Option<String>,
    /// Prism presentation `m,n`.
    #[arg(long)]
    pub prism: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a presentation file for W_k, A_k or G_k.
    Present {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write the presentation here instead of only reporting it.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run the family check suite.
    Suite {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Degree-zero cohomology of a family member or a presentation file.
    H0 {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = Reading::Quiver)]
        reading: Reading,
    },
    /// Unit group of H^0 over a prime field.
    Units {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
        /// Element whose order and inverse are certified.
        #[arg(long)]
        element: Option<String>,
    },
    /// Tjurina algebra of uv - xy((x+1)^k + y - 1).
    Tjurina {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Whether a point of (u, v, x, y)-space is singular on the hypersurface.
    SingularPoint {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "q")]
        field: String,
        /// Comma-separated coordinates; defaults to 0,0,-2,0.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Group-ring computations.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Invariant factors of the abelianization of a presentation.
    Abelianize {
        #[command(flatten)]
        input: GroupInput,
    },
    /// Coset enumeration of a finite presentation.
    ToddCoxeter {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value_t = 100_000)]
        max_cosets: usize,
    },
    /// Surgery-gate rules.
    Gate {
        #[command(subcommand)]
        command: GateCommand,
    },
    /// Round-trip a presentation file and random elements through the parser.
    ParseCheck {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Conjugacy classes, class-sum structure constants and, over F_p, a
    /// survey of the central units.
    Center {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value = "z")]
        ring: String,
    },
    /// Check that an element is a central unit and print its inverse.
    UnitCheck {
        #[command(flatten)]
        input: GroupInput,
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Also reduce the element modulo this prime.
        #[arg(long)]
        reduce_mod: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum GateCommand {
    /// Per-summand classification rules.
    Classify {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        summands: String,
    },
    /// Full case analysis for a candidate prime decomposition.
    Surgery {
        #[arg(long)]
        k: u64,
        /// kappa0, kappa1 or both.
        #[arg(long, default_value = "kappa0")]
        knots: String,
        #[arg(long)]
        summands: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let budget = match commands::resolve_budget(cli.budget) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let ctx = commands::Context { budget, seed: cli.seed };
    let result = match cli.command {
        Command::Present { family, out } => commands::present(&family, out.as_deref()),
        Command::Suite { k, field, bound } => commands::suite(k, &field, bound),
        Command::H0 { family, input, bound, reading } => commands::h0(&family, input.as_deref(), bound, reading),
        Command::Units { family, input, bound, element } => {
            commands::units(&ctx, &family, input.as_deref(), bound, element.as_deref())
        }
        Command::Tjurina { k, field } => commands::tjurina(k, &field),
        Command::SingularPoint { k, field, point } => commands::singular_point(k, &field, point.as_deref()),
        Command::Group { command } => match command {
            GroupCommand::Center { input, ring } => commands::group_center(&ctx, &input, &ring),
            GroupCommand::UnitCheck { input, ring, element, reduce_mod } => {
                commands::group_unit_check(&input, &ring, &element, reduce_mod)
            }
        },
        Command::Abelianize { input } => commands::abelianize(&input),
        Command::ToddCoxeter { input, max_cosets } => commands::todd_coxeter(&input, max_cosets),
        Command::Gate { command } => match command {
            GateCommand::Classify { k, summands } => commands::gate_classify(k, &summands),
            GateCommand::Surgery { k, knots, summands } => commands::gate_surgery(k, &knots, &summands),
        },
        Command::ParseCheck { input, samples } => commands::parse_check(&ctx, &input, samples),
    };
    match result {
        Ok(mut report) => {
            if let Some(obj) = report.inputs.as_object_mut() {
                obj.insert("seed".into(), cli.seed.into());
                obj.insert("budget".into(), budget.into());
            }
            match cli.output {
                OutputFormat::Json => println!("{}", report.to_json()),
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
