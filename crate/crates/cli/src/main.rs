use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use localh_cli::commands::{self, MapRequest, Method, Outcome};
use localh_cli::config::{parse_mode, OutputFormat, RunConfig};
use localh_cli::format::load;
use localh_cli::{render, CliError};

/// Local face modules and local h-vectors of triangulated simplices.
#[derive(Parser, Debug)]
#[command(name = "localh", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "LOCALH_SEED", default_value_t = 0)]
    seed: u64,
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Highest degree to compute (default d + 2).
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// json or text.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Homology validation depth: fast or full.
    #[arg(long, global = true, default_value = "fast")]
    mode: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schema, carrier map, homology and quasi-geometric checks.
    Validate { input: String },
    /// The local h-vector of a face.
    LocalH {
        input: String,
        /// Comma-separated vertex ids; empty for the empty face.
        #[arg(long, default_value = "")]
        face: String,
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// The resolution of L(Γ,E) by the ideals I_S.
    Resolution {
        input: String,
        #[arg(long, default_value = "")]
        face: String,
        #[arg(long)]
        verify: bool,
    },
    /// The map L(Γ,E) → L(Γ,E') for E ⊆ E'.
    Map {
        input: String,
        #[arg(long, default_value = "")]
        face: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        check_surjective: bool,
        /// A third face E'' ⊇ E' for the composition check.
        #[arg(long)]
        check_compose: Option<String>,
    },
    /// Structural vanishing checks against the computed module.
    Audit {
        input: String,
        #[arg(long, default_value = "")]
        face: String,
    },
    /// Restriction of L(Γ,E) to a subcomplex, or of a standalone face.
    Restrict {
        input: String,
        #[arg(long, default_value = "")]
        face: String,
        /// Facets of Δ as `a,b;b,c`; defaults to the whole link.
        #[arg(long)]
        delta: Option<String>,
    },
    /// List builtin fixtures or print one.
    Corpus { name: Option<String> },
}

fn config(g: &Global) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        seed: g.seed,
        field: RunConfig::parse_field(&g.field)?,
        max_degree: g.max_degree,
        format: OutputFormat::parse(&g.format)?,
        mode: parse_mode(&g.mode)?,
    })
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let face = commands::parse_face;
    match &cli.command {
        Command::Validate { input } => commands::validate(&load(input)?, cfg),
        Command::LocalH {
            input,
            face: f,
            method,
        } => commands::local_h(&load(input)?, &face(f), Method::parse(method)?, cfg),
        Command::Resolution {
            input,
            face: f,
            verify,
        } => commands::resolution(&load(input)?, &face(f), *verify, cfg),
        Command::Map {
            input,
            face: f,
            to,
            check_surjective,
            check_compose,
        } => {
            let source = face(f);
            let target = face(to);
            let compose = check_compose.as_deref().map(face);
            let req = MapRequest {
                face: &source,
                target: &target,
                check_surjective: *check_surjective,
                compose: compose.as_deref(),
            };
            commands::map(&load(input)?, &req, cfg)
        }
        Command::Audit { input, face: f } => commands::audit(&load(input)?, &face(f), cfg),
        Command::Restrict {
            input,
            face: f,
            delta,
        } => {
            let delta = delta.as_deref().map(commands::parse_facets);
            commands::restrict(&load(input)?, &face(f), delta.as_deref(), cfg)
        }
        Command::Corpus { name } => commands::corpus(name.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (report, code, format) = match config(&cli.global) {
        Ok(cfg) => match run(&cli, &cfg) {
            Ok(o) => (o.report, o.code, cfg.format),
            Err(e) => (commands::error_report(&e), e.exit_code(), cfg.format),
        },
        Err(e) => (
            commands::error_report(&e),
            e.exit_code(),
            OutputFormat::Json,
        ),
    };
    print!("{}", render(&report, format));
    ExitCode::from(code as u8)
}
