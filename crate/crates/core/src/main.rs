use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use massey_torus::report::fixtures::builtin_fixture;
use massey_torus::report::input::{parse_eigenvalue_file, parse_input, Eigenvalues, InputJson};
use massey_torus::report::{analyze, analyze_fixture, render_json, render_table, selfcheck, Report};
use massey_torus::{Error, Result};

#[derive(Parser)]
#[command(name = "massey-torus", version, about = "Jordan blocks, exact-couple pages and Massey lengths of mapping tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an input file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// `all`, or a JSON file listing eigenvalues; defaults to the input's own list.
        #[arg(long)]
        eigenvalues: Option<String>,
        #[arg(long)]
        max_page: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Analyze a built-in example (heisenberg, surface).
    Example {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        /// Print the example as an input file instead of analyzing it.
        #[arg(long)]
        emit_input: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the random-instance property suite.
    Selfcheck {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Table => render_table(report),
        Format::Json => render_json(report),
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze { input, eigenvalues, max_page, format } => {
            let mut parsed = parse_input(&read(&input)?)?;
            match eigenvalues.as_deref() {
                None => {}
                Some("all") => parsed.eigenvalues = Eigenvalues::All,
                Some(path) => parsed.eigenvalues = parse_eigenvalue_file(&read(&PathBuf::from(path))?)?,
            }
            if max_page == Some(0) {
                return Err(Error::Input("--max-page must be at least 1".into()));
            }
            if max_page.is_some() {
                parsed.max_page = max_page;
            }
            Ok(render(&analyze(&parsed)?, format))
        }
        Command::Example { name, n, emit_input, format } => {
            let fixture = builtin_fixture(&name, n)?;
            if emit_input {
                return Ok(serde_json::to_string_pretty(&InputJson::from_input(&fixture.input))
                    .expect("input serializes"));
            }
            Ok(render(&analyze_fixture(&fixture)?, format))
        }
        Command::Selfcheck { seed, count } => {
            let s = selfcheck::run(seed, count)?;
            Ok(format!(
                "ok: {} monodromy instances ({} factors), {} presentations, {} decompositions",
                s.monodromy_instances, s.factors, s.presentation_instances, s.decompositions
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_integrity() { 3 } else { 2 })
        }
    }
}
