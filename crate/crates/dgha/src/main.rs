use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dgha::error::EXIT_OTHER;
use dgha::job::{parse_jobspec, render, Command, OutputMode};
use dgha::registry::{example_text, EXAMPLES};
use dgha::{run, RunError};

/// Homological invariants of truncated DG algebras.
#[derive(Parser, Debug)]
#[command(name = "dgha", version)]
struct Cli {
    /// Job file to run.
    #[arg(required_unless_present_any = ["example", "list_examples"], conflicts_with = "example")]
    jobfile: Option<PathBuf>,
    /// Run a built-in example instead of a job file.
    #[arg(long)]
    example: Option<String>,
    /// List the built-in examples and exit.
    #[arg(long)]
    list_examples: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the structured (JSON) report regardless of the job's output mode.
    #[arg(long)]
    structured: bool,
    /// Override the job's command.
    #[arg(long)]
    cmd: Option<Command>,
    /// Print the job in canonical form instead of running it.
    #[arg(long)]
    render: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_examples {
        for (name, text) in EXAMPLES {
            let about = text.lines().next().and_then(|l| l.strip_prefix("# ")).unwrap_or("");
            println!("{name:<20} {about}");
        }
        return ExitCode::SUCCESS;
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dgha: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(EXIT_OTHER as u8))
        }
    }
}

fn execute(cli: &Cli) -> Result<(), RunError> {
    let text = match (&cli.example, &cli.jobfile) {
        (Some(name), _) => example_text(name)?.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut job = parse_jobspec(&text)?;
    if let Some(cmd) = cli.cmd {
        job.command = cmd;
        // Re-validate: the new command may not fit the module.
        job = parse_jobspec(&render(&job))?;
    }
    if cli.structured {
        job.output = OutputMode::Structured;
    }
    let output = if cli.render {
        render(&job)
    } else {
        let outcome = run(&job)?;
        match job.output {
            OutputMode::Structured => outcome.structured()? + "\n",
            OutputMode::Text => outcome.text,
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(())
}
