//! Job files and report rendering for the `dgha` command.

pub mod construct;
pub mod error;
pub mod job;
pub mod registry;
pub mod run;

pub use error::{JobError, RunError};
pub use job::{parse_jobspec, render, Command, JobSpec, ModuleSelector, OutputMode};
pub use run::{run, Outcome, Report};
