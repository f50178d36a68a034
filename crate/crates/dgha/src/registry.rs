//! Built-in example jobs.

use crate::error::JobError;
use crate::job::{parse_jobspec, JobSpec};

/// `(name, job text)` for every bundled example.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("example61", include_str!("../jobs/example61.job")),
    ("example61-envelope", include_str!("../jobs/example61-envelope.job")),
    ("example61-em", include_str!("../jobs/example61-em.job")),
    ("free1", include_str!("../jobs/free1.job")),
    ("free2", include_str!("../jobs/free2.job")),
    ("exterior", include_str!("../jobs/exterior.job")),
    ("sym-exterior", include_str!("../jobs/sym-exterior.job")),
    ("k", include_str!("../jobs/k.job")),
];

pub fn example_text(name: &str) -> Result<&'static str, JobError> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| JobError::UnknownExample(name.to_string()))
}

pub fn example(name: &str) -> Result<JobSpec, JobError> {
    parse_jobspec(example_text(name)?)
}
