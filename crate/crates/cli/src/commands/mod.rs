pub mod charges;
pub mod curve;
pub mod evolve;
pub mod specfun;
pub mod verify;

use std::fmt;
use std::path::{Path, PathBuf};

use ptkdv::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_DYNAMICS: i32 = 4;

/// A command that stopped with a non-zero exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub source: Option<Error>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into(), source: None }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string(), source: Some(e) }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) => EXIT_CONVERGENCE,
        Error::Singularity { .. } | Error::BlowUp { .. } => EXIT_DYNAMICS,
        _ => EXIT_USAGE,
    }
}

pub type Outcome = Result<i32, Failure>;

pub fn output_dir(explicit: Option<&Path>, root: &Path, command: &str) -> PathBuf {
    explicit.map(Path::to_path_buf).unwrap_or_else(|| root.join(command))
}

/// Short file-name form of a real number.
pub fn tag(x: f64) -> String {
    format!("{x}").replace('-', "m")
}
