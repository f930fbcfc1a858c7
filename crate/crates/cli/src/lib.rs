//! Batch front end: scheme description files in, deterministic
//! certificate-bearing reports out.

pub mod error;
pub mod input;
pub mod report;
pub mod run;

pub use error::{CliError, ErrorKind};
pub use input::{load_scheme, parse_scheme, SchemeFile, SchemeInput};
pub use report::{emit_report, Format, Report};
pub use run::{run_batch, run_command, run_path, AnalysisRequest, Command, PropertyArg};
