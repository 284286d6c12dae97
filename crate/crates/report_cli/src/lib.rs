//! Verification suites, deterministic reports and the commands behind the
//! `nklab` binary.

pub mod codazzi;
pub mod commands;
pub mod report;
pub mod suites;

pub use codazzi::{scan, ScanCase, ScanPoint, ScanReport};
pub use commands::{classify_str, cmd_angles, cmd_classify, cmd_codazzi_scan, cmd_verify, AngleReport, CliError};
pub use report::{to_canonical_json, CheckResult, Tolerances, VerificationReport};
pub use suites::{SuiteConfig, SuiteRegistry, VerificationSuite};

/// Default number of samples per check.
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
/// Environment variable that replaces `--seed`.
pub const SEED_ENV: &str = "NKLAB_SEED";

/// `NKLAB_SEED` when set, otherwise `flag`.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))),
        None => Ok(flag),
    }
}
