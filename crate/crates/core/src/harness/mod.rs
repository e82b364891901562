//! Instance generators, per-claim checks and the seeded verification
//! suites behind `prodvc verify`.

pub mod generate;
pub mod report;
pub mod suites;
pub mod verify;

pub use generate::{generate, Family, GeneratorSpec};
pub use report::{digest, Record, Verdict, VerificationReport, REPORT_SCHEMA, SCHEMA};
pub use suites::{fuzz_conjecture3, run_suite, Suite, SuiteConfig};
