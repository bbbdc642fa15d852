//! JSON/TSV formats and IO helpers for the `dp4` library.  The binary in
//! this crate exposes every operation as a subcommand; this library holds
//! the serializable mirror types and their conversions so tests and other
//! tools can reuse them.

pub mod formats;

/// Schema tag carried by every payload this crate writes.
pub const SCHEMA: &str = "dp4kit/1";

/// Process exit codes: validation failures and budget refusals are
/// distinguished for scripting.
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
