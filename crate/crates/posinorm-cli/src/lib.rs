//! Library behind the `posinorm` binary: matrix file I/O, the
//! operator-expression parser, report assembly, command
//! implementations, and the named verification suites.

pub mod commands;
pub mod expr;
pub mod matfile;
pub mod report;
pub mod suites;

/// Process exit codes shared by the binary and its tests.
pub mod exit {
    pub const ALL_PASS: u8 = 0;
    pub const PROPERTY_FAILURE: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
    pub const INTERNAL_ERROR: u8 = 3;

    pub fn for_error(err: &posinorm::Error) -> u8 {
        match err {
            posinorm::Error::Input(_) | posinorm::Error::Degenerate(_) => INPUT_ERROR,
            posinorm::Error::Precondition { .. } => INPUT_ERROR,
            posinorm::Error::Internal(_) => INTERNAL_ERROR,
        }
    }
}
