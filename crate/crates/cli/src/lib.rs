//! Library side of the `envcontour` command: exhibit reproduction, the
//! stored reference table and run manifests.

pub mod manifest;
pub mod reference;
pub mod reproduce;

use envcontour::Error;

/// Process exit status for a library error: 3 when a numerical method
/// failed, 2 for anything the caller can fix.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } | Error::NonFinite(_) | Error::EmptyIntersection | Error::OutOfRange { .. } => 3,
        _ => 2,
    }
}
