//! Simulation and reconstruction toolkit for direct characterization of
//! quantum dynamics (DCQD) with faulty Bell-state preparation and
//! measurement.
//!
//! The toolkit simulates the sixteen outcome probabilities of the
//! four-setting Bell-measurement protocol for an unknown single-qubit
//! process sandwiched between known two-qubit noise maps, assembles the
//! 16x16 linear system relating those outcomes to the process matrix,
//! inverts it with conditioning diagnostics, and searches the input-state
//! angles for the determinant-maximizing design.

pub mod channel;
pub mod design;
mod error;
pub mod faulty;
pub mod linalg;
pub mod oracle;
pub mod protocol;
pub mod qobj;
pub mod shortcuts;
#[cfg(test)]
pub(crate) mod testutil;
pub mod verify;

pub use channel::{ChiMatrix1Q, ChiMatrix2Q, ValidationReport};
pub use error::{DcqdError, Result};
pub use faulty::FaultySetting;
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use protocol::{ArrangedVector, LambdaSystem, ProbabilityVector, Reconstruction};
pub use qobj::{BellIndex, DensityMatrix2Q, InputParams, PauliIndex};
pub use shortcuts::BellDiagonalNoise;

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    // all value types are immutable after construction and shareable
    // across threads
    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<ComplexMatrix>();
        assert_send_sync::<DensityMatrix2Q>();
        assert_send_sync::<ChiMatrix1Q>();
        assert_send_sync::<ChiMatrix2Q>();
        assert_send_sync::<ProbabilityVector>();
        assert_send_sync::<ArrangedVector>();
        assert_send_sync::<LambdaSystem>();
        assert_send_sync::<FaultySetting>();
        assert_send_sync::<BellDiagonalNoise>();
        assert_send_sync::<Reconstruction>();
        assert_send_sync::<DcqdError>();
    }
}
