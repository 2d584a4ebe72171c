use thiserror::Error;

use crate::lattice::DivisorClass;
use crate::linsys::ClassificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("classes live in lattices with {left} and {right} exceptional classes")]
    LatticeMismatch { left: usize, right: usize },

    #[error("class {class} is not a smooth rational curve (C·(C+K) = {value}, expected -2)")]
    NotRationalCurve { class: DivisorClass, value: i64 },

    #[error("step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },

    #[error("a blowup plan needs exactly 4 steps, got {0}")]
    PlanLength(usize),

    #[error("peeling did not stabilise after {0} rounds")]
    PeelDiverged(usize),

    #[error("unsupported multiple {0} of the anticanonical class (expected 1 or 2)")]
    UnsupportedMultiple(i64),

    #[error("could not certify generic position after {attempts} attempts: {detail}")]
    GenericityNotCertified { attempts: usize, detail: String },

    #[error("evaluation rank still growing after {samples} samples")]
    InsufficientSamples { samples: usize },

    #[error("image degree not readable from Hilbert function values {hilbert:?}")]
    DegreeNotStable { hilbert: Vec<i64> },

    #[error("point instance {0} has no usable chart")]
    ChartBoundary(usize),

    #[error("unrecognised signature (h0(2K^-1), M^2) = ({}, {}) for string {:?}", .0.h0_biantican, .0.movable_selfint, .0.string)]
    UnrecognisedSignature(Box<ClassificationReport>),

    #[error("malformed matrix dump at line {line}: {reason}")]
    MatrixFormat { line: usize, reason: String },
}
