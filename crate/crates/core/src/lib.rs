//! Exact computation of anticanonical and bi-anticanonical linear systems on
//! rational surfaces obtained from CP¹×CP¹ by four conjugate pairs of
//! blowups along the anticanonical cycle, and the resulting case
//! classification.

pub mod analysis;
pub mod cycle;
pub mod error;
pub mod lattice;
pub mod linsys;
pub mod oracle;

pub use cycle::{AnticanonicalCycle, BlowupPlan, BlowupStep, NearPosition};
pub use error::{Error, Result};
pub use lattice::DivisorClass;
pub use linsys::{Case, ClassificationReport};
