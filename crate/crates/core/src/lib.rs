//! Numerical toolkit for generalized Cesàro operators on the
//! Sobolev-Lebesgue sequence spaces τ_p^α.

pub mod cesaro;
pub mod error;
pub mod gamma;
pub mod identities;
pub mod numerics;
pub mod quadrature;
pub mod registry;
pub mod report;
pub mod semigroups;
pub mod sequence;
pub mod spaces;
pub mod spectra;
pub mod weyl;

pub use error::{Error, Result};
pub use numerics::{Exponent, C64};
pub use report::{ParamValue, VerificationReport};
pub use sequence::{AnalyticSequence, Decay, FiniteSequence, Tail, TruncatedSequence};
