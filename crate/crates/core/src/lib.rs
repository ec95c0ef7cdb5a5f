//! Constant composition codes obtained as subcodes of trace codes over `F_p`.
//!
//! The crate builds the trace codes defined by `D(alpha) = {d : Tr(d) = alpha}`
//! and `E = {d : Tr(d^2) = 0}`, extracts their constant composition subcodes,
//! and checks every closed-form parameter against exhaustive enumeration.
//!
//! ```
//! use std::sync::Arc;
//! use tracecc::{ccc, codes, gfpm};
//!
//! let field = gfpm::make_field(3, 3, None).unwrap();
//! let code = codes::build_trace_code(codes::build_defining_set_d(&field, 0).unwrap()).unwrap();
//! let sub = ccc::extract_subcode_first(&Arc::new(code), Default::default()).unwrap();
//! assert_eq!((sub.n(), sub.size(), sub.d()), (8, 8, 6));
//! ```

pub mod ccc;
pub mod charsums;
pub mod codes;
pub mod gfpm;
pub mod report;
pub mod verify;

use thiserror::Error;

pub use ccc::{
    CccCode, CccError, CccParameters, CompositionVector, Construction, LfvcReport, LfvcVerdict,
};
pub use charsums::{CharSumError, ComplexValue};
pub use codes::{CodeError, DefiningSet, TraceCode, WeightDistribution};
pub use gfpm::{make_field, Field, FieldElement, FieldError, FieldParams};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    CharSum(#[from] CharSumError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Ccc(#[from] CccError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

impl Error {
    /// True for errors that mean a computed value disagreed with a prediction
    /// or an invariant, as opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::CharSum(CharSumError::ClosedFormMismatch { .. })
                | Error::CharSum(CharSumError::PredictionMismatch(_))
                | Error::Ccc(CccError::CompositionViolation { .. })
                | Error::Ccc(CccError::DuplicateWords)
        )
    }

    /// Short machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(e) => match e {
                FieldError::NotPrime(_) => "NotPrime",
                FieldError::EvenCharacteristic => "EvenCharacteristic",
                FieldError::InvalidDegree => "InvalidDegree",
                FieldError::InvalidModulus { .. } => "InvalidModulus",
                FieldError::ReducibleModulus(_) => "ReducibleModulus",
                FieldError::FieldTooLarge { .. } => "FieldTooLarge",
                FieldError::FieldMismatch => "FieldMismatch",
                FieldError::DivisionByZero => "DivisionByZero",
            },
            Error::CharSum(e) => match e {
                CharSumError::ClosedFormMismatch { .. } => "ClosedFormMismatch",
                CharSumError::ZeroLeadingCoefficient => "ZeroLeadingCoefficient",
                CharSumError::PredictionMismatch(_) => "PredictionMismatch",
                CharSumError::Field(_) => "FieldError",
            },
            Error::Code(e) => code_error_kind(e),
            Error::Ccc(e) => match e {
                CccError::CompositionViolation { .. } => "CompositionViolation",
                CccError::DuplicateWords => "DuplicateWords",
                CccError::TooFewWords(_) => "TooFewWords",
                CccError::CompositionLengthMismatch { .. } => "CompositionLengthMismatch",
                CccError::WrongSource => "WrongSource",
                CccError::NonPositiveParameters => "NonPositiveParameters",
                CccError::Code(e) => code_error_kind(e),
            },
            Error::InvalidParameters(_) => "InvalidParameters",
        }
    }
}

fn code_error_kind(e: &CodeError) -> &'static str {
    match e {
        CodeError::DegenerateSet => "DegenerateSet",
        CodeError::OddDegree(_) => "OddDegree",
        CodeError::UnsupportedDegree(_) => "UnsupportedDegree",
        CodeError::ZeroCode => "ZeroCode",
        CodeError::AlphabetTooLarge(_) => "AlphabetTooLarge",
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
