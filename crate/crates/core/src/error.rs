use thiserror::Error;

use crate::frame::Proposition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame has no labels")]
    EmptyFrame,
    #[error("frame has {0} labels, at most {max} are supported", max = crate::frame::MAX_FRAME_SIZE)]
    FrameTooLarge(usize),
    #[error("duplicate frame label {0:?}")]
    DuplicateLabel(String),
    #[error("frame label must be a non-empty string")]
    BlankLabel,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("proposition {0:#b} is not a subset of the frame")]
    OutsideFrame(u32),
    #[error("invalid amplitude: {0}")]
    InvalidAmplitude(String),
    #[error("mass {0} is outside [0, 1]")]
    MassOutOfRange(f64),
    #[error("evidence bodies are defined over different frames")]
    FrameMismatch,
    #[error("every amplitude is zero; cannot normalize")]
    ZeroMass,
    #[error("reliability evidence must be over the frame [Y, N], got {0:?}")]
    NotReliabilityFrame(Vec<String>),
    #[error("total conflict at combination step {step}: 1 - |K| = {denominator:e}")]
    TotalConflict { step: usize, denominator: f64 },
    #[error("no evidence to combine")]
    NoEvidence,
    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Validation(#[from] Violation),
}

/// Why a quantum mass function failed validation.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}", self.describe())]
pub struct Violation {
    /// Sum of ψ² over every stored proposition (the empty set included).
    pub modulus_sum: f64,
    pub tolerance: f64,
    /// Propositions whose amplitude is itself invalid: the empty set with
    /// nonzero mass, or a non-finite component.
    pub offending: Vec<Proposition>,
}

impl Violation {
    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if (self.modulus_sum - 1.0).abs() > self.tolerance || !self.modulus_sum.is_finite() {
            parts.push(format!(
                "moduli sum to {:.6} (|sum - 1| must be <= {:e})",
                self.modulus_sum, self.tolerance
            ));
        }
        if !self.offending.is_empty() {
            let masks: Vec<String> = self
                .offending
                .iter()
                .map(|p| format!("{:#b}", p.mask()))
                .collect();
            parts.push(format!("invalid mass on {}", masks.join(", ")));
        }
        parts.join("; ")
    }
}
