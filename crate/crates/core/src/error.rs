use thiserror::Error;

/// Errors for the whole library. Variants split into two classes: domain
/// errors (degenerate input, non-generic parameters) and internal assertion
/// failures, which always indicate a bug or a falsified structural claim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("leaves share the tip angle {0}")]
    SharedTip(String),
    #[error("all tips collapse to a single angle under z -> z^{degree}")]
    CriticalCollapse { degree: u32 },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("leaves cross: {0}")]
    CrossingLeaves(String),
    #[error("height {0} collides with a leaf height")]
    HeightCollision(String),
    #[error("component length {length} is not a multiple of 1/3^{depth}")]
    NonConformingLength { length: String, depth: u32 },
    #[error("critical heights are non-generic: {0}")]
    NonGenericHeights(String),
    #[error("invalid critical set: {0}")]
    InvalidCriticalSet(String),
    #[error("ambiguous tracking at t = {t}: step underflow below {floor}")]
    AmbiguousTracking { t: String, floor: String },
    #[error("cable structure violation: {0}")]
    StructureViolation(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("analytic continuation stalled at theta = {0}")]
    ContinuationStall(f64),
    #[error("continuation endpoint does not match any start point (dist {0:.3e})")]
    MatchFailure(f64),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("point height {h} is not above every critical height {hmax}")]
    BelowCriticalHeight { h: f64, hmax: f64 },
    #[error("external ray trace failed: {0}")]
    RayTraceFailure(String),
    #[error("presentation complex has more than one vertex")]
    MultiVertex,
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
}

impl Error {
    /// Exit-code taxonomy: domain errors are 2, internal assertion failures 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InternalAssertion(_) | Error::StructureViolation(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
