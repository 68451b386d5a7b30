use alloc::string::String;

/// Errors raised by the numerical routines.
///
/// Each variant corresponds to one named failure mode; [`TomoError::name`]
/// returns the bare variant name, which the command-line layer prints.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TomoError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid state label: {0}")]
    InvalidLabel(String),
    #[error("grid too coarse: estimate {estimate:.3e} exceeds {limit:.3e}")]
    GridTooCoarse { estimate: f64, limit: f64 },
    #[error("grid does not span the required interval [-{required:.3}, {required:.3}]")]
    GridTooNarrow { required: f64 },
    #[error("frame angle {phi} is inside the excluded band |sin phi| < 1e-6")]
    DegenerateFrame { phi: f64 },
    #[error("{got} angles supplied, at least {need} required")]
    InsufficientAngles { got: usize, need: usize },
    #[error("back-projection rings (|W| reaches {peak:.3e}, bound {bound:.3e})")]
    RingingDetected { peak: f64, bound: f64 },
    #[error("result is not Hermitian (asymmetry {asymmetry:.3e})")]
    NonHermitianResult { asymmetry: f64 },
    #[error("reconstructed density kernel is not positive (2x2 minor excess {excess:.3e})")]
    NotPositive { excess: f64 },
    #[error("imaginary residue {residue:.3e} exceeds tolerance")]
    ComplexResidue { residue: f64 },
    #[error("negative phase-space density (min/max = {ratio:.3e})")]
    NegativityDetected { ratio: f64 },
    #[error("tomogram is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("radial truncation tail {tail:.3e} exceeds tolerance")]
    IntegrationDiverged { tail: f64 },
    #[error("det Lambda = {det} drifted from 1")]
    SymplecticityLost { det: f64 },
    #[error("propagator times do not chain ({end} != {start})")]
    TimeMismatch { end: f64, start: f64 },
    #[error("{lost:.3e} of the probability mass left the grid")]
    BoundaryOutflow { lost: f64 },
    #[error("sample point sits on a node of the Fourier component (|w| = {value:.3e})")]
    NearNode { value: f64 },
    #[error("angular-momentum index out of range")]
    IndexOutOfRange,
    #[error("quadrature too coarse: {0}")]
    QuadratureTooCoarse(String),
    #[error("operation requires a {expected} tomogram")]
    WrongTomogramKind { expected: &'static str },
    #[error("at most {max} states accepted, got {got}")]
    TooManyStates { got: usize, max: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl TomoError {
    /// Bare variant name, e.g. `"NegativityDetected"`.
    pub fn name(&self) -> &'static str {
        match self {
            Self::InvalidGrid(_) => "InvalidGrid",
            Self::ShapeMismatch(_) => "ShapeMismatch",
            Self::InvalidLabel(_) => "InvalidLabel",
            Self::GridTooCoarse { .. } => "GridTooCoarse",
            Self::GridTooNarrow { .. } => "GridTooNarrow",
            Self::DegenerateFrame { .. } => "DegenerateFrame",
            Self::InsufficientAngles { .. } => "InsufficientAngles",
            Self::RingingDetected { .. } => "RingingDetected",
            Self::NonHermitianResult { .. } => "NonHermitianResult",
            Self::NotPositive { .. } => "NotPositive",
            Self::ComplexResidue { .. } => "ComplexResidue",
            Self::NegativityDetected { .. } => "NegativityDetected",
            Self::NotNormalized { .. } => "NotNormalized",
            Self::IntegrationDiverged { .. } => "IntegrationDiverged",
            Self::SymplecticityLost { .. } => "SymplecticityLost",
            Self::TimeMismatch { .. } => "TimeMismatch",
            Self::BoundaryOutflow { .. } => "BoundaryOutflow",
            Self::NearNode { .. } => "NearNode",
            Self::IndexOutOfRange => "IndexOutOfRange",
            Self::QuadratureTooCoarse(_) => "QuadratureTooCoarse",
            Self::WrongTomogramKind { .. } => "WrongTomogramKind",
            Self::TooManyStates { .. } => "TooManyStates",
            Self::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = core::result::Result<T, TomoError>;
