use thiserror::Error;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid gas specification: `{field}` {reason}")]
    InvalidSpec { field: &'static str, reason: &'static str },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: &'static str },

    /// The adaptive integrator ran out of evaluations. Carries the best
    /// estimate reached so far.
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {evaluations} evaluations")]
    NonConvergence { value: f64, error: f64, evaluations: usize },

    #[error("smeared-delta integral has no samples inside the constraint shell")]
    DegenerateSupport,

    #[error("singular input: {0}")]
    SingularInput(&'static str),

    #[error("bare-action kernel undefined in the {channel} channel (vanishing denominator)")]
    KernelUndefined { channel: &'static str },

    #[error("decoherence measure indeterminate in the {channel} channel (0/0)")]
    IndeterminateMeasure { channel: &'static str },

    #[error("hydrodynamic fit unstable: residual {residual:e} above threshold {threshold:e}")]
    UnstableFit { residual: f64, threshold: f64 },

    #[error("reference constants are only known for zero-temperature fermions")]
    UnsupportedReference,

    #[error("grid too coarse: {nodes_per_length:.2} nodes per width, need at least {required}")]
    Resolution { nodes_per_length: f64, required: usize },

    #[error("profile width undefined: {0}")]
    WidthUndefined(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
