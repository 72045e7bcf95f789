use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resonance singularity: |Δm|={delta_m} denominator {denominator:.6e} rad/s is inside the guard band {guard:.6e} rad/s")]
    ResonanceSingularity {
        delta_m: i32,
        denominator: f64,
        guard: f64,
    },

    #[error("quadrature not converged: order {order} vs {doubled} differ by {max_change:.3e} (tolerance {tolerance:.1e})")]
    QuadratureConvergence {
        order: usize,
        doubled: usize,
        max_change: f64,
        tolerance: f64,
    },

    #[error("integrator failed to reach tolerance {tolerance:.1e} after {steps} steps per period (last error estimate {estimate:.3e})")]
    Stiffness {
        steps: usize,
        estimate: f64,
        tolerance: f64,
    },

    #[error("fit did not converge after {iterations} iterations")]
    NonConvergence { iterations: u64 },

    #[error("degenerate covariance matrix at the optimum")]
    DegenerateCovariance,

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) => 2,
            _ => 3,
        }
    }
}
