use thiserror::Error;

/// Errors produced by the tensor kernels, constitutive laws and simulators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input contains non-finite entries")]
    NonFinite,

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    EigNoConvergence { sweeps: usize },

    #[error("matrix is not positive definite (lambda_min = {lambda_min:.3e}, lambda_max = {lambda_max:.3e})")]
    NotPositiveDefinite { lambda_min: f64, lambda_max: f64 },

    #[error("scale function `{name}` is undefined at eigenvalue {lambda:.6e}")]
    ScaleDomain { name: &'static str, lambda: f64 },

    #[error("singular operator (det = {det:.3e})")]
    SingularOperator { det: f64 },

    #[error("deformation gradient is singular or orientation-reversing (det F = {det:.3e})")]
    SingularDeformation { det: f64 },

    #[error("unknown constitutive law `{0}`")]
    UnknownLaw(String),

    #[error("law `{law}` does not accept parameter `{param}`")]
    UnknownParameter { law: String, param: String },

    #[error("operation not defined for rate `{rate}`: {what}")]
    UnsupportedRate { rate: String, what: &'static str },

    #[error(
        "finite-difference step left the SPD cone and could not be shrunk below {min_step:.1e}"
    )]
    FdStepExhausted { min_step: f64 },

    #[error("principal stretches too close for principal-axes formulas (gap = {gap:.3e})")]
    NearRepeatedStretches { gap: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("time integration diverged at t = {t:.6e} (last valid step {last_step}, sigma = {last_sigma:?})")]
    Divergence {
        t: f64,
        last_step: usize,
        /// Components (11, 22, 33, 12, 23, 31) of the last finite state.
        last_sigma: [f64; 6],
    },
}

pub type Result<T> = std::result::Result<T, Error>;
