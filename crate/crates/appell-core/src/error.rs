use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generating function vanishes at the origin (g(0) = 0 is not allowed)")]
    GZeroAtOrigin,

    #[error("working precision {prec} below the minimum of {min} bits")]
    PrecisionTooLow { prec: u32, min: u32 },

    #[error("cutoff rho = {rho} collides with a zero modulus {modulus} (relative margin 1e-6)")]
    RhoCollidesZeroModulus { rho: f64, modulus: f64 },

    #[error("no zeros of g with modulus below rho = {0}")]
    NoZerosBelowRho(f64),

    #[error("Laurent quadrature did not converge at {nodes} nodes")]
    QuadratureNonConvergence { nodes: usize },

    #[error("quadrature circle radius underflow near zero at ({re}, {im}); zeros too clustered")]
    RadiusUnderflow { re: f64, im: f64 },

    #[error("root iteration hit max_iter = {iterations} with scaled residual {residual:e} above threshold")]
    NonConverged {
        iterations: usize,
        residual: f64,
        partial: Box<crate::rootfind::RootSet>,
    },

    #[error("contour passes too close to a root (min sampled |p| = {min_abs:e})")]
    ContourNearRoot { min_abs: f64 },

    #[error("argument-principle integral did not settle near an integer at {nodes} nodes")]
    ContourNonConvergence { nodes: usize },

    #[error("insufficient sample: {selected} zeros selected, {required} required")]
    InsufficientSample { selected: usize, required: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
