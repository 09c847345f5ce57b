//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid roughness scale: 1/epsilon must be a positive integer (got {0})")]
    InvalidEpsilon(String),

    #[error("invalid period: T/epsilon must be a positive integer (got {0})")]
    InvalidPeriod(String),

    #[error("cell index ({i}, {j}) out of range for {ni} x {nj} rough cells")]
    CellIndexOutOfRange { i: usize, j: usize, ni: usize, nj: usize },

    #[error("operation requires a Bernoulli sample, got {0}")]
    NotBernoulli(String),

    #[error("grid is misaligned with the sample: {0}")]
    MisalignedGrid(String),

    #[error("fluid region is disconnected ({components} components)")]
    DisconnectedFluid { components: usize },

    #[error("linear solver did not converge: divergence residual {div_res:.3e}, momentum residual {mom_res:.3e} after {iters} iterations")]
    SolveFailed { div_res: f64, mom_res: f64, iters: usize },

    #[error("Picard iteration diverged at step {iters} (update norm {update:.3e}); flux likely outside the small-data regime")]
    PicardDiverged { iters: usize, update: f64 },

    #[error("flux {phi} exceeds the configured smallness bound {bound}")]
    FluxTooLarge { phi: f64, bound: f64 },

    #[error("ensemble is empty or undersized: {0}")]
    BadEnsemble(String),

    #[error("rate fit needs at least 3 points with positive errors (got {0})")]
    BadFitInput(String),

    #[error("slip length pole: 2*alpha*epsilon = 1")]
    SlipLengthPole,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
