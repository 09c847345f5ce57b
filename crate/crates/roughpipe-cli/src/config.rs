//! Experiment configuration and deterministic seed derivation.

use serde::{Deserialize, Serialize};

use roughpipe_core::SolverConfig64;

/// Which random family a campaign samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bernoulli,
    Poisson,
    Smooth,
}

/// Shared parameters of the ensemble campaigns. Every defaulted constant is
/// echoed into the run manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Roughness denominators M = 1/eps.
    pub eps_dens: Vec<u32>,
    /// Axial period (integer, in units of the reference radius).
    pub period: u32,
    /// Prescribed flux of the nonlinear solves.
    pub phi: f64,
    /// Samples per eps.
    pub ensemble: usize,
    /// Grid cells per rough cell and direction.
    pub subdiv: u32,
    /// Axisymmetric sampling and solving (one bit per ring, 2D solves).
    pub axisym: bool,
    pub family: Family,
    pub base_seed: u64,
    /// Pressure-drop distance; defaults to T/2.
    pub ell: Option<f64>,
    pub solver: SolverConfig64,
    /// Worker threads for the per-sample parallel loop.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            eps_dens: vec![8, 16, 32],
            period: 1,
            phi: 0.1,
            ensemble: 32,
            subdiv: 2,
            axisym: true,
            family: Family::Bernoulli,
            base_seed: 2024,
            ell: None,
            solver: SolverConfig64::default(),
            workers: 0,
        }
    }
}

/// Per-eps group seed: decorrelates the eps groups of one campaign while
/// keeping the documented per-sample rule inside each group.
pub fn group_seed(base_seed: u64, eps_den: u32) -> u64 {
    base_seed.wrapping_add((eps_den as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Per-sample seed: group seed XOR sample index.
pub fn sample_seed(group: u64, index: usize) -> u64 {
    group ^ index as u64
}

/// Builds the rayon pool honoring the worker budget (0 = default).
pub fn thread_pool(workers: usize) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        b = b.num_threads(workers);
    }
    b.build().expect("thread pool")
}
