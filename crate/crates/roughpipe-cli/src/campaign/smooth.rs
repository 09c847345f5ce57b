//! Smooth-pipe grid-convergence study against the closed-form laminar flow.

use serde::{Deserialize, Serialize};

use roughpipe_core::effective::hagen_poiseuille;
use roughpipe_core::geometry::smooth_sample;
use roughpipe_core::solver::solve_stokes_flux;
use roughpipe_core::verify::{velocity_error_norms, Region};
use roughpipe_core::SolverConfig64;

use super::ensemble::mask_for;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmoothOutcome {
    pub eps_den: u32,
    pub phi: f64,
    pub subdivs: Vec<u32>,
    /// Relative L2 velocity errors per subdivision.
    pub rel_errors: Vec<f64>,
    /// Relative error of the mean gradient G against 8 phi / pi.
    pub g_rel_errors: Vec<f64>,
    /// Orders observed between consecutive subdivisions.
    pub orders: Vec<f64>,
    pub flux_spreads: Vec<f64>,
    pub max_divs: Vec<f64>,
}

/// Solves the smooth pipe at increasing subdivision and measures errors
/// against the laminar flow.
pub fn smooth_convergence(
    eps_den: u32,
    period: u32,
    phi: f64,
    subdivs: &[u32],
    solver: &SolverConfig64,
) -> anyhow::Result<SmoothOutcome> {
    let sample = smooth_sample(eps_den, period * eps_den)?;
    let flow = hagen_poiseuille(phi);
    let g_exact = flow.g;
    let mut rel_errors = Vec::new();
    let mut g_rel_errors = Vec::new();
    let mut flux_spreads = Vec::new();
    let mut max_divs = Vec::new();
    for &s in subdivs {
        let mask = mask_for(&sample, s, true)?;
        let sol = solve_stokes_flux(&mask, phi, solver)?;
        let err = velocity_error_norms(&sol.field, &flow, Region::RoughDomain).max();
        // Normalize by the flow's slice L2 norm.
        let norm = {
            let g = *sol.field.grid();
            let mut acc = 0.0f64;
            for k in 0..g.nr {
                let rc: f64 = g.r_center(k);
                if rc < 1.0 {
                    let v = flow.axial_velocity(rc);
                    acc += rc * g.hr::<f64>() * v * v;
                }
            }
            (2.0 * std::f64::consts::PI * acc).sqrt()
        };
        rel_errors.push(err / norm);
        g_rel_errors.push((sol.mean_gradient - g_exact).abs() / g_exact.abs());
        flux_spreads.push(sol.field.flux_spread() / phi.abs());
        max_divs.push(sol.field.max_divergence());
    }
    let orders = rel_errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(SmoothOutcome {
        eps_den,
        phi,
        subdivs: subdivs.to_vec(),
        rel_errors,
        g_rel_errors,
        orders,
        flux_spreads,
        max_divs,
    })
}
