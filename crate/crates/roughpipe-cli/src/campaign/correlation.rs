//! Single-cell perturbation experiment: axial decay and eps^3 amplitude
//! scaling of the boundary-layer sensitivity. Inherently 3D: the perturbed
//! cell is one true boundary cell.

use serde::{Deserialize, Serialize};

use roughpipe_core::bl::{correlation_experiment, CorrelationProfile};
use roughpipe_core::geometry::{sample_bernoulli, CylGrid};
use roughpipe_core::verify::ols;
use roughpipe_core::SolverConfig64;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRun {
    pub eps_den: u32,
    pub period: u32,
    pub profile: CorrelationProfile<f64>,
    /// Semilog fit of the max profile beyond distance 4 eps: slope and R^2
    /// (absent when the run only feeds the amplitude sweep).
    pub decay_slope: Option<f64>,
    pub decay_r2: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationOutcome {
    pub runs: Vec<CorrelationRun>,
    /// Log-log slope of the peak interior amplitude against eps.
    pub amplitude_slope: f64,
    pub amplitude_r2: f64,
}

/// Fits log(max profile) against the axial offset on [4 eps, T/2), dropping
/// bins below the solver noise floor.
fn fit_profile(profile: &CorrelationProfile<f64>, eps: f64, period: f64) -> Option<(f64, f64)> {
    let floor = profile.peak_amplitude * 1e-9 + 1e-14;
    let pts: Vec<(f64, f64)> = profile
        .offsets
        .iter()
        .zip(&profile.max_profile)
        .filter(|&(&d, &v)| d >= 4.0 * eps && d < period / 2.0 && v > floor)
        .map(|(&d, &v)| (d, v.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let (slope, _, r2) = ols(&pts);
    Some((slope, r2))
}

/// Runs the perturbation experiment per eps. `decay_dens` get the semilog
/// decay fit (longer pipes); every run feeds the amplitude sweep.
pub fn correlation_campaign(
    runs: &[(u32, u32)],
    decay_dens: &[u32],
    subdiv: u32,
    base_seed: u64,
    solver: &SolverConfig64,
) -> anyhow::Result<CorrelationOutcome> {
    let mut out_runs = Vec::new();
    let mut amp_pts = Vec::new();
    for &(eps_den, period) in runs {
        let eps = 1.0 / eps_den as f64;
        let period_cells = period * eps_den;
        let sample = sample_bernoulli(eps_den, period_cells, base_seed ^ eps_den as u64, false)?;
        let grid = CylGrid::new(eps_den, period_cells, subdiv, false)?;
        // Perturb the cell at the axial midpoint.
        let cell = (period_cells as usize / 2, eps_den as usize / 2);
        let profile = correlation_experiment(&sample, cell, &grid, solver)?;
        amp_pts.push((eps, profile.peak_amplitude));
        let fit = if decay_dens.contains(&eps_den) {
            fit_profile(&profile, eps, period as f64)
        } else {
            None
        };
        out_runs.push(CorrelationRun {
            eps_den,
            period,
            profile,
            decay_slope: fit.map(|f| f.0),
            decay_r2: fit.map(|f| f.1),
        });
    }
    let logs: Vec<(f64, f64)> =
        amp_pts.iter().map(|&(e, a)| (e.ln(), a.max(1e-300).ln())).collect();
    let (slope, _, r2) = ols(&logs);
    Ok(CorrelationOutcome { runs: out_runs, amplitude_slope: slope, amplitude_r2: r2 })
}
