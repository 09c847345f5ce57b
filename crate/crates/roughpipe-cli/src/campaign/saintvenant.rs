//! Saint-Venant decay experiment: localized zero-flux forcing on long pipes,
//! smooth and rough, with semilog fits of the tail energy.

use serde::{Deserialize, Serialize};

use roughpipe_core::geometry::{sample_bernoulli, smooth_sample};
use roughpipe_core::solver::Forcing;
use roughpipe_core::verify::{saint_venant_decay, tail_monotone, DecayFit};
use roughpipe_core::SolverConfig64;

use super::ensemble::mask_for;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaintVenantOutcome {
    pub period: u32,
    pub eps_den: u32,
    pub smooth: DecayFit,
    pub rough: DecayFit,
    /// Ratio of the rough to the smooth decay rate.
    pub rate_ratio: f64,
    pub smooth_monotone: bool,
    pub rough_monotone: bool,
    pub flux_abs: (f64, f64),
}

/// Runs the experiment on a smooth and an eps-rough pipe of period T
/// (axisymmetric), forcing the slab x1 in [0, eps).
pub fn saint_venant_campaign(
    eps_den: u32,
    period: u32,
    subdiv: u32,
    seed: u64,
    solver: &SolverConfig64,
) -> anyhow::Result<SaintVenantOutcome> {
    let eps = 1.0 / eps_den as f64;
    let forcing = Forcing::AxialSlab { from: 0.0, to: eps };
    let center = eps / 2.0;

    let smooth = smooth_sample(eps_den, period * eps_den)?;
    let mask_s = mask_for(&smooth, subdiv, true)?;
    let (sol_s, fit_s) = saint_venant_decay(&mask_s, &forcing, center, solver)?;

    let rough = sample_bernoulli(eps_den, period * eps_den, seed, true)?;
    let mask_r = mask_for(&rough, subdiv, true)?;
    let (sol_r, fit_r) = saint_venant_decay(&mask_r, &forcing, center, solver)?;

    let ratio = if fit_s.rate != 0.0 { fit_r.rate / fit_s.rate } else { f64::NAN };
    Ok(SaintVenantOutcome {
        period,
        eps_den,
        rate_ratio: ratio,
        smooth_monotone: tail_monotone(&fit_s.energies),
        rough_monotone: tail_monotone(&fit_r.energies),
        flux_abs: (
            sol_s.field.flux_at_station(0).abs(),
            sol_r.field.flux_at_station(0).abs(),
        ),
        smooth: fit_s,
        rough: fit_r,
    })
}
