//! Acceptance thresholds and their evaluation against campaign outcomes.
//! Shared by the acceptance test suite and the `report` verb, so the gate
//! and the rendered summaries can never drift apart.

use serde::{Deserialize, Serialize};

use crate::campaign::{
    ConcentrationOutcome, ConvergenceOutcome, CorrelationOutcome, SaintVenantOutcome,
    SmoothOutcome,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn outcome(id: u32, name: &str, pass: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome { id, name: name.to_string(), pass, detail }
}

/// Criterion 1: smooth-pipe oracle. Velocity error second order
/// (2.0 +- 0.3 between successive grids), finest relative error <= 1e-3,
/// mean gradient matching 8 phi / pi to 1e-3 at the finest grid.
pub fn smooth_oracle(out: &SmoothOutcome) -> CriterionOutcome {
    let orders_ok = out.orders.iter().all(|&o| (1.7..=2.3).contains(&o));
    let finest = *out.rel_errors.last().unwrap();
    let g_finest = *out.g_rel_errors.last().unwrap();
    let pass = orders_ok && finest <= 1e-3 && g_finest <= 1e-3;
    outcome(
        1,
        "smooth-pipe oracle",
        pass,
        format!(
            "orders {:?}, finest rel err {:.3e}, finest G rel err {:.3e}",
            out.orders.iter().map(|o| (o * 100.0).round() / 100.0).collect::<Vec<_>>(),
            finest,
            g_finest
        ),
    )
}

/// Criterion 2: discrete conservation on every recorded solve: relative
/// slice-flux spread <= 1e-10 and per-cell divergence <= the linear
/// tolerance (10 x the solver's divergence target covers the flux scaling).
pub fn conservation(
    spreads_rel: &[f64],
    divs: &[f64],
    div_tol: f64,
) -> CriterionOutcome {
    let worst_spread = spreads_rel.iter().cloned().fold(0.0, f64::max);
    let worst_div = divs.iter().cloned().fold(0.0, f64::max);
    let pass = worst_spread <= 1e-10 && worst_div <= 10.0 * div_tol;
    outcome(
        2,
        "discrete conservation",
        pass,
        format!(
            "worst relative flux spread {:.3e} (<= 1e-10), worst divergence {:.3e} (<= {:.1e}) over {} fields",
            worst_spread,
            worst_div,
            10.0 * div_tol,
            spreads_rel.len()
        ),
    )
}

/// Criterion 3: normalization exactness over >= 100 Bernoulli samples.
pub fn normalization(worst_err: f64, n: usize) -> CriterionOutcome {
    let pass = worst_err <= 1e-8 && n >= 100;
    outcome(
        3,
        "normalization exactness",
        pass,
        format!("worst |flux - pi/2| = {worst_err:.3e} over {n} samples"),
    )
}

/// Criterion 4: Dirichlet wall-law rates.
pub fn dirichlet_rates(out: &ConvergenceOutcome) -> CriterionOutcome {
    let u0_ok = (0.75..=1.25).contains(&out.fit_u0.slope) && out.fit_u0.r_squared >= 0.9;
    let g_ok =
        (0.3..=0.7).contains(&out.fit_grad_u0.slope) && out.fit_grad_u0.r_squared >= 0.9;
    outcome(
        4,
        "Dirichlet wall-law rates",
        u0_ok && g_ok,
        format!(
            "||u-u0|| slope {:.3} (R2 {:.3}), gradient slope {:.3} (R2 {:.3})",
            out.fit_u0.slope,
            out.fit_u0.r_squared,
            out.fit_grad_u0.slope,
            out.fit_grad_u0.r_squared
        ),
    )
}

/// Criterion 5: Navier wall-law rates, and the slip model beating the
/// laminar approximation at every eps <= 1/16.
pub fn navier_rates(out: &ConvergenceOutcome) -> CriterionOutcome {
    let un_ok = (1.25..=1.75).contains(&out.fit_un.slope) && out.fit_un.r_squared >= 0.9;
    let beats = out
        .groups
        .iter()
        .filter(|g| g.eps_den >= 16)
        .all(|g| g.mean_err_un < g.mean_err_u0);
    outcome(
        5,
        "Navier wall-law rates",
        un_ok && beats,
        format!(
            "||u-uN|| slope {:.3} (R2 {:.3}); uN beats u0 at eps<=1/16: {}",
            out.fit_un.slope, out.fit_un.r_squared, beats
        ),
    )
}

/// Criterion 6: slip-model quality: |beta + 2 alpha| <= 5 eps per eps and
/// the profile misfit decaying at second order.
pub fn alpha_quality(out: &ConvergenceOutcome) -> CriterionOutcome {
    let flux_ok = out.groups.iter().all(|g| {
        (g.model.beta + 2.0 * g.model.alpha).abs() <= 5.0 * g.epsilon
    });
    let misfit_ok =
        (1.6..=2.4).contains(&out.fit_misfit.slope) && out.fit_misfit.r_squared >= 0.9;
    let gauges: Vec<f64> = out
        .groups
        .iter()
        .map(|g| (g.model.beta + 2.0 * g.model.alpha).abs() / g.epsilon)
        .collect();
    outcome(
        6,
        "slip-model quality",
        flux_ok && misfit_ok,
        format!(
            "|beta+2alpha|/eps = {:?} (<= 5), misfit slope {:.3} (R2 {:.3})",
            gauges.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            out.fit_misfit.slope,
            out.fit_misfit.r_squared
        ),
    )
}

/// Criterion 7: refined Poiseuille law: deviation slope in [1.1, 1.9] and
/// the refined prediction beating the classical one at eps <= 1/16.
pub fn poiseuille_law(out: &ConvergenceOutcome) -> CriterionOutcome {
    let slope_ok = (1.1..=1.9).contains(&out.fit_pressure.slope);
    let beats = out
        .groups
        .iter()
        .filter(|g| g.eps_den >= 16)
        .all(|g| g.mean_abs_dp_refined < g.mean_abs_dp_classical);
    outcome(
        7,
        "refined Poiseuille law",
        slope_ok && beats,
        format!(
            "|dp - refined| slope {:.3} (R2 {:.3}); refined beats classical at eps<=1/16: {}",
            out.fit_pressure.slope, out.fit_pressure.r_squared, beats
        ),
    )
}

/// Criterion 8: Saint-Venant decay on smooth and rough T = 8 pipes.
pub fn saint_venant(out: &SaintVenantOutcome) -> CriterionOutcome {
    let fits_ok = !out.smooth.trivial
        && !out.rough.trivial
        && out.smooth.rate > 0.0
        && out.rough.rate > 0.0
        && out.smooth.r_squared >= 0.95
        && out.rough.r_squared >= 0.95;
    let ratio_ok = (0.5..=2.0).contains(&out.rate_ratio);
    let mono = out.smooth_monotone && out.rough_monotone;
    outcome(
        8,
        "Saint-Venant decay",
        fits_ok && ratio_ok && mono,
        format!(
            "rates smooth {:.3} / rough {:.3} (ratio {:.3}), R2 {:.4}/{:.4}, monotone {}",
            out.smooth.rate,
            out.rough.rate,
            out.rate_ratio,
            out.smooth.r_squared,
            out.rough.r_squared,
            mono
        ),
    )
}

/// Criterion 9: correlation decay (R^2 >= 0.9 beyond 4 eps at the decay
/// eps) and peak amplitude scaling eps^3 within +-0.7.
pub fn correlation(out: &CorrelationOutcome) -> CriterionOutcome {
    let decays_ok = out
        .runs
        .iter()
        .filter(|r| r.decay_r2.is_some())
        .all(|r| r.decay_slope.unwrap_or(0.0) < 0.0 && r.decay_r2.unwrap_or(0.0) >= 0.9);
    let n_decays = out.runs.iter().filter(|r| r.decay_r2.is_some()).count();
    let amp_ok = (2.3..=3.7).contains(&out.amplitude_slope);
    outcome(
        9,
        "correlation decay",
        decays_ok && n_decays >= 2 && amp_ok,
        format!(
            "decay fits {:?}, amplitude slope {:.3} (R2 {:.3})",
            out.runs
                .iter()
                .filter_map(|r| r.decay_r2.map(|q| (r.eps_den, (q * 1000.0).round() / 1000.0)))
                .collect::<Vec<_>>(),
            out.amplitude_slope,
            out.amplitude_r2
        ),
    )
}

/// Criterion 10: concentration: sd(X) eps^{-3/2} within a factor 2 across
/// the sweep, and the rescaled empirical MGF finite on [0, 3].
pub fn concentration(out: &ConcentrationOutcome, min_n: usize) -> CriterionOutcome {
    let ratio_ok = out.rescaled_sd_ratio <= 2.0;
    let mgf_ok = out
        .per_eps
        .iter()
        .all(|(_, s, _)| s.mgf.iter().all(|(_, v)| v.is_finite()));
    let n_ok = out.per_eps.iter().all(|(_, s, _)| s.xs.len() >= min_n);
    outcome(
        10,
        "concentration of fluctuations",
        ratio_ok && mgf_ok && n_ok,
        format!(
            "rescaled sd ratio {:.3} (<= 2), MGF finite {}, ensembles {:?}",
            out.rescaled_sd_ratio,
            mgf_ok,
            out.per_eps.iter().map(|(d, s, _)| (*d, s.xs.len())).collect::<Vec<_>>()
        ),
    )
}
