//! Ensemble campaigns over the eps sweep: wall-law convergence rates,
//! slip-model fits, refined Poiseuille law, and concentration statistics.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use roughpipe_core::bl::{compute_boundary_layer, BoundaryLayerField};
use roughpipe_core::effective::{
    build_navier_approx, estimate_alpha, poiseuille_prediction, EffectiveModel,
};
use roughpipe_core::geometry::{
    build_mask, sample_bernoulli, sample_poisson, smooth_sample, CylGrid, RoughPipeSample,
    SolidMask,
};
use roughpipe_core::solver::{solve_ns_flux, SolverConfig};
use roughpipe_core::verify::{
    approximation_error, concentration_stats, fit_rate, pressure_drop, wall_law_errors, RateFit,
    TailDiagnostics,
};

use crate::config::{group_seed, sample_seed, thread_pool, Family, SweepConfig};

/// Per-sample scalar outcomes of a convergence run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub seed: u64,
    /// uloc (max over unit windows) slice errors.
    pub err_u0: f64,
    pub err_un: f64,
    pub err_grad_u0: f64,
    pub err_dgrad_un: f64,
    /// || u - (u0 - (2 phi/pi) v_bl) ||, the nonlinear remainder diagnostic.
    pub err_app: f64,
    /// Measured pressure drop over ell (interior-disk average / axis value).
    pub dp_disk: f64,
    pub dp_axis: f64,
    /// Conservation diagnostics of the nonlinear solve.
    pub flux_spread: f64,
    pub max_div: f64,
    pub picard_iters: usize,
}

/// One eps group of a convergence campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsGroup {
    pub eps_den: u32,
    pub epsilon: f64,
    pub records: Vec<SampleRecord>,
    pub failures: Vec<String>,
    pub model: EffectiveModel<f64>,
    pub mean_err_u0: f64,
    pub sd_err_u0: f64,
    pub mean_err_un: f64,
    pub sd_err_un: f64,
    pub mean_err_grad_u0: f64,
    pub mean_err_dgrad_un: f64,
    pub mean_err_app: f64,
    /// Mean absolute deviation of the measured pressure drop from the
    /// refined and the classical predictions.
    pub mean_abs_dp_refined: f64,
    pub mean_abs_dp_classical: f64,
    pub ell: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceOutcome {
    pub groups: Vec<EpsGroup>,
    pub fit_u0: RateFit,
    pub fit_grad_u0: RateFit,
    pub fit_un: RateFit,
    pub fit_dgrad_un: RateFit,
    /// Slope of the alpha-model profile misfit ||mean - eps alpha (1-2r^2)||.
    pub fit_misfit: RateFit,
    /// Slope of mean |dp - refined prediction|.
    pub fit_pressure: RateFit,
}

pub(crate) fn make_sample(
    family: Family,
    eps_den: u32,
    period_cells: u32,
    seed: u64,
    axisym: bool,
) -> roughpipe_core::Result<RoughPipeSample> {
    match family {
        Family::Bernoulli => sample_bernoulli(eps_den, period_cells, seed, axisym),
        Family::Poisson => sample_poisson(eps_den, period_cells, seed),
        Family::Smooth => smooth_sample(eps_den, period_cells),
    }
}

pub(crate) fn mask_for(
    sample: &RoughPipeSample,
    subdiv: u32,
    axisym: bool,
) -> roughpipe_core::Result<Arc<SolidMask>> {
    let grid = CylGrid::new(sample.eps_den, sample.period_cells, subdiv, axisym)?;
    Ok(Arc::new(build_mask(sample, &grid)?))
}

/// Computes the boundary-layer ensemble of one eps group; samples that fail
/// are recorded and skipped (crash isolation).
fn bl_ensemble(
    cfg: &SweepConfig,
    eps_den: u32,
) -> (Vec<(usize, BoundaryLayerField<f64>)>, Vec<String>) {
    let gseed = group_seed(cfg.base_seed, eps_den);
    let period_cells = cfg.period * eps_den;
    let pool = thread_pool(cfg.workers);
    let results: Vec<(usize, Result<BoundaryLayerField<f64>, String>)> = pool.install(|| {
        (0..cfg.ensemble)
            .into_par_iter()
            .map(|n| {
                let seed = sample_seed(gseed, n);
                let run = || -> roughpipe_core::Result<BoundaryLayerField<f64>> {
                    let sample =
                        make_sample(cfg.family, eps_den, period_cells, seed, cfg.axisym)?;
                    let mask = mask_for(&sample, cfg.subdiv, cfg.axisym)?;
                    compute_boundary_layer(&mask, &cfg.solver, seed)
                };
                (n, run().map_err(|e| format!("sample {n} (seed {seed}): {e}")))
            })
            .collect()
    });
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(bl) => ok.push((n, bl)),
            Err(e) => failures.push(e),
        }
    }
    ok.sort_by_key(|(n, _)| *n);
    (ok, failures)
}

/// Runs one eps group of the convergence campaign: per sample, the flux-pi/2
/// boundary layer and the nonlinear solve at the configured flux, then the
/// wall-law error functionals against the fitted Navier approximation.
fn convergence_group(cfg: &SweepConfig, eps_den: u32) -> anyhow::Result<EpsGroup> {
    let gseed = group_seed(cfg.base_seed, eps_den);
    let period_cells = cfg.period * eps_den;
    let epsilon = 1.0 / eps_den as f64;
    let phi = cfg.phi;
    let ell = cfg.ell.unwrap_or(cfg.period as f64 / 2.0);
    let pool = thread_pool(cfg.workers);

    type PairResult =
        Result<(BoundaryLayerField<f64>, roughpipe_core::FlowSolution64), String>;
    let results: Vec<(usize, u64, PairResult)> = pool.install(|| {
        (0..cfg.ensemble)
            .into_par_iter()
            .map(|n| {
                let seed = sample_seed(gseed, n);
                let run = || -> roughpipe_core::Result<_> {
                    let sample =
                        make_sample(cfg.family, eps_den, period_cells, seed, cfg.axisym)?;
                    let mask = mask_for(&sample, cfg.subdiv, cfg.axisym)?;
                    let bl = compute_boundary_layer(&mask, &cfg.solver, seed)?;
                    let ns = solve_ns_flux(&mask, phi, &cfg.solver)?;
                    Ok((bl, ns))
                };
                (n, seed, run().map_err(|e| format!("sample {n} (seed {seed}): {e}")))
            })
            .collect()
    });

    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (n, seed, r) in results {
        match r {
            Ok(p) => pairs.push((n, seed, p)),
            Err(e) => failures.push(e),
        }
    }
    pairs.sort_by_key(|(n, _, _)| *n);
    if pairs.is_empty() {
        anyhow::bail!("all samples of eps = 1/{eps_den} failed: {failures:?}");
    }

    let bls: Vec<&BoundaryLayerField<f64>> = pairs.iter().map(|(_, _, (bl, _))| bl).collect();
    let owned: Vec<BoundaryLayerField<f64>> = bls.iter().map(|b| (*b).clone()).collect();
    let model = estimate_alpha(&owned)?;
    let navier = build_navier_approx(phi, epsilon, model.alpha);

    let mut records = Vec::new();
    for (n, seed, (bl, ns)) in &pairs {
        let errs = wall_law_errors(ns, &navier, *seed);
        let app = approximation_error(ns, bl, phi).max();
        let dp = pressure_drop(ns, ell)?;
        records.push(SampleRecord {
            index: *n,
            seed: *seed,
            err_u0: errs.max_err_u0,
            err_un: errs.max_err_un,
            err_grad_u0: errs.max_err_grad_u0,
            err_dgrad_un: errs.max_err_dgrad_un,
            err_app: app,
            dp_disk: dp.disk_average,
            dp_axis: dp.axis_value,
            flux_spread: ns.field.flux_spread(),
            max_div: ns.field.max_divergence(),
            picard_iters: ns.picard_iters,
        });
    }

    let mean = |f: &dyn Fn(&SampleRecord) -> f64| -> f64 {
        records.iter().map(|r| f(r)).sum::<f64>() / records.len() as f64
    };
    let sd = |f: &dyn Fn(&SampleRecord) -> f64, m: f64| -> f64 {
        if records.len() < 2 {
            return 0.0;
        }
        (records.iter().map(|r| (f(r) - m).powi(2)).sum::<f64>() / (records.len() - 1) as f64)
            .sqrt()
    };
    let refined = poiseuille_prediction(phi, ell, epsilon, model.alpha);
    let classical = poiseuille_prediction(phi, ell, epsilon, 0.0);
    let mean_err_u0 = mean(&|r| r.err_u0);
    let mean_err_un = mean(&|r| r.err_un);
    Ok(EpsGroup {
        eps_den,
        epsilon,
        failures,
        mean_err_u0,
        sd_err_u0: sd(&|r| r.err_u0, mean_err_u0),
        mean_err_un,
        sd_err_un: sd(&|r| r.err_un, mean_err_un),
        mean_err_grad_u0: mean(&|r| r.err_grad_u0),
        mean_err_dgrad_un: mean(&|r| r.err_dgrad_un),
        mean_err_app: mean(&|r| r.err_app),
        mean_abs_dp_refined: mean(&|r| (r.dp_disk - refined).abs()),
        mean_abs_dp_classical: mean(&|r| (r.dp_disk - classical).abs()),
        model,
        records,
        ell,
    })
}

/// The eps-sweep convergence campaign (wall laws, slip model, pressure law).
pub fn convergence_campaign(cfg: &SweepConfig) -> anyhow::Result<ConvergenceOutcome> {
    let mut groups = Vec::new();
    for &eps_den in &cfg.eps_dens {
        groups.push(convergence_group(cfg, eps_den)?);
    }
    let pts = |f: &dyn Fn(&EpsGroup) -> f64| -> Vec<(f64, f64)> {
        groups.iter().map(|g| (g.epsilon, f(g))).collect()
    };
    Ok(ConvergenceOutcome {
        fit_u0: fit_rate(&pts(&|g| g.mean_err_u0))?,
        fit_grad_u0: fit_rate(&pts(&|g| g.mean_err_grad_u0))?,
        fit_un: fit_rate(&pts(&|g| g.mean_err_un))?,
        fit_dgrad_un: fit_rate(&pts(&|g| g.mean_err_dgrad_un))?,
        fit_misfit: fit_rate(&pts(&|g| g.model.u1_misfit))?,
        fit_pressure: fit_rate(&pts(&|g| g.mean_abs_dp_refined))?,
        groups,
    })
}

/// Concentration campaign: boundary-layer ensembles per eps and the tail
/// diagnostics of the slice fluctuation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationOutcome {
    pub per_eps: Vec<(u32, TailDiagnostics<f64>, EffectiveModel<f64>)>,
    pub failures: Vec<String>,
    /// Max/min ratio of sd(X) eps^{-3/2} across the sweep.
    pub rescaled_sd_ratio: f64,
    /// Normalization check: worst |Phi[V] - pi/2| across all samples.
    pub worst_normalization_error: f64,
}

pub fn concentration_campaign(cfg: &SweepConfig) -> anyhow::Result<ConcentrationOutcome> {
    let mut per_eps = Vec::new();
    let mut failures = Vec::new();
    let mut worst_norm = 0.0f64;
    for &eps_den in &cfg.eps_dens {
        let (pairs, fails) = bl_ensemble(cfg, eps_den);
        failures.extend(fails);
        let ensemble: Vec<BoundaryLayerField<f64>> =
            pairs.into_iter().map(|(_, bl)| bl).collect();
        for bl in &ensemble {
            let err = (bl.normalization_flux - std::f64::consts::PI / 2.0).abs();
            worst_norm = worst_norm.max(err);
        }
        let stats = concentration_stats(&ensemble)?;
        let model = estimate_alpha(&ensemble)?;
        per_eps.push((eps_den, stats, model));
    }
    let sds: Vec<f64> = per_eps.iter().map(|(_, s, _)| s.rescaled_sd).collect();
    let ratio = sds.iter().cloned().fold(f64::MIN, f64::max)
        / sds.iter().cloned().fold(f64::MAX, f64::min);
    Ok(ConcentrationOutcome {
        per_eps,
        failures,
        rescaled_sd_ratio: ratio,
        worst_normalization_error: worst_norm,
    })
}

/// Solver configuration consistency: campaigns run with one config.
pub(crate) fn _assert_solver_config(_: &SolverConfig<f64>) {}
