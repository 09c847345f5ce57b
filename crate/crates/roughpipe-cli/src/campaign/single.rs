//! Single-artifact verbs: sample generation, one solve, one boundary layer.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use roughpipe_core::bl::compute_boundary_layer;
use roughpipe_core::geometry::{validate_thickness, RoughPipeSample, ThicknessReport};
use roughpipe_core::solver::{solve_ns_flux, solve_stokes_flux};
use roughpipe_core::SolverConfig64;

use super::ensemble::{make_sample, mask_for};
use crate::config::Family;

pub fn sample_verb(
    family: Family,
    eps_den: u32,
    period: u32,
    seed: u64,
    axisym: bool,
    out: &Path,
) -> anyhow::Result<(PathBuf, ThicknessReport)> {
    let sample = make_sample(family, eps_den, period * eps_den, seed, axisym)?;
    let report = validate_thickness(&sample);
    std::fs::create_dir_all(out)?;
    let path = out.join("sample.json");
    std::fs::write(&path, sample.to_json()?)?;
    Ok((path, report))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub flux: f64,
    pub mean_gradient: f64,
    pub flux_spread: f64,
    pub max_divergence: f64,
    pub linear_iters: usize,
    pub picard_iters: usize,
    pub nonlinear: bool,
}

/// Solves one sample (Stokes, or Navier-Stokes when `nonlinear`) at flux phi
/// and dumps the field plus a solve report.
pub fn solve_verb(
    sample_path: &Path,
    subdiv: u32,
    axisym: bool,
    phi: f64,
    nonlinear: bool,
    solver: &SolverConfig64,
    out: &Path,
) -> anyhow::Result<(PathBuf, SolveReport)> {
    let sample = RoughPipeSample::from_json(&std::fs::read_to_string(sample_path)?)?;
    let mask = mask_for(&sample, subdiv, axisym)?;
    let sol = if nonlinear {
        solve_ns_flux(&mask, phi, solver)?
    } else {
        solve_stokes_flux(&mask, phi, solver)?
    };
    let report = SolveReport {
        flux: sol.flux,
        mean_gradient: sol.mean_gradient,
        flux_spread: sol.field.flux_spread(),
        max_divergence: sol.field.max_divergence(),
        linear_iters: sol.linear_iters,
        picard_iters: sol.picard_iters,
        nonlinear,
    };
    std::fs::create_dir_all(out)?;
    let path = out.join("field.json");
    std::fs::write(&path, serde_json::to_string(&sol.field.to_dump(sol.flux))?)?;
    std::fs::write(out.join("solve_report.json"), serde_json::to_string_pretty(&report)?)?;
    Ok((path, report))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizationReport {
    pub normalization_flux: f64,
    pub target: f64,
    pub deviation: f64,
    pub spread: f64,
    pub interior_sup: f64,
    pub collar_rms_max: f64,
    pub l2: f64,
    pub grad_l2: f64,
    pub weighted_grad_l2: f64,
}

/// Computes one boundary layer and dumps the flow field plus the
/// normalization/size report.
pub fn bl_verb(
    sample_path: &Path,
    subdiv: u32,
    axisym: bool,
    solver: &SolverConfig64,
    out: &Path,
) -> anyhow::Result<(PathBuf, NormalizationReport)> {
    let sample = RoughPipeSample::from_json(&std::fs::read_to_string(sample_path)?)?;
    let mask = mask_for(&sample, subdiv, axisym)?;
    let bl = compute_boundary_layer(&mask, solver, sample.seed)?;
    let target = std::f64::consts::PI / 2.0;
    let report = NormalizationReport {
        normalization_flux: bl.normalization_flux,
        target,
        deviation: (bl.normalization_flux - target).abs(),
        spread: bl.normalization_spread,
        interior_sup: bl.size.interior_sup,
        collar_rms_max: bl.size.collar_rms_max,
        l2: bl.size.l2,
        grad_l2: bl.size.grad_l2,
        weighted_grad_l2: bl.size.weighted_grad_l2,
    };
    std::fs::create_dir_all(out)?;
    let path = out.join("bl_field.json");
    let dump = bl.flow.to_dump(bl.normalization_flux);
    std::fs::write(&path, serde_json::to_string(&dump)?)?;
    std::fs::write(
        out.join("normalization_report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    Ok((path, report))
}
