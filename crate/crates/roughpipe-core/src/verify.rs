//! Error functionals, regression fits, decay experiments, and concentration
//! statistics for the verification campaigns.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bl::BoundaryLayerField;
use crate::effective::{NavierApprox, QuadraticPipeFlow};
use crate::error::Error;
use crate::geometry::{FaceState, SolidMask};
use crate::scalar::{sc, Scalar};
use crate::solver::samples::{for_each_grad_sample, u1_idx, ur_idx, GradKind};
use crate::solver::{solve_stokes_forced, FlowSolution, Forcing, SolverConfig, StaggeredFlowField};
use crate::Result;

/// Periodic axial distance.
pub fn axial_dist<T: Scalar>(a: T, b: T, period: T) -> T {
    let mut d = (a - b) % period;
    if d < T::zero() {
        d += period;
    }
    d.min(period - d)
}

/// Gradient energy of the field beyond each axial distance `t` from
/// `center_x1` (periodic), using the solver's own gradient samples.
pub fn gradient_tail_energy<T: Scalar>(
    field: &StaggeredFlowField<T>,
    center_x1: T,
    ts: &[T],
) -> Vec<T> {
    let period: T = field.grid().period();
    let mut out = vec![T::zero(); ts.len()];
    for_each_grad_sample::<T, _>(&field.mask, |s| {
        let d = axial_dist(s.x1 % period, center_x1, period);
        let v = s.eval(&field.u1, &field.uth, &field.ur);
        let e = s.weight * v * v;
        for (acc, &t) in out.iter_mut().zip(ts) {
            if d >= t {
                *acc += e;
            }
        }
    });
    out
}

/// Restriction of slice norms: the full rough domain or the unit cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    RoughDomain,
    UnitCylinder,
}

/// Per-window norms, windows being the unit axial intervals [k, k+1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceNorms<T> {
    pub per_window: Vec<T>,
}

impl<T: Scalar> SliceNorms<T> {
    pub fn max(&self) -> T {
        self.per_window.iter().fold(T::zero(), |m, v| m.max(*v))
    }
}

fn n_windows<T: Scalar>(field: &StaggeredFlowField<T>) -> usize {
    (field.grid().period::<T>().as_f64().floor() as usize).max(1)
}

fn window_of<T: Scalar>(x1: T, period: T, n: usize) -> usize {
    let x = ((x1 % period) + period) % period;
    (x.as_f64().floor() as usize).min(n - 1)
}

/// L2 norms per unit window of `u - flow` over face control volumes.
pub fn velocity_error_norms<T: Scalar>(
    field: &StaggeredFlowField<T>,
    flow: &QuadraticPipeFlow<T>,
    region: Region,
) -> SliceNorms<T> {
    let g = *field.grid();
    let period: T = g.period();
    let n = n_windows(field);
    let mut acc = vec![T::zero(); n];
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let unit = T::one();
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                let rc: T = g.r_center(k);
                let in_region = region == Region::RoughDomain || rc < unit;
                if in_region {
                    if field.mask.u1_state(i, j, k) != FaceState::Outside {
                        let w = h1 * hth * hr * rc;
                        let d = field.u1_at(i, j, k) - flow.axial_velocity(rc);
                        acc[window_of(g.x_face::<T>(i), period, n)] += w * d * d;
                    }
                    if field.mask.uth_state(i, j, k) != FaceState::Outside {
                        let w = h1 * hth * hr * rc;
                        let d = field.uth_at(i, j, k);
                        acc[window_of(g.x_center::<T>(i), period, n)] += w * d * d;
                    }
                }
                if k >= 1 {
                    let rf: T = g.r_face(k);
                    if (region == Region::RoughDomain || rf < unit)
                        && field.mask.ur_state(i, j, k) != FaceState::Outside
                    {
                        let w = h1 * hth * hr * rf;
                        let d = field.ur_at(i, j, k);
                        acc[window_of(g.x_center::<T>(i), period, n)] += w * d * d;
                    }
                }
            }
        }
    }
    SliceNorms { per_window: acc.into_iter().map(|v| v.sqrt()).collect() }
}

/// L2 norms per unit window of `grad u - grad flow`, optionally weighted by
/// delta(x) = 1 - r (clipped at the unit wall).
pub fn gradient_error_norms<T: Scalar>(
    field: &StaggeredFlowField<T>,
    flow: &QuadraticPipeFlow<T>,
    region: Region,
    delta_weight: bool,
) -> SliceNorms<T> {
    let g = *field.grid();
    let period: T = g.period();
    let n = n_windows(field);
    let mut acc = vec![T::zero(); n];
    let unit = T::one();
    for_each_grad_sample::<T, _>(&field.mask, |s| {
        if region == Region::UnitCylinder && s.r >= unit {
            return;
        }
        let exact = match s.kind {
            GradKind::DrU1 => flow.axial_velocity_dr(s.r),
            _ => T::zero(),
        };
        let mut d = s.eval(&field.u1, &field.uth, &field.ur) - exact;
        if delta_weight {
            d *= (unit - s.r).max(T::zero());
        }
        acc[window_of(s.x1, period, n)] += s.weight * d * d;
    });
    SliceNorms { per_window: acc.into_iter().map(|v| v.sqrt()).collect() }
}

/// Slice error report of one solved flow against the Dirichlet (laminar)
/// and Navier (slip-corrected) approximations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceErrorReport<T> {
    pub phi: T,
    pub epsilon: T,
    pub seed: u64,
    /// || u - u0 ||_{L2} per window over the rough domain.
    pub err_u0: Vec<T>,
    /// || u - uN ||_{L2} per window over the unit cylinder.
    pub err_un: Vec<T>,
    /// || grad u - grad u0 ||_{L2} per window over the rough domain.
    pub err_grad_u0: Vec<T>,
    /// || delta (grad u - grad uN) ||_{L2} per window, unit cylinder.
    pub err_dgrad_un: Vec<T>,
    pub max_err_u0: T,
    pub max_err_un: T,
    pub max_err_grad_u0: T,
    pub max_err_dgrad_un: T,
}

/// Wall-law error functionals of a solution against the analytic laminar
/// flow and the fitted Navier approximation.
pub fn wall_law_errors<T: Scalar>(
    solution: &FlowSolution<T>,
    navier: &NavierApprox<T>,
    seed: u64,
) -> SliceErrorReport<T> {
    let u0 = navier.dirichlet_flow();
    let un = navier.navier_flow();
    let e_u0 = velocity_error_norms(&solution.field, &u0, Region::RoughDomain);
    let e_un = velocity_error_norms(&solution.field, &un, Region::UnitCylinder);
    let e_g0 = gradient_error_norms(&solution.field, &u0, Region::RoughDomain, false);
    let e_gn = gradient_error_norms(&solution.field, &un, Region::UnitCylinder, true);
    SliceErrorReport {
        phi: navier.phi,
        epsilon: navier.epsilon,
        seed,
        max_err_u0: e_u0.max(),
        max_err_un: e_un.max(),
        max_err_grad_u0: e_g0.max(),
        max_err_dgrad_un: e_gn.max(),
        err_u0: e_u0.per_window,
        err_un: e_un.per_window,
        err_grad_u0: e_g0.per_window,
        err_dgrad_un: e_gn.per_window,
    }
}

/// Per-window || u - (u0 - (2 phi/pi) v_bl) || over the rough domain: how
/// far the solved flow sits from its boundary-layer approximation (the
/// nonlinear remainder; O(phi^2 eps) in the small-flux regime).
pub fn approximation_error<T: Scalar>(
    solution: &FlowSolution<T>,
    bl: &BoundaryLayerField<T>,
    phi: T,
) -> SliceNorms<T> {
    let field = &solution.field;
    let g = *field.grid();
    let period: T = g.period();
    let n = n_windows(field);
    let mut acc = vec![T::zero(); n];
    let c = sc::<T>(2.0) * phi / sc::<T>(std::f64::consts::PI);
    let u0 = crate::effective::hagen_poiseuille(phi);
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                let rc: T = g.r_center(k);
                let idx = u1_idx(g.nth, g.nr, i, j, k);
                if field.mask.u1_state(i, j, k) != FaceState::Outside {
                    let w = h1 * hth * hr * rc;
                    let app = u0.axial_velocity(rc) - c * bl.v1[idx];
                    let d = field.u1[idx] - app;
                    acc[window_of(g.x_face::<T>(i), period, n)] += w * d * d;
                }
                if field.mask.uth_state(i, j, k) != FaceState::Outside {
                    let w = h1 * hth * hr * rc;
                    let d = field.uth[idx] + c * bl.vth[idx];
                    acc[window_of(g.x_center::<T>(i), period, n)] += w * d * d;
                }
                if k >= 1 && field.mask.ur_state(i, j, k) != FaceState::Outside {
                    let rf: T = g.r_face(k);
                    let ridx = ur_idx(g.nth, g.nr, i, j, k);
                    let w = h1 * hth * hr * rf;
                    let d = field.ur[ridx] + c * bl.vr[ridx];
                    acc[window_of(g.x_center::<T>(i), period, n)] += w * d * d;
                }
            }
        }
    }
    SliceNorms { per_window: acc.into_iter().map(|v| v.sqrt()).collect() }
}

/// Ordinary least squares of log(error) against log(eps).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The fitted (log eps, log error) pairs.
    pub points: Vec<(f64, f64)>,
}

/// Log-log rate fit over (eps, error) pairs; needs >= 3 positive errors.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::BadFitInput(format!("{} points", points.len())));
    }
    if points.iter().any(|&(e, err)| e <= 0.0 || err <= 0.0) {
        return Err(Error::BadFitInput("nonpositive value".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(e, v)| (e.ln(), v.ln())).collect();
    let (slope, intercept, r2) = ols(&logs);
    Ok(RateFit { slope, intercept, r_squared: r2, points: logs })
}

/// Least squares y = a x + b; returns (a, b, R^2).
pub fn ols(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = if denom == 0.0 { 0.0 } else { (n * sxy - sx * sy) / denom };
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

/// Pressure drop between stations 0 and `ell`: the pressure is sampled as
/// the area-average over the interior disk r <= 1/2 (the axis-cell value is
/// reported alongside); includes the -G x1 drive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PressureDrop<T> {
    pub disk_average: T,
    pub axis_value: T,
}

pub fn pressure_drop<T: Scalar>(solution: &FlowSolution<T>, ell: T) -> Result<PressureDrop<T>> {
    let f = &solution.field;
    let g = *f.grid();
    let h1: T = g.h1();
    let period: T = g.period();
    if ell < T::zero() || ell > period / sc(2.0) {
        return Err(Error::InvalidArgument("ell must lie in [0, T/2]".into()));
    }
    let steps = (ell / h1).as_f64();
    if (steps - steps.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument("ell must be a multiple of h1".into()));
    }
    if ell == T::zero() {
        return Ok(PressureDrop { disk_average: T::zero(), axis_value: T::zero() });
    }
    let half = sc::<T>(0.5);
    let station = |x: T| -> (T, T) {
        // Average the two cell layers adjacent to the face at x.
        let i_right = ((x / h1).as_f64().round() as usize) % g.n1;
        let i_left = g.wrap_i(i_right as isize - 1);
        let mut disk = T::zero();
        let mut axis = T::zero();
        for i in [i_left, i_right] {
            let mut layer = T::zero();
            let mut lw = T::zero();
            let mut ax = T::zero();
            let mut axn = T::zero();
            for j in 0..g.nth {
                for k in 0..g.nr {
                    let rc: T = g.r_center(k);
                    if rc > half || !f.mask.is_fluid(i, j, k) {
                        continue;
                    }
                    layer += rc * f.p[g.cell_idx(i, j, k)];
                    lw += rc;
                    if k == 0 {
                        ax += f.p[g.cell_idx(i, j, k)];
                        axn += T::one();
                    }
                }
            }
            disk += half * layer / lw;
            axis += half * ax / axn;
        }
        (disk, axis)
    };
    let (p0_disk, p0_axis) = station(T::zero());
    let (p1_disk, p1_axis) = station(ell);
    // Total pressure = fluctuation - G x1, so the drop gains +G*ell.
    let drive = f.mean_gradient * ell;
    Ok(PressureDrop {
        disk_average: p0_disk - p1_disk + drive,
        axis_value: p0_axis - p1_axis + drive,
    })
}

/// Saint-Venant decay experiment output: tail energies H(t) beyond axial
/// distance t from the forcing, and the semilog fit beyond t >= 2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayFit {
    pub ts: Vec<f64>,
    pub energies: Vec<f64>,
    /// Fitted decay rate c in H(t) ~ exp(-c t); positive means decay.
    pub rate: f64,
    pub r_squared: f64,
    /// Zero forcing produces identically zero energies; no fit then.
    pub trivial: bool,
}

/// Solves the zero-flux forced Stokes problem and fits the axial decay of
/// the gradient tail energy. `forcing_center` is the axial coordinate the
/// distances are measured from (the center of the forcing slab).
pub fn saint_venant_decay<T: Scalar>(
    mask: &Arc<SolidMask>,
    forcing: &Forcing<T>,
    forcing_center: T,
    cfg: &SolverConfig<T>,
) -> Result<(FlowSolution<T>, DecayFit)> {
    let solution = solve_stokes_forced(mask, forcing, cfg)?;
    let fit = fit_decay(&solution, forcing_center)?;
    Ok((solution, fit))
}

/// Tail-energy decay fit of an already-computed zero-flux solution.
pub fn fit_decay<T: Scalar>(solution: &FlowSolution<T>, forcing_center: T) -> Result<DecayFit> {
    let period: f64 = solution.field.grid().period::<T>().as_f64();
    let t_max = period / 2.0;
    let mut ts = Vec::new();
    let mut t = 1.0;
    while t <= t_max + 1e-12 {
        ts.push(t);
        t += 0.5;
    }
    if ts.len() < 3 {
        return Err(Error::InvalidArgument("period too short for a decay fit".into()));
    }
    let ts_scalar: Vec<T> = ts.iter().map(|&t| sc(t)).collect();
    let energies: Vec<f64> = gradient_tail_energy(&solution.field, forcing_center, &ts_scalar)
        .into_iter()
        .map(|e| e.as_f64())
        .collect();
    if energies.iter().all(|&e| e == 0.0) {
        return Ok(DecayFit { ts, energies, rate: 0.0, r_squared: 1.0, trivial: true });
    }
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(&energies)
        .filter(|&(&t, &e)| t >= 2.0 && e > 0.0)
        .map(|(&t, &e)| (t, e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::BadFitInput("too few positive tail energies beyond t = 2".into()));
    }
    let (slope, _b, r2) = ols(&pts);
    Ok(DecayFit { ts, energies, rate: -slope, r_squared: r2, trivial: false })
}

/// Monotone nonincreasing check with a rounding allowance.
pub fn tail_monotone(energies: &[f64]) -> bool {
    energies.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
}

/// Concentration statistics of the boundary-layer fluctuation over an
/// ensemble: X_n = || v_bl - mean ||_{L2} on the core slice
/// {r < 1/2, 0 < x1 < 1}, with the eps^{-3/2}-rescaled spread and empirical
/// exponential-moment curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailDiagnostics<T> {
    pub epsilon: T,
    pub xs: Vec<T>,
    pub mean: T,
    pub sd: T,
    /// sd(X) * eps^{-3/2}.
    pub rescaled_sd: T,
    /// (t, log E[exp(t eps^{-3/2} X)]) on t in [0, 3].
    pub mgf: Vec<(T, T)>,
    /// (t, log E[exp(t eps^{-3} X^2)]) on t in [0, 1]; the sub-Gaussian
    /// variant relevant to the Bernoulli family.
    pub mgf_sq: Vec<(T, T)>,
    /// Plug-in entropy Ent[X] = E[X^2 log X^2] - E[X^2] log E[X^2].
    pub entropy: T,
}

pub fn concentration_stats<T: Scalar>(
    ensemble: &[BoundaryLayerField<T>],
) -> Result<TailDiagnostics<T>> {
    if ensemble.len() < 32 {
        return Err(Error::BadEnsemble(format!(
            "concentration statistics need >= 32 samples, got {}",
            ensemble.len()
        )));
    }
    let g = *ensemble[0].flow.grid();
    for blf in ensemble {
        if *blf.flow.grid() != g {
            return Err(Error::BadEnsemble("mixed grids in ensemble".into()));
        }
    }
    let eps: T = g.epsilon();
    let n = ensemble.len();
    let inv_n = sc::<T>(1.0 / n as f64);

    // Face-mean over the ensemble.
    let mut m1 = vec![T::zero(); ensemble[0].v1.len()];
    let mut mth = vec![T::zero(); ensemble[0].vth.len()];
    let mut mr = vec![T::zero(); ensemble[0].vr.len()];
    for blf in ensemble {
        for (a, b) in m1.iter_mut().zip(&blf.v1) {
            *a += *b;
        }
        for (a, b) in mth.iter_mut().zip(&blf.vth) {
            *a += *b;
        }
        for (a, b) in mr.iter_mut().zip(&blf.vr) {
            *a += *b;
        }
    }
    m1.iter_mut().for_each(|v| *v *= inv_n);
    mth.iter_mut().for_each(|v| *v *= inv_n);
    mr.iter_mut().for_each(|v| *v *= inv_n);

    // Region weights for the core slice.
    let core = sc::<T>(crate::bl::CORE_RADIUS);
    let one = T::one();
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let xs: Vec<T> = ensemble
        .iter()
        .map(|blf| {
            let mut acc = T::zero();
            for i in 0..g.n1 {
                for j in 0..g.nth {
                    for k in 0..g.nr {
                        let rc: T = g.r_center(k);
                        if rc >= core {
                            continue;
                        }
                        let idx = u1_idx(g.nth, g.nr, i, j, k);
                        let xf: T = g.x_face(i);
                        let xc: T = g.x_center(i);
                        let w = h1 * hth * hr * rc;
                        if xf < one {
                            let d = blf.v1[idx] - m1[idx];
                            acc += w * d * d;
                        }
                        if xc < one {
                            let d = blf.vth[idx] - mth[idx];
                            acc += w * d * d;
                            if k >= 1 {
                                let rf: T = g.r_face(k);
                                if rf < core {
                                    let ridx = ur_idx(g.nth, g.nr, i, j, k);
                                    let d = blf.vr[ridx] - mr[ridx];
                                    acc += h1 * hth * hr * rf * d * d;
                                }
                            }
                        }
                    }
                }
            }
            acc.sqrt()
        })
        .collect();

    let mean = xs.iter().copied().sum::<T>() * inv_n;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>()
        / sc::<T>((n - 1).max(1) as f64);
    let sd = var.sqrt();
    let scale = eps.powf(sc(-1.5));
    let mgf = (0..=12)
        .map(|m| {
            let t = sc::<T>(m as f64 * 0.25);
            let e = xs.iter().map(|&x| (t * scale * x).exp()).sum::<T>() * inv_n;
            (t, e.ln())
        })
        .collect();
    let scale_sq = eps.powi(-3);
    let mgf_sq = (0..=4)
        .map(|m| {
            let t = sc::<T>(m as f64 * 0.25);
            let e = xs.iter().map(|&x| (t * scale_sq * x * x).exp()).sum::<T>() * inv_n;
            (t, e.ln())
        })
        .collect();
    let ex2 = xs.iter().map(|&x| x * x).sum::<T>() * inv_n;
    let ent = if ex2 > T::zero() {
        let exlx = xs
            .iter()
            .map(|&x| {
                let x2 = x * x;
                if x2 > T::zero() {
                    x2 * x2.ln()
                } else {
                    T::zero()
                }
            })
            .sum::<T>()
            * inv_n;
        exlx - ex2 * ex2.ln()
    } else {
        T::zero()
    };
    Ok(TailDiagnostics {
        epsilon: eps,
        xs,
        mean,
        sd,
        rescaled_sd: sd * scale,
        mgf,
        mgf_sq,
        entropy: ent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_rate_recovers_power_laws() {
        let eps = [0.125, 0.0625, 0.03125];
        let pts: Vec<(f64, f64)> = eps.iter().map(|&e| (e, e.powf(1.5))).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let pts: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 3.0 * e)).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);

        let pts: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 2.0)).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn fit_rate_rejects_bad_input() {
        assert!(fit_rate(&[(0.1, 1.0), (0.2, 2.0)]).is_err());
        assert!(fit_rate(&[(0.1, 1.0), (0.2, 2.0), (0.3, 0.0)]).is_err());
    }

    #[test]
    fn fit_rate_is_affine_equivariant() {
        let pts: Vec<(f64, f64)> = vec![(0.125, 0.3), (0.0625, 0.11), (0.03125, 0.04)];
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(e, v)| (e, 7.0 * v)).collect();
        let a = fit_rate(&pts).unwrap();
        let b = fit_rate(&scaled).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-12);
        assert!((b.intercept - a.intercept - 7.0f64.ln()).abs() < 1e-12);
    }
}
