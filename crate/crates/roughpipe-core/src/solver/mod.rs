//! Stationary Stokes and Navier-Stokes solves on masked cylindrical grids,
//! periodic in the axial direction, with prescribed flux or body force.

mod advect;
mod assemble;
mod field;
mod layout;
mod minres;
pub mod samples;
mod sparse;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::SolidMask;
use crate::scalar::{sc, Scalar};
use crate::Result;

pub use assemble::Forcing;
pub use field::{FieldDump, StaggeredFlowField};

/// Tolerances and iteration limits for the linear and nonlinear solves.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    /// Relative residual target of each Krylov sweep.
    pub lin_rel_tol: T,
    /// Absolute per-cell divergence target (flux units) of the converged
    /// solution; refinement sweeps run until it is met.
    pub div_tol: T,
    /// Momentum-residual target relative to the forcing scale.
    pub mom_rel_tol: T,
    /// Krylov iteration cap per sweep.
    pub max_lin_iters: usize,
    /// Residual-refinement sweeps after the first solve.
    pub max_refine: usize,
    /// Picard stopping tolerance on the max velocity update.
    pub picard_tol: T,
    pub max_picard: usize,
    /// Under-relaxation factor in (0, 1].
    pub relax: T,
    /// Smallness bound on |phi| for the nonlinear solve.
    pub max_ns_flux: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            lin_rel_tol: sc(1e-12),
            div_tol: sc(1e-13),
            mom_rel_tol: sc(1e-9),
            max_lin_iters: 200_000,
            max_refine: 8,
            picard_tol: sc(1e-10),
            max_picard: 60,
            relax: T::one(),
            max_ns_flux: sc(0.2),
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.lin_rel_tol > T::zero() && self.div_tol > T::zero() && self.picard_tol > T::zero())
        {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !(self.relax > T::zero() && self.relax <= T::one()) {
            return Err(Error::InvalidArgument("relaxation must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// A solved flow: the discrete field plus its flux, drive, and residuals.
#[derive(Debug, Clone)]
pub struct FlowSolution<T> {
    pub field: StaggeredFlowField<T>,
    /// Prescribed (and measured) flux.
    pub flux: T,
    /// Uniform axial pressure-gradient drive G.
    pub mean_gradient: T,
    pub div_residual: T,
    pub mom_residual: T,
    pub linear_iters: usize,
    pub picard_iters: usize,
}

/// Flux of a field through the axial station `t_index` (face index).
pub fn compute_flux<T: Scalar>(field: &StaggeredFlowField<T>, t_index: usize) -> T {
    field.flux_at_station(t_index % field.grid().n1)
}

struct Assembled<T> {
    sys: assemble::StokesSystem<T>,
    vols: Vec<T>,
}

fn assemble_checked<T: Scalar>(mask: &SolidMask) -> Result<Assembled<T>> {
    let comps = assemble::fluid_components(mask);
    if comps != 1 {
        return Err(Error::DisconnectedFluid { components: comps });
    }
    let sys = assemble::build_system::<T>(mask);
    let vols = assemble::face_volumes(mask, &sys.dofs);
    Ok(Assembled { sys, vols })
}

struct RawSolve<T> {
    x: Vec<T>,
    div_res: T,
    mom_res: T,
    iters: usize,
}

/// Krylov solve with iterative refinement on the true residual, until the
/// per-cell divergence and momentum targets are met.
fn solve_linear<T: Scalar>(
    mask: &SolidMask,
    asm: &Assembled<T>,
    rhs: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RawSolve<T>> {
    let n = asm.sys.dofs.n_total;
    let mut x = vec![T::zero(); n];
    let bscale = rhs.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if bscale == T::zero() {
        return Ok(RawSolve { x, div_res: T::zero(), mom_res: T::zero(), iters: 0 });
    }
    let mom_target = cfg.mom_rel_tol * bscale;
    let mut r = rhs.to_vec();
    let mut kx = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut iters = 0usize;
    let mut last = (T::infinity(), T::infinity());
    for sweep in 0..=cfg.max_refine {
        let div_res = assemble::divergence_residual(mask, &asm.sys.dofs, &x);
        let mom_res = r[..asm.sys.dofs.n_vel].iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if div_res <= cfg.div_tol && mom_res <= mom_target {
            return Ok(RawSolve { x, div_res, mom_res, iters });
        }
        let stalled = sweep > 1 && div_res >= last.0 && mom_res >= last.1;
        if sweep == cfg.max_refine || stalled {
            return Err(Error::SolveFailed {
                div_res: div_res.as_f64(),
                mom_res: mom_res.as_f64(),
                iters,
            });
        }
        last = (div_res, mom_res);
        let out = minres::minres(
            &asm.sys.mat,
            &asm.sys.m_inv,
            &r,
            cfg.lin_rel_tol,
            cfg.max_lin_iters,
            &mut d,
        );
        iters += out.iters;
        if !out.converged && !out.res_norm.is_finite() {
            return Err(Error::SolveFailed {
                div_res: f64::NAN,
                mom_res: f64::NAN,
                iters,
            });
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += *di;
        }
        asm.sys.mat.matvec(&x, &mut kx);
        for ((ri, bi), ki) in r.iter_mut().zip(rhs).zip(&kx) {
            *ri = *bi - *ki;
        }
    }
    unreachable!()
}

fn field_from_x<T: Scalar>(
    mask: &Arc<SolidMask>,
    asm: &Assembled<T>,
    x: &[T],
    mean_gradient: T,
) -> StaggeredFlowField<T> {
    let mut f = StaggeredFlowField::zeros(mask.clone());
    asm.sys.dofs.scatter(x, &mut f.u1, &mut f.uth, &mut f.ur, &mut f.p);
    f.mean_gradient = mean_gradient;
    f
}

fn zero_solution<T: Scalar>(mask: &Arc<SolidMask>, phi: T) -> FlowSolution<T> {
    FlowSolution {
        field: StaggeredFlowField::zeros(mask.clone()),
        flux: phi,
        mean_gradient: T::zero(),
        div_residual: T::zero(),
        mom_residual: T::zero(),
        linear_iters: 0,
        picard_iters: 0,
    }
}

/// Stokes flow with prescribed flux: the system is driven by a uniform axial
/// force G e1 with G chosen so the computed flux equals `phi`; by linearity
/// the unit-force solution is solved once and scaled.
pub fn solve_stokes_flux<T: Scalar>(
    mask: &Arc<SolidMask>,
    phi: T,
    cfg: &SolverConfig<T>,
) -> Result<FlowSolution<T>> {
    cfg.validate()?;
    if !phi.is_finite() {
        return Err(Error::InvalidArgument("flux must be finite".into()));
    }
    if phi == T::zero() {
        assemble::fluid_components(mask)
            .eq(&1)
            .then_some(())
            .ok_or(Error::DisconnectedFluid { components: 2 })?;
        return Ok(zero_solution(mask, phi));
    }
    let asm = assemble_checked::<T>(mask)?;
    let rhs = assemble::build_rhs(mask, &asm.sys.dofs, &asm.vols, &Forcing::UnitAxial);
    let unit = solve_linear(mask, &asm, &rhs, cfg)?;
    let mut field = field_from_x(mask, &asm, &unit.x, T::one());
    let unit_flux = field.flux_at_station(0);
    let scale = phi / unit_flux;
    field.scale(scale);
    field.gauge_pressure();
    let g = field.mean_gradient;
    Ok(FlowSolution {
        field,
        flux: phi,
        mean_gradient: g,
        div_residual: unit.div_res * scale.abs(),
        mom_residual: unit.mom_res * scale.abs(),
        linear_iters: unit.iters,
        picard_iters: 0,
    })
}

/// Zero-flux Stokes flow under a body force; the mean gradient G is
/// determined so the flux vanishes.
pub fn solve_stokes_forced<T: Scalar>(
    mask: &Arc<SolidMask>,
    forcing: &Forcing<T>,
    cfg: &SolverConfig<T>,
) -> Result<FlowSolution<T>> {
    cfg.validate()?;
    let asm = assemble_checked::<T>(mask)?;
    let rhs_f = assemble::build_rhs(mask, &asm.sys.dofs, &asm.vols, forcing);
    if assemble::rhs_is_zero(&rhs_f) {
        return Ok(zero_solution(mask, T::zero()));
    }
    let forced = solve_linear(mask, &asm, &rhs_f, cfg)?;
    let forced_field = field_from_x(mask, &asm, &forced.x, T::zero());

    let rhs_u = assemble::build_rhs(mask, &asm.sys.dofs, &asm.vols, &Forcing::UnitAxial);
    let unit = solve_linear(mask, &asm, &rhs_u, cfg)?;
    let unit_field = field_from_x(mask, &asm, &unit.x, T::one());

    let g = -forced_field.flux_at_station(0) / unit_field.flux_at_station(0);
    let mut field = forced_field;
    field.axpy(g, &unit_field);
    field.gauge_pressure();
    Ok(FlowSolution {
        field,
        flux: T::zero(),
        mean_gradient: g,
        div_residual: forced.div_res.max(unit.div_res * g.abs()),
        mom_residual: forced.mom_res.max(unit.mom_res * g.abs()),
        linear_iters: forced.iters + unit.iters,
        picard_iters: 0,
    })
}

/// Navier-Stokes flow with prescribed flux via under-relaxed Picard
/// iteration: each step solves the Stokes system with the previous iterate's
/// advection as a body force, then restores the flux through the cached
/// unit-force solution (the flux is affine in G), keeping the linear
/// operator symmetric throughout.
pub fn solve_ns_flux<T: Scalar>(
    mask: &Arc<SolidMask>,
    phi: T,
    cfg: &SolverConfig<T>,
) -> Result<FlowSolution<T>> {
    cfg.validate()?;
    if phi.abs() > cfg.max_ns_flux {
        return Err(Error::FluxTooLarge { phi: phi.as_f64(), bound: cfg.max_ns_flux.as_f64() });
    }
    if phi == T::zero() {
        return Ok(zero_solution(mask, phi));
    }
    let asm = assemble_checked::<T>(mask)?;
    let rhs_u = assemble::build_rhs(mask, &asm.sys.dofs, &asm.vols, &Forcing::UnitAxial);
    let unit = solve_linear(mask, &asm, &rhs_u, cfg)?;
    let unit_field = field_from_x(mask, &asm, &unit.x, T::one());
    let unit_flux = unit_field.flux_at_station(0);

    let mut current = unit_field.clone();
    current.scale(phi / unit_flux);
    let mut iters_total = unit.iters;
    let mut last_res;
    let guard = sc::<T>(20.0) * (T::one() + phi.abs());

    for step in 1..=cfg.max_picard {
        let (mut a1, mut ath, mut ar) = advect::advection_faces(mask, &current);
        a1.iter_mut().for_each(|v| *v = -*v);
        ath.iter_mut().for_each(|v| *v = -*v);
        ar.iter_mut().for_each(|v| *v = -*v);
        let rhs_a = assemble::build_rhs(
            mask,
            &asm.sys.dofs,
            &asm.vols,
            &Forcing::FaceData { u1: a1, uth: ath, ur: ar },
        );
        let adv = solve_linear(mask, &asm, &rhs_a, cfg)?;
        iters_total += adv.iters;
        last_res = (adv.div_res, adv.mom_res);
        let adv_field = field_from_x(mask, &asm, &adv.x, T::zero());

        let g_step = (phi - adv_field.flux_at_station(0)) / unit_flux;
        let mut candidate = adv_field;
        candidate.axpy(g_step, &unit_field);

        // Both iterates carry flux phi, so the relaxed update does too.
        let omega = cfg.relax;
        let mut next = current.clone();
        next.scale(T::one() - omega);
        next.axpy(omega, &candidate);

        let delta = next.max_velocity_diff(&current);
        current = next;
        if !delta.is_finite() || current.max_velocity() > guard {
            return Err(Error::PicardDiverged { iters: step, update: delta.as_f64() });
        }
        if delta <= cfg.picard_tol * T::one().max(phi.abs()) {
            current.gauge_pressure();
            let g = current.mean_gradient;
            return Ok(FlowSolution {
                field: current,
                flux: phi,
                mean_gradient: g,
                div_residual: last_res.0,
                mom_residual: last_res.1,
                linear_iters: iters_total,
                picard_iters: step,
            });
        }
    }
    Err(Error::PicardDiverged { iters: cfg.max_picard, update: f64::INFINITY })
}
