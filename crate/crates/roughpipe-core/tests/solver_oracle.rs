//! Solver oracle tests against closed-form laminar flow and conservation
//! identities.

use std::sync::Arc;

use roughpipe_core::geometry::{build_mask, sample_bernoulli, smooth_sample, CylGrid};
use roughpipe_core::solver::{
    compute_flux, solve_ns_flux, solve_stokes_flux, solve_stokes_forced, Forcing, SolverConfig,
};

fn smooth_mask(eps_den: u32, period_cells: u32, subdiv: u32, axisym: bool) -> Arc<roughpipe_core::geometry::SolidMask> {
    let sample = smooth_sample(eps_den, period_cells).unwrap();
    let grid = CylGrid::new(eps_den, period_cells, subdiv, axisym).unwrap();
    Arc::new(build_mask(&sample, &grid).unwrap())
}

/// Relative L2 error of the solved axial velocity against the laminar
/// profile (2 phi / pi)(1 - r^2), over fluid axial faces with cylindrical
/// face weights.
fn hp_velocity_error(sol: &roughpipe_core::solver::FlowSolution<f64>, phi: f64) -> f64 {
    let f = &sol.field;
    let g = *f.grid();
    let coef = 2.0 * phi / std::f64::consts::PI;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                let rc: f64 = g.r_center(k);
                if rc >= 1.0 {
                    continue;
                }
                let w = rc;
                let exact = coef * (1.0 - rc * rc);
                let got = f.u1_at(i, j, k);
                num += w * (got - exact) * (got - exact);
                den += w * exact * exact;
            }
        }
    }
    (num / den).sqrt()
}

#[test]
fn smooth_pipe_stokes_matches_hagen_poiseuille_and_converges_second_order() {
    let phi = 0.1;
    let cfg = SolverConfig::default();
    let mut errors = Vec::new();
    let mut g_errors = Vec::new();
    for s in [2u32, 4, 8] {
        let mask = smooth_mask(8, 8, s, true);
        let sol = solve_stokes_flux(&mask, phi, &cfg).unwrap();
        let err = hp_velocity_error(&sol, phi);
        let g_exact = 8.0 * phi / std::f64::consts::PI;
        g_errors.push((sol.mean_gradient - g_exact).abs() / g_exact);
        errors.push(err);
        println!(
            "s={s}: vel_err={err:.3e} G={:.12} (exact {:.12}) iters={}",
            sol.mean_gradient, g_exact, sol.linear_iters
        );
    }
    // Order from successive halvings.
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        println!("observed order {order:.2}");
        assert!(order > 1.7 && order < 2.4, "order {order} outside [1.7, 2.4]");
    }
    assert!(errors[2] < 1e-3, "finest-grid relative error {} > 1e-3", errors[2]);
    assert!(g_errors[2] < 1e-3, "finest-grid G relative error {}", g_errors[2]);
}

#[test]
fn slice_flux_constant_across_stations() {
    let cfg = SolverConfig::default();
    // Rough axisymmetric sample.
    let sample = sample_bernoulli(8, 8, 11, true).unwrap();
    let grid = CylGrid::new(8, 8, 2, true).unwrap();
    let mask = Arc::new(build_mask(&sample, &grid).unwrap());
    let phi = 0.1f64;
    let sol = solve_stokes_flux(&mask, phi, &cfg).unwrap();
    let spread = sol.field.flux_spread();
    println!("flux spread {spread:.3e}, div residual {:.3e}", sol.div_residual);
    assert!(spread / phi.abs() < 1e-10, "relative flux spread {}", spread / phi);
    assert!((compute_flux(&sol.field, 0) - phi).abs() < 1e-14);
    // Divergence below the configured tolerance.
    assert!(sol.field.max_divergence() <= 10.0 * cfg.div_tol);
}

#[test]
fn stokes_zero_flux_gives_zero_field() {
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 4, 2, true);
    let sol = solve_stokes_flux(&mask, 0.0, &cfg).unwrap();
    assert_eq!(sol.field.max_velocity(), 0.0);
}

#[test]
fn stokes_solution_is_linear_in_flux() {
    let cfg = SolverConfig::default();
    let sample = sample_bernoulli(4, 4, 3, true).unwrap();
    let grid = CylGrid::new(4, 4, 2, true).unwrap();
    let mask = Arc::new(build_mask(&sample, &grid).unwrap());
    let a = solve_stokes_flux(&mask, 0.3f64, &cfg).unwrap();
    let b = solve_stokes_flux(&mask, 0.6, &cfg).unwrap();
    let mut doubled = a.field.clone();
    doubled.scale(2.0);
    let diff = doubled.max_velocity_diff(&b.field);
    assert!(diff < 1e-12, "linearity violated: {diff}");
    assert!((2.0 * a.mean_gradient - b.mean_gradient).abs() < 1e-12);
}

#[test]
fn ns_on_smooth_pipe_is_laminar_in_one_picard_step() {
    // The advection of an axially uniform laminar profile vanishes
    // identically, so the first Picard step reproduces the Stokes solution.
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 4, 2, true);
    let phi = 0.15;
    let stokes = solve_stokes_flux(&mask, phi, &cfg).unwrap();
    let ns = solve_ns_flux(&mask, phi, &cfg).unwrap();
    assert_eq!(ns.picard_iters, 1);
    let diff = ns.field.max_velocity_diff(&stokes.field);
    assert!(diff < 1e-9, "NS differs from Stokes on laminar flow: {diff}");
}

#[test]
fn ns_zero_flux_gives_zero_field() {
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 4, 2, true);
    let sol = solve_ns_flux(&mask, 0.0, &cfg).unwrap();
    assert_eq!(sol.field.max_velocity(), 0.0);
}

#[test]
fn ns_rejects_flux_beyond_smallness_bound() {
    let cfg = SolverConfig::<f64>::default();
    let mask = smooth_mask(4, 4, 2, true);
    assert!(solve_ns_flux(&mask, 0.5, &cfg).is_err());
}

#[test]
fn ns_minus_stokes_scales_quadratically_in_flux() {
    // Difference between NS and Stokes solves is O(phi^2): halving the flux
    // shrinks the scaled difference by about 4.
    let cfg = SolverConfig::default();
    let sample = sample_bernoulli(4, 4, 21, true).unwrap();
    let grid = CylGrid::new(4, 4, 2, true).unwrap();
    let mask = Arc::new(build_mask(&sample, &grid).unwrap());
    let mut deltas = Vec::new();
    for phi in [0.1, 0.05] {
        let ns = solve_ns_flux(&mask, phi, &cfg).unwrap();
        let st = solve_stokes_flux(&mask, phi, &cfg).unwrap();
        deltas.push(ns.field.max_velocity_diff(&st.field));
    }
    let ratio = deltas[0] / deltas[1];
    println!("quadratic remainder ratio {ratio:.3} (deltas {deltas:?})");
    assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio} not ~4");
}

#[test]
fn forced_zero_forcing_gives_zero_field() {
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 4, 2, true);
    let zero = Forcing::FaceData {
        u1: vec![0.0; mask.grid.n1 * mask.grid.nth * mask.grid.nr],
        uth: vec![0.0; mask.grid.n1 * mask.grid.nth * mask.grid.nr],
        ur: vec![0.0; mask.grid.n1 * mask.grid.nth * (mask.grid.nr + 1)],
    };
    let sol = solve_stokes_forced(&mask, &zero, &cfg).unwrap();
    assert_eq!(sol.field.max_velocity(), 0.0);
}

#[test]
fn forced_gradient_forcing_recovers_pressure_and_no_flow() {
    // f = grad g with g supported in the fluid interior: velocity vanishes
    // and the pressure fluctuation equals g up to a constant.
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 4, 2, true);
    let g = mask.grid;
    let mut gv = vec![0.0f64; g.n_cells()];
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                if mask.is_fluid(i, j, k) {
                    let x: f64 = g.x_center(i);
                    let r: f64 = g.r_center(k);
                    gv[g.cell_idx(i, j, k)] =
                        (2.0 * std::f64::consts::PI * x / g.period::<f64>()).sin() * (1.0 - r);
                }
            }
        }
    }
    let sol = solve_stokes_forced(&mask, &Forcing::GradientOfCellScalar(gv.clone()), &cfg).unwrap();
    assert!(sol.field.max_velocity() < 1e-9, "velocity {}", sol.field.max_velocity());
    // Compare pressure fluctuation to g up to the volume-weighted constant.
    let mut gsum = 0.0;
    let mut vol = 0.0;
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                if mask.is_fluid(i, j, k) {
                    let w: f64 = g.r_center(k);
                    gsum += w * gv[g.cell_idx(i, j, k)];
                    vol += w;
                }
            }
        }
    }
    let gmean = gsum / vol;
    let mut worst = 0.0f64;
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                if mask.is_fluid(i, j, k) {
                    let c = g.cell_idx(i, j, k);
                    worst = worst.max((sol.field.p[c] - (gv[c] - gmean)).abs());
                }
            }
        }
    }
    assert!(worst < 1e-9, "pressure mismatch {worst}");
}

#[test]
fn forced_localized_tail_energy_decreases() {
    // Forcing in one roughness slice of a long pipe: gradient energy beyond
    // axial distance t decays monotonically in t.
    let cfg = SolverConfig::default();
    let mask = smooth_mask(4, 16, 2, true); // T = 4
    let eps = 0.25;
    let sol =
        solve_stokes_forced(&mask, &Forcing::AxialSlab { from: 0.0f64, to: eps }, &cfg).unwrap();
    let tail = roughpipe_core::verify::gradient_tail_energy(&sol.field, 0.5 * eps, &[0.5, 1.0, 1.5]);
    println!("tail energies {tail:?}");
    assert!(tail[0] > tail[1] && tail[1] > tail[2]);
    assert!((compute_flux(&sol.field, 0)).abs() < 1e-12);
}

#[test]
fn f32_instantiation_solves_small_pipe() {
    let sample = smooth_sample(2, 2).unwrap();
    let grid = CylGrid::new(2, 2, 4, true).unwrap();
    let mask = Arc::new(build_mask(&sample, &grid).unwrap());
    let cfg = SolverConfig::<f32> {
        lin_rel_tol: 1e-6,
        div_tol: 1e-5,
        mom_rel_tol: 1e-4,
        ..Default::default()
    };
    let sol = solve_stokes_flux(&mask, 0.1f32, &cfg).unwrap();
    let coef = 2.0 * 0.1 / std::f32::consts::PI;
    let got = sol.field.u1_at(0, 0, 0);
    let rc: f32 = grid.r_center(0);
    let exact = coef * (1.0 - rc * rc);
    assert!((got - exact).abs() / exact < 0.05, "f32 solve off: {got} vs {exact}");
}
