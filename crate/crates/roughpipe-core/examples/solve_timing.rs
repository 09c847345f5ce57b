use std::sync::Arc;
use std::time::Instant;
use roughpipe_core::geometry::{build_mask, sample_bernoulli, CylGrid};
use roughpipe_core::solver::{solve_stokes_flux, solve_ns_flux, SolverConfig};

fn main() {
    let cfg = SolverConfig::default();
    for (eps_den, t_cells, s, axisym, label) in [
        (8u32, 8u32, 2u32, true, "axisym 1/8 T=1"),
        (16, 16, 2, true, "axisym 1/16 T=1"),
        (32, 32, 2, true, "axisym 1/32 T=1"),
        (8, 8, 2, false, "3D 1/8 T=1"),
        (16, 16, 2, false, "3D 1/16 T=1"),
    ] {
        let sample = sample_bernoulli(eps_den, t_cells, 42, axisym).unwrap();
        let grid = CylGrid::new(eps_den, t_cells, s, axisym).unwrap();
        let mask = Arc::new(build_mask(&sample, &grid).unwrap());
        let t0 = Instant::now();
        let sol = solve_stokes_flux(&mask, 0.1f64, &cfg).unwrap();
        let dt = t0.elapsed();
        println!("{label}: cells={} stokes {:?} iters={} div={:.2e} spread={:.2e}",
            grid.n_cells(), dt, sol.linear_iters, sol.div_residual, sol.field.flux_spread());
        if axisym {
            let t0 = Instant::now();
            let ns = solve_ns_flux(&mask, 0.1f64, &cfg).unwrap();
            println!("   ns {:?} picard={} lin_iters={}", t0.elapsed(), ns.picard_iters, ns.linear_iters);
        }
    }
}
