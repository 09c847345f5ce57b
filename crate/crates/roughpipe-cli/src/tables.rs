//! CSV emission for the campaign artifacts. Floats print with Rust's
//! shortest round-trip formatting, so re-runs are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::campaign::{ConcentrationOutcome, ConvergenceOutcome, CorrelationOutcome, SaintVenantOutcome};

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// rates.csv: one row per eps with the ensemble-mean error functionals.
pub fn rates_csv(out: &ConvergenceOutcome) -> String {
    let mut s = String::from(
        "epsilon,n,mean_err_u0,sd_err_u0,mean_err_un,sd_err_un,mean_err_grad_u0,mean_err_dgrad_un,mean_err_app\n",
    );
    for g in &out.groups {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            g.epsilon,
            g.records.len(),
            g.mean_err_u0,
            g.sd_err_u0,
            g.mean_err_un,
            g.sd_err_un,
            g.mean_err_grad_u0,
            g.mean_err_dgrad_un,
            g.mean_err_app
        )
        .unwrap();
    }
    s
}

/// alpha.csv: the slip-model sweep table.
pub fn alpha_csv(out: &ConvergenceOutcome) -> String {
    let mut s =
        String::from("epsilon,N,alpha,beta,lambda,fit_residual,flux_residual,u1_misfit\n");
    for g in &out.groups {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            g.epsilon,
            g.model.ensemble_size,
            g.model.alpha,
            g.model.beta,
            g.model.lambda,
            g.model.fit_residual,
            g.model.flux_residual,
            g.model.u1_misfit
        )
        .unwrap();
    }
    s
}

/// pressure.csv: per-eps refined/classical pressure-law deviations.
pub fn pressure_csv(out: &ConvergenceOutcome) -> String {
    let mut s = String::from("epsilon,n,ell,mean_abs_dp_refined,mean_abs_dp_classical\n");
    for g in &out.groups {
        writeln!(
            s,
            "{},{},{},{},{}",
            g.epsilon,
            g.records.len(),
            g.ell,
            g.mean_abs_dp_refined,
            g.mean_abs_dp_classical
        )
        .unwrap();
    }
    s
}

/// samples.csv: per-sample records of a convergence campaign.
pub fn samples_csv(out: &ConvergenceOutcome) -> String {
    let mut s = String::from(
        "epsilon,index,seed,err_u0,err_un,err_grad_u0,err_dgrad_un,err_app,dp_disk,dp_axis,flux_spread,max_div,picard_iters\n",
    );
    for g in &out.groups {
        for r in &g.records {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                g.epsilon,
                r.index,
                r.seed,
                r.err_u0,
                r.err_un,
                r.err_grad_u0,
                r.err_dgrad_un,
                r.err_app,
                r.dp_disk,
                r.dp_axis,
                r.flux_spread,
                r.max_div,
                r.picard_iters
            )
            .unwrap();
        }
    }
    s
}

/// decay.csv: tail energies of the Saint-Venant runs.
pub fn decay_csv(out: &SaintVenantOutcome) -> String {
    let mut s = String::from("t,h_smooth,h_rough\n");
    for ((t, hs), hr) in out.smooth.ts.iter().zip(&out.smooth.energies).zip(&out.rough.energies)
    {
        writeln!(s, "{},{},{}", t, hs, hr).unwrap();
    }
    s
}

/// tails.csv: concentration sample values and rescalings.
pub fn tails_csv(out: &ConcentrationOutcome) -> String {
    let mut s = String::from("epsilon,n,x,rescaled\n");
    for (eps_den, stats, _) in &out.per_eps {
        let eps = 1.0 / *eps_den as f64;
        for (n, &x) in stats.xs.iter().enumerate() {
            writeln!(s, "{},{},{},{}", eps, n, x, x * eps.powf(-1.5)).unwrap();
        }
    }
    s
}

/// mgf.csv: empirical exponential-moment curves per eps.
pub fn mgf_csv(out: &ConcentrationOutcome) -> String {
    let mut s = String::from("epsilon,t,log_mgf,t_sq,log_mgf_sq\n");
    for (eps_den, stats, _) in &out.per_eps {
        let eps = 1.0 / *eps_den as f64;
        for (i, (t, v)) in stats.mgf.iter().enumerate() {
            let (t2, v2) = stats.mgf_sq.get(i).copied().unwrap_or((f64::NAN, f64::NAN));
            writeln!(s, "{},{},{},{},{}", eps, t, v, t2, v2).unwrap();
        }
    }
    s
}

/// correlation.csv: per-offset profiles of every run.
pub fn correlation_csv(out: &CorrelationOutcome) -> String {
    let mut s = String::from("epsilon,offset,max_profile,l2_profile\n");
    for run in &out.runs {
        let eps = 1.0 / run.eps_den as f64;
        for ((d, m), l) in run
            .profile
            .offsets
            .iter()
            .zip(&run.profile.max_profile)
            .zip(&run.profile.l2_profile)
        {
            writeln!(s, "{},{},{},{}", eps, d, m, l).unwrap();
        }
    }
    s
}
