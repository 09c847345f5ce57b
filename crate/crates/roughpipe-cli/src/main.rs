//! Command-line front end of the rough-pipe laboratory.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use roughpipe_cli::campaign::{self, SmoothOutcome};
use roughpipe_cli::config::{Family, SweepConfig};
use roughpipe_cli::criteria::{self, CriterionOutcome};
use roughpipe_cli::manifest::RunManifest;
use roughpipe_cli::svg::{self, Series};
use roughpipe_cli::tables;
use roughpipe_core::SolverConfig64;

#[derive(Parser)]
#[command(
    name = "roughpipe",
    about = "Random rough-pipe laminar flow laboratory: samplers, Stokes/Navier-Stokes solves, wall-law verification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Roughness denominators M = 1/eps (repeatable).
    #[arg(long = "eps-den", default_values_t = vec![8u32, 16, 32])]
    eps_dens: Vec<u32>,
    /// Axial period (integer multiples of the reference radius).
    #[arg(long, default_value_t = 1)]
    period: u32,
    /// Prescribed flux of the nonlinear solves.
    #[arg(long, default_value_t = 0.1)]
    phi: f64,
    /// Samples per eps.
    #[arg(long, short = 'n', default_value_t = 32)]
    ensemble: usize,
    /// Grid cells per rough cell and direction.
    #[arg(long, default_value_t = 2)]
    subdiv: u32,
    /// Full-3D sampling/solving instead of axisymmetric mode.
    #[arg(long, default_value_t = false)]
    three_d: bool,
    #[arg(long, value_enum, default_value_t = Family::Bernoulli)]
    family: Family,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Pressure-drop distance (defaults to T/2).
    #[arg(long)]
    ell: Option<f64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Optional TOML file with a serialized sweep configuration; explicit
    /// flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, short = 'o', default_value = "runs/out")]
    out: PathBuf,
    /// Evaluate the acceptance checks and exit nonzero on failure.
    #[arg(long, default_value_t = false)]
    check: bool,
}

impl SweepArgs {
    fn to_config(&self) -> anyhow::Result<SweepConfig> {
        let mut cfg = if let Some(path) = &self.config {
            toml::from_str(&std::fs::read_to_string(path).context("reading --config")?)?
        } else {
            SweepConfig::default()
        };
        cfg.eps_dens = self.eps_dens.clone();
        cfg.period = self.period;
        cfg.phi = self.phi;
        cfg.ensemble = self.ensemble;
        cfg.subdiv = self.subdiv;
        cfg.axisym = !self.three_d;
        cfg.family = self.family;
        cfg.base_seed = self.seed;
        cfg.ell = self.ell;
        cfg.workers = self.workers;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate one rough-pipe sample and validate its thickness.
    Sample {
        #[arg(long, value_enum, default_value_t = Family::Bernoulli)]
        family: Family,
        #[arg(long = "eps-den", default_value_t = 8)]
        eps_den: u32,
        #[arg(long, default_value_t = 1)]
        period: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = false)]
        three_d: bool,
        #[arg(long, short = 'o', default_value = "runs/sample")]
        out: PathBuf,
    },
    /// Solve one sample at prescribed flux and dump the field.
    Solve {
        /// Path to a sample.json produced by `sample`.
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, default_value_t = 2)]
        subdiv: u32,
        #[arg(long, default_value_t = false)]
        three_d: bool,
        #[arg(long, default_value_t = 0.1)]
        phi: f64,
        /// Solve the Navier-Stokes system instead of Stokes.
        #[arg(long, default_value_t = false)]
        nonlinear: bool,
        #[arg(long, short = 'o', default_value = "runs/solve")]
        out: PathBuf,
    },
    /// Compute one normalized boundary layer and its size report.
    Bl {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, default_value_t = 2)]
        subdiv: u32,
        #[arg(long, default_value_t = false)]
        three_d: bool,
        #[arg(long, short = 'o', default_value = "runs/bl")]
        out: PathBuf,
    },
    /// Slip-coefficient estimation over boundary-layer ensembles.
    Alpha(SweepArgs),
    /// Wall-law convergence campaign (Dirichlet and Navier rates).
    Convergence(SweepArgs),
    /// Refined Poiseuille-law campaign (pressure drops).
    Poiseuille(SweepArgs),
    /// Saint-Venant decay experiment on long pipes.
    SaintVenant {
        #[arg(long = "eps-den", default_value_t = 8)]
        eps_den: u32,
        #[arg(long, default_value_t = 8)]
        period: u32,
        #[arg(long, default_value_t = 2)]
        subdiv: u32,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, short = 'o', default_value = "runs/saint-venant")]
        out: PathBuf,
        #[arg(long, default_value_t = false)]
        check: bool,
    },
    /// Concentration statistics of boundary-layer fluctuations.
    Concentration(SweepArgs),
    /// Single-cell perturbation decay (3D).
    Correlation {
        /// eps denominators for the decay fits.
        #[arg(long = "eps-den", default_values_t = vec![8u32, 16])]
        eps_dens: Vec<u32>,
        /// Further denominators only feeding the amplitude sweep.
        #[arg(long = "amplitude-eps-den", default_values_t = vec![32u32])]
        amp_dens: Vec<u32>,
        #[arg(long, default_value_t = 4)]
        period: u32,
        /// Period of the amplitude-only runs.
        #[arg(long, default_value_t = 1)]
        amp_period: u32,
        #[arg(long, default_value_t = 2)]
        subdiv: u32,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, short = 'o', default_value = "runs/correlation")]
        out: PathBuf,
        #[arg(long, default_value_t = false)]
        check: bool,
    },
    /// Smooth-pipe grid-convergence oracle.
    Smooth {
        #[arg(long = "eps-den", default_value_t = 8)]
        eps_den: u32,
        #[arg(long, default_value_t = 1)]
        period: u32,
        #[arg(long, default_value_t = 0.1)]
        phi: f64,
        #[arg(long = "subdiv", default_values_t = vec![2u32, 4, 8])]
        subdivs: Vec<u32>,
        #[arg(long, short = 'o', default_value = "runs/smooth")]
        out: PathBuf,
        #[arg(long, default_value_t = false)]
        check: bool,
    },
    /// Re-render the summary of an existing run manifest.
    Report {
        /// Path to manifest.json.
        manifest: PathBuf,
        /// Write summary.md next to the manifest instead of stdout.
        #[arg(long, default_value_t = false)]
        write: bool,
    },
}

fn finish(
    mut manifest: RunManifest,
    out: &PathBuf,
    started: Instant,
    checks: &[CriterionOutcome],
    check: bool,
) -> anyhow::Result<()> {
    manifest
        .wall_clock_ms
        .insert("total".into(), started.elapsed().as_millis());
    let path = manifest.save(out)?;
    let summary = roughpipe_cli::report::render(&path)?;
    std::fs::write(out.join("summary.md"), &summary)?;
    for c in checks {
        println!(
            "criterion {} ({}): {} — {}",
            c.id,
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    println!("manifest: {}", path.display());
    if check && checks.iter().any(|c| !c.pass) {
        std::process::exit(1);
    }
    Ok(())
}

fn write_artifact(
    manifest: &mut RunManifest,
    out: &PathBuf,
    name: &str,
    text: &str,
) -> anyhow::Result<()> {
    let path = out.join(name);
    tables::write_text(&path, text)?;
    manifest.add_artifact(&path)?;
    Ok(())
}

fn run_sweep(kind: &str, args: &SweepArgs) -> anyhow::Result<()> {
    let cfg = args.to_config()?;
    let started = Instant::now();
    let out = &args.out;
    let outcome = campaign::convergence_campaign(&cfg)?;
    let mut manifest = RunManifest::new(kind, serde_json::to_value(&cfg)?);
    manifest.failures = outcome.groups.iter().flat_map(|g| g.failures.clone()).collect();
    write_artifact(&mut manifest, out, "outcome.json", &serde_json::to_string(&outcome)?)?;
    write_artifact(&mut manifest, out, "rates.csv", &tables::rates_csv(&outcome))?;
    write_artifact(&mut manifest, out, "alpha.csv", &tables::alpha_csv(&outcome))?;
    write_artifact(&mut manifest, out, "pressure.csv", &tables::pressure_csv(&outcome))?;
    write_artifact(&mut manifest, out, "samples.csv", &tables::samples_csv(&outcome))?;
    let rate_series = vec![
        Series {
            label: "||u - u0||",
            points: outcome.groups.iter().map(|g| (g.epsilon, g.mean_err_u0)).collect(),
            color: "#1f77b4",
        },
        Series {
            label: "||u - uN||",
            points: outcome.groups.iter().map(|g| (g.epsilon, g.mean_err_un)).collect(),
            color: "#d62728",
        },
    ];
    write_artifact(
        &mut manifest,
        out,
        "rates.svg",
        &svg::line_plot("wall-law errors", "epsilon", "mean slice error", true, true, &rate_series),
    )?;
    let checks = vec![
        criteria::dirichlet_rates(&outcome),
        criteria::navier_rates(&outcome),
        criteria::alpha_quality(&outcome),
        criteria::poiseuille_law(&outcome),
    ];
    finish(manifest, out, started, &checks, args.check)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let solver = SolverConfig64::default();
    match cli.cmd {
        Cmd::Sample { family, eps_den, period, seed, three_d, out } => {
            let started = Instant::now();
            let (path, report) =
                campaign::sample_verb(family, eps_den, period, seed, !three_d, &out)?;
            let mut manifest = RunManifest::new(
                "sample",
                serde_json::json!({
                    "family": format!("{family:?}"), "eps_den": eps_den,
                    "period": period, "seed": seed, "axisym": !three_d
                }),
            );
            manifest.add_artifact(&path)?;
            println!(
                "sample: {} (thickness {})",
                path.display(),
                if report.pass { "pass" } else { "FAIL" }
            );
            finish(manifest, &out, started, &[], false)
        }
        Cmd::Solve { sample, subdiv, three_d, phi, nonlinear, out } => {
            let started = Instant::now();
            let (path, report) =
                campaign::solve_verb(&sample, subdiv, !three_d, phi, nonlinear, &solver, &out)?;
            let mut manifest = RunManifest::new(
                "solve",
                serde_json::json!({
                    "sample": sample, "subdiv": subdiv, "axisym": !three_d,
                    "phi": phi, "nonlinear": nonlinear, "solver": solver
                }),
            );
            manifest.add_artifact(&path)?;
            manifest.add_artifact(&out.join("solve_report.json"))?;
            println!(
                "solve: flux {} G {} spread {:.2e} div {:.2e} ({} linear iters)",
                report.flux,
                report.mean_gradient,
                report.flux_spread,
                report.max_divergence,
                report.linear_iters
            );
            finish(manifest, &out, started, &[], false)
        }
        Cmd::Bl { sample, subdiv, three_d, out } => {
            let started = Instant::now();
            let (path, report) = campaign::bl_verb(&sample, subdiv, !three_d, &solver, &out)?;
            let mut manifest = RunManifest::new(
                "bl",
                serde_json::json!({
                    "sample": sample, "subdiv": subdiv, "axisym": !three_d, "solver": solver
                }),
            );
            manifest.add_artifact(&path)?;
            manifest.add_artifact(&out.join("normalization_report.json"))?;
            println!(
                "bl: |flux - pi/2| = {:.2e}, interior sup {:.3e}, L2 {:.3e}",
                report.deviation, report.interior_sup, report.l2
            );
            finish(manifest, &out, started, &[], false)
        }
        Cmd::Alpha(args) => run_sweep("alpha", &args),
        Cmd::Convergence(args) => run_sweep("convergence", &args),
        Cmd::Poiseuille(args) => run_sweep("poiseuille", &args),
        Cmd::SaintVenant { eps_den, period, subdiv, seed, out, check } => {
            let started = Instant::now();
            let outcome = campaign::saint_venant_campaign(eps_den, period, subdiv, seed, &solver)?;
            let mut manifest = RunManifest::new(
                "saint-venant",
                serde_json::json!({
                    "eps_den": eps_den, "period": period, "subdiv": subdiv,
                    "seed": seed, "solver": solver
                }),
            );
            write_artifact(&mut manifest, &out, "outcome.json", &serde_json::to_string(&outcome)?)?;
            write_artifact(&mut manifest, &out, "decay.csv", &tables::decay_csv(&outcome))?;
            let series = vec![
                Series {
                    label: "smooth",
                    points: outcome.smooth.ts.iter().cloned().zip(outcome.smooth.energies.iter().cloned()).collect(),
                    color: "#1f77b4",
                },
                Series {
                    label: "rough",
                    points: outcome.rough.ts.iter().cloned().zip(outcome.rough.energies.iter().cloned()).collect(),
                    color: "#d62728",
                },
            ];
            write_artifact(
                &mut manifest,
                &out,
                "decay.svg",
                &svg::line_plot("tail energy H(t)", "t", "H", false, true, &series),
            )?;
            let checks = vec![criteria::saint_venant(&outcome)];
            finish(manifest, &out, started, &checks, check)
        }
        Cmd::Concentration(args) => {
            let cfg = args.to_config()?;
            let started = Instant::now();
            let out = &args.out;
            let outcome = campaign::concentration_campaign(&cfg)?;
            let mut manifest = RunManifest::new("concentration", serde_json::to_value(&cfg)?);
            manifest.failures = outcome.failures.clone();
            write_artifact(&mut manifest, out, "outcome.json", &serde_json::to_string(&outcome)?)?;
            write_artifact(&mut manifest, out, "tails.csv", &tables::tails_csv(&outcome))?;
            write_artifact(&mut manifest, out, "mgf.csv", &tables::mgf_csv(&outcome))?;
            if let Some((_, stats, _)) = outcome.per_eps.first() {
                write_artifact(
                    &mut manifest,
                    out,
                    "tails.svg",
                    &svg::histogram("slice fluctuation X", "X", &stats.xs, 16),
                )?;
            }
            let checks = vec![
                criteria::concentration(&outcome, cfg.ensemble.min(32)),
                criteria::normalization(
                    outcome.worst_normalization_error,
                    outcome.per_eps.iter().map(|(_, s, _)| s.xs.len()).sum(),
                ),
            ];
            finish(manifest, out, started, &checks, args.check)
        }
        Cmd::Correlation { eps_dens, amp_dens, period, amp_period, subdiv, seed, out, check } => {
            let started = Instant::now();
            let mut runs: Vec<(u32, u32)> = eps_dens.iter().map(|&d| (d, period)).collect();
            runs.extend(amp_dens.iter().map(|&d| (d, amp_period)));
            let outcome =
                campaign::correlation_campaign(&runs, &eps_dens, subdiv, seed, &solver)?;
            let mut manifest = RunManifest::new(
                "correlation",
                serde_json::json!({
                    "decay_eps_dens": eps_dens, "amplitude_eps_dens": amp_dens,
                    "period": period, "amp_period": amp_period, "subdiv": subdiv,
                    "seed": seed, "solver": solver
                }),
            );
            write_artifact(&mut manifest, &out, "outcome.json", &serde_json::to_string(&outcome)?)?;
            write_artifact(&mut manifest, &out, "correlation.csv", &tables::correlation_csv(&outcome))?;
            let series: Vec<Series> = outcome
                .runs
                .iter()
                .map(|r| Series {
                    label: if r.eps_den == 8 { "eps 1/8" } else if r.eps_den == 16 { "eps 1/16" } else { "eps 1/32" },
                    points: r
                        .profile
                        .offsets
                        .iter()
                        .cloned()
                        .zip(r.profile.max_profile.iter().cloned())
                        .filter(|&(_, v)| v > 0.0)
                        .collect(),
                    color: if r.eps_den == 8 { "#1f77b4" } else if r.eps_den == 16 { "#d62728" } else { "#2ca02c" },
                })
                .collect();
            write_artifact(
                &mut manifest,
                &out,
                "correlation.svg",
                &svg::line_plot("perturbation decay", "axial offset", "max |dv|", false, true, &series),
            )?;
            let checks = vec![criteria::correlation(&outcome)];
            finish(manifest, &out, started, &checks, check)
        }
        Cmd::Smooth { eps_den, period, phi, subdivs, out, check } => {
            let started = Instant::now();
            let outcome: SmoothOutcome =
                campaign::smooth_convergence(eps_den, period, phi, &subdivs, &solver)?;
            let mut manifest = RunManifest::new(
                "smooth",
                serde_json::json!({
                    "eps_den": eps_den, "period": period, "phi": phi,
                    "subdivs": subdivs, "solver": solver
                }),
            );
            write_artifact(&mut manifest, &out, "outcome.json", &serde_json::to_string(&outcome)?)?;
            let checks = vec![criteria::smooth_oracle(&outcome)];
            finish(manifest, &out, started, &checks, check)
        }
        Cmd::Report { manifest, write } => {
            let summary = roughpipe_cli::report::render(&manifest)?;
            if write {
                let dir = RunManifest::dir(&manifest);
                std::fs::write(dir.join("summary.md"), &summary)?;
                println!("wrote {}", dir.join("summary.md").display());
            } else {
                print!("{summary}");
            }
            Ok(())
        }
    }
}
