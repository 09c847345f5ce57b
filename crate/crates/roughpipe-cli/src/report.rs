//! Human-readable summaries rendered from a run manifest. Rendering is a
//! pure function of the manifest and its artifacts, so re-rendering is
//! byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::campaign::{
    ConcentrationOutcome, ConvergenceOutcome, CorrelationOutcome, SaintVenantOutcome,
    SmoothOutcome,
};
use crate::criteria::{self, CriterionOutcome};
use crate::manifest::RunManifest;

fn pass_str(c: &CriterionOutcome) -> String {
    format!(
        "- criterion {} ({}): {} — {}",
        c.id,
        c.name,
        if c.pass { "PASS" } else { "FAIL" },
        c.detail
    )
}

/// Renders the summary of a manifest; areas covered depend on the campaign.
pub fn render(manifest_path: &Path) -> anyhow::Result<String> {
    let manifest = RunManifest::load(manifest_path)?;
    let dir = RunManifest::dir(manifest_path);
    let mut s = String::new();
    writeln!(s, "# roughpipe run summary\n").unwrap();
    writeln!(s, "campaign: `{}` (version {})\n", manifest.campaign, manifest.version).unwrap();
    writeln!(s, "## configuration\n\n```json\n{}\n```\n", serde_json::to_string_pretty(&manifest.config)?).unwrap();

    if !manifest.failures.is_empty() {
        writeln!(s, "## failure ledger\n").unwrap();
        for f in &manifest.failures {
            writeln!(s, "- {f}").unwrap();
        }
        writeln!(s).unwrap();
    }

    let outcome_path = dir.join("outcome.json");
    if outcome_path.exists() {
        let text = std::fs::read_to_string(&outcome_path)?;
        writeln!(s, "## checks\n").unwrap();
        match manifest.campaign.as_str() {
            "convergence" | "poiseuille" | "alpha" => {
                let out: ConvergenceOutcome = serde_json::from_str(&text)?;
                for c in [
                    criteria::dirichlet_rates(&out),
                    criteria::navier_rates(&out),
                    criteria::alpha_quality(&out),
                    criteria::poiseuille_law(&out),
                ] {
                    writeln!(s, "{}", pass_str(&c)).unwrap();
                }
                writeln!(s, "\n## slip-model table\n").unwrap();
                writeln!(s, "| epsilon | N | alpha | beta | lambda | misfit |").unwrap();
                writeln!(s, "|---|---|---|---|---|---|").unwrap();
                for g in &out.groups {
                    writeln!(
                        s,
                        "| {} | {} | {:.4} | {:.4} | {:.5} | {:.3e} |",
                        g.epsilon,
                        g.model.ensemble_size,
                        g.model.alpha,
                        g.model.beta,
                        g.model.lambda,
                        g.model.u1_misfit
                    )
                    .unwrap();
                }
            }
            "smooth" => {
                let out: SmoothOutcome = serde_json::from_str(&text)?;
                writeln!(s, "{}", pass_str(&criteria::smooth_oracle(&out))).unwrap();
            }
            "saint-venant" => {
                let out: SaintVenantOutcome = serde_json::from_str(&text)?;
                writeln!(s, "{}", pass_str(&criteria::saint_venant(&out))).unwrap();
            }
            "correlation" => {
                let out: CorrelationOutcome = serde_json::from_str(&text)?;
                writeln!(s, "{}", pass_str(&criteria::correlation(&out))).unwrap();
            }
            "concentration" => {
                let out: ConcentrationOutcome = serde_json::from_str(&text)?;
                writeln!(s, "{}", pass_str(&criteria::concentration(&out, 1))).unwrap();
                writeln!(
                    s,
                    "{}",
                    pass_str(&criteria::normalization(
                        out.worst_normalization_error,
                        out.per_eps.iter().map(|(_, st, _)| st.xs.len()).sum()
                    ))
                )
                .unwrap();
            }
            _ => {}
        }
        writeln!(s).unwrap();
    }

    writeln!(s, "## artifacts\n").unwrap();
    for a in &manifest.artifacts {
        writeln!(s, "- `{}` (sha256 {})", a.path, &a.sha256[..16.min(a.sha256.len())]).unwrap();
    }
    Ok(s)
}
