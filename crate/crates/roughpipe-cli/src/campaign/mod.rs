//! The verification campaigns.

mod correlation;
mod ensemble;
mod saintvenant;
mod single;
mod smooth;

pub use correlation::{correlation_campaign, CorrelationOutcome, CorrelationRun};
pub use ensemble::{
    concentration_campaign, convergence_campaign, ConcentrationOutcome, ConvergenceOutcome,
    EpsGroup, SampleRecord,
};
pub use saintvenant::{saint_venant_campaign, SaintVenantOutcome};
pub use single::{bl_verb, sample_verb, solve_verb};
pub use smooth::{smooth_convergence, SmoothOutcome};
