//! Random rough-pipe domains and their grid-exact staircase masks.
//!
//! A rough pipe is a periodized cylinder whose radius on each `eps x eps`
//! boundary cell takes one of finitely many levels above the unit radius.
//! All radius values are rational multiples of `eps/2`, so a grid whose
//! radial spacing divides `eps/2` represents the boundary exactly as a
//! staircase with every jump on a grid face.

mod grid;
mod mask;
mod sample;

pub use grid::CylGrid;
pub use mask::{build_mask, FaceState, SolidMask};
pub use sample::{
    bernoulli_from_bits, poisson_points, sample_bernoulli, sample_poisson, smooth_sample,
    Construction, RoughPipeSample, ThicknessReport, ThicknessViolation,
};
pub use sample::{perturb_one_cell, validate_thickness};
