//! Samplers for the two random rough-cylinder families and their validation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// How a sample's radius field was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    /// Independent fair bit per boundary cell; radius in {1, 1+eps}.
    Bernoulli3D,
    /// One fair bit per axial ring, replicated over the angle.
    BernoulliAxisym,
    /// Unit-intensity Poisson points on the rescaled boundary strip; radius
    /// raised to 1+eps/2 on the cell footprint of each point.
    PoissonBump,
    /// Radius identically 1.
    Smooth,
}

impl Construction {
    pub fn is_bernoulli(self) -> bool {
        matches!(self, Construction::Bernoulli3D | Construction::BernoulliAxisym)
    }

    /// Levels admissible for this construction (radius = 1 + level*eps/2).
    pub fn admissible_levels(self) -> &'static [u8] {
        match self {
            Construction::Bernoulli3D | Construction::BernoulliAxisym => &[0, 2],
            Construction::PoissonBump => &[0, 1],
            Construction::Smooth => &[0],
        }
    }
}

/// A periodized random rough cylinder.
///
/// The radius over boundary cell `(i, j)` (axial cell `i` of width `eps`,
/// angular cell `j` of width `2*pi*eps`) is `1 + levels[i*M + j] * eps/2`
/// with `eps = 1/eps_den`. Levels are stored row-major in `i`, and the axial
/// period is `period_cells * eps`. Storing integer levels and denominators
/// keeps the geometry exact and serialization bit-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoughPipeSample {
    /// M = 1/eps.
    pub eps_den: u32,
    /// Axial period in units of eps.
    pub period_cells: u32,
    pub construction: Construction,
    pub seed: u64,
    /// Radius independent of the angular index.
    pub axisym: bool,
    /// Row-major `(period_cells x eps_den)` radius levels in {0, 1, 2}.
    pub levels: Vec<u8>,
}

impl RoughPipeSample {
    pub fn epsilon(&self) -> f64 {
        1.0 / self.eps_den as f64
    }

    /// Axial period T = period_cells * eps.
    pub fn period(&self) -> f64 {
        self.period_cells as f64 / self.eps_den as f64
    }

    pub fn n_axial_cells(&self) -> usize {
        self.period_cells as usize
    }

    pub fn n_angular_cells(&self) -> usize {
        self.eps_den as usize
    }

    pub fn level(&self, i: usize, j: usize) -> u8 {
        self.levels[i * self.eps_den as usize + j]
    }

    pub fn radius(&self, i: usize, j: usize) -> f64 {
        1.0 + self.level(i, j) as f64 * self.epsilon() / 2.0
    }

    pub fn max_level(&self) -> u8 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_params(eps_den: u32, period_cells: u32) -> Result<()> {
    if eps_den == 0 {
        return Err(Error::InvalidEpsilon("1/epsilon = 0".into()));
    }
    if period_cells == 0 {
        return Err(Error::InvalidPeriod("T/epsilon = 0".into()));
    }
    Ok(())
}

/// Smooth pipe of radius 1 on the same indexing as the random families.
pub fn smooth_sample(eps_den: u32, period_cells: u32) -> Result<RoughPipeSample> {
    check_params(eps_den, period_cells)?;
    Ok(RoughPipeSample {
        eps_den,
        period_cells,
        construction: Construction::Smooth,
        seed: 0,
        axisym: true,
        levels: vec![0; (eps_den * period_cells) as usize],
    })
}

/// Bernoulli-radii cylinder: one independent fair bit per cell (or per axial
/// ring when `axisym`), radius `1 + eps * bit`. Deterministic in the seed;
/// bits are drawn row-major in `i`, then `j`.
pub fn sample_bernoulli(
    eps_den: u32,
    period_cells: u32,
    seed: u64,
    axisym: bool,
) -> Result<RoughPipeSample> {
    check_params(eps_den, period_cells)?;
    let m = eps_den as usize;
    let ni = period_cells as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = vec![0u8; ni * m];
    if axisym {
        for i in 0..ni {
            let bit = rng.gen_bool(0.5);
            if bit {
                levels[i * m..(i + 1) * m].fill(2);
            }
        }
    } else {
        for v in levels.iter_mut() {
            if rng.gen_bool(0.5) {
                *v = 2;
            }
        }
    }
    Ok(RoughPipeSample {
        eps_den,
        period_cells,
        construction: if axisym {
            Construction::BernoulliAxisym
        } else {
            Construction::Bernoulli3D
        },
        seed,
        axisym,
        levels,
    })
}

/// Bernoulli sample with prescribed bits (row-major, one per cell, or one per
/// ring when `axisym`). Test hook for forced-zero / all-ones geometries.
pub fn bernoulli_from_bits(
    eps_den: u32,
    period_cells: u32,
    bits: &[u8],
    axisym: bool,
) -> Result<RoughPipeSample> {
    check_params(eps_den, period_cells)?;
    let m = eps_den as usize;
    let ni = period_cells as usize;
    let expected = if axisym { ni } else { ni * m };
    if bits.len() != expected {
        return Err(Error::InvalidArgument(format!(
            "expected {expected} bits, got {}",
            bits.len()
        )));
    }
    let mut levels = vec![0u8; ni * m];
    for i in 0..ni {
        for j in 0..m {
            let bit = if axisym { bits[i] } else { bits[i * m + j] };
            if bit > 1 {
                return Err(Error::InvalidArgument("bits must be 0 or 1".into()));
            }
            levels[i * m + j] = 2 * bit;
        }
    }
    Ok(RoughPipeSample {
        eps_den,
        period_cells,
        construction: if axisym {
            Construction::BernoulliAxisym
        } else {
            Construction::Bernoulli3D
        },
        seed: 0,
        axisym,
        levels,
    })
}

/// Points of the unit-intensity Poisson process on the periodized rescaled
/// boundary strip, returned in unscaled coordinates `(x1, theta)` with
/// `x1 in [0, T)`, `theta in [0, 2*pi)`.
pub fn poisson_points(eps_den: u32, period_cells: u32, seed: u64) -> Vec<(f64, f64)> {
    let eps = 1.0 / eps_den as f64;
    let period = period_cells as f64 * eps;
    // Rescaled strip [0, T/eps) x [0, 2*pi/eps) has this area.
    let intensity_area = (period_cells as f64) * 2.0 * std::f64::consts::PI * eps_den as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = Poisson::new(intensity_area)
        .expect("positive intensity")
        .sample(&mut rng) as usize;
    (0..n)
        .map(|_| {
            let x1 = rng.gen_range(0.0..period);
            let th = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            (x1, th)
        })
        .collect()
}

fn periodic_dist(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Poisson-boundary cylinder: radius `1 + eps/2` on the `2*eps`-wide
/// cylindrical cube around each sampled point, rasterized to the boundary
/// cells whose centers the cube covers (bumps wrap periodically across both
/// seams; overlaps merge by union).
pub fn sample_poisson(eps_den: u32, period_cells: u32, seed: u64) -> Result<RoughPipeSample> {
    check_params(eps_den, period_cells)?;
    let points = poisson_points(eps_den, period_cells, seed);
    Ok(rasterize_poisson(eps_den, period_cells, seed, &points))
}

/// Cell (i, j) is raised iff its center lies in some cube
/// `{|x1 - z1| < eps, |theta - theta_z| < eps}` (periodic distances; the
/// angular half-width is eps radians, i.e. arc length eps on the unit
/// cylinder).
pub(crate) fn rasterize_poisson(
    eps_den: u32,
    period_cells: u32,
    seed: u64,
    points: &[(f64, f64)],
) -> RoughPipeSample {
    let eps = 1.0 / eps_den as f64;
    let period = period_cells as f64 * eps;
    let two_pi = 2.0 * std::f64::consts::PI;
    let m = eps_den as usize;
    let ni = period_cells as usize;
    let mut levels = vec![0u8; ni * m];
    let th_cell = two_pi * eps; // angular cell width in radians
    for &(z1, zth) in points {
        // Axial cells whose center can be within eps of z1.
        let i_lo = ((z1 - eps) / eps).floor() as i64 - 1;
        let i_hi = ((z1 + eps) / eps).ceil() as i64 + 1;
        for ii in i_lo..=i_hi {
            let i = ii.rem_euclid(ni as i64) as usize;
            let xc = (i as f64 + 0.5) * eps;
            if periodic_dist(xc, z1, period) >= eps {
                continue;
            }
            for j in 0..m {
                let tc = (j as f64 + 0.5) * th_cell;
                if periodic_dist(tc, zth, two_pi) < eps {
                    levels[i * m + j] = 1;
                }
            }
        }
    }
    RoughPipeSample {
        eps_den,
        period_cells,
        construction: Construction::PoissonBump,
        seed,
        axisym: false,
        levels,
    }
}

/// Copy of a Bernoulli sample with the bit of cell `(i, j)` flipped.
/// For the axisymmetric family the bit belongs to the whole ring `i`.
pub fn perturb_one_cell(sample: &RoughPipeSample, i: usize, j: usize) -> Result<RoughPipeSample> {
    if !sample.construction.is_bernoulli() {
        return Err(Error::NotBernoulli(format!("{:?}", sample.construction)));
    }
    let ni = sample.n_axial_cells();
    let m = sample.n_angular_cells();
    if i >= ni || j >= m {
        return Err(Error::CellIndexOutOfRange { i, j, ni, nj: m });
    }
    let mut out = sample.clone();
    let flip = |v: &mut u8| *v = if *v == 0 { 2 } else { 0 };
    if sample.axisym {
        for jj in 0..m {
            flip(&mut out.levels[i * m + jj]);
        }
    } else {
        flip(&mut out.levels[i * m + j]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThicknessViolation {
    pub i: usize,
    pub j: usize,
    pub message: String,
}

/// Outcome of `validate_thickness`; failures carry located violations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThicknessReport {
    pub pass: bool,
    pub violations: Vec<ThicknessViolation>,
}

/// Checks the thickness condition (radius in [1, 1+eps]), level admissibility
/// for the construction, axisymmetry consistency, and fluid connectivity.
pub fn validate_thickness(sample: &RoughPipeSample) -> ThicknessReport {
    let mut violations = Vec::new();
    let m = sample.n_angular_cells();
    let admissible = sample.construction.admissible_levels();
    for i in 0..sample.n_axial_cells() {
        for j in 0..m {
            let level = sample.level(i, j);
            if level > 2 {
                violations.push(ThicknessViolation {
                    i,
                    j,
                    message: format!("radius 1 + {}*eps/2 exceeds 1+eps", level),
                });
            } else if !admissible.contains(&level) {
                violations.push(ThicknessViolation {
                    i,
                    j,
                    message: format!(
                        "level {} not admissible for {:?}",
                        level, sample.construction
                    ),
                });
            }
            if sample.axisym && j > 0 && level != sample.level(i, 0) {
                violations.push(ThicknessViolation {
                    i,
                    j,
                    message: "axisymmetric sample varies with the angle".into(),
                });
            }
        }
    }
    // The fluid set of any admissible radius field contains the unit cylinder
    // and every raised band attaches to it radially, so connectivity can only
    // fail through an invalid level; record it against the same report.
    ThicknessReport {
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_rejects_bad_params() {
        assert!(sample_bernoulli(0, 4, 1, false).is_err());
        assert!(sample_bernoulli(4, 0, 1, false).is_err());
    }

    #[test]
    fn eps_quarter_gives_four_angular_cells() {
        let s = sample_bernoulli(4, 4, 7, false).unwrap();
        assert_eq!(s.n_angular_cells(), 4);
        assert_eq!(s.levels.len(), 16);
    }

    #[test]
    fn bernoulli_deterministic_in_seed() {
        let a = sample_bernoulli(8, 8, 42, false).unwrap();
        let b = sample_bernoulli(8, 8, 42, false).unwrap();
        let c = sample_bernoulli(8, 8, 43, false).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn forced_zero_bits_give_smooth_geometry() {
        let ni = 8 * 1;
        let s = bernoulli_from_bits(8, 8, &vec![0u8; 64], false).unwrap();
        assert!(s.levels.iter().all(|&l| l == 0));
        assert_eq!(s.n_axial_cells(), ni);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(s.radius(i, j), 1.0);
            }
        }
    }

    #[test]
    fn bernoulli_mean_level_matches_fair_coin() {
        // Monte Carlo over >= 1e4 cells against the exact Bernoulli mean 1/2:
        // (radius - 1)/eps averages to 1/2 with binomial sd 0.5/sqrt(n).
        let s = sample_bernoulli(8, 1563, 2024, false).unwrap(); // 12504 cells
        let n = s.levels.len() as f64;
        let mean_bit = s.levels.iter().map(|&l| (l / 2) as f64).sum::<f64>() / n;
        let sd = 0.5 / n.sqrt();
        assert!(
            (mean_bit - 0.5).abs() < 5.0 * sd,
            "mean bit {mean_bit} deviates from 1/2 beyond 5 sd ({sd})"
        );
    }

    #[test]
    fn axisym_rings_are_constant() {
        let s = sample_bernoulli(8, 16, 5, true).unwrap();
        for i in 0..16 {
            for j in 1..8 {
                assert_eq!(s.level(i, j), s.level(i, 0));
            }
        }
        assert!(validate_thickness(&s).pass);
    }

    #[test]
    fn bernoulli_per_cell_frequency_uniform_chi_square() {
        // Discrete stationarity seen through the periodic window: every cell
        // carries the same bit law. Chi-square over 16 cells, 1e4 seeds,
        // 1% critical value chi2_{0.99}(16) = 32.0.
        let ni = 4;
        let m = 4usize;
        let n_seeds = 10_000u64;
        let mut counts = vec![0u64; ni * m];
        for seed in 0..n_seeds {
            let s = sample_bernoulli(4, 4, seed, false).unwrap();
            for (c, &l) in counts.iter_mut().zip(&s.levels) {
                *c += (l / 2) as u64;
            }
        }
        let expected = n_seeds as f64 / 2.0;
        let var = n_seeds as f64 * 0.25;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / var
            })
            .sum();
        assert!(chi2 < 32.0, "chi-square {chi2} exceeds 1% critical value 32.0");
    }

    #[test]
    fn poisson_point_count_matches_intensity() {
        // Expected count = area of the rescaled strip = (T/eps)(2*pi/eps).
        // At eps = 1/4, T = 1 this is 32*pi; the mean over 1000 seeds has
        // sd sqrt(lambda/1000) ~ 0.32.
        let lambda = 32.0 * std::f64::consts::PI;
        let n_seeds = 1000;
        let mut total = 0usize;
        for seed in 0..n_seeds {
            total += poisson_points(4, 4, seed).len();
        }
        let mean = total as f64 / n_seeds as f64;
        let sd = (lambda / n_seeds as f64).sqrt();
        assert!(
            (mean - lambda).abs() < 5.0 * sd,
            "mean point count {mean} deviates from {lambda}"
        );
    }

    #[test]
    fn poisson_empty_process_gives_smooth_radius() {
        let s = rasterize_poisson(4, 4, 0, &[]);
        assert!(s.levels.iter().all(|&l| l == 0));
    }

    #[test]
    fn poisson_levels_within_thickness_bound() {
        for seed in 0..100 {
            let s = sample_poisson(8, 8, seed).unwrap();
            assert!(s.levels.iter().all(|&l| l <= 1));
            assert!(validate_thickness(&s).pass, "seed {seed}");
        }
    }

    #[test]
    fn poisson_bump_wraps_seams() {
        // A point right on the axial seam raises cells on both ends.
        let s = rasterize_poisson(8, 8, 0, &[(0.0, 0.4)]);
        let m = 8;
        assert_eq!(s.level(0, 0), 1);
        assert_eq!(s.level(m - 1, 0), 1);
    }

    #[test]
    fn perturb_flips_single_cell_and_is_involutive() {
        let zero = bernoulli_from_bits(4, 4, &vec![0u8; 16], false).unwrap();
        let p = perturb_one_cell(&zero, 0, 0).unwrap();
        assert_eq!(p.level(0, 0), 2);
        let diff: usize = p
            .levels
            .iter()
            .zip(&zero.levels)
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(diff, 1);
        let back = perturb_one_cell(&p, 0, 0).unwrap();
        assert_eq!(back.levels, zero.levels);
        assert!(validate_thickness(&p).pass);
    }

    #[test]
    fn perturb_rejects_bad_inputs() {
        let s = smooth_sample(4, 4).unwrap();
        assert!(perturb_one_cell(&s, 0, 0).is_err());
        let b = sample_bernoulli(4, 4, 1, false).unwrap();
        assert!(perturb_one_cell(&b, 4, 0).is_err());
        assert!(perturb_one_cell(&b, 0, 4).is_err());
    }

    #[test]
    fn thickness_violation_is_located() {
        let mut s = sample_bernoulli(4, 4, 9, false).unwrap();
        s.levels[2 * 4 + 3] = 4; // radius 1 + 2*eps
        let report = validate_thickness(&s);
        assert!(!report.pass);
        assert!(report.violations.iter().any(|v| v.i == 2 && v.j == 3));
    }

    #[test]
    fn sample_json_round_trip_is_bit_exact() {
        let s = sample_poisson(8, 16, 77).unwrap();
        let text = s.to_json().unwrap();
        let back = RoughPipeSample::from_json(&text).unwrap();
        assert_eq!(s, back);
    }
}
