//! Exact staircase fluid/solid masks on aligned cylindrical grids.

use serde::{Deserialize, Serialize};

use super::{CylGrid, RoughPipeSample};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::Result;

/// State of a velocity face on the masked staggered grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceState {
    /// Both adjacent cells are fluid; the face carries an unknown.
    Interior,
    /// Exactly one adjacent cell is fluid (or the face is the outer wall or
    /// the axis); no-slip pins the velocity to zero at the face.
    Wall,
    /// No adjacent fluid cell.
    Outside,
}

/// Per-cell fluid flags derived from a sample's radius field, plus the
/// integer column heights that make the staircase grid-exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolidMask {
    pub grid: CylGrid,
    /// Fluid height of each (i, j) grid column in radial cells: cell (i,j,k)
    /// is fluid iff k < height.
    heights: Vec<usize>,
    n_fluid: usize,
}

impl SolidMask {
    pub fn n_fluid_cells(&self) -> usize {
        self.n_fluid
    }

    #[inline]
    pub fn column_height(&self, i: usize, j: usize) -> usize {
        self.heights[i * self.grid.nth + j]
    }

    #[inline]
    pub fn is_fluid(&self, i: usize, j: usize, k: usize) -> bool {
        k < self.column_height(i, j)
    }

    /// State of the axial-velocity face at (x = i*h1, j, k), between cells
    /// i-1 and i (periodic).
    #[inline]
    pub fn u1_state(&self, i: usize, j: usize, k: usize) -> FaceState {
        let g = &self.grid;
        let il = g.wrap_i(i as isize - 1);
        let a = self.is_fluid(il, j, k);
        let b = self.is_fluid(i, j, k);
        face_state(a, b)
    }

    /// State of the angular-velocity face at (i, theta = j*hth, k), between
    /// cells j-1 and j (periodic).
    #[inline]
    pub fn uth_state(&self, i: usize, j: usize, k: usize) -> FaceState {
        let g = &self.grid;
        let jl = g.wrap_j(j as isize - 1);
        let a = self.is_fluid(i, jl, k);
        let b = self.is_fluid(i, j, k);
        face_state(a, b)
    }

    /// State of the radial-velocity face at (i, j, r = k*hr), between cells
    /// k-1 and k. Face k = 0 is the axis (zero area, zero value); face
    /// k = nr is the outer wall.
    #[inline]
    pub fn ur_state(&self, i: usize, j: usize, k: usize) -> FaceState {
        if k == 0 {
            return if self.is_fluid(i, j, 0) { FaceState::Wall } else { FaceState::Outside };
        }
        if k == self.grid.nr {
            return if self.is_fluid(i, j, k - 1) { FaceState::Wall } else { FaceState::Outside };
        }
        face_state(self.is_fluid(i, j, k - 1), self.is_fluid(i, j, k))
    }

    /// Exact area of the fluid/solid interface (staircase surface):
    /// radial caps plus axial and angular jump walls.
    pub fn interface_area<T: Scalar>(&self) -> T {
        let g = &self.grid;
        let h1: T = g.h1();
        let hth: T = g.hth();
        let hr: T = g.hr();
        let mut area = T::zero();
        for i in 0..g.n1 {
            for j in 0..g.nth {
                let h = self.column_height(i, j);
                // Cap at r = h*hr spanning the cell footprint.
                area += h1 * hth * g.r_face::<T>(h);
                // Axial jump wall against the next column in x1.
                let hn = self.column_height(g.wrap_i(i as isize + 1), j);
                let (lo, hi) = (h.min(hn), h.max(hn));
                for k in lo..hi {
                    area += hth * g.r_center::<T>(k) * hr;
                }
                if g.nth > 1 {
                    // Angular jump wall against the next column in theta.
                    let hn = self.column_height(i, g.wrap_j(j as isize + 1));
                    let (lo, hi) = (h.min(hn), h.max(hn));
                    area += T::from_usize(hi - lo).unwrap() * h1 * hr;
                }
            }
        }
        area
    }
}

#[inline]
fn face_state(a: bool, b: bool) -> FaceState {
    match (a, b) {
        (true, true) => FaceState::Interior,
        (false, false) => FaceState::Outside,
        _ => FaceState::Wall,
    }
}

/// Derives the exact staircase mask of a sample on an aligned grid.
///
/// Cell (i,j,k) is fluid iff its radial center lies below the column's
/// radius, i.e. iff (k+1)*hr <= rho; with aligned grids this is the integer
/// comparison k < M*s + level*s/2, so the fluid boundary coincides exactly
/// with the radius field's staircase surface.
pub fn build_mask(sample: &RoughPipeSample, grid: &CylGrid) -> Result<SolidMask> {
    if grid.eps_den != sample.eps_den {
        return Err(Error::MisalignedGrid(format!(
            "grid eps 1/{} vs sample eps 1/{}",
            grid.eps_den, sample.eps_den
        )));
    }
    if grid.period_cells != sample.period_cells {
        return Err(Error::MisalignedGrid(format!(
            "grid period {} cells vs sample {}",
            grid.period_cells, sample.period_cells
        )));
    }
    if grid.axisym() && !sample.axisym {
        return Err(Error::MisalignedGrid(
            "axisymmetric grid requires an axisymmetric sample".into(),
        ));
    }
    let s = grid.subdiv as usize;
    if s % 2 != 0 && sample.levels.iter().any(|&l| l % 2 != 0) {
        return Err(Error::MisalignedGrid(
            "odd subdivision cannot align radius values on the eps/2 lattice".into(),
        ));
    }
    let base = grid.eps_den as usize * s;
    let mut heights = vec![0usize; grid.n1 * grid.nth];
    let mut n_fluid = 0usize;
    for i in 0..grid.n1 {
        for j in 0..grid.nth {
            let (ci, cj) = grid.rough_col(i, j);
            let level = sample.level(ci, cj) as usize;
            let h = base + level * s / 2;
            debug_assert!(h <= grid.nr);
            heights[i * grid.nth + j] = h;
            n_fluid += h;
        }
    }
    let mask = SolidMask {
        grid: *grid,
        heights,
        n_fluid,
    };
    // Columns all reach at least r = 1, so the fluid set contains the unit
    // cylinder and is connected through it; verify both anyway.
    if mask.heights.iter().any(|&h| h < base) {
        return Err(Error::DisconnectedFluid { components: 2 });
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bernoulli_from_bits, sample_bernoulli, smooth_sample};

    #[test]
    fn smooth_mask_fills_unit_cylinder() {
        let sample = smooth_sample(4, 4).unwrap();
        let grid = CylGrid::new(4, 4, 2, true).unwrap();
        let mask = build_mask(&sample, &grid).unwrap();
        for k in 0..grid.nr {
            let fluid = mask.is_fluid(0, 0, k);
            let rc: f64 = grid.r_center(k);
            assert_eq!(fluid, rc < 1.0);
        }
        assert_eq!(mask.n_fluid_cells(), grid.n1 * grid.nth * grid.unit_radius_face());
    }

    #[test]
    fn raised_bit_opens_radial_band() {
        let mut bits = vec![0u8; 16];
        bits[0] = 1; // rough cell (0, 0)
        let sample = bernoulli_from_bits(4, 4, &bits, false).unwrap();
        let grid = CylGrid::new(4, 4, 2, false).unwrap();
        let mask = build_mask(&sample, &grid).unwrap();
        // Raised column spans the full eps band; neighbours stop at r = 1.
        let unit = grid.unit_radius_face();
        assert!(mask.is_fluid(0, 0, unit));
        assert!(mask.is_fluid(1, 1, unit + 1));
        assert!(!mask.is_fluid(2, 0, unit));
        assert_eq!(mask.column_height(0, 0), grid.nr);
    }

    #[test]
    fn all_ones_matches_smooth_pipe_radius_one_plus_eps() {
        let ones = bernoulli_from_bits(4, 4, &vec![1u8; 16], false).unwrap();
        let grid3 = CylGrid::new(4, 4, 2, false).unwrap();
        let mask = build_mask(&ones, &grid3).unwrap();
        // Direct count: every column is full.
        assert_eq!(mask.n_fluid_cells(), grid3.n_cells());
    }

    #[test]
    fn misaligned_grid_rejected() {
        let sample = sample_bernoulli(8, 8, 1, false).unwrap();
        let grid = CylGrid::new(4, 8, 2, false).unwrap();
        assert!(build_mask(&sample, &grid).is_err());
        let grid_axi = CylGrid::new(8, 8, 2, true).unwrap();
        assert!(build_mask(&sample, &grid_axi).is_err());
    }

    #[test]
    fn odd_subdivision_rejected_for_poisson_levels() {
        let mut s = smooth_sample(4, 4).unwrap();
        s.levels[3] = 1; // radius 1 + eps/2 needs hr | eps/2
        let grid = CylGrid::new(4, 4, 1, false).unwrap();
        assert!(build_mask(&s, &grid).is_err());
        let grid2 = CylGrid::new(4, 4, 2, false).unwrap();
        assert!(build_mask(&s, &grid2).is_ok());
    }

    #[test]
    fn interface_area_matches_analytic_staircase() {
        // One raised rough cell on an otherwise smooth pipe: the cap over the
        // raised cell sits at 1+eps, the rest at 1, and four side walls of
        // height eps close the staircase.
        let mut bits = vec![0u8; 16];
        bits[5] = 1;
        let sample = bernoulli_from_bits(4, 4, &bits, false).unwrap();
        let grid = CylGrid::new(4, 4, 2, false).unwrap();
        let mask = build_mask(&sample, &grid).unwrap();
        let eps = 0.25f64;
        let two_pi = 2.0 * std::f64::consts::PI;
        let cell_th = two_pi * eps; // angular cell width in radians
        let n_cells = 16.0;
        let cap_smooth = (n_cells - 1.0) * eps * cell_th * 1.0;
        let cap_raised = eps * cell_th * (1.0 + eps);
        // Axial side walls: two walls of angular width cell_th, radial span
        // [1, 1+eps], area = cell_th * mean_r * eps each, where the exact
        // integral over r gives mean_r = 1 + eps/2.
        let wall_axial = 2.0 * cell_th * (1.0 + eps / 2.0) * eps;
        // Angular side walls: two walls of axial width eps and radial span eps.
        let wall_angular = 2.0 * eps * eps;
        let analytic = cap_smooth + cap_raised + wall_axial + wall_angular;
        let computed: f64 = mask.interface_area();
        assert!(
            (computed - analytic).abs() < 1e-12,
            "staircase area {computed} vs analytic {analytic}"
        );
    }
}
