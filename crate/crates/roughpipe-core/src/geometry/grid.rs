//! Staggered cylindrical grid aligned with the rough-cell lattice.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{sc, Scalar};
use crate::Result;

/// Cylindrical finite-volume grid over one axial period.
///
/// Coordinates are `(x1, theta, r)` with cells of size `h1 x hth x hr`,
/// `h1 = eps/subdiv`, `hr = eps/subdiv`, and `hth = 2*pi/nth`. The grid is
/// periodic in `x1` and `theta` and spans `r in [0, 1+eps]`. Each `eps`-sized
/// rough cell is subdivided `subdiv` times per direction, so every admissible
/// radius jump lies exactly on a radial grid face and every rough-cell wall
/// on an axial/angular face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylGrid {
    /// M = 1/eps.
    pub eps_den: u32,
    /// Axial period in units of eps.
    pub period_cells: u32,
    /// Grid cells per rough cell and per direction (s).
    pub subdiv: u32,
    /// Axial cells: subdiv * period_cells.
    pub n1: usize,
    /// Angular cells: subdiv * eps_den, or 1 in axisymmetric mode.
    pub nth: usize,
    /// Radial cells: subdiv * (eps_den + 1), reaching r = 1 + eps.
    pub nr: usize,
}

impl CylGrid {
    pub fn new(eps_den: u32, period_cells: u32, subdiv: u32, axisym: bool) -> Result<Self> {
        if eps_den == 0 {
            return Err(Error::InvalidEpsilon("1/epsilon = 0".into()));
        }
        if period_cells == 0 {
            return Err(Error::InvalidPeriod("T/epsilon = 0".into()));
        }
        if subdiv == 0 {
            return Err(Error::InvalidArgument("subdiv must be positive".into()));
        }
        Ok(CylGrid {
            eps_den,
            period_cells,
            subdiv,
            n1: (subdiv * period_cells) as usize,
            nth: if axisym { 1 } else { (subdiv * eps_den) as usize },
            nr: (subdiv * (eps_den + 1)) as usize,
        })
    }

    pub fn axisym(&self) -> bool {
        self.nth == 1
    }

    pub fn epsilon<T: Scalar>(&self) -> T {
        T::one() / sc::<T>(self.eps_den as f64)
    }

    pub fn period<T: Scalar>(&self) -> T {
        sc::<T>(self.period_cells as f64) * self.epsilon()
    }

    pub fn h1<T: Scalar>(&self) -> T {
        self.period::<T>() / sc(self.n1 as f64)
    }

    pub fn hth<T: Scalar>(&self) -> T {
        sc::<T>(2.0 * std::f64::consts::PI) / sc(self.nth as f64)
    }

    pub fn hr<T: Scalar>(&self) -> T {
        self.epsilon::<T>() / sc(self.subdiv as f64)
    }

    /// Radius of the radial face k (k = 0 is the axis).
    pub fn r_face<T: Scalar>(&self, k: usize) -> T {
        sc::<T>(k as f64) * self.hr()
    }

    /// Radius of cell-center level k.
    pub fn r_center<T: Scalar>(&self, k: usize) -> T {
        sc::<T>(k as f64 + 0.5) * self.hr()
    }

    /// Axial coordinate of the axial face i.
    pub fn x_face<T: Scalar>(&self, i: usize) -> T {
        sc::<T>(i as f64) * self.h1()
    }

    pub fn x_center<T: Scalar>(&self, i: usize) -> T {
        sc::<T>(i as f64 + 0.5) * self.h1()
    }

    pub fn th_center<T: Scalar>(&self, j: usize) -> T {
        sc::<T>(j as f64 + 0.5) * self.hth()
    }

    /// Index of the radial face at r = 1 (unit-radius wall of the smooth pipe).
    pub fn unit_radius_face(&self) -> usize {
        (self.subdiv * self.eps_den) as usize
    }

    pub fn n_cells(&self) -> usize {
        self.n1 * self.nth * self.nr
    }

    #[inline]
    pub fn cell_idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.nth + j) * self.nr + k
    }

    /// Rough-cell column indices for grid cell (i, j).
    #[inline]
    pub fn rough_col(&self, i: usize, j: usize) -> (usize, usize) {
        let ci = i / self.subdiv as usize;
        let cj = if self.axisym() { 0 } else { j / self.subdiv as usize };
        (ci, cj)
    }

    #[inline]
    pub fn wrap_i(&self, i: isize) -> usize {
        i.rem_euclid(self.n1 as isize) as usize
    }

    #[inline]
    pub fn wrap_j(&self, j: isize) -> usize {
        j.rem_euclid(self.nth as isize) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_dimensions_align_with_roughness() {
        let g = CylGrid::new(8, 8, 2, false).unwrap();
        assert_eq!(g.n1, 16);
        assert_eq!(g.nth, 16);
        assert_eq!(g.nr, 18);
        assert_eq!(g.unit_radius_face(), 16);
        let h1: f64 = g.h1();
        let eps: f64 = g.epsilon();
        assert_eq!(h1 * 2.0, eps); // h1 divides eps exactly
        let hr: f64 = g.hr();
        assert_eq!(g.r_face::<f64>(g.nr), 1.0 + eps);
        assert_eq!(hr, eps / 2.0);
    }

    #[test]
    fn axisym_grid_has_single_angular_cell() {
        let g = CylGrid::new(8, 4, 2, true).unwrap();
        assert_eq!(g.nth, 1);
        let hth: f64 = g.hth();
        assert!((hth - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }
}
