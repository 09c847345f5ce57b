//! Discrete flow fields on the masked staggered grid.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::{CylGrid, SolidMask};
use crate::scalar::Scalar;

use super::samples::{u1_idx, ur_idx, uth_idx};

/// Face-centered velocity plus cell-centered pressure fluctuation.
///
/// Arrays cover every face/cell of the grid; faces pinned by no-slip and
/// solid cells hold zeros. The total pressure is the stored periodic
/// fluctuation minus `mean_gradient * x1`.
#[derive(Debug, Clone)]
pub struct StaggeredFlowField<T> {
    pub mask: Arc<SolidMask>,
    pub u1: Vec<T>,
    pub uth: Vec<T>,
    pub ur: Vec<T>,
    pub p: Vec<T>,
    pub mean_gradient: T,
}

impl<T: Scalar> StaggeredFlowField<T> {
    pub fn zeros(mask: Arc<SolidMask>) -> Self {
        let g = mask.grid;
        StaggeredFlowField {
            u1: vec![T::zero(); g.n1 * g.nth * g.nr],
            uth: vec![T::zero(); g.n1 * g.nth * g.nr],
            ur: vec![T::zero(); g.n1 * g.nth * (g.nr + 1)],
            p: vec![T::zero(); g.n_cells()],
            mean_gradient: T::zero(),
            mask,
        }
    }

    pub fn grid(&self) -> &CylGrid {
        &self.mask.grid
    }

    #[inline]
    pub fn u1_at(&self, i: usize, j: usize, k: usize) -> T {
        let g = self.grid();
        self.u1[u1_idx(g.nth, g.nr, i, j, k)]
    }

    #[inline]
    pub fn uth_at(&self, i: usize, j: usize, k: usize) -> T {
        let g = self.grid();
        self.uth[uth_idx(g.nth, g.nr, i, j, k)]
    }

    #[inline]
    pub fn ur_at(&self, i: usize, j: usize, k: usize) -> T {
        let g = self.grid();
        self.ur[ur_idx(g.nth, g.nr, i, j, k)]
    }

    /// Area-weighted axial flux through the slice at face station `i`.
    pub fn flux_at_station(&self, i: usize) -> T {
        let g = *self.grid();
        let hth: T = g.hth();
        let hr: T = g.hr();
        let mut acc = T::zero();
        for j in 0..g.nth {
            for k in 0..g.nr {
                let a = hth * hr * g.r_center::<T>(k);
                acc += self.u1_at(i, j, k) * a;
            }
        }
        acc
    }

    pub fn flux_profile(&self) -> Vec<T> {
        (0..self.grid().n1).map(|i| self.flux_at_station(i)).collect()
    }

    /// Largest absolute deviation of the slice flux from its station-0 value.
    pub fn flux_spread(&self) -> T {
        let p = self.flux_profile();
        let f0 = p[0];
        p.iter().map(|&f| (f - f0).abs()).fold(T::zero(), T::max)
    }

    /// Max absolute discrete divergence (flux imbalance) over fluid cells.
    pub fn max_divergence(&self) -> T {
        let g = *self.grid();
        let h1: T = g.h1();
        let hth: T = g.hth();
        let hr: T = g.hr();
        let mut worst = T::zero();
        for i in 0..g.n1 {
            let ip = g.wrap_i(i as isize + 1);
            for j in 0..g.nth {
                let jp = g.wrap_j(j as isize + 1);
                for k in 0..g.nr {
                    if !self.mask.is_fluid(i, j, k) {
                        continue;
                    }
                    let a1 = hth * hr * g.r_center::<T>(k);
                    let ath = h1 * hr;
                    let mut div = (self.u1_at(ip, j, k) - self.u1_at(i, j, k)) * a1;
                    div += (self.uth_at(i, jp, k) - self.uth_at(i, j, k)) * ath;
                    div += self.ur_at(i, j, k + 1) * h1 * hth * g.r_face::<T>(k + 1)
                        - self.ur_at(i, j, k) * h1 * hth * g.r_face::<T>(k);
                    worst = worst.max(div.abs());
                }
            }
        }
        worst
    }

    /// Shifts the pressure fluctuation to volume-weighted zero mean.
    pub fn gauge_pressure(&mut self) {
        let g = *self.grid();
        let mut vol = T::zero();
        let mut mean = T::zero();
        for i in 0..g.n1 {
            for j in 0..g.nth {
                for k in 0..g.nr {
                    if self.mask.is_fluid(i, j, k) {
                        let v = g.r_center::<T>(k);
                        vol += v;
                        mean += v * self.p[g.cell_idx(i, j, k)];
                    }
                }
            }
        }
        let shift = mean / vol;
        for i in 0..g.n1 {
            for j in 0..g.nth {
                for k in 0..g.nr {
                    let c = g.cell_idx(i, j, k);
                    if self.mask.is_fluid(i, j, k) {
                        self.p[c] -= shift;
                    }
                }
            }
        }
    }

    /// `self += s * other` on all arrays (same mask).
    pub fn axpy(&mut self, s: T, other: &Self) {
        for (a, b) in self.u1.iter_mut().zip(&other.u1) {
            *a += s * *b;
        }
        for (a, b) in self.uth.iter_mut().zip(&other.uth) {
            *a += s * *b;
        }
        for (a, b) in self.ur.iter_mut().zip(&other.ur) {
            *a += s * *b;
        }
        for (a, b) in self.p.iter_mut().zip(&other.p) {
            *a += s * *b;
        }
        self.mean_gradient += s * other.mean_gradient;
    }

    pub fn scale(&mut self, s: T) {
        self.u1.iter_mut().for_each(|v| *v *= s);
        self.uth.iter_mut().for_each(|v| *v *= s);
        self.ur.iter_mut().for_each(|v| *v *= s);
        self.p.iter_mut().for_each(|v| *v *= s);
        self.mean_gradient *= s;
    }

    /// Max absolute velocity difference against another field.
    pub fn max_velocity_diff(&self, other: &Self) -> T {
        let d1 = max_abs_diff(&self.u1, &other.u1);
        let d2 = max_abs_diff(&self.uth, &other.uth);
        let d3 = max_abs_diff(&self.ur, &other.ur);
        d1.max(d2).max(d3)
    }

    pub fn max_velocity(&self) -> T {
        let m1 = self.u1.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let m2 = self.uth.iter().fold(m1, |m, v| m.max(v.abs()));
        self.ur.iter().fold(m2, |m, v| m.max(v.abs()))
    }

    pub fn to_dump(&self, flux: T) -> FieldDump<T> {
        FieldDump {
            grid: *self.grid(),
            mask: (*self.mask).clone(),
            mean_gradient: self.mean_gradient,
            flux,
            u1: self.u1.clone(),
            uth: self.uth.clone(),
            ur: self.ur.clone(),
            p: self.p.clone(),
        }
    }
}

fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max)
}

/// Serializable field record: grid metadata, drive, flux, and the four
/// unknown arrays in row-major (i, j, k) order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDump<T> {
    pub grid: CylGrid,
    pub mask: SolidMask,
    pub mean_gradient: T,
    pub flux: T,
    pub u1: Vec<T>,
    pub uth: Vec<T>,
    pub ur: Vec<T>,
    pub p: Vec<T>,
}

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> FieldDump<T> {
    pub fn to_field(&self) -> StaggeredFlowField<T> {
        StaggeredFlowField {
            mask: Arc::new(self.mask.clone()),
            u1: self.u1.clone(),
            uth: self.uth.clone(),
            ur: self.ur.clone(),
            p: self.p.clone(),
            mean_gradient: self.mean_gradient,
        }
    }
}
