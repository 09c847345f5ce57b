//! Unknown numbering on the masked staggered grid.

use crate::geometry::{FaceState, SolidMask};

use super::samples::{u1_idx, ur_idx, uth_idx, ArrayId};

pub const NO_DOF: i32 = -1;

/// Maps interior faces and fluid cells to solver unknowns.
///
/// Velocity unknowns come first (u1, then uth, then ur), pressure unknowns
/// last; faces pinned by no-slip or outside the fluid carry `NO_DOF`.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub u1_dof: Vec<i32>,
    pub uth_dof: Vec<i32>,
    pub ur_dof: Vec<i32>,
    pub p_dof: Vec<i32>,
    pub n_u1: usize,
    pub n_vel: usize,
    pub n_total: usize,
}

impl DofMap {
    pub fn build(mask: &SolidMask) -> Self {
        let g = mask.grid;
        let (n1, nth, nr) = (g.n1, g.nth, g.nr);
        let mut u1_dof = vec![NO_DOF; n1 * nth * nr];
        let mut uth_dof = vec![NO_DOF; n1 * nth * nr];
        let mut ur_dof = vec![NO_DOF; n1 * nth * (nr + 1)];
        let mut p_dof = vec![NO_DOF; n1 * nth * nr];

        let mut next = 0i32;
        for i in 0..n1 {
            for j in 0..nth {
                for k in 0..nr {
                    if mask.u1_state(i, j, k) == FaceState::Interior {
                        u1_dof[u1_idx(nth, nr, i, j, k)] = next;
                        next += 1;
                    }
                }
            }
        }
        let n_u1 = next as usize;
        for i in 0..n1 {
            for j in 0..nth {
                for k in 0..nr {
                    if mask.uth_state(i, j, k) == FaceState::Interior {
                        uth_dof[uth_idx(nth, nr, i, j, k)] = next;
                        next += 1;
                    }
                }
            }
        }
        for i in 0..n1 {
            for j in 0..nth {
                for k in 1..nr {
                    if mask.ur_state(i, j, k) == FaceState::Interior {
                        ur_dof[ur_idx(nth, nr, i, j, k)] = next;
                        next += 1;
                    }
                }
            }
        }
        let n_vel = next as usize;
        for i in 0..n1 {
            for j in 0..nth {
                for k in 0..nr {
                    if mask.is_fluid(i, j, k) {
                        p_dof[g.cell_idx(i, j, k)] = next;
                        next += 1;
                    }
                }
            }
        }
        let n_total = next as usize;
        DofMap { u1_dof, uth_dof, ur_dof, p_dof, n_u1, n_vel, n_total }
    }

    #[inline]
    pub fn vel_dof(&self, array: ArrayId, idx: usize) -> i32 {
        match array {
            ArrayId::U1 => self.u1_dof[idx],
            ArrayId::Uth => self.uth_dof[idx],
            ArrayId::Ur => self.ur_dof[idx],
        }
    }

    /// Scatters a solution vector into full face/cell arrays.
    pub fn scatter<T: Copy + Default>(
        &self,
        x: &[T],
        u1: &mut [T],
        uth: &mut [T],
        ur: &mut [T],
        p: &mut [T],
    ) {
        for (arr, dofs) in [(&mut *u1, &self.u1_dof), (&mut *uth, &self.uth_dof), (&mut *ur, &self.ur_dof)]
        {
            for (v, &d) in arr.iter_mut().zip(dofs.iter()) {
                *v = if d >= 0 { x[d as usize] } else { T::default() };
            }
        }
        for (v, &d) in p.iter_mut().zip(self.p_dof.iter()) {
            *v = if d >= 0 { x[d as usize] } else { T::default() };
        }
    }
}
