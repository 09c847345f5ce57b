//! Assembly of the symmetric Stokes saddle-point system.

use crate::geometry::SolidMask;
use crate::scalar::Scalar;

use super::layout::DofMap;
use super::samples::{for_each_grad_sample, u1_idx, ur_idx, uth_idx};
use super::sparse::Csr;

/// Assembled system `[[A, G], [G^T, 0]] [u, p] = [b, 0]` where `A` is the
/// variational viscous operator and `G^T u` is minus the volume-integrated
/// divergence per fluid cell, so the pressure unknown is the physical
/// pressure fluctuation.
pub struct StokesSystem<T> {
    pub dofs: DofMap,
    pub mat: Csr<T>,
    /// Diagonal entries of the SPD preconditioner inverse.
    pub m_inv: Vec<T>,
}

pub fn build_system<T: Scalar>(mask: &SolidMask) -> StokesSystem<T> {
    let dofs = DofMap::build(mask);
    let g = mask.grid;
    let n = dofs.n_total;
    let mut trips: Vec<(u32, u32, T)> = Vec::new();

    // Viscous block from the gradient samples: w * l(u)^2 / 2 contributes
    // w * c_a * c_b to every DOF pair (a, b) of the sample.
    for_each_grad_sample::<T, _>(mask, |s| {
        let terms = s.terms();
        for (ti, a) in terms.iter().enumerate() {
            let da = dofs.vel_dof(a.array, a.idx);
            if da < 0 {
                continue;
            }
            for b in &terms[ti..] {
                let db = dofs.vel_dof(b.array, b.idx);
                if db < 0 {
                    continue;
                }
                let v = s.weight * a.coeff * b.coeff;
                trips.push((da as u32, db as u32, v));
                if da != db {
                    trips.push((db as u32, da as u32, v));
                }
            }
        }
    });

    // Pressure coupling: for each fluid cell, minus the divergence row and
    // its transpose (the discrete pressure gradient).
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    for i in 0..g.n1 {
        let ip = g.wrap_i(i as isize + 1);
        for j in 0..g.nth {
            let jp = g.wrap_j(j as isize + 1);
            for k in 0..g.nr {
                let pd = dofs.p_dof[g.cell_idx(i, j, k)];
                if pd < 0 {
                    continue;
                }
                let a1 = hth * hr * g.r_center::<T>(k);
                let ath = h1 * hr;
                let mut push = |vd: i32, coeff: T| {
                    if vd >= 0 {
                        trips.push((pd as u32, vd as u32, coeff));
                        trips.push((vd as u32, pd as u32, coeff));
                    }
                };
                push(dofs.u1_dof[u1_idx(g.nth, g.nr, ip, j, k)], -a1);
                push(dofs.u1_dof[u1_idx(g.nth, g.nr, i, j, k)], a1);
                push(dofs.uth_dof[uth_idx(g.nth, g.nr, i, jp, k)], -ath);
                push(dofs.uth_dof[uth_idx(g.nth, g.nr, i, j, k)], ath);
                push(
                    dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k + 1)],
                    -h1 * hth * g.r_face::<T>(k + 1),
                );
                push(dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k)], h1 * hth * g.r_face::<T>(k));
            }
        }
    }

    let mat = Csr::from_triplets(n, &mut trips);

    // Block-diagonal SPD preconditioner: Jacobi on the viscous block and the
    // pressure "mass" (cell volumes) on the multiplier block.
    let diag = mat.diag();
    let mut m_inv = vec![T::zero(); n];
    for (d, &a) in m_inv[..dofs.n_vel].iter_mut().zip(&diag[..dofs.n_vel]) {
        *d = T::one() / a;
    }
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                let pd = dofs.p_dof[g.cell_idx(i, j, k)];
                if pd >= 0 {
                    let vol = h1 * hth * hr * g.r_center::<T>(k);
                    m_inv[pd as usize] = T::one() / vol;
                }
            }
        }
    }
    StokesSystem { dofs, mat, m_inv }
}

/// Control volume of each interior velocity face, for momentum right-hand
/// sides `rhs[dof] = f_face * volume`.
pub fn face_volumes<T: Scalar>(mask: &SolidMask, dofs: &DofMap) -> Vec<T> {
    let g = mask.grid;
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let mut vols = vec![T::zero(); dofs.n_vel];
    for i in 0..g.n1 {
        for j in 0..g.nth {
            for k in 0..g.nr {
                let d = dofs.u1_dof[u1_idx(g.nth, g.nr, i, j, k)];
                if d >= 0 {
                    vols[d as usize] = h1 * hth * hr * g.r_center::<T>(k);
                }
                let d = dofs.uth_dof[uth_idx(g.nth, g.nr, i, j, k)];
                if d >= 0 {
                    vols[d as usize] = h1 * hth * hr * g.r_center::<T>(k);
                }
            }
            for k in 1..g.nr {
                let d = dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k)];
                if d >= 0 {
                    vols[d as usize] = h1 * hth * hr * g.r_face::<T>(k);
                }
            }
        }
    }
    vols
}

/// Momentum forcing for the solver right-hand side.
pub enum Forcing<T> {
    /// Uniform axial body force of unit strength (the mean-gradient drive).
    UnitAxial,
    /// Unit axial body force restricted to faces with x1 in [from, to).
    AxialSlab { from: T, to: T },
    /// Explicit face values (full arrays, one per component).
    FaceData { u1: Vec<T>, uth: Vec<T>, ur: Vec<T> },
    /// The exact discrete gradient of a cell-centered scalar.
    GradientOfCellScalar(Vec<T>),
}

pub fn build_rhs<T: Scalar>(
    mask: &SolidMask,
    dofs: &DofMap,
    vols: &[T],
    forcing: &Forcing<T>,
) -> Vec<T> {
    let g = mask.grid;
    let mut rhs = vec![T::zero(); dofs.n_total];
    match forcing {
        Forcing::UnitAxial => {
            for (d, &v) in rhs[..dofs.n_u1].iter_mut().zip(&vols[..dofs.n_u1]) {
                *d = v;
            }
        }
        Forcing::AxialSlab { from, to } => {
            for i in 0..g.n1 {
                let x: T = g.x_face(i);
                if x < *from || x >= *to {
                    continue;
                }
                for j in 0..g.nth {
                    for k in 0..g.nr {
                        let d = dofs.u1_dof[u1_idx(g.nth, g.nr, i, j, k)];
                        if d >= 0 {
                            rhs[d as usize] = vols[d as usize];
                        }
                    }
                }
            }
        }
        Forcing::FaceData { u1, uth, ur } => {
            for (idx, &d) in dofs.u1_dof.iter().enumerate() {
                if d >= 0 {
                    rhs[d as usize] = u1[idx] * vols[d as usize];
                }
            }
            for (idx, &d) in dofs.uth_dof.iter().enumerate() {
                if d >= 0 {
                    rhs[d as usize] = uth[idx] * vols[d as usize];
                }
            }
            for (idx, &d) in dofs.ur_dof.iter().enumerate() {
                if d >= 0 {
                    rhs[d as usize] = ur[idx] * vols[d as usize];
                }
            }
        }
        Forcing::GradientOfCellScalar(gv) => {
            let h1: T = g.h1();
            let hth: T = g.hth();
            let hr: T = g.hr();
            for i in 0..g.n1 {
                let im = g.wrap_i(i as isize - 1);
                for j in 0..g.nth {
                    let jm = g.wrap_j(j as isize - 1);
                    for k in 0..g.nr {
                        let d = dofs.u1_dof[u1_idx(g.nth, g.nr, i, j, k)];
                        if d >= 0 {
                            let dv = (gv[g.cell_idx(i, j, k)] - gv[g.cell_idx(im, j, k)]) / h1;
                            rhs[d as usize] = dv * vols[d as usize];
                        }
                        let d = dofs.uth_dof[uth_idx(g.nth, g.nr, i, j, k)];
                        if d >= 0 {
                            let arc = g.r_center::<T>(k) * hth;
                            let dv = (gv[g.cell_idx(i, j, k)] - gv[g.cell_idx(i, jm, k)]) / arc;
                            rhs[d as usize] = dv * vols[d as usize];
                        }
                        if k >= 1 {
                            let d = dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k)];
                            if d >= 0 {
                                let dv =
                                    (gv[g.cell_idx(i, j, k)] - gv[g.cell_idx(i, j, k - 1)]) / hr;
                                rhs[d as usize] = dv * vols[d as usize];
                            }
                        }
                    }
                }
            }
        }
    }
    rhs
}

/// Per-cell divergence residual (flux imbalance) of a solution vector;
/// infinity norm over fluid cells.
pub fn divergence_residual<T: Scalar>(mask: &SolidMask, dofs: &DofMap, x: &[T]) -> T {
    let g = mask.grid;
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let val = |d: i32| if d >= 0 { x[d as usize] } else { T::zero() };
    let mut worst = T::zero();
    for i in 0..g.n1 {
        let ip = g.wrap_i(i as isize + 1);
        for j in 0..g.nth {
            let jp = g.wrap_j(j as isize + 1);
            for k in 0..g.nr {
                if !mask.is_fluid(i, j, k) {
                    continue;
                }
                let a1 = hth * hr * g.r_center::<T>(k);
                let ath = h1 * hr;
                let mut div = (val(dofs.u1_dof[u1_idx(g.nth, g.nr, ip, j, k)])
                    - val(dofs.u1_dof[u1_idx(g.nth, g.nr, i, j, k)]))
                    * a1;
                div += (val(dofs.uth_dof[uth_idx(g.nth, g.nr, i, jp, k)])
                    - val(dofs.uth_dof[uth_idx(g.nth, g.nr, i, j, k)]))
                    * ath;
                div += val(dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k + 1)])
                    * h1
                    * hth
                    * g.r_face::<T>(k + 1)
                    - val(dofs.ur_dof[ur_idx(g.nth, g.nr, i, j, k)]) * h1 * hth * g.r_face::<T>(k);
                worst = worst.max(div.abs());
            }
        }
    }
    worst
}

/// Marks whether any adjacent fluid exists; used to pre-check connectivity.
pub fn fluid_components(mask: &SolidMask) -> usize {
    let g = mask.grid;
    let n = g.n_cells();
    let mut seen = vec![false; n];
    let mut components = 0usize;
    let mut stack = Vec::new();
    for start in 0..n {
        let (i, j, k) = unflatten(&g, start);
        if seen[start] || !mask.is_fluid(i, j, k) {
            continue;
        }
        components += 1;
        stack.push(start);
        seen[start] = true;
        while let Some(c) = stack.pop() {
            let (i, j, k) = unflatten(&g, c);
            let mut visit = |ii: usize, jj: usize, kk: usize| {
                let idx = g.cell_idx(ii, jj, kk);
                if !seen[idx] && mask.is_fluid(ii, jj, kk) {
                    seen[idx] = true;
                    stack.push(idx);
                }
            };
            visit(g.wrap_i(i as isize + 1), j, k);
            visit(g.wrap_i(i as isize - 1), j, k);
            if g.nth > 1 {
                visit(i, g.wrap_j(j as isize + 1), k);
                visit(i, g.wrap_j(j as isize - 1), k);
            }
            if k + 1 < g.nr {
                visit(i, j, k + 1);
            }
            if k > 0 {
                visit(i, j, k - 1);
            }
        }
    }
    components
}

fn unflatten(g: &crate::geometry::CylGrid, idx: usize) -> (usize, usize, usize) {
    let k = idx % g.nr;
    let rest = idx / g.nr;
    let j = rest % g.nth;
    let i = rest / g.nth;
    (i, j, k)
}

/// True when at least one velocity face carries forcing; zero forcing short-
/// circuits to the zero solution.
pub fn rhs_is_zero<T: Scalar>(rhs: &[T]) -> bool {
    rhs.iter().all(|v| *v == T::zero())
}
