//! Enumeration of the gradient quadrature samples of the staggered
//! cylindrical discretization.
//!
//! The viscous operator is assembled variationally: the discrete energy is
//! `sum_s w_s * l_s(u)^2 / 2` over the samples below, each approximating one
//! entry of the velocity gradient tensor in cylindrical components
//!
//! ```text
//! |grad u|^2 = (d1 u1)^2 + (d1 ur)^2 + (d1 uth)^2
//!            + (dr u1)^2 + (dr ur)^2 + (dr uth)^2
//!            + r^{-2} [ (dth u1)^2 + (dth ur - uth)^2 + (dth uth + ur)^2 ]
//! ```
//!
//! on its control region (weight = integral of the cylindrical measure).
//! At solid caps the difference is taken to the wall at half spacing with the
//! halved weight, which reproduces the mirror-ghost wall treatment; faces
//! lying on staircase side walls enter with value zero. The same enumeration
//! drives matrix assembly, energy tails, and gradient-error norms, so the
//! diagnostics measure exactly the solver's notion of the gradient.

use crate::geometry::{FaceState, SolidMask};
use crate::scalar::{sc, Scalar};

/// Which gradient-tensor entry a sample approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradKind {
    D1U1,
    DrU1,
    DthU1,
    D1Ur,
    DrUr,
    DthUrMinusUth,
    D1Uth,
    DrUth,
    DthUthPlusUr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayId {
    U1,
    Uth,
    Ur,
}

/// One linear-functional term `coeff * field[array][idx]`.
#[derive(Debug, Clone, Copy)]
pub struct Term<T> {
    pub array: ArrayId,
    pub idx: usize,
    pub coeff: T,
}

/// A weighted gradient sample `w * (sum_m term_m)` at a grid location.
#[derive(Debug, Clone, Copy)]
pub struct GradSample<T> {
    pub kind: GradKind,
    /// Axial position in [0, T).
    pub x1: T,
    /// Radial position of the sample.
    pub r: T,
    /// Quadrature weight (cylindrical volume of the sample's region).
    pub weight: T,
    pub terms: [Term<T>; 4],
    pub n_terms: u8,
}

impl<T: Scalar> GradSample<T> {
    #[inline]
    pub fn terms(&self) -> &[Term<T>] {
        &self.terms[..self.n_terms as usize]
    }

    /// Evaluates the sample's linear functional on face arrays.
    #[inline]
    pub fn eval(&self, u1: &[T], uth: &[T], ur: &[T]) -> T {
        let mut acc = T::zero();
        for t in self.terms() {
            let v = match t.array {
                ArrayId::U1 => u1[t.idx],
                ArrayId::Uth => uth[t.idx],
                ArrayId::Ur => ur[t.idx],
            };
            acc += t.coeff * v;
        }
        acc
    }
}

#[inline]
fn term<T>(array: ArrayId, idx: usize, coeff: T) -> Term<T> {
    Term { array, idx, coeff }
}

/// Face-array indexing shared with `StaggeredFlowField`.
#[inline]
pub fn u1_idx(nth: usize, nr: usize, i: usize, j: usize, k: usize) -> usize {
    (i * nth + j) * nr + k
}

#[inline]
pub fn uth_idx(nth: usize, nr: usize, i: usize, j: usize, k: usize) -> usize {
    (i * nth + j) * nr + k
}

#[inline]
pub fn ur_idx(nth: usize, nr: usize, i: usize, j: usize, k: usize) -> usize {
    (i * nth + j) * (nr + 1) + k
}

/// Visits every gradient sample of the masked grid.
pub fn for_each_grad_sample<T: Scalar, F: FnMut(&GradSample<T>)>(mask: &SolidMask, mut f: F) {
    let g = mask.grid;
    let (n1, nth, nr) = (g.n1, g.nth, g.nr);
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let two = sc::<T>(2.0);
    let half = sc::<T>(0.5);

    let dummy = term(ArrayId::U1, 0, T::zero());
    let mut sample = |kind, x1, r, weight, terms: &[Term<T>]| {
        let mut buf = [dummy; 4];
        buf[..terms.len()].copy_from_slice(terms);
        f(&GradSample { kind, x1, r, weight, terms: buf, n_terms: terms.len() as u8 })
    };

    for i in 0..n1 {
        let ip = g.wrap_i(i as isize + 1);
        let xc: T = g.x_center(i);
        let xf: T = g.x_face(i);
        let xfp: T = g.x_face_period(ip, i);
        for j in 0..nth {
            let jp = g.wrap_j(j as isize + 1);
            for k in 0..nr {
                let rc: T = g.r_center(k);
                let rfp: T = g.r_face(k + 1);
                let cell_fluid = mask.is_fluid(i, j, k);
                let v_cell = h1 * hth * hr * rc;

                if cell_fluid {
                    // (d1 u1) over the cell.
                    sample(
                        GradKind::D1U1,
                        xc,
                        rc,
                        v_cell,
                        &[
                            term(ArrayId::U1, u1_idx(nth, nr, ip, j, k), T::one() / h1),
                            term(ArrayId::U1, u1_idx(nth, nr, i, j, k), -T::one() / h1),
                        ],
                    );
                    // (dr ur) over the cell; both faces exist in the array
                    // (axis and cap faces carry value zero).
                    sample(
                        GradKind::DrUr,
                        xc,
                        rc,
                        v_cell,
                        &[
                            term(ArrayId::Ur, ur_idx(nth, nr, i, j, k + 1), T::one() / hr),
                            term(ArrayId::Ur, ur_idx(nth, nr, i, j, k), -T::one() / hr),
                        ],
                    );
                    // r^{-1} (dth uth + ur) over the cell.
                    sample(
                        GradKind::DthUthPlusUr,
                        xc,
                        rc,
                        v_cell,
                        &[
                            term(ArrayId::Uth, uth_idx(nth, nr, i, jp, k), T::one() / (rc * hth)),
                            term(ArrayId::Uth, uth_idx(nth, nr, i, j, k), -T::one() / (rc * hth)),
                            term(ArrayId::Ur, ur_idx(nth, nr, i, j, k), half / rc),
                            term(ArrayId::Ur, ur_idx(nth, nr, i, j, k + 1), half / rc),
                        ],
                    );
                }

                // Radial edges below face k+1: (dr u1) and (dr uth).
                // By radial monotonicity of the fluid set the lower face
                // decides whether a DOF is present.
                let a_u1 = mask.u1_state(i, j, k);
                if a_u1 == FaceState::Interior {
                    let b_state = if k + 1 < nr { mask.u1_state(i, j, k + 1) } else { FaceState::Outside };
                    let ia = u1_idx(nth, nr, i, j, k);
                    match b_state {
                        FaceState::Interior | FaceState::Wall => {
                            let w = h1 * hth * hr * rfp;
                            sample(
                                GradKind::DrU1,
                                xf,
                                rfp,
                                w,
                                &[
                                    term(ArrayId::U1, u1_idx(nth, nr, i, j, k + 1), T::one() / hr),
                                    term(ArrayId::U1, ia, -T::one() / hr),
                                ],
                            );
                        }
                        FaceState::Outside => {
                            // Cap wall at r_{k+1}: half distance, half region.
                            let w = h1 * hth * (rfp * rfp - rc * rc) * half;
                            sample(
                                GradKind::DrU1,
                                xf,
                                (rc + rfp) * half,
                                w,
                                &[term(ArrayId::U1, ia, -two / hr)],
                            );
                        }
                    }
                }
                let a_uth = mask.uth_state(i, j, k);
                if a_uth == FaceState::Interior {
                    let b_state = if k + 1 < nr { mask.uth_state(i, j, k + 1) } else { FaceState::Outside };
                    let ia = uth_idx(nth, nr, i, j, k);
                    match b_state {
                        FaceState::Interior | FaceState::Wall => {
                            let w = h1 * hth * hr * rfp;
                            sample(
                                GradKind::DrUth,
                                xc,
                                rfp,
                                w,
                                &[
                                    term(ArrayId::Uth, uth_idx(nth, nr, i, j, k + 1), T::one() / hr),
                                    term(ArrayId::Uth, ia, -T::one() / hr),
                                ],
                            );
                        }
                        FaceState::Outside => {
                            let w = h1 * hth * (rfp * rfp - rc * rc) * half;
                            sample(
                                GradKind::DrUth,
                                xc,
                                (rc + rfp) * half,
                                w,
                                &[term(ArrayId::Uth, ia, -two / hr)],
                            );
                        }
                    }
                }

                // Axial edges: (d1 ur) between columns i and i+1 at face
                // radius r_k (skip the zero-area axis), and (d1 uth) at r_c.
                if k >= 1 {
                    let rk: T = g.r_face(k);
                    let a = mask.ur_state(i, j, k);
                    let b = mask.ur_state(ip, j, k);
                    let ia = ur_idx(nth, nr, i, j, k);
                    let ib = ur_idx(nth, nr, ip, j, k);
                    match (a, b) {
                        (FaceState::Interior, FaceState::Interior)
                        | (FaceState::Interior, FaceState::Wall)
                        | (FaceState::Wall, FaceState::Interior) => {
                            let w = h1 * hth * hr * rk;
                            sample(
                                GradKind::D1Ur,
                                xfp,
                                rk,
                                w,
                                &[
                                    term(ArrayId::Ur, ib, T::one() / h1),
                                    term(ArrayId::Ur, ia, -T::one() / h1),
                                ],
                            );
                        }
                        (FaceState::Interior, FaceState::Outside) => {
                            let w = half * h1 * hth * hr * rk;
                            sample(GradKind::D1Ur, xfp, rk, w, &[term(ArrayId::Ur, ia, -two / h1)]);
                        }
                        (FaceState::Outside, FaceState::Interior) => {
                            let w = half * h1 * hth * hr * rk;
                            sample(GradKind::D1Ur, xfp, rk, w, &[term(ArrayId::Ur, ib, two / h1)]);
                        }
                        _ => {}
                    }
                }
                {
                    let a = mask.uth_state(i, j, k);
                    let b = mask.uth_state(ip, j, k);
                    let ia = uth_idx(nth, nr, i, j, k);
                    let ib = uth_idx(nth, nr, ip, j, k);
                    match (a, b) {
                        (FaceState::Interior, FaceState::Interior)
                        | (FaceState::Interior, FaceState::Wall)
                        | (FaceState::Wall, FaceState::Interior) => {
                            let w = h1 * hth * hr * rc;
                            sample(
                                GradKind::D1Uth,
                                xfp,
                                rc,
                                w,
                                &[
                                    term(ArrayId::Uth, ib, T::one() / h1),
                                    term(ArrayId::Uth, ia, -T::one() / h1),
                                ],
                            );
                        }
                        (FaceState::Interior, FaceState::Outside) => {
                            let w = half * h1 * hth * hr * rc;
                            sample(GradKind::D1Uth, xfp, rc, w, &[term(ArrayId::Uth, ia, -two / h1)]);
                        }
                        (FaceState::Outside, FaceState::Interior) => {
                            let w = half * h1 * hth * hr * rc;
                            sample(GradKind::D1Uth, xfp, rc, w, &[term(ArrayId::Uth, ib, two / h1)]);
                        }
                        _ => {}
                    }
                }
                // Angular edges (skipped in axisymmetric mode where the
                // theta difference wraps to zero): (dth u1) at r_c.
                if nth > 1 {
                    let a = mask.u1_state(i, j, k);
                    let b = mask.u1_state(i, jp, k);
                    let ia = u1_idx(nth, nr, i, j, k);
                    let ib = u1_idx(nth, nr, i, jp, k);
                    let arc = rc * hth;
                    match (a, b) {
                        (FaceState::Interior, FaceState::Interior)
                        | (FaceState::Interior, FaceState::Wall)
                        | (FaceState::Wall, FaceState::Interior) => {
                            let w = h1 * hth * hr * rc;
                            sample(
                                GradKind::DthU1,
                                xf,
                                rc,
                                w,
                                &[
                                    term(ArrayId::U1, ib, T::one() / arc),
                                    term(ArrayId::U1, ia, -T::one() / arc),
                                ],
                            );
                        }
                        (FaceState::Interior, FaceState::Outside) => {
                            let w = half * h1 * hth * hr * rc;
                            sample(GradKind::DthU1, xf, rc, w, &[term(ArrayId::U1, ia, -two / arc)]);
                        }
                        (FaceState::Outside, FaceState::Interior) => {
                            let w = half * h1 * hth * hr * rc;
                            sample(GradKind::DthU1, xf, rc, w, &[term(ArrayId::U1, ib, two / arc)]);
                        }
                        _ => {}
                    }
                }

                // r^{-1} (dth ur - uth) at the angular edge between
                // ur(i,j,k) and ur(i,j+1,k) at face radius r_k. Kept in
                // axisymmetric mode where it degenerates to -uth/r.
                if k >= 1 {
                    let rk: T = g.r_face(k);
                    let a = mask.ur_state(i, j, k);
                    let b = mask.ur_state(i, jp, k);
                    if a == FaceState::Interior || b == FaceState::Interior {
                        let arc = rk * hth;
                        let ia = ur_idx(nth, nr, i, j, k);
                        let ib = ur_idx(nth, nr, i, jp, k);
                        let w = h1 * hth * hr * rk;
                        sample(
                            GradKind::DthUrMinusUth,
                            xc,
                            rk,
                            w,
                            &[
                                term(ArrayId::Ur, ib, T::one() / arc),
                                term(ArrayId::Ur, ia, -T::one() / arc),
                                term(ArrayId::Uth, uth_idx(nth, nr, i, jp, k - 1), -half / rk),
                                term(ArrayId::Uth, uth_idx(nth, nr, i, jp, k), -half / rk),
                            ],
                        );
                    }
                }
            }
        }
    }
}

impl crate::geometry::CylGrid {
    /// Axial position of the face `ip` seen from cell column `i`; unwraps
    /// the periodic seam so edge samples at the seam sit at x1 = T, which
    /// `x1.rem_euclid(T)` folds back when binning.
    #[inline]
    pub(crate) fn x_face_period<T: Scalar>(&self, ip: usize, i: usize) -> T {
        if ip == 0 && i + 1 == self.n1 {
            self.period()
        } else {
            self.x_face(ip)
        }
    }
}
