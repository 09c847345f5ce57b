//! Centered evaluation of the convective term on interior faces.

use crate::geometry::{FaceState, SolidMask};
use crate::scalar::{sc, Scalar};

use super::field::StaggeredFlowField;
use super::samples::{u1_idx, ur_idx, uth_idx};

/// Computes `(u . grad) u` in cylindrical components at every interior
/// velocity face. Values beyond walls are taken as zero (no-slip), except
/// across the axis where the axial component is mirrored evenly.
pub fn advection_faces<T: Scalar>(
    mask: &SolidMask,
    f: &StaggeredFlowField<T>,
) -> (Vec<T>, Vec<T>, Vec<T>) {
    let g = *f.grid();
    let (n1, nth, nr) = (g.n1, g.nth, g.nr);
    let h1: T = g.h1();
    let hth: T = g.hth();
    let hr: T = g.hr();
    let quarter = sc::<T>(0.25);

    let u = &f.u1;
    let v = &f.uth;
    let w = &f.ur;
    let uat = |i: usize, j: usize, k: usize| u[u1_idx(nth, nr, i, j, k)];
    let vat = |i: usize, j: usize, k: usize| v[uth_idx(nth, nr, i, j, k)];
    let wat = |i: usize, j: usize, k: usize| w[ur_idx(nth, nr, i, j, k)];

    let mut adv_u1 = vec![T::zero(); u.len()];
    let mut adv_uth = vec![T::zero(); v.len()];
    let mut adv_ur = vec![T::zero(); w.len()];

    for i in 0..n1 {
        let ip = g.wrap_i(i as isize + 1);
        let im = g.wrap_i(i as isize - 1);
        for j in 0..nth {
            let jp = g.wrap_j(j as isize + 1);
            let jm = g.wrap_j(j as isize - 1);
            for k in 0..nr {
                let rc: T = g.r_center(k);

                if mask.u1_state(i, j, k) == FaceState::Interior {
                    let here = uat(i, j, k);
                    let dudx = (uat(ip, j, k) - uat(im, j, k)) / (h1 + h1);
                    // Even mirror across the axis for the axial component.
                    let below = if k > 0 { uat(i, j, k - 1) } else { here };
                    let above = if k + 1 < nr { uat(i, j, k + 1) } else { T::zero() };
                    let dudr = (above - below) / (hr + hr);
                    let ur_here = quarter
                        * (wat(im, j, k) + wat(im, j, k + 1) + wat(i, j, k) + wat(i, j, k + 1));
                    let uth_here =
                        quarter * (vat(im, j, k) + vat(im, jp, k) + vat(i, j, k) + vat(i, jp, k));
                    let dudth = if nth > 1 {
                        (uat(i, jp, k) - uat(i, jm, k)) / ((rc * hth) + (rc * hth))
                    } else {
                        T::zero()
                    };
                    adv_u1[u1_idx(nth, nr, i, j, k)] =
                        here * dudx + ur_here * dudr + uth_here * dudth;
                }

                if mask.uth_state(i, j, k) == FaceState::Interior {
                    let here = vat(i, j, k);
                    let dvdx = (vat(ip, j, k) - vat(im, j, k)) / (h1 + h1);
                    let below = if k > 0 { vat(i, j, k - 1) } else { T::zero() };
                    let above = if k + 1 < nr { vat(i, j, k + 1) } else { T::zero() };
                    let dvdr = (above - below) / (hr + hr);
                    let u1_here =
                        quarter * (uat(i, jm, k) + uat(i, j, k) + uat(ip, jm, k) + uat(ip, j, k));
                    let ur_here = quarter
                        * (wat(i, jm, k) + wat(i, jm, k + 1) + wat(i, j, k) + wat(i, j, k + 1));
                    let dvdth = if nth > 1 {
                        (vat(i, jp, k) - vat(i, jm, k)) / ((rc * hth) + (rc * hth))
                    } else {
                        T::zero()
                    };
                    adv_uth[uth_idx(nth, nr, i, j, k)] = u1_here * dvdx
                        + ur_here * dvdr
                        + here * dvdth
                        + ur_here * here / rc;
                }

                if k >= 1 && mask.ur_state(i, j, k) == FaceState::Interior {
                    let rk: T = g.r_face(k);
                    let here = wat(i, j, k);
                    let dwdx = (wat(ip, j, k) - wat(im, j, k)) / (h1 + h1);
                    let below = wat(i, j, k - 1);
                    let above = wat(i, j, k + 1);
                    let dwdr = (above - below) / (hr + hr);
                    let u1_here =
                        quarter * (uat(i, j, k - 1) + uat(i, j, k) + uat(ip, j, k - 1) + uat(ip, j, k));
                    let uth_here =
                        quarter * (vat(i, j, k - 1) + vat(i, j, k) + vat(i, jp, k - 1) + vat(i, jp, k));
                    let dwdth = if nth > 1 {
                        (wat(i, jp, k) - wat(i, jm, k)) / ((rk * hth) + (rk * hth))
                    } else {
                        T::zero()
                    };
                    adv_ur[ur_idx(nth, nr, i, j, k)] = u1_here * dwdx
                        + here * dwdr
                        + uth_here * dwdth
                        - uth_here * uth_here / rk;
                }
            }
        }
    }
    (adv_u1, adv_uth, adv_ur)
}
