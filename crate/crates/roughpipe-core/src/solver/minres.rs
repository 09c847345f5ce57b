//! Preconditioned MINRES for symmetric (indefinite) systems.

use super::sparse::Csr;
use crate::scalar::{sc, Scalar};

pub struct MinresOutcome<T> {
    /// M^{-1}-norm of the final residual estimate.
    pub res_norm: T,
    pub iters: usize,
    pub converged: bool,
}

/// Solves `K d = r` with the SPD diagonal preconditioner `m_inv` (entries of
/// M^{-1}), writing the update into `d`. Stops when the preconditioned
/// residual norm drops below `rel_tol` times its initial value, on
/// stagnation, or at `max_iters`.
pub fn minres<T: Scalar>(
    mat: &Csr<T>,
    m_inv: &[T],
    rhs: &[T],
    rel_tol: T,
    max_iters: usize,
    d: &mut [T],
) -> MinresOutcome<T> {
    let n = mat.n;
    d.iter_mut().for_each(|x| *x = T::zero());

    let mut v_prev = vec![T::zero(); n];
    let mut v = rhs.to_vec();
    let mut z_prev = vec![T::zero(); n];
    let mut z: Vec<T> = v.iter().zip(m_inv).map(|(&a, &m)| a * m).collect();
    let mut gamma_prev = T::one();
    let mut gamma = dot(&z, &v).sqrt();
    if gamma == T::zero() || !gamma.is_finite() {
        return MinresOutcome { res_norm: T::zero(), iters: 0, converged: true };
    }
    let gamma0 = gamma;

    let mut eta = gamma;
    let (mut s_old, mut s) = (T::zero(), T::zero());
    let (mut c_old, mut c) = (T::one(), T::one());
    let mut w_prev = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut kz = vec![T::zero(); n];

    let mut best = gamma;
    let mut since_best = 0usize;
    let stall_window = 4000usize;

    for it in 1..=max_iters {
        let inv_g = T::one() / gamma;
        z.iter_mut().for_each(|x| *x *= inv_g);
        mat.matvec(&z, &mut kz);
        let delta = dot(&kz, &z);

        // Lanczos recurrence.
        let a1 = delta * inv_g;
        let a2 = gamma / gamma_prev;
        for i in 0..n {
            let vn = kz[i] - a1 * v[i] - a2 * v_prev[i];
            v_prev[i] = v[i];
            v[i] = vn;
        }
        for i in 0..n {
            let zn = v[i] * m_inv[i];
            z_prev[i] = z[i];
            z[i] = zn;
        }
        let gamma_next = dot(&z, &v).max(T::zero()).sqrt();

        // Givens rotations.
        let alpha0 = c * delta - c_old * s * gamma;
        let alpha1 = (alpha0 * alpha0 + gamma_next * gamma_next).sqrt();
        let alpha2 = s * delta + c_old * c * gamma;
        let alpha3 = s_old * gamma;
        if alpha1 == T::zero() || !alpha1.is_finite() {
            return MinresOutcome { res_norm: eta.abs(), iters: it, converged: false };
        }
        let c_next = alpha0 / alpha1;
        let s_next = gamma_next / alpha1;
        for i in 0..n {
            let wn = (z_prev[i] - alpha3 * w_prev[i] - alpha2 * w[i]) / alpha1;
            w_prev[i] = w[i];
            w[i] = wn;
            d[i] += c_next * eta * wn;
        }
        eta = -s_next * eta;

        s_old = s;
        s = s_next;
        c_old = c;
        c = c_next;
        gamma_prev = gamma;
        gamma = gamma_next;

        let res = eta.abs();
        if res <= rel_tol * gamma0 {
            return MinresOutcome { res_norm: res, iters: it, converged: true };
        }
        if res < best * sc(0.5) {
            best = res;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > stall_window {
                return MinresOutcome { res_norm: res, iters: it, converged: false };
            }
        }
        if gamma == T::zero() {
            return MinresOutcome { res_norm: res, iters: it, converged: true };
        }
    }
    MinresOutcome { res_norm: eta.abs(), iters: max_iters, converged: false }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut x = b.to_vec();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
            m.swap(col, piv);
            x.swap(col, piv);
            let p = m[col][col];
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = m[row][col] / p;
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                x[row] -= f * x[col];
            }
        }
        (0..n).map(|i| x[i] / m[i][i]).collect()
    }

    #[test]
    fn minres_matches_dense_solution_on_indefinite_system() {
        // Small symmetric indefinite saddle-ish matrix.
        let dense = vec![
            vec![4.0, 1.0, 0.0, 1.0],
            vec![1.0, 3.0, 1.0, -1.0],
            vec![0.0, 1.0, 5.0, 2.0],
            vec![1.0, -1.0, 2.0, 0.0],
        ];
        let mut trips = Vec::new();
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    trips.push((i as u32, j as u32, v));
                }
            }
        }
        let mat = Csr::from_triplets(4, &mut trips);
        assert!(mat.asymmetry() < 1e-15);
        let b = vec![1.0, -2.0, 0.5, 3.0];
        let m_inv = vec![0.25, 1.0 / 3.0, 0.2, 1.0];
        let mut x = vec![0.0; 4];
        let out = minres(&mat, &m_inv, &b, 1e-14, 1000, &mut x);
        assert!(out.converged);
        let reference = dense_solve(&dense, &b);
        for (xi, ri) in x.iter().zip(&reference) {
            assert!((xi - ri).abs() < 1e-10, "{x:?} vs {reference:?}");
        }
    }
}
