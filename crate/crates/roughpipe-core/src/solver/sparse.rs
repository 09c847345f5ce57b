//! Minimal CSR storage for the saddle-point systems.

use crate::scalar::Scalar;

/// Compressed sparse row matrix (square).
#[derive(Debug, Clone)]
pub struct Csr<T> {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    /// Builds from unsorted triplets, summing duplicates. Consumes the
    /// triplet buffer to keep peak memory down.
    pub fn from_triplets(n: usize, triplets: &mut Vec<(u32, u32, T)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut last: Option<(u32, u32)> = None;
        for &(r, c, v) in triplets.iter() {
            if last == Some((r, c)) {
                let m = vals.len() - 1;
                vals[m] += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        triplets.clear();
        triplets.shrink_to_fit();
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr { n, row_ptr, cols, vals }
    }

    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = T::zero();
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[idx] * x[self.cols[idx] as usize];
            }
            y[i] = acc;
        }
    }

    pub fn diag(&self) -> Vec<T> {
        let mut d = vec![T::zero(); self.n];
        for i in 0..self.n {
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[idx] as usize == i {
                    d[i] = self.vals[idx];
                }
            }
        }
        d
    }

    /// Max relative asymmetry |K - K^T| over |K|; test helper.
    #[cfg(test)]
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[idx] as usize;
                if j < i {
                    continue;
                }
                let vij = self.vals[idx].as_f64();
                let vji = self.get(j, i).as_f64();
                let scale = vij.abs().max(vji.abs()).max(1e-300);
                worst = worst.max((vij - vji).abs() / scale);
            }
        }
        worst
    }

    #[cfg(test)]
    fn get(&self, i: usize, j: usize) -> T {
        for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
            if self.cols[idx] as usize == j {
                return self.vals[idx];
            }
        }
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates() {
        let mut t = vec![(0u32, 0u32, 1.0f64), (0, 1, 2.0), (0, 0, 3.0), (1, 0, 2.0), (1, 1, 5.0)];
        let m = Csr::from_triplets(2, &mut t);
        let mut y = vec![0.0; 2];
        m.matvec(&[1.0, 1.0], &mut y);
        assert_eq!(y, vec![6.0, 7.0]);
        assert_eq!(m.diag(), vec![4.0, 5.0]);
        assert_eq!(m.asymmetry(), 0.0);
    }
}
