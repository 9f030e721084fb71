//! Symmetric matrices with upper-triangle storage, in either scalar mode.

use crate::scalar::{Coeff, Rat};
use nalgebra::DMatrix;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T: Coeff> {
    n: usize,
    // upper triangle, row-major: (0,0),(0,1),...,(0,n-1),(1,1),...
    upper: Vec<T>,
}

impl<T: Coeff> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, upper: vec![T::zero(); n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn ones(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, T::one());
            }
        }
        m
    }

    /// Builds from a dense row-major listing; panics if not symmetric.
    pub fn from_dense_rows(n: usize, rows: Vec<T>) -> Self {
        assert_eq!(rows.len(), n * n);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                assert!(
                    rows[i * n + j] == rows[j * n + i],
                    "matrix not symmetric at ({i},{j})"
                );
                m.set(i, j, rows[i * n + j].clone());
            }
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.upper[self.idx(i, j)].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        SymMatrix { n: self.n, upper: self.upper.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn quad_form(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.n);
        let mut acc = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self.get(i, j) * x[i].clone() * x[j].clone();
            }
        }
        acc
    }

    /// `x - 2*beta*Q*x` style products need the full action.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.n {
                    acc = acc + self.get(i, j) * x[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Congruence transform `V^T * self * V`.
    pub fn congruence(&self, v: &crate::poly::LinearMap<T>) -> Self {
        assert_eq!(v.n(), self.n);
        let n = self.n;
        // tmp = self * V
        let mut tmp = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k) * v.get(k, j);
                }
                tmp[i * n + j] = acc;
            }
        }
        SymMatrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + v.get(k, i) * tmp[k * n + j].clone();
            }
            acc
        })
    }

    pub fn min_entry_f64(&self) -> f64 {
        self.upper.iter().map(|v| v.to_f64()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.upper.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn trace_f64(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).to_f64()).sum()
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        SymMatrix { n: self.n, upper: self.upper.iter().map(|v| v.to_f64()).collect() }
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }

    pub fn dense_rows(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Smallest eigenvalue of the float image.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let eig = self.to_nalgebra().symmetric_eigen();
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Row diagonal dominance: `a_ii >= sum_{j != i} |a_ij|` for every row.
    pub fn is_diagonally_dominant(&self) -> bool {
        (0..self.n).all(|i| {
            let mut off = T::zero();
            for j in 0..self.n {
                if j != i {
                    off = off + self.get(i, j).abs();
                }
            }
            self.get(i, i) >= off
        })
    }
}

impl SymMatrix<Rat> {
    pub fn from_i64_rows(n: usize, rows: &[i64]) -> Self {
        Self::from_dense_rows(n, rows.iter().map(|&v| Rat::from_i64(v)).collect())
    }

    /// Exact PSD test by fraction-free symmetric elimination (LDL^T with
    /// zero-pivot handling: a zero pivot forces a zero row/column).
    pub fn is_psd_exact(&self) -> bool {
        let n = self.n;
        let mut a: Vec<Vec<Rat>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        for k in 0..n {
            if a[k][k] < Rat::zero() {
                return false;
            }
            if a[k][k].is_zero() {
                // zero pivot: row k must vanish or the matrix is indefinite
                if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                    return false;
                }
                continue;
            }
            for i in k + 1..n {
                let f = a[i][k].clone() / a[k][k].clone();
                for j in k..n {
                    let v = a[i][j].clone() - f.clone() * a[k][j].clone();
                    a[i][j] = v;
                }
            }
        }
        true
    }

    pub fn to_float_mat(&self) -> SymMatrix<f64> {
        self.to_f64()
    }
}

/// Serialized form: dense row-major entries as strings.
#[derive(Serialize, Deserialize)]
pub struct SymMatrixJson {
    pub n: usize,
    pub mode: String,
    pub rows: Vec<String>,
}

pub fn symmatrix_to_json<T: Coeff>(m: &SymMatrix<T>) -> SymMatrixJson {
    SymMatrixJson {
        n: m.n(),
        mode: T::MODE.as_str().to_string(),
        rows: m.dense_rows().iter().map(|v| v.render()).collect(),
    }
}

pub fn symmatrix_from_json<T: Coeff>(j: &SymMatrixJson) -> Result<SymMatrix<T>, String> {
    if j.rows.len() != j.n * j.n {
        return Err(format!("expected {} entries, got {}", j.n * j.n, j.rows.len()));
    }
    let vals: Result<Vec<T>, String> = j.rows.iter().map(|s| T::parse_str(s)).collect();
    Ok(SymMatrix::from_dense_rows(j.n, vals?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn quad_form_identity() {
        let id = SymMatrix::<Rat>::identity(3);
        let x = [rat_int(1), rat_int(2), rat_int(3)];
        assert_eq!(id.quad_form(&x), rat_int(14));
    }

    #[test]
    fn exact_psd_checks() {
        assert!(SymMatrix::<Rat>::identity(4).is_psd_exact());
        // rank-1 vv^T with v = (1,-1,1)
        let v = [1i64, -1, 1];
        let m = SymMatrix::<Rat>::from_fn(3, |i, j| rat_int(v[i] * v[j]));
        assert!(m.is_psd_exact());
        let neg = SymMatrix::<Rat>::from_i64_rows(2, &[1, 2, 2, 1]);
        assert!(!neg.is_psd_exact());
        // psd with zero pivot: [[0,0],[0,1]]
        let zp = SymMatrix::<Rat>::from_i64_rows(2, &[0, 0, 0, 1]);
        assert!(zp.is_psd_exact());
        let bad = SymMatrix::<Rat>::from_i64_rows(2, &[0, 1, 1, 0]);
        assert!(!bad.is_psd_exact());
    }

    #[test]
    fn congruence_matches_direct() {
        let q = SymMatrix::<Rat>::from_i64_rows(2, &[2, 1, 1, 3]);
        let v = crate::poly::LinearMap::<Rat>::from_i64_rows(2, &[1, 1, 0, 2]);
        let c = q.congruence(&v);
        // V^T Q V at (0,0) = q00 = 2; (1,1): col2 = (1,2): (1,2)Q(1,2)^T = 2+2*2+12=18
        assert_eq!(c.get(0, 0), rat_int(2));
        assert_eq!(c.get(1, 1), rat_int(18));
    }
}
