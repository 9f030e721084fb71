//! Square linear maps used as disjunction generators.

use crate::scalar::{Coeff, Rat};
use nalgebra::DMatrix;

/// Dense square matrix with a cached condition estimate. Columns are the
/// generator vectors of a simplicial cone when the map is used as a region.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap<T: Coeff> {
    n: usize,
    data: Vec<T>, // row-major
}

impl<T: Coeff> LinearMap<T> {
    pub fn from_rows(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "square matrix required");
        LinearMap { n, data }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let n = cols.len();
        assert!(cols.iter().all(|c| c.len() == n));
        let mut data = vec![T::zero(); n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                data[i * n + j] = col[i].clone();
            }
        }
        LinearMap { n, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        LinearMap { n, data }
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = d[i].clone();
        }
        LinearMap { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn with_column(&self, j: usize, col: &[T]) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.set(i, j, col[i].clone());
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] = data[i * n + j].clone() + a.clone() * other.get(k, j);
                }
            }
        }
        LinearMap { n, data }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
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

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        LinearMap { n, data }
    }

    pub fn to_f64(&self) -> LinearMap<f64> {
        LinearMap { n: self.n, data: self.data.iter().map(|v| v.to_f64()).collect() }
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }

    /// 2-norm condition estimate via SVD on the float image.
    pub fn condition_estimate(&self) -> f64 {
        let m = self.to_nalgebra();
        let svd = m.svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= 0.0 {
            f64::INFINITY
        } else {
            smax / smin
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.condition_estimate().is_finite()
    }
}

impl LinearMap<f64> {
    /// Coordinates of `x` in the column basis: solves `V z = x`.
    pub fn solve_columns(&self, x: &[f64]) -> Option<Vec<f64>> {
        let m = self.to_nalgebra();
        let rhs = nalgebra::DVector::from_column_slice(x);
        let lu = m.lu();
        lu.solve(&rhs).map(|z| z.iter().cloned().collect())
    }

    /// Float inverse; `None` when numerically singular.
    pub fn inverse(&self) -> Option<LinearMap<f64>> {
        let inv = self.to_nalgebra().try_inverse()?;
        let mut data = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                data.push(inv[(i, j)]);
            }
        }
        Some(LinearMap { n: self.n, data })
    }
}

impl LinearMap<Rat> {
    pub fn from_i64_rows(n: usize, rows: &[i64]) -> Self {
        LinearMap::from_rows(n, rows.iter().map(|&v| Rat::from_i64(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn product_and_apply() {
        let a = LinearMap::<Rat>::from_i64_rows(2, &[1, 2, 3, 4]);
        let b = LinearMap::<Rat>::from_i64_rows(2, &[0, 1, 1, 0]);
        let ab = a.matmul(&b);
        assert_eq!(ab.get(0, 0), rat_int(2));
        assert_eq!(ab.get(0, 1), rat_int(1));
        let y = a.apply(&[rat_int(1), rat(1, 2)]);
        assert_eq!(y, vec![rat_int(2), rat_int(5)]);
    }

    #[test]
    fn condition_of_identity() {
        let id = LinearMap::<f64>::identity(4);
        assert!((id.condition_estimate() - 1.0).abs() < 1e-12);
        assert!(id.is_invertible());
        let sing = LinearMap::<f64>::from_rows(2, vec![1.0, 2.0, 2.0, 4.0]);
        assert!(!sing.is_invertible());
    }
}
