//! Dense matrices over a generic [`Scalar`] field.
//!
//! Everything here is written for dimensions at most ~70 (stacked stabilizer
//! systems), so plain Gaussian elimination with magnitude pivoting is used
//! throughout. Over exact rationals the pivot choice only affects elimination
//! order, never the result.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Square matrices double as linear endomorphisms of R^n; gauge deformations
/// and intrinsic torsion both live here.
pub type Endo<S> = Matrix<S>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal square matrix from the given entries.
    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        (0..self.rows).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(S::zero(), |acc, j| {
                    acc + self[(i, j)].clone() * v[j].clone()
                })
            })
            .collect()
    }

    /// Largest entry magnitude (diagnostic norm).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form; returns pivot column per pivot row.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pivot_row = (r..self.rows)
                .filter(|&i| !self[(i, c)].is_zero())
                .max_by(|&a, &b| {
                    self[(a, c)]
                        .magnitude()
                        .partial_cmp(&self[(b, c)].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot_row else { continue };
            self.swap_rows(r, p);
            let inv = S::one() / self[(r, c)].clone();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// Basis of the right nullspace, one vector per free column. Exact over
    /// rationals; deterministic ordering (free columns ascending).
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut work = self.clone();
        let pivots = work.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in pivots.iter() {
            is_pivot[c] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let pivot_row = (c..n)
                .filter(|&i| !work[(i, c)].is_zero())
                .max_by(|&a, &b| {
                    work[(a, c)]
                        .magnitude()
                        .partial_cmp(&work[(b, c)].magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = pivot_row else { return S::zero() };
            if p != c {
                work.swap_rows(c, p);
                det = -det;
            }
            det = det * work[(c, c)].clone();
            let inv = S::one() / work[(c, c)].clone();
            for i in c + 1..n {
                if work[(i, c)].is_zero() {
                    continue;
                }
                let f = work[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = work[(i, j)].clone() - f.clone() * work[(c, j)].clone();
                    work[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = work.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::from_fn(n, n, |i, j| work[(i, j + n)].clone()))
    }

    /// Solves the square system `self * x = b`.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        Ok(self.inverse()?.apply(b))
    }

    /// Solves a consistent (possibly overdetermined) system via normal
    /// equations; the caller checks the residual.
    pub fn solve_least_squares(&self, b: &[S]) -> Result<Vec<S>> {
        let at = self.transpose();
        let ata = at.clone() * self.clone();
        let atb = at.apply(b);
        ata.solve(&atb)
    }

    /// Sylvester criterion on an exact or float symmetric matrix.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for k in 1..=self.rows {
            let minor = Self::from_fn(k, k, |i, j| self[(i, j)].clone());
            if !minor.det().is_positive() {
                return false;
            }
        }
        true
    }
}

impl Matrix<f64> {
    /// Smallest eigenvalue of a symmetric matrix, by cyclic Jacobi sweeps.
    pub fn sym_eig_min(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)].abs();
                }
            }
            if off < 1e-14 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[(i, i)]).fold(f64::INFINITY, f64::min)
    }

    /// Matrix exponential by scaling-and-squaring on the Taylor series.
    pub fn exp(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let norm = self.max_abs();
        let squarings = norm.log2().ceil().max(0.0) as u32 + 4;
        let scaled = self.scale(&2f64.powi(-(squarings as i32)));
        let mut term = Matrix::<f64>::identity(n);
        let mut sum = Matrix::<f64>::identity(n);
        for k in 1..24 {
            term = term * scaled.clone();
            term = term.scale(&(1.0 / k as f64));
            sum = sum + term.clone();
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        let mut result = sum;
        for _ in 0..squarings {
            result = result.clone() * result;
        }
        result
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .into_iter()
                .zip(rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<S: Scalar> Mul for Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        })
    }
}

impl<S: Scalar> std::ops::Neg for Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Self {
        self.map(|x| -x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint, Rat};

    #[test]
    fn exact_inverse_roundtrip() {
        let a = Matrix::from_rows(vec![
            vec![rat(2, 1), rat(1, 3), rat(0, 1)],
            vec![rat(-1, 2), rat(1, 1), rat(4, 1)],
            vec![rat(0, 1), rat(5, 7), rat(1, 1)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.clone() * inv, Matrix::identity(3));
        assert!(!a.det().is_zero());
    }

    #[test]
    fn nullspace_of_rank_one() {
        // rows are all multiples of (1, 2, 3)
        let a = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
        ]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let img = a.apply(v);
            assert!(img.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn positive_definite_check() {
        let pd = Matrix::from_rows(vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(2, 1)],
        ]);
        assert!(pd.is_positive_definite());
        let indef = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(3, 1)],
            vec![rat(3, 1), rat(1, 1)],
        ]);
        assert!(!indef.is_positive_definite());
    }

    #[test]
    fn jacobi_min_eigenvalue() {
        let m = Matrix::from_rows(vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ]);
        // eigenvalues are 3 - sqrt(3), 3, 3 + sqrt(3)
        let lam = m.sym_eig_min();
        assert!((lam - (3.0 - 3f64.sqrt())).abs() < 1e-10, "min eig {lam}");
    }

    #[test]
    fn exp_of_nilpotent() {
        let mut n = Matrix::<f64>::zeros(3, 3);
        n[(0, 1)] = 2.0;
        n[(1, 2)] = 3.0;
        let e = n.exp();
        // exp is I + N + N^2/2 for a 2-step nilpotent
        assert!((e[(0, 1)] - 2.0).abs() < 1e-12);
        assert!((e[(0, 2)] - 3.0).abs() < 1e-12);
        assert!((e[(1, 2)] - 3.0).abs() < 1e-12);
    }
}
