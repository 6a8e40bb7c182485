//! Sparse alternating forms on R^n, n <= 8.
//!
//! A form is a map from strictly increasing index tuples (stored as bitmasks,
//! bit i-1 for index i) to coefficients. Zero coefficients are never stored,
//! so structural equality is algebraic equality in exact mode. All products
//! compute signs by merge parity.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{Endo, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<S> {
    dim: usize,
    terms: BTreeMap<u16, S>,
}

/// Parity sign of merging two disjoint sorted index sets (a then b).
fn merge_sign(a: u16, b: u16) -> i64 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        let pos = low.trailing_zeros();
        inversions += (a >> (pos + 1)).count_ones();
        rest &= !low;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of set bits of `mask` strictly below `bit`.
fn bits_below(mask: u16, bit: u32) -> u32 {
    (mask & ((1u16 << bit) - 1)).count_ones()
}

fn mask_to_indices(mask: u16) -> Vec<usize> {
    (0..16)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

fn indices_to_mask(dim: usize, indices: &[usize]) -> Result<u16> {
    let mut mask = 0u16;
    let mut prev = 0usize;
    for &i in indices {
        if i == 0 || i > dim {
            return Err(Error::DimMismatch(format!(
                "index {i} out of range 1..={dim}"
            )));
        }
        if i <= prev {
            return Err(Error::Parse(format!(
                "index tuple {indices:?} is not strictly increasing"
            )));
        }
        prev = i;
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=8).contains(&dim), "dimension {dim} out of range");
        Multivector {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 0-form with value `c`.
    pub fn constant(dim: usize, c: S) -> Self {
        let mut m = Self::zero(dim);
        m.add_term_mask(0, c);
        m
    }

    /// Basis form e^{i1...ik} from 1-based strictly increasing indices.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::from_terms(dim, &[(indices.to_vec(), S::one())]).expect("valid basis indices")
    }

    pub fn from_terms(dim: usize, terms: &[(Vec<usize>, S)]) -> Result<Self> {
        let mut m = Self::zero(dim);
        for (idx, c) in terms {
            let mask = indices_to_mask(dim, idx)?;
            m.add_term_mask(mask, c.clone());
        }
        Ok(m)
    }

    /// Convenience builder from integer coefficients.
    pub fn from_int_terms(dim: usize, terms: &[(&[usize], i64)]) -> Self {
        let owned: Vec<(Vec<usize>, S)> = terms
            .iter()
            .map(|(idx, c)| (idx.to_vec(), S::from_int(*c)))
            .collect();
        Self::from_terms(dim, &owned).expect("valid term indices")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Grade if homogeneous, `None` for the zero form or mixed grades.
    pub fn grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn coeff(&self, indices: &[usize]) -> S {
        match indices_to_mask(self.dim, indices) {
            Ok(mask) => self.coeff_mask(mask),
            Err(_) => S::zero(),
        }
    }

    pub(crate) fn coeff_mask(&self, mask: u16) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Iterates terms as (sorted 1-based indices, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &S)> {
        self.terms.iter().map(|(m, c)| (mask_to_indices(*m), c))
    }

    pub(crate) fn add_term_mask(&mut self, mask: u16, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, v) in &self.terms {
            out.add_term_mask(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term_mask(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// Exterior product with the standard alternating sign convention.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(format!(
                "wedge of dim {} with dim {}",
                self.dim, other.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                out.add_term_mask(ma | mb, ca.clone() * cb.clone() * S::from_int(sign));
            }
        }
        Ok(out)
    }

    /// Interior product (contraction) with the vector `x`, 1-based entries.
    pub fn interior(&self, x: &[S]) -> Result<Self> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch(format!(
                "vector of length {} contracted into dim {}",
                x.len(),
                self.dim
            )));
        }
        if self.grade() == Some(0) {
            return Err(Error::ContractScalar);
        }
        let mut out = Self::zero(self.dim);
        for (&mask, c) in &self.terms {
            let mut rest = mask;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                let bit = low.trailing_zeros();
                rest &= !low;
                let xi = &x[bit as usize];
                if xi.is_zero() {
                    continue;
                }
                let sign = if bits_below(mask, bit) % 2 == 0 { 1 } else { -1 };
                out.add_term_mask(mask & !low, c.clone() * xi.clone() * S::from_int(sign));
            }
        }
        Ok(out)
    }

    /// Contraction with the basis vector e_i (1-based).
    pub fn interior_basis(&self, i: usize) -> Result<Self> {
        let mut x = vec![S::zero(); self.dim];
        x[i - 1] = S::one();
        self.interior(&x)
    }

    /// Endomorphism derivation: sum over slots of `a(X1,..,B Xj,..,Xk)`.
    /// Acts as a derivation over the wedge product.
    pub fn endo_derivation(&self, b: &Endo<S>) -> Result<Self> {
        if b.rows() != self.dim || b.cols() != self.dim {
            return Err(Error::DimMismatch(format!(
                "endomorphism {}x{} acting in dim {}",
                b.rows(),
                b.cols(),
                self.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (&mask, c) in &self.terms {
            let mut rest = mask;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                let i = low.trailing_zeros() as usize;
                rest &= !low;
                // replace the factor e^{i+1} by e^{i+1} o B = sum_j B_{ij} e^{j+1}
                for j in 0..self.dim {
                    let bij = b[(i, j)].clone();
                    if bij.is_zero() {
                        continue;
                    }
                    if j == i {
                        out.add_term_mask(mask, c.clone() * bij);
                        continue;
                    }
                    let jbit = 1u16 << j;
                    if mask & jbit != 0 {
                        continue;
                    }
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    let between = ((1u16 << hi) - 1) & !((1u16 << (lo + 1)) - 1);
                    let crossings = ((mask & !low) & between).count_ones();
                    let sign = if crossings % 2 == 0 { 1 } else { -1 };
                    out.add_term_mask(
                        (mask & !low) | jbit,
                        c.clone() * bij * S::from_int(sign),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Derivative of the gauge action at the identity:
    /// `d/ds|_0 exp(sB) . a = -sum_j a(X1,..,B Xj,..,Xk)`.
    pub fn infinitesimal_action(&self, b: &Endo<S>) -> Result<Self> {
        Ok(self.endo_derivation(b)?.neg())
    }

    /// Gauge action of an invertible endomorphism:
    /// `(A.a)(X1,..,Xk) = a(A^{-1}X1,..,A^{-1}Xk)`.
    ///
    /// This is a left group action; on the volume form it satisfies
    /// `A^{-1}.vol = det(A) vol`.
    pub fn gauge_transform(&self, a: &Endo<S>) -> Result<Self> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimMismatch(format!(
                "gauge {}x{} acting in dim {}",
                a.rows(),
                a.cols(),
                self.dim
            )));
        }
        let inv = a.inverse().map_err(|_| Error::SingularMatrix)?;
        // image of each basis covector: A.e^i = sum_j (A^{-1})_{ij} e^j
        let images: Vec<Multivector<S>> = (0..self.dim)
            .map(|i| {
                let mut w = Self::zero(self.dim);
                for j in 0..self.dim {
                    w.add_term_mask(1 << j, inv[(i, j)].clone());
                }
                w
            })
            .collect();
        let mut out = Self::zero(self.dim);
        for (&mask, c) in &self.terms {
            let mut prod = Self::constant(self.dim, c.clone());
            let mut rest = mask;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                let i = low.trailing_zeros() as usize;
                rest &= !low;
                prod = prod.wedge(&images[i])?;
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Hodge star with respect to a positive definite metric and an
    /// orientation class represented by a nonzero top form.
    pub fn hodge_star(&self, g: &Matrix<S>, orientation: &Self) -> Result<Self> {
        let n = self.dim;
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimMismatch("metric size".into()));
        }
        if !g.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let k = match self.grade() {
            Some(k) => k,
            None if self.is_zero() => return Ok(Self::zero(n)),
            None => {
                return Err(Error::GradeMismatch(
                    "hodge star of a mixed-grade form".into(),
                ))
            }
        };
        let top = (1u16 << n) - 1;
        let or_coeff = orientation.coeff_mask(top);
        let or_sign = match or_coeff.sign() {
            Some(std::cmp::Ordering::Greater) => S::one(),
            Some(std::cmp::Ordering::Less) => -S::one(),
            _ => {
                return Err(Error::DegenerateInput(
                    "orientation form is zero or not a top form".into(),
                ))
            }
        };
        let det = g.det();
        let sqrt_det = det.nth_root(2).ok_or(Error::RootNotRepresentable {
            n: 2,
            what: format!("det(g) = {det}"),
        })?;
        let vol_coeff = or_sign * sqrt_det;
        let ginv = g.inverse()?;

        let mut out = Self::zero(n);
        let target = n - k;
        for kc_mask in 0u16..=top {
            if kc_mask.count_ones() as usize != target {
                continue;
            }
            let comp = top & !kc_mask; // degree-k complement of the output index
            // <e^comp, a> with the metric induced on k-forms
            let comp_idx: Vec<usize> = (0..n).filter(|b| comp & (1 << b) != 0).collect();
            let mut inner = S::zero();
            for (&mask, c) in &self.terms {
                let j_idx: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).collect();
                let minor = Matrix::from_fn(k, k, |r, s| ginv[(comp_idx[r], j_idx[s])].clone());
                inner = inner + minor.det() * c.clone();
            }
            if inner.is_zero() {
                continue;
            }
            let sign = merge_sign(comp, kc_mask);
            out.add_term_mask(kc_mask, inner * vol_coeff.clone() * S::from_int(sign));
        }
        Ok(out)
    }

    /// Coefficient of `e^{1...n}` for a top-degree form.
    pub fn top_coeff(&self) -> S {
        self.coeff_mask((1u16 << self.dim) - 1)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn map_coeffs<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Multivector<T> {
        let mut out = Multivector::zero(self.dim);
        for (&m, c) in &self.terms {
            out.add_term_mask(m, f(c));
        }
        out
    }

    /// Reinterprets the form in a larger space, shifting every index up by
    /// `offset` (used when extending an algebra by central directions).
    pub fn shift_indices(&self, new_dim: usize, offset: usize) -> Self {
        assert!(self.dim + offset <= new_dim);
        let mut out = Self::zero(new_dim);
        for (&m, c) in &self.terms {
            out.add_term_mask(m << offset, c.clone());
        }
        out
    }

    /// Pullback along the inclusion that removes direction `theta` (1-based):
    /// drops all terms containing `theta` and renumbers the rest down.
    pub fn restrict_drop_index(&self, theta: usize) -> Self {
        assert!((1..=self.dim).contains(&theta));
        let bit = 1u16 << (theta - 1);
        let low = bit - 1;
        let mut out = Self::zero(self.dim - 1);
        for (&m, c) in &self.terms {
            if m & bit != 0 {
                continue;
            }
            let new_mask = (m & low) | ((m & !low & !bit) >> 1);
            out.add_term_mask(new_mask, c.clone());
        }
        out
    }
}

impl Multivector<f64> {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.is_empty() {
                write!(f, "{c}")?;
            } else {
                let label: String = idx.iter().map(ToString::to_string).collect();
                write!(f, "({c}) e{label}")?;
            }
        }
        Ok(())
    }
}
