//! Sparse multivariate polynomials keyed by exponent multi-index.
//!
//! Terms live in a `BTreeMap` ordered by graded lexicographic order, so
//! iteration, serialization, and equality are all canonical. Zero
//! coefficients are pruned on every mutation.

mod linmap;
mod parse;
pub mod serial;

pub use linmap::LinearMap;
pub use parse::parse_polynomial;
pub use serial::AnyPolynomial;

use crate::scalar::{Coeff, Rat, ScalarMode};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("homogenization degree {degree} is below polynomial degree {poly_degree}")]
    DegreeTooLow { degree: u32, poly_degree: u32 },
    #[error("variable index {index} out of range for {nvars} variables")]
    BadVariable { index: usize, nvars: usize },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// Exponent vector of one monomial. Ordered by graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_all_even(&self) -> bool {
        self.0.iter().all(|&e| e % 2 == 0)
    }

    /// Parity pattern of the exponents, one bit per variable.
    pub fn parity(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &e)| acc | (((e & 1) as u64) << i))
    }

    pub fn evaluate<T: Coeff>(&self, x: &[T]) -> T {
        let mut acc = T::one();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc * x[i].clone();
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over scalars of one arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Coeff> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, T>,
}

impl<T: Coeff> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zeros(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, var), T::one())
    }

    pub fn monomial(exp: MultiIndex, c: T) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), nvars, "multi-index length mismatch");
            p.add_term(exp, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mode(&self) -> ScalarMode {
        T::MODE
    }

    /// Highest total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.total())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.total() == d)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &MultiIndex) -> T {
        self.terms.get(exp).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, exp: MultiIndex, c: T) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exp.len(), self.nvars);
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch in add");
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(exp.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            out.terms.insert(exp.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            let v = c.clone() * s.clone();
            if !v.is_zero() {
                out.terms.insert(exp.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch in mul");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        let mut acc = T::zero();
        for (exp, c) in &self.terms {
            acc = acc + c.clone() * exp.evaluate(x);
        }
        Ok(acc)
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            let e = exp.0[var];
            if e == 0 {
                continue;
            }
            let mut d = exp.clone();
            d.0[var] = e - 1;
            out.add_term(d, c.clone() * T::from_i64(e as i64));
        }
        out
    }

    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>, PolyError> {
        if x.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: x.len() });
        }
        (0..self.nvars).map(|i| self.partial(i).evaluate(x)).collect()
    }

    /// Substitutes each variable with the matching row form of `v`: returns
    /// `q` with `q(x) = p(Vx)`.
    pub fn compose_linear(&self, v: &LinearMap<T>) -> Result<Self, PolyError> {
        if v.n() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: v.n() });
        }
        let rows: Vec<Polynomial<T>> = (0..self.nvars)
            .map(|i| {
                let mut row = Self::zero(self.nvars);
                for j in 0..self.nvars {
                    let c = v.get(i, j);
                    if !c.is_zero() {
                        row.add_term(MultiIndex::unit(self.nvars, j), c);
                    }
                }
                row
            })
            .collect();
        // Memoize row powers; degrees stay small in practice.
        let mut pows: Vec<Vec<Polynomial<T>>> = rows.iter().map(|r| vec![Self::one(self.nvars), r.clone()]).collect();
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            let mut term = Self::constant(self.nvars, c.clone());
            for (i, &e) in exp.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&rows[i]);
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Lifts to a degree-`d` form by padding with a new last variable.
    pub fn homogenize(&self, d: u32) -> Result<Self, PolyError> {
        if d < self.degree() {
            return Err(PolyError::DegreeTooLow { degree: d, poly_degree: self.degree() });
        }
        let n = self.nvars + 1;
        let mut out = Self::zero(n);
        for (exp, c) in &self.terms {
            let mut e = exp.0.clone();
            e.push(d - exp.total());
            out.terms.insert(MultiIndex(e), c.clone());
        }
        Ok(out)
    }

    /// Substitutes 1 for `x_var` and drops the variable.
    pub fn dehomogenize(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable { index: var, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars - 1);
        for (exp, c) in &self.terms {
            let mut e = exp.0.clone();
            e.remove(var);
            out.add_term(MultiIndex(e), c.clone());
        }
        Ok(out)
    }

    /// Returns `p(x.^2)`: every exponent doubles.
    pub fn substitute_squares(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exp, c) in &self.terms {
            let e = MultiIndex(exp.0.iter().map(|&v| 2 * v).collect());
            out.terms.insert(e, c.clone());
        }
        out
    }

    /// `(‖p‖_∞, ‖p‖_1)` in the standard monomial basis.
    pub fn norms(&self) -> (T, T) {
        let mut inf = T::zero();
        let mut one = T::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a > inf {
                inf = a.clone();
            }
            one = one + a;
        }
        (inf, one)
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        let mut out = Polynomial::zero(self.nvars);
        for (exp, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(exp.clone(), v);
            }
        }
        out
    }

    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl Polynomial<Rat> {
    pub fn to_float(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.to_f64())
    }
}

impl Polynomial<f64> {
    /// Exact lift of the binary floats into rationals.
    pub fn to_rational(&self) -> Polynomial<Rat> {
        self.map_coeffs(|c| Rat::from_float(*c).expect("finite coefficient"))
    }
}

impl<T: Coeff> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms.iter().rev() {
            let cf = c.to_f64();
            if first {
                if cf < 0.0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if cf < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let is_const = exp.total() == 0;
            if !a.is_one() || is_const {
                write!(f, "{}", a.render())?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut firstv = true;
            for (i, &e) in exp.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !firstv {
                    write!(f, "*")?;
                }
                firstv = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// `‖x‖₂^d` as a polynomial (d even).
pub fn sphere_norm_pow<T: Coeff>(nvars: usize, d: u32) -> Polynomial<T> {
    assert!(d % 2 == 0, "norm power must be even");
    let mut sq = Polynomial::zero(nvars);
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = 2;
        sq.add_term(MultiIndex(e), T::one());
    }
    sq.pow(d / 2)
}

/// All monomials of exact total degree `d` in `nvars` variables, grlex order.
pub fn monomials_exact_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill_monomials(&mut out, &mut cur, 0, d);
    out.sort();
    out
}

/// All monomials of total degree at most `d`, grlex order.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(monomials_exact_degree(nvars, k));
    }
    out
}

fn fill_monomials(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill_monomials(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};

    fn motzkin() -> Polynomial<Rat> {
        parse_polynomial::<Rat>("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", Some(2)).unwrap()
    }

    #[test]
    fn grlex_ordering() {
        // degree first, then lexicographic on exponents (descending keys are
        // larger in lex on the leading variable)
        let a = MultiIndex(vec![2, 0]);
        let b = MultiIndex(vec![1, 1]);
        let c = MultiIndex(vec![0, 1]);
        assert!(a > b);
        assert!(b > c);
        assert!(a > c);
    }

    #[test]
    fn motzkin_evaluations() {
        let m = motzkin();
        assert_eq!(m.evaluate(&[rat_int(1), rat_int(1)]).unwrap(), rat_int(0));
        assert_eq!(m.evaluate(&[rat_int(0), rat_int(0)]).unwrap(), rat_int(1));
        assert_eq!(m.degree(), 6);
    }

    #[test]
    fn gradient_simple() {
        let p = parse_polynomial::<f64>("x1^2", Some(1)).unwrap();
        assert_eq!(p.gradient(&[3.0]).unwrap(), vec![6.0]);
        assert!(p.gradient(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn homogenize_motzkin() {
        let m = motzkin();
        let mh = m.homogenize(6).unwrap();
        let expect =
            parse_polynomial::<Rat>("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2*x3^2 + x3^6", Some(3))
                .unwrap();
        assert_eq!(mh, expect);
        assert!(mh.is_homogeneous());
        assert_eq!(mh.dehomogenize(2).unwrap(), m);
        assert!(m.homogenize(4).is_err());
    }

    #[test]
    fn homogenize_constant() {
        let one = Polynomial::<Rat>::one(1);
        let h = one.homogenize(2).unwrap();
        assert_eq!(h, parse_polynomial::<Rat>("x2^2", Some(2)).unwrap());
    }

    #[test]
    fn dehomogenize_untouched_variable() {
        let p = parse_polynomial::<Rat>("x1^2 + x1", Some(2)).unwrap();
        let q = p.dehomogenize(1).unwrap();
        assert_eq!(q, parse_polynomial::<Rat>("x1^2 + x1", Some(1)).unwrap());
    }

    #[test]
    fn substitute_squares_basics() {
        let p = parse_polynomial::<Rat>("x1", Some(2)).unwrap();
        assert_eq!(p.substitute_squares(), parse_polynomial::<Rat>("x1^2", Some(2)).unwrap());
        let q = parse_polynomial::<Rat>("x1*x2", Some(2)).unwrap();
        assert_eq!(q.substitute_squares(), parse_polynomial::<Rat>("x1^2*x2^2", Some(2)).unwrap());
    }

    #[test]
    fn norms_motzkin() {
        let (inf, one) = motzkin().norms();
        assert_eq!(inf, rat_int(3));
        assert_eq!(one, rat_int(6));
        let z = Polynomial::<Rat>::zero(2);
        assert_eq!(z.norms(), (rat_int(0), rat_int(0)));
        let p = parse_polynomial::<Rat>("5*x1 - 2*x2", Some(2)).unwrap();
        assert_eq!(p.norms(), (rat_int(5), rat_int(7)));
    }

    #[test]
    fn compose_linear_identity_and_scaling() {
        let p = motzkin().homogenize(6).unwrap();
        let id = LinearMap::<Rat>::identity(3);
        assert_eq!(p.compose_linear(&id).unwrap(), p);

        let two = LinearMap::<Rat>::diagonal(&[rat_int(2)]);
        let q = parse_polynomial::<Rat>("x1^2", Some(1)).unwrap();
        assert_eq!(q.compose_linear(&two).unwrap(), parse_polynomial::<Rat>("4*x1^2", Some(1)).unwrap());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_exact_degree(3, 3).len(), 10);
        assert_eq!(monomials_up_to_degree(2, 3).len(), 10);
        // grlex: strictly increasing
        let ms = monomials_exact_degree(3, 4);
        for w in ms.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}
