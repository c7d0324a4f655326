//! Sparse polynomials in the entries `x[i,j]` of a generic `n x n` matrix.

mod matrix;

pub use matrix::{matrix_power, ConstMatrix, PolyMatrix};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement, Value};
use crate::sparse::{self, Monomial, Terms};

/// The variable `x[row, col]`, 1-indexed.
///
/// Variables are ordered by `(row, col)`, which coincides with the order of
/// the flattened index `(row-1)*n + (col-1)` for every ambient `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub row: u16,
    pub col: u16,
}

impl VarIndex {
    pub fn new(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "variable indices are 1-based");
        VarIndex {
            row: row as u16,
            col: col as u16,
        }
    }

    pub fn row(&self) -> usize {
        self.row as usize
    }

    pub fn col(&self) -> usize {
        self.col as usize
    }

    pub fn flatten(&self, n: usize) -> usize {
        (self.row() - 1) * n + (self.col() - 1)
    }

    pub fn unflatten(k: usize, n: usize) -> Self {
        VarIndex::new(k / n + 1, k % n + 1)
    }

    pub fn within(&self, n: usize) -> bool {
        self.row() <= n && self.col() <= n
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.row, self.col)
    }
}

pub type PolyMonomial = Monomial<VarIndex>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    ambient_n: usize,
    ring: RingDescriptor,
    terms: Terms<VarIndex>,
}

impl Polynomial {
    pub fn zero(ring: &RingDescriptor, ambient_n: usize) -> Self {
        Polynomial {
            ambient_n,
            ring: ring.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(ring: &RingDescriptor, ambient_n: usize) -> Self {
        Self::constant(ring, ambient_n, ring.one())
    }

    pub fn constant(ring: &RingDescriptor, ambient_n: usize, c: Value) -> Self {
        Polynomial {
            ambient_n,
            ring: ring.clone(),
            terms: sparse::constant(ring, c),
        }
    }

    pub fn from_int(ring: &RingDescriptor, ambient_n: usize, k: i64) -> Self {
        Self::constant(ring, ambient_n, ring.from_i64(k))
    }

    /// The variable `x[i,j]`; panics if it lies outside the ambient matrix.
    pub fn var(ring: &RingDescriptor, ambient_n: usize, i: usize, j: usize) -> Self {
        let v = VarIndex::new(i, j);
        assert!(v.within(ambient_n), "{v} outside ambient n = {ambient_n}");
        Self::monomial(ring, ambient_n, Monomial::var(v), ring.one())
    }

    pub fn monomial(ring: &RingDescriptor, ambient_n: usize, m: PolyMonomial, c: Value) -> Self {
        let mut terms = Terms::new();
        sparse::add_term(ring, &mut terms, m, c);
        Polynomial {
            ambient_n,
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (PolyMonomial, Value)>>(
        ring: &RingDescriptor,
        ambient_n: usize,
        terms: I,
    ) -> Self {
        let mut out = Terms::new();
        for (m, c) in terms {
            sparse::add_term(ring, &mut out, m, c);
        }
        Polynomial {
            ambient_n,
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn terms(&self) -> &Terms<VarIndex> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.degree() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() as usize == k)
    }

    pub fn coefficient(&self, m: &PolyMonomial) -> Value {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> RingElement {
        self.ring.element(self.coefficient(&Monomial::one()))
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.ambient_n != other.ambient_n {
            return Err(Error::AmbientMismatch(self.ambient_n, other.ambient_n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.with_terms(sparse::add(&self.ring, &self.terms, &other.terms)))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.with_terms(sparse::sub(&self.ring, &self.terms, &other.terms)))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.with_terms(sparse::mul(&self.ring, &self.terms, &other.terms)))
    }

    fn with_terms(&self, terms: Terms<VarIndex>) -> Polynomial {
        Polynomial {
            ambient_n: self.ambient_n,
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Value) -> Polynomial {
        self.with_terms(sparse::scale(&self.ring, &self.terms, c))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring, self.ambient_n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: VarIndex) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            m.lower(v)
                .map(|(e, rest)| (rest, self.ring.mul(c, &self.ring.from_i64(e as i64))))
        });
        Polynomial::from_terms(&self.ring, self.ambient_n, terms)
    }

    /// The `n x n` matrix of partial derivatives `[grad f]_{i,j} = d f / d x[i,j]`.
    pub fn gradient(&self, n: usize) -> Result<PolyMatrix> {
        if n != self.ambient_n {
            return Err(Error::AmbientMismatch(n, self.ambient_n));
        }
        PolyMatrix::from_fn(&self.ring, n, n, n, |i, j| {
            self.partial_derivative(VarIndex::new(i, j))
        })
    }

    pub fn homogeneous_component(&self, k: usize) -> Polynomial {
        self.with_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() as usize == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    /// Evaluates at a constant matrix.
    pub fn evaluate(&self, a: &ConstMatrix) -> Result<RingElement> {
        if a.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if a.n() != self.ambient_n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for ambient n = {}",
                a.n(),
                a.n(),
                self.ambient_n
            )));
        }
        let r = &self.ring;
        let mut acc = r.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t = r.mul(&t, &r.pow(a.get(v.row(), v.col()), e));
            }
            acc = r.add(&acc, &t);
        }
        Ok(r.element(acc))
    }

    /// Evaluates `x[i,j] -> [A]_{i,j}` for a matrix whose entries are constants.
    pub fn substitute(&self, a: &PolyMatrix) -> Result<RingElement> {
        self.evaluate(&a.to_constant()?)
    }

    /// Replaces every `x[i,j]` by the polynomial `[A]_{i,j}`; the result lives
    /// in the ambient dimension of `A`'s entries.
    pub fn compose(&self, a: &PolyMatrix) -> Result<Polynomial> {
        if a.rows() != self.ambient_n || a.cols() != self.ambient_n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for ambient n = {}",
                a.rows(),
                a.cols(),
                self.ambient_n
            )));
        }
        if a.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut acc = Polynomial::zero(&self.ring, a.ambient_n());
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&self.ring, a.ambient_n(), c.clone());
            for &(v, e) in m.pairs() {
                t = &t * &a.get(v.row(), v.col()).pow(e);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Embeds into a larger ambient matrix; terms are unchanged.
    pub fn promote(&self, n: usize) -> Result<Polynomial> {
        if n < self.ambient_n {
            return Err(Error::AmbientMismatch(n, self.ambient_n));
        }
        Ok(Polynomial {
            ambient_n: n,
            ring: self.ring.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Restricts to diagonal matrices: off-diagonal variables are set to zero.
    pub fn restrict_to_diagonal(&self) -> Polynomial {
        self.with_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.pairs().iter().all(|(v, _)| v.row == v.col))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        )
    }

    /// Canonical text: terms in descending graded-lex order, each written as
    /// `<coeff>*x[i,j]^e*...`, joined by ` + `.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut s = self.ring.format_value(c);
                for &(v, e) in m.pairs() {
                    s.push_str(&format!("*{v}^{e}"));
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.with_terms(sparse::neg(&self.ring, &self.terms))
    }
}

/// `tr(X_n) = x[1,1] + ... + x[n,n]` in ambient dimension `ambient_n`.
pub fn trace_poly(ring: &RingDescriptor, ambient_n: usize, n: usize) -> Polynomial {
    (1..=n).fold(Polynomial::zero(ring, ambient_n), |acc, i| {
        &acc + &Polynomial::var(ring, ambient_n, i, i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(r: &RingDescriptor, n: usize, i: usize, j: usize) -> Polynomial {
        Polynomial::var(r, n, i, j)
    }

    fn det2(r: &RingDescriptor) -> Polynomial {
        &(&x(r, 2, 1, 1) * &x(r, 2, 2, 2)) - &(&x(r, 2, 1, 2) * &x(r, 2, 2, 1))
    }

    #[test]
    fn difference_of_squares() {
        let z = RingDescriptor::integers();
        let a = &x(&z, 2, 1, 1) + &x(&z, 2, 2, 2);
        let b = &x(&z, 2, 1, 1) - &x(&z, 2, 2, 2);
        let want = &x(&z, 2, 1, 1).pow(2) - &x(&z, 2, 2, 2).pow(2);
        assert_eq!(&a * &b, want);
        assert_eq!(want.to_canonical_string(), "1*x[1,1]^2 + -1*x[2,2]^2");
        assert_eq!(&a + &Polynomial::zero(&z, 2), a);
    }

    #[test]
    fn zero_divisors_drop_degree() {
        let z4 = RingDescriptor::modular(4).unwrap();
        let f = x(&z4, 1, 1, 1).scale(&z4.from_i64(2));
        let p = &f * &f;
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn mismatches_are_errors() {
        let z = RingDescriptor::integers();
        let q = RingDescriptor::rationals();
        assert!(matches!(
            x(&z, 2, 1, 1).checked_add(&x(&q, 2, 1, 1)),
            Err(Error::RingMismatch)
        ));
        assert!(matches!(
            x(&z, 2, 1, 1).checked_mul(&x(&z, 3, 1, 1)),
            Err(Error::AmbientMismatch(2, 3))
        ));
    }

    #[test]
    fn derivatives() {
        let z = RingDescriptor::integers();
        let f = &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2);
        assert_eq!(f.partial_derivative(VarIndex::new(1, 1)), x(&z, 2, 2, 2));
        assert_eq!(
            det2(&z).partial_derivative(VarIndex::new(1, 2)),
            -&x(&z, 2, 2, 1)
        );
        let z2 = RingDescriptor::modular(2).unwrap();
        assert!(x(&z2, 1, 1, 1)
            .pow(2)
            .partial_derivative(VarIndex::new(1, 1))
            .is_zero());
    }

    #[test]
    fn gradient_of_det2_is_cofactor_matrix() {
        let z = RingDescriptor::integers();
        let g = det2(&z).gradient(2).unwrap();
        assert_eq!(g.get(1, 1), &x(&z, 2, 2, 2));
        assert_eq!(g.get(1, 2), &-&x(&z, 2, 2, 1));
        assert_eq!(g.get(2, 1), &-&x(&z, 2, 1, 2));
        assert_eq!(g.get(2, 2), &x(&z, 2, 1, 1));
        assert!(det2(&z).gradient(3).is_err());
    }

    #[test]
    fn gradient_of_trace_is_identity() {
        let z = RingDescriptor::integers();
        for n in 1..=6 {
            assert_eq!(
                trace_poly(&z, n, n).gradient(n).unwrap(),
                PolyMatrix::identity(&z, n, n)
            );
        }
    }

    #[test]
    fn homogeneous_components() {
        let z = RingDescriptor::integers();
        let one = Polynomial::one(&z, 2);
        let f = &(&one + &x(&z, 2, 1, 1)) + &(&x(&z, 2, 1, 1) * &x(&z, 2, 2, 2));
        assert_eq!(
            f.homogeneous_component(2),
            &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2)
        );
        assert!(f.homogeneous_component(3).is_zero());
        let g = &(&one + &x(&z, 2, 1, 1)) * &(&one + &x(&z, 2, 2, 2));
        assert_eq!(
            g.homogeneous_component(1),
            &x(&z, 2, 1, 1) + &x(&z, 2, 2, 2)
        );
    }

    #[test]
    fn substitution() {
        let z = RingDescriptor::integers();
        let a = ConstMatrix::from_i64(&z, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(det2(&z).evaluate(&a).unwrap().to_string(), "-2");
        let z4 = RingDescriptor::modular(4).unwrap();
        let b = ConstMatrix::from_i64(&z4, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert!(trace_poly(&z4, 2, 2).evaluate(&b).unwrap().is_zero());
        let f = &det2(&z) + &Polynomial::from_int(&z, 2, 7);
        let zero = ConstMatrix::zeros(&z, 2);
        assert_eq!(f.evaluate(&zero).unwrap(), f.constant_term());
        let wrong = ConstMatrix::zeros(&z, 3);
        assert!(matches!(
            f.evaluate(&wrong),
            Err(Error::DimensionMismatch(_))
        ));
        let pm = PolyMatrix::from_fn(&z, 2, 2, 2, |i, j| {
            Polynomial::from_int(&z, 2, (2 * (i - 1) + j) as i64)
        })
        .unwrap();
        assert_eq!(det2(&z).substitute(&pm).unwrap().to_string(), "-2");
        assert!(det2(&z).substitute(&PolyMatrix::variables(&z, 2)).is_err());
    }

    #[test]
    fn promotion_and_diagonal_restriction() {
        let z = RingDescriptor::integers();
        let f = det2(&z);
        let g = f.promote(3).unwrap();
        assert_eq!(g.ambient_n(), 3);
        assert_eq!(g.to_canonical_string(), f.to_canonical_string());
        assert!(g.promote(2).is_err());
        assert_eq!(f.restrict_to_diagonal(), &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2));
    }

    #[test]
    fn var_index_flattening_is_bijective() {
        for n in 1..=5 {
            let mut seen = vec![false; n * n];
            for i in 1..=n {
                for j in 1..=n {
                    let v = VarIndex::new(i, j);
                    let k = v.flatten(n);
                    assert!(!seen[k]);
                    seen[k] = true;
                    assert_eq!(VarIndex::unflatten(k, n), v);
                }
            }
        }
    }
}
