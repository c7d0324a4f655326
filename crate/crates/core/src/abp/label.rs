use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::polynomial::{ConstMatrix, Polynomial, VarIndex};
use crate::ring::{RingDescriptor, Value};
use crate::sparse::Monomial;

/// An edge label of degree at most one: `constant + sum c_ij x[i,j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLabel {
    constant: Value,
    linear: BTreeMap<VarIndex, Value>,
}

impl AffineLabel {
    pub fn zero(ring: &RingDescriptor) -> Self {
        AffineLabel {
            constant: ring.zero(),
            linear: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &RingDescriptor, c: Value) -> Self {
        let mut l = Self::zero(ring);
        if !ring.is_zero(&c) {
            l.constant = c;
        }
        l
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::constant(ring, ring.one())
    }

    pub fn var(ring: &RingDescriptor, i: usize, j: usize) -> Self {
        Self::scaled_var(ring, i, j, ring.one())
    }

    pub fn neg_var(ring: &RingDescriptor, i: usize, j: usize) -> Self {
        Self::scaled_var(ring, i, j, ring.from_i64(-1))
    }

    pub fn scaled_var(ring: &RingDescriptor, i: usize, j: usize, c: Value) -> Self {
        let mut l = Self::zero(ring);
        if !ring.is_zero(&c) {
            l.linear.insert(VarIndex::new(i, j), c);
        }
        l
    }

    /// Reads a polynomial of degree at most one.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let ring = p.ring();
        let mut l = Self::zero(ring);
        for (m, c) in p.terms() {
            match m.pairs() {
                [] => l.constant = c.clone(),
                [(v, 1)] => {
                    l.linear.insert(*v, c.clone());
                }
                _ => {
                    return Err(Error::ParameterOutOfRange(format!(
                        "label of degree {} > 1",
                        m.degree()
                    )))
                }
            }
        }
        Ok(l)
    }

    pub fn constant_part(&self) -> &Value {
        &self.constant
    }

    pub fn linear_part(&self) -> &BTreeMap<VarIndex, Value> {
        &self.linear
    }

    pub fn is_zero(&self, ring: &RingDescriptor) -> bool {
        self.linear.is_empty() && ring.is_zero(&self.constant)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn is_homogeneous_linear(&self, ring: &RingDescriptor) -> bool {
        ring.is_zero(&self.constant)
    }

    /// The homogeneous linear part alone.
    pub fn linear_only(&self, ring: &RingDescriptor) -> Self {
        AffineLabel {
            constant: ring.zero(),
            linear: self.linear.clone(),
        }
    }

    pub fn max_var_index(&self) -> usize {
        self.linear
            .keys()
            .map(|v| v.row().max(v.col()))
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, ring: &RingDescriptor, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant = ring.add(&self.constant, &other.constant);
        for (v, c) in &other.linear {
            let s = match out.linear.get(v) {
                Some(a) => ring.add(a, c),
                None => c.clone(),
            };
            if ring.is_zero(&s) {
                out.linear.remove(v);
            } else {
                out.linear.insert(*v, s);
            }
        }
        out
    }

    pub fn scale(&self, ring: &RingDescriptor, c: &Value) -> Self {
        let linear = self
            .linear
            .iter()
            .map(|(v, a)| (*v, ring.mul(a, c)))
            .filter(|(_, a)| !ring.is_zero(a))
            .collect();
        AffineLabel {
            constant: ring.mul(&self.constant, c),
            linear,
        }
    }

    pub fn neg(&self, ring: &RingDescriptor) -> Self {
        self.scale(ring, &ring.from_i64(-1))
    }

    pub fn evaluate(&self, ring: &RingDescriptor, a: &ConstMatrix) -> Value {
        self.linear
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| {
                ring.add(&acc, &ring.mul(c, a.get(v.row(), v.col())))
            })
    }

    pub fn to_polynomial(&self, ring: &RingDescriptor, ambient_n: usize) -> Polynomial {
        let terms = std::iter::once((Monomial::one(), self.constant.clone())).chain(
            self.linear
                .iter()
                .map(|(v, c)| (Monomial::var(*v), c.clone())),
        );
        Polynomial::from_terms(ring, ambient_n, terms)
    }

    pub fn to_text(&self, ring: &RingDescriptor, ambient_n: usize) -> String {
        self.to_polynomial(ring, ambient_n).to_canonical_string()
    }
}
