use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingElement, Value};

use super::Polynomial;

/// Dense matrix of polynomials sharing one ring and ambient dimension.
/// Entry access is 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ring: RingDescriptor,
    ambient_n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrices must be non-empty".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let (ring, ambient_n) = (entries[0].ring().clone(), entries[0].ambient_n());
        for e in &entries {
            if e.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            if e.ambient_n() != ambient_n {
                return Err(Error::AmbientMismatch(ambient_n, e.ambient_n()));
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            ring,
            ambient_n,
            entries,
        })
    }

    pub fn from_fn(
        ring: &RingDescriptor,
        ambient_n: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                entries.push(f(i, j));
            }
        }
        let m = Self::new(rows, cols, entries)?;
        if m.ring != *ring {
            return Err(Error::RingMismatch);
        }
        if m.ambient_n != ambient_n {
            return Err(Error::AmbientMismatch(ambient_n, m.ambient_n));
        }
        Ok(m)
    }

    pub fn zeros(ring: &RingDescriptor, ambient_n: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(ring, ambient_n, rows, cols, |_, _| {
            Polynomial::zero(ring, ambient_n)
        })
        .expect("valid shape")
    }

    pub fn identity(ring: &RingDescriptor, ambient_n: usize, size: usize) -> Self {
        Self::from_fn(ring, ambient_n, size, size, |i, j| {
            if i == j {
                Polynomial::one(ring, ambient_n)
            } else {
                Polynomial::zero(ring, ambient_n)
            }
        })
        .expect("valid shape")
    }

    /// The generic matrix `X_n` with entries `x[i,j]`.
    pub fn variables(ring: &RingDescriptor, n: usize) -> Self {
        Self::leading_variables(ring, n, n)
    }

    /// `X_k` (the leading `k x k` block of the generic matrix) inside ambient
    /// dimension `ambient_n >= k`.
    pub fn leading_variables(ring: &RingDescriptor, ambient_n: usize, k: usize) -> Self {
        Self::from_fn(ring, ambient_n, k, k, |i, j| {
            Polynomial::var(ring, ambient_n, i, j)
        })
        .expect("valid shape")
    }

    pub fn diagonal(entries: Vec<Polynomial>) -> Result<Self> {
        let k = entries.len();
        if k == 0 {
            return Err(Error::DimensionMismatch("empty diagonal".into()));
        }
        let (ring, n) = (entries[0].ring().clone(), entries[0].ambient_n());
        Self::from_fn(&ring, n, k, k, |i, j| {
            if i == j {
                entries[i - 1].clone()
            } else {
                Polynomial::zero(&ring, n)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "index ({i},{j}) out of range"
        );
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert!(p.ring() == &self.ring && p.ambient_n() == self.ambient_n);
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "index ({i},{j}) out of range"
        );
        self.entries[(i - 1) * self.cols + (j - 1)] = p;
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.ambient_n, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
        .expect("valid shape")
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.ambient_n != other.ambient_n {
            return Err(Error::AmbientMismatch(self.ambient_n, other.ambient_n));
        }
        Self::from_fn(&self.ring, self.ambient_n, self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero(&self.ring, self.ambient_n);
            for k in 1..=self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    fn zip_with(
        &self,
        other: &PolyMatrix,
        f: impl Fn(&Polynomial, &Polynomial) -> Result<Polynomial>,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<_>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<Self> {
        self.zip_with(other, Polynomial::checked_add)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<Self> {
        self.zip_with(other, Polynomial::checked_sub)
    }

    /// Multiplies every entry by the polynomial `p`.
    pub fn scale(&self, p: &Polynomial) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| p.checked_mul(e))
            .collect::<Result<_>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn scale_value(&self, c: &Value) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.scale(c)).collect(),
        )
        .expect("valid shape")
    }

    pub fn trace(&self) -> Result<Polynomial> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "trace of a non-square matrix".into(),
            ));
        }
        Ok(
            (1..=self.rows).fold(Polynomial::zero(&self.ring, self.ambient_n), |acc, i| {
                &acc + self.get(i, i)
            }),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Rows `r0..=r1` and columns `c0..=c1` (1-indexed, inclusive).
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<Self> {
        if r0 < 1 || c0 < 1 || r1 > self.rows || c1 > self.cols || r0 > r1 || c0 > c1 {
            return Err(Error::DimensionMismatch(format!(
                "block ({r0}..{r1}, {c0}..{c1}) out of range"
            )));
        }
        Self::from_fn(
            &self.ring,
            self.ambient_n,
            r1 - r0 + 1,
            c1 - c0 + 1,
            |i, j| self.get(r0 + i - 1, c0 + j - 1).clone(),
        )
    }

    pub fn promote(&self, n: usize) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.promote(n))
            .collect::<Result<_>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    /// Converts a matrix whose entries all have degree 0.
    pub fn to_constant(&self) -> Result<ConstMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("expected a square matrix".into()));
        }
        let mut values = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            if e.degree() > 0 {
                return Err(Error::DimensionMismatch(
                    "matrix entries must be constants".into(),
                ));
            }
            values.push(e.constant_term().into_value());
        }
        Ok(ConstMatrix {
            n: self.rows,
            ring: self.ring.clone(),
            values,
        })
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols)
                .map(|j| self.get(i, j).to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `X^i` for square `X`, with `X^0 = I`.
pub fn matrix_power(x: &PolyMatrix, i: usize) -> Result<PolyMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(
            "matrix power of a non-square matrix".into(),
        ));
    }
    let mut acc = PolyMatrix::identity(x.ring(), x.ambient_n(), x.rows());
    for _ in 0..i {
        acc = acc.mul(x)?;
    }
    Ok(acc)
}

/// Square matrix of constants, used for evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstMatrix {
    n: usize,
    ring: RingDescriptor,
    values: Vec<Value>,
}

impl ConstMatrix {
    pub fn new(ring: &RingDescriptor, rows: Vec<Vec<Value>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "expected a non-empty square matrix".into(),
            ));
        }
        let values: Vec<Value> = rows.into_iter().flatten().collect();
        if !values.iter().all(|v| ring.is_canonical(v)) {
            return Err(Error::RingMismatch);
        }
        Ok(ConstMatrix {
            n,
            ring: ring.clone(),
            values,
        })
    }

    pub fn from_i64(ring: &RingDescriptor, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&k| ring.from_i64(k)).collect())
                .collect(),
        )
    }

    pub fn from_strings(ring: &RingDescriptor, rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| ring.parse_value(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, rows)
    }

    pub fn zeros(ring: &RingDescriptor, n: usize) -> Self {
        ConstMatrix {
            n,
            ring: ring.clone(),
            values: vec![ring.zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.values[(i - 1) * self.n + (j - 1)]
    }

    pub fn element(&self, i: usize, j: usize) -> RingElement {
        self.ring.element(self.get(i, j).clone())
    }

    /// Zero-pads into a larger `n x n` matrix (top-left block).
    pub fn embed(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed {}x{} into {n}x{n}",
                self.n, self.n
            )));
        }
        let mut out = ConstMatrix::zeros(&self.ring, n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                out.values[(i - 1) * n + (j - 1)] = self.get(i, j).clone();
            }
        }
        Ok(out)
    }

    pub fn to_poly_matrix(&self, ambient_n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, ambient_n, self.n, self.n, |i, j| {
            Polynomial::constant(&self.ring, ambient_n, self.get(i, j).clone())
        })
        .expect("valid shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain triple-loop product written out for the check below.
    fn naive_square(x: &PolyMatrix) -> PolyMatrix {
        let n = x.rows();
        let mut out = PolyMatrix::zeros(x.ring(), x.ambient_n(), n, n);
        for i in 1..=n {
            for j in 1..=n {
                let mut s = Polynomial::zero(x.ring(), x.ambient_n());
                for k in 1..=n {
                    s = &s + &(x.get(i, k) * x.get(k, j));
                }
                out.set(i, j, s);
            }
        }
        out
    }

    #[test]
    fn matrix_power_examples() {
        let z = RingDescriptor::integers();
        let x2 = PolyMatrix::variables(&z, 2);
        assert_eq!(
            matrix_power(&x2, 0).unwrap(),
            PolyMatrix::identity(&z, 2, 2)
        );
        assert_eq!(
            matrix_power(&x2, 1).unwrap().get(2, 2),
            &Polynomial::var(&z, 2, 2, 2)
        );
        let sq = matrix_power(&x2, 2).unwrap();
        assert_eq!(sq, naive_square(&x2));
        let want = &(&Polynomial::var(&z, 2, 2, 1) * &Polynomial::var(&z, 2, 1, 2))
            + &Polynomial::var(&z, 2, 2, 2).pow(2);
        assert_eq!(sq.get(2, 2), &want);
        let rect = PolyMatrix::zeros(&z, 2, 2, 3);
        assert!(matrix_power(&rect, 2).is_err());
    }

    #[test]
    fn shape_errors() {
        let z = RingDescriptor::integers();
        let a = PolyMatrix::zeros(&z, 2, 2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&PolyMatrix::zeros(&z, 2, 3, 2)).is_err());
        assert!(a.trace().is_err());
        assert!(PolyMatrix::new(1, 2, vec![Polynomial::zero(&z, 2)]).is_err());
        assert!(ConstMatrix::from_i64(&z, &[vec![1, 2]]).is_err());
    }

    #[test]
    fn blocks_and_transpose() {
        let z = RingDescriptor::integers();
        let x = PolyMatrix::variables(&z, 3);
        let t = x.transpose();
        assert_eq!(t.get(1, 3), &Polynomial::var(&z, 3, 3, 1));
        let c = x.block(1, 3, 3, 3).unwrap();
        assert_eq!((c.rows(), c.cols()), (3, 1));
        assert_eq!(c.get(2, 1), &Polynomial::var(&z, 3, 2, 3));
        assert!(x.block(0, 1, 1, 1).is_err());
    }
}
