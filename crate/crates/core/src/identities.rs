//! Exact symbolic checks of the characteristic-polynomial identities.
//!
//! Every check builds a left and a right side as polynomial matrices and
//! compares them entrywise. The right sides use matrix powers and the
//! minor-sum coefficients; the left sides use gradients of the minor-sum
//! coefficients, cofactors, or (with `combinatorial`) the cycle-cover and
//! CCP enumerations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::constructions::transition_matrix;
use crate::error::{Error, Result};
use crate::oracle::{cpc_cycle_cover, cpc_minor_sum, det_leibniz, grad_ccp_entry, grad_ccp_matrix};
use crate::polynomial::{matrix_power, trace_poly, PolyMatrix, Polynomial};
use crate::ring::RingDescriptor;
use crate::sparse::Monomial;

pub const VERIFY_ALL_MAX_N: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityName {
    BivariateCh,
    CayleyHamilton,
    Adjugate,
    TraceCh,
    GirardNewton,
    SamuelsonEntry,
    CpcRecursion,
    RndBlock,
    TransitionProduct,
}

impl IdentityName {
    pub const ALL: [IdentityName; 9] = [
        IdentityName::BivariateCh,
        IdentityName::CayleyHamilton,
        IdentityName::Adjugate,
        IdentityName::TraceCh,
        IdentityName::GirardNewton,
        IdentityName::SamuelsonEntry,
        IdentityName::CpcRecursion,
        IdentityName::RndBlock,
        IdentityName::TransitionProduct,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityName::BivariateCh => "bivariate_ch",
            IdentityName::CayleyHamilton => "cayley_hamilton",
            IdentityName::Adjugate => "adjugate",
            IdentityName::TraceCh => "trace_ch",
            IdentityName::GirardNewton => "girard_newton",
            IdentityName::SamuelsonEntry => "samuelson_entry",
            IdentityName::CpcRecursion => "cpc_recursion",
            IdentityName::RndBlock => "rnd_block",
            IdentityName::TransitionProduct => "transition_product",
        }
    }

    /// The `d` actually checked for a requested `(n, d)`.
    pub fn effective_d(&self, n: usize, d: usize) -> usize {
        match self {
            IdentityName::CayleyHamilton => n,
            IdentityName::Adjugate => n.saturating_sub(1),
            _ => d,
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity `{s}`")))
    }
}

/// The first mismatching entry, in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub identity: IdentityName,
    pub n: usize,
    pub d: usize,
    pub ring: RingDescriptor,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} d={} ring={} {}",
            self.identity,
            self.n,
            self.d,
            self.ring,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        if let Some(w) = &self.witness {
            write!(
                f,
                "\n  first mismatch at ({},{}): lhs = {}; rhs = {}; lhs - rhs = {}",
                w.row, w.col, w.lhs, w.rhs, w.diff
            )?;
        }
        Ok(())
    }
}

/// Compares two matrices entrywise.
pub fn compare(lhs: &PolyMatrix, rhs: &PolyMatrix) -> Result<Option<Witness>> {
    if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            lhs.rows(),
            lhs.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    for i in 1..=lhs.rows() {
        for j in 1..=lhs.cols() {
            let (a, b) = (lhs.get(i, j), rhs.get(i, j));
            if a != b {
                return Ok(Some(Witness {
                    row: i,
                    col: j,
                    lhs: a.to_canonical_string(),
                    rhs: b.to_canonical_string(),
                    diff: a.checked_sub(b)?.to_canonical_string(),
                }));
            }
        }
    }
    Ok(None)
}

/// `cpc_{m,d}` in ambient dimension `n >= m`, with `cpc_{0,0} = 1`.
pub fn cpc(m: usize, d: usize, n: usize, ring: &RingDescriptor) -> Result<Polynomial> {
    if m == 0 {
        return Ok(if d == 0 {
            Polynomial::one(ring, n)
        } else {
            Polynomial::zero(ring, n)
        });
    }
    cpc_minor_sum(m, d, ring)?.promote(n)
}

fn cpc_combinatorial(m: usize, d: usize, n: usize, ring: &RingDescriptor) -> Result<Polynomial> {
    if m == 0 {
        return cpc(0, d, n, ring);
    }
    cpc_cycle_cover(m, d, ring)?.promote(n)
}

fn scalar(p: Polynomial) -> PolyMatrix {
    PolyMatrix::new(1, 1, vec![p]).expect("1x1")
}

/// `(grad cpc_{n,d+1})^T`, from the minor sum or from CCP pairs.
pub fn transposed_gradient(
    n: usize,
    d: usize,
    ring: &RingDescriptor,
    combinatorial: bool,
) -> Result<PolyMatrix> {
    if combinatorial {
        grad_ccp_matrix(n, d, ring)
    } else {
        Ok(cpc_minor_sum(n, d + 1, ring)?.gradient(n)?.transpose())
    }
}

/// `sum_{i=0}^d (-1)^i cpc_{n,d-i} X^i`.
pub fn bivariate_rhs(n: usize, d: usize, ring: &RingDescriptor) -> Result<PolyMatrix> {
    let x = PolyMatrix::variables(ring, n);
    let mut acc = PolyMatrix::zeros(ring, n, n, n);
    let mut power = PolyMatrix::identity(ring, n, n);
    for i in 0..=d {
        let coeff = cpc(n, d - i, n, ring)?.scale(&ring.sign_power(i));
        acc = acc.add(&power.scale(&coeff)?)?;
        power = power.mul(&x)?;
    }
    Ok(acc)
}

/// The cofactor-transpose of `X_n`.
pub fn adjugate_by_cofactors(n: usize, ring: &RingDescriptor) -> Result<PolyMatrix> {
    if n == 1 {
        return Ok(PolyMatrix::identity(ring, 1, 1));
    }
    let x = PolyMatrix::variables(ring, n);
    PolyMatrix::from_fn(ring, n, n, n, |i, j| {
        let rows: Vec<usize> = (1..=n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (1..=n).filter(|&c| c != i).collect();
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| (r, c)))
            .map(|(r, c)| x.get(r, c).clone());
        let minor = PolyMatrix::new(n - 1, n - 1, entries.collect()).expect("minor");
        det_leibniz(&minor)
            .expect("minor within guard")
            .scale(&ring.sign_power(i + j))
    })
}

/// `[X_i^t]_{i,i}` in ambient dimension `n`, with the empty product for
/// `t = 0`.
pub fn pow_entry(i: usize, t: usize, n: usize, ring: &RingDescriptor) -> Result<Polynomial> {
    let xi = PolyMatrix::leading_variables(ring, n, i);
    Ok(matrix_power(&xi, t)?.get(i, i).clone())
}

/// `cpc_{i,j}` for all `i <= n`, `j <= d`, built only from the recursion
/// `cpc_{i,j} = cpc_{i-1,j} + sum_{t=1}^j (-1)^(t+1) cpc_{i,j-t} pow_{i,t}`.
pub fn cpc_by_recursion(n: usize, d: usize, ring: &RingDescriptor) -> Result<Vec<Vec<Polynomial>>> {
    let mut table: Vec<Vec<Polynomial>> = Vec::with_capacity(n + 1);
    table.push((0..=d).map(|j| cpc(0, j, n, ring)).collect::<Result<_>>()?);
    for i in 1..=n {
        let pows: Vec<Polynomial> = (0..=d)
            .map(|t| pow_entry(i, t, n, ring))
            .collect::<Result<_>>()?;
        let mut row = vec![Polynomial::one(ring, n)];
        for j in 1..=d {
            let mut acc = table[i - 1][j].clone();
            for t in 1..=j {
                acc = &acc + &(&row[j - t] * &pows[t]).scale(&ring.sign_power(t + 1));
            }
            row.push(acc);
        }
        table.push(row);
    }
    Ok(table)
}

/// `r_{i,d}`, the last row of `(grad cpc_{i,d+1})^T`, as a `1 x i` matrix in
/// ambient dimension `n`.
pub fn r_vector(
    i: usize,
    d: usize,
    n: usize,
    ring: &RingDescriptor,
    combinatorial: bool,
) -> Result<PolyMatrix> {
    let entries: Vec<Polynomial> = if combinatorial {
        (1..=i)
            .map(|a| grad_ccp_entry(i, d, i, a, ring)?.promote(n))
            .collect::<Result<_>>()?
    } else {
        let f = cpc_minor_sum(i, d + 1, ring)?;
        (1..=i)
            .map(|a| f.partial_derivative(crate::VarIndex::new(a, i)).promote(n))
            .collect::<Result<_>>()?
    };
    PolyMatrix::new(1, i, entries)
}

/// `r_{i,1} = (-x_{i,1}, ..., -x_{i,i-1}, tr_{i-1})`.
pub fn r_vector_first(i: usize, n: usize, ring: &RingDescriptor) -> Result<PolyMatrix> {
    let mut entries: Vec<Polynomial> = (1..i).map(|a| -&Polynomial::var(ring, n, i, a)).collect();
    entries.push(trace_poly(ring, n, i - 1));
    PolyMatrix::new(1, i, entries)
}

/// `(-r_{n,d-1} L_n | sum_{i=d}^{n-1} r_{i,d-1} C_i)`.
fn rnd_block_rhs(
    n: usize,
    d: usize,
    ring: &RingDescriptor,
    combinatorial: bool,
) -> Result<PolyMatrix> {
    let x = PolyMatrix::variables(ring, n);
    let prev = r_vector(n, d - 1, n, ring, combinatorial)?;
    let mut entries = Vec::with_capacity(n);
    if n > 1 {
        let l = x.block(1, n, 1, n - 1)?;
        let left = prev.mul(&l)?.scale_value(&ring.from_i64(-1));
        entries.extend(left.entries().iter().cloned());
    }
    let mut last = Polynomial::zero(ring, n);
    for i in d..n {
        let c = x.block(1, i, i, i)?;
        last = &last
            + r_vector(i, d - 1, n, ring, combinatorial)?
                .mul(&c)?
                .get(1, 1);
    }
    entries.push(last);
    PolyMatrix::new(1, n, entries)
}

/// Both sides of an identity.
pub fn identity_sides(
    id: IdentityName,
    n: usize,
    d: usize,
    ring: &RingDescriptor,
    combinatorial: bool,
) -> Result<(PolyMatrix, PolyMatrix)> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n must be positive".into()));
    }
    let d = id.effective_d(n, d);
    match id {
        IdentityName::BivariateCh | IdentityName::CayleyHamilton => Ok((
            transposed_gradient(n, d, ring, combinatorial)?,
            bivariate_rhs(n, d, ring)?,
        )),
        IdentityName::Adjugate => {
            let lhs = if combinatorial {
                grad_ccp_matrix(n, d, ring)?
            } else {
                adjugate_by_cofactors(n, ring)?
            };
            Ok((lhs, bivariate_rhs(n, d, ring)?))
        }
        IdentityName::TraceCh => {
            let c = if combinatorial {
                cpc_combinatorial(n, d, n, ring)?
            } else {
                cpc(n, d, n, ring)?
            };
            let lhs = c.scale(&ring.from_i64(-(d as i64)));
            let x = PolyMatrix::variables(ring, n);
            let mut rhs = Polynomial::zero(ring, n);
            let mut power = PolyMatrix::identity(ring, n, n);
            for i in 1..=d {
                power = power.mul(&x)?;
                let term = &cpc(n, d - i, n, ring)? * &power.trace()?;
                rhs = &rhs + &term.scale(&ring.sign_power(i));
            }
            Ok((scalar(lhs), scalar(rhs)))
        }
        IdentityName::GirardNewton => {
            let e = |j: usize| -> Result<Polynomial> {
                let c = if combinatorial {
                    cpc_combinatorial(n, j, n, ring)?
                } else {
                    cpc(n, j, n, ring)?
                };
                Ok(c.restrict_to_diagonal())
            };
            let p = |i: usize| {
                Polynomial::from_terms(
                    ring,
                    n,
                    (1..=n).map(|k| {
                        (
                            Monomial::from_pairs([(crate::VarIndex::new(k, k), i as u32)]),
                            ring.one(),
                        )
                    }),
                )
            };
            let lhs = e(d)?.scale(&ring.from_i64(-(d as i64)));
            let mut rhs = Polynomial::zero(ring, n);
            for i in 1..=d {
                rhs = &rhs + &(&e(d - i)? * &p(i)).scale(&ring.sign_power(i));
            }
            Ok((scalar(lhs), scalar(rhs)))
        }
        IdentityName::SamuelsonEntry => {
            let lhs = if combinatorial {
                cpc_combinatorial(n - 1, d, n, ring)?
            } else {
                cpc(n - 1, d, n, ring)?
            };
            let mut rhs = Polynomial::zero(ring, n);
            for i in 0..=d {
                let term = &cpc(n, d - i, n, ring)? * &pow_entry(n, i, n, ring)?;
                rhs = &rhs + &term.scale(&ring.sign_power(i));
            }
            Ok((scalar(lhs), scalar(rhs)))
        }
        IdentityName::CpcRecursion => {
            let lhs = if combinatorial {
                cpc_combinatorial(n, d, n, ring)?
            } else {
                cpc(n, d, n, ring)?
            };
            let table = cpc_by_recursion(n, d, ring)?;
            Ok((scalar(lhs), scalar(table[n][d].clone())))
        }
        IdentityName::RndBlock => {
            // the extra last column compares [r_{n,d}]_n with cpc_{n-1,d}
            let r = r_vector(n, d, n, ring, combinatorial)?;
            let mut lhs: Vec<Polynomial> = r.entries().to_vec();
            lhs.push(r.get(1, n).clone());
            let mut rhs: Vec<Polynomial> = if d == 0 {
                (1..=n)
                    .map(|a| Polynomial::from_int(ring, n, i64::from(a == n)))
                    .collect()
            } else {
                rnd_block_rhs(n, d, ring, combinatorial)?.entries().to_vec()
            };
            rhs.push(cpc(n - 1, d, n, ring)?);
            Ok((
                PolyMatrix::new(1, n + 1, lhs)?,
                PolyMatrix::new(1, n + 1, rhs)?,
            ))
        }
        IdentityName::TransitionProduct => {
            if d < 2 {
                return Err(Error::ParameterOutOfRange(format!(
                    "transition product needs d >= 2, got {d}"
                )));
            }
            let mut row: Vec<Polynomial> = Vec::new();
            for i in 2..=d {
                row.extend(r_vector_first(i, d, ring)?.entries().iter().cloned());
            }
            let mut v = PolyMatrix::new(1, row.len(), row)?;
            for j in 2..d {
                v = v.mul(&transition_matrix(d, j, ring)?)?;
            }
            let c = PolyMatrix::variables(ring, d).block(1, d, d, d)?;
            let lhs = v.mul(&c)?;
            Ok((lhs, scalar(det_leibniz(&PolyMatrix::variables(ring, d))?)))
        }
    }
}

pub fn verify_identity(
    id: IdentityName,
    n: usize,
    d: usize,
    ring: &RingDescriptor,
    combinatorial: bool,
) -> Result<CheckReport> {
    let (lhs, rhs) = identity_sides(id, n, d, ring, combinatorial)?;
    let witness = compare(&lhs, &rhs)?;
    Ok(CheckReport {
        identity: id,
        n,
        d: id.effective_d(n, d),
        ring: ring.clone(),
        passed: witness.is_none(),
        witness,
    })
}

/// The `(identity, n, d)` grid run by [`verify_all`].
pub fn verify_grid(n_max: usize, d_max: usize) -> Vec<(IdentityName, usize, usize)> {
    let mut grid = Vec::new();
    for id in IdentityName::ALL {
        match id {
            IdentityName::CayleyHamilton => grid.extend((1..=n_max).map(|n| (id, n, n))),
            IdentityName::Adjugate => grid.extend((1..=n_max).map(|n| (id, n, n - 1))),
            IdentityName::TransitionProduct => grid.extend((2..=n_max).map(|d| (id, d, d))),
            _ => {
                for n in 1..=n_max {
                    grid.extend((0..=d_max).map(|d| (id, n, d)));
                }
            }
        }
    }
    grid
}

/// Every identity over the grid; reports come back in grid order.
pub fn verify_all(n_max: usize, d_max: usize, ring: &RingDescriptor) -> Result<Vec<CheckReport>> {
    if n_max > VERIFY_ALL_MAX_N {
        return Err(Error::OracleSizeLimit(format!(
            "n_max = {n_max} exceeds {VERIFY_ALL_MAX_N}"
        )));
    }
    verify_grid(n_max, d_max)
        .into_par_iter()
        .map(|(id, n, d)| verify_identity(id, n, d, ring, false))
        .collect()
}
