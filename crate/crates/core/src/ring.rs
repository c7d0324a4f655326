//! Commutative rings: integers, residues modulo `m`, rationals, and one level
//! of multivariate polynomials over any of those.
//!
//! A [`RingDescriptor`] carries the arithmetic; raw [`Value`]s are only
//! meaningful together with the descriptor that produced them. The checked
//! public surface is [`RingElement`], which pairs the two.

use std::fmt;
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sparse::{self, Monomial, Terms};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Modular(BigInt),
    Rationals,
    Polynomial {
        base: Box<RingDescriptor>,
        num_vars: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDescriptor {
    kind: RingKind,
    is_field: bool,
    contains_rationals: bool,
}

/// Canonical representation of a ring element.
///
/// Integers and residues use `Int` (residues always in `[0, m)`), rationals
/// use a reduced `Rat` with positive denominator, and the polynomial kind
/// uses a sparse term map over flattened variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Rat(BigRational),
    Poly(Terms<u32>),
}

impl RingDescriptor {
    pub fn integers() -> Self {
        Self::from_kind(RingKind::Integers)
    }

    pub fn rationals() -> Self {
        Self::from_kind(RingKind::Rationals)
    }

    pub fn modular(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidRing(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        Ok(Self::from_kind(RingKind::Modular(m)))
    }

    pub fn polynomial(base: RingDescriptor, num_vars: usize) -> Result<Self> {
        if matches!(base.kind, RingKind::Polynomial { .. }) {
            return Err(Error::InvalidRing(
                "polynomial rings over polynomial rings are not supported; flatten the variables"
                    .into(),
            ));
        }
        Ok(Self::from_kind(RingKind::Polynomial {
            base: Box::new(base),
            num_vars,
        }))
    }

    fn from_kind(kind: RingKind) -> Self {
        let is_field = Self::field_flag(&kind);
        let contains_rationals = matches!(kind, RingKind::Rationals);
        RingDescriptor {
            kind,
            is_field,
            contains_rationals,
        }
    }

    fn field_flag(kind: &RingKind) -> bool {
        match kind {
            RingKind::Rationals => true,
            RingKind::Modular(m) => is_probable_prime(m),
            _ => false,
        }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn is_field(&self) -> bool {
        self.is_field
    }

    pub fn contains_rationals(&self) -> bool {
        self.contains_rationals
    }

    /// Recomputes the capability flags from the kind and compares them with
    /// the stored ones.
    pub fn flags_consistent(&self) -> bool {
        self.is_field == Self::field_flag(&self.kind)
            && self.contains_rationals == matches!(self.kind, RingKind::Rationals)
    }

    pub fn zero(&self) -> Value {
        match &self.kind {
            RingKind::Integers | RingKind::Modular(_) => Value::Int(BigInt::zero()),
            RingKind::Rationals => Value::Rat(BigRational::zero()),
            RingKind::Polynomial { .. } => Value::Poly(Terms::new()),
        }
    }

    pub fn one(&self) -> Value {
        self.from_int(&BigInt::one())
    }

    /// The image of `k` under the unique ring map from the integers.
    pub fn from_int(&self, k: &BigInt) -> Value {
        match &self.kind {
            RingKind::Integers => Value::Int(k.clone()),
            RingKind::Modular(m) => Value::Int(k.mod_floor(m)),
            RingKind::Rationals => Value::Rat(BigRational::from_integer(k.clone())),
            RingKind::Polynomial { base, .. } => {
                Value::Poly(sparse::constant(base, base.from_int(k)))
            }
        }
    }

    pub fn from_i64(&self, k: i64) -> Value {
        self.from_int(&BigInt::from(k))
    }

    /// `(-1)^e`, computed by repeated multiplication of the embedded `-1`.
    pub fn sign_power(&self, e: usize) -> Value {
        let minus_one = self.from_i64(-1);
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, &minus_one);
        }
        acc
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Int(x) => x.is_zero(),
            Value::Rat(x) => x.is_zero(),
            Value::Poly(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self, v: &Value) -> bool {
        *v == self.one()
    }

    /// Whether `v` has the representation this ring produces.
    pub fn is_canonical(&self, v: &Value) -> bool {
        match (&self.kind, v) {
            (RingKind::Integers, Value::Int(_)) => true,
            (RingKind::Modular(m), Value::Int(x)) => !x.is_negative() && x < m,
            (RingKind::Rationals, Value::Rat(q)) => {
                q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
            }
            (RingKind::Polynomial { base, num_vars }, Value::Poly(t)) => t.iter().all(|(m, c)| {
                !base.is_zero(c)
                    && base.is_canonical(c)
                    && m.pairs()
                        .iter()
                        .all(|&(v, e)| (v as usize) < *num_vars && e > 0)
            }),
            _ => false,
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&self.kind, a, b) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (RingKind::Modular(m), Value::Int(x), Value::Int(y)) => {
                Value::Int((x + y).mod_floor(m))
            }
            (RingKind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (RingKind::Polynomial { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(sparse::add(base, x, y))
            }
            _ => panic!("value does not belong to ring {self}"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (&self.kind, a) {
            (RingKind::Integers, Value::Int(x)) => Value::Int(-x),
            (RingKind::Modular(m), Value::Int(x)) => Value::Int((-x).mod_floor(m)),
            (RingKind::Rationals, Value::Rat(x)) => Value::Rat(-x),
            (RingKind::Polynomial { base, .. }, Value::Poly(x)) => {
                Value::Poly(sparse::neg(base, x))
            }
            _ => panic!("value does not belong to ring {self}"),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&self.kind, a, b) {
            (RingKind::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            (RingKind::Modular(m), Value::Int(x), Value::Int(y)) => {
                Value::Int((x * y).mod_floor(m))
            }
            (RingKind::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (RingKind::Polynomial { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(sparse::mul(base, x, y))
            }
            _ => panic!("value does not belong to ring {self}"),
        }
    }

    pub fn pow(&self, a: &Value, e: u32) -> Value {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Multiplicative inverse, available in fields and for residues coprime
    /// to the modulus.
    pub fn invert(&self, a: &Value) -> Result<Value> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (&self.kind, a) {
            (RingKind::Rationals, Value::Rat(x)) => Ok(Value::Rat(x.recip())),
            (RingKind::Modular(m), Value::Int(x)) => {
                let g = x.extended_gcd(m);
                if !g.gcd.is_one() {
                    return Err(Error::NotAUnit);
                }
                Ok(Value::Int(g.x.mod_floor(m)))
            }
            (RingKind::Integers, Value::Int(x)) if x.abs().is_one() => Ok(Value::Int(x.clone())),
            (RingKind::Polynomial { base, .. }, Value::Poly(t)) => {
                // Only nonzero constants over a field-like base are units here.
                match t.iter().next() {
                    Some((m, c)) if t.len() == 1 && m.is_one() => {
                        Ok(Value::Poly(sparse::constant(base, base.invert(c)?)))
                    }
                    _ => Err(Error::NotAUnit),
                }
            }
            _ => Err(Error::NotAUnit),
        }
    }

    pub fn format_value(&self, v: &Value) -> String {
        match v {
            Value::Int(x) => x.to_string(),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Value::Poly(t) => {
                let base = match &self.kind {
                    RingKind::Polynomial { base, .. } => base,
                    _ => panic!("value does not belong to ring {self}"),
                };
                if t.is_empty() {
                    return "0".into();
                }
                let parts: Vec<String> = t
                    .iter()
                    .rev()
                    .map(|(m, c)| {
                        let mut s = base.format_value(c);
                        for &(var, e) in m.pairs() {
                            s.push_str(&format!("*y[{var}]^{e}"));
                        }
                        s
                    })
                    .collect();
                parts.join(" + ")
            }
        }
    }

    /// Parses a decimal integer, or `num/den` for rationals.
    pub fn parse_value(&self, s: &str) -> Result<Value> {
        let s = s.trim();
        let parse_int = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
        };
        match &self.kind {
            RingKind::Integers | RingKind::Modular(_) => Ok(self.from_int(&parse_int(s)?)),
            RingKind::Rationals => match s.split_once('/') {
                None => Ok(self.from_int(&parse_int(s)?)),
                Some((n, d)) => {
                    let (n, d) = (parse_int(n)?, parse_int(d)?);
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    Ok(Value::Rat(BigRational::new(n, d)))
                }
            },
            RingKind::Polynomial { .. } => Err(Error::Parse(
                "polynomial ring elements cannot be parsed".into(),
            )),
        }
    }

    pub fn var_value(&self, var: u32) -> Result<Value> {
        match &self.kind {
            RingKind::Polynomial { base, num_vars } if (var as usize) < *num_vars => {
                let mut t = Terms::new();
                sparse::add_term(base, &mut t, Monomial::var(var), base.one());
                Ok(Value::Poly(t))
            }
            _ => Err(Error::ParameterOutOfRange(format!(
                "no variable y[{var}] in ring {self}"
            ))),
        }
    }

    pub fn element(&self, v: Value) -> RingElement {
        debug_assert!(self.is_canonical(&v));
        RingElement {
            ring: self.clone(),
            value: v,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Integers => write!(f, "int"),
            RingKind::Modular(m) => write!(f, "mod:{m}"),
            RingKind::Rationals => write!(f, "rat"),
            RingKind::Polynomial { base, num_vars } => write!(f, "poly({base},{num_vars})"),
        }
    }
}

/// Parses the CLI ring specifications `int`, `mod:<m>` and `rat`.
impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "int" => Ok(Self::integers()),
            "rat" => Ok(Self::rationals()),
            other => match other.strip_prefix("mod:") {
                Some(m) => {
                    let m = BigInt::from_str(m)
                        .map_err(|_| Error::InvalidRing(format!("invalid modulus `{m}`")))?;
                    Self::modular(m)
                }
                None => Err(Error::InvalidRing(format!(
                    "unknown ring `{other}` (expected int, mod:<m>, rat)"
                ))),
            },
        }
    }
}

/// A value together with its ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: RingDescriptor,
    value: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl RingElement {
    pub fn int_embed(ring: &RingDescriptor, k: impl Into<BigInt>) -> Self {
        ring.element(ring.from_int(&k.into()))
    }

    pub fn parse(ring: &RingDescriptor, s: &str) -> Result<Self> {
        Ok(ring.element(ring.parse_value(s)?))
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.value)
    }

    pub fn arith(&self, other: &RingElement, op: ArithOp) -> Result<RingElement> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let r = &self.ring;
        let v = match op {
            ArithOp::Add => r.add(&self.value, &other.value),
            ArithOp::Sub => r.sub(&self.value, &other.value),
            ArithOp::Mul => r.mul(&self.value, &other.value),
        };
        Ok(r.element(v))
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn neg(&self) -> RingElement {
        self.ring.element(self.ring.neg(&self.value))
    }

    pub fn invert(&self) -> Result<RingElement> {
        Ok(self.ring.element(self.ring.invert(&self.value)?))
    }

    /// Small integer view, if the value is an integer or residue that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.value {
            Value::Int(x) => x.to_i64(),
            Value::Rat(q) if q.denom().is_one() => q.numer().to_i64(),
            _ => None,
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format_value(&self.value))
    }
}

fn is_probable_prime(m: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *m < two {
        return false;
    }
    const SMALL: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        let p = BigInt::from(p);
        if *m == p {
            return true;
        }
        if (m % &p).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
    let one = BigInt::one();
    let m1 = m - &one;
    let mut d = m1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = BigInt::from(a).modpow(&d, m);
        if x == one || x == m1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, m);
            if x == m1 {
                continue 'witness;
            }
        }
        return false;
    }
    debug_assert!(m.sign() == Sign::Plus);
    true
}
