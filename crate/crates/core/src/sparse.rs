//! Sparse term maps shared by the matrix-variable polynomials and by the
//! polynomial ring kind.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::ring::{RingDescriptor, Value};

/// A monomial stored as `(variable, exponent)` pairs sorted by variable,
/// with every exponent positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Ord + Copy> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs, merging repeated variables and
    /// dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (V, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: V) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one. Returns the previous exponent
    /// together with the reduced monomial, or `None` if `v` does not occur.
    pub fn lower(&self, v: V) -> Option<(u32, Self)> {
        let k = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.0[k].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(k);
        } else {
            out[k].1 = e - 1;
        }
        Some((e, Monomial(out)))
    }
}

/// Graded lexicographic order: total degree first, then the exponent
/// vectors compared lexicographically with smaller variables ranking higher.
impl<V: Ord + Copy> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut a, mut b) = (self.0.iter(), other.0.iter());
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => {
                        if va != vb {
                            return if va < vb {
                                Ordering::Greater
                            } else {
                                Ordering::Less
                            };
                        }
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                    }
                }
            }
        })
    }
}

impl<V: Ord + Copy> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Terms<V> = BTreeMap<Monomial<V>, Value>;

pub fn add_term<V: Ord + Copy>(
    ring: &RingDescriptor,
    terms: &mut Terms<V>,
    m: Monomial<V>,
    c: Value,
) {
    if ring.is_zero(&c) {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = ring.add(e.get(), &c);
            if ring.is_zero(&s) {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn add<V: Ord + Copy>(ring: &RingDescriptor, a: &Terms<V>, b: &Terms<V>) -> Terms<V> {
    let mut out = a.clone();
    for (m, c) in b {
        add_term(ring, &mut out, m.clone(), c.clone());
    }
    out
}

pub fn neg<V: Ord + Copy>(ring: &RingDescriptor, a: &Terms<V>) -> Terms<V> {
    a.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect()
}

pub fn sub<V: Ord + Copy>(ring: &RingDescriptor, a: &Terms<V>, b: &Terms<V>) -> Terms<V> {
    let mut out = a.clone();
    for (m, c) in b {
        add_term(ring, &mut out, m.clone(), ring.neg(c));
    }
    out
}

pub fn mul<V: Ord + Copy>(ring: &RingDescriptor, a: &Terms<V>, b: &Terms<V>) -> Terms<V> {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(ring, &mut out, ma.mul(mb), ring.mul(ca, cb));
        }
    }
    out
}

pub fn scale<V: Ord + Copy>(ring: &RingDescriptor, a: &Terms<V>, c: &Value) -> Terms<V> {
    let mut out = Terms::new();
    for (m, v) in a {
        add_term(ring, &mut out, m.clone(), ring.mul(v, c));
    }
    out
}

pub fn constant<V: Ord + Copy>(ring: &RingDescriptor, c: Value) -> Terms<V> {
    let mut out = Terms::new();
    add_term(ring, &mut out, Monomial::one(), c);
    out
}
