#![allow(dead_code)]

use abp_core::abp::{AbpGraph, AffineLabel, Flavor};
use abp_core::{ConstMatrix, PolyMatrix, Polynomial, RingDescriptor, RingKind, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

pub fn ring_family() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::integers(),
        RingDescriptor::modular(4).unwrap(),
        RingDescriptor::modular(7).unwrap(),
        RingDescriptor::rationals(),
    ]
}

pub fn random_value(ring: &RingDescriptor, rng: &mut TestRng) -> Value {
    match ring.kind() {
        RingKind::Rationals => {
            let (a, b) = (rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3));
            ring.parse_value(&format!("{a}/{b}")).unwrap()
        }
        _ => ring.from_i64(rng.gen_range(-5i64..=5)),
    }
}

pub fn random_nonzero(ring: &RingDescriptor, rng: &mut TestRng) -> Value {
    loop {
        let v = random_value(ring, rng);
        if !ring.is_zero(&v) {
            return v;
        }
    }
}

pub fn random_matrix(ring: &RingDescriptor, n: usize, rng: &mut TestRng) -> ConstMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_value(ring, rng)).collect())
        .collect();
    ConstMatrix::new(ring, rows).unwrap()
}

/// One or two variables with nonzero coefficients.
pub fn random_linear(ring: &RingDescriptor, n: usize, rng: &mut TestRng) -> AffineLabel {
    let mut label = AffineLabel::zero(ring);
    for _ in 0..rng.gen_range(1..=2) {
        let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        label = label.add(
            ring,
            &AffineLabel::scaled_var(ring, i, j, random_nonzero(ring, rng)),
        );
    }
    label
}

pub fn random_affine(ring: &RingDescriptor, n: usize, rng: &mut TestRng) -> AffineLabel {
    let label = random_linear(ring, n, rng);
    if rng.gen_bool(0.6) {
        label.add(
            ring,
            &AffineLabel::constant(ring, random_nonzero(ring, rng)),
        )
    } else {
        label
    }
}

/// Layered program with constant edges inside layers (including an extra
/// layer-0 vertex), a sink `f` in layer `d` and a few named intermediate
/// outputs.
pub fn random_abp(
    ring: &RingDescriptor,
    n: usize,
    d: usize,
    max_width: usize,
    rng: &mut TestRng,
) -> AbpGraph {
    let mut g = AbpGraph::new(Flavor::Abp, d, ring, n);
    let mut layers: Vec<Vec<usize>> = vec![vec![g.source()]];
    if rng.gen_bool(0.5) {
        let extra = g.add_vertex(0);
        layers[0].push(extra);
    }
    for l in 1..d {
        let w = rng.gen_range(1..=max_width);
        layers.push((0..w).map(|_| g.add_vertex(l)).collect());
    }
    let t = g.add_vertex(d);
    layers.push(vec![t]);
    for l in 0..d {
        for &u in &layers[l] {
            for &v in &layers[l + 1] {
                if rng.gen_bool(0.7) {
                    g.add_edge(u, v, random_linear(ring, n, rng));
                }
            }
        }
    }
    // constant edges only go to later vertices of the same layer
    for layer in &layers {
        for (a, &u) in layer.iter().enumerate() {
            for &v in &layer[a + 1..] {
                if rng.gen_bool(0.4) {
                    g.add_edge(u, v, AffineLabel::constant(ring, random_nonzero(ring, rng)));
                }
            }
        }
    }
    g.set_output("f", t);
    if d >= 2 {
        let v = *layers[1].choose(rng).unwrap();
        g.set_output(format!("v{v}"), v);
    }
    g
}

/// Pure program with the given intermediate layer sizes.
pub fn random_pabp(
    ring: &RingDescriptor,
    n: usize,
    widths: &[usize],
    rng: &mut TestRng,
) -> AbpGraph {
    let d = widths.len() + 1;
    let mut g = AbpGraph::new(Flavor::Pabp, d, ring, n);
    let mut prev = vec![g.source()];
    for (l, &w) in widths.iter().enumerate() {
        let cur: Vec<usize> = (0..w).map(|_| g.add_vertex(l + 1)).collect();
        for &u in &prev {
            for &v in &cur {
                if rng.gen_bool(0.8) {
                    g.add_edge(u, v, random_linear(ring, n, rng));
                }
            }
        }
        prev = cur;
    }
    let t = g.add_vertex(d);
    for &u in &prev {
        g.add_edge(u, t, random_linear(ring, n, rng));
    }
    g.set_output("f", t);
    g
}

/// Affine program on `k` vertices ranked `0..k`, source first and sink last.
pub fn random_aabp(ring: &RingDescriptor, n: usize, k: usize, rng: &mut TestRng) -> AbpGraph {
    let mut g = AbpGraph::new(Flavor::Aabp, k - 1, ring, n);
    let vs: Vec<usize> = std::iter::once(g.source())
        .chain((1..k).map(|r| g.add_vertex(r)))
        .collect();
    for a in 0..k {
        for b in a + 1..k {
            if b == a + 1 || rng.gen_bool(0.3) {
                g.add_edge(vs[a], vs[b], random_affine(ring, n, rng));
            }
        }
    }
    g.set_output("f", vs[k - 1]);
    g
}

/// Random invertible constant matrix: a product of elementary operations.
pub fn random_invertible(
    ring: &RingDescriptor,
    n: usize,
    s: usize,
    rng: &mut TestRng,
) -> PolyMatrix {
    let mut m = PolyMatrix::identity(ring, n, s);
    for _ in 0..3 * s {
        let (i, j) = (rng.gen_range(1..=s), rng.gen_range(1..=s));
        let mut e = PolyMatrix::identity(ring, n, s);
        if i == j {
            e.set(
                i,
                i,
                Polynomial::constant(ring, n, random_nonzero(ring, rng)),
            );
        } else {
            e.set(i, j, Polynomial::constant(ring, n, random_value(ring, rng)));
        }
        m = m.mul(&e).unwrap();
    }
    m
}
