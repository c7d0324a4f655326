use super::output_name;
use crate::abp::{AbpGraph, AffineLabel, Flavor};
use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, Value};

/// Program with outputs `cpc_{n,0..d_max}` built from
/// `-d cpc_{n,d} = sum_i (-1)^i cpc_{n,d-i} tr(X^i)`, which divides by `d`.
pub fn build_charzero_abp(n: usize, d_max: usize, ring: &RingDescriptor) -> Result<AbpGraph> {
    if !ring.contains_rationals() {
        return Err(Error::RequiresCharacteristicZero);
    }
    let mut g = AbpGraph::new(Flavor::Abp, d_max, ring, n);
    let v: Vec<usize> = std::iter::once(g.source())
        .chain((1..=d_max).map(|d| g.add_vertex(d)))
        .collect();
    for d in 1..=d_max {
        let inv_d = ring.invert(&ring.from_i64(d as i64))?;
        for i in 1..=d {
            let c = ring.mul(&ring.sign_power(i + 1), &inv_d);
            trace_power(&mut g, v[d - i], v[d], d - i, n, i, &c);
        }
    }
    for (d, &id) in v.iter().enumerate() {
        g.set_output(output_name(n, d), id);
    }
    Ok(g)
}

/// Wires `c * tr(X^i)` as closed walks of length `i`; intermediate layers hold
/// one vertex per (start, current) pair.
fn trace_power(
    g: &mut AbpGraph,
    from: usize,
    to: usize,
    base: usize,
    n: usize,
    i: usize,
    c: &Value,
) {
    let ring = g.ring().clone();
    if i == 1 {
        let mut label = AffineLabel::zero(&ring);
        for k in 1..=n {
            label = label.add(&ring, &AffineLabel::scaled_var(&ring, k, k, c.clone()));
        }
        g.add_edge(from, to, label);
        return;
    }
    let at = |k: usize, m: usize| (k - 1) * n + (m - 1);
    let walk: Vec<Vec<usize>> = (1..i)
        .map(|step| (0..n * n).map(|_| g.add_vertex(base + step)).collect())
        .collect();
    for k in 1..=n {
        for m in 1..=n {
            g.add_edge(
                from,
                walk[0][at(k, m)],
                AffineLabel::scaled_var(&ring, k, m, c.clone()),
            );
            g.add_edge(walk[i - 2][at(k, m)], to, AffineLabel::var(&ring, m, k));
            for step in 0..i - 2 {
                for l in 1..=n {
                    g.add_edge(
                        walk[step][at(k, m)],
                        walk[step + 1][at(k, l)],
                        AffineLabel::var(&ring, m, l),
                    );
                }
            }
        }
    }
}
