use std::collections::BTreeMap;

use super::output_name;
use crate::abp::{AbpGraph, AffineLabel, Flavor};
use crate::error::Result;
use crate::ring::RingDescriptor;

/// Program for all `cpc_{i,j}`, `j <= i <= n`, `j <= d_max`, from the
/// recursion `cpc_{i,j} = cpc_{i-1,j} + sum_t (-1)^(t+1) cpc_{i,j-t} [X_i^t]_{i,i}`.
/// No division is used, so any ring works.
pub fn build_bivariate_abp(n: usize, d_max: usize, ring: &RingDescriptor) -> Result<AbpGraph> {
    let dd = d_max.min(n);
    let mut g = AbpGraph::new(Flavor::Abp, d_max, ring, n);
    let s = g.source();
    let mut v: BTreeMap<(usize, usize), usize> = (0..=n).map(|i| ((i, 0), s)).collect();
    // column-major: every (i, j-t) and (i-1, j) exists before (i, j) is wired
    for j in 1..=dd {
        for i in j..=n {
            v.insert((i, j), g.add_vertex(j));
        }
    }
    for j in 1..=dd {
        for i in j..=n {
            if i > j {
                g.add_edge(v[&(i - 1, j)], v[&(i, j)], AffineLabel::one(ring));
            }
            for t in 1..=j {
                let sign = ring.sign_power(t + 1);
                power_entry(&mut g, v[&(i, j - t)], v[&(i, j)], j - t, i, t, &sign);
            }
        }
    }
    for (&(i, j), &id) in &v {
        g.set_output(output_name(i, j), id);
    }
    for j in n + 1..=d_max {
        let z = g.add_vertex(j);
        g.set_output(output_name(n, j), z);
    }
    Ok(g)
}

/// Wires `sign * [X_i^t]_{i,i}` from `from` (layer `base`) to `to` (layer
/// `base + t`) through `t-1` layers of `i` vertices each.
fn power_entry(
    g: &mut AbpGraph,
    from: usize,
    to: usize,
    base: usize,
    i: usize,
    t: usize,
    sign: &crate::ring::Value,
) {
    let ring = g.ring().clone();
    if t == 1 {
        g.add_edge(from, to, AffineLabel::scaled_var(&ring, i, i, sign.clone()));
        return;
    }
    let walk: Vec<Vec<usize>> = (1..t)
        .map(|step| (1..=i).map(|_| g.add_vertex(base + step)).collect())
        .collect();
    for k in 1..=i {
        g.add_edge(
            from,
            walk[0][k - 1],
            AffineLabel::scaled_var(&ring, i, k, sign.clone()),
        );
        g.add_edge(walk[t - 2][k - 1], to, AffineLabel::var(&ring, k, i));
    }
    for step in 0..t - 2 {
        for k in 1..=i {
            for l in 1..=i {
                g.add_edge(
                    walk[step][k - 1],
                    walk[step + 1][l - 1],
                    AffineLabel::var(&ring, k, l),
                );
            }
        }
    }
}
