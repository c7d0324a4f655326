use std::collections::BTreeMap;

use super::{output_name, ConstructionStats};
use crate::abp::{AbpGraph, AffineLabel, Flavor};
use crate::error::{Error, Result};
use crate::polynomial::{PolyMatrix, Polynomial};
use crate::ring::RingDescriptor;

/// Where the entries of the row vectors `r_{i,j}` (last row of the
/// transposed gradient of `cpc_{i,j+1}`) live: layer `j` holds `r_{i,j}` for
/// `j+1 <= i <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RVectorPlan {
    n: usize,
    d: usize,
    layers: Vec<Vec<(usize, usize)>>,
}

impl RVectorPlan {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n {
            return Err(Error::ParameterOutOfRange(format!(
                "need 1 <= d <= n, got n = {n}, d = {d}"
            )));
        }
        let mut layers = vec![Vec::new()];
        for j in 1..d {
            layers.push(
                (j + 1..=n)
                    .flat_map(|i| (1..=i).map(move |a| (i, a)))
                    .collect(),
            );
        }
        Ok(RVectorPlan { n, d, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Entries `(i, a)` meaning `[r_{i,j}]_a`, for `1 <= j <= d-1`.
    pub fn layer_entries(&self, j: usize) -> &[(usize, usize)] {
        &self.layers[j]
    }

    pub fn layer_count(&self, j: usize) -> usize {
        self.layers[j].len()
    }

    pub fn total(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// The transition matrices `M_{n,2}, ..., M_{n,d-1}`.
    pub fn transitions(&self, ring: &RingDescriptor) -> Result<Vec<PolyMatrix>> {
        (2..self.d)
            .map(|j| transition_matrix(self.n, j, ring))
            .collect()
    }
}

/// `(n-j)(n+j+1)/2`, the number of r-vector entries in layer `j`.
pub fn layer_count_formula(n: usize, j: usize) -> usize {
    (n - j) * (n + j + 1) / 2
}

pub fn width_formula(n: usize) -> usize {
    n * (n + 1) / 2 - 1
}

/// `(d-1) binom(n+1,2) - binom(d+1,3)`.
pub fn r_vector_total_formula(n: usize, d: usize) -> usize {
    (d - 1) * (n * (n + 1) / 2) - (d + 1) * d * (d.saturating_sub(1)) / 6
}

/// The block matrix taking `(r_{d,d-1}, ..., r_{n,d-1})` to
/// `(r_{d+1,d}, ..., r_{n,d})`. Block `(i,k)` is `(-L_k | 0)` for `i = k` and
/// `(0 | C_i)` for `i < k`, where `X_k = (L_k | C_k)`.
pub fn transition_matrix(n: usize, d: usize, ring: &RingDescriptor) -> Result<PolyMatrix> {
    if d < 2 || d >= n {
        return Err(Error::ParameterOutOfRange(format!(
            "need 2 <= d < n, got n = {n}, d = {d}"
        )));
    }
    let row_off = |i: usize| (d..i).sum::<usize>();
    let col_off = |k: usize| (d + 1..k).sum::<usize>();
    let rows = row_off(n + 1);
    let cols = col_off(n + 1);
    let mut m = PolyMatrix::zeros(ring, n, rows, cols);
    for k in d + 1..=n {
        for b in 1..=k {
            for a in 1..k {
                m.set(
                    row_off(k) + b,
                    col_off(k) + a,
                    -&Polynomial::var(ring, n, b, a),
                );
            }
        }
        for i in d..k {
            for b in 1..=i {
                m.set(
                    row_off(i) + b,
                    col_off(k) + k,
                    Polynomial::var(ring, n, b, i),
                );
            }
        }
    }
    Ok(m)
}

/// The program whose internal vertices are the r-vector entries; `cpc_{i,j}`
/// for `i < n` is read off as `[r_{i+1,j}]_{i+1}`, each `cpc_{n,j}` and each
/// `cpc_{i,d}` gets one extra vertex.
pub fn build_gradient_abp(
    n: usize,
    d_max: usize,
    ring: &RingDescriptor,
) -> Result<(AbpGraph, ConstructionStats)> {
    let plan = RVectorPlan::new(n, d_max)?;
    let d = d_max;
    let mut g = AbpGraph::new(Flavor::Abp, d, ring, n);
    let s = g.source();
    let mut r: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for j in 1..d {
        for &(i, a) in plan.layer_entries(j) {
            r.insert((j, i, a), g.add_vertex(j));
        }
    }
    let var = |i, j| AffineLabel::var(ring, i, j);
    let neg = |i, j| AffineLabel::neg_var(ring, i, j);
    let one = AffineLabel::one(ring);

    if d >= 2 {
        for i in 2..=n {
            for a in 1..i {
                g.add_edge(s, r[&(1, i, a)], neg(i, a));
            }
            g.add_edge(s, r[&(1, i, i)], var(i - 1, i - 1));
            if i >= 3 {
                g.add_edge(r[&(1, i - 1, i - 1)], r[&(1, i, i)], one.clone());
            }
        }
    }
    for j in 2..d {
        for i in j + 1..=n {
            for a in 1..i {
                for b in 1..=i {
                    g.add_edge(r[&(j - 1, i, b)], r[&(j, i, a)], neg(b, a));
                }
            }
            for k in j..i {
                for b in 1..=k {
                    g.add_edge(r[&(j - 1, k, b)], r[&(j, i, i)], var(b, k));
                }
            }
        }
    }

    for m in 0..=n {
        g.set_output(output_name(m, 0), s);
    }
    for j in 1..d {
        for m in j..n {
            g.set_output(output_name(m, j), r[&(j, m + 1, m + 1)]);
        }
        let e = g.add_vertex(j);
        g.add_edge(r[&(j, n, n)], e, one.clone());
        if j == 1 {
            g.add_edge(s, e, var(n, n));
        } else {
            for b in 1..=n {
                g.add_edge(r[&(j - 1, n, b)], e, var(b, n));
            }
        }
        g.set_output(output_name(n, j), e);
    }
    let mut prev = None;
    for i in d..=n {
        let c = g.add_vertex(d);
        if let Some(p) = prev {
            g.add_edge(p, c, one.clone());
        }
        if d == 1 {
            g.add_edge(s, c, var(i, i));
        } else {
            for b in 1..=i {
                g.add_edge(r[&(d - 1, i, b)], c, var(b, i));
            }
        }
        g.set_output(output_name(i, d), c);
        prev = Some(c);
    }
    let stats = ConstructionStats::of(&g);
    Ok((g, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::cpc_minor_sum;

    #[test]
    fn counts_for_small_cases() {
        let z = RingDescriptor::integers();
        let (_, st) = build_gradient_abp(3, 3, &z).unwrap();
        assert_eq!(st.per_layer_counts, vec![5, 3]);
        assert_eq!((st.width, st.intermediate_total), (5, 8));
        let (_, st) = build_gradient_abp(5, 5, &z).unwrap();
        assert_eq!((st.width, st.intermediate_total), (14, 40));
        assert_eq!(r_vector_total_formula(5, 5), 40);
        assert_eq!(width_formula(5), 14);
        assert!(build_gradient_abp(2, 3, &z).is_err());
    }

    #[test]
    fn two_by_two_determinant() {
        let z = RingDescriptor::integers();
        let (g, _) = build_gradient_abp(2, 2, &z).unwrap();
        assert!(g.validate().is_empty(), "{:?}", g.validate());
        assert_eq!(g.vertices_in_layer(1), 3);
        assert_eq!(
            g.expand_symbolic("cpc_2_2").unwrap(),
            cpc_minor_sum(2, 2, &z).unwrap()
        );
        assert_eq!(
            g.expand_symbolic("cpc_1_1").unwrap(),
            Polynomial::var(&z, 2, 1, 1)
        );
    }

    #[test]
    fn transition_shapes() {
        let z = RingDescriptor::integers();
        let m = transition_matrix(4, 2, &z).unwrap();
        assert_eq!((m.rows(), m.cols()), (2 + 3 + 4, 3 + 4));
        assert!(transition_matrix(3, 3, &z).is_err());
        assert!(transition_matrix(3, 1, &z).is_err());
        let plan = RVectorPlan::new(4, 4).unwrap();
        assert_eq!(plan.transitions(&z).unwrap().len(), 2);
        assert_eq!(
            (1..4).map(|j| plan.layer_count(j)).collect::<Vec<_>>(),
            vec![9, 7, 4]
        );
    }
}
