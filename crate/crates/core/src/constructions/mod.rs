//! Builders for programs computing the characteristic polynomial
//! coefficients, and the recovery of a layered program from a
//! determinantal representation.

mod bivariate;
mod charzero;
mod determinantal;
mod gradient;

use std::fmt;

use serde::Serialize;

use crate::abp::AbpGraph;

pub use bivariate::build_bivariate_abp;
pub use charzero::build_charzero_abp;
pub use determinantal::{
    constant_normal_form, schur_data, width_from_determinantal, NormalForm, SchurData,
};
pub use gradient::{
    build_gradient_abp, layer_count_formula, r_vector_total_formula, transition_matrix,
    width_formula, RVectorPlan,
};

/// Output names are `cpc_<n>_<d>`.
pub fn output_name(n: usize, d: usize) -> String {
    format!("cpc_{n}_{d}")
}

/// Vertex counts of a layered program. Sinks (named outputs without
/// out-edges) and the last layer are reported separately from the
/// intermediate counts; for the gradient construction the intermediate
/// vertices are exactly the r-vector entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionStats {
    pub n: usize,
    pub d: usize,
    pub width: usize,
    pub total_vertices: usize,
    pub per_layer_counts: Vec<usize>,
    pub intermediate_total: usize,
    pub extra_output_vertices: usize,
    pub graph_width: usize,
    pub edge_count: usize,
    pub outputs: Vec<(String, usize)>,
}

impl ConstructionStats {
    pub fn of(g: &AbpGraph) -> Self {
        let sinks = g.sinks();
        let d = g.d();
        let mut per_layer = vec![0usize; d.saturating_sub(1)];
        let mut all = vec![0usize; d.saturating_sub(1)];
        let mut extra = 0;
        for v in 0..g.num_vertices() {
            let l = g.layer(v);
            if l >= 1 && l < d {
                all[l - 1] += 1;
                if sinks.contains(&v) {
                    extra += 1;
                } else {
                    per_layer[l - 1] += 1;
                }
            } else if l == d && v != g.source() && g.outputs().values().any(|&o| o == v) {
                extra += 1;
            }
        }
        let mut outputs: Vec<(String, usize)> = g
            .outputs()
            .iter()
            .map(|(k, &v)| (k.clone(), g.layer(v)))
            .collect();
        outputs.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        ConstructionStats {
            n: g.ambient_n(),
            d,
            width: per_layer.iter().copied().max().unwrap_or(0),
            total_vertices: g.num_vertices(),
            intermediate_total: per_layer.iter().sum(),
            per_layer_counts: per_layer,
            extra_output_vertices: extra,
            graph_width: all.iter().copied().max().unwrap_or(0),
            edge_count: g.num_edges(),
            outputs,
        }
    }

    pub fn comparison(&self) -> PublishedComparison {
        PublishedComparison::new(self.n, self.intermediate_total, self.width)
    }
}

/// Measured counts against the earlier bounds of `n^3` vertices and width
/// `n^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PublishedComparison {
    pub n: usize,
    pub vertices: usize,
    pub width: usize,
    pub published_vertices: usize,
    pub published_width: usize,
    pub vertex_ratio: f64,
    pub width_ratio: f64,
}

impl PublishedComparison {
    pub fn new(n: usize, vertices: usize, width: usize) -> Self {
        let pv = n.pow(3);
        let pw = n.pow(2);
        let ratio = |a: usize, b: usize| {
            if b == 0 {
                f64::INFINITY
            } else {
                a as f64 / b as f64
            }
        };
        PublishedComparison {
            n,
            vertices,
            width,
            published_vertices: pv,
            published_width: pw,
            vertex_ratio: ratio(pv, vertices),
            width_ratio: ratio(pw, width),
        }
    }

    /// Closed-form counts of the gradient construction for `d = n`.
    pub fn from_formulas(n: usize) -> Self {
        Self::new(n, r_vector_total_formula(n, n), width_formula(n))
    }
}

impl fmt::Display for PublishedComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}: vertices {} vs n^3={} (ratio {:.4}), width {} vs n^2={} (ratio {:.4})",
            self.n,
            self.vertices,
            self.published_vertices,
            self.vertex_ratio,
            self.width,
            self.published_width,
            self.width_ratio
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_approach_three_and_two() {
        let c = PublishedComparison::from_formulas(30);
        assert!((c.vertex_ratio - 2700.0 / 899.0).abs() < 1e-12);
        assert!((c.width_ratio - 1800.0 / 928.0).abs() < 1e-12);
        // the width ratio dips until n = 4 and then rises towards 2
        let mut prev = PublishedComparison::from_formulas(4);
        for n in 5..=60 {
            let c = PublishedComparison::from_formulas(n);
            assert!(c.vertex_ratio > 3.0 && c.vertex_ratio < prev.vertex_ratio);
            assert!(c.width_ratio < 2.0 && c.width_ratio > prev.width_ratio);
            prev = c;
        }
        assert!(c
            .to_string()
            .starts_with("n=30: vertices 8990 vs n^3=27000"));
    }
}
