use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{AbpGraph, AffineLabel, Flavor};
use crate::error::{Error, Result};
use crate::polynomial::{ConstMatrix, PolyMatrix, Polynomial};
use crate::ring::{RingDescriptor, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Sum,
    Product,
}

impl fmt::Display for CombineOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CombineOp::Sum => "sum",
            CombineOp::Product => "product",
        })
    }
}

impl FromStr for CombineOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(CombineOp::Sum),
            "product" => Ok(CombineOp::Product),
            other => Err(Error::Parse(format!("unknown combine op `{other}`"))),
        }
    }
}

impl AbpGraph {
    /// A degree-0 program computing the constant `c`.
    pub fn constant_program(ring: &RingDescriptor, ambient_n: usize, c: Value) -> AbpGraph {
        if ring.is_one(&c) {
            let mut g = AbpGraph::new(Flavor::Pabp, 0, ring, ambient_n);
            g.set_output("f", 0);
            return g;
        }
        let mut g = AbpGraph::new(Flavor::Abp, 0, ring, ambient_n);
        let t = g.add_vertex(0);
        g.add_edge(0, t, AffineLabel::constant(ring, c));
        g.set_output("f", t);
        g
    }

    /// The value at the sink when every variable is zero.
    pub fn constant_value(&self) -> Result<Value> {
        let zero = ConstMatrix::zeros(&self.ring, self.ambient_n);
        Ok(self.evaluate(&zero, &self.sink_name()?)?.into_value())
    }

    /// Removes all constant edges from a layered program while keeping the
    /// polynomial at the sink. The result keeps only the sink as output.
    ///
    /// A vertex `v` without incoming constant edges passes each outgoing
    /// constant edge `(v,w)` back onto its in-edges `(u,v)`; the source, having
    /// no in-edges, pushes it forward onto the out-edges of `w` instead.
    /// Finally the surplus vertices of the first and last layer are dropped.
    pub fn eliminate_constant_edges(&self) -> Result<AbpGraph> {
        match self.flavor {
            Flavor::Pabp => return self.sub_abp(&self.sink_name()?),
            Flavor::Aabp => {
                return Err(Error::InvalidGraph(vec![
                    "expected a layered program".into()
                ]))
            }
            Flavor::Abp => {}
        }
        self.check()?;
        let mut g = self.sub_abp(&self.sink_name()?)?;
        if g.d == 0 {
            return Ok(g);
        }
        let (s, t) = (g.source, g.sink()?);
        g.edges.retain(|&(u, v), _| v != s && u != t);
        let r = g.ring.clone();
        loop {
            let mut has_const_in = vec![false; g.num_vertices()];
            for (&(_, w), l) in &g.edges {
                if l.is_constant() {
                    has_const_in[w] = true;
                }
            }
            let pick = g
                .edges
                .iter()
                .filter(|&(&(v, _), l)| l.is_constant() && !has_const_in[v])
                .min_by_key(|&(&(v, w), _)| (g.layers[v], v, w))
                .map(|(&e, l)| (e, l.constant_part().clone()));
            let Some(((v, w), alpha)) = pick else { break };
            g.edges.remove(&(v, w));
            if v == s {
                let outs: Vec<(usize, AffineLabel)> =
                    g.out_edges(w).map(|(x, l)| (x, l.clone())).collect();
                for (x, l) in outs {
                    g.add_edge(s, x, l.scale(&r, &alpha));
                }
            } else {
                let ins: Vec<(usize, AffineLabel)> = g
                    .edges
                    .iter()
                    .filter(|(&(_, y), _)| y == v)
                    .map(|(&(u, _), l)| (u, l.clone()))
                    .collect();
                for (u, l) in ins {
                    g.add_edge(u, w, l.scale(&r, &alpha));
                }
            }
        }
        let keep: Vec<usize> = (0..g.num_vertices())
            .filter(|&v| v == s || v == t || (g.layers[v] != 0 && g.layers[v] != g.d))
            .collect();
        Ok(g.induced(&keep).with_flavor(Flavor::Pabp))
    }

    /// The degree-`k` homogeneous part of the polynomial at the sink, as a
    /// layered program: each vertex `v` is copied to `v_0..v_k`, the linear
    /// part of a label raises the copy index and the constant part keeps it.
    pub fn homogenize(&self, k: usize) -> Result<AbpGraph> {
        let a = match self.flavor {
            Flavor::Aabp => self.clone(),
            _ => self.to_aabp()?,
        };
        a.check()?;
        let name = a.sink_name()?;
        let t = a.sink()?;
        let r = a.ring.clone();
        let nv = a.num_vertices();
        let mut g = AbpGraph::new(Flavor::Abp, k, &r, a.ambient_n);
        // copy (v, i) lives at index id[v][i]; the source copy 0 is vertex 0
        let mut id = vec![vec![usize::MAX; k + 1]; nv];
        for v in 0..nv {
            for (i, slot) in id[v].iter_mut().enumerate() {
                *slot = if v == a.source && i == 0 {
                    0
                } else {
                    g.add_vertex(i)
                };
            }
        }
        for (&(u, v), l) in &a.edges {
            for i in 0..=k {
                if i < k && !l.linear_part().is_empty() {
                    g.add_edge(id[u][i], id[v][i + 1], l.linear_only(&r));
                }
                if !r.is_zero(l.constant_part()) {
                    g.add_edge(
                        id[u][i],
                        id[v][i],
                        AffineLabel::constant(&r, l.constant_part().clone()),
                    );
                }
            }
        }
        g.set_output(name.clone(), id[t][k]);
        g.sub_abp(&name)
    }

    /// Sum (sources and sinks identified) or product (first sink identified
    /// with the second source) of the programs at the two sinks. Layered
    /// inputs are made pure first.
    pub fn combine(g1: &AbpGraph, g2: &AbpGraph, op: CombineOp) -> Result<AbpGraph> {
        if g1.ring != g2.ring {
            return Err(Error::RingMismatch);
        }
        let n = g1.ambient_n.max(g2.ambient_n);
        let r = g1.ring.clone();
        let layered = g1.flavor != Flavor::Aabp && g2.flavor != Flavor::Aabp;
        if op == CombineOp::Sum && layered && g1.d != g2.d {
            return Err(Error::DegreeMismatch(g1.d, g2.d));
        }
        let prep = |g: &AbpGraph| -> Result<AbpGraph> {
            let mut p = if layered {
                g.eliminate_constant_edges()?
            } else {
                g.sub_abp(&g.sink_name()?)?
            };
            p.ambient_n = n;
            Ok(p)
        };
        let (a, b) = (prep(g1)?, prep(g2)?);
        let name = op.to_string();
        if layered && (a.d == 0 || b.d == 0) {
            let (ca, cb) = (a.constant_value(), b.constant_value());
            return Ok(match (op, a.d, b.d) {
                (CombineOp::Sum, _, _) => {
                    Self::constant_program(&r, n, r.add(&ca?, &cb?)).renamed_sink(&name)
                }
                (CombineOp::Product, 0, 0) => {
                    Self::constant_program(&r, n, r.mul(&ca?, &cb?)).renamed_sink(&name)
                }
                (CombineOp::Product, 0, _) => b.scaled_at_source(&ca?).renamed_sink(&name),
                _ => a.scaled_at_sink(&cb?).renamed_sink(&name),
            });
        }
        let flavor = if layered { Flavor::Pabp } else { Flavor::Aabp };
        let d = match op {
            CombineOp::Sum => a.d,
            CombineOp::Product => a.d + b.d,
        };
        let mut g = AbpGraph::new(flavor, d, &r, n);
        let ta = a.sink()?;
        let t = g.add_vertex(d);
        let map_a = g.absorb(&a, 0, if op == CombineOp::Sum { t } else { usize::MAX }, 0);
        let (src_b, shift) = match op {
            CombineOp::Sum => (0, 0),
            CombineOp::Product => (map_a[ta], a.d),
        };
        g.absorb(&b, src_b, t, shift);
        g.set_output(name, t);
        if !layered {
            g.rerank();
        }
        Ok(g)
    }

    /// Copies `other` into `self`: its source becomes `src`, its sink becomes
    /// `sink` (or a fresh vertex when `usize::MAX`), layers shifted by `shift`.
    fn absorb(&mut self, other: &AbpGraph, src: usize, sink: usize, shift: usize) -> Vec<usize> {
        let t = other.sink().expect("prepared program has a sink");
        let mut map = vec![usize::MAX; other.num_vertices()];
        for v in 0..other.num_vertices() {
            map[v] = if v == other.source {
                src
            } else if v == t && sink != usize::MAX {
                sink
            } else {
                self.add_vertex(other.layers[v] + shift)
            };
        }
        for (&(u, v), l) in &other.edges {
            self.add_edge(map[u], map[v], l.clone());
        }
        map
    }

    fn rerank(&mut self) {
        let order = self
            .topological_order()
            .expect("combined affine program is acyclic");
        for (rank, &v) in order.iter().enumerate() {
            self.layers[v] = rank;
        }
    }

    fn renamed_sink(mut self, name: &str) -> AbpGraph {
        let t = self.sink().expect("program has a sink");
        self.outputs = BTreeMap::from([(name.to_string(), t)]);
        self
    }

    fn scaled_at_source(mut self, c: &Value) -> AbpGraph {
        let s = self.source;
        let r = self.ring.clone();
        for ((u, _), l) in self.edges.iter_mut() {
            if *u == s {
                *l = l.scale(&r, c);
            }
        }
        self.edges.retain(|_, l| !l.is_zero(&r));
        self
    }

    fn scaled_at_sink(mut self, c: &Value) -> AbpGraph {
        let t = self.sink().expect("program has a sink");
        let r = self.ring.clone();
        for ((_, v), l) in self.edges.iter_mut() {
            if *v == t {
                *l = l.scale(&r, c);
            }
        }
        self.edges.retain(|_, l| !l.is_zero(&r));
        self
    }

    /// A square matrix of affine entries whose determinant is the polynomial
    /// at the sink: source and sink are identified, every other vertex gets a
    /// loop of weight 1, and for even `d` the first two rows are swapped to
    /// cancel the sign `(-1)^(d+1)` of the single long cycle.
    pub fn abp_to_determinant(&self) -> Result<PolyMatrix> {
        let g = self.eliminate_constant_edges()?;
        let (r, n) = (g.ring.clone(), g.ambient_n);
        if g.d == 0 {
            return PolyMatrix::new(1, 1, vec![Polynomial::constant(&r, n, g.constant_value()?)]);
        }
        let t = g.sink()?;
        let order: Vec<usize> = (0..g.num_vertices()).filter(|&v| v != t).collect();
        let mut index = vec![0usize; g.num_vertices()];
        for (k, &v) in order.iter().enumerate() {
            index[v] = k + 1;
        }
        index[t] = index[g.source];
        let size = order.len();
        let mut m = PolyMatrix::zeros(&r, n, size, size);
        for &v in &order {
            if v != g.source {
                m.set(index[v], index[v], Polynomial::one(&r, n));
            }
        }
        for (&(u, v), l) in &g.edges {
            let (i, j) = (index[u], index[v]);
            let entry = m.get(i, j) + &l.to_polynomial(&r, n);
            m.set(i, j, entry);
        }
        if g.d % 2 == 0 && size >= 2 {
            for j in 1..=size {
                let a = m.get(1, j).clone();
                let b = m.get(2, j).clone();
                m.set(1, j, b);
                m.set(2, j, a);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::det_leibniz;

    fn x(r: &RingDescriptor, n: usize, i: usize, j: usize) -> Polynomial {
        Polynomial::var(r, n, i, j)
    }

    fn single_edge(r: &RingDescriptor, n: usize, i: usize, j: usize) -> AbpGraph {
        let mut g = AbpGraph::new(Flavor::Pabp, 1, r, n);
        let t = g.add_vertex(1);
        g.add_edge(0, t, AffineLabel::var(r, i, j));
        g.set_output("f", t);
        g
    }

    fn chain(r: &RingDescriptor, n: usize, vars: &[(usize, usize)]) -> AbpGraph {
        let mut g = AbpGraph::new(Flavor::Pabp, vars.len(), r, n);
        let mut prev = 0;
        for (k, &(i, j)) in vars.iter().enumerate() {
            let v = g.add_vertex(k + 1);
            g.add_edge(prev, v, AffineLabel::var(r, i, j));
            prev = v;
        }
        g.set_output("f", prev);
        g
    }

    #[test]
    fn determinant_of_width_one_chain() {
        let z = RingDescriptor::integers();
        let g = chain(&z, 2, &[(1, 1), (2, 2)]);
        let m = g.abp_to_determinant().unwrap();
        let want = [
            [x(&z, 2, 2, 2), Polynomial::one(&z, 2)],
            [Polynomial::zero(&z, 2), x(&z, 2, 1, 1)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.get(i + 1, j + 1), &want[i][j]);
            }
        }
        assert_eq!(det_leibniz(&m).unwrap(), &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2));

        let one = single_edge(&z, 1, 1, 1).abp_to_determinant().unwrap();
        assert_eq!((one.rows(), one.get(1, 1)), (1, &x(&z, 1, 1, 1)));
    }

    #[test]
    fn elimination_through_the_source() {
        // s -(a)-> w in layer 0, w -x11-> t, s -x22-> t
        let z = RingDescriptor::integers();
        let mut g = AbpGraph::new(Flavor::Abp, 1, &z, 2);
        let w = g.add_vertex(0);
        let t = g.add_vertex(1);
        g.add_edge(0, w, AffineLabel::constant(&z, z.from_i64(5)));
        g.add_edge(w, t, AffineLabel::var(&z, 1, 1));
        g.add_edge(0, t, AffineLabel::var(&z, 2, 2));
        g.set_output("f", t);
        let p = g.eliminate_constant_edges().unwrap();
        assert!(p.validate().is_empty(), "{:?}", p.validate());
        assert_eq!(p.flavor(), Flavor::Pabp);
        assert_eq!(
            p.expand_symbolic("f").unwrap(),
            g.expand_symbolic("f").unwrap()
        );
        assert_eq!(p.num_vertices(), 2);
    }

    #[test]
    fn homogenize_affine_product() {
        // (1 + x11)(1 + x22) as a two-edge affine chain
        let z = RingDescriptor::integers();
        let mut a = AbpGraph::new(Flavor::Aabp, 0, &z, 2);
        let m = a.add_vertex(1);
        let t = a.add_vertex(2);
        a.add_edge(
            0,
            m,
            AffineLabel::one(&z).add(&z, &AffineLabel::var(&z, 1, 1)),
        );
        a.add_edge(
            m,
            t,
            AffineLabel::one(&z).add(&z, &AffineLabel::var(&z, 2, 2)),
        );
        a.set_output("f", t);
        assert!(a.validate().is_empty());
        let f = a.expand_symbolic("f").unwrap();
        for k in 0..=3 {
            let h = a.homogenize(k).unwrap();
            assert!(h.validate().is_empty(), "{:?}", h.validate());
            assert_eq!(
                h.expand_symbolic("f").unwrap(),
                f.homogeneous_component(k),
                "k={k}"
            );
            assert!(h.width() <= a.asize().max(1));
        }
        assert_eq!(
            a.homogenize(2).unwrap().expand_symbolic("f").unwrap(),
            &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2)
        );
        assert_eq!(
            a.homogenize(0).unwrap().expand_symbolic("f").unwrap(),
            Polynomial::one(&z, 2)
        );
    }

    #[test]
    fn sums_and_products_of_single_edges() {
        let z = RingDescriptor::integers();
        let (a, b) = (single_edge(&z, 2, 1, 1), single_edge(&z, 2, 2, 2));
        let s = AbpGraph::combine(&a, &b, CombineOp::Sum).unwrap();
        assert_eq!(
            s.expand_symbolic("sum").unwrap(),
            &x(&z, 2, 1, 1) + &x(&z, 2, 2, 2)
        );
        assert_eq!(s.num_vertices(), 2);
        let p = AbpGraph::combine(&a, &b, CombineOp::Product).unwrap();
        assert_eq!(
            p.expand_symbolic("product").unwrap(),
            &x(&z, 2, 1, 1) * &x(&z, 2, 2, 2)
        );
        assert_eq!(p.width(), 1);
        let two = chain(&z, 2, &[(1, 1), (1, 2)]);
        assert!(matches!(
            AbpGraph::combine(&a, &two, CombineOp::Sum),
            Err(Error::DegreeMismatch(1, 2))
        ));
    }

    #[test]
    fn degree_zero_factors() {
        let z = RingDescriptor::integers();
        let c = AbpGraph::constant_program(&z, 2, z.from_i64(3));
        let a = single_edge(&z, 2, 1, 2);
        let p = AbpGraph::combine(&c, &a, CombineOp::Product).unwrap();
        assert_eq!(
            p.expand_symbolic("product").unwrap(),
            x(&z, 2, 1, 2).scale(&z.from_i64(3))
        );
        let q = AbpGraph::combine(&a, &c, CombineOp::Product).unwrap();
        assert_eq!(
            q.expand_symbolic("product").unwrap(),
            x(&z, 2, 1, 2).scale(&z.from_i64(3))
        );
        let s = AbpGraph::combine(
            &c,
            &AbpGraph::constant_program(&z, 2, z.one()),
            CombineOp::Sum,
        )
        .unwrap();
        assert_eq!(
            s.expand_symbolic("sum").unwrap(),
            Polynomial::from_int(&z, 2, 4)
        );
    }
}
