//! Algebraic branching programs.
//!
//! Three flavors share one representation. Layered programs (`Abp`) have
//! homogeneous linear edges between consecutive layers and acyclic constant
//! edges inside a layer; pure programs (`Pabp`) drop the constant edges and
//! have a single vertex in the first and last layer; affine programs (`Aabp`)
//! are arbitrary DAGs with labels of degree at most one, where `layer` holds
//! a topological rank instead.

mod io;
mod label;
mod transform;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::polynomial::{ConstMatrix, Polynomial};
use crate::ring::{RingDescriptor, RingElement, Value};

pub use io::GraphJson;
pub use label::AffineLabel;
pub use transform::CombineOp;

pub const DEFAULT_GUARD_N: usize = 5;

/// The symbolic-expansion guard on the ambient dimension, overridable via
/// `ABPC_GUARD_N`.
pub fn guard_n() -> usize {
    std::env::var("ABPC_GUARD_N")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_GUARD_N)
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Abp,
    Pabp,
    Aabp,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Abp => "abp",
            Flavor::Pabp => "pabp",
            Flavor::Aabp => "aabp",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abp" => Ok(Flavor::Abp),
            "pabp" => Ok(Flavor::Pabp),
            "aabp" => Ok(Flavor::Aabp),
            other => Err(Error::Parse(format!("unknown flavor `{other}`"))),
        }
    }
}

/// A branching program over `ring` in the variables of an `ambient_n x
/// ambient_n` matrix. Vertex ids are indices into `layers`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbpGraph {
    flavor: Flavor,
    d: usize,
    ring: RingDescriptor,
    ambient_n: usize,
    layers: Vec<usize>,
    edges: BTreeMap<(usize, usize), AffineLabel>,
    source: usize,
    outputs: BTreeMap<String, usize>,
}

impl AbpGraph {
    /// A graph holding only its source, in layer 0.
    pub fn new(flavor: Flavor, d: usize, ring: &RingDescriptor, ambient_n: usize) -> Self {
        AbpGraph {
            flavor,
            d,
            ring: ring.clone(),
            ambient_n,
            layers: vec![0],
            edges: BTreeMap::new(),
            source: 0,
            outputs: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, layer: usize) -> usize {
        self.layers.push(layer);
        self.layers.len() - 1
    }

    /// Adds an edge, merging with an existing parallel edge by adding labels.
    /// Zero labels are dropped.
    pub fn add_edge(&mut self, from: usize, to: usize, label: AffineLabel) {
        let merged = match self.edges.remove(&(from, to)) {
            Some(old) => old.add(&self.ring, &label),
            None => label,
        };
        if !merged.is_zero(&self.ring) {
            self.edges.insert((from, to), merged);
        }
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) -> Option<AffineLabel> {
        self.edges.remove(&(from, to))
    }

    pub fn set_output(&mut self, name: impl Into<String>, v: usize) {
        self.outputs.insert(name.into(), v);
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn num_vertices(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, v: usize) -> usize {
        self.layers[v]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), AffineLabel> {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, from: usize, to: usize) -> Option<&AffineLabel> {
        self.edges.get(&(from, to))
    }

    pub fn outputs(&self) -> &BTreeMap<String, usize> {
        &self.outputs
    }

    pub fn output(&self, name: &str) -> Result<usize> {
        self.outputs
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownOutput(name.to_string()))
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, &AffineLabel)> {
        self.edges
            .range((v, 0)..(v + 1, 0))
            .map(|(&(_, w), l)| (w, l))
    }

    pub fn in_edges(&self) -> Vec<Vec<(usize, AffineLabel)>> {
        let mut ins = vec![Vec::new(); self.num_vertices()];
        for (&(u, v), l) in &self.edges {
            ins[v].push((u, l.clone()));
        }
        ins
    }

    /// Named outputs without outgoing edges.
    pub fn sinks(&self) -> BTreeSet<usize> {
        self.outputs
            .values()
            .copied()
            .filter(|&v| v != self.source && self.out_edges(v).next().is_none())
            .collect()
    }

    /// The single output used by transformations: the only output if there is
    /// one, otherwise the unique output in the last layer.
    pub fn sink(&self) -> Result<usize> {
        if self.outputs.len() == 1 {
            return Ok(*self.outputs.values().next().unwrap());
        }
        let last: BTreeSet<usize> = self
            .outputs
            .values()
            .copied()
            .filter(|&v| self.layers[v] == self.d)
            .collect();
        match last.len() {
            1 => Ok(*last.iter().next().unwrap()),
            _ => Err(Error::InvalidGraph(vec![
                "no unique sink; select an output first".into(),
            ])),
        }
    }

    pub fn sink_name(&self) -> Result<String> {
        let t = self.sink()?;
        Ok(self
            .outputs
            .iter()
            .find(|(_, &v)| v == t)
            .map(|(k, _)| k.clone())
            .unwrap())
    }

    pub fn vertices_in_layer(&self, layer: usize) -> usize {
        self.layers.iter().filter(|&&l| l == layer).count()
    }

    /// Maximum vertex count over layers `1..d-1`, at least 1 once `d >= 1`
    /// (a program of degree `d >= 1` is a product of matrices with at least
    /// one row). Affine programs have no layers and report `asize` instead.
    pub fn width(&self) -> usize {
        if self.flavor == Flavor::Aabp {
            return self.asize();
        }
        if self.d == 0 {
            return 0;
        }
        (1..self.d)
            .map(|j| self.vertices_in_layer(j))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Vertices other than the source and the named sinks.
    pub fn size(&self) -> usize {
        self.num_vertices() - 1 - self.sinks().len()
    }

    /// Vertices other than the source and the designated sink.
    pub fn asize(&self) -> usize {
        let sink = self.sink().ok().filter(|&t| t != self.source);
        self.num_vertices() - 1 - usize::from(sink.is_some())
    }

    /// Flavor invariants; empty iff the graph is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let r = &self.ring;
        if self.source >= self.num_vertices() {
            out.push("source out of range".to_string());
            return out;
        }
        for (name, &v) in &self.outputs {
            if v >= self.num_vertices() {
                out.push(format!("output `{name}` out of range"));
            }
        }
        for (&(u, v), l) in &self.edges {
            if u >= self.num_vertices() || v >= self.num_vertices() {
                out.push(format!("edge ({u},{v}) out of range"));
                return out;
            }
            if l.max_var_index() > self.ambient_n {
                out.push(format!(
                    "edge ({u},{v}) uses a variable outside n = {}",
                    self.ambient_n
                ));
            }
            if self.flavor == Flavor::Aabp {
                if self.layers[v] <= self.layers[u] {
                    out.push(format!(
                        "edge ({u},{v}) does not increase the topological rank"
                    ));
                }
                continue;
            }
            let (lu, lv) = (self.layers[u], self.layers[v]);
            if lv == lu + 1 {
                if !l.is_homogeneous_linear(r) {
                    out.push(format!(
                        "cross-layer edge ({u},{v}) is not homogeneous linear"
                    ));
                }
            } else if lv == lu {
                if self.flavor == Flavor::Pabp {
                    out.push("pabp forbids constant edges".to_string());
                } else if !l.is_constant() {
                    out.push(format!("intra-layer edge ({u},{v}) is not constant"));
                }
            } else {
                out.push(format!("edge ({u},{v}) joins layers {lu} and {lv}"));
            }
        }
        match self.flavor {
            Flavor::Aabp => {
                if self.outputs.len() != 1 {
                    out.push("aabp needs exactly one output".to_string());
                }
                if self.edges.keys().any(|&(_, v)| v == self.source) {
                    out.push("source has incoming edges".to_string());
                }
            }
            _ => {
                if self.layers.iter().any(|&l| l > self.d) {
                    out.push(format!("vertex layer exceeds d = {}", self.d));
                }
                if self.layers[self.source] != 0 {
                    out.push("source not in layer 0".to_string());
                }
                if self.flavor == Flavor::Pabp
                    && (self.vertices_in_layer(0) != 1 || self.vertices_in_layer(self.d) != 1)
                {
                    out.push(
                        "pabp needs exactly one vertex in the first and last layer".to_string(),
                    );
                }
                if self.topological_order().is_none() {
                    out.push("constant-edge cycle".to_string());
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(v))
        }
    }

    /// Kahn order of all vertices, `None` on a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let nv = self.num_vertices();
        let mut indeg = vec![0usize; nv];
        for &(_, v) in self.edges.keys() {
            indeg[v] += 1;
        }
        // ties broken by (layer, id) so the order is a layer sweep
        let mut ready: BTreeSet<(usize, usize)> = (0..nv)
            .filter(|&v| indeg[v] == 0)
            .map(|v| (self.layers[v], v))
            .collect();
        let mut order = Vec::with_capacity(nv);
        while let Some((_, v)) = ready.pop_first() {
            order.push(v);
            for (w, _) in self.out_edges(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert((self.layers[w], w));
                }
            }
        }
        (order.len() == nv).then_some(order)
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(v) = queue.pop_front() {
            for (w, _) in self.out_edges(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    fn reaching(&self, targets: &[usize]) -> Vec<bool> {
        let ins = self.in_edges();
        let mut seen = vec![false; self.num_vertices()];
        let mut queue: VecDeque<usize> = targets.iter().copied().collect();
        for &t in targets {
            seen[t] = true;
        }
        while let Some(v) = queue.pop_front() {
            for (u, _) in &ins[v] {
                if !seen[*u] {
                    seen[*u] = true;
                    queue.push_back(*u);
                }
            }
        }
        seen
    }

    /// Forward sweep in topological order, restricted to vertices that can
    /// reach one of `targets`.
    fn sweep<T: Clone>(
        &self,
        targets: &[usize],
        one: T,
        zero: T,
        mut step: impl FnMut(&T, &AffineLabel) -> T,
        mut add: impl FnMut(&mut T, T),
    ) -> Result<Vec<T>> {
        let order = self
            .topological_order()
            .ok_or_else(|| Error::InvalidGraph(vec!["constant-edge cycle".into()]))?;
        let useful = self.reaching(targets);
        let mut vals = vec![zero; self.num_vertices()];
        vals[self.source] = one;
        let start = order.iter().position(|&v| v == self.source).unwrap();
        for &v in &order[start..] {
            if !useful[v] {
                continue;
            }
            let here = vals[v].clone();
            for (w, l) in self.out_edges(v) {
                if useful[w] {
                    let t = step(&here, l);
                    add(&mut vals[w], t);
                }
            }
        }
        Ok(vals)
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.output(n)).collect()
    }

    /// The path sum to the named output at the constant matrix `a`.
    pub fn evaluate(&self, a: &ConstMatrix, at: &str) -> Result<RingElement> {
        Ok(self.evaluate_many(a, &[at])?.remove(0))
    }

    pub fn evaluate_many(&self, a: &ConstMatrix, at: &[&str]) -> Result<Vec<RingElement>> {
        if a.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        if a.n() != self.ambient_n {
            return Err(Error::DimensionMismatch(format!(
                "{0}x{0} matrix for ambient n = {1}",
                a.n(),
                self.ambient_n
            )));
        }
        let targets = self.resolve(at)?;
        let r = &self.ring;
        let vals = self.sweep::<Value>(
            &targets,
            r.one(),
            r.zero(),
            |x, l| r.mul(x, &l.evaluate(r, a)),
            |acc, t| *acc = r.add(acc, &t),
        )?;
        Ok(targets
            .iter()
            .map(|&t| r.element(vals[t].clone()))
            .collect())
    }

    /// The polynomial computed at the named output.
    pub fn expand_symbolic(&self, at: &str) -> Result<Polynomial> {
        Ok(self.expand_many(&[at])?.remove(0))
    }

    pub fn expand_many(&self, at: &[&str]) -> Result<Vec<Polynomial>> {
        let limit = guard_n();
        if self.ambient_n > limit {
            return Err(Error::GuardExceeded {
                n: self.ambient_n,
                limit,
            });
        }
        let targets = self.resolve(at)?;
        let (r, n) = (&self.ring, self.ambient_n);
        let vals = self.sweep::<Polynomial>(
            &targets,
            Polynomial::one(r, n),
            Polynomial::zero(r, n),
            |p, l| p * &l.to_polynomial(r, n),
            |acc, t| *acc = &*acc + &t,
        )?;
        Ok(targets.iter().map(|&t| vals[t].clone()).collect())
    }

    /// Every named output, expanded in one sweep.
    pub fn expand_all(&self) -> Result<BTreeMap<String, Polynomial>> {
        let names: Vec<&str> = self.outputs.keys().map(String::as_str).collect();
        let polys = self.expand_many(&names)?;
        Ok(names.into_iter().map(String::from).zip(polys).collect())
    }

    /// The sub-program of all vertices on source-to-`name` paths, with `name`
    /// as its only output. Layered programs are cut at the output's layer.
    pub fn sub_abp(&self, name: &str) -> Result<AbpGraph> {
        let t = self.output(name)?;
        let from_s = self.reachable_from_source();
        let to_t = self.reaching(&[t]);
        let keep: Vec<usize> = (0..self.num_vertices())
            .filter(|&v| v == self.source || v == t || (from_s[v] && to_t[v]))
            .collect();
        let mut g = self.induced(&keep);
        g.outputs.clear();
        let new_t = keep.iter().position(|&v| v == t).unwrap();
        g.outputs.insert(name.to_string(), new_t);
        if g.flavor != Flavor::Aabp {
            g.d = self.layers[t];
        }
        Ok(g)
    }

    /// The subgraph on `keep`, with source first and ids renumbered in order.
    fn induced(&self, keep: &[usize]) -> AbpGraph {
        let mut index = vec![usize::MAX; self.num_vertices()];
        let mut order: Vec<usize> = vec![self.source];
        order.extend(keep.iter().copied().filter(|&v| v != self.source));
        for (k, &v) in order.iter().enumerate() {
            index[v] = k;
        }
        let mut g = AbpGraph::new(self.flavor, self.d, &self.ring, self.ambient_n);
        g.layers = order.iter().map(|&v| self.layers[v]).collect();
        for (&(u, v), l) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                g.edges.insert((index[u], index[v]), l.clone());
            }
        }
        g.outputs = self
            .outputs
            .iter()
            .filter(|(_, &v)| index[v] != usize::MAX)
            .map(|(k, &v)| (k.clone(), index[v]))
            .collect();
        g
    }

    /// Reinterprets the graph as an affine program, ranking vertices by a
    /// topological order.
    pub fn to_aabp(&self) -> Result<AbpGraph> {
        let order = self
            .topological_order()
            .ok_or_else(|| Error::InvalidGraph(vec!["constant-edge cycle".into()]))?;
        let mut g = self.clone();
        g.flavor = Flavor::Aabp;
        for (rank, &v) in order.iter().enumerate() {
            g.layers[v] = rank;
        }
        let t = self.sink()?;
        let name = self.sink_name()?;
        g.outputs = BTreeMap::from([(name, t)]);
        g.edges.retain(|&(_, v), _| v != self.source);
        Ok(g)
    }

    fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }
}
