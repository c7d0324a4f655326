use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{AbpGraph, AffineLabel, Flavor};
use crate::error::{Error, Result};
use crate::polynomial::VarIndex;
use crate::ring::RingDescriptor;

/// On-disk form of a graph. Ring elements are written as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub flavor: Flavor,
    pub d: usize,
    pub n: usize,
    pub ring: String,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub source: usize,
    pub outputs: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub layer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    #[serde(rename = "const")]
    pub constant: String,
    pub linear: Vec<LinearJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearJson {
    pub i: usize,
    pub j: usize,
    pub coeff: String,
}

impl AbpGraph {
    pub fn to_json_value(&self) -> GraphJson {
        let r = &self.ring;
        GraphJson {
            flavor: self.flavor,
            d: self.d,
            n: self.ambient_n,
            ring: r.to_string(),
            vertices: self
                .layers
                .iter()
                .enumerate()
                .map(|(id, &layer)| VertexJson { id, layer })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(&(from, to), l)| EdgeJson {
                    from,
                    to,
                    constant: r.format_value(l.constant_part()),
                    linear: l
                        .linear_part()
                        .iter()
                        .map(|(v, c)| LinearJson {
                            i: v.row(),
                            j: v.col(),
                            coeff: r.format_value(c),
                        })
                        .collect(),
                })
                .collect(),
            source: self.source,
            outputs: self.outputs.clone(),
        }
    }

    pub fn from_json_value(j: &GraphJson) -> Result<AbpGraph> {
        let ring: RingDescriptor = j.ring.parse()?;
        let mut index = BTreeMap::new();
        for (k, v) in j.vertices.iter().enumerate() {
            if index.insert(v.id, k).is_some() {
                return Err(Error::Parse(format!("duplicate vertex id {}", v.id)));
            }
        }
        let lookup = |id: usize| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown vertex id {id}")))
        };
        let source = lookup(j.source)?;
        // the source is stored first
        let mut order: Vec<usize> = vec![source];
        order.extend((0..j.vertices.len()).filter(|&k| k != source));
        let mut pos = vec![0usize; order.len()];
        for (p, &k) in order.iter().enumerate() {
            pos[k] = p;
        }
        let mut g = AbpGraph::new(j.flavor, j.d, &ring, j.n);
        g.layers = order.iter().map(|&k| j.vertices[k].layer).collect();
        for e in &j.edges {
            let mut label = AffineLabel::constant(&ring, ring.parse_value(&e.constant)?);
            for t in &e.linear {
                let v = VarIndex::new(t.i, t.j);
                if t.i == 0 || t.j == 0 || !v.within(j.n) {
                    return Err(Error::Parse(format!(
                        "variable x[{},{}] outside n = {}",
                        t.i, t.j, j.n
                    )));
                }
                label = label.add(
                    &ring,
                    &AffineLabel::scaled_var(&ring, t.i, t.j, ring.parse_value(&t.coeff)?),
                );
            }
            g.add_edge(pos[lookup(e.from)?], pos[lookup(e.to)?], label);
        }
        for (name, &id) in &j.outputs {
            g.set_output(name.clone(), pos[lookup(id)?]);
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<AbpGraph> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }

    /// Graphviz text: one rank per layer, constant edges dashed.
    pub fn to_dot(&self) -> String {
        let mut names: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (name, &v) in &self.outputs {
            names.entry(v).or_default().push(name);
        }
        let mut s = String::from("digraph abp {\n  rankdir=LR;\n  node [shape=circle];\n");
        let mut by_layer: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in self.layers.iter().enumerate() {
            by_layer.entry(l).or_default().push(v);
        }
        for (l, vs) in &by_layer {
            let _ = writeln!(s, "  {{ rank=same; // layer {l}");
            for &v in vs {
                let label = match names.get(&v) {
                    Some(ns) => format!("{v}\\n{}", ns.join(",")),
                    None if v == self.source => format!("{v}\\ns"),
                    None => v.to_string(),
                };
                let _ = writeln!(s, "    v{v} [label=\"{label}\"];");
            }
            s.push_str("  }\n");
        }
        for (&(u, v), l) in &self.edges {
            let text = l.to_text(&self.ring, self.ambient_n);
            let style = if l.is_constant() {
                ", style=dashed"
            } else {
                ""
            };
            let _ = writeln!(s, "  v{u} -> v{v} [label=\"{text}\"{style}];");
        }
        s.push_str("}\n");
        s
    }
}
