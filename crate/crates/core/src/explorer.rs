//! Breadth-first generation of crystal graphs from the empty configuration.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix};
use crate::rigged::{HighestWeight, RiggedConfiguration, RiggedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExplorerError {
    #[error("graphs truncated at different depths ({0} vs {1}) cannot be compared")]
    IncomparableDepths(usize, usize),
    #[error("invalid crystal graph JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rigged(#[from] RiggedError),
}

/// `f_index(nodes[src]) = nodes[dst]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub index: usize,
}

/// The part of a crystal within `depth` applications of `f` from its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalGraph {
    cartan: Arc<CartanMatrix>,
    highest_weight: HighestWeight,
    nodes: Vec<RiggedConfiguration>,
    edges: Vec<Edge>,
    depth: usize,
    complete: bool,
}

/// Generates `RC(inf)` or `RC(lambda)` up to `depth` lowering steps.
///
/// Depth counts `f`-applications from the root, which in `RC(inf)` equals the
/// total number of boxes.
pub fn generate(
    cartan: Arc<CartanMatrix>,
    highest_weight: HighestWeight,
    depth: usize,
) -> Result<CrystalGraph, RiggedError> {
    let rank = cartan.rank();
    let root = RiggedConfiguration::empty(cartan, highest_weight)?;
    Ok(generate_with(root, rank, depth, |x, a| x.f(a)))
}

/// Breadth-first closure of `root` under `step(x, a)` for `a < colors`.
///
/// Nodes are numbered in discovery order: frontier order first, then color
/// order. Successors are computed in parallel but inserted sequentially, so
/// the numbering does not depend on the thread count.
pub fn generate_with<F>(root: RiggedConfiguration, colors: usize, depth: usize, step: F) -> CrystalGraph
where
    F: Fn(&RiggedConfiguration, usize) -> Option<RiggedConfiguration> + Sync,
{
    let cartan = root.cartan().clone();
    let highest_weight = root.highest_weight().clone();
    let mut ids: HashMap<RiggedConfiguration, usize> = HashMap::new();
    let mut nodes = vec![root.clone()];
    ids.insert(root, 0);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let expand = |frontier: &[usize], nodes: &[RiggedConfiguration]| -> Vec<Vec<Option<RiggedConfiguration>>> {
        frontier.par_iter().map(|&id| (0..colors).map(|a| step(&nodes[id], a)).collect()).collect()
    };
    for _ in 0..depth {
        if frontier.is_empty() {
            break;
        }
        let successors = expand(&frontier, &nodes);
        let mut next = Vec::new();
        for (&src, succ) in frontier.iter().zip(successors) {
            for (index, target) in succ.into_iter().enumerate() {
                let Some(target) = target else { continue };
                let dst = match ids.get(&target) {
                    Some(&dst) => dst,
                    None => {
                        let dst = nodes.len();
                        ids.insert(target.clone(), dst);
                        nodes.push(target);
                        next.push(dst);
                        dst
                    }
                };
                edges.push(Edge { src, dst, index });
            }
        }
        frontier = next;
    }
    let complete = frontier.is_empty() || expand(&frontier, &nodes).iter().flatten().all(|t| t.is_none());
    CrystalGraph { cartan, highest_weight, nodes, edges, depth, complete }
}

impl CrystalGraph {
    pub fn cartan(&self) -> &Arc<CartanMatrix> {
        &self.cartan
    }

    pub fn highest_weight(&self) -> &HighestWeight {
        &self.highest_weight
    }

    pub fn nodes(&self) -> &[RiggedConfiguration] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// No element lies beyond the generated depth.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn find(&self, x: &RiggedConfiguration) -> Option<usize> {
        self.nodes.iter().position(|n| n == x)
    }

    /// `out[u][a]`: the target of the `a`-edge leaving `u`.
    pub fn successor_table(&self) -> Vec<Vec<Option<usize>>> {
        let mut out = vec![vec![None; self.cartan.rank()]; self.nodes.len()];
        for e in &self.edges {
            debug_assert!(out[e.src][e.index].is_none(), "two {}-edges leave node {}", e.index, e.src);
            out[e.src][e.index] = Some(e.dst);
        }
        out
    }

    /// Nodes killed by every `e_a`.
    pub fn highest_weight_nodes(&self) -> Vec<usize> {
        let rank = self.cartan.rank();
        (0..self.nodes.len()).filter(|&u| (0..rank).all(|a| self.nodes[u].e(a).is_none())).collect()
    }

    /// Relabels every node, keeping edges, depth and completeness. The new
    /// nodes must share one Cartan matrix and highest weight.
    pub(crate) fn try_map_nodes<E>(
        self,
        f: impl Fn(&RiggedConfiguration) -> Result<RiggedConfiguration, E>,
    ) -> Result<CrystalGraph, E> {
        let nodes = self.nodes.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(CrystalGraph {
            cartan: nodes[0].cartan().clone(),
            highest_weight: nodes[0].highest_weight().clone(),
            nodes,
            edges: self.edges,
            depth: self.depth,
            complete: self.complete,
        })
    }

    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] = ["darkred", "blue", "darkgreen", "darkorange", "purple", "teal", "brown", "black"];
        let mut out = String::from("digraph crystal {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let label: String = node.canonical_text().lines().map(|l| format!("{}\\l", dot_escape(l))).collect();
            writeln!(out, "  n{id} [label=\"{label}\"];").unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  n{} -> n{} [label=\"{}\", color={}, fontcolor={}];",
                e.src,
                e.dst,
                dot_escape(self.cartan.label(e.index)),
                PALETTE[e.index % PALETTE.len()],
                PALETTE[e.index % PALETTE.len()],
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json_value(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                let w = n.weight();
                json!({"id": id, "parts": n.to_json_value(), "weight": {"lambda": w.lambda, "alpha": w.alpha}})
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({"src": e.src, "dst": e.dst, "index": self.cartan.label(e.index)}))
            .collect();
        let hw = match &self.highest_weight {
            HighestWeight::Infinity => json!("inf"),
            HighestWeight::Dominant(c) => json!(c),
        };
        json!({
            "cartan": self.cartan.to_json_value(),
            "highest_weight": hw,
            "depth": self.depth,
            "complete": self.complete,
            "root": self.root(),
            "nodes": nodes,
            "edges": edges,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph json") + "\n"
    }

    /// Inverse of [`to_json`](Self::to_json).
    pub fn from_json(text: &str) -> Result<Self, ExplorerError> {
        let bad = |m: &str| ExplorerError::Json(m.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| ExplorerError::Json(e.to_string()))?;
        let cartan = Arc::new(CartanMatrix::from_json_value(v.get("cartan").ok_or_else(|| bad("missing cartan"))?)?);
        let highest_weight = match v.get("highest_weight") {
            Some(Value::String(s)) if s == "inf" => HighestWeight::Infinity,
            Some(c @ Value::Array(_)) => HighestWeight::dominant(
                serde_json::from_value(c.clone()).map_err(|e| ExplorerError::Json(e.to_string()))?,
            )?,
            _ => return Err(bad("bad highest_weight")),
        };
        let depth = v.get("depth").and_then(Value::as_u64).ok_or_else(|| bad("missing depth"))? as usize;
        let complete = v.get("complete").and_then(Value::as_bool).ok_or_else(|| bad("missing complete"))?;
        if v.get("root").and_then(Value::as_u64) != Some(0) {
            return Err(bad("root must be node 0"));
        }
        let mut nodes = Vec::new();
        for (i, n) in v.get("nodes").and_then(Value::as_array).ok_or_else(|| bad("missing nodes"))?.iter().enumerate() {
            if n.get("id").and_then(Value::as_u64) != Some(i as u64) {
                return Err(bad("node ids must be consecutive"));
            }
            let parts = n.get("parts").ok_or_else(|| bad("missing parts"))?;
            nodes.push(RiggedConfiguration::from_json_value(cartan.clone(), highest_weight.clone(), parts)?);
        }
        let mut edges = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing edges"))? {
            let get = |k: &str| e.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad("bad edge"));
            let (src, dst) = (get("src")?, get("dst")?);
            if src >= nodes.len() || dst >= nodes.len() {
                return Err(bad("edge endpoint out of range"));
            }
            let label = e.get("index").and_then(Value::as_str).ok_or_else(|| bad("bad edge index"))?;
            edges.push(Edge { src, dst, index: cartan.index_of(label)? });
        }
        Ok(CrystalGraph { cartan, highest_weight, nodes, edges, depth, complete })
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Decides whether two edge-colored rooted graphs are isomorphic.
///
/// Every node is reachable from the root and each node has at most one
/// outgoing edge per color, so the root-to-root match forces the whole
/// bijection; it is built by a simultaneous BFS and checked for consistency.
pub fn isomorphic(g1: &CrystalGraph, g2: &CrystalGraph) -> Result<bool, ExplorerError> {
    if !(g1.complete && g2.complete) && g1.depth != g2.depth {
        return Err(ExplorerError::IncomparableDepths(g1.depth, g2.depth));
    }
    let colors = g1.cartan.rank();
    if colors != g2.cartan.rank() || g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let (out1, out2) = (g1.successor_table(), g2.successor_table());
    let n = g1.node_count();
    let mut forward = vec![None; n];
    let mut backward = vec![None; n];
    forward[0] = Some(0);
    backward[0] = Some(0);
    let mut queue = std::collections::VecDeque::from([(0usize, 0usize)]);
    while let Some((u, v)) = queue.pop_front() {
        for a in 0..colors {
            match (out1[u][a], out2[v][a]) {
                (None, None) => {}
                (Some(x), Some(y)) => match (forward[x], backward[y]) {
                    (None, None) => {
                        forward[x] = Some(y);
                        backward[y] = Some(x);
                        queue.push_back((x, y));
                    }
                    (Some(fy), Some(bx)) if fy == y && bx == x => {}
                    _ => return Ok(false),
                },
                _ => return Ok(false),
            }
        }
    }
    Ok(forward.iter().all(Option::is_some))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(s: &str) -> Arc<CartanMatrix> {
        Arc::new(CartanMatrix::named(s).unwrap())
    }

    #[test]
    fn depth_zero_is_root_only() {
        for hw in [HighestWeight::Infinity, HighestWeight::Dominant(vec![1, 1])] {
            let g = generate(named("A2"), hw, 0).unwrap();
            assert_eq!(g.node_count(), 1);
            assert_eq!(g.edge_count(), 0);
            assert!(!g.is_complete());
        }
        let trivial = generate(named("A2"), HighestWeight::Dominant(vec![0, 0]), 0).unwrap();
        assert!(trivial.is_complete());
    }

    #[test]
    fn a2_fundamental_has_three_nodes() {
        let g = generate(named("A2"), HighestWeight::Dominant(vec![1, 0]), 10).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_complete());
        assert_eq!(g.highest_weight_nodes(), vec![0]);
    }

    #[test]
    fn a2_infinity_top() {
        let g = generate(named("A2"), HighestWeight::Infinity, 3).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (13, 14));
        assert!(!g.is_complete());
    }

    #[test]
    fn isomorphism_examples() {
        let g = generate(named("A2"), HighestWeight::Dominant(vec![1, 1]), 10).unwrap();
        assert!(isomorphic(&g, &g).unwrap());
        let l1 = generate(named("A2"), HighestWeight::Dominant(vec![1, 0]), 10).unwrap();
        let l2 = generate(named("A2"), HighestWeight::Dominant(vec![0, 1]), 10).unwrap();
        assert!(!isomorphic(&l1, &l2).unwrap());
        assert!(!isomorphic(&l1, &g).unwrap());
        let inf2 = generate(named("A2"), HighestWeight::Infinity, 2).unwrap();
        let inf3 = generate(named("A2"), HighestWeight::Infinity, 3).unwrap();
        assert_eq!(isomorphic(&inf2, &inf3), Err(ExplorerError::IncomparableDepths(2, 3)));
    }

    #[test]
    fn dot_single_node() {
        let g = generate(named("A1"), HighestWeight::Infinity, 0).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn json_round_trip() {
        let g = generate(named("A2"), HighestWeight::Dominant(vec![1, 1]), 10).unwrap();
        assert_eq!(CrystalGraph::from_json(&g.to_json()).unwrap(), g);
        let h = generate(named("G2"), HighestWeight::Infinity, 4).unwrap();
        assert_eq!(CrystalGraph::from_json(&h.to_json()).unwrap(), h);
        assert!(CrystalGraph::from_json("{}").is_err());
    }
}
