//! Labeled directed graphs on the alphabet `1..=M`.

mod node;
mod paths;
mod simulation;

pub use node::{Label, NodeId};
pub use paths::{
    check_assumption_minimal, is_path_complete, path_complete_components, strongly_connected_components,
    MinimalityReport,
};
pub use simulation::{find_simulation, SimulationMap};

use crate::error::{Error, Result};

/// Edge between node indices of the owning graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: Label,
}

/// A directed multigraph whose edges carry labels in `1..=alphabet`.
///
/// Nodes are kept in canonical order and edges are sorted and deduplicated,
/// so two graphs built from the same node and edge sets compare equal no
/// matter the insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: u32,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Validates and canonicalizes a graph.
    pub fn new(
        alphabet: u32,
        nodes: Vec<NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId, Label)>,
    ) -> Result<Self> {
        if alphabet < 1 {
            return Err(Error::EmptyAlphabet(alphabet));
        }
        let mut nodes = nodes;
        nodes.sort();
        nodes.dedup();
        if nodes.is_empty() {
            return Err(Error::NoNodes);
        }
        let lookup = |n: &NodeId| nodes.binary_search(n).map_err(|_| Error::UnknownNode(n.to_string()));
        let mut out = Vec::new();
        for (a, b, label) in edges {
            if label < 1 || label > alphabet {
                return Err(Error::LabelOutOfRange { label, alphabet });
            }
            out.push(Edge { source: lookup(&a)?, target: lookup(&b)?, label });
        }
        Ok(Self::from_indexed(alphabet, nodes, out))
    }

    /// Shorthand for graphs whose nodes are plain names.
    pub fn from_atoms(alphabet: u32, nodes: &[&str], edges: &[(&str, &str, Label)]) -> Result<Self> {
        Self::new(
            alphabet,
            nodes.iter().map(|&n| NodeId::atom(n)).collect(),
            edges.iter().map(|&(a, b, l)| (NodeId::atom(a), NodeId::atom(b), l)),
        )
    }

    /// `nodes` must already be sorted and deduplicated; edge indices refer to it.
    pub(crate) fn from_indexed(alphabet: u32, nodes: Vec<NodeId>, mut edges: Vec<Edge>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        edges.sort();
        edges.dedup();
        LabeledGraph { alphabet, nodes, edges }
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, node: &NodeId) -> Option<usize> {
        self.nodes.binary_search(node).ok()
    }

    pub fn has_edge(&self, source: usize, target: usize, label: Label) -> bool {
        self.edges.binary_search(&Edge { source, target, label }).is_ok()
    }

    /// Edges as triples of node identities, in canonical order.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, Label)> + '_ {
        self.edges.iter().map(move |e| (&self.nodes[e.source], &self.nodes[e.target], e.label))
    }

    /// `out[node][label - 1]` lists successors.
    pub(crate) fn successors(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![vec![Vec::new(); self.alphabet as usize]; self.nodes.len()];
        for e in &self.edges {
            out[e.source][(e.label - 1) as usize].push(e.target);
        }
        out
    }

    /// Same nodes with every edge reversed.
    pub fn transpose(&self) -> Self {
        let edges = self.edges.iter().map(|e| Edge { source: e.target, target: e.source, label: e.label }).collect();
        Self::from_indexed(self.alphabet, self.nodes.clone(), edges)
    }

    /// `(complete, co_complete)`: every (node, label) pair has an outgoing,
    /// respectively incoming, edge.
    pub fn completeness_flags(&self) -> (bool, bool) {
        let m = self.alphabet as usize;
        let mut out = vec![false; self.nodes.len() * m];
        let mut inc = vec![false; self.nodes.len() * m];
        for e in &self.edges {
            let l = (e.label - 1) as usize;
            out[e.source * m + l] = true;
            inc[e.target * m + l] = true;
        }
        (out.iter().all(|&x| x), inc.iter().all(|&x| x))
    }

    /// Subgraph induced by the given node indices.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let nodes = keep.iter().map(|&k| self.nodes[k].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.source] != usize::MAX && remap[e.target] != usize::MAX)
            .map(|e| Edge { source: remap[e.source], target: remap[e.target], label: e.label })
            .collect();
        Self::from_indexed(self.alphabet, nodes, edges)
    }

    /// Copy without the edge at position `index` of [`edges`](Self::edges).
    pub fn without_edge(&self, index: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(index);
        LabeledGraph { alphabet: self.alphabet, nodes: self.nodes.clone(), edges }
    }
}

/// The common Lyapunov function graph: one node `a`, one self-loop per label.
pub fn common_lyapunov_graph(alphabet: u32) -> Result<LabeledGraph> {
    if alphabet < 1 {
        return Err(Error::EmptyAlphabet(alphabet));
    }
    let a = NodeId::atom("a");
    LabeledGraph::new(alphabet, vec![a.clone()], (1..=alphabet).map(|i| (a.clone(), a.clone(), i)))
}

/// Exhaustive search for a label-preserving node bijection. Intended for the
/// small graphs met in lift examples; the search is factorial in the worst case.
pub fn is_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Returns `map` with `map[i]` the node of `h` matched to node `i` of `g`.
pub fn find_isomorphism(g: &LabeledGraph, h: &LabeledGraph) -> Option<Vec<usize>> {
    if g.alphabet != h.alphabet || g.node_count() != h.node_count() || g.edges.len() != h.edges.len() {
        return None;
    }
    let n = g.node_count();
    let m = g.alphabet as usize;
    // per-node (out-degree, in-degree) per label, as a cheap invariant
    let signature = |gr: &LabeledGraph| {
        let mut sig = vec![vec![0usize; 2 * m]; n];
        for e in &gr.edges {
            sig[e.source][(e.label - 1) as usize] += 1;
            sig[e.target][m + (e.label - 1) as usize] += 1;
        }
        sig
    };
    let gs = signature(g);
    let hs = signature(h);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn consistent(g: &LabeledGraph, h: &LabeledGraph, map: &[usize], k: usize) -> bool {
        // every g-edge between assigned nodes touching k must exist in h, and vice versa
        let assigned = |i: usize| map[i] != usize::MAX;
        for e in &g.edges {
            if (e.source == k || e.target == k)
                && assigned(e.source)
                && assigned(e.target)
                && !h.has_edge(map[e.source], map[e.target], e.label)
            {
                return false;
            }
        }
        let mut inverse = vec![usize::MAX; map.len()];
        for (i, &j) in map.iter().enumerate() {
            if j != usize::MAX {
                inverse[j] = i;
            }
        }
        let hk = map[k];
        for e in &h.edges {
            if (e.source == hk || e.target == hk)
                && inverse[e.source] != usize::MAX
                && inverse[e.target] != usize::MAX
                && !g.has_edge(inverse[e.source], inverse[e.target], e.label)
            {
                return false;
            }
        }
        true
    }

    fn search(
        k: usize,
        g: &LabeledGraph,
        h: &LabeledGraph,
        gs: &[Vec<usize>],
        hs: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == map.len() {
            return true;
        }
        for cand in 0..map.len() {
            if used[cand] || gs[k] != hs[cand] {
                continue;
            }
            map[k] = cand;
            used[cand] = true;
            if consistent(g, h, map, k) && search(k + 1, g, h, gs, hs, map, used) {
                return true;
            }
            used[cand] = false;
            map[k] = usize::MAX;
        }
        false
    }

    if search(0, g, h, &gs, &hs, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
