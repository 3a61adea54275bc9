//! Graph lifts.
//!
//! Each lift builds a new labeled graph whose nodes are structured
//! combinations of the input's nodes (multisets, subsets, or node/mode
//! pairs). All of them map path-complete graphs to path-complete graphs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{check_assumption_minimal, Edge, Label, LabeledGraph, NodeId};

/// Largest node count accepted by the power-set lifts.
pub const MAX_SUBSET_LIFT_NODES: usize = 12;
/// Largest lifted node count accepted by the sum lift.
pub const MAX_SUM_LIFT_NODES: u128 = 4096;
/// Largest De Bruijn graph accepted by [`de_bruijn`].
pub const MAX_DE_BRUIJN_NODES: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Sum(usize),
    Max,
    Min,
    Comp,
    BackComp,
}

impl LiftKind {
    pub fn apply(self, g: &LabeledGraph) -> Result<LabeledGraph> {
        match self {
            LiftKind::Sum(t) => sum_lift(g, t),
            LiftKind::Max => max_lift(g),
            LiftKind::Min => min_lift(g),
            LiftKind::Comp => composition_lift(g),
            LiftKind::BackComp => backward_composition_lift(g),
        }
    }
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftKind::Sum(t) => write!(f, "sum:{t}"),
            LiftKind::Max => f.write_str("max"),
            LiftKind::Min => f.write_str("min"),
            LiftKind::Comp => f.write_str("comp"),
            LiftKind::BackComp => f.write_str("backcomp"),
        }
    }
}

impl FromStr for LiftKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(LiftKind::Max),
            "min" => Ok(LiftKind::Min),
            "comp" => Ok(LiftKind::Comp),
            "backcomp" => Ok(LiftKind::BackComp),
            _ => match s.strip_prefix("sum:") {
                Some(t) => t.parse().map(LiftKind::Sum).map_err(|_| Error::Parse(format!("bad sum order `{t}`"))),
                None => Err(Error::Parse(format!("unknown lift kind `{s}`"))),
            },
        }
    }
}

/// Sorts lifted nodes canonically and returns them together with the
/// permutation `pos[k]` = canonical index of the k-th generated node.
fn canonicalize(generated: Vec<NodeId>) -> (Vec<NodeId>, Vec<usize>) {
    let mut order: Vec<usize> = (0..generated.len()).collect();
    order.sort_by(|&x, &y| generated[x].cmp(&generated[y]));
    let mut pos = vec![0; generated.len()];
    for (canon, &k) in order.iter().enumerate() {
        pos[k] = canon;
    }
    let mut slots: Vec<Option<NodeId>> = generated.into_iter().map(Some).collect();
    let nodes = order.iter().map(|&k| slots[k].take().unwrap()).collect();
    (nodes, pos)
}

/// All nondecreasing index tuples of length `t` over `0..n`.
fn multisets(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    fn rec(n: usize, t: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for k in from..n {
            cur.push(k);
            rec(n, t, k, cur, out);
            cur.pop();
        }
    }
    rec(n, t, 0, &mut cur, &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Kuhn's augmenting-path matching: is there a perfect matching between
/// positions of `left` and `right` using only pairs accepted by `ok`?
fn perfect_matching(t: usize, ok: impl Fn(usize, usize) -> bool) -> bool {
    let mut match_right = vec![usize::MAX; t];
    fn augment(
        u: usize,
        t: usize,
        ok: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        match_right: &mut [usize],
    ) -> bool {
        for v in 0..t {
            if ok(u, v) && !seen[v] {
                seen[v] = true;
                if match_right[v] == usize::MAX || augment(match_right[v], t, ok, seen, match_right) {
                    match_right[v] = u;
                    return true;
                }
            }
        }
        false
    }
    (0..t).all(|u| {
        let mut seen = vec![false; t];
        augment(u, t, &ok, &mut seen, &mut match_right)
    })
}

/// T-sum lift: nodes are multisets of `t` original nodes; an edge labeled
/// `i` joins two multisets when their members can be paired off so that
/// every pair is an `i`-labeled edge of `g`.
pub fn sum_lift(g: &LabeledGraph, t: usize) -> Result<LabeledGraph> {
    if t < 1 {
        return Err(Error::InvalidParameter(format!("sum lift order must be at least 1, got {t}")));
    }
    let n = g.node_count();
    let count = binomial((n + t - 1) as u128, t as u128);
    if count > MAX_SUM_LIFT_NODES {
        return Err(Error::CapExceeded { what: "sum lift node count", size: count, cap: MAX_SUM_LIFT_NODES });
    }
    let tuples = multisets(n, t);
    let generated =
        tuples.iter().map(|tuple| NodeId::multiset(tuple.iter().map(|&k| g.nodes()[k].clone()).collect())).collect();
    let (nodes, pos) = canonicalize(generated);
    let mut edges = Vec::new();
    for (x, from) in tuples.iter().enumerate() {
        for (y, to) in tuples.iter().enumerate() {
            for label in 1..=g.alphabet() {
                if perfect_matching(t, |u, v| g.has_edge(from[u], to[v], label)) {
                    edges.push(Edge { source: pos[x], target: pos[y], label });
                }
            }
        }
    }
    Ok(LabeledGraph::from_indexed(g.alphabet(), nodes, edges))
}

/// Builds the power-set node list. `index[mask]` is the lifted index of the
/// subset `mask` (mask 0 unused).
fn subset_nodes(g: &LabeledGraph) -> Result<(Vec<NodeId>, Vec<usize>)> {
    let n = g.node_count();
    if n > MAX_SUBSET_LIFT_NODES {
        return Err(Error::CapExceeded {
            what: "power-set lift input node count",
            size: n as u128,
            cap: MAX_SUBSET_LIFT_NODES as u128,
        });
    }
    let masks = 1usize..(1 << n);
    let generated = masks
        .clone()
        .map(|mask| NodeId::subset((0..n).filter(|k| mask >> k & 1 == 1).map(|k| g.nodes()[k].clone()).collect()))
        .collect();
    let (nodes, pos) = canonicalize(generated);
    let mut index = vec![usize::MAX; 1 << n];
    for (k, mask) in masks.enumerate() {
        index[mask] = pos[k];
    }
    Ok((nodes, index))
}

/// `succ[label-1][node]` as a bitmask over nodes.
fn successor_masks(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let mut succ = vec![vec![0usize; g.node_count()]; g.alphabet() as usize];
    for e in g.edges() {
        succ[(e.label - 1) as usize][e.source] |= 1 << e.target;
    }
    succ
}

/// Iterates the nonempty submasks of `mask`.
fn nonempty_submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        sub = (sub - 1) & mask;
        done = sub == 0;
        Some(out)
    })
}

/// Max lift: nodes are nonempty subsets; `(A, B, i)` is an edge iff every
/// `b` in `B` has an `i`-predecessor in `A`.
pub fn max_lift(g: &LabeledGraph) -> Result<LabeledGraph> {
    let (nodes, index) = subset_nodes(g)?;
    let n = g.node_count();
    let succ = successor_masks(g);
    let mut edges = Vec::new();
    for from in 1usize..(1 << n) {
        for label in 1..=g.alphabet() {
            let reach = (0..n).filter(|k| from >> k & 1 == 1).fold(0, |acc, k| acc | succ[(label - 1) as usize][k]);
            for to in nonempty_submasks(reach) {
                edges.push(Edge { source: index[from], target: index[to], label });
            }
        }
    }
    Ok(LabeledGraph::from_indexed(g.alphabet(), nodes, edges))
}

/// Min lift: nodes are nonempty subsets; `(A, B, i)` is an edge iff every
/// `a` in `A` has an `i`-successor in `B`.
pub fn min_lift(g: &LabeledGraph) -> Result<LabeledGraph> {
    let (nodes, index) = subset_nodes(g)?;
    let n = g.node_count();
    let succ = successor_masks(g);
    let mut edges = Vec::new();
    for to in 1usize..(1 << n) {
        for label in 1..=g.alphabet() {
            let hits = (0..n).filter(|&k| succ[(label - 1) as usize][k] & to != 0).fold(0, |acc, k| acc | 1 << k);
            for from in nonempty_submasks(hits) {
                edges.push(Edge { source: index[from], target: index[to], label });
            }
        }
    }
    Ok(LabeledGraph::from_indexed(g.alphabet(), nodes, edges))
}

fn warn_if_not_minimal(g: &LabeledGraph, lift: &str) {
    let report = check_assumption_minimal(g);
    if !(report.strongly_connected && report.edge_minimal) {
        log::warn!(
            "{lift} lift input is not strongly connected and edge-minimal: {}",
            report.diagnostic.as_deref().unwrap_or("several strongly connected components")
        );
    }
}

/// Lifted nodes `s∘i` for all nodes `s` and modes `i`; `index(s, i)` gives
/// the canonical position.
fn composition_nodes(g: &LabeledGraph) -> (Vec<NodeId>, impl Fn(usize, Label) -> usize) {
    let m = g.alphabet() as usize;
    let generated =
        g.nodes().iter().flat_map(|s| (1..=g.alphabet()).map(move |i| NodeId::comp(s.clone(), i))).collect();
    let (nodes, pos) = canonicalize(generated);
    (nodes, move |s: usize, i: Label| pos[s * m + (i - 1) as usize])
}

/// Composition lift: for every edge `(a, b, i)` and mode `j`, the edge
/// `(a∘j, b∘i, j)`.
pub fn composition_lift(g: &LabeledGraph) -> Result<LabeledGraph> {
    warn_if_not_minimal(g, "composition");
    let (nodes, at) = composition_nodes(g);
    let mut edges = Vec::new();
    for e in g.edges() {
        for j in 1..=g.alphabet() {
            edges.push(Edge { source: at(e.source, j), target: at(e.target, e.label), label: j });
        }
    }
    Ok(LabeledGraph::from_indexed(g.alphabet(), nodes, edges))
}

/// Backward composition lift: for every edge `(a, b, i)` and mode `j`, the
/// edge `(a∘i, b∘j, j)`.
///
/// With node functions `W_{s∘i} = V_s ∘ f_i⁻¹` this is the rule under which
/// each lifted inequality `W_{b∘j}(f_j x) <= W_{a∘i}(x)` is the original
/// inequality of `(a, b, i)` evaluated at `f_i⁻¹ x`.
pub fn backward_composition_lift(g: &LabeledGraph) -> Result<LabeledGraph> {
    warn_if_not_minimal(g, "backward composition");
    let (nodes, at) = composition_nodes(g);
    let mut edges = Vec::new();
    for e in g.edges() {
        for j in 1..=g.alphabet() {
            edges.push(Edge { source: at(e.source, e.label), target: at(e.target, j), label: j });
        }
    }
    Ok(LabeledGraph::from_indexed(g.alphabet(), nodes, edges))
}

/// De Bruijn graph of order `l - 1` on `alphabet` letters: nodes are the
/// words of length `l - 1`, and reading `j` shifts it in on the right.
pub fn de_bruijn(alphabet: u32, l: usize) -> Result<LabeledGraph> {
    if alphabet < 1 {
        return Err(Error::EmptyAlphabet(alphabet));
    }
    if l < 1 {
        return Err(Error::InvalidParameter(format!("De Bruijn level must be at least 1, got {l}")));
    }
    let width = l - 1;
    let count = (alphabet as u128).checked_pow(width as u32).unwrap_or(u128::MAX);
    if count > MAX_DE_BRUIJN_NODES {
        return Err(Error::CapExceeded { what: "De Bruijn node count", size: count, cap: MAX_DE_BRUIJN_NODES });
    }
    let count = count as usize;
    let m = alphabet as usize;
    // word k, in base M with the first letter most significant, is node k:
    // lexicographic order of words matches numeric order
    let word = |mut k: usize| {
        let mut letters = vec![0; width];
        for slot in letters.iter_mut().rev() {
            *slot = (k % m) as Label + 1;
            k /= m;
        }
        letters
    };
    let nodes = (0..count).map(|k| NodeId::word(word(k))).collect();
    let mut edges = Vec::new();
    for k in 0..count {
        for j in 1..=alphabet {
            let target = if width == 0 { 0 } else { (k * m) % count + (j - 1) as usize };
            edges.push(Edge { source: k, target, label: j });
        }
    }
    Ok(LabeledGraph::from_indexed(alphabet, nodes, edges))
}

/// Maps each node of `g` to its embedded copy in a lift, as used in the
/// isomorphic-component argument: T-fold repetition for sum lifts,
/// singletons for power-set lifts.
pub fn embedding(g: &LabeledGraph, kind: LiftKind) -> Option<HashMap<NodeId, NodeId>> {
    let wrap: Box<dyn Fn(&NodeId) -> NodeId> = match kind {
        LiftKind::Sum(t) => Box::new(move |s: &NodeId| NodeId::multiset(vec![s.clone(); t])),
        LiftKind::Max | LiftKind::Min => Box::new(|s: &NodeId| NodeId::subset(vec![s.clone()])),
        LiftKind::Comp | LiftKind::BackComp => return None,
    };
    Some(g.nodes().iter().map(|s| (s.clone(), wrap(s))).collect())
}
