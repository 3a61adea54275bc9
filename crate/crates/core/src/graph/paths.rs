use std::collections::{HashSet, VecDeque};

use super::LabeledGraph;

/// Fixed-width bitset over node indices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct NodeSet(Vec<u64>);

impl NodeSet {
    fn empty(n: usize) -> Self {
        NodeSet(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
}

/// True iff every finite word over the alphabet labels some path of `g`.
///
/// Subset construction from the full node set: a word has no path exactly
/// when reading it drives the set of possible end nodes to empty.
#[allow(clippy::needless_range_loop)]
pub fn is_path_complete(g: &LabeledGraph) -> bool {
    let n = g.node_count();
    let succ = g.successors();
    let start = NodeSet::full(n);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(set) = queue.pop_front() {
        for label in 0..g.alphabet() as usize {
            let mut next = NodeSet::empty(n);
            set.iter().flat_map(|a| &succ[a][label]).for_each(|&b| next.insert(b));
            if next.is_empty() {
                return false;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

/// Strongly connected components (labels ignored), listed in topological
/// order of the condensation: no edge runs from a later component to an
/// earlier one. Node indices within a component are sorted.
pub fn strongly_connected_components(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.source].push(e.target);
    }
    for list in &mut adj {
        list.dedup();
    }

    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    // Tarjan emits sinks first
    comps.reverse();
    comps
}

/// Induced subgraphs of the strongly connected components that are
/// themselves path-complete, in the order of
/// [`strongly_connected_components`].
pub fn path_complete_components(g: &LabeledGraph) -> Vec<LabeledGraph> {
    strongly_connected_components(g)
        .into_iter()
        .map(|comp| g.induced_subgraph(&comp))
        .filter(is_path_complete)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub strongly_connected: bool,
    /// Removing any single edge destroys path-completeness.
    pub edge_minimal: bool,
    pub diagnostic: Option<String>,
}

/// Checks that `g` has a single strongly connected component and that no
/// edge can be dropped without losing path-completeness.
pub fn check_assumption_minimal(g: &LabeledGraph) -> MinimalityReport {
    let strongly_connected = strongly_connected_components(g).len() == 1;
    if !is_path_complete(g) {
        return MinimalityReport {
            strongly_connected,
            edge_minimal: false,
            diagnostic: Some("graph is not path-complete".to_string()),
        };
    }
    let redundant = (0..g.edges().len()).find(|&k| is_path_complete(&g.without_edge(k)));
    let diagnostic = redundant.map(|k| {
        let e = g.edges()[k];
        format!(
            "edge ({}, {}, {}) can be removed without losing path-completeness",
            g.nodes()[e.source],
            g.nodes()[e.target],
            e.label
        )
    });
    MinimalityReport { strongly_connected, edge_minimal: redundant.is_none(), diagnostic }
}
