use std::collections::BTreeMap;

use super::{LabeledGraph, NodeId};
use crate::error::{Error, Result};

/// Witness that `g` simulates `h`: every node of `h` is sent to a node of
/// `g` so that each labeled edge of `h` lands on a labeled edge of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationMap {
    pub mapping: BTreeMap<NodeId, NodeId>,
}

impl SimulationMap {
    pub fn image(&self, node: &NodeId) -> Option<&NodeId> {
        self.mapping.get(node)
    }
}

/// Searches for a map from the nodes of `h` into the nodes of `g` that
/// preserves every labeled edge of `h`.
///
/// Backtracking over `h`'s nodes in canonical order, trying `g`'s nodes in
/// canonical order, so the first witness found is the lexicographically
/// smallest one.
pub fn find_simulation(g: &LabeledGraph, h: &LabeledGraph) -> Result<Option<SimulationMap>> {
    if g.alphabet() != h.alphabet() {
        return Err(Error::AlphabetMismatch { left: g.alphabet(), right: h.alphabet() });
    }
    let hn = h.node_count();
    // edges of h grouped by the later of their two endpoints, so each edge is
    // checked exactly when both ends become assigned
    let mut checks = vec![Vec::new(); hn];
    for e in h.edges() {
        checks[e.source.max(e.target)].push(*e);
    }
    let mut map = vec![usize::MAX; hn];

    fn assign(k: usize, g: &LabeledGraph, checks: &[Vec<super::Edge>], map: &mut [usize]) -> bool {
        if k == map.len() {
            return true;
        }
        for cand in 0..g.node_count() {
            map[k] = cand;
            let ok = checks[k].iter().all(|e| g.has_edge(map[e.source], map[e.target], e.label));
            if ok && assign(k + 1, g, checks, map) {
                return true;
            }
        }
        map[k] = usize::MAX;
        false
    }

    if !assign(0, g, &checks, &mut map) {
        return Ok(None);
    }
    let mapping = map.iter().enumerate().map(|(i, &j)| (h.nodes()[i].clone(), g.nodes()[j].clone())).collect();
    Ok(Some(SimulationMap { mapping }))
}
