#![allow(dead_code)]

use nalgebra::DMatrix;
use pclf_core::graph::{is_path_complete, Label, LabeledGraph, NodeId};
use pclf_core::jsr::brute_force_bounds;
use pclf_core::lifts::max_lift;
use pclf_core::MatrixSet;
use rand::Rng;

/// The pair of 3×3 matrices of the worked numerical example.
pub fn reference_pair() -> MatrixSet {
    MatrixSet::from_rows(&[
        vec![vec![0.2, 0.0, 0.0], vec![0.6, 0.6, 0.5], vec![0.6, 0.3, 0.2]],
        vec![vec![0.1, 0.2, 0.3], vec![0.2, 0.0, 0.5], vec![0.1, 0.6, 0.7]],
    ])
    .unwrap()
}

/// `A_i = 1 e_iᵀ` for `i = 1..n`.
pub fn one_column_set(n: usize) -> MatrixSet {
    MatrixSet::new((0..n).map(|i| DMatrix::from_fn(n, n, |_, c| if c == i { 1.0 } else { 0.0 })).collect()).unwrap()
}

pub fn g5() -> LabeledGraph {
    LabeledGraph::from_atoms(
        2,
        &["a", "b", "c", "d"],
        &[
            ("d", "d", 2),
            ("a", "b", 1),
            ("b", "a", 1),
            ("b", "c", 1),
            ("b", "d", 1),
            ("c", "d", 1),
            ("d", "c", 2),
            ("d", "a", 2),
        ],
    )
    .unwrap()
}

fn subset(names: &[&str]) -> NodeId {
    NodeId::subset(names.iter().map(|&s| NodeId::atom(s)).collect())
}

/// The two-node component of the max lift of [`g5`] on `{a,c,d}` and
/// `{b,d}`.
pub fn g6() -> LabeledGraph {
    let lifted = max_lift(&g5()).unwrap();
    let keep: Vec<usize> =
        [subset(&["a", "c", "d"]), subset(&["b", "d"])].iter().map(|n| lifted.index_of(n).unwrap()).collect();
    lifted.induced_subgraph(&keep)
}

pub fn g6_explicit() -> LabeledGraph {
    let x = subset(&["a", "c", "d"]);
    let y = subset(&["b", "d"]);
    LabeledGraph::new(
        2,
        vec![x.clone(), y.clone()],
        vec![(x.clone(), x.clone(), 2), (x.clone(), y.clone(), 1), (y.clone(), x.clone(), 1), (y, x, 2)],
    )
    .unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Complete,
    CoComplete,
    Any,
}

fn atom_names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("s{i}")).collect()
}

fn build(m: u32, k: usize, edges: &[(usize, usize, Label)]) -> LabeledGraph {
    let names = atom_names(k);
    LabeledGraph::new(
        m,
        names.iter().map(NodeId::atom).collect(),
        edges.iter().map(|&(a, b, l)| (NodeId::atom(&names[a]), NodeId::atom(&names[b]), l)),
    )
    .unwrap()
}

/// A random path-complete graph with `k` nodes on `m` letters. Complete and
/// co-complete shapes get one forced edge per (node, label) plus noise; the
/// general shape is rejection-sampled.
pub fn random_path_complete<R: Rng>(rng: &mut R, k: usize, m: u32, shape: Shape) -> LabeledGraph {
    loop {
        let density = rng.gen_range(0.1..0.6);
        let mut edges = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for l in 1..=m {
                    if rng.gen_bool(density) {
                        edges.push((a, b, l));
                    }
                }
            }
        }
        for s in 0..k {
            for l in 1..=m {
                let other = rng.gen_range(0..k);
                match shape {
                    Shape::Complete => edges.push((s, other, l)),
                    Shape::CoComplete => edges.push((other, s, l)),
                    Shape::Any => {}
                }
            }
        }
        let g = build(m, k, &edges);
        if is_path_complete(&g) {
            return g;
        }
    }
}

/// i.i.d. uniform entries, rescaled so that the depth-4 product bound lies
/// in `[0.5, 2]`.
pub fn random_matrix_set<R: Rng>(rng: &mut R, n: usize, m: usize) -> MatrixSet {
    let raw = MatrixSet::new((0..m).map(|_| DMatrix::from_fn(n, n, |_, _| rng.gen::<f64>())).collect()).unwrap();
    let (_, upper) = brute_force_bounds(&raw, 4).unwrap();
    let target = rng.gen_range(0.5..2.0);
    MatrixSet::new(raw.matrices().iter().map(|a| a * (target / upper)).collect()).unwrap()
}

/// Permutation matrices with positive weights; their inverses are
/// nonnegative.
pub fn random_monomial_set<R: Rng>(rng: &mut R, n: usize, m: usize) -> MatrixSet {
    let matrices = (0..m)
        .map(|_| {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..1.5)).collect();
            DMatrix::from_fn(n, n, |r, c| if perm[r] == c { weights[r] } else { 0.0 })
        })
        .collect();
    MatrixSet::new(matrices).unwrap()
}

/// Every labeled graph on `k` nodes over `m` letters, by edge bitmask.
pub fn all_graphs(k: usize, m: u32) -> impl Iterator<Item = (LabeledGraph, Vec<(usize, usize, Label)>)> {
    let slots: Vec<(usize, usize, Label)> =
        (0..k).flat_map(|a| (0..k).flat_map(move |b| (1..=m).map(move |l| (a, b, l)))).collect();
    let count = 1u64 << slots.len();
    (0..count).map(move |mask| {
        let edges: Vec<_> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        (build(m, k, &edges), edges)
    })
}
