//! Primal and dual copositive linear norms and the certificates built from
//! them.
//!
//! For `v > 0` the primal norm is `g_v(x) = vᵀx` and the dual norm is
//! `g*_v(x) = max_i x_i / v_i`, both on the nonnegative orthant. A labeled
//! edge `(a, b, i)` encodes `V_b(A_i x) <= γ V_a(x)`, which for these norms
//! reduces to a componentwise vector inequality:
//!
//! * primal: `A_iᵀ v_b <= γ v_a`
//! * dual:   `A_i v_a <= γ v_b`

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph, NodeId};
use crate::lifts::LiftKind;

/// Default absolute slack for edge inequalities.
pub const DEFAULT_SLACK: f64 = 1e-9;
/// Entries of transported vectors below this are treated as zero.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PositiveVector(Vec<f64>);

impl PositiveVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveEntry { index, value });
        }
        Ok(PositiveVector(entries))
    }

    pub fn ones(n: usize) -> Self {
        PositiveVector(vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * factor).collect())
    }

    /// Componentwise sum.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(PositiveVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn check_nonnegative(x: &[f64]) -> Result<()> {
    match x.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        Some((index, &value)) => Err(Error::NegativeEntry { index, value }),
        None => Ok(()),
    }
}

/// `vᵀx`.
pub fn primal_eval(v: &PositiveVector, x: &[f64]) -> Result<f64> {
    check_dim(v.dim(), x.len())?;
    check_nonnegative(x)?;
    Ok(v.0.iter().zip(x).map(|(a, b)| a * b).sum())
}

/// `max_i x_i / v_i`.
pub fn dual_eval(v: &PositiveVector, x: &[f64]) -> Result<f64> {
    check_dim(v.dim(), x.len())?;
    check_nonnegative(x)?;
    Ok(v.0.iter().zip(x).map(|(a, b)| b / a).fold(0.0, f64::max))
}

/// Componentwise minimum `v ∨ w`.
pub fn vee(v: &PositiveVector, w: &PositiveVector) -> Result<PositiveVector> {
    check_dim(v.dim(), w.dim())?;
    Ok(PositiveVector(v.0.iter().zip(&w.0).map(|(a, b)| a.min(*b)).collect()))
}

/// Matrix–vector product, summing each row left to right.
pub(crate) fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows()).map(|k| (0..m.ncols()).map(|j| m[(k, j)] * v[j]).sum()).collect()
}

/// A finite set of nonnegative square matrices of equal size.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet {
    n: usize,
    matrices: Vec<DMatrix<f64>>,
}

impl MatrixSet {
    pub fn new(matrices: Vec<DMatrix<f64>>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyMatrixSet)?;
        let n = first.nrows();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (index, m) in matrices.iter().enumerate() {
            check_dim(n, m.nrows())?;
            check_dim(n, m.ncols())?;
            if let Some(&value) = m.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::NegativeMatrixEntry { index, value });
            }
        }
        Ok(MatrixSet { n, matrices })
    }

    /// Builds a set from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<Vec<f64>>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for m in rows {
            let n = m.len();
            for row in m {
                check_dim(n, row.len())?;
            }
            out.push(DMatrix::from_fn(n, n, |r, c| m[r][c]));
        }
        Self::new(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of modes `M`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Matrix of mode `label` (1-based).
    pub fn get(&self, label: Label) -> &DMatrix<f64> {
        &self.matrices[(label - 1) as usize]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    pub fn transpose(&self) -> Self {
        MatrixSet { n: self.n, matrices: self.matrices.iter().map(|m| m.transpose()).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.matrices.iter().map(|m| (0..self.n).map(|r| (0..self.n).map(|c| m[(r, c)]).collect()).collect()).collect()
    }

    /// Largest row sum and largest column sum over all matrices; with every
    /// node vector equal to `1`, every edge inequality of either flavor holds
    /// at this rate.
    pub fn trivial_rate(&self) -> f64 {
        let mut best: f64 = 0.0;
        for m in &self.matrices {
            for k in 0..self.n {
                best = best.max(m.row(k).sum()).max(m.column(k).sum());
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Primal,
    Dual,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Primal => "primal",
            Flavor::Dual => "dual",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(Flavor::Primal),
            "dual" => Ok(Flavor::Dual),
            _ => Err(Error::Parse(format!("unknown flavor `{s}` (expected primal or dual)"))),
        }
    }
}

/// Largest violation `max_k (lhs_k - γ rhs_k)` of the edge inequality for
/// `(a, b)` labeled with matrix `a_mat`. Nonpositive means it holds exactly.
pub fn edge_excess(
    flavor: Flavor,
    a_mat: &DMatrix<f64>,
    v_a: &PositiveVector,
    v_b: &PositiveVector,
    gamma: f64,
) -> Result<f64> {
    check_dim(a_mat.nrows(), v_a.dim())?;
    check_dim(a_mat.nrows(), v_b.dim())?;
    check_dim(a_mat.nrows(), a_mat.ncols())?;
    let (lhs, rhs) = match flavor {
        Flavor::Dual => (mat_vec(a_mat, v_a.as_slice()), v_b.as_slice()),
        Flavor::Primal => (mat_vec(&a_mat.transpose(), v_b.as_slice()), v_a.as_slice()),
    };
    Ok(lhs.iter().zip(rhs).map(|(l, r)| l - gamma * r).fold(f64::NEG_INFINITY, f64::max))
}

/// Whether the edge inequality holds up to absolute slack `tol`.
pub fn edge_holds(
    flavor: Flavor,
    a_mat: &DMatrix<f64>,
    v_a: &PositiveVector,
    v_b: &PositiveVector,
    gamma: f64,
    tol: f64,
) -> Result<bool> {
    Ok(edge_excess(flavor, a_mat, v_a, v_b, gamma)? <= tol)
}

/// Node vectors and decay rate of a path-complete Lyapunov function made of
/// copositive norms.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub flavor: Flavor,
    pub gamma: f64,
    pub vectors: BTreeMap<NodeId, PositiveVector>,
}

impl Certificate {
    pub fn new(flavor: Flavor, gamma: f64, vectors: BTreeMap<NodeId, PositiveVector>) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!("decay rate must be finite and >= 0, got {gamma}")));
        }
        let mut dims = vectors.values().map(PositiveVector::dim);
        if let Some(first) = dims.next() {
            for d in dims {
                check_dim(first, d)?;
            }
        }
        Ok(Certificate { flavor, gamma, vectors })
    }

    pub fn vector(&self, node: &NodeId) -> Result<&PositiveVector> {
        self.vectors.get(node).ok_or_else(|| Error::MissingNodeVector(node.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub source: NodeId,
    pub target: NodeId,
    pub label: Label,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_alphabet(g: &LabeledGraph, a: &MatrixSet) -> Result<()> {
    if g.alphabet() as usize != a.len() {
        return Err(Error::AlphabetMismatch { left: g.alphabet(), right: a.len() as u32 });
    }
    Ok(())
}

/// Checks every edge inequality of `g` for the certificate's vectors.
pub fn verify_certificate(g: &LabeledGraph, a: &MatrixSet, cert: &Certificate, tol: f64) -> Result<VerificationReport> {
    check_alphabet(g, a)?;
    for node in g.nodes() {
        check_dim(a.dim(), cert.vector(node)?.dim())?;
    }
    let mut report = VerificationReport::default();
    for (src, dst, label) in g.labeled_edges() {
        let excess = edge_excess(cert.flavor, a.get(label), cert.vector(src)?, cert.vector(dst)?, cert.gamma)?;
        if excess > tol {
            report.violations.push(Violation { source: src.clone(), target: dst.clone(), label, excess });
        }
    }
    Ok(report)
}

fn floor_checked(node: &NodeId, entries: Vec<f64>) -> Result<PositiveVector> {
    match entries.iter().copied().find(|v| !(v.is_finite() && *v >= POSITIVITY_FLOOR)) {
        Some(value) => Err(Error::ZeroComponent { node: node.to_string(), value }),
        None => Ok(PositiveVector(entries)),
    }
}

/// Moves a certificate of `g` onto `kind.apply(g)` at the same decay rate.
///
/// | lift      | flavor | node vector                      |
/// |-----------|--------|----------------------------------|
/// | sum(T)    | both   | sum of member vectors            |
/// | max       | dual   | componentwise min of members     |
/// | min       | primal | componentwise min of members     |
/// | comp      | primal | `A_iᵀ v_s` for node `s∘i`        |
/// | backcomp  | primal | `A_i⁻ᵀ v_s` for node `s∘i`       |
///
/// The backward composition needs `A_i⁻¹` to exist and be entrywise
/// nonnegative, so that composing with the inverse keeps the orthant.
pub fn transport_certificate(
    cert: &Certificate,
    kind: LiftKind,
    g: &LabeledGraph,
    a: &MatrixSet,
) -> Result<Certificate> {
    check_alphabet(g, a)?;
    let supported = matches!(
        (kind, cert.flavor),
        (LiftKind::Sum(_), _)
            | (LiftKind::Max, Flavor::Dual)
            | (LiftKind::Min, Flavor::Primal)
            | (LiftKind::Comp, Flavor::Primal)
            | (LiftKind::BackComp, Flavor::Primal)
    );
    if !supported {
        return Err(Error::UnsupportedTransport { flavor: cert.flavor.name(), lift: kind.to_string() });
    }
    for node in g.nodes() {
        check_dim(a.dim(), cert.vector(node)?.dim())?;
    }

    let inverses = if kind == LiftKind::BackComp {
        let mut out = Vec::with_capacity(a.len());
        for (k, m) in a.matrices().iter().enumerate() {
            let inv = m.clone().try_inverse().ok_or(Error::SingularMatrix(k))?;
            if inv.iter().any(|v| *v < -POSITIVITY_FLOOR) {
                return Err(Error::InverseNotNonnegative(k));
            }
            out.push(inv.map(|v| v.max(0.0)).transpose());
        }
        out
    } else {
        Vec::new()
    };

    let lifted = kind.apply(g)?;
    let mut vectors = BTreeMap::new();
    for node in lifted.nodes() {
        let v = match (kind, node) {
            (LiftKind::Sum(_), NodeId::Multiset(members)) => {
                let mut acc = cert.vector(&members[0])?.clone();
                for m in &members[1..] {
                    acc = acc.sum(cert.vector(m)?)?;
                }
                acc
            }
            (LiftKind::Max | LiftKind::Min, NodeId::Subset(members)) => {
                let mut acc = cert.vector(&members[0])?.clone();
                for m in &members[1..] {
                    acc = vee(&acc, cert.vector(m)?)?;
                }
                acc
            }
            (LiftKind::Comp, NodeId::Comp(s, i)) => {
                floor_checked(node, mat_vec(&a.get(*i).transpose(), cert.vector(s)?.as_slice()))?
            }
            (LiftKind::BackComp, NodeId::Comp(s, i)) => {
                floor_checked(node, mat_vec(&inverses[(*i - 1) as usize], cert.vector(s)?.as_slice()))?
            }
            _ => return Err(Error::Internal(format!("unexpected lifted node `{node}` for {kind} lift"))),
        };
        vectors.insert(node.clone(), v);
    }
    Certificate::new(cert.flavor, cert.gamma, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::common_lyapunov_graph;

    fn pv(v: &[f64]) -> PositiveVector {
        PositiveVector::new(v.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> DMatrix<f64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |r, c| rows[r][c])
    }

    /// `A_i = 1 e_iᵀ`.
    fn one_column_set(n: usize) -> MatrixSet {
        MatrixSet::new((0..n).map(|i| DMatrix::from_fn(n, n, |_, c| if c == i { 1.0 } else { 0.0 })).collect()).unwrap()
    }

    #[test]
    fn evaluations() {
        assert_eq!(primal_eval(&pv(&[1.0, 1.0]), &[2.0, 3.0]).unwrap(), 5.0);
        assert_eq!(primal_eval(&pv(&[1.0, 2.0]), &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(primal_eval(&pv(&[2.0, 2.0]), &[1.0, 1.0]).unwrap(), 4.0);
        assert_eq!(dual_eval(&pv(&[1.0, 2.0]), &[2.0, 2.0]).unwrap(), 2.0);
        assert_eq!(dual_eval(&pv(&[1.0, 2.0]), &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(dual_eval(&pv(&[2.0, 2.0]), &[1.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(primal_eval(&pv(&[1.0]), &[1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(dual_eval(&pv(&[1.0, 1.0]), &[1.0, -2.0]), Err(Error::NegativeEntry { .. })));
        assert!(PositiveVector::new(vec![1.0, 0.0]).is_err());
        assert!(PositiveVector::new(vec![]).is_err());
    }

    #[test]
    fn vee_examples() {
        assert_eq!(vee(&pv(&[1.0, 3.0]), &pv(&[2.0, 2.0])).unwrap(), pv(&[1.0, 2.0]));
        assert_eq!(vee(&pv(&[1.0, 3.0]), &pv(&[1.0, 3.0])).unwrap(), pv(&[1.0, 3.0]));
        assert!(vee(&pv(&[1.0]), &pv(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn edge_predicate_examples() {
        let half = m(&[&[0.5]]);
        let one = pv(&[1.0]);
        assert!(edge_holds(Flavor::Dual, &half, &one, &one, 0.5, 0.0).unwrap());
        assert!(!edge_holds(Flavor::Dual, &half, &one, &one, 0.4, 0.0).unwrap());
        let set = one_column_set(3);
        for a in set.matrices() {
            assert!(edge_holds(Flavor::Dual, a, &PositiveVector::ones(3), &PositiveVector::ones(3), 1.0, 0.0).unwrap());
        }
    }

    #[test]
    fn edge_predicate_direction() {
        // dual: A v_a <= γ v_b; primal: Aᵀ v_b <= γ v_a
        let a = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let small = pv(&[1.0, 1.0]);
        let big = pv(&[2.0, 2.0]);
        assert!(edge_holds(Flavor::Dual, &a, &small, &big, 0.5, 0.0).unwrap());
        assert!(!edge_holds(Flavor::Dual, &a, &big, &small, 0.5, 0.0).unwrap());
        assert!(edge_holds(Flavor::Primal, &a, &big, &small, 0.5, 0.0).unwrap());
        assert!(!edge_holds(Flavor::Primal, &a, &small, &big, 0.5, 0.0).unwrap());
    }

    #[test]
    fn verify_examples() {
        let g0 = common_lyapunov_graph(3).unwrap();
        let set = one_column_set(3);
        let cert =
            Certificate::new(Flavor::Dual, 1.0, [(NodeId::atom("a"), PositiveVector::ones(3))].into_iter().collect())
                .unwrap();
        assert!(verify_certificate(&g0, &set, &cert, DEFAULT_SLACK).unwrap().is_ok());

        let g0 = common_lyapunov_graph(1).unwrap();
        let two = MatrixSet::new(vec![m(&[&[2.0]])]).unwrap();
        let cert =
            Certificate::new(Flavor::Dual, 1.0, [(NodeId::atom("a"), pv(&[1.0]))].into_iter().collect()).unwrap();
        let report = verify_certificate(&g0, &two, &cert, DEFAULT_SLACK).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert!((report.violations[0].excess - 1.0).abs() < 1e-15);
    }

    #[test]
    fn verify_errors() {
        let g0 = common_lyapunov_graph(2).unwrap();
        let set = one_column_set(2);
        let empty = Certificate::new(Flavor::Dual, 1.0, BTreeMap::new()).unwrap();
        assert!(matches!(verify_certificate(&g0, &set, &empty, 0.0), Err(Error::MissingNodeVector(_))));
        let three = one_column_set(3);
        let cert =
            Certificate::new(Flavor::Dual, 1.0, [(NodeId::atom("a"), PositiveVector::ones(2))].into_iter().collect())
                .unwrap();
        assert!(matches!(verify_certificate(&g0, &three, &cert, 0.0), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn matrix_set_validation() {
        assert_eq!(MatrixSet::new(vec![]), Err(Error::EmptyMatrixSet));
        assert!(MatrixSet::new(vec![m(&[&[-1.0]])]).is_err());
        assert!(MatrixSet::new(vec![m(&[&[1.0]]), m(&[&[1.0, 0.0], &[0.0, 1.0]])]).is_err());
        assert!(MatrixSet::from_rows(&[vec![vec![1.0, 2.0], vec![3.0]]]).is_err());
        let s = MatrixSet::from_rows(&[vec![vec![1.0, 2.0], vec![3.0, 4.0]]]).unwrap();
        assert_eq!(s.transpose().to_rows(), vec![vec![vec![1.0, 3.0], vec![2.0, 4.0]]]);
        assert_eq!(s.trivial_rate(), 7.0);
    }

    #[test]
    fn transport_rejects_unsupported_pairs() {
        let g0 = common_lyapunov_graph(1).unwrap();
        let set = MatrixSet::new(vec![m(&[&[0.5]])]).unwrap();
        let dual =
            Certificate::new(Flavor::Dual, 0.5, [(NodeId::atom("a"), pv(&[1.0]))].into_iter().collect()).unwrap();
        for kind in [LiftKind::Min, LiftKind::Comp, LiftKind::BackComp] {
            assert!(matches!(transport_certificate(&dual, kind, &g0, &set), Err(Error::UnsupportedTransport { .. })));
        }
        let primal = Certificate { flavor: Flavor::Primal, ..dual };
        assert!(matches!(
            transport_certificate(&primal, LiftKind::Max, &g0, &set),
            Err(Error::UnsupportedTransport { .. })
        ));
    }

    #[test]
    fn sum_one_transport_is_identity_on_vectors() {
        let g = LabeledGraph::from_atoms(1, &["a", "b"], &[("a", "b", 1), ("b", "a", 1)]).unwrap();
        let set = MatrixSet::new(vec![m(&[&[0.5, 0.1], &[0.2, 0.3]])]).unwrap();
        let cert = Certificate::new(
            Flavor::Dual,
            1.0,
            [(NodeId::atom("a"), pv(&[1.0, 2.0])), (NodeId::atom("b"), pv(&[3.0, 1.5]))].into_iter().collect(),
        )
        .unwrap();
        let moved = transport_certificate(&cert, LiftKind::Sum(1), &g, &set).unwrap();
        for (node, v) in &cert.vectors {
            assert_eq!(moved.vectors[&NodeId::multiset(vec![node.clone()])], *v);
        }
    }

    #[test]
    fn transport_errors_for_comp_and_backcomp() {
        let g0 = common_lyapunov_graph(1).unwrap();
        let primal = |gamma| {
            Certificate::new(Flavor::Primal, gamma, [(NodeId::atom("a"), pv(&[1.0, 1.0]))].into_iter().collect())
                .unwrap()
        };
        // zero column kills a component of Aᵀ v
        let zero_col = MatrixSet::new(vec![m(&[&[0.5, 0.0], &[0.5, 0.0]])]).unwrap();
        assert!(matches!(
            transport_certificate(&primal(1.0), LiftKind::Comp, &g0, &zero_col),
            Err(Error::ZeroComponent { .. })
        ));
        assert!(matches!(
            transport_certificate(&primal(1.0), LiftKind::BackComp, &g0, &zero_col),
            Err(Error::SingularMatrix(0))
        ));
        let mixing = MatrixSet::new(vec![m(&[&[1.0, 1.0], &[0.0, 1.0]])]).unwrap();
        assert!(matches!(
            transport_certificate(&primal(2.0), LiftKind::BackComp, &g0, &mixing),
            Err(Error::InverseNotNonnegative(0))
        ));
        let monomial = MatrixSet::new(vec![m(&[&[0.0, 0.5], &[0.25, 0.0]])]).unwrap();
        let moved = transport_certificate(&primal(0.5), LiftKind::BackComp, &g0, &monomial).unwrap();
        assert_eq!(moved.vectors.len(), 1);
    }
}
