//! Feasibility of the edge inequalities at a fixed decay rate, and the
//! bisection that turns it into the bound `ρ_{flavor,G}(A)`.

pub mod simplex;

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::copositive::{verify_certificate, Certificate, Flavor, MatrixSet, PositiveVector, DEFAULT_SLACK};
use crate::error::{Error, Result};
use crate::graph::{is_path_complete, Label, LabeledGraph};
use simplex::{phase_one, Phase1};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_PIVOTS: usize = 1_000_000;

/// One block of `n` scalar inequalities `M v_mover <= γ v_bound`, where `M`
/// is `A_label` (dual) or `A_labelᵀ` (primal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeConstraint {
    pub mover: usize,
    pub bound: usize,
    pub label: Label,
}

/// The linear system for fixed `γ`: node vectors stacked into `|S|·n`
/// variables, one row per scalar edge inequality, and the normalization
/// `v_s >= 1`.
///
/// Homogeneity of the edge inequalities makes `v_s >= 1` equivalent to
/// `v_s > 0`: any strictly positive solution scales into the normalized set.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityProblem {
    pub nodes: usize,
    pub n: usize,
    pub constraints: Vec<EdgeConstraint>,
    matrices: Vec<DMatrix<f64>>,
}

impl FeasibilityProblem {
    pub fn new(g: &LabeledGraph, a: &MatrixSet, flavor: Flavor) -> Result<Self> {
        if g.alphabet() as usize != a.len() {
            return Err(Error::AlphabetMismatch { left: g.alphabet(), right: a.len() as u32 });
        }
        let mut constraints: Vec<EdgeConstraint> = g
            .edges()
            .iter()
            .map(|e| match flavor {
                Flavor::Dual => EdgeConstraint { mover: e.source, bound: e.target, label: e.label },
                Flavor::Primal => EdgeConstraint { mover: e.target, bound: e.source, label: e.label },
            })
            .collect();
        // canonical order, so that (G, A, primal) and (Gᵀ, Aᵀ, dual) produce
        // the very same rows
        constraints.sort();
        let matrices = match flavor {
            Flavor::Dual => a.matrices().to_vec(),
            Flavor::Primal => a.transpose().matrices().to_vec(),
        };
        Ok(FeasibilityProblem { nodes: g.node_count(), n: a.dim(), constraints, matrices })
    }

    pub fn variables(&self) -> usize {
        self.nodes * self.n
    }

    /// Rows of `G y <= h` after substituting `v = 1 + y`.
    pub fn rows(&self, gamma: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.n;
        let mut rows = Vec::with_capacity(self.constraints.len() * n);
        let mut rhs = Vec::with_capacity(self.constraints.len() * n);
        for c in &self.constraints {
            let m = &self.matrices[(c.label - 1) as usize];
            for k in 0..n {
                let mut row = vec![0.0; self.variables()];
                for j in 0..n {
                    row[c.mover * n + j] += m[(k, j)];
                }
                row[c.bound * n + k] -= gamma;
                let h = -row.iter().sum::<f64>();
                rows.push(row);
                rhs.push(h);
            }
        }
        (rows, rhs)
    }
}

fn certificate_from(g: &LabeledGraph, flavor: Flavor, gamma: f64, n: usize, y: &[f64]) -> Result<Certificate> {
    let vectors: BTreeMap<_, _> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(s, node)| {
            let v = y[s * n..(s + 1) * n].iter().map(|v| 1.0 + v).collect();
            PositiveVector::new(v).map(|v| (node.clone(), v))
        })
        .collect::<Result<_>>()?;
    Certificate::new(flavor, gamma, vectors)
}

/// Looks for node vectors satisfying every edge inequality of `g` at rate
/// `gamma`. Returns the witness, or `None` when the system is infeasible.
///
/// A witness is only returned if it also passes [`verify_certificate`] with
/// the default slack, so callers never receive a certificate that fails the
/// inequalities through simplex round-off.
pub fn feasible(g: &LabeledGraph, a: &MatrixSet, flavor: Flavor, gamma: f64) -> Result<Option<Certificate>> {
    let problem = FeasibilityProblem::new(g, a, flavor)?;
    solve(&problem, g, a, flavor, gamma, DEFAULT_MAX_PIVOTS)
}

fn solve(
    problem: &FeasibilityProblem,
    g: &LabeledGraph,
    a: &MatrixSet,
    flavor: Flavor,
    gamma: f64,
    max_pivots: usize,
) -> Result<Option<Certificate>> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("decay rate must be finite and >= 0, got {gamma}")));
    }
    let (rows, rhs) = problem.rows(gamma);
    match phase_one(&rows, &rhs, problem.variables(), max_pivots)? {
        Phase1::Infeasible => Ok(None),
        Phase1::Feasible(y) => {
            let cert = certificate_from(g, flavor, gamma, problem.n, &y)?;
            if verify_certificate(g, a, &cert, DEFAULT_SLACK)?.is_ok() {
                Ok(Some(cert))
            } else {
                log::debug!("discarding LP witness at γ = {gamma}: fails verification");
                Ok(None)
            }
        }
    }
}

/// Result of [`rho_bound`].
#[derive(Clone, Debug, PartialEq)]
pub struct RhoBound {
    /// Midpoint of the final bracket.
    pub gamma_star: f64,
    /// Largest rate found infeasible (or 0).
    pub lower: f64,
    /// Smallest rate found feasible; `certificate` is feasible here.
    pub upper: f64,
    pub certificate: Certificate,
    /// Every probed rate and whether it was feasible, in probing order.
    pub trace: Vec<(f64, bool)>,
}

/// Approximates `inf { γ : edge inequalities of g feasible at γ }` to within
/// `tol` by bisection.
///
/// The search starts from `[0, r]` with `r` the largest row or column sum of
/// any matrix, where all-ones vectors are feasible on every graph.
pub fn rho_bound(g: &LabeledGraph, a: &MatrixSet, flavor: Flavor, tol: f64) -> Result<RhoBound> {
    rho_bound_with(g, a, flavor, tol, DEFAULT_MAX_PIVOTS)
}

pub fn rho_bound_with(
    g: &LabeledGraph,
    a: &MatrixSet,
    flavor: Flavor,
    tol: f64,
    max_pivots: usize,
) -> Result<RhoBound> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("bisection tolerance must be positive, got {tol}")));
    }
    if !is_path_complete(g) {
        log::warn!("graph is not path-complete; the bound does not certify the joint spectral radius");
    }
    let problem = FeasibilityProblem::new(g, a, flavor)?;
    let mut lower = 0.0;
    let mut upper = a.trivial_rate();
    let mut trace = Vec::new();
    let mut certificate = solve(&problem, g, a, flavor, upper, max_pivots)?
        .ok_or_else(|| Error::Internal(format!("infeasible at the trivial rate {upper}")))?;
    trace.push((upper, true));
    while upper - lower > tol {
        let mid = 0.5 * (lower + upper);
        match solve(&problem, g, a, flavor, mid, max_pivots)? {
            Some(cert) => {
                upper = mid;
                certificate = cert;
                trace.push((mid, true));
            }
            None => {
                lower = mid;
                trace.push((mid, false));
            }
        }
    }
    Ok(RhoBound { gamma_star: 0.5 * (lower + upper), lower, upper, certificate, trace })
}
