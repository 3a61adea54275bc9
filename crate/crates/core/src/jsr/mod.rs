//! Joint spectral radius estimates: product enumeration, the De Bruijn
//! hierarchy of primal and dual copositive bounds, and the common Lyapunov
//! function read off a certificate on a complete graph.

mod products;

use std::fmt;

use rand::Rng;

use crate::copositive::{dual_eval, mat_vec, primal_eval, verify_certificate, Certificate, Flavor, MatrixSet};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::lifts::de_bruijn;
use crate::lp::{rho_bound, DEFAULT_TOL};

pub use products::{brute_force_bounds, spectral_radius, MAX_PRODUCTS, MAX_SQUARINGS};

/// Largest De Bruijn graph the hierarchy will build by default (`2^7`).
pub const DEFAULT_MAX_NODES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HierarchyConfig {
    /// Bisection tolerance of every step.
    pub tol: f64,
    /// Cap on the node count `M^{l-1}` of a level.
    pub max_nodes: usize,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        HierarchyConfig { tol: DEFAULT_TOL, max_nodes: DEFAULT_MAX_NODES }
    }
}

/// One step of the hierarchy and the running bracket after it.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyRow {
    /// `"(l)"` for the dual step, `"(l)ᵈ"` for the primal step.
    pub step: String,
    pub flavor: Flavor,
    pub level: usize,
    pub graph_size: usize,
    /// Smallest rate the bisection found feasible.
    pub rho_g: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The bracket became narrower than epsilon.
    Converged,
    /// `l_max` levels were run without reaching epsilon.
    LevelLimit,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Converged => "converged",
            StopReason::LevelLimit => "level-limit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyReport {
    pub rows: Vec<HierarchyRow>,
    pub final_interval: (f64, f64),
    pub epsilon: f64,
    pub stop: StopReason,
}

impl HierarchyReport {
    /// The upper end certifies asymptotic stability.
    pub fn stable(&self) -> bool {
        self.final_interval.1 < 1.0
    }

    /// The lower end certifies instability.
    pub fn unstable(&self) -> bool {
        self.final_interval.0 > 1.0
    }
}

pub fn hierarchy(a: &MatrixSet, epsilon: f64, l_max: usize) -> Result<HierarchyReport> {
    hierarchy_with(a, epsilon, l_max, HierarchyConfig::default())
}

/// Runs the De Bruijn hierarchy: at level `l` the dual bound on
/// `de_bruijn(M, l)` and the primal bound on its transpose, each of which
/// brackets the JSR in `[n^{-1/l} ρ_G, ρ_G]`.
///
/// The two steps of a level run on separate threads. Levels continue while
/// the bracket is at least `epsilon` wide and `l <= l_max`.
///
/// The running lower bound uses the largest rate the bisection proved
/// infeasible, the running upper bound the smallest rate proved feasible,
/// so the bracket stays valid up to solver round-off.
pub fn hierarchy_with(a: &MatrixSet, epsilon: f64, l_max: usize, config: HierarchyConfig) -> Result<HierarchyReport> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if epsilon == 0.0 && l_max == 0 {
        return Err(Error::InvalidParameter("need epsilon > 0 or l_max >= 1".into()));
    }
    let m = a.len() as u32;
    let n = a.dim() as f64;
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut rows = Vec::new();
    let mut l = 1;
    let stop = loop {
        if upper - lower < epsilon {
            break StopReason::Converged;
        }
        if l > l_max {
            break StopReason::LevelLimit;
        }
        let size = (m as u128).saturating_pow(l as u32 - 1);
        if size > config.max_nodes as u128 {
            return Err(Error::CapExceeded {
                what: "De Bruijn hierarchy level size",
                size,
                cap: config.max_nodes as u128,
            });
        }
        let g = de_bruijn(m, l)?;
        let gt = g.transpose();
        let (dual, primal) = std::thread::scope(|s| {
            let primal = s.spawn(|| rho_bound(&gt, a, Flavor::Primal, config.tol));
            let dual = rho_bound(&g, a, Flavor::Dual, config.tol);
            (dual, primal.join().expect("primal step panicked"))
        });
        let factor = n.powf(-1.0 / l as f64);
        for (bound, flavor, step) in
            [(dual?, Flavor::Dual, format!("({l})")), (primal?, Flavor::Primal, format!("({l})ᵈ"))]
        {
            lower = lower.max(factor * bound.lower);
            upper = upper.min(bound.upper);
            rows.push(HierarchyRow {
                step,
                flavor,
                level: l,
                graph_size: g.node_count(),
                rho_g: bound.upper,
                lower,
                upper,
            });
        }
        log::info!("level {l}: bracket [{lower}, {upper}]");
        l += 1;
    };
    Ok(HierarchyReport { rows, final_interval: (lower, upper), epsilon, stop })
}

/// Evaluates the common Lyapunov function a certificate induces: the minimum
/// of dual norms over nodes for a dual certificate, the maximum of primal
/// norms for a primal one.
pub fn common_function_value(cert: &Certificate, x: &[f64]) -> Result<f64> {
    let mut values = cert.vectors.values().map(|v| match cert.flavor {
        Flavor::Dual => dual_eval(v, x),
        Flavor::Primal => primal_eval(v, x),
    });
    let first = values.next().ok_or(Error::NoNodes)??;
    values.try_fold(first, |acc, v| {
        let v = v?;
        Ok(match cert.flavor {
            Flavor::Dual => acc.min(v),
            Flavor::Primal => acc.max(v),
        })
    })
}

/// Samples `samples` nonnegative points and checks `V(A_i x) <= γ V(x)` for
/// every mode, with `V` from [`common_function_value`].
///
/// Requires a dual certificate on a complete graph or a primal certificate on
/// a co-complete graph, and the certificate must verify on `g`.
pub fn common_function_check<R: Rng + ?Sized>(
    g: &LabeledGraph,
    a: &MatrixSet,
    cert: &Certificate,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    let (complete, co_complete) = g.completeness_flags();
    match cert.flavor {
        Flavor::Dual if !complete => {
            return Err(Error::InvalidParameter("a dual certificate needs a complete graph".into()))
        }
        Flavor::Primal if !co_complete => {
            return Err(Error::InvalidParameter("a primal certificate needs a co-complete graph".into()))
        }
        _ => {}
    }
    if !verify_certificate(g, a, cert, crate::copositive::DEFAULT_SLACK)?.is_ok() {
        return Err(Error::InvalidParameter("certificate does not verify on the graph".into()));
    }
    let n = a.dim();
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let vx = common_function_value(cert, &x)?;
        for m in a.matrices() {
            let y = mat_vec(m, &x);
            let vy = common_function_value(cert, &y)?;
            if vy > cert.gamma * vx + 1e-9 * (1.0 + vx) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
