//! Deterministic rendering of analysis results as text, JSON or CSV.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use pclf_core::graph::{LabeledGraph, MinimalityReport, NodeId, SimulationMap};
use pclf_core::io::{certificate_to_value, graph_to_value, hierarchy_to_csv, hierarchy_to_value};
use pclf_core::jsr::HierarchyReport;
use pclf_core::lp::RhoBound;
use pclf_core::Flavor;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`; expected text, json or csv")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

pub struct CheckReport {
    pub path_complete: bool,
    pub complete: bool,
    pub co_complete: bool,
    pub components: Vec<Vec<NodeId>>,
    pub path_complete_components: Vec<Vec<NodeId>>,
    pub minimality: MinimalityReport,
}

pub struct BoundReport {
    pub flavor: Flavor,
    pub tol: f64,
    pub path_complete: bool,
    pub bound: RhoBound,
}

pub struct OracleReport {
    pub depth: usize,
    pub lower: f64,
    pub upper: f64,
}

pub enum Report {
    Check(CheckReport),
    Graph(LabeledGraph),
    Simulation(Option<SimulationMap>),
    Bound(BoundReport),
    Hierarchy(HierarchyReport),
    Oracle(OracleReport),
}

impl Report {
    fn kind(&self) -> &'static str {
        match self {
            Report::Check(_) => "check",
            Report::Graph(_) => "graph",
            Report::Simulation(_) => "simulation",
            Report::Bound(_) => "bound",
            Report::Hierarchy(_) => "hierarchy",
            Report::Oracle(_) => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsupportedFormat {
    pub report: &'static str,
    pub format: Format,
}

impl fmt::Display for UnsupportedFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} reports cannot be rendered as {}", self.report, self.format)
    }
}

impl std::error::Error for UnsupportedFormat {}

/// Six significant digits; scientific notation outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exponent) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn node_list(nodes: &[NodeId]) -> String {
    nodes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn node_lists(groups: &[Vec<NodeId>]) -> Value {
    json!(groups.iter().map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn render_report(report: &Report, format: Format) -> Result<String, UnsupportedFormat> {
    let unsupported = || UnsupportedFormat { report: report.kind(), format };
    match format {
        Format::Json => {
            let value = to_json(report);
            Ok(serde_json::to_string_pretty(&value).expect("reports serialize") + "\n")
        }
        Format::Text => Ok(to_text(report)),
        Format::Csv => match report {
            Report::Hierarchy(h) => Ok(hierarchy_to_csv(h)),
            _ => Err(unsupported()),
        },
    }
}

fn to_json(report: &Report) -> Value {
    match report {
        Report::Check(c) => json!({
            "path_complete": c.path_complete,
            "complete": c.complete,
            "co_complete": c.co_complete,
            "strongly_connected_components": node_lists(&c.components),
            "path_complete_components": node_lists(&c.path_complete_components),
            "strongly_connected": c.minimality.strongly_connected,
            "edge_minimal": c.minimality.edge_minimal,
            "diagnostic": c.minimality.diagnostic,
        }),
        Report::Graph(g) => graph_to_value(g),
        Report::Simulation(sim) => {
            let map: serde_json::Map<String, Value> =
                sim.iter().flat_map(|s| s.mapping.iter()).map(|(k, v)| (k.to_string(), json!(v.to_string()))).collect();
            json!({ "simulates": sim.is_some(), "map": map })
        }
        Report::Bound(b) => json!({
            "flavor": b.flavor.name(),
            "rho": b.bound.gamma_star,
            "lower": b.bound.lower,
            "upper": b.bound.upper,
            "tol": b.tol,
            "path_complete": b.path_complete,
            "certificate": certificate_to_value(&b.bound.certificate),
        }),
        Report::Hierarchy(h) => hierarchy_to_value(h),
        Report::Oracle(o) => json!({ "depth": o.depth, "lower": o.lower, "upper": o.upper }),
    }
}

fn to_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Check(c) => {
            let _ = writeln!(out, "path-complete: {}", c.path_complete);
            let _ = writeln!(out, "complete: {}", c.complete);
            let _ = writeln!(out, "co-complete: {}", c.co_complete);
            let _ = writeln!(out, "strongly connected components: {}", c.components.len());
            for comp in &c.components {
                let _ = writeln!(out, "  {{{}}}", node_list(comp));
            }
            if c.path_complete_components.is_empty() {
                out.push_str("no path-complete components\n");
            } else {
                let _ = writeln!(out, "path-complete components: {}", c.path_complete_components.len());
                for comp in &c.path_complete_components {
                    let _ = writeln!(out, "  {{{}}}", node_list(comp));
                }
            }
            let _ = writeln!(out, "strongly connected: {}", c.minimality.strongly_connected);
            let _ = writeln!(out, "edge-minimal: {}", c.minimality.edge_minimal);
            if let Some(d) = &c.minimality.diagnostic {
                let _ = writeln!(out, "note: {d}");
            }
        }
        Report::Graph(g) => {
            let _ = writeln!(out, "alphabet: {}", g.alphabet());
            let _ = writeln!(out, "nodes: {}", g.node_count());
            let _ = writeln!(out, "edges: {}", g.edges().len());
            for (a, b, l) in g.labeled_edges() {
                let _ = writeln!(out, "  {a} -{l}-> {b}");
            }
        }
        Report::Simulation(sim) => {
            let _ = writeln!(out, "simulates: {}", sim.is_some());
            for (k, v) in sim.iter().flat_map(|s| s.mapping.iter()) {
                let _ = writeln!(out, "  {k} -> {v}");
            }
        }
        Report::Bound(b) => {
            let _ = writeln!(out, "flavor: {}", b.flavor);
            let _ = writeln!(out, "rho: {}", sig6(b.bound.gamma_star));
            let _ = writeln!(out, "bracket: [{}, {}]", sig6(b.bound.lower), sig6(b.bound.upper));
            if !b.path_complete {
                out.push_str("warning: graph is not path-complete; the bound does not certify the JSR\n");
            }
            let _ = writeln!(out, "certificate at rate {}:", sig6(b.bound.certificate.gamma));
            for (node, v) in &b.bound.certificate.vectors {
                let entries: Vec<String> = v.as_slice().iter().map(|x| sig6(*x)).collect();
                let _ = writeln!(out, "  {node}: [{}]", entries.join(", "));
            }
        }
        Report::Hierarchy(h) => {
            let _ = writeln!(
                out,
                "{:<7} {:<7} {:>5} {:>6} {:>10} {:>10} {:>10}",
                "step", "kind", "level", "nodes", "rho_G", "lower", "upper"
            );
            for r in &h.rows {
                let _ = writeln!(
                    out,
                    "{:<7} {:<7} {:>5} {:>6} {:>10} {:>10} {:>10}",
                    r.step,
                    r.flavor.name(),
                    r.level,
                    r.graph_size,
                    sig6(r.rho_g),
                    sig6(r.lower),
                    sig6(r.upper)
                );
            }
            let (lo, hi) = h.final_interval;
            let _ = writeln!(out, "interval: [{}, {}]", sig6(lo), sig6(hi));
            let _ = writeln!(out, "stop: {}", h.stop);
            let _ = writeln!(out, "stable: {}", h.stable());
            let _ = writeln!(out, "unstable: {}", h.unstable());
        }
        Report::Oracle(o) => {
            let _ = writeln!(out, "depth: {}", o.depth);
            let _ = writeln!(out, "lower: {}", sig6(o.lower));
            let _ = writeln!(out, "upper: {}", sig6(o.upper));
        }
    }
    out
}
