//! JSON formats for graphs, matrix sets and certificates, and the CSV and
//! JSON forms of a hierarchy report.
//!
//! ```json
//! {"alphabet": 2, "nodes": ["a", "b"], "edges": [["a", "b", 1], ["b", "a", 2]]}
//! {"n": 2, "matrices": [[[0.5, 0.1], [0.0, 0.3]], [[0.2, 0.0], [0.4, 0.1]]]}
//! {"flavor": "dual", "gamma": 0.9, "vectors": {"a": [1.0, 2.0], "b": [1.5, 1.0]}}
//! ```
//!
//! Node names use the string syntax of [`NodeId`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::copositive::{Certificate, Flavor, MatrixSet, PositiveVector};
use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph, NodeId};
use crate::jsr::HierarchyReport;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    alphabet: u32,
    nodes: Vec<String>,
    edges: Vec<(String, String, Label)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    n: usize,
    matrices: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    flavor: String,
    gamma: f64,
    vectors: BTreeMap<String, Vec<f64>>,
}

fn parse_json<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn parse_node(s: &str) -> Result<NodeId> {
    s.parse()
}

pub fn graph_from_json(text: &str) -> Result<LabeledGraph> {
    let file: GraphFile = parse_json("graph", text)?;
    let nodes = file.nodes.iter().map(|s| parse_node(s)).collect::<Result<Vec<_>>>()?;
    let edges =
        file.edges.iter().map(|(a, b, l)| Ok((parse_node(a)?, parse_node(b)?, *l))).collect::<Result<Vec<_>>>()?;
    LabeledGraph::new(file.alphabet, nodes, edges)
}

pub fn graph_to_value(g: &LabeledGraph) -> Value {
    json!({
        "alphabet": g.alphabet(),
        "nodes": g.nodes().iter().map(|n| n.to_string()).collect::<Vec<_>>(),
        "edges": g.labeled_edges().map(|(a, b, l)| json!([a.to_string(), b.to_string(), l])).collect::<Vec<_>>(),
    })
}

pub fn graph_to_json(g: &LabeledGraph) -> String {
    serde_json::to_string_pretty(&graph_to_value(g)).expect("graph serializes")
}

pub fn matrices_from_json(text: &str) -> Result<MatrixSet> {
    let file: MatrixFile = parse_json("matrix set", text)?;
    let set = MatrixSet::from_rows(&file.matrices)?;
    if set.dim() != file.n {
        return Err(Error::DimensionMismatch { expected: file.n, got: set.dim() });
    }
    Ok(set)
}

pub fn matrices_to_json(a: &MatrixSet) -> String {
    let file = MatrixFile { n: a.dim(), matrices: a.to_rows() };
    serde_json::to_string_pretty(&file).expect("matrix set serializes")
}

pub fn certificate_from_json(text: &str) -> Result<Certificate> {
    let file: CertificateFile = parse_json("certificate", text)?;
    let flavor: Flavor = file.flavor.parse()?;
    let vectors = file
        .vectors
        .into_iter()
        .map(|(k, v)| Ok((parse_node(&k)?, PositiveVector::new(v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Certificate::new(flavor, file.gamma, vectors)
}

pub fn certificate_to_value(cert: &Certificate) -> Value {
    let vectors: serde_json::Map<String, Value> =
        cert.vectors.iter().map(|(k, v)| (k.to_string(), json!(v.as_slice()))).collect();
    json!({ "flavor": cert.flavor.name(), "gamma": cert.gamma, "vectors": vectors })
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(&certificate_to_value(cert)).expect("certificate serializes")
}

pub const HIERARCHY_CSV_HEADER: &str = "step,kind,level,rho_G,lower,upper";

pub fn hierarchy_to_csv(report: &HierarchyReport) -> String {
    let mut out = String::from(HIERARCHY_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.step, r.flavor, r.level, r.rho_g, r.lower, r.upper);
    }
    out
}

pub fn hierarchy_to_value(report: &HierarchyReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "step": r.step,
                "kind": r.flavor.name(),
                "level": r.level,
                "graph_size": r.graph_size,
                "rho_G": r.rho_g,
                "lower": r.lower,
                "upper": r.upper,
            })
        })
        .collect();
    json!({
        "rows": rows,
        "final_interval": [report.final_interval.0, report.final_interval.1],
        "epsilon": report.epsilon,
        "stop": report.stop.to_string(),
        "stable": report.stable(),
        "unstable": report.unstable(),
    })
}
