//! Structured JSON documents written by the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{Angle, ConstructionPlan, Parameter, PlacementStep, SweepResult};
use crate::embed::{Embedding, SolveOptions, Verification};
use crate::graph::{Graph, GraphError};
use crate::groebner::{GroebnerResult, Stats, Status};
use crate::poly::OrderKind;
use crate::system::ConstraintSystem;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document graph: {0}")]
    Graph(#[from] GraphError),
    #[error("graph hash mismatch: document says {stored}, edges give {actual}")]
    HashMismatch { stored: String, actual: String },
    #[error("vertex list and coordinates disagree")]
    Shape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexCoord {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub max_edge_deviation: f64,
    pub min_separation: f64,
    pub residual: f64,
}

/// Coordinates are written as shortest round-trip decimals, so reading a
/// document back reproduces every bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    /// "embedding" for solver or refine output, "candidate" for bisection
    /// results, which are numerical evidence rather than proof.
    pub kind: String,
    pub graph_name: String,
    pub graph_hash: String,
    pub vertices: Vec<VertexCoord>,
    pub edges: Vec<(String, String)>,
    pub metrics: Metrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolveOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, f64>,
}

impl EmbeddingDoc {
    pub fn new(kind: &str, graph_name: &str, emb: &Embedding) -> Self {
        let g = emb.graph();
        EmbeddingDoc {
            kind: kind.to_string(),
            graph_name: graph_name.to_string(),
            graph_hash: g.hash(),
            vertices: g
                .labels()
                .iter()
                .zip(emb.coords())
                .map(|(l, c)| VertexCoord { label: l.clone(), x: c[0], y: c[1] })
                .collect(),
            edges: g.edges().iter().map(|&(u, v)| (g.label(u).to_string(), g.label(v).to_string())).collect(),
            metrics: Metrics {
                max_edge_deviation: emb.max_edge_deviation(),
                min_separation: emb.min_separation(),
                residual: emb.residual(),
            },
            verification: None,
            solver: None,
            seed: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn graph(&self) -> Result<Graph, DocError> {
        let labels: Vec<&str> = self.vertices.iter().map(|v| v.label.as_str()).collect();
        let mut idx = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            idx.insert(*l, i);
        }
        let mut edges = Vec::new();
        for (u, v) in &self.edges {
            let (Some(&a), Some(&b)) = (idx.get(u.as_str()), idx.get(v.as_str())) else {
                return Err(DocError::Shape);
            };
            edges.push((a, b));
        }
        let g = Graph::new(labels, edges)?;
        let actual = g.hash();
        if actual != self.graph_hash {
            return Err(DocError::HashMismatch { stored: self.graph_hash.clone(), actual });
        }
        Ok(g)
    }

    pub fn coords(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [v.x, v.y]).collect()
    }

    pub fn embedding(&self) -> Result<Embedding, DocError> {
        let g = self.graph()?;
        Embedding::new(&g, self.coords()).map_err(|_| DocError::Shape)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub graph_name: String,
    pub graph_hash: String,
    pub order: OrderKind,
    /// Variable names from highest to lowest precedence.
    pub variables: Vec<String>,
    pub pins: Vec<String>,
    pub status: Status,
    /// Integer-cleared display form, sorted by leading term, largest first.
    pub basis: Vec<String>,
    pub stats: Stats,
}

impl BasisDoc {
    pub fn new(graph_name: &str, sys: &ConstraintSystem, result: &GroebnerResult) -> Self {
        BasisDoc {
            graph_name: graph_name.to_string(),
            graph_hash: sys.graph.hash(),
            order: result.order.kind,
            variables: result.order.precedence().iter().map(|&v| sys.vars.name(v).to_string()).collect(),
            pins: sys.pin_relations(),
            status: result.status,
            basis: result.basis.iter().map(|p| p.display(&sys.vars, &result.order)).collect(),
            stats: result.stats,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub name: String,
    pub graph_hash: String,
    pub steps: Vec<PlacementStep>,
    pub parameters: Vec<Parameter>,
    pub target: (String, String),
}

impl PlanDoc {
    pub fn new(plan: &ConstructionPlan) -> Self {
        PlanDoc {
            name: plan.name.clone(),
            graph_hash: plan.graph.hash(),
            steps: plan.steps.clone(),
            parameters: plan.parameters.clone(),
            target: plan.target.clone(),
        }
    }

    pub fn rebuild(&self, graph: Graph) -> Result<ConstructionPlan, crate::construct::PlanError> {
        ConstructionPlan::new(
            &self.name,
            graph,
            self.steps.clone(),
            self.parameters.clone(),
            (&self.target.0, &self.target.1),
        )
    }
}

/// Human-readable listing of a plan, one step per line.
pub fn plan_text(plan: &ConstructionPlan) -> String {
    let mut s = format!("plan {} (target {}-{})\n", plan.name, plan.target.0, plan.target.1);
    for p in &plan.parameters {
        s += &format!("param {} = {} in [{}, {}]\n", p.name, p.default, p.lo, p.hi);
    }
    for (i, step) in plan.steps.iter().enumerate() {
        let line = match step {
            PlacementStep::FixPoint { vertex, x, y } => format!("{vertex} = ({x}, {y})"),
            PlacementStep::PolarFrom { vertex, anchor, angle } => {
                let a = match angle {
                    Angle::Param(p) => p.clone(),
                    Angle::Const(c) => c.to_string(),
                };
                format!("{vertex} = polar({anchor}, {a})")
            }
            PlacementStep::CircleCircle { vertex, anchor_a, anchor_b, branch } => {
                let b = match branch {
                    crate::construct::Branch::Plus => '+',
                    crate::construct::Branch::Minus => '-',
                };
                format!("{vertex} = cc({anchor_a}, {anchor_b}, {b})")
            }
        };
        s += &format!("{i:>2}: {line}\n");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDoc {
    pub plan: String,
    pub variant: usize,
    pub axes: Vec<String>,
    pub parameter_names: Vec<String>,
    pub result: SweepResult,
}

/// Tab-separated scan table: parameter values, d, min separation, status.
pub fn sweep_table(names: &[String], result: &SweepResult) -> String {
    let mut s = names.join("\t") + "\td\tmin_separation\tstatus\n";
    for smp in &result.samples {
        for p in &smp.params {
            s += &format!("{p}\t");
        }
        match (smp.target_distance, smp.min_separation, &smp.failure) {
            (Some(d), Some(m), _) => s += &format!("{d}\t{m}\tok\n"),
            (_, _, Some(f)) => s += &format!("nan\tnan\tfail@{}:{}\n", f.step_index, f.vertex),
            _ => s += "nan\tnan\tfail\n",
        }
    }
    s
}

/// What a run did, with enough detail to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub input_hashes: BTreeMap<String, String>,
    pub options: serde_json::Value,
    pub tool_version: String,
    pub outcome: String,
    pub exit_code: i32,
    pub outputs: Vec<String>,
}

/// Lowercase hex SHA-256 of raw input bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
