//! JSON output. Struct field order is the key order on the wire, and every
//! rational is a string, so equal inputs give equal bytes apart from the
//! wall time.

use robust_paths::model::{CostVector, Path};
use robust_paths::owa::{format_rational, OwaWeights, Rational};
use robust_paths::search::{PruneEvent, SearchStats};
use robust_paths::{DominanceVerdict, LorenzVector, ScenarioGraph};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolutionOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistics: Option<SearchStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prunes: Option<Vec<PruneEvent>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominance: Option<DominanceOut>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            graph: None,
            mode: None,
            heuristic: None,
            weights: None,
            oracle: None,
            solutions: None,
            statistics: None,
            trace: None,
            prunes: None,
            comparison: None,
            decision: None,
            dominance: None,
            wall_time_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Serialize)]
pub struct GraphInfo {
    pub nodes: usize,
    pub arcs: usize,
    pub scenarios: usize,
    pub source: String,
    pub goals: Vec<String>,
    pub strictly_positive: bool,
    pub is_dag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl GraphInfo {
    pub fn of(graph: &ScenarioGraph) -> Self {
        GraphInfo {
            nodes: graph.node_count(),
            arcs: graph.arcs().len(),
            scenarios: graph.scenario_count(),
            source: graph.node_name(graph.source()).to_string(),
            goals: graph.goals().iter().map(|&g| graph.node_name(g).to_string()).collect(),
            strictly_positive: graph.strictly_positive(),
            is_dag: graph.is_dag(),
            meta: graph.meta().cloned(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WeightsInfo {
    pub phi: Vec<String>,
    pub weights: Vec<String>,
}

impl WeightsInfo {
    pub fn of(w: &OwaWeights) -> Self {
        WeightsInfo {
            phi: w.phi().iter().map(format_rational).collect(),
            weights: w.weights().iter().map(format_rational).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleInfo {
    /// Always true; marks answers that come from full path enumeration.
    pub exhaustive: bool,
    pub paths_enumerated: usize,
    pub max_paths: usize,
}

#[derive(Debug, Serialize)]
pub struct SolutionOut {
    pub nodes: Vec<String>,
    pub cost: CostVector,
    pub lorenz: LorenzVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub owa_value: Option<String>,
    /// Oracle Lorenz classes: every distinct cost vector in the class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<CostVector>>,
}

impl SolutionOut {
    pub fn of(graph: &ScenarioGraph, path: &Path, value: Option<&Rational>) -> Self {
        SolutionOut {
            nodes: path.node_names(graph),
            cost: path.cost().clone(),
            lorenz: robust_paths::lorenz_vector(path.cost()),
            owa_value: value.map(format_rational),
            members: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SetDiff {
    pub agree: bool,
    pub search: Vec<LorenzVector>,
    pub oracle: Vec<LorenzVector>,
    /// In the oracle frontier but not found by the search.
    pub missing: Vec<LorenzVector>,
    /// Returned by the search but not in the oracle frontier.
    pub extra: Vec<LorenzVector>,
}

#[derive(Debug, Serialize)]
pub struct OwaDiff {
    pub agree: bool,
    pub search: Option<String>,
    pub oracle: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Comparison {
    pub agree: bool,
    pub oracle_paths: usize,
    pub lorenz: SetDiff,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub owa: Option<OwaDiff>,
}

#[derive(Debug, Serialize)]
pub struct PartitionInfo {
    pub sizes: Vec<u64>,
    pub scale: u64,
}

#[derive(Debug, Serialize)]
pub struct DecisionOut {
    pub holds: bool,
    pub target: CostVector,
    pub target_lorenz: LorenzVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionInfo>,
    pub witness: Option<SolutionOut>,
}

#[derive(Debug, Serialize)]
pub struct OwaPair {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Serialize)]
pub struct DominanceOut {
    pub x: CostVector,
    pub y: CostVector,
    pub lorenz_x: LorenzVector,
    pub lorenz_y: LorenzVector,
    pub weak_pareto: bool,
    pub pareto: bool,
    pub pareto_verdict: DominanceVerdict,
    pub weak_lorenz: bool,
    pub strict_lorenz: bool,
    pub lorenz_verdict: DominanceVerdict,
    /// `less` means L(x) comes first in the search's priority order.
    pub lex: &'static str,
    pub sum_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub owa: Option<OwaPair>,
}
