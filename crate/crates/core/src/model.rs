//! Scenario-valued graphs, cost vectors, paths and search labels.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dominance::LorenzVector;

/// Costs of an arc or a path, one non-negative integer per scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostVector(Vec<u64>);

impl CostVector {
    pub fn new(costs: Vec<u64>) -> Self {
        CostVector(costs)
    }

    pub fn zeros(m: usize) -> Self {
        CostVector(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum over all scenarios.
    pub fn total(&self) -> u128 {
        self.0.iter().map(|&c| u128::from(c)).sum()
    }

    /// Worst-case (largest) scenario cost; 0 for an empty vector.
    pub fn max_component(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise sum. Both vectors must have the same length.
    pub fn plus(&self, other: &CostVector) -> CostVector {
        debug_assert_eq!(self.len(), other.len());
        CostVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u64>> for CostVector {
    fn from(costs: Vec<u64>) -> Self {
        CostVector(costs)
    }
}

impl<const N: usize> From<[u64; N]> for CostVector {
    fn from(costs: [u64; N]) -> Self {
        CostVector(costs.to_vec())
    }
}

impl Add for &CostVector {
    type Output = CostVector;

    fn add(self, rhs: &CostVector) -> CostVector {
        self.plus(rhs)
    }
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[u64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str(")")
}

/// Problems found while checking a graph description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroScenarios,
    DuplicateNode { node: String },
    UnknownSource { node: String },
    EmptyGoalSet,
    UnknownGoal { node: String },
    BadArcEndpoint { arc: usize, node: String },
    CostArity { arc: usize, expected: usize, found: usize },
    NegativeCost { arc: usize, scenario: usize, value: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroScenarios => write!(f, "scenario count must be at least 1"),
            Violation::DuplicateNode { node } => write!(f, "duplicate node {node:?}"),
            Violation::UnknownSource { node } => write!(f, "source {node:?} is not a node"),
            Violation::EmptyGoalSet => write!(f, "goal set is empty"),
            Violation::UnknownGoal { node } => write!(f, "goal {node:?} is not a node"),
            Violation::BadArcEndpoint { arc, node } => {
                write!(f, "arc {arc}: endpoint {node:?} is not a node")
            }
            Violation::CostArity { arc, expected, found } => {
                write!(f, "arc {arc}: cost arity {found}, expected {expected}")
            }
            Violation::NegativeCost { arc, scenario, value } => {
                write!(f, "arc {arc}: negative cost {value} in scenario {scenario}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid graph: {}", join_violations(.0))]
    InvalidGraph(Vec<Violation>),
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("arc {0} does not exist")]
    UnknownArc(usize),
    #[error("arc sequence is disconnected at position {position}")]
    Disconnected { position: usize },
    #[error("no arc from {from:?} to {to:?}")]
    NoSuchArc { from: String, to: String },
    #[error("stored path cost {stored} differs from recomputed cost {recomputed}")]
    CostMismatch { stored: CostVector, recomputed: CostVector },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// On-disk form of a graph. Field order is the canonical key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub scenarios: usize,
    pub nodes: Vec<String>,
    pub source: String,
    pub goals: Vec<String>,
    pub arcs: Vec<ArcRecord>,
    /// Generator metadata; carried through untouched and never interpreted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcRecord {
    pub from: String,
    pub to: String,
    pub cost: Vec<i64>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical serialization: pretty-printed, keys in declaration order,
    /// trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph file serializes");
        s.push('\n');
        s
    }
}

/// Outcome of [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub strictly_positive: bool,
    pub is_dag: bool,
    pub violations: Vec<Violation>,
}

/// Checks a graph description without building it. Never fails; problems are
/// listed in the report.
pub fn validate_graph(file: &GraphFile) -> ValidationReport {
    let mut violations = Vec::new();
    if file.scenarios == 0 {
        violations.push(Violation::ZeroScenarios);
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, n) in file.nodes.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            violations.push(Violation::DuplicateNode { node: n.clone() });
        }
    }
    if !index.contains_key(file.source.as_str()) {
        violations.push(Violation::UnknownSource { node: file.source.clone() });
    }
    if file.goals.is_empty() {
        violations.push(Violation::EmptyGoalSet);
    }
    for g in &file.goals {
        if !index.contains_key(g.as_str()) {
            violations.push(Violation::UnknownGoal { node: g.clone() });
        }
    }
    let mut strictly_positive = true;
    let mut edges = Vec::with_capacity(file.arcs.len());
    for (i, arc) in file.arcs.iter().enumerate() {
        let mut endpoints_ok = true;
        for end in [&arc.from, &arc.to] {
            if !index.contains_key(end.as_str()) {
                violations.push(Violation::BadArcEndpoint { arc: i, node: end.clone() });
                endpoints_ok = false;
            }
        }
        if arc.cost.len() != file.scenarios {
            violations.push(Violation::CostArity {
                arc: i,
                expected: file.scenarios,
                found: arc.cost.len(),
            });
        }
        for (s, &c) in arc.cost.iter().enumerate() {
            if c < 0 {
                violations.push(Violation::NegativeCost { arc: i, scenario: s, value: c });
            }
            if c <= 0 {
                strictly_positive = false;
            }
        }
        if endpoints_ok {
            edges.push((index[arc.from.as_str()], index[arc.to.as_str()]));
        }
    }
    let is_dag = acyclic(file.nodes.len(), &edges);
    ValidationReport {
        ok: violations.is_empty(),
        strictly_positive,
        is_dag,
        violations,
    }
}

fn acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in edges {
        out[u].push(v);
        indegree[v] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &v in &out[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                stack.push(v);
            }
        }
    }
    seen == n
}

/// Index of a node in input order.
pub type NodeId = usize;
/// Index of an arc in input order.
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub cost: CostVector,
}

/// A validated, immutable directed graph whose arcs carry one cost per scenario.
#[derive(Debug, Clone)]
pub struct ScenarioGraph {
    scenarios: usize,
    nodes: Vec<String>,
    index: HashMap<String, NodeId>,
    source: NodeId,
    goals: Vec<NodeId>,
    is_goal: Vec<bool>,
    arcs: Vec<Arc>,
    outgoing: Vec<Vec<ArcId>>,
    strictly_positive: bool,
    is_dag: bool,
    meta: Option<serde_json::Value>,
}

impl ScenarioGraph {
    pub fn from_file(file: GraphFile) -> Result<Self, ModelError> {
        let report = validate_graph(&file);
        if !report.ok {
            return Err(ModelError::InvalidGraph(report.violations));
        }
        let index: HashMap<String, NodeId> = file
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let source = index[&file.source];
        let mut goals: Vec<NodeId> = Vec::new();
        let mut is_goal = vec![false; file.nodes.len()];
        for g in &file.goals {
            let id = index[g];
            if !is_goal[id] {
                is_goal[id] = true;
                goals.push(id);
            }
        }
        let mut outgoing = vec![Vec::new(); file.nodes.len()];
        let arcs: Vec<Arc> = file
            .arcs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let from = index[&a.from];
                outgoing[from].push(i);
                Arc {
                    from,
                    to: index[&a.to],
                    cost: CostVector::new(a.cost.iter().map(|&c| c as u64).collect()),
                }
            })
            .collect();
        Ok(ScenarioGraph {
            scenarios: file.scenarios,
            nodes: file.nodes,
            index,
            source,
            goals,
            is_goal,
            arcs,
            outgoing,
            strictly_positive: report.strictly_positive,
            is_dag: report.is_dag,
            meta: file.meta,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Self::from_file(GraphFile::from_json(text)?)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            scenarios: self.scenarios,
            nodes: self.nodes.clone(),
            source: self.nodes[self.source].clone(),
            goals: self.goals.iter().map(|&g| self.nodes[g].clone()).collect(),
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcRecord {
                    from: self.nodes[a.from].clone(),
                    to: self.nodes[a.to].clone(),
                    cost: a.cost.as_slice().iter().map(|&c| c as i64).collect(),
                })
                .collect(),
            meta: self.meta.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&serde_json::Value> {
        self.meta.as_ref()
    }

    pub fn report(&self) -> ValidationReport {
        ValidationReport {
            ok: true,
            strictly_positive: self.strictly_positive,
            is_dag: self.is_dag,
            violations: Vec::new(),
        }
    }

    pub fn scenario_count(&self) -> usize {
        self.scenarios
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id]
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownNode(name.to_string()))
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn goals(&self) -> &[NodeId] {
        &self.goals
    }

    pub fn is_goal(&self, id: NodeId) -> bool {
        self.is_goal[id]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    /// Arcs leaving `node`, in input order.
    pub fn outgoing(&self, node: NodeId) -> &[ArcId] {
        &self.outgoing[node]
    }

    pub fn strictly_positive(&self) -> bool {
        self.strictly_positive
    }

    pub fn is_dag(&self) -> bool {
        self.is_dag
    }
}

/// Incremental construction of a [`ScenarioGraph`]; nodes are registered on
/// first mention.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    file: GraphFile,
}

impl GraphBuilder {
    pub fn new(scenarios: usize) -> Self {
        GraphBuilder {
            file: GraphFile {
                scenarios,
                nodes: Vec::new(),
                source: String::new(),
                goals: Vec::new(),
                arcs: Vec::new(),
                meta: None,
            },
        }
    }

    pub fn node(mut self, name: &str) -> Self {
        self.touch(name);
        self
    }

    pub fn source(mut self, name: &str) -> Self {
        self.touch(name);
        self.file.source = name.to_string();
        self
    }

    pub fn goal(mut self, name: &str) -> Self {
        self.touch(name);
        self.file.goals.push(name.to_string());
        self
    }

    pub fn arc(mut self, from: &str, to: &str, cost: &[u64]) -> Self {
        self.touch(from);
        self.touch(to);
        self.file.arcs.push(ArcRecord {
            from: from.to_string(),
            to: to.to_string(),
            cost: cost.iter().map(|&c| c as i64).collect(),
        });
        self
    }

    pub fn meta(mut self, meta: serde_json::Value) -> Self {
        self.file.meta = Some(meta);
        self
    }

    pub fn build(self) -> Result<ScenarioGraph, ModelError> {
        ScenarioGraph::from_file(self.file)
    }

    fn touch(&mut self, name: &str) {
        if !self.file.nodes.iter().any(|n| n == name) {
            self.file.nodes.push(name.to_string());
        }
    }
}

/// A walk from the source, as arc references, with its accumulated cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    arcs: Vec<ArcId>,
    cost: CostVector,
}

impl Path {
    pub fn empty(graph: &ScenarioGraph) -> Self {
        Path {
            arcs: Vec::new(),
            cost: CostVector::zeros(graph.scenario_count()),
        }
    }

    pub fn from_arcs(graph: &ScenarioGraph, arcs: Vec<ArcId>) -> Result<Self, ModelError> {
        let cost = path_cost(graph, &arcs)?;
        Ok(Path { arcs, cost })
    }

    /// Resolves a node sequence starting at the source. Between consecutive
    /// nodes the first matching arc in input order is taken.
    pub fn from_nodes(graph: &ScenarioGraph, nodes: &[&str]) -> Result<Self, ModelError> {
        let mut ids = Vec::with_capacity(nodes.len());
        for n in nodes {
            ids.push(graph.node_id(n)?);
        }
        if let Some(&first) = ids.first() {
            if first != graph.source() {
                return Err(ModelError::Disconnected { position: 0 });
            }
        }
        let mut arcs = Vec::new();
        for w in ids.windows(2) {
            let arc = graph
                .outgoing(w[0])
                .iter()
                .copied()
                .find(|&a| graph.arc(a).to == w[1])
                .ok_or_else(|| ModelError::NoSuchArc {
                    from: graph.node_name(w[0]).to_string(),
                    to: graph.node_name(w[1]).to_string(),
                })?;
            arcs.push(arc);
        }
        Self::from_arcs(graph, arcs)
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn cost(&self) -> &CostVector {
        &self.cost
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Node sequence, starting with the source.
    pub fn nodes(&self, graph: &ScenarioGraph) -> Vec<NodeId> {
        let mut out = vec![graph.source()];
        out.extend(self.arcs.iter().map(|&a| graph.arc(a).to));
        out
    }

    pub fn node_names(&self, graph: &ScenarioGraph) -> Vec<String> {
        self.nodes(graph)
            .into_iter()
            .map(|n| graph.node_name(n).to_string())
            .collect()
    }

    pub fn end(&self, graph: &ScenarioGraph) -> NodeId {
        self.arcs.last().map_or(graph.source(), |&a| graph.arc(a).to)
    }

    /// Checks connectivity and that the stored cost matches a recomputation.
    pub fn verify(&self, graph: &ScenarioGraph) -> Result<(), ModelError> {
        let recomputed = path_cost(graph, &self.arcs)?;
        if recomputed != self.cost {
            return Err(ModelError::CostMismatch {
                stored: self.cost.clone(),
                recomputed,
            });
        }
        Ok(())
    }
}

/// Componentwise sum of arc costs along a walk starting at the source.
pub fn path_cost(graph: &ScenarioGraph, arcs: &[ArcId]) -> Result<CostVector, ModelError> {
    let mut at = graph.source();
    let mut total = vec![0u64; graph.scenario_count()];
    for (position, &id) in arcs.iter().enumerate() {
        if id >= graph.arcs().len() {
            return Err(ModelError::UnknownArc(id));
        }
        let arc = graph.arc(id);
        if arc.from != at {
            return Err(ModelError::Disconnected { position });
        }
        for (t, c) in total.iter_mut().zip(arc.cost.as_slice()) {
            *t += c;
        }
        at = arc.to;
    }
    Ok(CostVector::new(total))
}

pub type LabelId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelStatus {
    Open,
    Expanded,
    Pruned,
}

/// One partial path known to the search: `g` is its cost, `f_lorenz` the best
/// Lorenz evaluation over its heuristic completions.
#[derive(Debug, Clone)]
pub struct Label {
    pub id: LabelId,
    pub node: NodeId,
    pub g: CostVector,
    pub f_lorenz: LorenzVector,
    pub predecessor: Option<LabelId>,
    /// Arc from the predecessor's node; `None` only for the root.
    pub via: Option<ArcId>,
    pub status: LabelStatus,
}
