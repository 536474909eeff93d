//! Exhaustive ground truth: every simple source-to-goal path, and the
//! frontiers and optima computed from that list.
//!
//! Only simple paths are enumerated. On strictly positive graphs a path with
//! a cycle is P-dominated by its reduction, and graphs with zero costs must
//! be acyclic, so nothing is lost.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::dominance::{lorenz_filter, lorenz_vector, pareto_filter, weakly_below, LorenzVector};
use crate::model::{ArcId, CostVector, Path, ScenarioGraph};
use crate::owa::{owa_value, OwaError, OwaWeights, Rational};

pub const DEFAULT_MAX_PATHS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("more than {0} paths; raise the cap to enumerate this graph")]
    CapExceeded(usize),
    #[error("graph has a cycle and zero-cost arc components")]
    ZeroCostCycle,
    #[error("path cap must be at least 1")]
    InvalidCap,
    #[error("target has {found} scenarios, graph has {expected}")]
    TargetArity { expected: usize, found: usize },
    #[error(transparent)]
    Owa(#[from] OwaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    pub max_paths: usize,
}

impl EnumerationLimits {
    pub fn new(max_paths: usize) -> Result<Self, OracleError> {
        if max_paths == 0 {
            return Err(OracleError::InvalidCap);
        }
        Ok(EnumerationLimits { max_paths })
    }

    /// Always true: only simple paths are enumerated.
    pub fn simple_only(&self) -> bool {
        true
    }
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_paths: DEFAULT_MAX_PATHS,
        }
    }
}

/// Depth-first walk over simple source-to-goal paths in input arc order.
/// Paths may pass through a goal and continue to another one.
pub fn for_each_path<F>(
    graph: &ScenarioGraph,
    limits: &EnumerationLimits,
    mut visit: F,
) -> Result<(), OracleError>
where
    F: FnMut(&Path) -> ControlFlow<()>,
{
    if !graph.is_dag() && !graph.strictly_positive() {
        return Err(OracleError::ZeroCostCycle);
    }
    let m = graph.scenario_count();
    let mut on_path = vec![false; graph.node_count()];
    let mut arcs: Vec<ArcId> = Vec::new();
    // (node, next outgoing index, cost so far)
    let mut stack: Vec<(usize, usize, CostVector)> = Vec::new();
    let mut found = 0usize;

    let source = graph.source();
    on_path[source] = true;
    stack.push((source, 0, CostVector::zeros(m)));
    let mut report = |arcs: &[ArcId], cost: &CostVector, found: &mut usize| {
        *found += 1;
        if *found > limits.max_paths {
            return Err(OracleError::CapExceeded(limits.max_paths));
        }
        let path = Path::from_arcs(graph, arcs.to_vec()).expect("walk from source");
        debug_assert_eq!(path.cost(), cost);
        Ok(visit(&path))
    };
    if graph.is_goal(source) && report(&arcs, &CostVector::zeros(m), &mut found)?.is_break() {
        return Ok(());
    }
    while let Some(top) = stack.last_mut() {
        let (node, next) = (top.0, top.1);
        let out = graph.outgoing(node);
        if next == out.len() {
            on_path[node] = false;
            stack.pop();
            arcs.pop();
            continue;
        }
        top.1 += 1;
        let arc_id = out[next];
        let arc = graph.arc(arc_id);
        if on_path[arc.to] {
            continue;
        }
        let cost = top.2.plus(&arc.cost);
        arcs.push(arc_id);
        on_path[arc.to] = true;
        if graph.is_goal(arc.to) && report(&arcs, &cost, &mut found)?.is_break() {
            return Ok(());
        }
        stack.push((arc.to, 0, cost));
    }
    Ok(())
}

pub fn enumerate_paths(
    graph: &ScenarioGraph,
    limits: &EnumerationLimits,
) -> Result<Vec<Path>, OracleError> {
    let mut out = Vec::new();
    for_each_path(graph, limits, |p| {
        out.push(p.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// A P-non-dominated cost vector with the first path that realizes it.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub cost: CostVector,
    pub witness: Path,
}

pub fn brute_pareto_set(
    graph: &ScenarioGraph,
    limits: &EnumerationLimits,
) -> Result<Vec<ParetoPoint>, OracleError> {
    let paths = enumerate_paths(graph, limits)?;
    let costs: Vec<CostVector> = paths.iter().map(|p| p.cost().clone()).collect();
    Ok(pareto_filter(&costs)
        .into_iter()
        .map(|i| ParetoPoint {
            cost: costs[i].clone(),
            witness: paths[i].clone(),
        })
        .collect())
}

/// One L-non-dominated Lorenz vector, the first path realizing it, and every
/// distinct cost vector among all paths that shares it.
#[derive(Debug, Clone)]
pub struct LorenzClass {
    pub lorenz: LorenzVector,
    pub witness: Path,
    pub members: Vec<CostVector>,
}

/// Classes in lexicographically increasing Lorenz order.
pub fn brute_lorenz_set(
    graph: &ScenarioGraph,
    limits: &EnumerationLimits,
) -> Result<Vec<LorenzClass>, OracleError> {
    let paths = enumerate_paths(graph, limits)?;
    let costs: Vec<CostVector> = paths.iter().map(|p| p.cost().clone()).collect();
    let mut classes: Vec<LorenzClass> = lorenz_filter(&costs)
        .into_iter()
        .map(|i| LorenzClass {
            lorenz: lorenz_vector(&costs[i]),
            witness: paths[i].clone(),
            members: Vec::new(),
        })
        .collect();
    for cost in &costs {
        let l = lorenz_vector(cost);
        if let Some(class) = classes.iter_mut().find(|c| c.lorenz == l) {
            if !class.members.contains(cost) {
                class.members.push(cost.clone());
            }
        }
    }
    classes.sort_by(|a, b| a.lorenz.cmp(&b.lorenz));
    Ok(classes)
}

/// The first enumerated path of minimum OWA value, or `None` if no goal is
/// reachable.
pub fn brute_owa_opt(
    graph: &ScenarioGraph,
    weights: &OwaWeights,
    limits: &EnumerationLimits,
) -> Result<Option<(Path, Rational)>, OracleError> {
    if weights.len() != graph.scenario_count() {
        return Err(OwaError::DimensionMismatch {
            weights: weights.len(),
            vector: graph.scenario_count(),
        }
        .into());
    }
    let mut best: Option<(Path, Rational)> = None;
    for_each_path(graph, limits, |p| {
        let v = owa_value(p.cost(), weights).expect("dimension checked");
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((p.clone(), v));
        }
        ControlFlow::Continue(())
    })?;
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Path>,
}

/// Is there a path whose cost weakly L-dominates `target`? Stops at the first
/// witness.
pub fn decide_lorenz_dominating_path(
    graph: &ScenarioGraph,
    target: &CostVector,
    limits: &EnumerationLimits,
) -> Result<Decision, OracleError> {
    if target.len() != graph.scenario_count() {
        return Err(OracleError::TargetArity {
            expected: graph.scenario_count(),
            found: target.len(),
        });
    }
    let goal = lorenz_vector(target);
    let mut witness = None;
    for_each_path(graph, limits, |p| {
        if weakly_below(lorenz_vector(p.cost()).as_slice(), goal.as_slice()) {
            witness = Some(p.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(Decision {
        holds: witness.is_some(),
        witness,
    })
}
