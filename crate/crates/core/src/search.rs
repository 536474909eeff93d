//! Label-expanding best-first search over scenario graphs.
//!
//! Every partial path is a label. A label at node `n` with cost `g` is
//! evaluated against the heuristic set `H(n)`: its members are the Lorenz
//! vectors `L(g + h)`, and its priority is the lexicographically smallest
//! member (or, in OWA mode, the smallest criterion value). Pruning is applied
//! at the start of every iteration:
//!
//! * rule 1 drops labels whose evaluation is L-dominated by, or equal to, a
//!   solution already detected (OWA mode: valued no better than the incumbent);
//! * rule 2 drops labels whose cost is P-dominated by, or equal to, another
//!   stored label at the same node.
//!
//! Goal labels are never extended: with non-negative costs every extension is
//! weakly P-dominated by the goal path itself.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::dominance::{lorenz_vector, pareto_filter, weakly_below, LorenzVector};
use crate::model::{
    ArcId, CostVector, Label, LabelId, LabelStatus, NodeId, Path, ScenarioGraph,
};
use crate::owa::{value_of_lorenz, OwaError, OwaWeights, Rational};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("graph has a cycle and zero-cost arc components; only acyclic graphs may carry zero costs")]
    ZeroCostCycle,
    #[error("rule 2 cannot be disabled on a cyclic graph")]
    CycleWithoutRule2,
    #[error("heuristic has {heuristic} scenarios, graph has {graph}")]
    ScenarioMismatch { graph: usize, heuristic: usize },
    #[error("heuristic covers {heuristic} nodes, graph has {graph}")]
    NodeCountMismatch { graph: usize, heuristic: usize },
    #[error(transparent)]
    Owa(#[from] OwaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicKind {
    Zero,
    Arc,
    IdealPoint,
    Custom,
}

/// Per-node sets of vector lower bounds on the remaining cost to a goal. An
/// empty set marks a node from which no goal is reachable (or, for the arc
/// kind, a non-goal node without outgoing arcs); labels there are discarded.
#[derive(Debug, Clone)]
pub struct HeuristicTable {
    kind: HeuristicKind,
    scenarios: usize,
    sets: Vec<Vec<CostVector>>,
}

impl HeuristicTable {
    /// Caller-supplied sets, one per node in input order.
    pub fn custom(scenarios: usize, sets: Vec<Vec<CostVector>>) -> Self {
        HeuristicTable {
            kind: HeuristicKind::Custom,
            scenarios,
            sets,
        }
    }

    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    pub fn at(&self, node: NodeId) -> &[CostVector] {
        &self.sets[node]
    }

    pub fn sets(&self) -> &[Vec<CostVector>] {
        &self.sets
    }
}

pub fn build_heuristic(graph: &ScenarioGraph, kind: HeuristicKind) -> HeuristicTable {
    let m = graph.scenario_count();
    let zero = CostVector::zeros(m);
    let sets = match kind {
        HeuristicKind::Zero | HeuristicKind::Custom => vec![vec![zero]; graph.node_count()],
        HeuristicKind::Arc => (0..graph.node_count())
            .map(|n| {
                if graph.is_goal(n) {
                    return vec![zero.clone()];
                }
                let costs: Vec<CostVector> = graph
                    .outgoing(n)
                    .iter()
                    .map(|&a| graph.arc(a).cost.clone())
                    .collect();
                pareto_filter(&costs).into_iter().map(|i| costs[i].clone()).collect()
            })
            .collect(),
        HeuristicKind::IdealPoint => ideal_point(graph),
    };
    HeuristicTable {
        kind: if kind == HeuristicKind::Custom { HeuristicKind::Zero } else { kind },
        scenarios: m,
        sets,
    }
}

/// One backward Dijkstra sweep per scenario from the goal set.
fn ideal_point(graph: &ScenarioGraph) -> Vec<Vec<CostVector>> {
    let n = graph.node_count();
    let m = graph.scenario_count();
    let mut incoming: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for (id, arc) in graph.arcs().iter().enumerate() {
        incoming[arc.to].push(id);
    }
    let mut dist = vec![vec![u64::MAX; m]; n];
    #[allow(clippy::needless_range_loop)] // s indexes the inner dimension
    for s in 0..m {
        let mut heap = BinaryHeap::new();
        for &g in graph.goals() {
            dist[g][s] = 0;
            heap.push(Reverse((0u64, g)));
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v][s] {
                continue;
            }
            for &a in &incoming[v] {
                let arc = graph.arc(a);
                let nd = d + arc.cost.as_slice()[s];
                if nd < dist[arc.from][s] {
                    dist[arc.from][s] = nd;
                    heap.push(Reverse((nd, arc.from)));
                }
            }
        }
    }
    dist.into_iter()
        .map(|d| {
            if d.contains(&u64::MAX) {
                Vec::new()
            } else {
                vec![CostVector::new(d)]
            }
        })
        .collect()
}

/// Which evaluation members rule 1 inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule1Policy {
    /// Prune only when every member `L(g + h)` is weakly L-dominated by some
    /// detected solution. Sound for any admissible heuristic set.
    #[default]
    PerMember,
    /// Prune when the best member alone is weakly L-dominated. Matches the
    /// textbook trace on small examples but may lose solutions in general.
    LexBest,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOptions {
    pub trace: bool,
    pub rule1: bool,
    pub rule2: bool,
    pub rule1_policy: Rule1Policy,
    /// Try the sum-bound test before a full Lorenz comparison in rule 1.
    pub sum_bound_fast_path: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            trace: false,
            rule1: true,
            rule2: true,
            rule1_policy: Rule1Policy::PerMember,
            sum_bound_fast_path: true,
        }
    }
}

impl SearchOptions {
    pub fn traced() -> Self {
        SearchOptions {
            trace: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub label: LabelId,
    #[serde(skip)]
    pub path: Path,
    pub cost: CostVector,
    pub lorenz: LorenzVector,
    #[serde(skip)]
    pub value: Option<Rational>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub labels_created: usize,
    pub labels_expanded: usize,
    pub pruned_rule1: usize,
    pub pruned_rule2: usize,
    pub pruned_incumbent: usize,
    pub sum_bound_hits: usize,
    pub dead_ends: usize,
    pub goals_rejected: usize,
    pub iterations: usize,
}

/// An expanded label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub label: LabelId,
    pub node: String,
    pub g: CostVector,
    pub f: LorenzVector,
    pub predecessor: Option<LabelId>,
    pub solution: bool,
}

impl TraceRow {
    /// `node<TAB>g=[..]<TAB>L(f)=[..]`
    pub fn tsv(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{}\tg={}\tL(f)={}",
            self.node,
            bracket(self.g.as_slice()),
            bracket(self.f.as_slice())
        );
        s
    }
}

fn bracket(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneRule {
    Rule1,
    Rule2,
    Incumbent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruneEvent {
    pub iteration: usize,
    pub label: LabelId,
    pub node: String,
    pub g: CostVector,
    pub f: LorenzVector,
    pub rule: PruneRule,
    /// Rule 1: Lorenz vectors of the solutions that dominate the inspected
    /// members, in member order without repeats.
    pub against: Vec<LorenzVector>,
    /// Rule 2: the stored label whose cost dominates (or equals) this one.
    pub dominated_by: Option<LabelId>,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub solutions: Vec<Solution>,
    pub stats: SearchStats,
    pub trace: Option<Vec<TraceRow>>,
    pub prunes: Option<Vec<PruneEvent>>,
    pub labels: Vec<Label>,
}

impl SearchResult {
    /// The single solution of an OWA search, if any path exists.
    pub fn best(&self) -> Option<&Solution> {
        self.solutions.first()
    }

    pub fn lorenz_set(&self) -> Vec<LorenzVector> {
        self.solutions.iter().map(|s| s.lorenz.clone()).collect()
    }

    pub fn trace_tsv(&self) -> Option<String> {
        self.trace.as_ref().map(|rows| {
            rows.iter().map(|r| r.tsv() + "\n").collect::<String>()
        })
    }
}

/// All L-non-dominated Lorenz vectors among source-to-goal paths, one witness
/// path each, in lexicographically increasing order.
pub fn search_lorenz(
    graph: &ScenarioGraph,
    heuristic: &HeuristicTable,
    options: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    Engine::new(graph, heuristic, options, Objective::Lorenz)?.run()
}

/// The same engine with rule 1 off and Pareto filtering at goals: returns one
/// path per P-non-dominated cost vector.
pub fn search_pareto(
    graph: &ScenarioGraph,
    heuristic: &HeuristicTable,
    options: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    Engine::new(graph, heuristic, options, Objective::Pareto)?.run()
}

/// A path minimizing the OWA criterion; empty solution list when no goal is
/// reachable.
pub fn search_owa(
    graph: &ScenarioGraph,
    weights: &OwaWeights,
    heuristic: &HeuristicTable,
    options: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    if weights.len() != graph.scenario_count() {
        return Err(OwaError::DimensionMismatch {
            weights: weights.len(),
            vector: graph.scenario_count(),
        }
        .into());
    }
    Engine::new(graph, heuristic, options, Objective::Owa(weights))?.run()
}

#[derive(Clone, Copy)]
enum Objective<'w> {
    Lorenz,
    Pareto,
    Owa(&'w OwaWeights),
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    value: Option<Rational>,
    f: LorenzVector,
    node: NodeId,
    id: LabelId,
}

struct Engine<'a> {
    graph: &'a ScenarioGraph,
    heuristic: &'a HeuristicTable,
    options: &'a SearchOptions,
    objective: Objective<'a>,
    labels: Vec<Label>,
    /// Distinct `L(g + h)` per label, lexicographically increasing.
    members: Vec<Vec<LorenzVector>>,
    /// OWA mode: smallest member value per label.
    values: Vec<Option<Rational>>,
    stored: Vec<Vec<LabelId>>,
    open: Vec<LabelId>,
    heap: BinaryHeap<Reverse<Key>>,
    pending: Vec<LabelId>,
    solutions: Vec<Solution>,
    /// Rule 1 progress per label and member: solutions already tested, and
    /// the index of the first one covering the member.
    coverage: Vec<Vec<(usize, Option<usize>)>>,
    accepted: usize,
    swept: usize,
    incumbent: Option<Rational>,
    iteration: usize,
    stats: SearchStats,
    trace: Vec<TraceRow>,
    prunes: Vec<PruneEvent>,
}

impl<'a> Engine<'a> {
    fn new(
        graph: &'a ScenarioGraph,
        heuristic: &'a HeuristicTable,
        options: &'a SearchOptions,
        objective: Objective<'a>,
    ) -> Result<Self, SearchError> {
        if heuristic.scenarios != graph.scenario_count() {
            return Err(SearchError::ScenarioMismatch {
                graph: graph.scenario_count(),
                heuristic: heuristic.scenarios,
            });
        }
        if heuristic.sets.len() != graph.node_count() {
            return Err(SearchError::NodeCountMismatch {
                graph: graph.node_count(),
                heuristic: heuristic.sets.len(),
            });
        }
        if !graph.is_dag() {
            if !graph.strictly_positive() {
                return Err(SearchError::ZeroCostCycle);
            }
            if !options.rule2 {
                return Err(SearchError::CycleWithoutRule2);
            }
        }
        Ok(Engine {
            graph,
            heuristic,
            options,
            objective,
            labels: Vec::new(),
            members: Vec::new(),
            values: Vec::new(),
            stored: vec![Vec::new(); graph.node_count()],
            open: Vec::new(),
            heap: BinaryHeap::new(),
            pending: Vec::new(),
            solutions: Vec::new(),
            coverage: Vec::new(),
            accepted: 0,
            swept: 0,
            incumbent: None,
            iteration: 0,
            stats: SearchStats::default(),
            trace: Vec::new(),
            prunes: Vec::new(),
        })
    }

    fn run(mut self) -> Result<SearchResult, SearchError> {
        let root = self.create(
            self.graph.source(),
            CostVector::zeros(self.graph.scenario_count()),
            None,
            None,
        );
        if let Some(root) = root {
            self.pending.push(root);
        }
        loop {
            self.iteration += 1;
            self.screen();
            match self.pop() {
                Some(id) => self.expand(id),
                None => break,
            }
        }
        self.stats.iterations = self.iteration;
        Ok(SearchResult {
            solutions: self.solutions,
            stats: self.stats,
            trace: self.options.trace.then_some(self.trace),
            prunes: self.options.trace.then_some(self.prunes),
            labels: self.labels,
        })
    }

    fn create(
        &mut self,
        node: NodeId,
        g: CostVector,
        predecessor: Option<LabelId>,
        via: Option<ArcId>,
    ) -> Option<LabelId> {
        let h = self.heuristic.at(node);
        if h.is_empty() {
            self.stats.dead_ends += 1;
            return None;
        }
        let mut members: Vec<LorenzVector> = h.iter().map(|h| lorenz_vector(&g.plus(h))).collect();
        members.sort();
        members.dedup();
        let (f, value) = match self.objective {
            Objective::Owa(weights) => {
                let mut best: Option<(Rational, usize)> = None;
                for (i, l) in members.iter().enumerate() {
                    let v = value_of_lorenz(l, weights);
                    if best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, i));
                    }
                }
                let (v, i) = best.expect("non-empty heuristic set");
                (members[i].clone(), Some(v))
            }
            _ => (members[0].clone(), None),
        };
        let id = self.labels.len();
        self.labels.push(Label {
            id,
            node,
            g,
            f_lorenz: f,
            predecessor,
            via,
            status: LabelStatus::Open,
        });
        self.coverage.push(vec![(0, None); members.len()]);
        self.members.push(members);
        self.values.push(value);
        self.stats.labels_created += 1;
        Some(id)
    }

    /// Start-of-iteration pruning.
    fn screen(&mut self) {
        let fresh = self.accepted > self.swept;
        if fresh && self.rule1_active() {
            let open = std::mem::take(&mut self.open);
            let mut kept = Vec::with_capacity(open.len());
            for id in open {
                if self.labels[id].status != LabelStatus::Open {
                    continue;
                }
                if self.try_rule1(id) {
                    continue;
                }
                kept.push(id);
            }
            self.open = kept;
        }
        self.swept = self.accepted;

        let pending = std::mem::take(&mut self.pending);
        for id in pending {
            if self.rule1_active() && self.try_rule1(id) {
                continue;
            }
            if self.options.rule2 && !self.admit(id) {
                continue;
            }
            self.open.push(id);
            let label = &self.labels[id];
            self.heap.push(Reverse(Key {
                value: self.values[id].clone(),
                f: label.f_lorenz.clone(),
                node: label.node,
                id,
            }));
        }
    }

    fn rule1_active(&self) -> bool {
        match self.objective {
            Objective::Lorenz => self.options.rule1,
            Objective::Owa(_) => true,
            Objective::Pareto => false,
        }
    }

    /// Applies rule 1 (or the incumbent test) to an open or pending label.
    fn try_rule1(&mut self, id: LabelId) -> bool {
        let verdict = match self.objective {
            Objective::Owa(_) => match (&self.incumbent, &self.values[id]) {
                (Some(best), Some(v)) if v >= best => Some((PruneRule::Incumbent, Vec::new())),
                _ => None,
            },
            _ => self.lorenz_dominated(id).map(|w| (PruneRule::Rule1, w)),
        };
        match verdict {
            Some((rule, against)) => {
                self.prune(id, rule, against, None);
                true
            }
            None => false,
        }
    }

    fn lorenz_dominated(&mut self, id: LabelId) -> Option<Vec<LorenzVector>> {
        if self.solutions.is_empty() {
            return None;
        }
        let inspected = match self.options.rule1_policy {
            Rule1Policy::PerMember => self.members[id].len(),
            Rule1Policy::LexBest => 1,
        };
        let m = self.graph.scenario_count() as u128;
        for (k, member) in self.members[id][..inspected].iter().enumerate() {
            let (checked, witness) = &mut self.coverage[id][k];
            if witness.is_some() {
                continue;
            }
            let total = u128::from(member.last());
            let found = self.solutions[*checked..].iter().position(|s| {
                if self.options.sum_bound_fast_path && total > m * u128::from(s.lorenz.first()) {
                    self.stats.sum_bound_hits += 1;
                    return true;
                }
                weakly_below(s.lorenz.as_slice(), member.as_slice())
            });
            match found {
                Some(i) => *witness = Some(*checked + i),
                None => {
                    *checked = self.solutions.len();
                    return None;
                }
            }
        }
        let mut witnesses: Vec<LorenzVector> = Vec::new();
        for (_, witness) in &self.coverage[id][..inspected] {
            let lorenz = &self.solutions[witness.expect("covered")].lorenz;
            if !witnesses.contains(lorenz) {
                witnesses.push(lorenz.clone());
            }
        }
        Some(witnesses)
    }

    /// Rule 2 on insertion; keeps each node's stored set Pareto-minimal.
    fn admit(&mut self, id: LabelId) -> bool {
        let node = self.labels[id].node;
        let g = self.labels[id].g.as_slice();
        if let Some(&dominator) = self.stored[node]
            .iter()
            .find(|&&s| weakly_below(self.labels[s].g.as_slice(), g))
        {
            self.prune(id, PruneRule::Rule2, Vec::new(), Some(dominator));
            return false;
        }
        let (dominated, kept): (Vec<LabelId>, Vec<LabelId>) = self.stored[node]
            .iter()
            .partition(|&&s| weakly_below(g, self.labels[s].g.as_slice()));
        self.stored[node] = kept;
        for s in dominated {
            if self.labels[s].status == LabelStatus::Open {
                self.prune(s, PruneRule::Rule2, Vec::new(), Some(id));
            }
        }
        self.stored[node].push(id);
        true
    }

    fn prune(
        &mut self,
        id: LabelId,
        rule: PruneRule,
        against: Vec<LorenzVector>,
        dominated_by: Option<LabelId>,
    ) {
        self.labels[id].status = LabelStatus::Pruned;
        match rule {
            PruneRule::Rule1 => self.stats.pruned_rule1 += 1,
            PruneRule::Rule2 => self.stats.pruned_rule2 += 1,
            PruneRule::Incumbent => self.stats.pruned_incumbent += 1,
        }
        if self.options.trace {
            let label = &self.labels[id];
            self.prunes.push(PruneEvent {
                iteration: self.iteration,
                label: id,
                node: self.graph.node_name(label.node).to_string(),
                g: label.g.clone(),
                f: label.f_lorenz.clone(),
                rule,
                against,
                dominated_by,
            });
        }
    }

    fn pop(&mut self) -> Option<LabelId> {
        while let Some(Reverse(key)) = self.heap.pop() {
            if self.labels[key.id].status == LabelStatus::Open {
                return Some(key.id);
            }
        }
        None
    }

    fn expand(&mut self, id: LabelId) {
        self.labels[id].status = LabelStatus::Expanded;
        self.stats.labels_expanded += 1;
        let node = self.labels[id].node;
        let is_goal = self.graph.is_goal(node);
        let accepted = is_goal && self.accept_goal(id);
        if self.options.trace {
            let label = &self.labels[id];
            self.trace.push(TraceRow {
                iteration: self.iteration,
                label: id,
                node: self.graph.node_name(node).to_string(),
                g: label.g.clone(),
                f: label.f_lorenz.clone(),
                predecessor: label.predecessor,
                solution: accepted,
            });
        }
        if is_goal {
            return;
        }
        let g = self.labels[id].g.clone();
        for &arc in self.graph.outgoing(node) {
            let a = self.graph.arc(arc);
            if let Some(child) = self.create(a.to, g.plus(&a.cost), Some(id), Some(arc)) {
                self.pending.push(child);
            }
        }
    }

    fn accept_goal(&mut self, id: LabelId) -> bool {
        let g = self.labels[id].g.clone();
        let lorenz = lorenz_vector(&g);
        let value = match self.objective {
            Objective::Lorenz => {
                if self
                    .solutions
                    .iter()
                    .any(|s| weakly_below(s.lorenz.as_slice(), lorenz.as_slice()))
                {
                    self.stats.goals_rejected += 1;
                    return false;
                }
                None
            }
            Objective::Pareto => {
                if self
                    .solutions
                    .iter()
                    .any(|s| weakly_below(s.cost.as_slice(), g.as_slice()))
                {
                    self.stats.goals_rejected += 1;
                    return false;
                }
                None
            }
            Objective::Owa(weights) => {
                let v = value_of_lorenz(&lorenz, weights);
                if self.incumbent.as_ref().is_some_and(|best| v >= *best) {
                    self.stats.goals_rejected += 1;
                    return false;
                }
                self.incumbent = Some(v.clone());
                self.solutions.clear();
                Some(v)
            }
        };
        let path = self.path_to(id);
        self.accepted += 1;
        self.solutions.push(Solution {
            label: id,
            path,
            cost: g,
            lorenz,
            value,
        });
        true
    }

    fn path_to(&self, id: LabelId) -> Path {
        let mut arcs = Vec::new();
        let mut cursor = Some(id);
        while let Some(c) = cursor {
            let label = &self.labels[c];
            if let Some(a) = label.via {
                arcs.push(a);
            }
            cursor = label.predecessor;
        }
        arcs.reverse();
        Path::from_arcs(self.graph, arcs).expect("label chain forms a walk from the source")
    }
}

impl Ord for Solution {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lorenz.cmp(&other.lorenz)
    }
}

impl PartialOrd for Solution {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Solution {
    fn eq(&self, other: &Self) -> bool {
        self.lorenz == other.lorenz && self.cost == other.cost
    }
}

impl Eq for Solution {}
