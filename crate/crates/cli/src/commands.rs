use std::cmp::Ordering;
use std::fs;
use std::ops::ControlFlow;
use std::path::Path as FsPath;

use robust_paths::dominance::{
    lex_compare, lorenz_strictly_dominates, lorenz_verdict, lorenz_weakly_dominates,
    pareto_dominates, pareto_verdict, sum_bound_dominates, weak_pareto_dominates,
};
use robust_paths::instances::{self, GeneratorSpec, InstanceError, RandomParams};
use robust_paths::model::{CostVector, ModelError};
use robust_paths::oracle::{self, EnumerationLimits, OracleError};
use robust_paths::owa::{owa_value, OwaError, OwaWeights};
use robust_paths::search::{
    build_heuristic, search_lorenz, search_owa, search_pareto, HeuristicKind, Rule1Policy,
    SearchError, SearchOptions,
};
use robust_paths::{lorenz_vector, ScenarioGraph};

use crate::args::{
    CompareArgs, DecideArgs, DominanceArgs, Family, GenerateArgs, Heuristic, Mode, OracleArgs,
    OracleMode, Rule1, SearchArgs, WeightArgs,
};
use crate::report::{
    Comparison, DecisionOut, DominanceOut, GraphInfo, OracleInfo, OwaDiff, OwaPair, PartitionInfo,
    RunReport, SetDiff, SolutionOut, WeightsInfo,
};

/// A failed command: the process exit code and a one-line message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const USAGE: u8 = 2;
pub const INVALID_GRAPH: u8 = 3;
pub const BAD_WEIGHTS: u8 = 4;
pub const CAP_EXCEEDED: u8 = 5;

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::new(INVALID_GRAPH, e.to_string())
    }
}

impl From<OwaError> for Failure {
    fn from(e: OwaError) -> Self {
        Failure::new(BAD_WEIGHTS, e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Owa(e) => e.into(),
            other => Failure::new(INVALID_GRAPH, other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded(_) => Failure::new(CAP_EXCEEDED, e.to_string()),
            OracleError::Owa(e) => e.into(),
            OracleError::ZeroCostCycle => Failure::new(INVALID_GRAPH, e.to_string()),
            OracleError::InvalidCap | OracleError::TargetArity { .. } => {
                Failure::new(USAGE, e.to_string())
            }
        }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Model(e) => e.into(),
            other => Failure::new(USAGE, other.to_string()),
        }
    }
}

/// What a command produced, with the exit code to finish on.
pub enum Output {
    /// Emitted verbatim (generated graphs).
    Text(String),
    Report(Box<RunReport>, u8),
}

impl Output {
    fn report(report: RunReport, code: u8) -> Self {
        Output::Report(Box::new(report), code)
    }
}

fn load_graph(path: &FsPath) -> Result<ScenarioGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(INVALID_GRAPH, format!("cannot read {}: {e}", path.display())))?;
    Ok(ScenarioGraph::from_json(&text)?)
}

fn weights_for(args: &WeightArgs, graph: Option<&ScenarioGraph>) -> Result<Option<OwaWeights>, Failure> {
    let weights = match (&args.phi, &args.weights) {
        (Some(phi), _) => OwaWeights::parse_phi(phi)?,
        (None, Some(w)) => OwaWeights::parse_weights(w)?,
        (None, None) => return Ok(None),
    };
    if let Some(g) = graph {
        if weights.len() != g.scenario_count() {
            return Err(OwaError::DimensionMismatch {
                weights: weights.len(),
                vector: g.scenario_count(),
            }
            .into());
        }
    }
    Ok(Some(weights))
}

fn limits(max_paths: usize) -> Result<EnumerationLimits, Failure> {
    Ok(EnumerationLimits::new(max_paths)?)
}

fn heuristic_kind(h: Heuristic) -> HeuristicKind {
    match h {
        Heuristic::Zero => HeuristicKind::Zero,
        Heuristic::Arc => HeuristicKind::Arc,
        Heuristic::Ideal => HeuristicKind::IdealPoint,
    }
}

fn heuristic_name(h: Heuristic) -> &'static str {
    match h {
        Heuristic::Zero => "zero",
        Heuristic::Arc => "arc",
        Heuristic::Ideal => "ideal",
    }
}

pub fn generate(args: &GenerateArgs) -> Result<Output, Failure> {
    let spec = match &args.family {
        Family::Figure1 => GeneratorSpec::Figure1,
        Family::Hansen { p } => GeneratorSpec::Hansen { p: *p },
        Family::Antilorenz { p } => GeneratorSpec::Antilorenz { p: *p },
        Family::Partition { sizes } => GeneratorSpec::Partition { sizes: sizes.0.clone() },
        Family::Random { nodes, density, m, seed, cost_min, cost_max } => {
            GeneratorSpec::Random(RandomParams {
                nodes: *nodes,
                density: *density,
                cost_min: *cost_min,
                cost_max: *cost_max,
                scenarios: *m,
                seed: *seed,
            })
        }
    };
    Ok(Output::Text(spec.generate()?.to_json()))
}

pub fn search(args: &SearchArgs, mut report: RunReport) -> Result<Output, Failure> {
    let graph = load_graph(&args.graph)?;
    let weights = weights_for(&args.weights, Some(&graph))?;
    match (args.mode, &weights) {
        (Mode::Owa, None) => return Err(Failure::new(USAGE, "--mode owa needs --phi or --weights")),
        (Mode::Lorenz | Mode::Pareto, Some(_)) => {
            return Err(Failure::new(USAGE, "--phi and --weights apply only to --mode owa"))
        }
        _ => {}
    }
    let heuristic = build_heuristic(&graph, heuristic_kind(args.heuristic));
    let options = SearchOptions {
        trace: args.trace || args.trace_tsv.is_some(),
        rule1_policy: match args.rule1_policy {
            Rule1::PerMember => Rule1Policy::PerMember,
            Rule1::LexBest => Rule1Policy::LexBest,
        },
        ..SearchOptions::default()
    };
    let result = match (args.mode, &weights) {
        (Mode::Owa, Some(w)) => search_owa(&graph, w, &heuristic, &options)?,
        (Mode::Pareto, _) => search_pareto(&graph, &heuristic, &options)?,
        _ => search_lorenz(&graph, &heuristic, &options)?,
    };
    if let (Some(path), Some(tsv)) = (&args.trace_tsv, result.trace_tsv()) {
        fs::write(path, tsv)
            .map_err(|e| Failure::new(INVALID_GRAPH, format!("cannot write {}: {e}", path.display())))?;
    }

    report.graph = Some(GraphInfo::of(&graph));
    report.mode = Some(format!("{:?}", args.mode).to_lowercase());
    report.heuristic = Some(heuristic_name(args.heuristic).to_string());
    report.weights = weights.as_ref().map(WeightsInfo::of);
    report.solutions = Some(
        result
            .solutions
            .iter()
            .map(|s| SolutionOut::of(&graph, &s.path, s.value.as_ref()))
            .collect(),
    );
    report.statistics = Some(result.stats.clone());
    if options.trace {
        report.trace = result.trace.as_ref().map(|rows| rows.iter().map(|r| r.tsv()).collect());
        report.prunes = result.prunes.clone();
    }
    Ok(Output::report(report, 0))
}

fn count_paths(graph: &ScenarioGraph, limits: &EnumerationLimits) -> Result<usize, Failure> {
    let mut n = 0;
    oracle::for_each_path(graph, limits, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

fn target_vector(target: &Option<crate::args::List>, graph: &ScenarioGraph) -> Result<CostVector, Failure> {
    let target = target
        .as_ref()
        .ok_or_else(|| Failure::new(USAGE, "--target is required"))?;
    if target.0.len() != graph.scenario_count() {
        return Err(OracleError::TargetArity {
            expected: graph.scenario_count(),
            found: target.0.len(),
        }
        .into());
    }
    Ok(CostVector::new(target.0.clone()))
}

fn decision_out(
    graph: &ScenarioGraph,
    target: CostVector,
    decision: &oracle::Decision,
    partition: Option<PartitionInfo>,
) -> DecisionOut {
    DecisionOut {
        holds: decision.holds,
        target_lorenz: lorenz_vector(&target),
        target,
        partition,
        witness: decision.witness.as_ref().map(|p| SolutionOut::of(graph, p, None)),
    }
}

pub fn oracle(args: &OracleArgs, mut report: RunReport) -> Result<Output, Failure> {
    let graph = load_graph(&args.graph)?;
    let limits = limits(args.max_paths)?;
    let weights = weights_for(&args.weights, Some(&graph))?;
    if args.mode == OracleMode::Owa && weights.is_none() {
        return Err(Failure::new(USAGE, "--mode owa needs --phi or --weights"));
    }
    if args.mode != OracleMode::Owa && weights.is_some() {
        return Err(Failure::new(USAGE, "--phi and --weights apply only to --mode owa"));
    }
    if args.mode != OracleMode::Decide && args.target.is_some() {
        return Err(Failure::new(USAGE, "--target applies only to --mode decide"));
    }
    let paths = count_paths(&graph, &limits)?;
    report.graph = Some(GraphInfo::of(&graph));
    report.mode = Some(format!("{:?}", args.mode).to_lowercase());
    report.weights = weights.as_ref().map(WeightsInfo::of);
    report.oracle = Some(OracleInfo { exhaustive: true, paths_enumerated: paths, max_paths: args.max_paths });
    let mut code = 0;
    match args.mode {
        OracleMode::Paths => {
            let all = oracle::enumerate_paths(&graph, &limits)?;
            report.solutions = Some(all.iter().map(|p| SolutionOut::of(&graph, p, None)).collect());
        }
        OracleMode::Pareto => {
            let points = oracle::brute_pareto_set(&graph, &limits)?;
            report.solutions =
                Some(points.iter().map(|p| SolutionOut::of(&graph, &p.witness, None)).collect());
        }
        OracleMode::Lorenz => {
            let classes = oracle::brute_lorenz_set(&graph, &limits)?;
            report.solutions = Some(
                classes
                    .iter()
                    .map(|c| SolutionOut {
                        members: Some(c.members.clone()),
                        ..SolutionOut::of(&graph, &c.witness, None)
                    })
                    .collect(),
            );
        }
        OracleMode::Owa => {
            let w = weights.as_ref().expect("checked above");
            let best = oracle::brute_owa_opt(&graph, w, &limits)?;
            report.solutions = Some(
                best.iter()
                    .map(|(p, v)| SolutionOut::of(&graph, p, Some(v)))
                    .collect(),
            );
        }
        OracleMode::Decide => {
            let target = target_vector(&args.target, &graph)?;
            let d = oracle::decide_lorenz_dominating_path(&graph, &target, &limits)?;
            code = if d.holds { 0 } else { 1 };
            report.decision = Some(decision_out(&graph, target, &d, None));
        }
    }
    Ok(Output::report(report, code))
}

pub fn compare(args: &CompareArgs, mut report: RunReport) -> Result<Output, Failure> {
    let graph = load_graph(&args.graph)?;
    let limits = limits(args.max_paths)?;
    let weights = weights_for(&args.weights, Some(&graph))?;
    let paths = count_paths(&graph, &limits)?;
    let heuristic = build_heuristic(&graph, heuristic_kind(args.heuristic));

    let oracle_set: Vec<_> = oracle::brute_lorenz_set(&graph, &limits)?
        .into_iter()
        .map(|c| c.lorenz)
        .collect();
    let search_set = search_lorenz(&graph, &heuristic, &SearchOptions::default())?.lorenz_set();
    let missing: Vec<_> = oracle_set.iter().filter(|l| !search_set.contains(l)).cloned().collect();
    let extra: Vec<_> = search_set.iter().filter(|l| !oracle_set.contains(l)).cloned().collect();
    let lorenz = SetDiff {
        agree: missing.is_empty() && extra.is_empty() && search_set.len() == oracle_set.len(),
        search: search_set,
        oracle: oracle_set,
        missing,
        extra,
    };

    let owa = match &weights {
        Some(w) => {
            let oracle_value = oracle::brute_owa_opt(&graph, w, &limits)?.map(|(_, v)| v);
            let result = search_owa(&graph, w, &heuristic, &SearchOptions::default())?;
            let search_value = result.best().and_then(|s| s.value.clone());
            Some(OwaDiff {
                agree: search_value == oracle_value,
                search: search_value.as_ref().map(robust_paths::owa::format_rational),
                oracle: oracle_value.as_ref().map(robust_paths::owa::format_rational),
            })
        }
        None => None,
    };

    let agree = lorenz.agree && owa.as_ref().is_none_or(|o| o.agree);
    report.graph = Some(GraphInfo::of(&graph));
    report.mode = Some(if owa.is_some() { "lorenz+owa" } else { "lorenz" }.to_string());
    report.heuristic = Some(heuristic_name(args.heuristic).to_string());
    report.weights = weights.as_ref().map(WeightsInfo::of);
    report.comparison = Some(Comparison { agree, oracle_paths: paths, lorenz, owa });
    Ok(Output::report(report, if agree { 0 } else { 1 }))
}

pub fn decide(args: &DecideArgs, mut report: RunReport) -> Result<Output, Failure> {
    let limits = limits(args.max_paths)?;
    let (graph, target, partition) = match (&args.graph, &args.partition) {
        (Some(path), None) => {
            let graph = load_graph(path)?;
            let target = target_vector(&args.target, &graph)?;
            (graph, target, None)
        }
        (None, Some(sizes)) => {
            let inst = instances::partition_reduction(&sizes.0)?;
            let target = match &args.target {
                Some(_) => target_vector(&args.target, &inst.graph)?,
                None => inst.target.clone(),
            };
            let info = PartitionInfo { sizes: inst.sizes.clone(), scale: inst.scale };
            (inst.graph, target, Some(info))
        }
        _ => return Err(Failure::new(USAGE, "give exactly one of --graph and --partition")),
    };
    let d = oracle::decide_lorenz_dominating_path(&graph, &target, &limits)?;
    report.graph = Some(GraphInfo::of(&graph));
    report.mode = Some("decide".to_string());
    report.decision = Some(decision_out(&graph, target, &d, partition));
    Ok(Output::report(report, if d.holds { 0 } else { 1 }))
}

pub fn dominance(args: &DominanceArgs, mut report: RunReport) -> Result<Output, Failure> {
    let (x, y) = (CostVector::new(args.x.0.clone()), CostVector::new(args.y.0.clone()));
    if x.len() != y.len() {
        return Err(Failure::new(USAGE, format!("--x has {} components, --y has {}", x.len(), y.len())));
    }
    if x.is_empty() {
        return Err(Failure::new(USAGE, "cost vectors need at least one component"));
    }
    let weights = weights_for(&args.weights, None)?;
    if let Some(w) = &weights {
        if w.len() != x.len() {
            return Err(OwaError::DimensionMismatch { weights: w.len(), vector: x.len() }.into());
        }
    }
    let bad = |e: robust_paths::dominance::DominanceError| Failure::new(USAGE, e.to_string());
    let (lx, ly) = (lorenz_vector(&x), lorenz_vector(&y));
    let lex = match lex_compare(&lx, &ly).map_err(bad)? {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    };
    let owa = match &weights {
        Some(w) => Some(OwaPair {
            x: robust_paths::owa::format_rational(&owa_value(&x, w)?),
            y: robust_paths::owa::format_rational(&owa_value(&y, w)?),
        }),
        None => None,
    };
    report.weights = weights.as_ref().map(WeightsInfo::of);
    report.dominance = Some(DominanceOut {
        weak_pareto: weak_pareto_dominates(&x, &y).map_err(bad)?,
        pareto: pareto_dominates(&x, &y).map_err(bad)?,
        pareto_verdict: pareto_verdict(&x, &y).map_err(bad)?,
        weak_lorenz: lorenz_weakly_dominates(&x, &y).map_err(bad)?,
        strict_lorenz: lorenz_strictly_dominates(&x, &y).map_err(bad)?,
        lorenz_verdict: lorenz_verdict(&x, &y).map_err(bad)?,
        lex,
        sum_bound: sum_bound_dominates(&x, &y).map_err(bad)?,
        owa,
        lorenz_x: lx,
        lorenz_y: ly,
        x,
        y,
    });
    Ok(Output::report(report, 0))
}
