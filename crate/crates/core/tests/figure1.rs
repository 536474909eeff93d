use robust_paths::dominance::{lorenz_filter, pareto_filter};
use robust_paths::instances::figure1;
use robust_paths::model::{validate_graph, CostVector, Path};
use robust_paths::oracle::{
    brute_lorenz_set, brute_owa_opt, brute_pareto_set, enumerate_paths, EnumerationLimits,
};
use robust_paths::owa::{format_rational, owa_value, parse_rational, OwaWeights};
use robust_paths::search::{
    build_heuristic, search_lorenz, search_owa, search_pareto, HeuristicKind, PruneRule,
    Rule1Policy, SearchOptions,
};
use robust_paths::LorenzVector;

/// Node sequences and costs of the eleven solution paths, numbered as in the
/// published path table. Path 6 is listed there as (12,11); the arc costs
/// that reproduce every other row and the search trace force (9,11).
const TABLE1: [(&[&str], [u64; 2]); 11] = [
    (&["a", "b", "γ1"], [9, 9]),
    (&["a", "b", "c", "γ1"], [12, 6]),
    (&["a", "b", "c", "γ2"], [10, 7]),
    (&["a", "b", "d", "c", "γ1"], [10, 11]),
    (&["a", "b", "d", "c", "γ2"], [8, 12]),
    (&["a", "b", "d", "γ2"], [9, 11]),
    (&["a", "c", "γ1"], [13, 5]),
    (&["a", "c", "γ2"], [11, 6]),
    (&["a", "d", "c", "γ1"], [6, 11]),
    (&["a", "d", "c", "γ2"], [4, 12]),
    (&["a", "d", "γ2"], [5, 11]),
];

fn cv(v: [u64; 2]) -> CostVector {
    CostVector::from(v)
}

fn lv(v: [u64; 2]) -> LorenzVector {
    LorenzVector::from_raw(v.to_vec())
}

fn table_costs() -> Vec<CostVector> {
    TABLE1.iter().map(|(_, c)| cv(*c)).collect()
}

#[test]
fn graph_flags() {
    let g = figure1();
    let report = validate_graph(&g.to_file());
    assert!(report.ok && report.strictly_positive && report.is_dag);
}

#[test]
fn path_costs_match_table() {
    let g = figure1();
    for (nodes, cost) in TABLE1 {
        let path = Path::from_nodes(&g, nodes).unwrap();
        assert_eq!(path.cost(), &cv(cost), "{nodes:?}");
    }
    assert_eq!(Path::empty(&g).cost(), &CostVector::zeros(2));
}

#[test]
fn enumeration_matches_table_node_sequences() {
    let g = figure1();
    let paths = enumerate_paths(&g, &EnumerationLimits::default()).unwrap();
    let mut found: Vec<Vec<String>> = paths.iter().map(|p| p.node_names(&g)).collect();
    let mut expected: Vec<Vec<String>> = TABLE1
        .iter()
        .map(|(n, _)| n.iter().map(|s| s.to_string()).collect())
        .collect();
    found.sort();
    expected.sort();
    assert_eq!(found, expected);
}

#[test]
fn pareto_and_lorenz_filters_on_table() {
    let costs = table_costs();
    let mut pareto: Vec<usize> = pareto_filter(&costs).into_iter().map(|i| i + 1).collect();
    pareto.sort();
    assert_eq!(pareto, vec![1, 3, 7, 8, 10, 11]);
    let mut lorenz: Vec<usize> = lorenz_filter(&costs).into_iter().map(|i| i + 1).collect();
    lorenz.sort();
    assert_eq!(lorenz, vec![1, 3, 11]);

    // The published (12,11) for path 6 changes neither frontier.
    let mut published = costs.clone();
    published[5] = cv([12, 11]);
    assert_eq!(pareto_filter(&published), pareto_filter(&costs));
    assert_eq!(lorenz_filter(&published), lorenz_filter(&costs));
}

#[test]
fn oracle_frontiers() {
    let g = figure1();
    let limits = EnumerationLimits::default();
    let mut pareto: Vec<CostVector> =
        brute_pareto_set(&g, &limits).unwrap().into_iter().map(|p| p.cost).collect();
    pareto.sort();
    let mut expected: Vec<CostVector> =
        [[4, 12], [5, 11], [9, 9], [10, 7], [11, 6], [13, 5]].map(cv).to_vec();
    expected.sort();
    assert_eq!(pareto, expected);

    let lorenz: Vec<LorenzVector> =
        brute_lorenz_set(&g, &limits).unwrap().into_iter().map(|c| c.lorenz).collect();
    assert_eq!(lorenz, vec![lv([9, 18]), lv([10, 17]), lv([11, 16])]);
}

#[test]
fn heuristic_sets() {
    let g = figure1();
    let a = g.node_id("a").unwrap();
    let arc = build_heuristic(&g, HeuristicKind::Arc);
    assert_eq!(arc.at(a), &[cv([5, 3]), cv([2, 6])]);
    let zero = build_heuristic(&g, HeuristicKind::Zero);
    assert!(zero.sets().iter().all(|s| s == &[CostVector::zeros(2)]));

    // Per-scenario minima over the enumerated paths from a.
    let paths = enumerate_paths(&g, &EnumerationLimits::default()).unwrap();
    let min_in = |s: usize| paths.iter().map(|p| p.cost().as_slice()[s]).min().unwrap();
    assert_eq!((min_in(0), min_in(1)), (4, 5));
    let ideal = build_heuristic(&g, HeuristicKind::IdealPoint);
    assert_eq!(ideal.at(a), &[cv([4, 5])]);
    for goal in g.goals() {
        assert_eq!(ideal.at(*goal), &[CostVector::zeros(2)]);
        assert_eq!(arc.at(*goal), &[CostVector::zeros(2)]);
    }
}

#[test]
fn lorenz_search_solutions() {
    let g = figure1();
    let h = build_heuristic(&g, HeuristicKind::Arc);
    let r = search_lorenz(&g, &h, &SearchOptions::default()).unwrap();
    let got: Vec<(Vec<String>, CostVector, LorenzVector)> = r
        .solutions
        .iter()
        .map(|s| (s.path.node_names(&g), s.cost.clone(), s.lorenz.clone()))
        .collect();
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(
        got,
        vec![
            (names(&["a", "b", "γ1"]), cv([9, 9]), lv([9, 18])),
            (names(&["a", "b", "c", "γ2"]), cv([10, 7]), lv([10, 17])),
            (names(&["a", "d", "γ2"]), cv([5, 11]), lv([11, 16])),
        ]
    );
    assert_eq!(r.stats.goals_rejected, 0);
}

const TABLE2: [(&str, [u64; 2], [u64; 2]); 7] = [
    ("a", [0, 0], [5, 8]),
    ("b", [5, 3], [6, 12]),
    ("γ1", [9, 9], [9, 18]),
    ("d", [2, 6], [10, 13]),
    ("c", [9, 5], [10, 17]),
    ("γ2", [10, 7], [10, 17]),
    ("γ2", [5, 11], [11, 16]),
];

fn expanded(policy: Rule1Policy) -> robust_paths::SearchResult {
    let g = figure1();
    let h = build_heuristic(&g, HeuristicKind::Arc);
    let opts = SearchOptions { rule1_policy: policy, ..SearchOptions::traced() };
    search_lorenz(&g, &h, &opts).unwrap()
}

#[test]
fn trace_matches_published_rows_under_both_policies() {
    for policy in [Rule1Policy::PerMember, Rule1Policy::LexBest] {
        let r = expanded(policy);
        let rows: Vec<(String, CostVector, LorenzVector)> = r
            .trace
            .as_ref()
            .unwrap()
            .iter()
            .map(|t| (t.node.clone(), t.g.clone(), t.f.clone()))
            .collect();
        let expected: Vec<(String, CostVector, LorenzVector)> = TABLE2
            .iter()
            .map(|(n, g, f)| (n.to_string(), cv(*g), lv(*f)))
            .collect();
        assert_eq!(rows, expected, "{policy:?}");
        let iterations: Vec<usize> = r.trace.as_ref().unwrap().iter().map(|t| t.iteration).collect();
        assert_eq!(iterations, (1..=7).collect::<Vec<_>>());
        assert_eq!(r.stats.iterations, 8);
    }
}

#[test]
fn trace_tsv_rows() {
    let r = expanded(Rule1Policy::PerMember);
    let tsv = r.trace_tsv().unwrap();
    let first: Vec<&str> = tsv.lines().take(3).collect();
    assert_eq!(first, vec!["a\tg=[0,0]\tL(f)=[5,8]", "b\tg=[5,3]\tL(f)=[6,12]", "γ1\tg=[9,9]\tL(f)=[9,18]"]);
}

fn prune_summary(r: &robust_paths::SearchResult) -> Vec<(usize, String, CostVector, PruneRule, Vec<LorenzVector>)> {
    r.prunes
        .as_ref()
        .unwrap()
        .iter()
        .map(|p| (p.iteration, p.node.clone(), p.g.clone(), p.rule, p.against.clone()))
        .collect()
}

#[test]
fn lex_best_policy_reproduces_published_prunes() {
    let r = expanded(Rule1Policy::LexBest);
    assert_eq!(
        prune_summary(&r),
        vec![
            (3, "d".to_string(), cv([6, 6]), PruneRule::Rule2, vec![]),
            (6, "γ1".to_string(), cv([12, 6]), PruneRule::Rule1, vec![lv([9, 18])]),
            (7, "c".to_string(), cv([10, 4]), PruneRule::Rule1, vec![lv([10, 17])]),
            (7, "c".to_string(), cv([3, 10]), PruneRule::Rule1, vec![lv([10, 17])]),
        ]
    );
}

#[test]
fn per_member_policy_defers_one_prune() {
    // The completion (3,10) + (1,2) = (4,12) has Lorenz vector (12,16), which
    // neither (9,18) nor (10,17) covers; only (11,16) does.
    let r = expanded(Rule1Policy::PerMember);
    assert_eq!(
        prune_summary(&r),
        vec![
            (3, "d".to_string(), cv([6, 6]), PruneRule::Rule2, vec![]),
            (6, "γ1".to_string(), cv([12, 6]), PruneRule::Rule1, vec![lv([9, 18])]),
            (7, "c".to_string(), cv([10, 4]), PruneRule::Rule1, vec![lv([10, 17]), lv([9, 18])]),
            (8, "c".to_string(), cv([3, 10]), PruneRule::Rule1, vec![lv([10, 17]), lv([11, 16])]),
        ]
    );
    assert_eq!(r.stats.pruned_rule1, 3);
    assert_eq!(r.stats.pruned_rule2, 1);
    assert_eq!(r.stats.labels_expanded, 7);
}

#[test]
fn pareto_mode_returns_six() {
    let g = figure1();
    let h = build_heuristic(&g, HeuristicKind::Arc);
    let r = search_pareto(&g, &h, &SearchOptions::default()).unwrap();
    let mut costs: Vec<CostVector> = r.solutions.iter().map(|s| s.cost.clone()).collect();
    costs.sort();
    let mut expected: Vec<CostVector> =
        [[4, 12], [5, 11], [9, 9], [10, 7], [11, 6], [13, 5]].map(cv).to_vec();
    expected.sort();
    assert_eq!(costs, expected);
}

#[test]
fn owa_example() {
    let g = figure1();
    let w = OwaWeights::parse_phi("0.9,1.0").unwrap();
    let h = build_heuristic(&g, HeuristicKind::Arc);
    let r = search_owa(&g, &w, &h, &SearchOptions::traced()).unwrap();
    let best = r.best().unwrap();
    assert_eq!(best.path.node_names(&g), vec!["a", "b", "γ1"]);
    assert_eq!(best.cost, cv([9, 9]));
    assert_eq!(best.value, Some(parse_rational("9").unwrap()));
    assert_eq!(r.stats.labels_expanded, 3);
    let trace = r.trace.as_ref().unwrap();
    assert!(trace[2].solution && trace[2].node == "γ1");
    // Everything still open after detection is valued above 9 and dropped.
    let nine = parse_rational("9").unwrap();
    for p in r.prunes.as_ref().unwrap().iter().filter(|p| p.rule == PruneRule::Incumbent) {
        assert_eq!(p.iteration, 4);
        let v = robust_paths::owa::phi_of_lorenz(&p.f, &w).unwrap();
        assert!(v > nine, "{} valued {}", p.node, format_rational(&v));
    }
    assert_eq!(r.stats.pruned_incumbent, 3);
}

#[test]
fn owa_matches_enumeration_for_other_weights() {
    let g = figure1();
    let h = build_heuristic(&g, HeuristicKind::Arc);
    let costs = table_costs();
    for phi in ["0.55,1", "0.6,1", "0.9,1", "3,4"] {
        let w = OwaWeights::parse_phi(phi).unwrap();
        // Hand evaluation over the eleven table rows.
        let best = costs.iter().map(|c| owa_value(c, &w).unwrap()).min().unwrap();
        let (_, brute) = brute_owa_opt(&g, &w, &EnumerationLimits::default()).unwrap().unwrap();
        assert_eq!(brute, best, "{phi}");
        let r = search_owa(&g, &w, &h, &SearchOptions::default()).unwrap();
        assert_eq!(r.best().unwrap().value.as_ref(), Some(&best), "{phi}");
    }
    // w = (0.55, 0.45): (5,11) scores 8.3, ahead of (4,12) at 8.4 and
    // (10,7) at 8.65.
    let w = OwaWeights::parse_phi("0.55,1").unwrap();
    let r = search_owa(&g, &w, &h, &SearchOptions::default()).unwrap();
    assert_eq!(r.best().unwrap().cost, cv([5, 11]));
    assert_eq!(format_rational(r.best().unwrap().value.as_ref().unwrap()), "8.3");
}
