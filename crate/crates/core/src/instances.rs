//! Instance generators: the worked example graph, the staged families with
//! closed-form path-cost sets, the partition reduction, and seeded random
//! layered DAGs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::model::{CostVector, GraphBuilder, ModelError, ScenarioGraph};

/// Largest stage count accepted by the staged families.
pub const MAX_STAGES: u32 = 20;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("stage count {0} outside 1..={MAX_STAGES}")]
    StageCount(u32),
    #[error("partition sizes must be non-empty and positive")]
    Sizes,
    #[error("random graph parameter out of range: {0}")]
    RandomParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The six-node, two-scenario example graph. Arc costs are the ones
/// consistent with the published path table and search trace.
pub fn figure1() -> ScenarioGraph {
    GraphBuilder::new(2)
        .source("a")
        .node("b")
        .node("c")
        .node("d")
        .goal("γ1")
        .goal("γ2")
        .arc("a", "b", &[5, 3])
        .arc("a", "c", &[10, 4])
        .arc("a", "d", &[2, 6])
        .arc("b", "γ1", &[4, 6])
        .arc("b", "c", &[4, 2])
        .arc("b", "d", &[1, 3])
        .arc("d", "c", &[1, 4])
        .arc("d", "γ2", &[3, 5])
        .arc("c", "γ1", &[3, 1])
        .arc("c", "γ2", &[1, 2])
        .meta(json!({
            "family": "figure1",
            "expected": { "paths": 11, "pareto": 6, "lorenz_classes": 3 }
        }))
        .build()
        .expect("static graph is valid")
}

fn check_stages(p: u32) -> Result<(), InstanceError> {
    if (1..=MAX_STAGES).contains(&p) {
        Ok(())
    } else {
        Err(InstanceError::StageCount(p))
    }
}

/// `p` stages, stage `i` offering `(2^(i-1), 0)` or `(0, 2^(i-1))`. Path
/// costs are exactly `{(x, 2^p - 1 - x)}`.
pub fn hansen(p: u32) -> Result<ScenarioGraph, InstanceError> {
    check_stages(p)?;
    let mut b = GraphBuilder::new(2).source("1");
    for i in 1..=p {
        let (from, to) = (i.to_string(), (i + 1).to_string());
        let w = 1u64 << (i - 1);
        b = b.arc(&from, &to, &[w, 0]).arc(&from, &to, &[0, w]);
    }
    let n = 1u64 << p;
    Ok(b
        .goal(&(p + 1).to_string())
        .meta(json!({
            "family": "hansen",
            "p": p,
            "expected": { "paths": n, "pareto": n, "lorenz_classes": 1 }
        }))
        .build()?)
}

/// `p` stages offering `(2^i, 0)` or `(0, 2^(i-1))`, then a closing arc
/// `(0, 2^(p+1) + 1)`. Path costs are exactly `{(2x, 3*2^p - x)}`, all with
/// distinct, mutually non-dominated Lorenz vectors.
pub fn antilorenz(p: u32) -> Result<ScenarioGraph, InstanceError> {
    check_stages(p)?;
    let mut b = GraphBuilder::new(2).source("0");
    for i in 1..=p {
        let (from, to) = ((i - 1).to_string(), i.to_string());
        b = b
            .arc(&from, &to, &[1u64 << i, 0])
            .arc(&from, &to, &[0, 1u64 << (i - 1)]);
    }
    let last = (p + 1).to_string();
    b = b.arc(&p.to_string(), &last, &[0, (1u64 << (p + 1)) + 1]);
    let n = 1u64 << p;
    Ok(b
        .goal(&last)
        .meta(json!({
            "family": "antilorenz",
            "p": p,
            "expected": { "paths": n, "pareto": n, "lorenz_classes": n }
        }))
        .build()?)
}

#[derive(Debug, Clone)]
pub struct PartitionInstance {
    pub graph: ScenarioGraph,
    pub target: CostVector,
    /// Sizes as placed on the arcs (after scaling).
    pub sizes: Vec<u64>,
    /// 2 when the input total was odd and every size was doubled, else 1.
    pub scale: u64,
}

/// One stage per item offering `(s, 0)` or `(0, s)`; the target is
/// `(S/2, S/2)`. A path reaches the target's Lorenz vector exactly when its
/// item choice splits the sizes evenly.
pub fn partition_reduction(sizes: &[u64]) -> Result<PartitionInstance, InstanceError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(InstanceError::Sizes);
    }
    let total: u64 = sizes.iter().sum();
    let scale = if total % 2 == 1 { 2 } else { 1 };
    let scaled: Vec<u64> = sizes.iter().map(|s| s * scale).collect();
    let half = total * scale / 2;
    let mut b = GraphBuilder::new(2).source("1");
    for (i, &s) in scaled.iter().enumerate() {
        let (from, to) = ((i + 1).to_string(), (i + 2).to_string());
        b = b.arc(&from, &to, &[s, 0]).arc(&from, &to, &[0, s]);
    }
    let graph = b
        .goal(&(scaled.len() + 1).to_string())
        .meta(json!({
            "family": "partition",
            "sizes": sizes,
            "scale": scale,
            "target": [half, half]
        }))
        .build()?;
    Ok(PartitionInstance {
        graph,
        target: CostVector::new(vec![half, half]),
        sizes: scaled,
        scale,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomParams {
    pub nodes: usize,
    pub density: f64,
    pub cost_min: u64,
    pub cost_max: u64,
    pub scenarios: usize,
    pub seed: u64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            nodes: 10,
            density: 0.5,
            cost_min: 1,
            cost_max: 9,
            scenarios: 2,
            seed: 0,
        }
    }
}

/// Seeded layered DAG. The source is the only node of layer 0 and the goals
/// are the last layer. Every node of a layer has an arc into the next layer
/// and an arc from the previous one; further forward arcs appear with
/// probability `density` (next layer) or `density / 3` (skipping layers).
pub fn random_graph(params: &RandomParams) -> Result<ScenarioGraph, InstanceError> {
    let bad = |what: &str| Err(InstanceError::RandomParameter(what.to_string()));
    if params.nodes < 2 {
        return bad("nodes must be at least 2");
    }
    if !(params.density > 0.0 && params.density <= 1.0) {
        return bad("density must lie in (0, 1]");
    }
    if params.cost_min < 1 || params.cost_max > 99 || params.cost_min > params.cost_max {
        return bad("cost range must lie within [1, 99]");
    }
    if params.scenarios == 0 {
        return bad("scenario count must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let inner = params.nodes - 1;
    let layer_count = rng.gen_range(1..=inner.min(1 + inner / 2));
    let mut layer_of: Vec<usize> = (0..inner).map(|i| 1 + i % layer_count).collect();
    layer_of.shuffle(&mut rng);
    let mut layers: Vec<Vec<usize>> = vec![vec![0]];
    layers.extend((1..=layer_count).map(|_| Vec::new()));
    for (i, &l) in layer_of.iter().enumerate() {
        layers[l].push(i + 1);
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }

    let name = |i: usize| format!("n{i}");
    let mut b = GraphBuilder::new(params.scenarios).source(&name(0));
    for i in 1..params.nodes {
        b = b.node(&name(i));
    }
    let cost = |rng: &mut ChaCha8Rng| -> Vec<u64> {
        (0..params.scenarios)
            .map(|_| rng.gen_range(params.cost_min..=params.cost_max))
            .collect()
    };
    for k in 0..layer_count {
        let next = &layers[k + 1];
        let mut has_in = vec![false; next.len()];
        for &u in &layers[k] {
            let mut any = false;
            for (j, &v) in next.iter().enumerate() {
                if rng.gen_bool(params.density) {
                    b = b.arc(&name(u), &name(v), &cost(&mut rng));
                    has_in[j] = true;
                    any = true;
                }
            }
            if !any {
                let j = rng.gen_range(0..next.len());
                b = b.arc(&name(u), &name(next[j]), &cost(&mut rng));
                has_in[j] = true;
            }
            for later in &layers[(k + 2).min(layers.len())..] {
                for &v in later {
                    if rng.gen_bool(params.density / 3.0) {
                        b = b.arc(&name(u), &name(v), &cost(&mut rng));
                    }
                }
            }
        }
        for (j, &v) in next.iter().enumerate() {
            if !has_in[j] {
                let u = *layers[k].choose(&mut rng).expect("layers are non-empty");
                b = b.arc(&name(u), &name(v), &cost(&mut rng));
            }
        }
    }
    for &g in &layers[layer_count] {
        b = b.goal(&name(g));
    }
    Ok(b
        .meta(json!({
            "family": "random",
            "nodes": params.nodes,
            "density": params.density.to_string(),
            "cost_range": [params.cost_min, params.cost_max],
            "m": params.scenarios,
            "seed": params.seed,
            "layers": layer_count + 1
        }))
        .build()?)
}

/// Which generator to run, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Figure1,
    Hansen { p: u32 },
    Antilorenz { p: u32 },
    Partition { sizes: Vec<u64> },
    Random(RandomParams),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<ScenarioGraph, InstanceError> {
        match self {
            GeneratorSpec::Figure1 => Ok(figure1()),
            GeneratorSpec::Hansen { p } => hansen(*p),
            GeneratorSpec::Antilorenz { p } => antilorenz(*p),
            GeneratorSpec::Partition { sizes } => Ok(partition_reduction(sizes)?.graph),
            GeneratorSpec::Random(params) => random_graph(params),
        }
    }
}
