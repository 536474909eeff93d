//! Robust path search in graphs whose arc costs depend on discrete scenarios.
//!
//! A path is judged by its vector of scenario costs. The library finds every
//! path whose cost distribution is not generalized-Lorenz dominated (one per
//! Lorenz vector), and paths minimizing an ordered weighted average with
//! strictly decreasing positive weights, which refines Lorenz dominance.
//!
//! * [`model`]: cost vectors, graphs, paths, labels
//! * [`dominance`]: Pareto and Lorenz relations and frontier filters
//! * [`owa`]: exact OWA weights and values
//! * [`search`]: the label-expanding best-first search
//! * [`oracle`]: brute-force enumeration for cross-checking
//! * [`instances`]: example graphs and generators

pub mod dominance;
pub mod instances;
pub mod model;
pub mod oracle;
pub mod owa;
pub mod search;

pub use dominance::{lorenz_vector, DominanceVerdict, LorenzVector};
pub use model::{CostVector, GraphFile, Path, ScenarioGraph};
pub use owa::{OwaWeights, Rational};
pub use search::{
    build_heuristic, search_lorenz, search_owa, search_pareto, HeuristicKind, HeuristicTable,
    SearchOptions, SearchResult,
};
