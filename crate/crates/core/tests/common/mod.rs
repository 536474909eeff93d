//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use robust_paths::dominance::{
    lex_compare, lorenz_strictly_dominates, lorenz_vector, lorenz_weakly_dominates,
    pareto_dominates, pigou_dalton_transfer, sum_bound_dominates,
};
use robust_paths::owa::{owa_value, phi_of_lorenz, OwaWeights, Rational};
use robust_paths::{CostVector, LorenzVector};

/// Every vector of length `m` with components in `0..=max`.
pub fn all_vectors(m: usize, max: u64) -> Vec<CostVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(CostVector::new).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A few strictly decreasing positive weight vectors of length `m`.
pub fn sample_weights(m: usize) -> Vec<OwaWeights> {
    let from = |ws: Vec<Rational>| OwaWeights::from_weights(ws).unwrap();
    let steep = (0..m).map(|i| ratio(1 << (2 * (m - i)), 1)).collect();
    let flat = (0..m).map(|i| ratio(100 + (m - i) as i64, 100)).collect();
    let linear = (0..m).map(|i| ratio((m - i) as i64, 7)).collect();
    vec![from(steep), from(flat), from(linear)]
}

/// Outcome of one axiom over a domain: how many instances were checked and
/// the first few counterexamples.
#[derive(Debug, Default)]
pub struct AxiomReport {
    pub name: &'static str,
    pub checked: u64,
    pub violations: Vec<String>,
}

impl AxiomReport {
    fn new(name: &'static str) -> Self {
        AxiomReport { name, ..Default::default() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.violations.len() < 5 {
            self.violations.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }
}

struct Domain {
    vectors: Vec<CostVector>,
    lorenz: Vec<LorenzVector>,
}

impl Domain {
    fn new(m: usize, max: u64) -> Self {
        let vectors = all_vectors(m, max);
        let lorenz = vectors.iter().map(lorenz_vector).collect();
        Domain { vectors, lorenz }
    }
}

fn strictly_below(a: &LorenzVector, b: &LorenzVector) -> bool {
    a != b && a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x <= y)
}

fn strict_pareto(a: &[u64], b: &[u64]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Runs the dominance and OWA axioms over every vector with `m` in
/// `1..=max_m` and components in `0..=max_component`.
pub fn dominance_axioms(max_m: usize, max_component: u64) -> Vec<AxiomReport> {
    let mut symmetry = AxiomReport::new("symmetry");
    let mut p_implies_l = AxiomReport::new("pareto implies lorenz");
    let mut transfer = AxiomReport::new("transfer improves lorenz");
    let mut chain = AxiomReport::new("strict-L then strict-P chain");
    let mut lex = AxiomReport::new("lex refines lorenz");
    let mut owa_mono = AxiomReport::new("owa strict lorenz monotonicity");
    let mut owa_eq = AxiomReport::new("owa value equals lorenz form");
    let mut owa_sym = AxiomReport::new("owa symmetry");

    for m in 1..=max_m {
        let d = Domain::new(m, max_component);
        let perms = permutations(m);
        let weights = sample_weights(m);
        let values: Vec<Vec<Rational>> = weights
            .iter()
            .map(|w| d.vectors.iter().map(|x| owa_value(x, w).unwrap()).collect())
            .collect();

        for (i, x) in d.vectors.iter().enumerate() {
            for p in &perms {
                let px = CostVector::new(p.iter().map(|&k| x.as_slice()[k]).collect());
                symmetry.check(lorenz_vector(&px) == d.lorenz[i], || format!("{x} vs {px}"));
                for (w, vals) in weights.iter().zip(&values) {
                    owa_sym.check(owa_value(&px, w).unwrap() == vals[i], || format!("{x} {w}"));
                }
            }
            for (w, vals) in weights.iter().zip(&values) {
                owa_eq.check(phi_of_lorenz(&d.lorenz[i], w).unwrap() == vals[i], || {
                    format!("{x} {w}")
                });
            }
            let xs = x.as_slice();
            for from in 0..m {
                for to in 0..m {
                    if xs[from] <= xs[to] {
                        continue;
                    }
                    for eps in 1..=xs[from] - xs[to] {
                        let t = pigou_dalton_transfer(x, from, to, eps).unwrap();
                        transfer.check(lorenz_weakly_dominates(&t, x).unwrap(), || {
                            format!("{x} -> {t}")
                        });
                    }
                }
            }
        }

        for (i, x) in d.vectors.iter().enumerate() {
            for (j, y) in d.vectors.iter().enumerate() {
                if pareto_dominates(x, y).unwrap() {
                    p_implies_l.check(lorenz_strictly_dominates(x, y).unwrap(), || {
                        format!("{x} {y}")
                    });
                }
                if !strictly_below(&d.lorenz[i], &d.lorenz[j]) {
                    continue;
                }
                lex.check(lex_compare(&d.lorenz[i], &d.lorenz[j]).unwrap() == Ordering::Less, || {
                    format!("{x} {y}")
                });
                for (w, vals) in weights.iter().zip(&values) {
                    owa_mono.check(vals[i] < vals[j], || format!("{x} {y} {w}"));
                }
            }
        }

        // x strictly L-dominates y, y strictly P-dominates z.
        for (j, y) in d.vectors.iter().enumerate() {
            let zs: Vec<usize> = (0..d.vectors.len())
                .filter(|&k| strict_pareto(y.as_slice(), d.vectors[k].as_slice()))
                .collect();
            if zs.is_empty() {
                continue;
            }
            for i in 0..d.vectors.len() {
                if !strictly_below(&d.lorenz[i], &d.lorenz[j]) {
                    continue;
                }
                for &k in &zs {
                    chain.check(
                        lorenz_strictly_dominates(&d.vectors[i], &d.vectors[k]).unwrap(),
                        || format!("{} {y} {}", d.vectors[i], d.vectors[k]),
                    );
                }
            }
        }
    }
    vec![symmetry, p_implies_l, transfer, chain, lex, owa_mono, owa_eq, owa_sym]
}

/// Soundness of the sum-bound shortcut over every pair of vectors with `m`
/// in `1..=max_m` and components in `0..=max_component`.
pub fn sum_bound_soundness(max_m: usize, max_component: u64) -> AxiomReport {
    let mut report = AxiomReport::new("sum-bound soundness");
    for m in 1..=max_m {
        let d = Domain::new(m, max_component);
        let totals: Vec<u128> = d.vectors.iter().map(|v| v.total()).collect();
        for (i, x) in d.vectors.iter().enumerate() {
            let bound = m as u128 * u128::from(x.max_component());
            for (j, y) in d.vectors.iter().enumerate() {
                let fires = totals[j] > bound;
                // Compare against the direct definition, then the library shortcut.
                if fires != sum_bound_dominates(x, y).unwrap() {
                    report.check(false, || format!("shortcut disagrees on {x} {y}"));
                }
                if fires {
                    report.check(strictly_below(&d.lorenz[i], &d.lorenz[j]), || format!("{x} {y}"));
                }
            }
        }
    }
    report
}

/// Lorenz vector of a rational vector, sorted decreasingly.
fn rational_lorenz(x: &[Rational]) -> Vec<Rational> {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut acc = Rational::from_integer(0.into());
    sorted
        .into_iter()
        .map(|v| {
            acc += v;
            acc.clone()
        })
        .collect()
}

fn comonotonic(x: &[u64], y: &[u64]) -> bool {
    (0..x.len()).all(|i| {
        (0..x.len()).all(|j| {
            let dx = x[i] as i64 - x[j] as i64;
            let dy = y[i] as i64 - y[j] as i64;
            dx * dy >= 0
        })
    })
}

/// Mixtures of comonotonic pairs combine linearly under the Lorenz map and
/// therefore under the OWA criterion.
pub fn comonotonic_linearity(max_m: usize, max_component: u64) -> AxiomReport {
    let mut report = AxiomReport::new("comonotonic linearity");
    let alphas = [ratio(0, 1), ratio(1, 4), ratio(1, 3), ratio(1, 2), ratio(1, 1)];
    let one = ratio(1, 1);
    for m in 1..=max_m {
        let d = Domain::new(m, max_component);
        let w = &sample_weights(m)[0];
        for (i, x) in d.vectors.iter().enumerate() {
            for (j, y) in d.vectors.iter().enumerate() {
                if !comonotonic(x.as_slice(), y.as_slice()) {
                    continue;
                }
                let (px, py) = (phi_of_lorenz(&d.lorenz[i], w).unwrap(), phi_of_lorenz(&d.lorenz[j], w).unwrap());
                for a in &alphas {
                    let b = &one - a;
                    let mix: Vec<Rational> = x
                        .as_slice()
                        .iter()
                        .zip(y.as_slice())
                        .map(|(&u, &v)| a * ratio(u as i64, 1) + &b * ratio(v as i64, 1))
                        .collect();
                    let lm = rational_lorenz(&mix);
                    let linear = d.lorenz[i]
                        .as_slice()
                        .iter()
                        .zip(d.lorenz[j].as_slice())
                        .map(|(&u, &v)| a * ratio(u as i64, 1) + &b * ratio(v as i64, 1));
                    let lorenz_ok = lm.iter().cloned().eq(linear);
                    let phi_mix: Rational =
                        w.coefficients().iter().zip(&lm).map(|(c, l)| c * l).sum();
                    let phi_ok = phi_mix == a * &px + &b * &py;
                    report.check(lorenz_ok && phi_ok, || format!("{x} {y} alpha={a}"));
                }
            }
        }
    }
    report
}

/// Independent subset-sum check: can `sizes` be split into two halves of
/// equal total?
pub fn has_even_split(sizes: &[u64]) -> bool {
    let total: u64 = sizes.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let mut reachable = vec![false; total as usize + 1];
    reachable[0] = true;
    for &s in sizes {
        for t in (s as usize..=total as usize).rev() {
            reachable[t] |= reachable[t - s as usize];
        }
    }
    reachable[(total / 2) as usize]
}
