//! Pareto and generalized Lorenz dominance over cost vectors.
//!
//! Costs are minimized: a smaller vector is a better one. The Lorenz vector
//! of `x` lists the cumulative sums of its components sorted in decreasing
//! order, so its first entry is the worst-case cost and its last entry the
//! total. Lorenz dominance is Pareto dominance between Lorenz vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{write_tuple, CostVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DominanceError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("inadmissible transfer of {eps} from component {from} ({from_value}) to component {to} ({to_value})")]
    InadmissibleTransfer {
        from: usize,
        to: usize,
        from_value: u64,
        to_value: u64,
        eps: u64,
    },
}

/// Cumulative sums of a cost vector's components sorted decreasingly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorenzVector(Vec<u64>);

impl LorenzVector {
    /// Wraps raw cumulative values. No Lorenz-shape check is made; use
    /// [`lorenz_vector`] to derive one from costs.
    pub fn from_raw(values: Vec<u64>) -> Self {
        LorenzVector(values)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Worst-case cost of the originating vector.
    pub fn first(&self) -> u64 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Total cost of the originating vector.
    pub fn last(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Non-decreasing with non-increasing increments (starting from 0).
    pub fn is_well_formed(&self) -> bool {
        let mut prev = 0u64;
        let mut prev_step = u64::MAX;
        for &v in &self.0 {
            if v < prev {
                return false;
            }
            let step = v - prev;
            if step > prev_step {
                return false;
            }
            prev_step = step;
            prev = v;
        }
        true
    }
}

impl fmt::Display for LorenzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Relation of `x` to `y` under some dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    StrictlyDominates,
    /// Each weakly dominates the other (equal vectors, or equal Lorenz vectors).
    Equivalent,
    Incomparable,
    StrictlyDominated,
}

impl DominanceVerdict {
    pub fn from_weak(x_over_y: bool, y_over_x: bool) -> Self {
        match (x_over_y, y_over_x) {
            (true, true) => DominanceVerdict::Equivalent,
            (true, false) => DominanceVerdict::StrictlyDominates,
            (false, true) => DominanceVerdict::StrictlyDominated,
            (false, false) => DominanceVerdict::Incomparable,
        }
    }

    /// The verdict seen from the other side.
    pub fn mirror(self) -> Self {
        match self {
            DominanceVerdict::StrictlyDominates => DominanceVerdict::StrictlyDominated,
            DominanceVerdict::StrictlyDominated => DominanceVerdict::StrictlyDominates,
            other => other,
        }
    }
}

fn check_len(left: usize, right: usize) -> Result<(), DominanceError> {
    if left == right {
        Ok(())
    } else {
        Err(DominanceError::LengthMismatch { left, right })
    }
}

/// Componentwise `a <= b`.
#[inline]
pub(crate) fn weakly_below(a: &[u64], b: &[u64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn weak_pareto_dominates(x: &CostVector, y: &CostVector) -> Result<bool, DominanceError> {
    check_len(x.len(), y.len())?;
    Ok(weakly_below(x.as_slice(), y.as_slice()))
}

pub fn pareto_dominates(x: &CostVector, y: &CostVector) -> Result<bool, DominanceError> {
    check_len(x.len(), y.len())?;
    Ok(weakly_below(x.as_slice(), y.as_slice()) && x != y)
}

pub fn pareto_verdict(x: &CostVector, y: &CostVector) -> Result<DominanceVerdict, DominanceError> {
    check_len(x.len(), y.len())?;
    Ok(DominanceVerdict::from_weak(
        weakly_below(x.as_slice(), y.as_slice()),
        weakly_below(y.as_slice(), x.as_slice()),
    ))
}

pub fn lorenz_vector(x: &CostVector) -> LorenzVector {
    let mut sorted = x.as_slice().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc = 0u64;
    for v in sorted.iter_mut() {
        acc += *v;
        *v = acc;
    }
    LorenzVector(sorted)
}

pub fn lorenz_weakly_dominates(x: &CostVector, y: &CostVector) -> Result<bool, DominanceError> {
    check_len(x.len(), y.len())?;
    Ok(weakly_below(lorenz_vector(x).as_slice(), lorenz_vector(y).as_slice()))
}

/// `x` weakly L-dominates `y` and their Lorenz vectors differ.
pub fn lorenz_strictly_dominates(x: &CostVector, y: &CostVector) -> Result<bool, DominanceError> {
    check_len(x.len(), y.len())?;
    let (lx, ly) = (lorenz_vector(x), lorenz_vector(y));
    Ok(weakly_below(lx.as_slice(), ly.as_slice()) && lx != ly)
}

pub fn lorenz_verdict(x: &CostVector, y: &CostVector) -> Result<DominanceVerdict, DominanceError> {
    check_len(x.len(), y.len())?;
    let (lx, ly) = (lorenz_vector(x), lorenz_vector(y));
    Ok(DominanceVerdict::from_weak(
        weakly_below(lx.as_slice(), ly.as_slice()),
        weakly_below(ly.as_slice(), lx.as_slice()),
    ))
}

/// Lexicographic order on Lorenz vectors; `Less` is the preferred side.
pub fn lex_compare(l: &LorenzVector, m: &LorenzVector) -> Result<Ordering, DominanceError> {
    check_len(l.len(), m.len())?;
    Ok(l.0.cmp(&m.0))
}

/// Moves `eps` from component `from` to component `to`, which requires
/// `x[from] > x[to]` and `eps <= x[from] - x[to]`.
pub fn pigou_dalton_transfer(
    x: &CostVector,
    from: usize,
    to: usize,
    eps: u64,
) -> Result<CostVector, DominanceError> {
    for index in [from, to] {
        if index >= x.len() {
            return Err(DominanceError::IndexOutOfRange { index, len: x.len() });
        }
    }
    let (xi, xj) = (x.as_slice()[from], x.as_slice()[to]);
    if xi <= xj || eps > xi - xj {
        return Err(DominanceError::InadmissibleTransfer {
            from,
            to,
            from_value: xi,
            to_value: xj,
            eps,
        });
    }
    let mut out = x.as_slice().to_vec();
    out[from] -= eps;
    out[to] += eps;
    Ok(CostVector::new(out))
}

/// Cheap sufficient test for `x` strictly L-dominating `y`: the total of `y`
/// exceeds `m` times the worst component of `x`. A `false` answer says nothing.
pub fn sum_bound_dominates(x: &CostVector, y: &CostVector) -> Result<bool, DominanceError> {
    check_len(x.len(), y.len())?;
    Ok(y.total() > x.len() as u128 * u128::from(x.max_component()))
}

/// Indices (in input order) of the elements not strictly P-dominated by any
/// other element. Among duplicates only the first is kept.
pub fn pareto_filter(set: &[CostVector]) -> Vec<usize> {
    non_dominated(set.iter().map(|c| c.as_slice()).collect::<Vec<_>>().as_slice())
}

/// Indices (in input order) of the elements whose Lorenz vector is not
/// strictly dominated. Among elements with identical Lorenz vectors only the
/// first is kept.
pub fn lorenz_filter(set: &[CostVector]) -> Vec<usize> {
    let lorenz: Vec<LorenzVector> = set.iter().map(lorenz_vector).collect();
    non_dominated(lorenz.iter().map(|l| l.as_slice()).collect::<Vec<_>>().as_slice())
}

fn non_dominated(points: &[&[u64]]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points.iter().enumerate().any(|(j, p)| {
                weakly_below(p, points[i]) && (*p != points[i] || j < i)
            })
        })
        .collect()
}
