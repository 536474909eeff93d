//! Ordered weighted averages with strictly decreasing positive weights, in
//! both their cost-vector form and their linear form over Lorenz vectors.
//!
//! Weights are given either as the values `phi_1..phi_m` of the criterion on
//! the Lorenz generator vectors (with `phi_0 = 0`) or directly as
//! `w_i = phi_i - phi_{i-1}`. The Lorenz-side coefficients are
//! `c_i = 2 phi_i - phi_{i-1} - phi_{i+1}` with `phi_{m+1} = phi_m`, which
//! makes `c_i = w_i - w_{i+1}` and `c_m = w_m`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dominance::{lorenz_vector, LorenzVector};
use crate::model::CostVector;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OwaError {
    #[error("at least one weight is required")]
    Empty,
    #[error("cannot parse {0:?} as an exact rational")]
    Parse(String),
    #[error("w_{index} > 0 violated: w_{index} = {value}")]
    NonPositive { index: usize, value: String },
    #[error("w_{index} > w_{next} violated: {value} <= {next_value}", next = .index + 1)]
    NotStrictlyDecreasing {
        index: usize,
        value: String,
        next_value: String,
    },
    #[error("dimension mismatch: weights have {weights} entries, vector has {vector}")]
    DimensionMismatch { weights: usize, vector: usize },
}

/// Validated OWA weights. Indices in error messages are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct OwaWeights {
    phi: Vec<Rational>,
    weights: Vec<Rational>,
    coefficients: Vec<Rational>,
}

impl OwaWeights {
    /// Validates `phi_1..phi_m`.
    pub fn from_phi(phi: Vec<Rational>) -> Result<Self, OwaError> {
        if phi.is_empty() {
            return Err(OwaError::Empty);
        }
        let mut prev = Rational::zero();
        let weights: Vec<Rational> = phi
            .iter()
            .map(|p| {
                let w = p - &prev;
                prev = p.clone();
                w
            })
            .collect();
        Self::from_parts(phi, weights)
    }

    /// Validates `w_1..w_m` directly.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self, OwaError> {
        if weights.is_empty() {
            return Err(OwaError::Empty);
        }
        let mut acc = Rational::zero();
        let phi = weights
            .iter()
            .map(|w| {
                acc += w;
                acc.clone()
            })
            .collect();
        Self::from_parts(phi, weights)
    }

    fn from_parts(phi: Vec<Rational>, weights: Vec<Rational>) -> Result<Self, OwaError> {
        let m = weights.len();
        for (i, pair) in weights.windows(2).enumerate() {
            if pair[0] <= pair[1] {
                return Err(OwaError::NotStrictlyDecreasing {
                    index: i + 1,
                    value: format_rational(&pair[0]),
                    next_value: format_rational(&pair[1]),
                });
            }
        }
        if !weights[m - 1].is_positive() {
            return Err(OwaError::NonPositive {
                index: m,
                value: format_rational(&weights[m - 1]),
            });
        }
        let coefficients = (0..m)
            .map(|i| {
                if i + 1 < m {
                    &weights[i] - &weights[i + 1]
                } else {
                    weights[i].clone()
                }
            })
            .collect();
        Ok(OwaWeights {
            phi,
            weights,
            coefficients,
        })
    }

    pub fn parse_phi(text: &str) -> Result<Self, OwaError> {
        Self::from_phi(parse_rational_list(text)?)
    }

    pub fn parse_weights(text: &str) -> Result<Self, OwaError> {
        Self::from_weights(parse_rational_list(text)?)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn phi(&self) -> &[Rational] {
        &self.phi
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Multipliers of `L_1..L_m` in the linear form.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }
}

impl fmt::Display for OwaWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(format_rational).collect();
        write!(f, "w=({})", parts.join(", "))
    }
}

/// `sum_i c_i * L_i`.
pub fn phi_of_lorenz(lorenz: &LorenzVector, weights: &OwaWeights) -> Result<Rational, OwaError> {
    if lorenz.len() != weights.len() {
        return Err(OwaError::DimensionMismatch {
            weights: weights.len(),
            vector: lorenz.len(),
        });
    }
    Ok(dot(&weights.coefficients, lorenz.as_slice()))
}

/// `sum_i w_i * x_(i)` with `x` sorted decreasingly.
pub fn owa_value(x: &CostVector, weights: &OwaWeights) -> Result<Rational, OwaError> {
    if x.len() != weights.len() {
        return Err(OwaError::DimensionMismatch {
            weights: weights.len(),
            vector: x.len(),
        });
    }
    let mut sorted = x.as_slice().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(dot(&weights.weights, &sorted))
}

/// Same as [`owa_value`] but through the Lorenz form; used by the searches,
/// which already hold the Lorenz vector.
pub(crate) fn value_of_lorenz(lorenz: &LorenzVector, weights: &OwaWeights) -> Rational {
    dot(&weights.coefficients, lorenz.as_slice())
}

fn dot(coefficients: &[Rational], values: &[u64]) -> Rational {
    coefficients
        .iter()
        .zip(values)
        .fold(Rational::zero(), |acc, (c, &v)| acc + c * Rational::from_integer(BigInt::from(v)))
}

/// Convenience for callers holding a cost vector: `phi(L(x))`.
pub fn phi_of_costs(x: &CostVector, weights: &OwaWeights) -> Result<Rational, OwaError> {
    phi_of_lorenz(&lorenz_vector(x), weights)
}

/// Parses `"0.9"`, `"-2"`, `"1e-3"`-free decimals or `"9/10"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, OwaError> {
    let t = text.trim();
    let err = || OwaError::Parse(text.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>, OwaError> {
    text.split(',').map(parse_rational).collect()
}

/// Exact rendering: an integer or terminating decimal when possible,
/// otherwise `p/q`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let mut den = value.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    fn cv(v: &[u64]) -> CostVector {
        CostVector::new(v.to_vec())
    }

    #[test]
    fn parses_decimals_and_fractions_exactly() {
        assert_eq!(r("0.9"), Rational::new(9.into(), 10.into()));
        assert_eq!(r("9/10"), r("0.90"));
        assert_eq!(r("1"), Rational::one());
        assert_eq!(r(".5"), Rational::new(1.into(), 2.into()));
        assert_eq!(r("-1.25"), Rational::new((-5).into(), 4.into()));
        for bad in ["", "x", "1.2.3", "1/0", "0.9e1", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_exactly() {
        assert_eq!(format_rational(&r("9")), "9");
        assert_eq!(format_rational(&r("9.7")), "9.7");
        assert_eq!(format_rational(&r("1/3")), "1/3");
        assert_eq!(format_rational(&r("0.05")), "0.05");
        assert_eq!(format_rational(&r("-1/8")), "-0.125");
    }

    #[test]
    fn validates_example_phi() {
        let w = OwaWeights::parse_phi("0.9,1").unwrap();
        assert_eq!(w.weights(), &[r("0.9"), r("0.1")]);
        assert_eq!(w.coefficients(), &[r("0.8"), r("0.1")]);
    }

    #[test]
    fn rejects_non_strict_and_non_positive() {
        let err = OwaWeights::parse_phi("1,2").unwrap_err();
        assert!(matches!(err, OwaError::NotStrictlyDecreasing { index: 1, .. }));
        assert_eq!(err.to_string(), "w_1 > w_2 violated: 1 <= 1");
        assert!(OwaWeights::parse_phi("0.5,1").is_err());
        assert!(matches!(
            OwaWeights::parse_weights("0.5,0"),
            Err(OwaError::NonPositive { index: 2, .. })
        ));
        assert!(matches!(
            OwaWeights::parse_weights("0.5,0.6"),
            Err(OwaError::NotStrictlyDecreasing { .. })
        ));
        assert_eq!(OwaWeights::from_phi(vec![]), Err(OwaError::Empty));
        assert!(OwaWeights::parse_weights("3").is_ok());
        assert!(OwaWeights::parse_weights("-3").is_err());
    }

    #[test]
    fn phi_of_lorenz_examples() {
        let w = OwaWeights::parse_phi("0.9,1").unwrap();
        assert_eq!(phi_of_lorenz(&LorenzVector::from_raw(vec![9, 18]), &w).unwrap(), r("9"));
        assert_eq!(phi_of_lorenz(&LorenzVector::from_raw(vec![0, 0]), &w).unwrap(), r("0"));
        assert_eq!(phi_of_lorenz(&LorenzVector::from_raw(vec![10, 17]), &w).unwrap(), r("9.7"));
        assert_eq!(owa_value(&cv(&[10, 7]), &w).unwrap(), r("9.7"));
        assert!(phi_of_lorenz(&LorenzVector::from_raw(vec![1]), &w).is_err());
    }

    #[test]
    fn owa_value_examples() {
        let w = OwaWeights::parse_phi("0.9,1").unwrap();
        assert_eq!(owa_value(&cv(&[9, 9]), &w).unwrap(), r("9"));
        assert_eq!(owa_value(&cv(&[5, 11]), &w).unwrap(), r("10.4"));
        let w3 = OwaWeights::parse_weights("0.5,0.3,0.2").unwrap();
        assert_eq!(owa_value(&cv(&[4, 4, 4]), &w3).unwrap(), r("4"));
        let unnormalized = OwaWeights::parse_weights("5,2").unwrap();
        assert_eq!(owa_value(&cv(&[3, 3]), &unnormalized).unwrap(), r("21"));
        assert!(owa_value(&cv(&[1, 2, 3]), &w).is_err());
    }
}
