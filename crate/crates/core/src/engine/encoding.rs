//! Search-space encodings and the values that live in them.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodingError {
    #[error("encoding length must be at least 1")]
    Empty,
    #[error("real bound {index} is not a proper interval: [{lower}, {upper}]")]
    BadRealBound { index: usize, lower: f64, upper: f64 },
    #[error("integer slot {index} has an empty range: [{lower}, {upper}]")]
    EmptyIntegerRange { index: usize, lower: i64, upper: i64 },
}

/// Closed real interval `[lower, upper]` with `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && x >= self.lower && x <= self.upper
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }

    fn is_proper(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper
    }
}

/// One position of a mixed array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Slot {
    /// Inclusive integer range.
    Integer { lower: i64, upper: i64 },
    Real { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Encoding {
    Bitstring { length: usize },
    Permutation { length: usize },
    RealVector { bounds: Vec<Bounds> },
    Mixed { slots: Vec<Slot> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    Bitstring,
    Permutation,
    RealVector,
    Mixed,
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EncodingKind::Bitstring => "bitstring",
            EncodingKind::Permutation => "permutation",
            EncodingKind::RealVector => "real-vector",
            EncodingKind::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// A single gene of a mixed array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gene {
    Int(i64),
    Real(f64),
}

/// An encoding-conformant value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Genome {
    Bits(Vec<bool>),
    Permutation(Vec<usize>),
    Real(Vec<f64>),
    Mixed(Vec<Gene>),
}

impl Genome {
    pub fn len(&self) -> usize {
        match self {
            Genome::Bits(v) => v.len(),
            Genome::Permutation(v) => v.len(),
            Genome::Real(v) => v.len(),
            Genome::Mixed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_bits(&self) -> Option<&[bool]> {
        match self {
            Genome::Bits(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_permutation(&self) -> Option<&[usize]> {
        match self {
            Genome::Permutation(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Genome::Real(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_mixed(&self) -> Option<&[Gene]> {
        match self {
            Genome::Mixed(v) => Some(v),
            _ => None,
        }
    }
}

impl Encoding {
    pub fn bitstring(length: usize) -> Self {
        Encoding::Bitstring { length }
    }

    pub fn permutation(length: usize) -> Self {
        Encoding::Permutation { length }
    }

    pub fn real_vector(bounds: Vec<Bounds>) -> Self {
        Encoding::RealVector { bounds }
    }

    /// `dims` copies of the same interval.
    pub fn real_box(dims: usize, lower: f64, upper: f64) -> Self {
        Encoding::RealVector {
            bounds: vec![Bounds::new(lower, upper); dims],
        }
    }

    pub fn mixed(slots: Vec<Slot>) -> Self {
        Encoding::Mixed { slots }
    }

    pub fn kind(&self) -> EncodingKind {
        match self {
            Encoding::Bitstring { .. } => EncodingKind::Bitstring,
            Encoding::Permutation { .. } => EncodingKind::Permutation,
            Encoding::RealVector { .. } => EncodingKind::RealVector,
            Encoding::Mixed { .. } => EncodingKind::Mixed,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Encoding::Bitstring { length } | Encoding::Permutation { length } => *length,
            Encoding::RealVector { bounds } => bounds.len(),
            Encoding::Mixed { slots } => slots.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks the encoding itself: nonempty, proper real bounds, nonempty integer ranges.
    pub fn validate(&self) -> Result<(), EncodingError> {
        if self.is_empty() {
            return Err(EncodingError::Empty);
        }
        match self {
            Encoding::RealVector { bounds } => {
                for (index, b) in bounds.iter().enumerate() {
                    if !b.is_proper() {
                        return Err(EncodingError::BadRealBound {
                            index,
                            lower: b.lower,
                            upper: b.upper,
                        });
                    }
                }
            }
            Encoding::Mixed { slots } => {
                for (index, slot) in slots.iter().enumerate() {
                    match *slot {
                        Slot::Integer { lower, upper } if lower > upper => {
                            return Err(EncodingError::EmptyIntegerRange { index, lower, upper });
                        }
                        Slot::Real { lower, upper } if !Bounds::new(lower, upper).is_proper() => {
                            return Err(EncodingError::BadRealBound { index, lower, upper });
                        }
                        _ => {}
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// True iff `value` has the right kind and length, respects bounds, and
    /// (for permutations) contains every index exactly once.
    pub fn conforms(&self, value: &Genome) -> bool {
        match (self, value) {
            (Encoding::Bitstring { length }, Genome::Bits(bits)) => bits.len() == *length,
            (Encoding::Permutation { length }, Genome::Permutation(perm)) => {
                is_permutation(perm) && perm.len() == *length
            }
            (Encoding::RealVector { bounds }, Genome::Real(xs)) => {
                xs.len() == bounds.len() && xs.iter().zip(bounds).all(|(x, b)| b.contains(*x))
            }
            (Encoding::Mixed { slots }, Genome::Mixed(genes)) => {
                genes.len() == slots.len()
                    && genes.iter().zip(slots).all(|(g, s)| match (g, s) {
                        (Gene::Int(v), Slot::Integer { lower, upper }) => v >= lower && v <= upper,
                        (Gene::Real(v), Slot::Real { lower, upper }) => {
                            Bounds::new(*lower, *upper).contains(*v)
                        }
                        _ => false,
                    })
            }
            _ => false,
        }
    }

    /// Uniform random value of this encoding.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Genome {
        match self {
            Encoding::Bitstring { length } => {
                Genome::Bits((0..*length).map(|_| rng.random::<bool>()).collect())
            }
            Encoding::Permutation { length } => {
                let mut perm: Vec<usize> = (0..*length).collect();
                perm.shuffle(rng);
                Genome::Permutation(perm)
            }
            Encoding::RealVector { bounds } => Genome::Real(
                bounds
                    .iter()
                    .map(|b| b.lower + rng.random::<f64>() * b.width())
                    .collect(),
            ),
            Encoding::Mixed { slots } => {
                Genome::Mixed(slots.iter().map(|s| sample_slot(s, rng)).collect())
            }
        }
    }
}

pub(crate) fn sample_slot<R: Rng + ?Sized>(slot: &Slot, rng: &mut R) -> Gene {
    match *slot {
        Slot::Integer { lower, upper } => Gene::Int(rng.random_range(lower..=upper)),
        Slot::Real { lower, upper } => Gene::Real(lower + rng.random::<f64>() * (upper - lower)),
    }
}

/// Whether `perm` holds each of `0..perm.len()` exactly once.
pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &i in perm {
        if i >= perm.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// A point in a search space together with its evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSolution {
    pub value: Genome,
    pub fitness: Option<f64>,
    pub feasible: bool,
}

impl CandidateSolution {
    pub fn unevaluated(value: Genome) -> Self {
        Self {
            value,
            fitness: None,
            feasible: true,
        }
    }

    pub fn evaluated(value: Genome, fitness: f64) -> Self {
        Self {
            value,
            fitness: Some(fitness),
            feasible: true,
        }
    }
}

/// Returns true iff the solution's value conforms to `enc`. Never panics.
pub fn validate_solution(sol: &CandidateSolution, enc: &Encoding) -> bool {
    enc.validate().is_ok() && enc.conforms(&sol.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::rng_stream;

    #[test]
    fn conforming_bitstring() {
        let sol = CandidateSolution::unevaluated(Genome::Bits(vec![true, false, true]));
        assert!(validate_solution(&sol, &Encoding::bitstring(3)));
        assert!(!validate_solution(&sol, &Encoding::bitstring(4)));
    }

    #[test]
    fn duplicate_index_is_not_a_permutation() {
        let sol = CandidateSolution::unevaluated(Genome::Permutation(vec![0, 2, 2]));
        assert!(!validate_solution(&sol, &Encoding::permutation(3)));
        let ok = CandidateSolution::unevaluated(Genome::Permutation(vec![2, 0, 1]));
        assert!(validate_solution(&ok, &Encoding::permutation(3)));
    }

    #[test]
    fn real_in_bounds() {
        let enc = Encoding::real_box(1, 0.0, 1.0);
        assert!(validate_solution(&CandidateSolution::unevaluated(Genome::Real(vec![0.5])), &enc));
        assert!(!validate_solution(&CandidateSolution::unevaluated(Genome::Real(vec![1.5])), &enc));
        assert!(!validate_solution(
            &CandidateSolution::unevaluated(Genome::Real(vec![f64::NAN])),
            &enc
        ));
    }

    #[test]
    fn kind_mismatch_is_false() {
        let sol = CandidateSolution::unevaluated(Genome::Real(vec![0.0]));
        assert!(!validate_solution(&sol, &Encoding::bitstring(1)));
    }

    #[test]
    fn mixed_slots() {
        let enc = Encoding::mixed(vec![
            Slot::Integer { lower: 1, upper: 4 },
            Slot::Real { lower: 0.0, upper: 1.0 },
        ]);
        let good = Genome::Mixed(vec![Gene::Int(3), Gene::Real(0.25)]);
        let out_of_range = Genome::Mixed(vec![Gene::Int(5), Gene::Real(0.25)]);
        let swapped = Genome::Mixed(vec![Gene::Real(0.25), Gene::Int(3)]);
        assert!(enc.conforms(&good));
        assert!(!enc.conforms(&out_of_range));
        assert!(!enc.conforms(&swapped));
    }

    #[test]
    fn invalid_encodings() {
        assert_eq!(Encoding::bitstring(0).validate(), Err(EncodingError::Empty));
        assert!(matches!(
            Encoding::real_box(2, 1.0, 1.0).validate(),
            Err(EncodingError::BadRealBound { .. })
        ));
        assert!(matches!(
            Encoding::mixed(vec![Slot::Integer { lower: 3, upper: 2 }]).validate(),
            Err(EncodingError::EmptyIntegerRange { .. })
        ));
        // an invalid encoding never validates a solution
        let sol = CandidateSolution::unevaluated(Genome::Bits(vec![]));
        assert!(!validate_solution(&sol, &Encoding::bitstring(0)));
    }

    #[test]
    fn samples_conform() {
        let mut rng = rng_stream(3, 0);
        let encodings = [
            Encoding::bitstring(17),
            Encoding::permutation(9),
            Encoding::real_box(4, -2.0, 3.0),
            Encoding::mixed(vec![
                Slot::Integer { lower: -1, upper: 1 },
                Slot::Real { lower: 10.0, upper: 11.0 },
            ]),
        ];
        for enc in &encodings {
            for _ in 0..50 {
                assert!(enc.conforms(&enc.sample(&mut rng)));
            }
        }
    }
}
