use serde::{Deserialize, Serialize};

use super::encoding::Genome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveSense {
    #[default]
    Minimize,
    Maximize,
}

impl ObjectiveSense {
    /// Strict comparison: `a` is better than `b`. Ties are never better, so
    /// the earlier discovery is kept.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            ObjectiveSense::Minimize => a < b,
            ObjectiveSense::Maximize => a > b,
        }
    }

    /// `a` is at least as good as `b`.
    pub fn is_at_least(self, a: f64, b: f64) -> bool {
        match self {
            ObjectiveSense::Minimize => a <= b,
            ObjectiveSense::Maximize => a >= b,
        }
    }

    pub fn worst(self) -> f64 {
        match self {
            ObjectiveSense::Minimize => f64::INFINITY,
            ObjectiveSense::Maximize => f64::NEG_INFINITY,
        }
    }

    /// Maps NaN and infinities to the worst value. The flag tells whether
    /// the raw value was replaced.
    pub fn sanitize(self, raw: f64) -> (f64, bool) {
        if raw.is_finite() {
            (raw, false)
        } else {
            (self.worst(), true)
        }
    }

    /// Ordering with better values first.
    pub fn cmp_fitness(self, a: f64, b: f64) -> std::cmp::Ordering {
        match self {
            ObjectiveSense::Minimize => a.total_cmp(&b),
            ObjectiveSense::Maximize => b.total_cmp(&a),
        }
    }
}

/// A pure objective over genomes.
///
/// `repair` maps an infeasible value onto a feasible one before evaluation;
/// solvers that support it write the repaired value back into the
/// population. The default is the identity.
pub trait Objective {
    fn evaluate(&self, value: &Genome) -> f64;

    fn repair(&self, _value: &mut Genome) {}
}

impl<F> Objective for F
where
    F: Fn(&Genome) -> f64,
{
    fn evaluate(&self, value: &Genome) -> f64 {
        self(value)
    }
}

/// Adapts a function of a real vector. Non-real genomes score NaN, which the
/// evaluator turns into the worst fitness.
pub struct RealFn<F>(pub F);

impl<F> Objective for RealFn<F>
where
    F: Fn(&[f64]) -> f64,
{
    fn evaluate(&self, value: &Genome) -> f64 {
        match value.as_real() {
            Some(x) => (self.0)(x),
            None => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons_flip_with_sense() {
        assert!(ObjectiveSense::Minimize.is_better(1.0, 2.0));
        assert!(ObjectiveSense::Maximize.is_better(2.0, 1.0));
        assert!(!ObjectiveSense::Minimize.is_better(1.0, 1.0));
        assert!(!ObjectiveSense::Maximize.is_better(1.0, 1.0));
    }

    #[test]
    fn nonfinite_is_worst() {
        assert_eq!(ObjectiveSense::Minimize.sanitize(f64::NAN), (f64::INFINITY, true));
        assert_eq!(
            ObjectiveSense::Maximize.sanitize(f64::INFINITY),
            (f64::NEG_INFINITY, true)
        );
        assert_eq!(ObjectiveSense::Maximize.sanitize(3.0), (3.0, false));
    }
}
