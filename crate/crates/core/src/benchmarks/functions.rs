//! Continuous test functions with their declared search boxes.

use std::f64::consts::TAU;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::engine::{Bounds, Encoding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Sphere,
    Rastrigin,
    Rosenbrock,
}

impl TestFunction {
    /// Per-dimension box in which the function is defined.
    pub fn domain(self) -> Bounds {
        match self {
            TestFunction::Sphere | TestFunction::Rastrigin => Bounds::new(-5.12, 5.12),
            TestFunction::Rosenbrock => Bounds::new(-5.0, 10.0),
        }
    }

    pub fn encoding(self, dims: usize) -> Encoding {
        let b = self.domain();
        Encoding::real_box(dims, b.lower, b.upper)
    }

    /// Formula value without the domain check.
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Sphere => x.iter().map(|v| v * v).sum(),
            TestFunction::Rastrigin => {
                10.0 * x.len() as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * (TAU * v).cos())
                        .sum::<f64>()
            }
            TestFunction::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
        }
    }
}

impl FromStr for TestFunction {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(TestFunction::Sphere),
            "rastrigin" => Ok(TestFunction::Rastrigin),
            "rosenbrock" => Ok(TestFunction::Rosenbrock),
            other => Err(BenchmarkError::InvalidInstance(format!(
                "unknown test function {other:?}"
            ))),
        }
    }
}

/// Evaluates `function` at `x`, rejecting points outside its domain.
pub fn test_function(function: TestFunction, x: &[f64]) -> Result<f64, BenchmarkError> {
    let domain = function.domain();
    if let Some(index) = x.iter().position(|v| !domain.contains(*v)) {
        return Err(BenchmarkError::OutOfBounds { index, value: x[index] });
    }
    Ok(function.value(x))
}
