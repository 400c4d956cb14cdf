use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::RunError;

/// Termination limits. A run stops as soon as any set limit is hit.
///
/// A limit of zero counts as unset.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Budget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_fitness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "duration_ms")]
    pub max_wall_time: Option<Duration>,
}

impl Budget {
    pub fn evaluations(n: u64) -> Self {
        Self {
            max_evaluations: Some(n),
            ..Self::default()
        }
    }

    pub fn iterations(n: u64) -> Self {
        Self {
            max_iterations: Some(n),
            ..Self::default()
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target_fitness = Some(target);
        self
    }

    pub fn with_wall_time(mut self, limit: Duration) -> Self {
        self.max_wall_time = Some(limit);
        self
    }

    pub(crate) fn eval_limit(&self) -> Option<u64> {
        self.max_evaluations.filter(|&n| n > 0)
    }

    pub(crate) fn iteration_limit(&self) -> Option<u64> {
        self.max_iterations.filter(|&n| n > 0)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.eval_limit().is_none() && self.iteration_limit().is_none() {
            return Err(RunError::InvalidBudget(
                "set max_evaluations or max_iterations to a positive count".into(),
            ));
        }
        if let Some(t) = self.target_fitness {
            if t.is_nan() {
                return Err(RunError::InvalidBudget("target_fitness is NaN".into()));
            }
        }
        Ok(())
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_u64(d.as_millis() as u64),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Ok(Option::<u64>::deserialize(d)?.map(Duration::from_millis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_a_count_limit() {
        assert!(Budget::default().validate().is_err());
        assert!(Budget::evaluations(0).validate().is_err());
        assert!(Budget::default().with_target(0.0).validate().is_err());
        assert!(Budget::evaluations(1).validate().is_ok());
        assert!(Budget::iterations(5).validate().is_ok());
    }

    #[test]
    fn parses_from_json() {
        let b: Budget =
            serde_json::from_str(r#"{"max_evaluations": 100, "max_wall_time": 2500}"#).unwrap();
        assert_eq!(b.max_evaluations, Some(100));
        assert_eq!(b.max_wall_time, Some(Duration::from_millis(2500)));
        assert_eq!(b.max_iterations, None);
    }
}
