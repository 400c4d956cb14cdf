//! Seeded instance files. Equal arguments give byte-identical output.

use crate::benchmarks::io::{write_knapsack, write_series_csv, write_tsplib};
use crate::benchmarks::{synthetic_seasonal, KnapsackInstance, Metric, TspInstance};

use super::HarnessError;

pub fn gen_knapsack(n: usize, tightness: f64, seed: u64) -> Result<String, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Invalid("knapsack needs at least one item".into()));
    }
    if !(tightness > 0.0 && tightness <= 1.0) {
        return Err(HarnessError::Invalid("tightness must lie in (0, 1]".into()));
    }
    Ok(write_knapsack(&KnapsackInstance::random_uniform(n, tightness, seed)))
}

pub fn gen_tsp(n: usize, metric: Metric, seed: u64) -> Result<String, HarnessError> {
    let instance = TspInstance::random_uniform(n, seed, metric)?;
    Ok(write_tsplib(&instance, &format!("rand{n}_s{seed}")))
}

/// CSV body of a synthetic seasonal series; the season length goes in the
/// sidecar file.
pub fn gen_series(season_length: usize, seasons: usize, seed: u64) -> Result<String, HarnessError> {
    Ok(write_series_csv(&synthetic_seasonal(seed, season_length, seasons)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::io::{parse_knapsack, parse_tsplib};

    #[test]
    fn equal_seeds_equal_bytes() {
        assert_eq!(gen_knapsack(30, 0.5, 4).unwrap(), gen_knapsack(30, 0.5, 4).unwrap());
        assert_ne!(gen_knapsack(30, 0.5, 4).unwrap(), gen_knapsack(30, 0.5, 5).unwrap());
        assert_eq!(
            gen_tsp(12, Metric::Euclidean, 9).unwrap(),
            gen_tsp(12, Metric::Euclidean, 9).unwrap()
        );
    }

    #[test]
    fn generated_files_parse_back() {
        let k = parse_knapsack(&gen_knapsack(20, 0.3, 1).unwrap()).unwrap();
        assert_eq!(k, KnapsackInstance::random_uniform(20, 0.3, 1));
        let t = parse_tsplib(&gen_tsp(9, Metric::Manhattan, 2).unwrap()).unwrap();
        assert_eq!(t, TspInstance::random_uniform(9, 2, Metric::Manhattan).unwrap());
    }

    #[test]
    fn bad_arguments() {
        assert!(gen_knapsack(0, 0.5, 0).is_err());
        assert!(gen_knapsack(5, 1.5, 0).is_err());
        assert!(gen_tsp(2, Metric::Euclidean, 0).is_err());
    }
}
