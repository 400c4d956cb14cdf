//! Multiplicative Holt-Winters smoothing and its parameter-fitting objective.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::engine::{rng_stream, Encoding, Genome, Objective, GENERATOR_STREAM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    observations: Vec<f64>,
    season_length: usize,
}

impl TimeSeries {
    /// Requires `season_length >= 2`, at least two full seasons, and
    /// strictly positive observations.
    pub fn new(observations: Vec<f64>, season_length: usize) -> Result<Self, BenchmarkError> {
        if season_length < 2 {
            return Err(BenchmarkError::InvalidInstance(format!(
                "season length must be at least 2, got {season_length}"
            )));
        }
        if observations.len() < 2 * season_length {
            return Err(BenchmarkError::TooShort {
                len: observations.len(),
                needed: 2 * season_length,
            });
        }
        if let Some(index) = observations
            .iter()
            .position(|y| !(y.is_finite() && *y > 0.0))
        {
            return Err(BenchmarkError::NonPositiveSeries { index });
        }
        Ok(Self {
            observations,
            season_length,
        })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn season_length(&self) -> usize {
        self.season_length
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Multiplies every observation by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self, BenchmarkError> {
        Self::new(
            self.observations.iter().map(|y| y * c).collect(),
            self.season_length,
        )
    }
}

/// Smoothing constants for level, trend and season.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoltWintersParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl HoltWintersParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, BenchmarkError> {
        let p = Self { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BenchmarkError> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(BenchmarkError::InvalidParams(format!(
                    "{name} = {v} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Sum of squared one-step-ahead errors of multiplicative Holt-Winters.
///
/// Initialization from the first two seasons: level is the first-season
/// mean, trend is the difference of the two season means divided by `m`,
/// and the seasonal indices are the first-season values over their mean.
/// Recursions run from the second season on (`t >= m`):
///
/// ```text
/// forecast  = (level + trend) * s[t - m]
/// level'    = alpha * y / s[t - m] + (1 - alpha) * (level + trend)
/// trend'    = beta * (level' - level) + (1 - beta) * trend
/// s[t]      = gamma * y / level' + (1 - gamma) * s[t - m]
/// ```
///
/// Only errors from the third season on (`t >= 2m`) enter the sum.
pub fn hw_fit_sse(series: &TimeSeries, params: &HoltWintersParams) -> Result<f64, BenchmarkError> {
    params.validate()?;
    Ok(sse_unchecked(series, params))
}

fn sse_unchecked(series: &TimeSeries, p: &HoltWintersParams) -> f64 {
    let y = &series.observations;
    let m = series.season_length;
    let mean1 = y[..m].iter().sum::<f64>() / m as f64;
    let mean2 = y[m..2 * m].iter().sum::<f64>() / m as f64;
    let mut level = mean1;
    let mut trend = (mean2 - mean1) / m as f64;
    let mut season: Vec<f64> = y[..m].iter().map(|v| v / mean1).collect();
    season.reserve(y.len() - m);

    let mut sse = 0.0;
    for t in m..y.len() {
        let s_prev = season[t - m];
        let base = level + trend;
        if t >= 2 * m {
            let err = y[t] - base * s_prev;
            sse += err * err;
        }
        let new_level = p.alpha * y[t] / s_prev + (1.0 - p.alpha) * base;
        trend = p.beta * (new_level - level) + (1.0 - p.beta) * trend;
        level = new_level;
        season.push(p.gamma * y[t] / level + (1.0 - p.gamma) * s_prev);
    }
    sse
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridFit {
    pub params: HoltWintersParams,
    pub sse: f64,
    pub evaluations: u64,
}

/// Grid steps per axis: {0, 0.05, ..., 1}.
pub const GRID_STEPS: usize = 21;

/// Exhaustive search over the 21³ grid. Scans alpha, then beta, then gamma
/// in increasing order and keeps only strict improvements, so ties resolve
/// to the lexicographically smallest parameters.
pub fn hw_grid_oracle(series: &TimeSeries) -> GridFit {
    let axis = |k: usize| k as f64 / (GRID_STEPS - 1) as f64;
    let mut best = GridFit {
        params: HoltWintersParams {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        },
        sse: f64::INFINITY,
        evaluations: 0,
    };
    for a in 0..GRID_STEPS {
        for b in 0..GRID_STEPS {
            for g in 0..GRID_STEPS {
                let params = HoltWintersParams {
                    alpha: axis(a),
                    beta: axis(b),
                    gamma: axis(g),
                };
                let sse = sse_unchecked(series, &params);
                best.evaluations += 1;
                if sse < best.sse {
                    best.sse = sse;
                    best.params = params;
                }
            }
        }
    }
    best
}

/// `[alpha, beta, gamma]` in the unit cube.
pub fn hw_encoding() -> Encoding {
    Encoding::real_box(3, 0.0, 1.0)
}

/// SSE as a function of a real genome `[alpha, beta, gamma]`.
#[derive(Debug, Clone)]
pub struct HoltWintersObjective {
    series: TimeSeries,
}

impl HoltWintersObjective {
    pub fn new(series: TimeSeries) -> Self {
        Self { series }
    }
}

impl Objective for HoltWintersObjective {
    fn evaluate(&self, value: &Genome) -> f64 {
        match value.as_real() {
            Some(&[alpha, beta, gamma]) => {
                let params = HoltWintersParams { alpha, beta, gamma };
                if params.validate().is_err() {
                    return f64::NAN;
                }
                sse_unchecked(&self.series, &params)
            }
            _ => f64::NAN,
        }
    }
}

/// Synthetic positive seasonal series: level 100 rising by 0.5 per step,
/// sinusoidal seasonal factors with amplitude 0.2, and multiplicative
/// gaussian noise with 3% standard deviation.
pub fn synthetic_seasonal(seed: u64, season_length: usize, seasons: usize) -> Result<TimeSeries, BenchmarkError> {
    let mut rng = rng_stream(seed, GENERATOR_STREAM);
    let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let n = season_length * seasons;
    let observations = (0..n)
        .map(|t| {
            let angle = std::f64::consts::TAU * (t % season_length) as f64 / season_length as f64;
            let seasonal = 1.0 + 0.2 * (angle + phase).sin();
            let z: f64 = StandardNormal.sample(&mut rng);
            let noise = (1.0 + 0.03 * z).max(0.5);
            (100.0 + 0.5 * t as f64) * seasonal * noise
        })
        .collect();
    TimeSeries::new(observations, season_length)
}
