//! Instance file formats.
//!
//! * Knapsack: plain text, first line `n W`, then `n` lines `v_i w_i`.
//! * TSP: a TSPLIB subset with `DIMENSION`, `EDGE_WEIGHT_TYPE: EUC_2D | MAN_2D`
//!   and `NODE_COORD_SECTION`. Distances are not rounded to integers.
//! * Time series: CSV with header `t,y`; the season length comes from a flag
//!   or a sidecar JSON file `{"season_length": m}` next to the CSV.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::holt_winters::TimeSeries;
use super::knapsack::{Item, KnapsackInstance};
use super::tsp::{Metric, TspInstance};
use super::BenchmarkError;

fn parse_err(line: usize, msg: impl Into<String>) -> BenchmarkError {
    BenchmarkError::Parse {
        line,
        message: msg.into(),
    }
}

pub fn parse_knapsack(text: &str) -> Result<KnapsackInstance, BenchmarkError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(hline, "expected `n W`"))?;
    let capacity: u64 = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(hline, "expected an integer capacity"))?;
    let mut items = Vec::with_capacity(n);
    for (lineno, line) in lines.by_ref().take(n) {
        let mut parts = line.split_whitespace();
        let value: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected a value"))?;
        let weight: u64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(lineno, "expected an integer weight"))?;
        items.push(Item { value, weight });
    }
    if items.len() != n {
        return Err(parse_err(hline, format!("header promises {n} items, found {}", items.len())));
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(lineno, "trailing content after the items"));
    }
    KnapsackInstance::new(items, capacity)
}

pub fn write_knapsack(instance: &KnapsackInstance) -> String {
    let mut out = format!("{} {}\n", instance.len(), instance.capacity);
    for item in &instance.items {
        writeln!(out, "{} {}", item.value, item.weight).unwrap();
    }
    out
}

pub fn parse_tsplib(text: &str) -> Result<TspInstance, BenchmarkError> {
    let mut dimension: Option<usize> = None;
    let mut metric: Option<Metric> = None;
    let mut coords: Vec<(usize, [f64; 2])> = Vec::new();
    let mut in_coords = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() == 3 {
                if let (Ok(id), Ok(x), Ok(y)) =
                    (parts[0].parse::<usize>(), parts[1].parse::<f64>(), parts[2].parse::<f64>())
                {
                    coords.push((id, [x, y]));
                    continue;
                }
            }
            in_coords = false;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            in_coords = true;
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => return Err(parse_err(lineno, format!("unexpected line {line:?}"))),
        };
        match key {
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| parse_err(lineno, "DIMENSION must be an integer"))?,
                )
            }
            "EDGE_WEIGHT_TYPE" => {
                metric = Some(match value {
                    "EUC_2D" => Metric::Euclidean,
                    "MAN_2D" => Metric::Manhattan,
                    other => {
                        return Err(parse_err(
                            lineno,
                            format!("unsupported EDGE_WEIGHT_TYPE {other}"),
                        ))
                    }
                })
            }
            "TYPE" if value != "TSP" => {
                return Err(parse_err(lineno, format!("unsupported TYPE {value}")))
            }
            _ => {}
        }
    }
    let dimension = dimension.ok_or_else(|| parse_err(0, "missing DIMENSION"))?;
    let metric = metric.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_TYPE"))?;
    if coords.len() != dimension {
        return Err(parse_err(
            0,
            format!("DIMENSION is {dimension} but {} coordinates were given", coords.len()),
        ));
    }
    coords.sort_by_key(|(id, _)| *id);
    if coords.iter().enumerate().any(|(k, (id, _))| *id != k + 1) {
        return Err(parse_err(0, "node ids must be 1..DIMENSION"));
    }
    TspInstance::new(coords.into_iter().map(|(_, c)| c).collect(), metric)
}

pub fn write_tsplib(instance: &TspInstance, name: &str) -> String {
    let kind = match instance.metric {
        Metric::Euclidean => "EUC_2D",
        Metric::Manhattan => "MAN_2D",
    };
    let mut out = format!(
        "NAME: {name}\nTYPE: TSP\nDIMENSION: {}\nEDGE_WEIGHT_TYPE: {kind}\nNODE_COORD_SECTION\n",
        instance.len()
    );
    for (i, c) in instance.cities.iter().enumerate() {
        writeln!(out, "{} {} {}", i + 1, c[0], c[1]).unwrap();
    }
    out.push_str("EOF\n");
    out
}

#[derive(Debug, Deserialize)]
struct SeriesSidecar {
    season_length: usize,
}

/// Reads `t,y` rows; only the `y` column is used, in file order.
pub fn parse_series_csv(text: &str, season_length: usize) -> Result<TimeSeries, BenchmarkError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let y_col = headers
        .iter()
        .position(|h| h.trim() == "y")
        .ok_or_else(|| parse_err(1, "missing `y` column"))?;
    let mut ys = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(i + 2, e.to_string()))?;
        let y: f64 = record
            .get(y_col)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse_err(i + 2, "expected a number in column y"))?;
        ys.push(y);
    }
    TimeSeries::new(ys, season_length)
}

pub fn write_series_csv(series: &TimeSeries) -> String {
    let mut out = String::from("t,y\n");
    for (t, y) in series.observations().iter().enumerate() {
        writeln!(out, "{t},{y}").unwrap();
    }
    out
}

/// Sidecar path for a series file: same stem, `.json` extension.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Loads a series file, taking the season length from `season_length` or,
/// when absent, from the sidecar JSON.
pub fn read_series(path: &Path, season_length: Option<usize>) -> Result<TimeSeries, BenchmarkError> {
    let text = std::fs::read_to_string(path).map_err(BenchmarkError::io)?;
    let m = match season_length {
        Some(m) => m,
        None => {
            let sidecar = sidecar_path(path);
            let raw = std::fs::read_to_string(&sidecar).map_err(|e| {
                BenchmarkError::Io(format!(
                    "no season length given and sidecar {} unreadable: {e}",
                    sidecar.display()
                ))
            })?;
            let meta: SeriesSidecar =
                serde_json::from_str(&raw).map_err(|e| parse_err(e.line(), e.to_string()))?;
            meta.season_length
        }
    };
    parse_series_csv(&text, m)
}
