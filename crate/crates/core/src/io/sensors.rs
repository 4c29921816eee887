//! Sensor reading logs: `timestamp, sensor-id, m_1, …, m_k` per row.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};

use crate::applications::{readings_matrix, SensorTable};
use crate::error::{Error, Result};

use super::edge_list::{fields, is_skippable};

const MISSING: &[&str] = &["na", "nan", "null", "?", "-"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorOptions {
    /// Sensors with fewer complete rows are dropped.
    pub min_samples: usize,
}

impl Default for SensorOptions {
    fn default() -> Self {
        Self { min_samples: 2 }
    }
}

#[derive(Debug)]
pub struct SensorReport {
    pub table: SensorTable,
    pub rows: usize,
    pub dropped_rows: usize,
    pub dropped_sensors: Vec<String>,
}

pub fn parse_sensor_readings<R: Read>(stream: R) -> Result<SensorReport> {
    parse_sensor_readings_with(stream, SensorOptions::default())
}

/// Drops rows with a missing or unparsable field, then aligns each sensor's
/// remaining rows by sample index and truncates every sensor to the
/// shortest series. A first row whose measurement columns are not numeric
/// is taken as a header naming the types.
pub fn parse_sensor_readings_with<R: Read>(stream: R, opts: SensorOptions) -> Result<SensorReport> {
    let mut width: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut order: Vec<String> = Vec::new();
    let mut series: HashMap<String, Vec<Vec<f64>>> = HashMap::new();
    let mut rows = 0;
    let mut dropped_rows = 0;

    for line in BufReader::new(stream).lines() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let toks: Vec<&str> = fields(&line).collect();
        if rows == 0 && names.is_none() && toks.len() > 2 && is_header(&toks[2..]) {
            names = Some(toks[2..].iter().map(|s| s.to_string()).collect());
            width = Some(toks.len() - 2);
            continue;
        }
        rows += 1;
        let expected = *width.get_or_insert(toks.len().saturating_sub(2));
        if toks.len() < 3 || toks.len() - 2 != expected {
            dropped_rows += 1;
            continue;
        }
        let values: Option<Vec<f64>> = toks[2..]
            .iter()
            .map(|s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        match values {
            Some(v) => {
                let id = toks[1].to_string();
                if !series.contains_key(&id) {
                    order.push(id.clone());
                }
                series.entry(id).or_default().push(v);
            }
            None => dropped_rows += 1,
        }
    }

    let min = opts.min_samples.max(2);
    let (kept, dropped_sensors): (Vec<String>, Vec<String>) =
        order.into_iter().partition(|id| series[id].len() >= min);
    if kept.is_empty() {
        return Err(Error::NoUsableRows);
    }
    let types = width.unwrap_or(0);
    let samples = kept.iter().map(|id| series[id].len()).min().unwrap_or(0);
    let readings = (0..types)
        .map(|t| {
            let rows: Vec<Vec<f64>> = kept
                .iter()
                .map(|id| series[id][..samples].iter().map(|r| r[t]).collect())
                .collect();
            readings_matrix(&rows)
        })
        .collect();
    let names = names.unwrap_or_else(|| (1..=types).map(|t| format!("m{t}")).collect());
    let table = SensorTable::new(kept, names, readings)?;
    Ok(SensorReport {
        table,
        rows,
        dropped_rows,
        dropped_sensors,
    })
}

fn is_header(toks: &[&str]) -> bool {
    toks.iter()
        .all(|s| s.parse::<f64>().is_err() && !MISSING.contains(&s.to_ascii_lowercase().as_str()))
}
