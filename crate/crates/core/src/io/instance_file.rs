//! Plain-text coverage-bonus instances.
//!
//! ```text
//! # comment
//! k 2
//! budget 4
//! seed 42
//! 0 1 1 0 0
//! 1 2 2;3 -0.5 1
//! ```
//!
//! Each element row is `element cost items w_1 … w_k`, with items separated
//! by `;` and `-` for an empty coverage set. The optional `seed` line records
//! the generator seed.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::oracle::{CoverageBonusEntry, CoverageBonusSpec};

use super::edge_list::{is_skippable, fields};
use super::{InstanceBundle, ObjectiveSpec, Provenance};

/// Writes a coverage-bonus bundle. Floats use the shortest representation
/// that parses back to the same value.
pub fn write_instance(bundle: &InstanceBundle) -> Result<String> {
    let spec = match &bundle.objective {
        ObjectiveSpec::CoverageBonus(spec) => spec,
        _ => {
            return Err(Error::Config(
                "only coverage-bonus instances have a text format".into(),
            ))
        }
    };
    let inst = &bundle.instance;
    let mut out = String::from("# element cost items bonus...\n");
    let _ = writeln!(out, "k {}", inst.k());
    let _ = writeln!(out, "budget {}", inst.budget());
    if let Provenance::Generated { seed, .. } = bundle.provenance {
        let _ = writeln!(out, "seed {seed}");
    }
    for entry in &spec.entries {
        let cost = inst
            .cost(entry.element)
            .ok_or(Error::UnknownElement { element: entry.element })?;
        let items = if entry.items.is_empty() {
            "-".to_string()
        } else {
            entry.items.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
        };
        let _ = write!(out, "{} {} {}", entry.element, cost, items);
        for w in &entry.bonus {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_instance<R: Read>(stream: R) -> Result<InstanceBundle> {
    let mut k: Option<usize> = None;
    let mut budget: Option<f64> = None;
    let mut seed: Option<u64> = None;
    let mut universe = Vec::new();
    let mut costs = Vec::new();
    let mut entries = Vec::new();

    for (idx, line) in BufReader::new(stream).lines().enumerate() {
        let line = line?;
        let no = idx + 1;
        if is_skippable(&line) {
            continue;
        }
        let toks: Vec<&str> = fields(&line).collect();
        let bad = |reason: String| Error::MalformedLine { line: no, reason };
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("invalid number {s:?}")));
        match toks[0] {
            "k" | "budget" | "seed" if toks.len() != 2 => {
                return Err(bad(format!("expected `{} VALUE`", toks[0])))
            }
            "k" => k = Some(toks[1].parse().map_err(|_| bad(format!("invalid k {:?}", toks[1])))?),
            "budget" => budget = Some(num(toks[1])?),
            "seed" => seed = Some(toks[1].parse().map_err(|_| bad(format!("invalid seed {:?}", toks[1])))?),
            _ => {
                let k = k.ok_or_else(|| bad("element row before `k`".into()))?;
                if toks.len() != 3 + k {
                    return Err(bad(format!("expected {} fields, found {}", 3 + k, toks.len())));
                }
                let element = toks[0]
                    .parse()
                    .map_err(|_| bad(format!("invalid element {:?}", toks[0])))?;
                let items = if toks[2] == "-" {
                    Vec::new()
                } else {
                    toks[2]
                        .split(';')
                        .map(|s| s.parse::<u32>().map_err(|_| bad(format!("invalid item {s:?}"))))
                        .collect::<Result<_>>()?
                };
                let bonus = toks[3..].iter().map(|s| num(s)).collect::<Result<_>>()?;
                universe.push(element);
                costs.push(num(toks[1])?);
                entries.push(CoverageBonusEntry { element, items, bonus });
            }
        }
    }
    let k = k.ok_or_else(|| Error::Config("instance file has no `k` line".into()))?;
    let budget = budget.ok_or_else(|| Error::Config("instance file has no `budget` line".into()))?;
    let n = universe.len();
    let instance = KnapsackInstance::new(universe, k, costs, budget)?;
    let provenance = match seed {
        Some(seed) => Provenance::Generated { seed, n, k },
        None => Provenance::Inline,
    };
    Ok(InstanceBundle {
        instance,
        objective: ObjectiveSpec::CoverageBonus(CoverageBonusSpec { k, entries }),
        provenance,
    })
}
