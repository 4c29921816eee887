use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use super::runner::{ResultRow, ResultTable};
use crate::error::{Error, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const METRICS: [&str; 3] = ["value", "queries", "millis"];

pub fn write_results_csv<W: std::io::Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

fn metric(row: &ResultRow, name: &str) -> f64 {
    match name {
        "value" => row.value,
        "queries" => row.queries as f64,
        _ => row.millis,
    }
}

/// Mean of `metric` over successful rows, per algorithm (in first-seen
/// order) and budget.
pub fn means(table: &ResultTable, name: &str) -> Vec<(String, f64, f64)> {
    let mut order: Vec<&str> = Vec::new();
    let mut acc: BTreeMap<(usize, u64), (f64, usize)> = BTreeMap::new();
    for row in &table.rows {
        let a = match order.iter().position(|&a| a == row.algorithm) {
            Some(i) => i,
            None => {
                order.push(&row.algorithm);
                order.len() - 1
            }
        };
        let slot = acc.entry((a, row.budget.to_bits())).or_insert((0.0, 0));
        if !row.failed() {
            slot.0 += metric(row, name);
            slot.1 += 1;
        }
    }
    let mut out: Vec<(String, f64, f64)> = acc
        .into_iter()
        .map(|((a, b), (sum, count))| {
            let mean = if count == 0 { f64::NAN } else { sum / count as f64 };
            (order[a].to_string(), f64::from_bits(b), mean)
        })
        .collect();
    out.sort_by(|x, y| {
        let ax = order.iter().position(|&a| a == x.0);
        let ay = order.iter().position(|&a| a == y.0);
        ax.cmp(&ay).then(x.1.total_cmp(&y.1))
    });
    out
}

/// `queries(LAA) ≤ n(k+1)`.
pub fn laa_query_bound(n: usize, k: usize) -> u64 {
    (n * (k + 1)) as u64
}

/// Extra queries RLA may spend beyond its LAA pass:
/// `nk(⌈log_{1+ε} 19⌉ + 1)`.
pub fn rla_extra_query_bound(n: usize, k: usize, epsilon: f64) -> u64 {
    let guesses = (19f64.ln() / (1.0 + epsilon).ln()).ceil() as u64 + 1;
    (n * k) as u64 * guesses
}

fn summary(table: &ResultTable) -> String {
    let mut s = String::new();
    let failed = table.rows.iter().filter(|r| r.failed()).count();
    let _ = writeln!(
        s,
        "application {}  n={}  k={}  epsilon={}",
        table.application.name(),
        table.n,
        table.k,
        table.epsilon
    );
    let _ = writeln!(s, "runs {}  failed {}", table.rows.len(), failed);
    for f in &table.failures {
        let _ = writeln!(s, "  failed: {f}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<8} {:>12} {:>16} {:>14} {:>12}", "algo", "B", "mean value", "mean queries", "mean ms");
    let values = means(table, "value");
    let queries = means(table, "queries");
    let millis = means(table, "millis");
    for ((v, q), m) in values.iter().zip(&queries).zip(&millis) {
        let _ = writeln!(s, "{:<8} {:>12} {:>16.6} {:>14.1} {:>12.3}", v.0, v.1, v.2, q.2, m.2);
    }

    let _ = writeln!(s);
    let find = |alg: &str, b: f64, rep: usize| {
        table
            .rows
            .iter()
            .find(|r| r.algorithm == alg && r.budget == b && r.rep == rep && !r.failed())
    };
    let (mut pairs, mut dominated, mut laa_ok, mut rla_ok) = (0, 0, true, true);
    let laa_bound = laa_query_bound(table.n, table.k);
    let extra = rla_extra_query_bound(table.n, table.k, table.epsilon);
    for r in table.rows.iter().filter(|r| r.algorithm == "laa" && !r.failed()) {
        laa_ok &= r.queries <= laa_bound;
        if let Some(x) = find("rla", r.budget, r.rep) {
            pairs += 1;
            dominated += usize::from(x.value >= r.value);
            rla_ok &= x.queries <= r.queries + extra;
        }
    }
    let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    let _ = writeln!(s, "value(rla) >= value(laa): {dominated}/{pairs}");
    let _ = writeln!(s, "queries(laa) <= {laa_bound}: {}", verdict(laa_ok));
    let _ = writeln!(s, "queries(rla) <= queries(laa) + {extra}: {}", verdict(rla_ok));
    s
}

/// Writes `results.csv`, one `plot_<metric>.dat` per metric and
/// `summary.txt` into `dir`. An empty table writes nothing.
pub fn emit_outputs(table: &ResultTable, dir: &Path) -> Result<Vec<PathBuf>> {
    if table.rows.is_empty() {
        return Err(Error::Config("result table is empty".into()));
    }
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let path = dir.join(RESULTS_FILE);
    write_results_csv(&table.rows, fs::File::create(&path)?)?;
    written.push(path);

    for name in METRICS {
        let mut text = format!("# algorithm B mean_{name}\n");
        for (alg, b, mean) in means(table, name) {
            let _ = writeln!(text, "{alg} {b} {mean}");
        }
        let path = dir.join(format!("plot_{name}.dat"));
        fs::write(&path, text)?;
        written.push(path);
    }

    let path = dir.join(SUMMARY_FILE);
    fs::write(&path, summary(table))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::Application;

    fn row(alg: &str, b: f64, rep: usize, value: f64, queries: u64) -> ResultRow {
        ResultRow {
            algorithm: alg.into(),
            budget: b,
            rep,
            value,
            queries,
            millis: 0.5,
            seed: rep as u64,
        }
    }

    fn table() -> ResultTable {
        ResultTable {
            application: Application::Synthetic,
            n: 8,
            k: 3,
            epsilon: 0.1,
            rows: vec![
                row("laa", 3.0, 0, 4.0, 30),
                row("laa", 3.0, 1, 6.0, 32),
                row("rla", 3.0, 0, 5.0, 300),
                row("rla", 3.0, 1, 6.0, 310),
                row("laa", 5.0, 0, 7.0, 31),
                row("rla", 5.0, 0, 0.1 + 0.2, 305),
            ],
            failures: vec![],
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let mut buf = Vec::new();
        write_results_csv(&t.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("algorithm,B,rep,value,queries,millis,seed\n"));
        assert_eq!(text.lines().count(), 7);
        assert_eq!(read_results_csv(buf.as_slice()).unwrap(), t.rows);
    }

    #[test]
    fn means_per_algorithm_and_budget() {
        let m = means(&table(), "queries");
        assert_eq!(m[0], ("laa".to_string(), 3.0, 31.0));
        assert_eq!(m[1], ("laa".to_string(), 5.0, 31.0));
        assert_eq!(m[2], ("rla".to_string(), 3.0, 305.0));
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn emits_files() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit_outputs(&table(), dir.path()).unwrap();
        assert_eq!(files.len(), 5);
        let plot = fs::read_to_string(dir.path().join("plot_queries.dat")).unwrap();
        assert_eq!(plot.lines().count(), 5);
        let summary = fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap();
        assert!(summary.contains("value(rla) >= value(laa): 2/3"));
        let again = tempfile::tempdir().unwrap();
        emit_outputs(&table(), again.path()).unwrap();
        for f in &files {
            let name = f.file_name().unwrap();
            assert_eq!(fs::read(f).unwrap(), fs::read(again.path().join(name)).unwrap());
        }
    }

    #[test]
    fn empty_table_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let t = ResultTable { rows: vec![], ..table() };
        assert!(emit_outputs(&t, &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn bounds() {
        assert_eq!(laa_query_bound(10, 3), 40);
        // ⌈ln 19 / ln 1.1⌉ = 31
        assert_eq!(rla_extra_query_bound(10, 3, 0.1), 30 * 32);
    }
}
