use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ksmk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksmk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

fn generated(dir: &Path, n: &str, seed: &str) -> String {
    let path = dir.join(format!("inst_{n}_{seed}.txt"));
    let p = path.to_str().unwrap().to_string();
    let o = ksmk(&["gen", n, "--k", "2", "--seed", seed, "--out", &p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&ksmk(&["gen", "6", "--k", "3", "--seed", "42"]));
    let b = stdout(&ksmk(&["gen", "6", "--k", "3", "--seed", "42"]));
    assert_eq!(a, b);
    assert!(a.contains("k 3\n"));
    assert!(a.contains("seed 42\n"));
}

#[test]
fn solve_opt_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "6", "3");

    let check = ksmk(&["check", &inst]);
    assert!(check.status.success());
    assert!(stdout(&check).contains("k-submodular: yes"));

    let opt = stdout(&ksmk(&["opt", &inst]));
    let opt_value: f64 = field(&opt, "value").parse().unwrap();
    for algo in ["laa", "rla", "greedy"] {
        let o = ksmk(&["solve", &inst, "--algo", algo, "--epsilon", "0.1"]);
        assert!(o.status.success());
        let text = stdout(&o);
        let v: f64 = field(&text, "value").parse().unwrap();
        let cost: f64 = field(&text, "cost").parse().unwrap();
        let b: f64 = field(&text, "B").parse().unwrap();
        assert!(v <= opt_value + 1e-9);
        assert!(cost <= b);
    }
    let laa: f64 = field(&stdout(&ksmk(&["solve", &inst, "--algo", "laa"])), "value").parse().unwrap();
    let rla: f64 = field(&stdout(&ksmk(&["solve", &inst, "--algo", "rla"])), "value").parse().unwrap();
    assert!(rla >= laa);

    let low = stdout(&ksmk(&["opt", &inst, "--budget", "0.5"]));
    assert_eq!(field(&low, "value"), "0");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "6", "1");
    assert_eq!(ksmk(&["solve", &inst, "--epsilon", "0.3"]).status.code(), Some(2));
    assert_eq!(ksmk(&["solve", &inst, "--algo", "simplex"]).status.code(), Some(2));
    assert_eq!(ksmk(&["run", "--reps", "1"]).status.code(), Some(2));

    let big = generated(dir.path(), "30", "1");
    assert_eq!(ksmk(&["opt", &big]).status.code(), Some(3));
    assert_eq!(ksmk(&["opt", &inst, "--max-enum", "10"]).status.code(), Some(3));

    let missing = dir.path().join("missing.txt");
    assert_eq!(ksmk(&["solve", missing.to_str().unwrap()]).status.code(), Some(4));
    let cfg = dir.path().join("missing.cfg");
    assert_eq!(ksmk(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("sweep.cfg");
    fs::write(
        &cfg,
        format!(
            "application = synthetic\nn = 8\nk = 3\nbudget = 1\nalgo = laa, rla, brute\nreps = 1\nseed = 4\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = ksmk(&["run", "--config", cfg.to_str().unwrap(), "--budget", "3", "--budget", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("value(rla) >= value(laa): 2/2"));

    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert_eq!(csv.lines().next().unwrap(), "algorithm,B,rep,value,queries,millis,seed");
    for name in ["plot_value.dat", "plot_queries.dat", "plot_millis.dat", "summary.txt"] {
        assert!(out.join(name).exists(), "{name}");
    }

    let again = dir.path().join("again");
    let o = ksmk(&[
        "run", "--config", cfg.to_str().unwrap(), "--budget", "3", "--budget", "5", "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let strip = |s: String| -> Vec<String> {
        s.lines()
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{},{},{}", f[0], f[1], f[2], f[3], f[4], f[6])
            })
            .collect()
    };
    assert_eq!(strip(csv), strip(fs::read_to_string(again.join("results.csv")).unwrap()));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    fs::write(&cfg, "n = 7\nk = 2\nbudget = 6\nseed = 9\n").unwrap();
    let a = stdout(&ksmk(&["solve", "--config", cfg.to_str().unwrap(), "--algo", "laa"]));
    let b = stdout(&ksmk(&["solve", "--config", cfg.to_str().unwrap(), "--algo", "laa", "--budget", "9"]));
    assert_eq!(field(&a, "B"), "6");
    assert_eq!(field(&b, "B"), "9");
}
