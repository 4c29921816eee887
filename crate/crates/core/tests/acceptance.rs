//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;

use ksmk_core::applications::{lt_exact_spread, lt_spread_estimate};
use ksmk_core::experiment::{
    emit_outputs, laa_query_bound, load_instances, means, read_results_csv, rla_extra_query_bound,
    run_bundles, Application, RESULTS_FILE,
};
use ksmk_core::io::{gen_random_instance, FamilyParams};
use ksmk_core::verify::{audit_laa_trace, audit_rla, check_ksubmodularity_with, CheckMode, CheckOptions, KSubReport};
use ksmk_core::{
    brute_force_opt, laa, rla, Algorithm, CountingOracle, CoverageBonusEntry, CoverageBonusObjective,
    CoverageBonusSpec, Element, ExperimentConfig, GaussianEntropyObjective, KSet, KnapsackInstance,
    ModularObjective, Objective, ObjectiveSpec, Ridge, TieBreak, TopicGraph, ZeroObjective,
    DEFAULT_ENUMERATION_CAP,
};

const SUITE_SIZE: usize = 200;
const EPSILONS: [f64; 3] = [0.05, 0.1, 0.15];

#[derive(Default)]
struct Tally {
    runs: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.runs > 0 && self.failures.is_empty()
    }

    fn detail(&self) -> String {
        let mut s = format!("{}/{} ok", self.runs - self.failures.len(), self.runs);
        if let Some(first) = self.failures.first() {
            let _ = write!(s, "; first failure: {first}");
        }
        s
    }
}

#[derive(Default)]
struct Results {
    laa_ratio: Tally,
    rla_ratio: Tally,
    query_bounds: Tally,
    invariants: Tally,
    dominance: Tally,
    notes: HashMap<u8, String>,
}

fn coverage(n: usize, k: usize, seed: u64) -> (KnapsackInstance, CoverageBonusObjective) {
    let b = gen_random_instance(n, k, seed, &FamilyParams::default()).expect("generator");
    let ObjectiveSpec::CoverageBonus(spec) = b.objective else {
        unreachable!("generator yields coverage-bonus instances")
    };
    (b.instance, CoverageBonusObjective::new(spec).expect("generated spec is valid"))
}

fn certify(f: &dyn Objective, inst: &KnapsackInstance) -> KSubReport {
    let opts = CheckOptions {
        max_states: u64::MAX,
        ..CheckOptions::default()
    };
    check_ksubmodularity_with(f, inst, CheckMode::Exhaustive, opts).expect("exhaustive check")
}

fn guesses_bound(eps: f64) -> u64 {
    (19f64.ln() / (1.0 + eps).ln()).ceil() as u64 + 1
}

/// Criteria 1, 2, 4 and the small-instance part of 3 and 5.
fn small_suite(res: &mut Results) {
    let mut phase = [0.0f64; 4];
    let mut lap = Instant::now();
    let mut tick = |slot: usize, phase: &mut [f64; 4]| {
        phase[slot] += lap.elapsed().as_secs_f64();
        lap = Instant::now();
    };
    let (mut seed, mut instances, mut skipped, mut uncertified) = (0u64, 0usize, 0usize, 0usize);
    while instances < SUITE_SIZE {
        let i = instances;
        let (n, k) = (4 + i % 5, 2 + (i / 5) % 2);
        seed += 1;
        let (inst, f) = coverage(n, k, seed);
        if !inst.costs().iter().any(|&c| c <= inst.budget()) {
            skipped += 1;
            continue;
        }
        instances += 1;
        let tag = format!("n={n} k={k} seed={seed}");
        tick(3, &mut phase);
        let certified = certify(&f, &inst).is_k_submodular();
        tick(0, &mut phase);
        if !certified {
            uncertified += 1;
            res.laa_ratio.record(false, || format!("{tag}: not certified"));
            continue;
        }
        let opt = brute_force_opt(&inst, &f, DEFAULT_ENUMERATION_CAP).expect("brute force").value;
        tick(1, &mut phase);

        let oracle = CountingOracle::new(&f);
        let run = laa(&inst, &oracle, TieBreak::default()).expect("laa");
        let v = run.result.value;
        res.laa_ratio.record(v >= opt / 19.0 - 1e-9 * opt, || format!("{tag}: {v} < {opt}/19"));
        let q = run.result.queries;
        res.query_bounds.record(q <= laa_query_bound(n, k), || format!("{tag}: laa queries {q}"));
        res.dominance.record(run.result.cost <= inst.budget(), || format!("{tag}: laa infeasible"));
        match audit_laa_trace(&run, &inst, &f, Some(DEFAULT_ENUMERATION_CAP)) {
            Ok(a) => {
                let ok = a.packing.ok && a.small_items.is_some_and(|b| b.ok);
                res.invariants.record(ok, || format!("{tag}: {a:?}"));
            }
            Err(e) => res.invariants.record(false, || format!("{tag}: {e}")),
        }
        tick(2, &mut phase);

        for eps in EPSILONS {
            let oracle = CountingOracle::new(&f);
            let r = rla(&inst, &oracle, eps, TieBreak::default()).expect("rla");
            let v = r.result.value;
            let want = (0.2 - eps) * opt - 1e-9 * opt;
            let audited = audit_rla(&r, &inst, &f, eps, opt).is_ok_and(|a| a.passed());
            res.rla_ratio.record(v >= want && audited, || format!("{tag} eps={eps}: {v} < {want} or audit failed"));
            let (q, base) = (r.result.queries, r.laa.result.queries);
            let bound = base + (n * k) as u64 * guesses_bound(eps);
            res.query_bounds.record(base <= laa_query_bound(n, k) && q <= bound, || {
                format!("{tag} eps={eps}: rla queries {q} > {bound}")
            });
            let ok = v >= run.result.value && r.result.cost <= inst.budget();
            res.dominance.record(ok, || format!("{tag} eps={eps}: dominance or feasibility"));
        }
        tick(3, &mut phase);
    }
    let [check, brute, laa_s, rla_s] = phase;
    res.notes.insert(
        1,
        format!(
            "{instances} instances, {uncertified} uncertified, {skipped} seeds skipped (no element fits B); \
             certify {check:.1}s, opt {brute:.1}s, laa+audit {laa_s:.1}s"
        ),
    );
    res.notes.insert(2, format!("{:.1}s", rla_s));
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

/// Criterion 3: query counts grow linearly in `n`.
fn scaling(res: &mut Results) -> bool {
    let (k, eps) = (3, 0.1);
    let sizes = [100usize, 200, 500, 1000, 1500, 2000];
    let (mut laa_q, mut rla_q) = (Vec::new(), Vec::new());
    for &n in &sizes {
        let (inst, f) = coverage(n, k, 7);
        let r = rla(&inst, &CountingOracle::new(&f), eps, TieBreak::default()).expect("rla");
        let base = r.laa.result.queries;
        let ok = base <= laa_query_bound(n, k) && r.result.queries <= base + rla_extra_query_bound(n, k, eps);
        res.query_bounds.record(ok, || format!("n={n}: query bound"));
        let ok = r.result.value >= r.laa.result.value && r.result.cost <= inst.budget();
        res.dominance.record(ok, || format!("n={n}: dominance or feasibility"));
        laa_q.push(base as f64);
        rla_q.push(r.result.queries as f64);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let (_, _, r2_laa) = linear_fit(&xs, &laa_q);
    let (_, _, r2_rla) = linear_fit(&xs, &rla_q);
    res.notes.insert(3, format!("R^2 laa={r2_laa:.5} rla={r2_rla:.5} over n={sizes:?}"));
    r2_laa >= 0.99 && r2_rla >= 0.99
}

/// `|supp(x)|²`: pairwise monotone but supermodular.
struct SquaredSupport {
    k: usize,
    n: usize,
}

impl Objective for SquaredSupport {
    fn k(&self) -> usize {
        self.k
    }
    fn contains(&self, e: Element) -> bool {
        e < self.n
    }
    fn evaluate(&self, x: &KSet) -> f64 {
        (x.len() * x.len()) as f64
    }
}

/// A k-submodular objective with one corrupted table entry.
struct Corrupted<'a> {
    inner: &'a dyn Objective,
    target: KSet,
    delta: f64,
}

impl Objective for Corrupted<'_> {
    fn k(&self) -> usize {
        self.inner.k()
    }
    fn contains(&self, e: Element) -> bool {
        self.inner.contains(e)
    }
    fn evaluate(&self, x: &KSet) -> f64 {
        self.inner.evaluate(x) + if *x == self.target { self.delta } else { 0.0 }
    }
}

fn unit_instance(n: usize, k: usize) -> KnapsackInstance {
    KnapsackInstance::new((0..n).collect(), k, vec![1.0; n], n as f64).expect("instance")
}

fn gain(f: &dyn Objective, x: &KSet, e: Element, i: usize) -> f64 {
    f.evaluate(&x.assign(e, i).expect("free element")) - f.evaluate(x)
}

/// Criterion 6.
fn certification(res: &mut Results) -> bool {
    let mut ok = true;
    let mut certified = 0;
    for n in 2..=5 {
        for k in 2..=3 {
            for seed in 0..10 {
                let (inst, f) = coverage(n, k, seed);
                let r = certify(&f, &inst);
                let witness = r.nonmonotone_witness.as_ref().is_some_and(|w| gain(&f, &w.x, w.element, w.position) < 0.0);
                ok &= r.is_k_submodular() && witness;
                certified += 1;
            }
        }
    }
    let signed: HashMap<Element, Vec<f64>> =
        [(0, vec![-1.0, 2.0, 1.5]), (1, vec![0.5, 0.5, 0.5]), (2, vec![3.0, -2.0, 2.0]), (3, vec![0.0, 0.0, 1.0]), (4, vec![1.0, -0.5, 0.5])]
            .into_iter()
            .collect();
    let modular = ModularObjective::new(3, signed);
    let r = certify(&modular, &unit_instance(5, 3));
    ok &= r.is_k_submodular() && r.nonmonotone_witness.is_some();
    for k in 2..=3 {
        let r = certify(&ModularObjective::cardinality(k, 0..5), &unit_instance(5, k));
        ok &= r.is_k_submodular();
        let r = certify(&ZeroObjective::new(k, 0..5), &unit_instance(5, k));
        ok &= r.is_k_submodular();
        certified += 2;
    }
    certified += 1;

    // Pairwise mutant: a negative bonus pair on an element whose items are
    // covered by another.
    let spec = CoverageBonusSpec {
        k: 2,
        entries: vec![
            CoverageBonusEntry { element: 0, items: vec![1], bonus: vec![-1.0, 0.0] },
            CoverageBonusEntry { element: 1, items: vec![1, 2], bonus: vec![0.0, 0.0] },
            CoverageBonusEntry { element: 2, items: vec![3], bonus: vec![0.5, 0.0] },
        ],
    };
    let pairwise = CoverageBonusObjective::new_unchecked(spec).expect("mutant");
    let r = certify(&pairwise, &unit_instance(3, 2));
    let pairwise_caught = r.pairwise_counterexample.as_ref().is_some_and(|c| {
        gain(&pairwise, &c.x, c.element, c.i) + gain(&pairwise, &c.x, c.element, c.j) < 0.0
    }) && !r.is_k_submodular();

    // Orthant mutant: supermodular growth.
    let square = SquaredSupport { k: 3, n: 4 };
    let r = certify(&square, &unit_instance(4, 3));
    let orthant_caught = r.orthant_counterexample.as_ref().is_some_and(|c| {
        c.x.is_subset_of(&c.y)
            && gain(&square, &c.x, c.element, c.position) < gain(&square, &c.y, c.element, c.position)
    }) && r.pairwise_ok
        && !r.is_k_submodular();

    // Lattice mutant: one corrupted value of a certified objective.
    let (inst, base) = coverage(5, 3, 11);
    let target = KSet::from_pairs(3, [(0, 1), (2, 2), (3, 3)]).expect("kset");
    let corrupted = Corrupted { inner: &base, target, delta: 3.0 };
    let r = certify(&corrupted, &inst);
    let lattice_caught = r.definition_counterexample.as_ref().is_some_and(|c| {
        let meet = c.x.meet(&c.y).expect("meet");
        let join = c.x.join(&c.y).expect("join");
        let f = |s: &KSet| corrupted.evaluate(s);
        f(&c.x) + f(&c.y) < f(&meet) + f(&join)
    }) && !r.is_k_submodular();

    res.notes.insert(
        6,
        format!(
            "{certified} built-in objectives certified; mutants flagged: pairwise={pairwise_caught} orthant={orthant_caught} lattice={lattice_caught}"
        ),
    );
    ok && pairwise_caught && orthant_caught && lattice_caught
}

/// Criterion 7.
fn application_oracles(res: &mut Results) -> bool {
    let half_ln_2pie = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    let f = GaussianEntropyObjective::from_covariance(1, 2, DMatrix::identity(2, 2), Ridge::None).expect("entropy");
    let h = f.evaluate(&KSet::from_pairs(2, [(0, 1)]).expect("kset"));
    let entropy_ok = (h - half_ln_2pie).abs() <= 1e-9;

    let g = TopicGraph::new(2, 1, vec![(0, 1, vec![0.5])]).expect("graph");
    let seed = KSet::from_pairs(1, [(0, 1)]).expect("kset");
    let exact = lt_exact_spread(&g, &seed, 1 << 20).expect("exact spread");
    let estimate = lt_spread_estimate(&g, &seed, 10_000, 42).expect("estimate");
    let lt_ok = (exact - 1.5).abs() <= 1e-12 && (estimate - 1.5).abs() <= 0.05;
    res.notes.insert(7, format!("H={h:.12} (target {half_ln_2pie:.12}), LT exact={exact} estimate={estimate:.4}"));
    entropy_ok && lt_ok
}

/// Criterion 8: budget sweep on a generated 500-node influence instance.
fn sweep(res: &mut Results) -> bool {
    let start = Instant::now();
    let budgets = vec![20.0, 40.0, 60.0, 80.0, 100.0];
    let cfg = ExperimentConfig {
        application: Application::Influence,
        n: 500,
        k: 3,
        epsilon: 0.1,
        budgets: budgets.clone(),
        algorithms: vec![Algorithm::Laa, Algorithm::Rla],
        seed: 2024,
        reps: 2,
        mc_samples: 100,
        ..ExperimentConfig::default()
    };
    let bundles = load_instances(&cfg).expect("instances");
    let table = run_bundles(&cfg, &bundles).expect("sweep");
    let dir = tempfile::tempdir().expect("tempdir");
    emit_outputs(&table, dir.path()).expect("outputs");
    let rows = read_results_csv(std::fs::File::open(dir.path().join(RESULTS_FILE)).expect("csv")).expect("csv");
    let mut ok = table.failures.is_empty() && rows == table.rows;

    let (n, k, eps) = (cfg.n, cfg.k, cfg.epsilon);
    for r in rows.iter().filter(|r| r.algorithm == "laa") {
        let mate = rows.iter().find(|x| x.algorithm == "rla" && x.budget == r.budget && x.rep == r.rep);
        let Some(x) = mate else {
            ok = false;
            continue;
        };
        let bounds = r.queries <= laa_query_bound(n, k) && x.queries <= r.queries + rla_extra_query_bound(n, k, eps);
        res.query_bounds.record(bounds, || format!("sweep B={} rep={}: query bound", r.budget, r.rep));
        res.dominance.record(x.value >= r.value, || format!("sweep B={} rep={}: rla below laa", r.budget, r.rep));
    }
    for b in &bundles {
        for &budget in &budgets {
            let inst = b.instance.with_budget(budget).expect("budget");
            let f = b.build_objective().expect("objective");
            for algo in [Algorithm::Laa, Algorithm::Rla] {
                let r = ksmk_core::experiment::solve(algo, &inst, f.as_ref(), eps, TieBreak::default(), 0);
                let feasible = r.as_ref().is_ok_and(|r| r.cost <= budget);
                res.dominance.record(feasible, || format!("sweep B={budget} {}: infeasible", algo.name()));
            }
        }
    }

    let value = means(&table, "value");
    let queries = means(&table, "queries");
    let lookup = |m: &[(String, f64, f64)], alg: &str, b: f64| {
        m.iter().find(|(a, x, _)| a == alg && *x == b).map(|t| t.2).unwrap_or(f64::NAN)
    };
    let costs = bundles[0].instance.costs();
    let sizes: Vec<f64> = budgets.iter().map(|&b| costs.iter().filter(|&&c| c <= b).count() as f64).collect();
    let mut detail = format!("n_eff={sizes:?}");
    for &b in &budgets {
        ok &= lookup(&value, "rla", b) >= lookup(&value, "laa", b);
        ok &= lookup(&queries, "laa", b) < lookup(&queries, "rla", b);
    }
    for alg in ["laa", "rla"] {
        let ys: Vec<f64> = budgets.iter().map(|&b| lookup(&queries, alg, b)).collect();
        let (slope, intercept, _) = linear_fit(&sizes, &ys);
        let worst = sizes
            .iter()
            .zip(&ys)
            .map(|(x, y)| ((y - intercept - slope * x) / (intercept + slope * x)).abs())
            .fold(0.0, f64::max);
        ok &= worst <= 0.05;
        let _ = write!(detail, ", {alg}: mean queries {ys:?} max dev {:.2}%", worst * 100.0);
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    let _ = write!(detail, ", {secs:.1}s");
    res.notes.insert(8, detail);
    ok
}

fn main() -> ExitCode {
    let mut res = Results::default();
    small_suite(&mut res);
    let scaling_ok = scaling(&mut res);
    let certification_ok = certification(&mut res);
    let oracles_ok = application_oracles(&mut res);
    let sweep_ok = sweep(&mut res);

    let note = |i: u8| res.notes.get(&i).cloned().unwrap_or_default();
    let lines = [
        (res.laa_ratio.passed(), "LAA ratio f >= opt/19", format!("{}; {}", res.laa_ratio.detail(), note(1))),
        (res.rla_ratio.passed(), "RLA ratio f >= (1/5 - eps) opt", format!("{}; {}", res.rla_ratio.detail(), note(2))),
        (res.query_bounds.passed() && scaling_ok, "query bounds and linear scaling", format!("{}; {}", res.query_bounds.detail(), note(3))),
        (res.invariants.passed(), "LAA trace invariants", res.invariants.detail()),
        (res.dominance.passed(), "dominance and feasibility", res.dominance.detail()),
        (certification_ok, "k-submodularity certification", note(6)),
        (oracles_ok, "application oracles", note(7)),
        (sweep_ok, "influence budget sweep trends", note(8)),
    ];
    let mut all = true;
    for (i, (ok, name, detail)) in lines.iter().enumerate() {
        println!("criterion {} {}: {name} ({detail})", i + 1, if *ok { "PASS" } else { "FAIL" });
        all &= ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
