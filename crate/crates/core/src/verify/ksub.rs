//! Certification of k-submodularity.
//!
//! Three properties are checked: orthant submodularity
//! (`Δ_{(e,i)} f(x) ≥ Δ_{(e,i)} f(y)` for `x ⊑ y`, `e ∉ supp(y)`), pairwise
//! monotonicity (`Δ_{(e,i)} f(x) + Δ_{(e,j)} f(x) ≥ 0` for `i ≠ j`) and the
//! lattice inequality `f(x) + f(y) ≥ f(x ⊓ y) + f(x ⊔ y)`. A function is
//! k-submodular iff it is orthant submodular and pairwise monotone, so in
//! exhaustive mode the first two checks alone are a complete certificate.
//!
//! Exhaustive mode tabulates `f` over all `(k+1)^n` k-sets once, indexed by
//! the base-`(k+1)` code `Σ_j x(e_j) (k+1)^j`, and then checks every
//! predicate by table lookup.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::{Element, KSet};
use crate::oracle::Objective;

/// Relative tolerance for flagging a violated inequality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Cap on `(k+1)^n` in exhaustive mode.
    pub max_states: u64,
    /// Cap on `(k+1)^{2n}` for enumerating the lattice inequality over all
    /// pairs. Above it the lattice check is inferred from the other two.
    pub max_definition_pairs: u64,
    pub tolerance: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_states: crate::algorithms::DEFAULT_ENUMERATION_CAP,
            max_definition_pairs: 50_000_000,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthantViolation {
    pub x: KSet,
    pub y: KSet,
    pub element: Element,
    pub position: usize,
    pub gain_x: f64,
    pub gain_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseViolation {
    pub x: KSet,
    pub element: Element,
    pub i: usize,
    pub j: usize,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefinitionViolation {
    pub x: KSet,
    pub y: KSet,
    /// `f(x) + f(y)`.
    pub lhs: f64,
    /// `f(x ⊓ y) + f(x ⊔ y)`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonMonotoneWitness {
    pub x: KSet,
    pub element: Element,
    pub position: usize,
    pub marginal: f64,
}

/// How the lattice inequality was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefinitionCheck {
    Enumerated,
    Sampled,
    /// Too many pairs to enumerate; equal to `orthant_ok && pairwise_ok`.
    Inferred,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KSubReport {
    pub mode: CheckMode,
    pub n: usize,
    pub k: usize,
    pub orthant_ok: bool,
    pub orthant_counterexample: Option<OrthantViolation>,
    pub orthant_checked: u64,
    pub pairwise_ok: bool,
    pub pairwise_counterexample: Option<PairwiseViolation>,
    pub pairwise_checked: u64,
    pub definition_ok: bool,
    pub definition_counterexample: Option<DefinitionViolation>,
    pub definition_checked: u64,
    pub definition_check: DefinitionCheck,
    pub nonmonotone_witness: Option<NonMonotoneWitness>,
}

impl KSubReport {
    fn new(mode: CheckMode, n: usize, k: usize) -> Self {
        Self {
            mode,
            n,
            k,
            orthant_ok: true,
            orthant_counterexample: None,
            orthant_checked: 0,
            pairwise_ok: true,
            pairwise_counterexample: None,
            pairwise_checked: 0,
            definition_ok: true,
            definition_counterexample: None,
            definition_checked: 0,
            definition_check: DefinitionCheck::Enumerated,
            nonmonotone_witness: None,
        }
    }

    pub fn is_k_submodular(&self) -> bool {
        self.orthant_ok && self.pairwise_ok && self.definition_ok
    }

    pub fn pairs_checked(&self) -> u64 {
        self.orthant_checked + self.pairwise_checked + self.definition_checked
    }

    /// Human-readable, one fact per line.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            CheckMode::Exhaustive => "exhaustive".to_string(),
            CheckMode::Sampled { seed, trials } => format!("sampled (seed {seed}, {trials} trials)"),
        };
        let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
        let _ = writeln!(out, "mode: {mode}");
        let _ = writeln!(out, "n: {}, k: {}", self.n, self.k);
        let _ = writeln!(out, "orthant submodularity: {} ({} checks)", verdict(self.orthant_ok), self.orthant_checked);
        if let Some(v) = &self.orthant_counterexample {
            let _ = writeln!(
                out,
                "  x = {}, y = {}, (e,i) = ({},{}): gain at x {} < gain at y {}",
                v.x, v.y, v.element, v.position, v.gain_x, v.gain_y
            );
        }
        let _ = writeln!(out, "pairwise monotonicity: {} ({} checks)", verdict(self.pairwise_ok), self.pairwise_checked);
        if let Some(v) = &self.pairwise_counterexample {
            let _ = writeln!(
                out,
                "  x = {}, e = {}, positions {} and {}: gain sum {}",
                v.x, v.element, v.i, v.j, v.sum
            );
        }
        let how = match self.definition_check {
            DefinitionCheck::Enumerated => "enumerated",
            DefinitionCheck::Sampled => "sampled",
            DefinitionCheck::Inferred => "inferred from the two checks above",
        };
        let _ = writeln!(
            out,
            "lattice inequality: {} ({} checks, {how})",
            verdict(self.definition_ok),
            self.definition_checked
        );
        if let Some(v) = &self.definition_counterexample {
            let _ = writeln!(
                out,
                "  x = {}, y = {}: f(x)+f(y) = {} < f(meet)+f(join) = {}",
                v.x, v.y, v.lhs, v.rhs
            );
        }
        match &self.nonmonotone_witness {
            Some(w) => {
                let _ = writeln!(
                    out,
                    "non-monotone: x = {}, (e,i) = ({},{}), marginal {}",
                    w.x, w.element, w.position, w.marginal
                );
            }
            None => {
                let _ = writeln!(out, "non-monotone: no negative marginal found");
            }
        }
        let _ = writeln!(out, "k-submodular: {}", if self.is_k_submodular() { "yes" } else { "no" });
        out
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let (mode, seed, trials) = match self.mode {
            CheckMode::Exhaustive => ("exhaustive", String::new(), String::new()),
            CheckMode::Sampled { seed, trials } => ("sampled", seed.to_string(), trials.to_string()),
        };
        let _ = writeln!(out, "mode={mode}");
        if !seed.is_empty() {
            let _ = writeln!(out, "seed={seed}");
            let _ = writeln!(out, "trials={trials}");
        }
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "k={}", self.k);
        let _ = writeln!(out, "orthant_ok={}", self.orthant_ok);
        let _ = writeln!(out, "orthant_checked={}", self.orthant_checked);
        let _ = writeln!(out, "pairwise_ok={}", self.pairwise_ok);
        let _ = writeln!(out, "pairwise_checked={}", self.pairwise_checked);
        let _ = writeln!(out, "definition_ok={}", self.definition_ok);
        let _ = writeln!(out, "definition_checked={}", self.definition_checked);
        let _ = writeln!(out, "definition_check={:?}", self.definition_check);
        let _ = writeln!(out, "nonmonotone={}", self.nonmonotone_witness.is_some());
        let _ = writeln!(out, "k_submodular={}", self.is_k_submodular());
        out
    }
}

pub fn check_ksubmodularity(
    f: &dyn Objective,
    inst: &KnapsackInstance,
    mode: CheckMode,
) -> Result<KSubReport> {
    check_ksubmodularity_with(f, inst, mode, CheckOptions::default())
}

pub fn check_ksubmodularity_with(
    f: &dyn Objective,
    inst: &KnapsackInstance,
    mode: CheckMode,
    opts: CheckOptions,
) -> Result<KSubReport> {
    crate::algorithms::check_compatible(inst, f)?;
    match mode {
        CheckMode::Exhaustive => exhaustive(f, inst.universe(), inst.k(), opts),
        CheckMode::Sampled { seed, trials } => Ok(sampled(f, inst.universe(), inst.k(), seed, trials, opts)),
    }
}

fn violated(lhs: f64, rhs: f64, tol: f64, scale: f64) -> bool {
    lhs < rhs - tol * scale.max(1.0)
}

struct Table<'a> {
    universe: &'a [Element],
    k: usize,
    radix: usize,
    powers: Vec<usize>,
    values: Vec<f64>,
}

impl Table<'_> {
    fn digit(&self, code: usize, j: usize) -> usize {
        (code / self.powers[j]) % self.radix
    }

    fn kset(&self, code: usize) -> KSet {
        let mut x = KSet::empty(self.k);
        for (j, &e) in self.universe.iter().enumerate() {
            let p = self.digit(code, j);
            if p > 0 {
                x.insert(e, p).expect("decoded positions are in range");
            }
        }
        x
    }
}

fn exhaustive(f: &dyn Objective, universe: &[Element], k: usize, opts: CheckOptions) -> Result<KSubReport> {
    let n = universe.len();
    let radix = k + 1;
    let states_f = (radix as f64).powi(n as i32);
    if states_f > opts.max_states as f64 {
        return Err(Error::InstanceTooLarge {
            states: states_f,
            cap: opts.max_states,
        });
    }
    let states = radix.pow(n as u32);
    let powers: Vec<usize> = (0..n).map(|j| radix.pow(j as u32)).collect();
    let mut table = Table {
        universe,
        k,
        radix,
        powers,
        values: Vec::with_capacity(states),
    };
    for code in 0..states {
        let x = table.kset(code);
        table.values.push(f.evaluate(&x));
    }
    let scale = table.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = opts.tolerance;
    let mut report = KSubReport::new(CheckMode::Exhaustive, n, k);

    // Orthant: each element is outside y (state 0), in x and y at p
    // (states 1..=k) or in y only at p (states k+1..=2k).
    let mut state = vec![0usize; n];
    loop {
        let (mut xc, mut yc) = (0usize, 0usize);
        for j in 0..n {
            let s = state[j];
            if s >= 1 && s <= k {
                xc += s * table.powers[j];
                yc += s * table.powers[j];
            } else if s > k {
                yc += (s - k) * table.powers[j];
            }
        }
        for j in 0..n {
            if state[j] != 0 {
                continue;
            }
            for i in 1..=k {
                let step = i * table.powers[j];
                let gx = table.values[xc + step] - table.values[xc];
                let gy = table.values[yc + step] - table.values[yc];
                report.orthant_checked += 1;
                if report.orthant_ok && violated(gx, gy, tol, scale) {
                    report.orthant_ok = false;
                    report.orthant_counterexample = Some(OrthantViolation {
                        x: table.kset(xc),
                        y: table.kset(yc),
                        element: universe[j],
                        position: i,
                        gain_x: gx,
                        gain_y: gy,
                    });
                }
            }
        }
        if !advance(&mut state, 2 * k + 1) {
            break;
        }
    }

    // Pairwise monotonicity and the non-monotonicity witness.
    let mut gains = vec![0.0; k];
    for xc in 0..states {
        for j in 0..n {
            if table.digit(xc, j) != 0 {
                continue;
            }
            for i in 1..=k {
                gains[i - 1] = table.values[xc + i * table.powers[j]] - table.values[xc];
                if report.nonmonotone_witness.is_none() && violated(gains[i - 1], 0.0, tol, scale) {
                    report.nonmonotone_witness = Some(NonMonotoneWitness {
                        x: table.kset(xc),
                        element: universe[j],
                        position: i,
                        marginal: gains[i - 1],
                    });
                }
            }
            for i in 1..=k {
                for l in 1..=k {
                    if i == l {
                        continue;
                    }
                    report.pairwise_checked += 1;
                    let sum = gains[i - 1] + gains[l - 1];
                    if report.pairwise_ok && violated(sum, 0.0, tol, scale) {
                        report.pairwise_ok = false;
                        report.pairwise_counterexample = Some(PairwiseViolation {
                            x: table.kset(xc),
                            element: universe[j],
                            i,
                            j: l,
                            sum,
                        });
                    }
                }
            }
        }
    }

    // Lattice inequality over all ordered pairs.
    let pairs = states_f * states_f;
    if pairs > opts.max_definition_pairs as f64 {
        report.definition_check = DefinitionCheck::Inferred;
        report.definition_ok = report.orthant_ok && report.pairwise_ok;
        return Ok(report);
    }
    let mut walk = LatticeWalk {
        table: &table,
        tol,
        scale,
        report: &mut report,
    };
    walk.visit(n, 0, 0, 0, 0);
    Ok(report)
}

/// Enumerates all pairs `(x, y)` one digit at a time, building the codes of
/// `x ⊓ y` and `x ⊔ y` alongside, so each pair costs O(1).
struct LatticeWalk<'a> {
    table: &'a Table<'a>,
    tol: f64,
    scale: f64,
    report: &'a mut KSubReport,
}

impl LatticeWalk<'_> {
    fn visit(&mut self, j: usize, xc: usize, yc: usize, meet: usize, join: usize) {
        if j == 0 {
            let v = &self.table.values;
            let report = &mut *self.report;
            report.definition_checked += 1;
            let lhs = v[xc] + v[yc];
            let rhs = v[meet] + v[join];
            if report.definition_ok && violated(lhs, rhs, self.tol, self.scale) {
                report.definition_ok = false;
                report.definition_counterexample = Some(DefinitionViolation {
                    x: self.table.kset(xc),
                    y: self.table.kset(yc),
                    lhs,
                    rhs,
                });
            }
            return;
        }
        let p = self.table.powers[j - 1];
        for a in 0..self.table.radix {
            for b in 0..self.table.radix {
                let (m, u) = match (a, b) {
                    _ if a == b => (a, a),
                    (0, _) | (_, 0) => (0, a + b),
                    _ => (0, 0),
                };
                self.visit(j - 1, xc + a * p, yc + b * p, meet + m * p, join + u * p);
            }
        }
    }
}

/// Odometer increment over `0..radix` digits; false once it wraps.
fn advance(state: &mut [usize], radix: usize) -> bool {
    for d in state.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn sampled(f: &dyn Objective, universe: &[Element], k: usize, seed: u64, trials: usize, opts: CheckOptions) -> KSubReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = universe.len();
    let tol = opts.tolerance;
    let mut report = KSubReport::new(CheckMode::Sampled { seed, trials }, n, k);
    report.definition_check = DefinitionCheck::Sampled;

    let random_kset = |rng: &mut ChaCha8Rng| {
        let mut x = KSet::empty(k);
        for &e in universe {
            let p = rng.gen_range(0..=k);
            if p > 0 {
                x.insert(e, p).expect("fresh element");
            }
        }
        x
    };

    for _ in 0..trials {
        let x = random_kset(&mut rng);
        let mut y = x.clone();
        for &e in universe {
            if !y.contains(e) && rng.gen_bool(0.5) {
                y.insert(e, rng.gen_range(1..=k)).expect("fresh element");
            }
        }
        let fx = f.evaluate(&x);
        let fy = f.evaluate(&y);

        let outside_y: Vec<Element> = universe.iter().copied().filter(|&e| !y.contains(e)).collect();
        if !outside_y.is_empty() {
            let e = outside_y[rng.gen_range(0..outside_y.len())];
            let i = rng.gen_range(1..=k);
            let gx = f.evaluate(&x.assign(e, i).expect("e outside y")) - fx;
            let gy = f.evaluate(&y.assign(e, i).expect("e outside y")) - fy;
            report.orthant_checked += 1;
            let scale = fx.abs().max(fy.abs()).max((gx + fx).abs()).max((gy + fy).abs());
            if report.orthant_ok && violated(gx, gy, tol, scale) {
                report.orthant_ok = false;
                report.orthant_counterexample = Some(OrthantViolation {
                    x: x.clone(),
                    y: y.clone(),
                    element: e,
                    position: i,
                    gain_x: gx,
                    gain_y: gy,
                });
            }
        }

        let outside_x: Vec<Element> = universe.iter().copied().filter(|&e| !x.contains(e)).collect();
        if !outside_x.is_empty() && k >= 2 {
            let e = outside_x[rng.gen_range(0..outside_x.len())];
            let i = rng.gen_range(1..=k);
            let mut j = rng.gen_range(1..k);
            if j >= i {
                j += 1;
            }
            let gi = f.evaluate(&x.assign(e, i).expect("e outside x")) - fx;
            let gj = f.evaluate(&x.assign(e, j).expect("e outside x")) - fx;
            report.pairwise_checked += 1;
            let scale = fx.abs().max((gi + fx).abs()).max((gj + fx).abs());
            if report.nonmonotone_witness.is_none() {
                for (p, g) in [(i, gi), (j, gj)] {
                    if violated(g, 0.0, tol, scale) {
                        report.nonmonotone_witness = Some(NonMonotoneWitness {
                            x: x.clone(),
                            element: e,
                            position: p,
                            marginal: g,
                        });
                        break;
                    }
                }
            }
            if report.pairwise_ok && violated(gi + gj, 0.0, tol, scale) {
                report.pairwise_ok = false;
                report.pairwise_counterexample = Some(PairwiseViolation {
                    x: x.clone(),
                    element: e,
                    i,
                    j,
                    sum: gi + gj,
                });
            }
        }

        let z = random_kset(&mut rng);
        let fz = f.evaluate(&z);
        let meet = x.meet(&z).expect("same k");
        let join = x.join(&z).expect("same k");
        let lhs = fx + fz;
        let rhs = f.evaluate(&meet) + f.evaluate(&join);
        report.definition_checked += 1;
        if report.definition_ok && violated(lhs, rhs, tol, lhs.abs().max(rhs.abs())) {
            report.definition_ok = false;
            report.definition_counterexample = Some(DefinitionViolation { x, y: z, lhs, rhs });
        }
    }
    report
}
