//! Exhaustive verification over all rooted trees of a given order.
//!
//! Every tree is evaluated independently and the per-tree results are merged
//! with an associative, commutative reduction, so the ledger does not depend
//! on how the sweep was scheduled.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::AnalyzedTree;
use crate::bounds::{self, BoundReport};
use crate::counting::rooted_tree_count;
use crate::enumerate::{enumerate_rooted_trees_with_cap, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::level_matrix::{distance_matrix, row_sum_difference, LevelMatrix};
use crate::par::{map_reduce, Parallelism};
use crate::spectra::{
    characteristic_polynomial, exact_zero_multiplicity, symmetric_eigenvalues_with, EigenMethod,
    Spectrum, DEFAULT_CLUSTER_TOL,
};
use crate::tree::{encode_sequence, RootedTree};

/// A named check and the smallest order it applies to.
#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    pub min_order: usize,
    pub summary: &'static str,
}

const fn check(name: &'static str, min_order: usize, summary: &'static str) -> CheckInfo {
    CheckInfo {
        name,
        min_order,
        summary,
    }
}

pub const CHECKS: &[CheckInfo] = &[
    check("bound-chain", 2, "sqrt(sum Q^2/sum L^2) >= sqrt(sum L^2/n) >= 2 LI/n"),
    check("canonical-idempotent", 1, "canonical form re-canonicalizes to itself"),
    check("charpoly-coefficients", 1, "x^(n-1) coefficient 0, x^(n-2) coefficient -H/2, det = 0 iff not a path (n >= 2)"),
    check("dual-pipeline", 1, "roots of the exact characteristic polynomial match the eigensolver"),
    check("energy-bound-6", 1, "E <= sqrt(2n sum_{i<j} l_ij^2)"),
    check("energy-bound-improved", 3, "E <= sqrt(2(n-1) sum_{i<j} l_ij^2) for non-paths"),
    check("energy-identity", 1, "E = 2 rho"),
    check("firstb-lower", 1, "2 LI/n <= rho, strict for n > 2"),
    check("firstb-upper", 1, "rho <= max_i L_i"),
    check("interlacing", 2, "spectrum of T - v interlaces that of T for every leaf v"),
    check("irreducible", 2, "nonzero pattern of L is connected"),
    check("lambda-sq-bound", 1, "lambda^2 <= (n-1) H / n"),
    check("leaf-delete-mult", 2, "|mul_T(lambda) - mul_{T-v}(lambda)| <= 1"),
    check("leaf-delete-zero", 3, "mul_T(0) - mul_{T-v}(0) in {0, 1} (exact)"),
    check("level-le-distance", 1, "l_ij <= d_ij, with L = D iff rooted path"),
    check("level-recurrence", 1, "levels[v] = levels[parent(v)] + 1, unique root at level 0"),
    check("lupas-intervals", 3, "per-index eigenvalue intervals and the global interval"),
    check("one-positive", 2, "exactly one positive eigenvalue"),
    check("path-star-levels", 1, "l_max = n-1 iff path; l_max = 1 iff star"),
    check("perron-positive", 2, "positive unit Perron vector with small residual"),
    check("prop1", 1, "|lambda| <= (n-1) l_max, tight for n <= 2"),
    check("q-identity", 1, "sum Q_i = sum L_j^2 (exact)"),
    check("q-lower", 2, "rho >= sqrt(sum Q^2 / sum L^2)"),
    check("quotient-lower", 2, "quotient-matrix lower bound on rho"),
    check("rho-meansq-lower", 1, "rho^2 >= H/n, tight for n <= 2"),
    check("row-sum-difference", 2, "closed form for L_i - L_k equals direct difference (exact)"),
    check("rowsq-lower", 1, "rho >= sqrt(sum L_j^2 / n)"),
    check("spectrum-trace-zero", 1, "eigenvalues sum to zero"),
    check("star-iff-mult", 3, "mul(0) = n-2 iff rooted star"),
    check("trace-identity", 1, "sum lambda^2 = H"),
    check("zero-mult-exact", 3, "mul(0) = n-1-l_max (exact rank)"),
    check("zero-mult-numeric", 1, "clustered multiplicity of 0 equals exact nullity"),
    check("zero-mult-upper", 2, "mul(0) <= n-1-l_max (exact rank)"),
];

/// Checks belonging to the multiplicity theorems.
pub const MULTIPLICITY_CHECKS: &[&str] = &[
    "leaf-delete-mult",
    "leaf-delete-zero",
    "one-positive",
    "star-iff-mult",
    "zero-mult-exact",
    "zero-mult-upper",
];

/// Checks that need the exact characteristic polynomial.
const CHARPOLY_CHECKS: &[&str] = &["charpoly-coefficients", "dual-pipeline"];

/// Tolerance for matching polynomial roots against the eigensolver.
pub const DUAL_PIPELINE_TOL: f64 = 1e-7;
/// Relative slack allowed when testing interlacing.
pub const INTERLACING_TOL: f64 = 1e-8;

pub fn check_info(name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|c| c.name == name)
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// `None` runs every check.
    pub selection: Option<BTreeSet<String>>,
    pub parallelism: Parallelism,
    pub cluster_tol: f64,
    pub method: EigenMethod,
    pub cap: usize,
    /// Largest order for which the exact characteristic polynomial checks run.
    pub charpoly_max_order: usize,
    /// Offending trees kept per check.
    pub max_offenders: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            selection: None,
            parallelism: Parallelism::Auto,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            method: EigenMethod::default(),
            cap: DEFAULT_ENUMERATION_CAP,
            charpoly_max_order: 10,
            max_offenders: 16,
        }
    }
}

impl VerifyOptions {
    /// Restricts the run to the named checks.
    pub fn select<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for name in names {
            let name = name.as_ref().trim();
            if check_info(name).is_none() {
                return Err(Error::UnknownCheck(name.to_string()));
            }
            set.insert(name.to_string());
        }
        self.selection = Some(set);
        Ok(self)
    }

    pub fn with_parallelism(mut self, p: Parallelism) -> Self {
        self.parallelism = p;
        self
    }

    fn is_selected(&self, name: &str) -> bool {
        self.selection.as_ref().is_none_or(|s| s.contains(name))
    }

    fn selected(&self) -> Vec<&'static CheckInfo> {
        CHECKS.iter().filter(|c| self.is_selected(c.name)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub trees_checked: u64,
    pub violations: u64,
    /// Smallest margin seen; `None` for exact (integer) checks.
    pub worst_slack: Option<f64>,
    pub offenders: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCheck {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalEntry {
    pub statistic: String,
    pub min_tree: String,
    pub min_value: f64,
    /// Second-smallest value minus the smallest.
    pub min_gap: Option<f64>,
    pub max_tree: String,
    pub max_value: f64,
    /// Largest value minus the second-largest.
    pub max_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationLedger {
    pub order: usize,
    pub tree_count: u64,
    pub expected_tree_count: u64,
    pub checks: Vec<CheckSummary>,
    pub skipped: Vec<SkippedCheck>,
    pub extremal: Vec<ExtremalEntry>,
}

impl VerificationLedger {
    pub fn total_violations(&self) -> u64 {
        self.checks.iter().map(|c| c.violations).sum::<u64>()
            + u64::from(self.tree_count != self.expected_tree_count)
    }

    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extremal(&self, statistic: &str) -> Option<&ExtremalEntry> {
        self.extremal.iter().find(|e| e.statistic == statistic)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "order {}: {} trees (expected {})",
            self.order, self.tree_count, self.expected_tree_count
        );
        let _ = writeln!(
            out,
            "{:<24} {:>8} {:>10} {:>14}",
            "check", "trees", "violations", "worst slack"
        );
        for c in &self.checks {
            let slack = c.worst_slack.map_or_else(|| "exact".to_string(), |s| format!("{s:.6e}"));
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>10} {:>14}",
                c.name, c.trees_checked, c.violations, slack
            );
            for o in &c.offenders {
                let _ = writeln!(out, "    offender {o}");
            }
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped {}: {}", s.name, s.reason);
        }
        for e in &self.extremal {
            let gap = |g: Option<f64>| g.map_or_else(|| "-".to_string(), |g| format!("{g:.6e}"));
            let _ = writeln!(
                out,
                "{:<8} min {} at [{}] (gap {})",
                e.statistic,
                crate::report::fmt_sig(e.min_value),
                e.min_tree,
                gap(e.min_gap)
            );
            let _ = writeln!(
                out,
                "{:<8} max {} at [{}] (gap {})",
                e.statistic,
                crate::report::fmt_sig(e.max_value),
                e.max_tree,
                gap(e.max_gap)
            );
        }
        let _ = writeln!(
            out,
            "{}: {} violation(s)",
            if self.is_clean() { "PASS" } else { "FAIL" },
            self.total_violations()
        );
        out
    }
}

/// Statistic for extremal searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Rho,
    Energy,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Rho => "rho",
            Statistic::Energy => "energy",
        }
    }

    fn of(self, s: &Spectrum) -> f64 {
        match self {
            Statistic::Rho => s.rho,
            Statistic::Energy => s.energy,
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(Statistic::Rho),
            "energy" => Ok(Statistic::Energy),
            other => Err(Error::UnknownCheck(format!("statistic {other}"))),
        }
    }
}

/// Up to two best entries, ordered by value then by level sequence.
#[derive(Debug, Clone, Default)]
struct Top2 {
    entries: Vec<(f64, Vec<usize>)>,
}

impl Top2 {
    fn merge(mut self, other: Top2, descending: bool) -> Top2 {
        self.entries.extend(other.entries);
        self.entries.sort_by(|a, b| {
            let ord = a.0.total_cmp(&b.0);
            let ord = if descending { ord.reverse() } else { ord };
            ord.then_with(|| a.1.cmp(&b.1))
        });
        self.entries.truncate(2);
        self
    }

    fn single(value: f64, seq: Vec<usize>) -> Top2 {
        Top2 {
            entries: vec![(value, seq)],
        }
    }

    fn gap(&self) -> Option<f64> {
        match self.entries.as_slice() {
            [a, b] => Some((a.0 - b.0).abs()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Extremes {
    low: Top2,
    high: Top2,
}

impl Extremes {
    fn single(value: f64, seq: &[usize]) -> Self {
        Extremes {
            low: Top2::single(value, seq.to_vec()),
            high: Top2::single(value, seq.to_vec()),
        }
    }

    fn merge(self, other: Extremes) -> Extremes {
        Extremes {
            low: self.low.merge(other.low, false),
            high: self.high.merge(other.high, true),
        }
    }

    fn entry(&self, statistic: &str) -> Option<ExtremalEntry> {
        let (min_value, min_seq) = self.low.entries.first()?;
        let (max_value, max_seq) = self.high.entries.first()?;
        Some(ExtremalEntry {
            statistic: statistic.to_string(),
            min_tree: encode_sequence(min_seq),
            min_value: *min_value,
            min_gap: self.low.gap(),
            max_tree: encode_sequence(max_seq),
            max_value: *max_value,
            max_gap: self.high.gap(),
        })
    }
}

#[derive(Debug, Clone, Default)]
struct Acc {
    checked: u64,
    violations: u64,
    worst: Option<f64>,
    offenders: Vec<String>,
}

impl Acc {
    fn merge(mut self, other: Acc, max_offenders: usize) -> Acc {
        self.checked += other.checked;
        self.violations += other.violations;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.offenders.extend(other.offenders);
        self.offenders.sort();
        self.offenders.truncate(max_offenders);
        self
    }
}

#[derive(Debug, Clone, Default)]
struct Partial {
    trees: u64,
    checks: BTreeMap<&'static str, Acc>,
    rho: Extremes,
    energy: Extremes,
}

impl Partial {
    fn merge(mut self, other: Partial, max_offenders: usize) -> Partial {
        self.trees += other.trees;
        for (name, acc) in other.checks {
            let mine = self.checks.remove(name).unwrap_or_default();
            self.checks.insert(name, mine.merge(acc, max_offenders));
        }
        self.rho = std::mem::take(&mut self.rho).merge(other.rho);
        self.energy = std::mem::take(&mut self.energy).merge(other.energy);
        self
    }
}

struct TreeRun<'a> {
    opts: &'a VerifyOptions,
    encoding: String,
    out: Partial,
}

impl TreeRun<'_> {
    fn wants(&self, name: &str) -> bool {
        self.opts.is_selected(name)
    }

    fn record(&mut self, name: &'static str, ok: bool, slack: Option<f64>) {
        let acc = self.out.checks.entry(name).or_default();
        acc.checked += 1;
        if let Some(s) = slack {
            acc.worst = Some(acc.worst.map_or(s, |w| w.min(s)));
        }
        if !ok {
            acc.violations += 1;
            if acc.offenders.len() < self.opts.max_offenders {
                acc.offenders.push(self.encoding.clone());
            }
        }
    }

    fn report(&mut self, name: &'static str, r: &BoundReport, ok: bool) {
        self.record(name, ok, Some(r.slack));
    }
}

fn evaluate_tree(tree: RootedTree, opts: &VerifyOptions) -> Partial {
    let seq = tree.canonical_level_sequence();
    let mut run = TreeRun {
        opts,
        encoding: encode_sequence(&seq),
        out: Partial {
            trees: 1,
            ..Partial::default()
        },
    };
    let n = tree.len();

    // structural checks need no spectrum
    if run.wants("level-recurrence") {
        let levels = tree.levels();
        let l = levels.as_slice();
        let ok = l[tree.root()] == 0
            && l.iter().filter(|&&x| x == 0).count() == 1
            && (0..n).all(|v| tree.parent(v).is_none_or(|p| l[v] == l[p] + 1));
        run.record("level-recurrence", ok, None);
    }
    if run.wants("canonical-idempotent") {
        let ok = tree.canonical().canonical_level_sequence() == seq;
        run.record("canonical-idempotent", ok, None);
    }
    if run.wants("path-star-levels") {
        let lmax = tree.levels().max_level();
        let is_path = seq == RootedTree::rooted_path(n).map(|t| t.canonical_level_sequence()).unwrap_or_default();
        let is_star = n >= 2
            && seq == RootedTree::rooted_star(n).map(|t| t.canonical_level_sequence()).unwrap_or_default();
        let ok = ((lmax + 1 == n) == is_path) && ((n >= 2 && lmax == 1) == is_star);
        run.record("path-star-levels", ok, None);
    }

    let analyzed = match AnalyzedTree::with_options(tree, opts.cluster_tol, opts.method) {
        Ok(a) => a,
        Err(_) => {
            run.record("solver", false, None);
            return run.out;
        }
    };
    let t = &analyzed;
    let m = &t.matrix;
    let s = &t.spectrum;
    run.out.rho = Extremes::single(s.rho, &seq);
    run.out.energy = Extremes::single(s.energy, &seq);

    if run.wants("level-le-distance") {
        let d = distance_matrix(&t.tree);
        let dominated = (0..n).all(|i| (0..n).all(|j| m.get(i, j) <= d.get(i, j)));
        let equal = &d == m.entries();
        let chain = t.tree.children().iter().all(|c| c.len() <= 1);
        run.record("level-le-distance", dominated && equal == chain, None);
    }
    if n >= 2 && run.wants("row-sum-difference") {
        let sorted = m.levels().sorted_descending();
        let row_sum = |l: usize| -> i64 { sorted.iter().map(|&x| (x as i64 - l as i64).abs()).sum() };
        let ok = (1..=n).all(|i| {
            ((i + 1)..=n).all(|k| {
                row_sum_difference(&sorted, i, k)
                    .is_ok_and(|v| v == row_sum(sorted[i - 1]) - row_sum(sorted[k - 1]))
            })
        });
        run.record("row-sum-difference", ok, None);
    }
    if n >= 2 && run.wants("irreducible") {
        run.record("irreducible", m.is_irreducible(), None);
    }

    // bounds
    if run.wants("prop1") {
        let r = bounds::check_prop1(t);
        run.report("prop1", &r, r.consistent());
    }
    if run.wants("trace-identity") {
        let r = bounds::check_trace_identity(t);
        run.report("trace-identity", &r, r.satisfied);
    }
    if run.wants("rho-meansq-lower") {
        let r = bounds::check_rho_lower_meansq(t);
        run.report("rho-meansq-lower", &r, r.consistent());
    }
    if run.wants("firstb-lower") || run.wants("firstb-upper") {
        let [lo, hi] = bounds::check_firstb(t);
        if run.wants("firstb-lower") {
            let ok = lo.consistent() && (n <= 2 || lo.is_strict());
            run.report("firstb-lower", &lo, ok);
        }
        if run.wants("firstb-upper") {
            run.report("firstb-upper", &hi, hi.satisfied);
        }
    }
    if run.wants("rowsq-lower") {
        let r = bounds::check_rho_lower_rowsq(t);
        run.report("rowsq-lower", &r, r.satisfied);
    }
    if n >= 2 && run.wants("q-lower") {
        match bounds::check_rho_lower_q(t) {
            Ok(r) => run.report("q-lower", &r, r.satisfied),
            Err(_) => run.record("q-lower", false, None),
        }
    }
    if run.wants("q-identity") {
        let r = bounds::check_q_identity(t);
        run.record("q-identity", r.satisfied, None);
    }
    if n >= 2 && run.wants("quotient-lower") {
        match bounds::check_quotient_bound(t) {
            Ok(r) => run.report("quotient-lower", &r, r.satisfied),
            Err(_) => run.record("quotient-lower", false, None),
        }
    }
    if run.wants("lambda-sq-bound") {
        let r = bounds::check_lambda_sq_bound(t);
        run.report("lambda-sq-bound", &r, r.consistent());
    }
    if n >= 3 && run.wants("lupas-intervals") {
        match bounds::check_lupas_intervals(t) {
            Ok(rs) => {
                let ok = rs.iter().all(|r| r.satisfied);
                let worst = rs.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
                run.record("lupas-intervals", ok, Some(worst));
            }
            Err(_) => run.record("lupas-intervals", false, None),
        }
    }
    if run.wants("energy-bound-6") || run.wants("energy-bound-improved") || run.wants("energy-identity") {
        let rs = bounds::check_energy_bounds(t);
        for r in &rs {
            match r.name.as_str() {
                "energy-bound-6" if run.wants("energy-bound-6") => {
                    run.report("energy-bound-6", r, r.satisfied)
                }
                "energy-bound-improved" if run.wants("energy-bound-improved") => {
                    run.report("energy-bound-improved", r, r.satisfied)
                }
                "energy-identity" if run.wants("energy-identity") => {
                    run.report("energy-identity", r, r.satisfied)
                }
                _ => {}
            }
        }
        // the improvement must never be weaker than the original
        if run.wants("energy-bound-improved") {
            if let Some(r) = rs.iter().find(|r| r.name == "energy-bound-order") {
                if !r.satisfied {
                    run.record("energy-bound-improved", false, Some(r.slack));
                }
            }
        }
    }
    if n >= 2 && run.wants("bound-chain") {
        match bounds::check_bound_chain(t) {
            Ok([a, b]) => {
                run.record("bound-chain", a.satisfied && b.satisfied, Some(a.slack.min(b.slack)))
            }
            Err(_) => run.record("bound-chain", false, None),
        }
    }

    // spectral facts
    let window = s.window();
    if run.wants("spectrum-trace-zero") {
        let limit = n as f64 * 1e-10 * s.rho.max(1.0);
        let tr = s.trace().abs();
        run.record("spectrum-trace-zero", tr <= limit, Some(limit - tr));
    }
    if n >= 2 && run.wants("perron-positive") {
        let ok = s.perron().is_some_and(|v| {
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let residual = (0..n)
                .map(|i| {
                    let lv: f64 = (0..n).map(|j| m.get(i, j) as f64 * v[j]).sum();
                    (lv - s.largest() * v[i]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            (norm - 1.0).abs() <= 1e-12 && residual <= 1e-10 * s.rho && (s.largest() - s.rho).abs() <= window
        });
        run.record("perron-positive", ok, None);
    }
    if n >= 2 && run.wants("one-positive") {
        run.record("one-positive", s.positive_count() == 1, None);
    }

    let wants_exact = ["zero-mult-upper", "zero-mult-exact", "zero-mult-numeric", "star-iff-mult"]
        .iter()
        .any(|c| run.wants(c));
    let nullity = wants_exact.then(|| exact_zero_multiplicity(m.entries()));
    let bound = n - 1 - t.max_level();
    if let Some(z) = nullity {
        if n >= 2 && run.wants("zero-mult-upper") {
            run.record("zero-mult-upper", z <= bound, None);
        }
        if n >= 3 && run.wants("zero-mult-exact") {
            run.record("zero-mult-exact", z == bound, None);
        }
        if run.wants("zero-mult-numeric") {
            let numeric = s.values.iter().filter(|v| v.abs() <= window).count();
            run.record("zero-mult-numeric", numeric == z, None);
        }
        if n >= 3 && run.wants("star-iff-mult") {
            run.record("star-iff-mult", (z == n - 2) == t.tree.is_rooted_star(), None);
        }
    }

    if n <= opts.charpoly_max_order
        && (run.wants("charpoly-coefficients") || run.wants("dual-pipeline"))
    {
        match characteristic_polynomial(m.entries()) {
            Ok(p) => {
                if run.wants("charpoly-coefficients") {
                    use num_bigint::BigInt;
                    use num_traits::Zero;
                    let trace_ok = n < 1 || p.coefficient(n - 1).is_zero();
                    let h_ok = n < 2 || *p.coefficient(n - 2) == BigInt::from(-m.h_value() / 2);
                    let det_ok = n < 2 || p.constant_term().is_zero() != t.tree.is_rooted_path();
                    run.record("charpoly-coefficients", trace_ok && h_ok && det_ok, None);
                }
                if run.wants("dual-pipeline") {
                    let roots = p.real_roots();
                    let worst = if roots.len() == n {
                        roots
                            .iter()
                            .zip(&s.values)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    } else {
                        f64::INFINITY
                    };
                    run.record(
                        "dual-pipeline",
                        worst <= DUAL_PIPELINE_TOL,
                        Some(DUAL_PIPELINE_TOL - worst),
                    );
                }
            }
            Err(_) => run.record("charpoly-coefficients", false, None),
        }
    }

    let leaf_checks = ["leaf-delete-mult", "leaf-delete-zero", "interlacing"];
    if n >= 2 && leaf_checks.iter().any(|c| run.wants(c)) {
        let exact_t = (n >= 3 && run.wants("leaf-delete-zero")).then(|| {
            nullity.unwrap_or_else(|| exact_zero_multiplicity(m.entries()))
        });
        let eps = INTERLACING_TOL * s.rho.max(1.0);
        let mut mult_ok = true;
        let mut zero_ok = true;
        let mut inter_ok = true;
        let mut inter_slack = f64::INFINITY;
        for v in t.tree.leaves() {
            let sub_tree = t.tree.delete_leaf(v).expect("leaves are deletable");
            let sub = LevelMatrix::new(&sub_tree);
            let Ok(mu) = symmetric_eigenvalues_with(sub.entries(), opts.cluster_tol, opts.method)
            else {
                mult_ok = false;
                inter_ok = false;
                continue;
            };
            for c in &s.clusters {
                let after = mu.values.iter().filter(|&&x| (x - c.value).abs() <= window).count();
                if c.multiplicity.abs_diff(after) > 1 {
                    mult_ok = false;
                }
            }
            if let Some(z) = exact_t {
                let dz = z as i64 - exact_zero_multiplicity(sub.entries()) as i64;
                if !(0..=1).contains(&dz) {
                    zero_ok = false;
                }
            }
            for (k, &mk) in mu.values.iter().enumerate() {
                let hi = s.values[k] + eps - mk;
                let lo = mk - (s.values[k + 1] - eps);
                inter_slack = inter_slack.min(hi.min(lo) - eps);
                if hi < 0.0 || lo < 0.0 {
                    inter_ok = false;
                }
            }
        }
        if run.wants("leaf-delete-mult") {
            run.record("leaf-delete-mult", mult_ok, None);
        }
        if exact_t.is_some() {
            run.record("leaf-delete-zero", zero_ok, None);
        }
        if run.wants("interlacing") {
            let slack = inter_slack.is_finite().then_some(inter_slack);
            run.record("interlacing", inter_ok, slack);
        }
    }

    run.out
}

fn validate_order(n: usize, opts: &VerifyOptions) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder("verification needs n >= 1".into()));
    }
    if n > opts.cap {
        return Err(Error::ResourceLimit(format!(
            "order {n} exceeds the enumeration cap of {}",
            opts.cap
        )));
    }
    Ok(())
}

/// Runs every selected check on every rooted tree of order `n`.
pub fn verify_order(n: usize, opts: &VerifyOptions) -> Result<VerificationLedger> {
    validate_order(n, opts)?;
    let trees = enumerate_rooted_trees_with_cap(n, opts.cap)?;
    let max_off = opts.max_offenders;
    let partial = map_reduce(
        trees,
        opts.parallelism,
        Partial::default,
        |t| evaluate_tree(t, opts),
        |a, b| a.merge(b, max_off),
    );

    let mut skipped = Vec::new();
    for info in opts.selected() {
        let reason = if n < info.min_order {
            Some(format!("applies to n >= {}", info.min_order))
        } else if CHARPOLY_CHECKS.contains(&info.name) && n > opts.charpoly_max_order {
            Some(format!(
                "exact polynomial checks limited to n <= {}",
                opts.charpoly_max_order
            ))
        } else {
            None
        };
        if let Some(reason) = reason {
            skipped.push(SkippedCheck {
                name: info.name.to_string(),
                reason,
            });
        }
    }

    let checks = partial
        .checks
        .into_iter()
        .map(|(name, acc)| CheckSummary {
            name: name.to_string(),
            trees_checked: acc.checked,
            violations: acc.violations,
            worst_slack: acc.worst,
            offenders: acc.offenders,
        })
        .collect();
    let extremal = [("energy", &partial.energy), ("rho", &partial.rho)]
        .into_iter()
        .filter_map(|(name, e)| e.entry(name))
        .collect();

    Ok(VerificationLedger {
        order: n,
        tree_count: partial.trees,
        expected_tree_count: rooted_tree_count(n) as u64,
        checks,
        skipped,
        extremal,
    })
}

/// Arg-extreme trees for one statistic over all trees of order `n`.
#[derive(Debug, Clone)]
pub struct ExtremalOutcome {
    pub statistic: Statistic,
    pub argmin: RootedTree,
    pub min_value: f64,
    pub min_gap: Option<f64>,
    pub argmax: RootedTree,
    pub max_value: f64,
    pub max_gap: Option<f64>,
}

impl ExtremalOutcome {
    /// Unique minimizer, separated from the runner-up by more than `gap`.
    pub fn min_is_unique(&self, gap: f64) -> bool {
        self.min_gap.is_none_or(|g| g > gap)
    }

    pub fn max_is_unique(&self, gap: f64) -> bool {
        self.max_gap.is_none_or(|g| g > gap)
    }
}

pub fn extremal_sweep(n: usize, statistic: Statistic, opts: &VerifyOptions) -> Result<ExtremalOutcome> {
    validate_order(n, opts)?;
    let trees = enumerate_rooted_trees_with_cap(n, opts.cap)?;
    let tol = opts.cluster_tol;
    let method = opts.method;
    let ext = map_reduce(
        trees,
        opts.parallelism,
        || Ok(Extremes::default()),
        |t: RootedTree| -> Result<Extremes> {
            let seq = t.canonical_level_sequence();
            let s = symmetric_eigenvalues_with(LevelMatrix::new(&t).entries(), tol, method)?;
            Ok(Extremes::single(statistic.of(&s), &seq))
        },
        |a, b| Ok(a?.merge(b?)),
    )?;
    let (min_value, min_seq) = ext.low.entries.first().cloned().expect("n >= 1 has a tree");
    let (max_value, max_seq) = ext.high.entries.first().cloned().expect("n >= 1 has a tree");
    Ok(ExtremalOutcome {
        statistic,
        argmin: RootedTree::from_level_sequence(&min_seq)?,
        min_value,
        min_gap: ext.low.gap(),
        argmax: RootedTree::from_level_sequence(&max_seq)?,
        max_value,
        max_gap: ext.high.gap(),
    })
}

/// Minimizer and maximizer of the level spectral radius.
pub fn verify_extremal_rho(n: usize, opts: &VerifyOptions) -> Result<ExtremalOutcome> {
    if n < 2 {
        return Err(Error::InvalidOrder("extremal search needs n >= 2".into()));
    }
    extremal_sweep(n, Statistic::Rho, opts)
}

/// Maximizer (and minimizer) of the level energy.
pub fn verify_extremal_energy(n: usize, opts: &VerifyOptions) -> Result<ExtremalOutcome> {
    if n < 2 {
        return Err(Error::InvalidOrder("extremal search needs n >= 2".into()));
    }
    extremal_sweep(n, Statistic::Energy, opts)
}

/// The zero-multiplicity, positive-eigenvalue, star characterization and
/// leaf-deletion checks.
pub fn verify_multiplicity_theorems(n: usize, opts: &VerifyOptions) -> Result<VerificationLedger> {
    verify_order(n, &opts.clone().select(MULTIPLICITY_CHECKS)?)
}

/// Cauchy interlacing under every leaf deletion.
pub fn verify_interlacing(n: usize, opts: &VerifyOptions) -> Result<VerificationLedger> {
    verify_order(n, &opts.clone().select(&["interlacing"])?)
}
