//! Eigenvalue bounds, identities and closed forms for level matrices, each
//! evaluated into a [`BoundReport`].
//!
//! All checks read the cached aggregates of an [`AnalyzedTree`] (`LI`, the
//! row sums, `H`, `Q`) rather than recomputing them.

use serde::Serialize;

use crate::analysis::AnalyzedTree;
use crate::error::{Error, Result};

/// Relative comparison tolerance, scaled by `max(1, |lhs|, |rhs|)`.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "in")]
    In,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::In => "in",
        }
    }
}

/// Outcome of one inequality or identity.
///
/// `slack` is the signed margin by which the relation holds: `rhs - lhs`
/// for `<=`, `lhs - rhs` for `>=`, `-|lhs - rhs|` for `=`, and the distance
/// to the nearer endpoint for `in`. Negative beyond the tolerance means
/// violated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub slack: f64,
    pub satisfied: bool,
    pub equality_expected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip)]
    pub tolerance: f64,
}

impl BoundReport {
    fn build(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        slack: f64,
        tolerance: f64,
    ) -> Self {
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            relation,
            slack,
            satisfied: slack.is_finite() && slack >= -tolerance,
            equality_expected: None,
            interval: None,
            tolerance,
        }
    }

    fn scaled(values: &[f64]) -> f64 {
        BOUND_TOL * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    /// `lhs <= rhs`.
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::build(name, lhs, rhs, Relation::Le, rhs - lhs, Self::scaled(&[lhs, rhs]))
    }

    /// `lhs >= rhs`.
    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::build(name, lhs, rhs, Relation::Ge, lhs - rhs, Self::scaled(&[lhs, rhs]))
    }

    /// `lhs = rhs` within `rel_tol * max(1, |lhs|, |rhs|)`.
    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let tol = rel_tol * lhs.abs().max(rhs.abs()).max(1.0);
        Self::build(name, lhs, rhs, Relation::Eq, -(lhs - rhs).abs(), tol)
    }

    /// `lo <= value <= hi`.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        let slack = (value - lo).min(hi - value);
        let mut r = Self::build(
            name,
            value,
            hi,
            Relation::In,
            slack,
            Self::scaled(&[value, lo, hi]),
        );
        r.interval = Some([lo, hi]);
        r
    }

    pub fn expect_equality(mut self, expected: bool) -> Self {
        self.equality_expected = Some(expected);
        self
    }

    /// Holds with room to spare beyond the tolerance.
    pub fn is_strict(&self) -> bool {
        self.slack > self.tolerance
    }

    /// Holds with equality up to the tolerance.
    pub fn is_tight(&self) -> bool {
        self.slack.abs() <= self.tolerance
    }

    /// Satisfied, and tight wherever equality is expected.
    pub fn consistent(&self) -> bool {
        self.satisfied && (self.equality_expected != Some(true) || self.is_tight())
    }
}

fn nf(t: &AnalyzedTree) -> f64 {
    t.n() as f64
}

/// `|lambda| <= (n-1) l_max` for every eigenvalue; tight for `n <= 2`.
pub fn check_prop1(t: &AnalyzedTree) -> BoundReport {
    let bound = (nf(t) - 1.0) * t.max_level() as f64;
    BoundReport::le("prop1", t.rho(), bound).expect_equality(t.n() <= 2)
}

/// `sum lambda^2 = H` within `1e-8` relative.
pub fn check_trace_identity(t: &AnalyzedTree) -> BoundReport {
    BoundReport::eq(
        "trace-identity",
        t.spectrum.sum_of_squares(),
        t.matrix.h_value() as f64,
        1e-8,
    )
}

/// `rho^2 >= H / n`; tight for `n <= 2`.
pub fn check_rho_lower_meansq(t: &AnalyzedTree) -> BoundReport {
    BoundReport::ge(
        "rho-meansq-lower",
        t.rho() * t.rho(),
        t.matrix.h_value() as f64 / nf(t),
    )
    .expect_equality(t.n() <= 2)
}

/// `2 LI / n <= rho <= max_i L_i`. The lower bound is tight iff `n <= 2`.
pub fn check_firstb(t: &AnalyzedTree) -> [BoundReport; 2] {
    let lower = 2.0 * t.matrix.level_index() as f64 / nf(t);
    let upper = t.matrix.row_sums().iter().copied().max().unwrap_or(0) as f64;
    [
        BoundReport::ge("firstb-lower", t.rho(), lower).expect_equality(t.n() <= 2),
        BoundReport::le("firstb-upper", t.rho(), upper),
    ]
}

/// `rho >= sqrt(sum_j L_j^2 / n)`.
pub fn check_rho_lower_rowsq(t: &AnalyzedTree) -> BoundReport {
    let bound = (t.matrix.sum_row_sums_squared() as f64 / nf(t)).sqrt();
    BoundReport::ge("rowsq-lower", t.rho(), bound)
}

/// `Q_i = sum_j l_ij L_j`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QVector {
    pub q: Vec<i64>,
}

impl QVector {
    pub fn new(t: &AnalyzedTree) -> Self {
        QVector {
            q: t.matrix.q_vector(),
        }
    }

    pub fn sum(&self) -> i64 {
        self.q.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.q.iter().map(|&x| (x as f64) * (x as f64)).sum()
    }
}

/// `rho >= sqrt(sum Q_i^2 / sum L_j^2)`.
pub fn check_rho_lower_q(t: &AnalyzedTree) -> Result<BoundReport> {
    let denom = t.matrix.sum_row_sums_squared();
    if denom == 0 {
        return Err(Error::DegenerateDenominator("Q bound: all row sums vanish"));
    }
    let q = QVector::new(t);
    let bound = (q.sum_of_squares() / denom as f64).sqrt();
    Ok(BoundReport::ge("q-lower", t.rho(), bound))
}

/// `sum_i Q_i = sum_j L_j^2`, compared as exact integers.
pub fn check_q_identity(t: &AnalyzedTree) -> BoundReport {
    let lhs = QVector::new(t).sum();
    let rhs = t.matrix.sum_row_sums_squared();
    let mut r = BoundReport::eq("q-identity", lhs as f64, rhs as f64, 0.0);
    r.satisfied = lhs == rhs;
    r
}

/// Largest eigenvalue of the 2x2 quotient matrix, maximized over the
/// choice of the singled-out vertex.
pub fn quotient_bound_value(t: &AnalyzedTree) -> Result<f64> {
    let n = t.n();
    if n < 2 {
        return Err(Error::InvalidOrder("quotient bound needs n > 1".into()));
    }
    let li = t.matrix.level_index() as f64;
    let m = (n - 1) as f64;
    Ok(t.matrix
        .row_sums()
        .iter()
        .map(|&l| {
            let l = l as f64;
            let a = li - l;
            (a + (a * a + m * l * l).sqrt()) / m
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `rho >= max_i (LI - L_i + sqrt((LI - L_i)^2 + (n-1) L_i^2)) / (n-1)`.
pub fn check_quotient_bound(t: &AnalyzedTree) -> Result<BoundReport> {
    Ok(BoundReport::ge("quotient-lower", t.rho(), quotient_bound_value(t)?))
}

/// `lambda^2 <= (n-1) H / n` for every eigenvalue.
pub fn check_lambda_sq_bound(t: &AnalyzedTree) -> BoundReport {
    let bound = (nf(t) - 1.0) * t.matrix.h_value() as f64 / nf(t);
    BoundReport::le("lambda-sq-bound", t.rho() * t.rho(), bound).expect_equality(t.n() <= 2)
}

/// Per-index intervals for the sorted eigenvalues, plus the symmetric
/// interval `[-sqrt((n-1)H/n), sqrt((n-1)H/n)]` containing the spectrum.
pub fn check_lupas_intervals(t: &AnalyzedTree) -> Result<Vec<BoundReport>> {
    let n = t.n();
    if n <= 2 {
        return Err(Error::InvalidOrder("interval bounds need n > 2".into()));
    }
    let nf = n as f64;
    let h = t.matrix.h_value() as f64;
    let outer = ((nf - 1.0) * h / nf).sqrt();
    let inner = (h / (nf * (nf - 1.0))).sqrt();
    let values = &t.spectrum.values;
    let mut out = Vec::with_capacity(n + 1);
    for (idx, &lambda) in values.iter().enumerate() {
        let j = idx + 1;
        let (lo, hi) = if j == 1 {
            (inner, outer)
        } else if j == n {
            (-outer, -inner)
        } else {
            let jf = j as f64;
            (
                -((jf - 1.0) * h / (nf * (nf - jf + 1.0))).sqrt(),
                ((nf - jf) * h / (jf * nf)).sqrt(),
            )
        };
        out.push(BoundReport::within(format!("lupas[{j}]"), lambda, lo, hi));
    }
    out.push(BoundReport::le("lupas-global", t.rho(), outer));
    Ok(out)
}

/// Energy bounds: `E <= sqrt(n H)` always, `E <= sqrt((n-1) H)` for trees
/// other than rooted paths, and the identity `E = 2 rho`.
pub fn check_energy_bounds(t: &AnalyzedTree) -> Vec<BoundReport> {
    let e = t.spectrum.energy;
    let h = t.matrix.h_value() as f64;
    let old = (nf(t) * h).sqrt();
    let mut out = vec![BoundReport::le("energy-bound-6", e, old)];
    if !t.tree.is_rooted_path() {
        let improved = ((nf(t) - 1.0) * h).sqrt();
        out.push(BoundReport::le("energy-bound-improved", e, improved));
        out.push(BoundReport::le("energy-bound-order", improved, old));
    }
    out.push(BoundReport::eq("energy-identity", e, 2.0 * t.rho(), 1e-8));
    out
}

/// `sqrt(sum Q^2 / sum L^2) >= sqrt(sum L^2 / n) >= 2 LI / n`.
pub fn check_bound_chain(t: &AnalyzedTree) -> Result<[BoundReport; 2]> {
    let denom = t.matrix.sum_row_sums_squared();
    if denom == 0 {
        return Err(Error::DegenerateDenominator("bound chain: all row sums vanish"));
    }
    let q = (QVector::new(t).sum_of_squares() / denom as f64).sqrt();
    let rowsq = (denom as f64 / nf(t)).sqrt();
    let li = 2.0 * t.matrix.level_index() as f64 / nf(t);
    Ok([
        BoundReport::ge("bound-chain-q-rowsq", q, rowsq),
        BoundReport::ge("bound-chain-rowsq-li", rowsq, li),
    ])
}

/// Every bound report that applies to the tree's order.
pub fn all_bounds(t: &AnalyzedTree) -> Vec<BoundReport> {
    let mut out = vec![
        check_prop1(t),
        check_trace_identity(t),
        check_rho_lower_meansq(t),
    ];
    out.extend(check_firstb(t));
    out.push(check_rho_lower_rowsq(t));
    if let Ok(r) = check_rho_lower_q(t) {
        out.push(r);
    }
    out.push(check_q_identity(t));
    if let Ok(r) = check_quotient_bound(t) {
        out.push(r);
    }
    out.push(check_lambda_sq_bound(t));
    if let Ok(rs) = check_lupas_intervals(t) {
        out.extend(rs);
    }
    out.extend(check_energy_bounds(t));
    if let Ok(rs) = check_bound_chain(t) {
        out.extend(rs);
    }
    out
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol` or cannot shrink further.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Spectral radius of the rooted path from `tanh(t/2) tanh(n t/2) = 1/n`,
/// `rho = 1 / (cosh t - 1)`.
pub fn path_rho_closed_form(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidOrder("path closed form needs n >= 2".into()));
    }
    let nf = n as f64;
    let g = |t: f64| (0.5 * t).tanh() * (0.5 * nf * t).tanh() - 1.0 / nf;
    let t = bisect(g, 1e-9, 50.0, 1e-14)?;
    // cosh t - 1 = 2 sinh^2(t/2), without the cancellation
    let s = (0.5 * t).sinh();
    Ok(1.0 / (2.0 * s * s))
}

/// The three real roots of `x^3 + (9 - 5n) x + (8 - 4n)`, descending.
pub fn leafstar_cubic_roots(n: usize) -> Result<[f64; 3]> {
    if n < 3 {
        return Err(Error::InvalidOrder("leaf-rooted star cubic needs n >= 3".into()));
    }
    let p = 9.0 - 5.0 * n as f64;
    let q = 8.0 - 4.0 * n as f64;
    let f = |x: f64| x * x * x + p * x + q;
    // turning points at +-c split the line into three monotone pieces
    let c = (-p / 3.0).sqrt();
    let bound = 1.0 + p.abs().max(q.abs());
    let tol = 1e-15;
    Ok([
        bisect(f, c, bound, tol)?,
        bisect(f, -c, c, tol)?,
        bisect(f, -bound, -c, tol)?,
    ])
}
