//! Per-tree analysis reports in text, JSON and CSV form.
//!
//! Floats are printed with 12 significant digits so output is stable across
//! platforms and eigensolver round-off.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::analysis::AnalyzedTree;
use crate::bounds::{all_bounds, BoundReport};
use crate::error::{Error, Result};
use crate::spectra::{characteristic_polynomial, exact_zero_multiplicity, CharPoly, Cluster};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest form of `x` rounded to 12 significant digits; scientific
/// notation outside `[1e-4, 1e15)`.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else if r.is_finite() && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Which bound reports an [`AnalysisReport`] carries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BoundSelection {
    #[default]
    All,
    None,
    /// Report names, or family prefixes such as `lupas` or `energy-bound`.
    Only(Vec<String>),
}

/// Names and family prefixes accepted by [`BoundSelection::parse`].
pub const BOUND_NAMES: &[&str] = &[
    "bound-chain",
    "energy-bound",
    "energy-bound-6",
    "energy-bound-improved",
    "energy-bound-order",
    "energy-identity",
    "firstb",
    "firstb-lower",
    "firstb-upper",
    "lambda-sq-bound",
    "lupas",
    "prop1",
    "q-identity",
    "q-lower",
    "quotient-lower",
    "rho-meansq-lower",
    "rowsq-lower",
    "trace-identity",
];

impl FromStr for BoundSelection {
    type Err = Error;

    /// `all`, `none`, or a comma-separated list of names.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => return Ok(BoundSelection::All),
            "none" => return Ok(BoundSelection::None),
            _ => {}
        }
        let mut names = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            if !BOUND_NAMES.contains(&name) {
                return Err(Error::UnknownCheck(name.to_string()));
            }
            names.push(name.to_string());
        }
        Ok(BoundSelection::Only(names))
    }
}

impl BoundSelection {
    fn keeps(&self, name: &str) -> bool {
        match self {
            BoundSelection::All => true,
            BoundSelection::None => false,
            BoundSelection::Only(names) => names.iter().any(|sel| {
                name == sel
                    || name
                        .strip_prefix(sel.as_str())
                        .is_some_and(|rest| rest.starts_with('[') || rest.starts_with('-'))
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub values: Vec<f64>,
    pub clusters: Vec<Cluster>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    /// One-based root vertex.
    pub root: usize,
    pub canonical: String,
    pub levels: Vec<usize>,
    pub l_max: usize,
    #[serde(rename = "LI")]
    pub level_index: i64,
    #[serde(rename = "H")]
    pub h: i64,
    pub row_sums: Vec<i64>,
    pub spectrum: SpectrumSummary,
    pub rho: f64,
    pub energy: f64,
    /// Nullity of the level matrix by exact integer rank.
    pub mul_zero_exact: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perron_vector: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charpoly: Option<CharPoly>,
    pub bounds: Vec<BoundReport>,
}

impl AnalysisReport {
    pub fn new(t: &AnalyzedTree, with_charpoly: bool, bounds: &BoundSelection) -> Result<Self> {
        let charpoly = if with_charpoly {
            Some(characteristic_polynomial(t.matrix.entries())?)
        } else {
            None
        };
        let bounds = if *bounds == BoundSelection::None {
            Vec::new()
        } else {
            all_bounds(t).into_iter().filter(|b| bounds.keeps(&b.name)).collect()
        };
        Ok(AnalysisReport {
            n: t.n(),
            root: t.tree.root() + 1,
            canonical: t.tree.canonical_encoding(),
            levels: t.matrix.levels().as_slice().to_vec(),
            l_max: t.max_level(),
            level_index: t.matrix.level_index(),
            h: t.matrix.h_value(),
            row_sums: t.matrix.row_sums().to_vec(),
            spectrum: SpectrumSummary {
                values: t.spectrum.values.clone(),
                clusters: t.spectrum.clusters.clone(),
            },
            rho: t.spectrum.rho,
            energy: t.spectrum.energy,
            mul_zero_exact: exact_zero_multiplicity(t.matrix.entries()),
            perron_vector: t.spectrum.perron().map(<[f64]>::to_vec),
            charpoly,
            bounds,
        })
    }

    pub fn violations(&self) -> usize {
        self.bounds.iter().filter(|b| !b.satisfied).count()
    }

    /// JSON value with every float rounded to 12 significant digits.
    pub fn to_json_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_json(&mut v);
        v
    }

    /// JSON with every float rounded to 12 significant digits.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |xs: &[f64]| xs.iter().map(|&x| fmt_sig(x)).collect::<Vec<_>>().join(", ");
        let ints = |xs: &[i64]| xs.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "vertices:        {}", self.n);
        let _ = writeln!(out, "root:            v{}", self.root);
        let _ = writeln!(out, "canonical:       {}", self.canonical);
        let levels: Vec<i64> = self.levels.iter().map(|&l| l as i64).collect();
        let _ = writeln!(out, "levels:          {}", ints(&levels));
        let _ = writeln!(out, "max level:       {}", self.l_max);
        let _ = writeln!(out, "row sums:        {}", ints(&self.row_sums));
        let _ = writeln!(out, "level index LI:  {}", self.level_index);
        let _ = writeln!(out, "H:               {}", self.h);
        let _ = writeln!(out, "eigenvalues:     {}", list(&self.spectrum.values));
        let _ = writeln!(out, "rho:             {}", fmt_sig(self.rho));
        let _ = writeln!(out, "energy:          {}", fmt_sig(self.energy));
        let _ = writeln!(out, "mul(0) exact:    {}", self.mul_zero_exact);
        if let Some(v) = &self.perron_vector {
            let _ = writeln!(out, "perron vector:   {}", list(v));
        }
        if let Some(p) = &self.charpoly {
            let _ = writeln!(out, "charpoly:        {}", p.to_display_string());
        }
        if !self.bounds.is_empty() {
            let _ = writeln!(out, "bounds:");
            for b in &self.bounds {
                let _ = writeln!(
                    out,
                    "  {:<24} {} {} {}  slack {}  {}",
                    b.name,
                    fmt_sig(b.lhs),
                    b.relation.symbol(),
                    match b.interval {
                        Some([lo, hi]) => format!("[{}, {}]", fmt_sig(lo), fmt_sig(hi)),
                        None => fmt_sig(b.rhs),
                    },
                    fmt_sig(b.slack),
                    if b.satisfied { "ok" } else { "VIOLATED" }
                );
            }
        }
        out
    }
}

/// One row per bound: `name,lhs,relation,rhs,slack,satisfied`.
pub fn bounds_csv(bounds: &[BoundReport]) -> String {
    let mut out = String::from("name,lhs,relation,rhs,slack,satisfied\n");
    for b in bounds {
        let rhs = match b.interval {
            Some([lo, hi]) => format!("\"[{}, {}]\"", fmt_sig(lo), fmt_sig(hi)),
            None => fmt_sig(b.rhs),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            b.name,
            fmt_sig(b.lhs),
            b.relation.symbol(),
            rhs,
            fmt_sig(b.slack),
            b.satisfied
        );
    }
    out
}

/// Rounds every float in a JSON value in place.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(r) = num.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *num = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}
