//! Per-sample inequality ratios and their summary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::norms::extended_f64;
use crate::rearrange::GridDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub id: String,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
    #[serde(with = "extended_f64")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub grid: GridDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    /// Human-readable acceptance rule, e.g. `ratio <= 1.01`.
    pub threshold: String,
    pub ratios: Vec<RatioRow>,
    #[serde(with = "extended_f64")]
    pub max_ratio: f64,
    #[serde(with = "extended_f64")]
    pub min_ratio: f64,
    pub argmax: Option<String>,
    pub verdict: Verdict,
    /// Relative drift of the extreme ratio on a sub-corpus at doubled resolution.
    #[serde(default, with = "opt_f64")]
    pub stability: Option<f64>,
    /// Samples dropped because the right-hand side was 0 or +∞.
    pub skipped: usize,
    #[serde(default, with = "opt_f64")]
    pub pinned: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl InequalityReport {
    /// Builds the summary fields from `ratios`; the verdict starts as pass.
    pub fn from_rows(name: &str, grid: GridDescriptor, threshold: String, ratios: Vec<RatioRow>, skipped: usize) -> Self {
        let mut max_ratio = f64::NEG_INFINITY;
        let mut min_ratio = f64::INFINITY;
        let mut argmax = None;
        for row in &ratios {
            if row.ratio > max_ratio || argmax.is_none() {
                max_ratio = row.ratio;
                argmax = Some(row.id.clone());
            }
            min_ratio = min_ratio.min(row.ratio);
        }
        Self {
            name: name.to_string(),
            grid,
            n_cells: None,
            threshold,
            ratios,
            max_ratio,
            min_ratio,
            argmax,
            verdict: Verdict::Pass,
            stability: None,
            skipped,
            pinned: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fail(&mut self, reason: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.notes.push(reason.into());
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Per-sample table with header `id,lhs,rhs,ratio`.
    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "lhs", "rhs", "ratio"])?;
        for r in &self.ratios {
            w.write_record([r.id.clone(), fmt_f64(r.lhs), fmt_f64(r.rhs), fmt_f64(r.ratio)])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Summary table over many reports, one row per report.
pub fn summary_csv(reports: &[InequalityReport]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name", "grid", "verdict", "max_ratio", "min_ratio", "argmax", "stability", "skipped", "pinned",
    ])?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.grid.to_string(),
            r.verdict.to_string(),
            fmt_f64(r.max_ratio),
            fmt_f64(r.min_ratio),
            r.argmax.clone().unwrap_or_default(),
            r.stability.map(fmt_f64).unwrap_or_default(),
            r.skipped.to_string(),
            r.pinned.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Shortest round-tripping decimal; infinities as `inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

mod opt_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::norms::extended_f64")] f64);

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(Wrap).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
