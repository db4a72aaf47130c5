//! Declarative inequality suites evaluated over seeded corpora.
//!
//! A suite is a list of cases, each a ratio `lhs / rhs` of expressions over
//! one function `f` or a pair `(f, g)`. Every (case, sample) pair yields one
//! row of an [`InequalityReport`]; samples whose `rhs` is 0 or +∞ are skipped
//! and counted.

mod corpus;
mod duality;
mod suites;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use corpus::{generate_corpus, CorpusItem, CorpusSpec, FamilyCounts, Source};
pub use duality::{conjugate, duality_check, extremal_candidates, DualityOutcome};
pub use suites::{builtin_suites, gl_equals_grand_lebesgue_for, suite_names, Frac};

use crate::error::{Error, Result};
use crate::norms::{envelope_lower_bound, envelope_upper_bound, grand_lorentz_norm, pairing, SpaceSpec};
use crate::operators::{convolve, riesz_apply, KernelSpec, UniformGrid};
use crate::rearrange::{decreasing_rearrangement, GeometricGrid, Rearrangement};
use crate::report::{InequalityReport, RatioRow};

/// Functions an expression may refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operand {
    F,
    G,
    /// `f ∗ g` restricted to `[0, 1]`.
    Conv,
    /// `I_{α,θ} f`.
    Riesz { alpha_bits: u64, theta_bits: u64 },
    /// `f* · g*`, the aligned product.
    Product,
}

impl Operand {
    pub fn riesz(k: KernelSpec) -> Self {
        Operand::Riesz { alpha_bits: k.alpha.to_bits(), theta_bits: k.theta.to_bits() }
    }

    fn needs_g(&self) -> bool {
        matches!(self, Operand::G | Operand::Conv | Operand::Product)
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::F => f.write_str("f"),
            Operand::G => f.write_str("g"),
            Operand::Conv => f.write_str("f*g"),
            Operand::Product => f.write_str("f.g"),
            Operand::Riesz { alpha_bits, theta_bits } => write!(
                f,
                "I[{},{}]f",
                f64::from_bits(*alpha_bits),
                f64::from_bits(*theta_bits)
            ),
        }
    }
}

/// A scalar functional of one operand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    Norm(SpaceSpec),
    /// Integral with the closed-form sup-envelope, bounding `GL^θ_{p,τ}` above.
    EnvelopeUpper { p: f64, tau: f64, theta: f64 },
    /// Integral with the inf-envelope, bounding `GL^{-θ}_{p,τ}` below.
    EnvelopeLower { p: f64, tau: f64, theta: f64 },
    /// Duality lower bound `max_g P(f, g) / ‖g‖_{GL^{-θ}_{p',q'}}`.
    DualLower { p: f64, q: f64, theta: f64 },
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Norm(s) => write!(f, "{s}"),
            Functional::EnvelopeUpper { p, tau, theta } => write!(f, "env+:p={p},tau={tau},theta={theta}"),
            Functional::EnvelopeLower { p, tau, theta } => write!(f, "env-:p={p},tau={tau},theta={theta}"),
            Functional::DualLower { p, q, theta } => write!(f, "dual:p={p},q={q},theta={theta}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Apply(Functional, Operand),
    /// `∫₀¹ f* g* dt`.
    Pairing,
    Const(f64),
    Mul(Vec<Expr>),
}

impl Expr {
    fn mentions(&self, pred: &impl Fn(Operand) -> bool) -> bool {
        match self {
            Expr::Apply(_, o) => pred(*o),
            Expr::Pairing | Expr::Const(_) => false,
            Expr::Mul(v) => v.iter().any(|e| e.mentions(pred)),
        }
    }

    pub fn norm(spec: SpaceSpec, of: Operand) -> Self {
        Expr::Apply(Functional::Norm(spec), of)
    }

    pub fn times(self, other: Expr) -> Self {
        match self {
            Expr::Mul(mut v) => {
                v.push(other);
                Expr::Mul(v)
            }
            e => Expr::Mul(vec![e, other]),
        }
    }

    fn needs_g(&self) -> bool {
        match self {
            Expr::Apply(_, o) => o.needs_g(),
            Expr::Pairing => true,
            Expr::Const(_) => false,
            Expr::Mul(v) => v.iter().any(Expr::needs_g),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Apply(func, o) => write!(f, "|{o}|[{func}]"),
            Expr::Pairing => f.write_str("<f*,g*>"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Mul(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// One parameter tuple of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub label: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Admissible ratio range for [`ThresholdMode::Bracket`].
    pub bracket: Option<(f64, f64)>,
}

impl Case {
    pub fn new(label: impl Into<String>, lhs: Expr, rhs: Expr) -> Self {
        Self { label: label.into(), lhs, rhs, bracket: None }
    }

    pub fn bracketed(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = Some((lo, hi));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdMode {
    /// Every ratio `≤ 1 + slack`.
    ExactWithSlack(f64),
    /// Finite, refinement-stable within 10%, and within 10% of the pinned
    /// fixture value when one exists.
    RecordedConstant,
    FiniteAndStable,
    /// Every ratio inside its case bracket widened by `slack` on each side.
    Bracket { slack: f64 },
}

pub const RECORDED_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Roles {
    F,
    FG,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySpec {
    pub name: String,
    pub description: String,
    pub roles: Roles,
    pub threshold: ThresholdMode,
    pub cases: Vec<Case>,
    /// Maximum relative drift under grid doubling; `None` reports drift
    /// without gating on it.
    pub stability_tol: Option<f64>,
}

impl InequalitySpec {
    /// True when some case applies convolution or a Riesz operator.
    pub fn uses_operator(&self) -> bool {
        let op = |o: Operand| matches!(o, Operand::Conv | Operand::Riesz { .. });
        self.cases.iter().any(|c| c.lhs.mentions(&op) || c.rhs.mentions(&op))
    }

    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(Error::InvalidSpec(format!("suite {} has no cases", self.name)));
        }
        if self.roles == Roles::F {
            if let Some(c) = self.cases.iter().find(|c| c.lhs.needs_g() || c.rhs.needs_g()) {
                return Err(Error::InvalidSpec(format!(
                    "suite {} case {} refers to g but declares only f",
                    self.name, c.label
                )));
            }
        }
        Ok(())
    }
}

/// Pinned regression constants keyed by `suite@<grid>n<cells><corpus key>`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Fixtures(pub BTreeMap<String, f64>);

const BUILTIN_FIXTURES: &str = include_str!("../../fixtures/regression.json");

impl Fixtures {
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN_FIXTURES).expect("bundled fixtures are valid JSON")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map of floats serializes")
    }

    pub fn key(suite: &str, grid: GeometricGrid, uniform: UniformGrid, corpus: &CorpusSpec) -> String {
        format!("{suite}@{}n{}{}", grid.descriptor(), uniform.n_cells(), corpus.key())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub grid: GeometricGrid,
    pub uniform: UniformGrid,
    /// Compute drift on a sub-corpus at doubled resolution.
    pub stability: bool,
    pub fixtures: Fixtures,
    /// Corpus identity for fixture lookup; `None` disables pinning.
    pub corpus: Option<CorpusSpec>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            grid: GeometricGrid::default(),
            uniform: UniformGrid::default(),
            stability: true,
            fixtures: Fixtures::builtin(),
            corpus: Some(CorpusSpec::default()),
        }
    }
}

/// Size of the sub-corpus re-evaluated at doubled resolution.
pub const STABILITY_SAMPLES: usize = 10;

/// Number of corpus members offered as extra duality candidates.
const DUALITY_CORPUS_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Sample {
    case: usize,
    f: usize,
    g: Option<usize>,
}

/// Partner of item `i` in pair suites; deterministic, never `i` itself when
/// the corpus has more than one member.
pub fn partner(i: usize, n: usize) -> usize {
    if n <= 1 {
        return i;
    }
    let j = (7 * i + 3) % n;
    if j == i {
        (i + 1) % n
    } else {
        j
    }
}

/// Evaluation state for one resolution.
struct Evaluator<'a> {
    corpus: &'a [CorpusItem],
    grid: GeometricGrid,
    uniform: UniformGrid,
    /// `f` and `g` are read through their uniform step representatives, the
    /// functions the operators actually act on.
    discrete: bool,
    rearranged: HashMap<usize, Rearrangement>,
    derived: HashMap<(Operand, usize, Option<usize>), Rearrangement>,
    candidates: Option<Vec<Rearrangement>>,
}

impl<'a> Evaluator<'a> {
    fn new(corpus: &'a [CorpusItem], grid: GeometricGrid, uniform: UniformGrid, discrete: bool) -> Self {
        Self {
            corpus,
            grid,
            uniform,
            discrete,
            rearranged: HashMap::new(),
            derived: HashMap::new(),
            candidates: None,
        }
    }

    fn item(&mut self, i: usize) -> Result<Rearrangement> {
        if let Some(r) = self.rearranged.get(&i) {
            return Ok(r.clone());
        }
        let item = &self.corpus[i];
        let r = match &item.source {
            Source::Analytic(_) if self.discrete => {
                decreasing_rearrangement(&item.step_function(self.grid, self.uniform.n_cells())?, self.grid)
            }
            _ => item.rearrangement(self.grid)?,
        };
        self.rearranged.insert(i, r.clone());
        Ok(r)
    }

    fn operand(&mut self, o: Operand, s: Sample) -> Result<Rearrangement> {
        let g_idx = || s.g.ok_or_else(|| Error::InvalidSpec(format!("operand {o} needs g")));
        match o {
            Operand::F => self.item(s.f),
            Operand::G => self.item(g_idx()?),
            _ => {
                let key = (o, s.f, if o == Operand::Product || o == Operand::Conv { s.g } else { None });
                if let Some(r) = self.derived.get(&key) {
                    return Ok(r.clone());
                }
                let n = self.uniform.n_cells();
                let r = match o {
                    Operand::Product => self.item(s.f)?.product(&self.item(g_idx()?)?)?,
                    Operand::Conv => {
                        let f = self.corpus[s.f].step_function(self.grid, n)?;
                        let g = self.corpus[g_idx()?].step_function(self.grid, n)?;
                        let c = convolve(&f, &g, self.uniform).to_step_function()?;
                        decreasing_rearrangement(&c, self.grid)
                    }
                    Operand::Riesz { alpha_bits, theta_bits } => {
                        let k = KernelSpec::new(f64::from_bits(alpha_bits), f64::from_bits(theta_bits))?;
                        let f = self.corpus[s.f].step_function(self.grid, n)?;
                        let out = riesz_apply(&f, k, self.uniform).to_step_function()?;
                        decreasing_rearrangement(&out, self.grid)
                    }
                    Operand::F | Operand::G => unreachable!(),
                };
                self.derived.insert(key, r.clone());
                Ok(r)
            }
        }
    }

    fn corpus_candidates(&mut self) -> Result<Vec<Rearrangement>> {
        if let Some(c) = &self.candidates {
            return Ok(c.clone());
        }
        let picks: Vec<usize> = (0..self.corpus.len()).take(DUALITY_CORPUS_CANDIDATES).collect();
        let c = picks.into_iter().map(|i| self.item(i)).collect::<Result<Vec<_>>>()?;
        self.candidates = Some(c.clone());
        Ok(c)
    }

    fn functional(&mut self, func: Functional, r: &Rearrangement) -> Result<f64> {
        Ok(match func {
            Functional::Norm(spec) => spec.evaluate(r)?.value,
            Functional::EnvelopeUpper { p, tau, theta } => envelope_upper_bound(r, p, tau, theta)?.value,
            Functional::EnvelopeLower { p, tau, theta } => envelope_lower_bound(r, p, tau, theta)?.value,
            Functional::DualLower { p, q, theta } => {
                let shifts: Vec<f64> = grand_lorentz_norm(r, p, q, theta)?.eps_star.into_iter().collect();
                let mut cands = extremal_candidates(r, p, q, theta, &shifts);
                cands.extend(self.corpus_candidates()?);
                duality_check(r, p, q, theta, &cands)?.lower
            }
        })
    }

    fn eval(&mut self, e: &Expr, s: Sample) -> Result<f64> {
        match e {
            Expr::Apply(func, o) => {
                let r = self.operand(*o, s)?;
                self.functional(*func, &r)
            }
            Expr::Pairing => {
                let f = self.operand(Operand::F, s)?;
                let g = self.operand(Operand::G, s)?;
                pairing(&f, &g)
            }
            Expr::Const(c) => Ok(*c),
            Expr::Mul(v) => {
                let mut acc = 1.0;
                for x in v {
                    acc *= self.eval(x, s)?;
                }
                Ok(acc)
            }
        }
    }

    fn ratio(&mut self, spec: &InequalitySpec, s: Sample) -> Result<Outcome> {
        let case = &spec.cases[s.case];
        let rhs = self.eval(&case.rhs, s)?;
        if rhs == 0.0 || !rhs.is_finite() {
            return Ok(Outcome::Skipped);
        }
        let lhs = self.eval(&case.lhs, s)?;
        if lhs.is_infinite() {
            return Ok(Outcome::Unresolved);
        }
        Ok(Outcome::Row(RatioRow { id: sample_id(spec, self.corpus, s), lhs, rhs, ratio: lhs / rhs }))
    }
}

/// Result of one (case, sample) evaluation.
enum Outcome {
    Row(RatioRow),
    /// `rhs` is 0 or +∞.
    Skipped,
    /// `lhs` is +∞ while `rhs` is finite. Every +∞ here comes from a tail
    /// the grid could not certify, so the sample is counted as skipped and
    /// reported in the notes rather than as a violation.
    Unresolved,
}

fn sample_id(spec: &InequalitySpec, corpus: &[CorpusItem], s: Sample) -> String {
    let case = &spec.cases[s.case].label;
    match s.g {
        Some(g) => format!("{case}|{}|{}", corpus[s.f].id, corpus[g].id),
        None => format!("{case}|{}", corpus[s.f].id),
    }
}

fn samples(spec: &InequalitySpec, n: usize) -> Vec<Sample> {
    let mut out = Vec::with_capacity(spec.cases.len() * n);
    for case in 0..spec.cases.len() {
        for f in 0..n {
            let g = (spec.roles == Roles::FG).then(|| partner(f, n));
            out.push(Sample { case, f, g });
        }
    }
    out
}

/// Evaluates every (case, sample) ratio and applies the suite's threshold.
pub fn run_inequality(spec: &InequalitySpec, corpus: &[CorpusItem], opts: &RunOptions) -> Result<InequalityReport> {
    spec.validate()?;
    let all = samples(spec, corpus.len());
    let mut eval = Evaluator::new(corpus, opts.grid, opts.uniform, spec.uses_operator());
    let mut rows = Vec::new();
    let mut kept = Vec::new();
    let mut skipped = 0;
    let mut unresolved = 0;
    for s in &all {
        match eval.ratio(spec, *s)? {
            Outcome::Row(row) => {
                rows.push(row);
                kept.push(*s);
            }
            Outcome::Skipped => skipped += 1,
            Outcome::Unresolved => unresolved += 1,
        }
    }
    skipped += unresolved;
    if rows.is_empty() {
        return Err(Error::EmptyEffectiveCorpus { skipped });
    }
    let mut report = InequalityReport::from_rows(&spec.name, opts.grid.descriptor(), threshold_text(spec), rows, skipped);
    report.n_cells = Some(opts.uniform.n_cells());
    if unresolved > 0 {
        report.notes.push(format!("{unresolved} samples skipped with unresolved (+inf) lhs and finite rhs"));
    }

    if opts.stability {
        report.stability = Some(stability(spec, corpus, opts, &report, &kept)?);
    }
    if spec.threshold == ThresholdMode::RecordedConstant {
        if let Some(c) = &opts.corpus {
            report.pinned = opts.fixtures.0.get(&Fixtures::key(&spec.name, opts.grid, opts.uniform, c)).copied();
        }
    }
    judge(spec, &mut report);
    Ok(report)
}

fn threshold_text(spec: &InequalitySpec) -> String {
    match spec.threshold {
        ThresholdMode::ExactWithSlack(s) => format!("ratio <= 1 + {s}"),
        ThresholdMode::RecordedConstant => format!(
            "max ratio finite, within {RECORDED_TOLERANCE} of pinned value and stable under refinement"
        ),
        ThresholdMode::FiniteAndStable => "max ratio finite and stable under refinement".into(),
        ThresholdMode::Bracket { slack } => format!("ratio inside case bracket widened by {slack}"),
    }
}

/// Re-evaluates the five largest and five smallest ratios with `J` and
/// `n_cells` doubled. Returns the relative drift of the maximum ratio, or of
/// whichever extreme drifts more for bracket suites.
fn stability(
    spec: &InequalitySpec,
    corpus: &[CorpusItem],
    opts: &RunOptions,
    report: &InequalityReport,
    kept: &[Sample],
) -> Result<f64> {
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| report.ratios[b].ratio.total_cmp(&report.ratios[a].ratio).then(a.cmp(&b)));
    let half = STABILITY_SAMPLES / 2;
    let mut pick: Vec<usize> = order.iter().take(half).copied().collect();
    for &i in order.iter().rev().take(half) {
        if !pick.contains(&i) {
            pick.push(i);
        }
    }
    let fine = opts.grid.refined(2)?;
    let mut eval = Evaluator::new(corpus, fine, opts.uniform.refined(), spec.uses_operator());
    let (mut base_max, mut base_min) = (f64::NEG_INFINITY, f64::INFINITY);
    let (mut fine_max, mut fine_min) = (f64::NEG_INFINITY, f64::INFINITY);
    for &i in &pick {
        let r = report.ratios[i].ratio;
        base_max = base_max.max(r);
        base_min = base_min.min(r);
        match eval.ratio(spec, kept[i])? {
            Outcome::Row(row) => {
                fine_max = fine_max.max(row.ratio);
                fine_min = fine_min.min(row.ratio);
            }
            Outcome::Skipped | Outcome::Unresolved => return Ok(f64::INFINITY),
        }
    }
    let top = drift(base_max, fine_max);
    Ok(match spec.threshold {
        ThresholdMode::Bracket { .. } => top.max(drift(base_min, fine_min)),
        _ => top,
    })
}

fn drift(base: f64, fine: f64) -> f64 {
    if base == fine {
        0.0
    } else if base == 0.0 || !base.is_finite() || !fine.is_finite() {
        f64::INFINITY
    } else {
        (fine / base - 1.0).abs()
    }
}

fn judge(spec: &InequalitySpec, report: &mut InequalityReport) {
    if let (Some(tol), Some(d)) = (spec.stability_tol, report.stability) {
        if !(d <= tol) {
            report.fail(format!("refinement drift {d:.4} exceeds {tol}"));
        }
    }
    match spec.threshold {
        ThresholdMode::ExactWithSlack(slack) => {
            if !(report.max_ratio <= 1.0 + slack) {
                report.fail(format!("max ratio {} exceeds 1 + {slack}", report.max_ratio));
            }
        }
        ThresholdMode::RecordedConstant | ThresholdMode::FiniteAndStable => {
            if !report.max_ratio.is_finite() {
                report.fail("max ratio is not finite");
            }
            if let Some(d) = report.stability {
                if !(d <= RECORDED_TOLERANCE) {
                    report.fail(format!("refinement drift {d:.4} exceeds {RECORDED_TOLERANCE}"));
                }
            }
            match report.pinned {
                Some(pin) if !(drift(pin, report.max_ratio) <= RECORDED_TOLERANCE) => {
                    let msg = format!("max ratio {} deviates from pinned {pin}", report.max_ratio);
                    report.fail(msg);
                }
                None if spec.threshold == ThresholdMode::RecordedConstant => {
                    report.notes.push("no pinned value for this configuration".into());
                }
                _ => {}
            }
        }
        ThresholdMode::Bracket { slack } => {
            let mut bad = Vec::new();
            for (row, case) in report.ratios.iter().zip(row_cases(spec, report)) {
                let (lo, hi) = case.bracket.unwrap_or((0.0, f64::INFINITY));
                if !(row.ratio >= lo * (1.0 - slack) && row.ratio <= hi * (1.0 + slack)) {
                    bad.push(row.id.clone());
                }
            }
            if !bad.is_empty() {
                let shown: Vec<_> = bad.iter().take(5).cloned().collect();
                report.fail(format!("{} ratios outside bracket, e.g. {}", bad.len(), shown.join(", ")));
            }
        }
    }
}

/// Case of each row, recovered from the label prefix of its id.
fn row_cases<'s>(spec: &'s InequalitySpec, report: &InequalityReport) -> Vec<&'s Case> {
    let by_label: HashMap<&str, &Case> = spec.cases.iter().map(|c| (c.label.as_str(), c)).collect();
    report
        .ratios
        .iter()
        .map(|r| {
            let label = r.id.split('|').next().unwrap_or_default();
            by_label[label]
        })
        .collect()
}

/// Looks up builtin suites by name; `all` selects every suite.
pub fn select_suites(names: &[String]) -> Result<Vec<InequalitySpec>> {
    let suites = builtin_suites();
    if names.iter().any(|n| n == "all") {
        return Ok(suites);
    }
    names
        .iter()
        .map(|n| {
            suites
                .iter()
                .find(|s| &s.name == n)
                .cloned()
                .ok_or_else(|| Error::UnknownSuite(n.clone()))
        })
        .collect()
}
