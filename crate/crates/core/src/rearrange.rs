//! Step functions on `[0, 1]`, geometric grids on `(0, 1)`, and decreasing
//! rearrangements sampled on those grids.
//!
//! A rearrangement `f*` is stored as one sample per geometric cell. Cell `i`
//! spans `[2^{-(i+1)/J}, 2^{-i/J})` and is represented by its geometric
//! midpoint `2^{-(i+1/2)/J}`, so both endpoint singularities (`t = 0` for
//! `f*`, `t = 1` for logarithmic weights) stay off the evaluation points.
//! Index order is decreasing `t`, which makes samples non-decreasing in index.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple non-negative function on `[0, 1]`: `values[i]` on
/// `[breakpoints[i], breakpoints[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidStepFunction(
                "need at least two breakpoints".into(),
            ));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidStepFunction(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidStepFunction(format!(
                "value {v} is negative or not finite"
            )));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![c])
    }

    pub fn zero() -> Self {
        Self {
            breakpoints: vec![0.0, 1.0],
            values: vec![0.0],
        }
    }

    /// `height` on `[a, b]`, zero elsewhere.
    pub fn indicator(a: f64, b: f64, height: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidStepFunction(format!(
                "indicator interval [{a}, {b}] is not inside [0, 1]"
            )));
        }
        let mut bp = vec![0.0];
        let mut vals = Vec::new();
        if a > 0.0 {
            bp.push(a);
            vals.push(0.0);
        }
        bp.push(b);
        vals.push(height);
        if b < 1.0 {
            bp.push(1.0);
            vals.push(0.0);
        }
        Self::new(bp, vals)
    }

    /// Piecewise constant on `n` equal cells.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidStepFunction("no cells".into()));
        }
        let mut bp: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        bp.push(1.0);
        Self::new(bp, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(left, right, value)` per cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    /// Right-continuous evaluation; `value_at(1.0)` is the last cell's value.
    pub fn value_at(&self, x: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        let cell = idx.saturating_sub(1).min(self.values.len() - 1);
        self.values[cell]
    }

    /// Measure of `{f > lambda}`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        self.cells()
            .filter(|&(_, _, v)| v > lambda)
            .map(|(a, b, _)| b - a)
            .sum()
    }

    /// `∑ value^p · length`, i.e. `‖f‖_p^p`.
    pub fn power_sum(&self, p: f64) -> f64 {
        self.cells().map(|(a, b, v)| v.powf(p) * (b - a)).sum()
    }

    pub fn integral(&self) -> f64 {
        self.power_sum(1.0)
    }

    /// `∫_a^b f` for `0 ≤ a ≤ b ≤ 1`.
    pub fn integral_over(&self, a: f64, b: f64) -> f64 {
        self.cells()
            .map(|(l, r, v)| {
                let lo = l.max(a);
                let hi = r.min(b);
                if hi > lo {
                    v * (hi - lo)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// The non-increasing step function equimeasurable with `self`: cells
    /// sorted by value (descending) and packed from the left, equal values
    /// merged.
    pub fn rearranged(&self) -> StepFunction {
        let mut cells: Vec<(f64, f64)> = self.cells().map(|(a, b, v)| (v, b - a)).collect();
        cells.sort_by(|x, y| y.0.total_cmp(&x.0));

        let mut bp = vec![0.0];
        let mut vals: Vec<f64> = Vec::new();
        let mut acc = 0.0;
        for (v, len) in cells {
            acc += len;
            match vals.last() {
                Some(&last) if last == v => *bp.last_mut().unwrap() = acc,
                _ => {
                    if acc > *bp.last().unwrap() {
                        bp.push(acc);
                        vals.push(v);
                    }
                }
            }
        }
        *bp.last_mut().unwrap() = 1.0;
        // Rounding in the running sum can make the final cell vanish.
        while bp.len() > 2 && bp[bp.len() - 2] >= 1.0 {
            bp.remove(bp.len() - 2);
            vals.pop();
        }
        StepFunction {
            breakpoints: bp,
            values: vals,
        }
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Cell averages over `n` equal cells.
    pub fn resample_uniform(&self, n: usize) -> Vec<f64> {
        let h = 1.0 / n as f64;
        let mut out = vec![0.0; n];
        for (a, b, v) in self.cells() {
            if v == 0.0 {
                continue;
            }
            let first = ((a / h).floor() as usize).min(n - 1);
            let last = ((b / h).ceil() as usize).min(n);
            for (j, slot) in out.iter_mut().enumerate().take(last).skip(first) {
                let lo = a.max(j as f64 * h);
                let hi = b.min((j + 1) as f64 * h);
                if hi > lo {
                    *slot += v * (hi - lo);
                }
            }
        }
        out.iter_mut().for_each(|x| *x /= h);
        out
    }
}

/// `{M, J}` as it appears in serialized output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDescriptor {
    #[serde(rename = "M")]
    pub octaves: u32,
    #[serde(rename = "J")]
    pub subdivisions: u32,
}

impl std::fmt::Display for GridDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "M{}J{}", self.octaves, self.subdivisions)
    }
}

/// Nodes `t_k = 2^{-k/J}`, `k = 1 … M·J`; `M` octaves down to `2^{-M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeometricGrid {
    octaves: u32,
    subdivisions: u32,
}

impl Default for GeometricGrid {
    fn default() -> Self {
        Self {
            octaves: Self::DEFAULT_OCTAVES,
            subdivisions: Self::DEFAULT_SUBDIVISIONS,
        }
    }
}

impl GeometricGrid {
    pub const DEFAULT_OCTAVES: u32 = 40;
    pub const DEFAULT_SUBDIVISIONS: u32 = 16;
    const MAX_CELLS: u64 = 1 << 22;

    /// At least two octaves are required so the tail check has an octave to
    /// compare against.
    pub fn new(octaves: u32, subdivisions: u32) -> Result<Self> {
        if octaves < 2 || subdivisions == 0 {
            return Err(Error::InvalidGrid(format!(
                "need M >= 2 and J >= 1, got M = {octaves}, J = {subdivisions}"
            )));
        }
        if octaves > 1000 || u64::from(octaves) * u64::from(subdivisions) > Self::MAX_CELLS {
            return Err(Error::InvalidGrid(format!(
                "grid M = {octaves}, J = {subdivisions} is too large"
            )));
        }
        Ok(Self {
            octaves,
            subdivisions,
        })
    }

    pub fn octaves(&self) -> u32 {
        self.octaves
    }

    pub fn subdivisions(&self) -> u32 {
        self.subdivisions
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            octaves: self.octaves,
            subdivisions: self.subdivisions,
        }
    }

    /// Number of cells, which equals the number of nodes.
    pub fn len(&self) -> usize {
        (self.octaves * self.subdivisions) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell width in `u = -ln t`.
    pub fn log_step(&self) -> f64 {
        LN_2 / f64::from(self.subdivisions)
    }

    /// `2^{-k/J}`; `node(0) = 1` is the upper boundary of cell 0.
    pub fn node(&self, k: usize) -> f64 {
        (-(k as f64) / f64::from(self.subdivisions)).exp2()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.len()).map(|k| self.node(k)).collect()
    }

    pub fn t_min(&self) -> f64 {
        (-f64::from(self.octaves)).exp2()
    }

    /// Geometric midpoint of cell `i`.
    pub fn rep(&self, i: usize) -> f64 {
        (-(i as f64 + 0.5) / f64::from(self.subdivisions)).exp2()
    }

    /// `-ln` of the representative of cell `i`.
    pub fn log_rep(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.log_step()
    }

    pub fn reps(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.rep(i)).collect()
    }

    /// Lebesgue measure of cell `i`.
    pub fn cell_measure(&self, i: usize) -> f64 {
        self.node(i) - self.node(i + 1)
    }

    /// Cell containing `t`, with cells closed on the left. `None` below
    /// `t_min`; values `≥ 1` map to cell 0.
    pub fn cell_index(&self, t: f64) -> Option<usize> {
        if t >= 1.0 {
            return Some(0);
        }
        if !(t >= self.t_min()) {
            return None;
        }
        let j = f64::from(self.subdivisions);
        let mut i = ((-t.log2()) * j).floor().max(0.0) as usize;
        i = i.min(self.len() - 1);
        // Correct for rounding in log2 near nodes.
        while i > 0 && t >= self.node(i) {
            i -= 1;
        }
        while i + 1 < self.len() && t < self.node(i + 1) {
            i += 1;
        }
        Some(i)
    }

    /// Same depth, `factor` times as many subdivisions.
    pub fn refined(&self, factor: u32) -> Result<Self> {
        Self::new(self.octaves, self.subdivisions * factor)
    }
}

/// Analytic tag attached to a rearrangement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    /// `t^{-1/p} |ln t|^beta`; `p = ∞` drops the power factor.
    PowerLog { p: f64, beta: f64 },
    /// `χ_{(0, s)}`.
    Indicator { s: f64 },
    Constant { c: f64 },
    Numeric,
}

impl Descriptor {
    /// Pointwise value of the analytic family; `None` for `Numeric`.
    pub fn eval(&self, t: f64) -> Option<f64> {
        match *self {
            Descriptor::PowerLog { p, beta } => {
                let power = if p.is_infinite() { 1.0 } else { t.powf(-1.0 / p) };
                let log = if beta == 0.0 { 1.0 } else { (-t.ln()).powf(beta) };
                Some(power * log)
            }
            Descriptor::Indicator { s } => Some(if t < s { 1.0 } else { 0.0 }),
            Descriptor::Constant { c } => Some(c),
            Descriptor::Numeric => None,
        }
    }
}

/// A non-increasing function on `(0, 1)` sampled on a geometric grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    grid: GeometricGrid,
    samples: Vec<f64>,
    descriptor: Descriptor,
}

/// Density of the auxiliary sampling used by numeric rearrangement.
pub const NUMERIC_OVERSAMPLING: u32 = 16;

impl Rearrangement {
    pub fn from_samples(
        grid: GeometricGrid,
        samples: Vec<f64>,
        descriptor: Descriptor,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidRearrangement(format!(
                "{} samples for a grid of {} cells",
                samples.len(),
                grid.len()
            )));
        }
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::NonFiniteSample { index, value });
        }
        if let Some(i) = samples.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidRearrangement(format!(
                "samples increase with t between cells {i} and {}",
                i + 1
            )));
        }
        Ok(Self {
            grid,
            samples,
            descriptor,
        })
    }

    pub fn zero(grid: GeometricGrid) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.len()],
            descriptor: Descriptor::Constant { c: 0.0 },
        }
    }

    pub fn grid(&self) -> GeometricGrid {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn descriptor(&self) -> Descriptor {
        self.descriptor
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&v| v == 0.0)
    }

    /// Lookup by cell; below `t_min` the deepest sample is returned.
    pub fn value_at(&self, t: f64) -> f64 {
        match self.grid.cell_index(t) {
            Some(i) => self.samples[i],
            None => *self.samples.last().unwrap(),
        }
    }

    /// `c · f*`, keeping the analytic tag only where it stays exact.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale {c}")));
        }
        let descriptor = match self.descriptor {
            Descriptor::Constant { c: k } => Descriptor::Constant { c: k * c },
            _ if c == 1.0 => self.descriptor,
            _ => Descriptor::Numeric,
        };
        Self::from_samples(
            self.grid,
            self.samples.iter().map(|v| v * c).collect(),
            descriptor,
        )
    }

    /// Pointwise product of two rearrangements on the same grid, which is
    /// again non-increasing.
    pub fn product(&self, other: &Rearrangement) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("product of rearrangements on different grids".into()));
        }
        Self::from_samples(
            self.grid,
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .collect(),
            Descriptor::Numeric,
        )
    }

    /// Cell averages of `f*` (viewed as a function on `[0, 1]`) over `n`
    /// equal cells, treating each geometric cell as constant.
    pub fn to_uniform_step(&self, n: usize) -> Result<StepFunction> {
        if n == 0 {
            return Err(Error::InvalidParameter("n = 0 uniform cells".into()));
        }
        let g = self.grid;
        let len = g.len();
        // below[i] = ∫_0^{node(i+1)} f*, deepest cell extended down to 0.
        let mut below = vec![0.0; len];
        let mut acc = self.samples[len - 1] * g.t_min();
        for i in (0..len).rev() {
            below[i] = acc;
            acc += self.samples[i] * g.cell_measure(i);
        }
        let cumulative = |t: f64| -> f64 {
            if t <= 0.0 {
                return 0.0;
            }
            match g.cell_index(t) {
                Some(i) => below[i] + self.samples[i] * (t - g.node(i + 1)),
                None => self.samples[len - 1] * t,
            }
        };
        let h = 1.0 / n as f64;
        let mut values: Vec<f64> = (0..n)
            .map(|j| (cumulative((j + 1) as f64 * h) - cumulative(j as f64 * h)) / h)
            .map(|v: f64| v.max(0.0))
            .collect();
        // Keep the result non-increasing despite rounding.
        for j in 1..n {
            if values[j] > values[j - 1] {
                values[j] = values[j - 1];
            }
        }
        StepFunction::uniform(values)
    }
}

/// Decreasing rearrangement of a step function, sampled at the grid's cell
/// representatives. Right-continuous at jumps.
pub fn decreasing_rearrangement(f: &StepFunction, grid: GeometricGrid) -> Rearrangement {
    let r = f.rearranged();
    let samples = grid.reps().iter().map(|&t| r.value_at(t)).collect();
    Rearrangement {
        grid,
        samples,
        descriptor: Descriptor::Numeric,
    }
}

/// Samples an analytic family on the grid. `PowerLog` with `beta < 0` is not
/// monotone near `t = 1` and goes through [`numeric_rearrangement`].
pub fn analytic_rearrangement(descriptor: Descriptor, grid: GeometricGrid) -> Result<Rearrangement> {
    match descriptor {
        Descriptor::PowerLog { p, beta } => {
            if !(p > 0.0) || !beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "power-log family needs p > 0 and finite beta, got p = {p}, beta = {beta}"
                )));
            }
            if beta < 0.0 {
                let fine = grid.refined(NUMERIC_OVERSAMPLING)?;
                let values = sample_checked(&fine, |t| descriptor.eval(t).unwrap())?;
                let samples = numeric_rearrangement(&fine, &values, grid);
                return Rearrangement::from_samples(grid, samples, descriptor);
            }
        }
        Descriptor::Indicator { s } => {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "indicator measure {s} is not in (0, 1]"
                )));
            }
        }
        Descriptor::Constant { c } => {
            if !(c >= 0.0) {
                return Err(Error::InvalidParameter(format!("constant {c} is negative")));
            }
        }
        Descriptor::Numeric => {
            return Err(Error::InvalidParameter(
                "a numeric descriptor has no analytic form".into(),
            ))
        }
    }
    let samples = sample_checked(&grid, |t| descriptor.eval(t).unwrap())?;
    Rearrangement::from_samples(grid, samples, descriptor)
}

fn sample_checked(grid: &GeometricGrid, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    grid.reps()
        .into_iter()
        .enumerate()
        .map(|(index, t)| {
            let value = f(t);
            if value.is_finite() && value >= 0.0 {
                Ok(value)
            } else {
                Err(Error::NonFiniteSample { index, value })
            }
        })
        .collect()
}

/// Rearranges arbitrary non-negative cell values given on `source` and
/// resamples the result at the representatives of `target`.
///
/// Cells are sorted by value and packed from the left by their Lebesgue
/// measure; the unresolved interval `(0, t_min)` of the source grid is
/// treated as carrying the largest values.
pub fn numeric_rearrangement(
    source: &GeometricGrid,
    values: &[f64],
    target: GeometricGrid,
) -> Vec<f64> {
    let mut cells: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, source.cell_measure(i)))
        .collect();
    cells.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

    let mut ends = Vec::with_capacity(cells.len());
    let mut acc = source.t_min();
    for &(_, m) in &cells {
        acc += m;
        ends.push(acc);
    }
    let mut out: Vec<f64> = target
        .reps()
        .iter()
        .map(|&t| {
            let k = ends.partition_point(|&e| e <= t).min(cells.len() - 1);
            cells[k].0
        })
        .collect();
    for i in 1..out.len() {
        if out[i] < out[i - 1] {
            out[i] = out[i - 1];
        }
    }
    out
}

/// Decreasing rearrangement of `x ↦ x^{α-1} |ln x|^θ` on `(0, 1)`.
pub fn riesz_kernel_rearrangement(alpha: f64, theta: f64, grid: GeometricGrid) -> Result<Rearrangement> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} is not in (0, 1)")));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::InvalidParameter(format!("theta = {theta} must be >= 0")));
    }
    if theta == 0.0 {
        let samples = sample_checked(&grid, |t| t.powf(alpha - 1.0))?;
        return Rearrangement::from_samples(
            grid,
            samples,
            Descriptor::PowerLog {
                p: 1.0 / (1.0 - alpha),
                beta: 0.0,
            },
        );
    }
    // e^{(1-α)u} u^θ increases in u = -ln x, so the kernel is already
    // decreasing on (0, 1) and equals its own rearrangement.
    let samples = sample_checked(&grid, |x| x.powf(alpha - 1.0) * (-x.ln()).powf(theta))?;
    Rearrangement::from_samples(grid, samples, Descriptor::Numeric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn grid() -> GeometricGrid {
        GeometricGrid::default()
    }

    #[test]
    fn grid_shape() {
        let g = grid();
        assert_eq!(g.len(), 640);
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 640);
        assert!(nodes.windows(2).all(|w| w[0] > w[1]));
        assert!(nodes.iter().all(|&t| t >= g.t_min() && t < 1.0));
        assert_eq!(*nodes.last().unwrap(), 2f64.powi(-40));
        assert!(GeometricGrid::new(1, 16).is_err());
        assert!(GeometricGrid::new(4, 0).is_err());
    }

    #[test]
    fn cell_index_matches_nodes() {
        let g = GeometricGrid::new(4, 3).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.cell_index(g.rep(i)), Some(i));
            assert_eq!(g.cell_index(g.node(i + 1)), Some(i));
        }
        assert_eq!(g.cell_index(g.t_min() / 2.0), None);
        assert_eq!(g.cell_index(1.0), Some(0));
    }

    #[test]
    fn step_validation() {
        assert!(StepFunction::new(vec![0.0, 0.5, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn rearranges_three_cells() {
        let f = StepFunction::new(vec![0.0, 0.2, 0.5, 1.0], vec![3.0, 1.0, 2.0]).unwrap();
        let r = f.rearranged();
        assert_eq!(r.values(), &[3.0, 2.0, 1.0]);
        assert_relative_eq!(r.breakpoints()[1], 0.2);
        assert_relative_eq!(r.breakpoints()[2], 0.7);
        let fs = decreasing_rearrangement(&f, grid());
        assert_eq!(fs.value_at(0.1), 3.0);
        assert_eq!(fs.value_at(0.5), 2.0);
        assert_eq!(fs.value_at(0.8), 1.0);
        assert_eq!(fs.descriptor(), Descriptor::Numeric);
    }

    #[test]
    fn constant_and_indicator() {
        let c = decreasing_rearrangement(&StepFunction::constant(2.5).unwrap(), grid());
        assert!(c.samples().iter().all(|&v| v == 2.5));

        let ind = StepFunction::indicator(0.3, 0.55, 1.0).unwrap();
        let r = ind.rearranged();
        assert_eq!(r.values(), &[1.0, 0.0]);
        assert_relative_eq!(r.breakpoints()[1], 0.25, epsilon = 1e-15);
        let fs = decreasing_rearrangement(&ind, grid());
        assert_eq!(fs.value_at(0.2), 1.0);
        assert_eq!(fs.value_at(0.3), 0.0);
    }

    #[test]
    fn analytic_examples() {
        let g = grid();
        let pure = analytic_rearrangement(Descriptor::PowerLog { p: 2.0, beta: 0.0 }, g).unwrap();
        for i in [0, 100, 639] {
            assert_relative_eq!(pure.samples()[i], g.rep(i).powf(-0.5), max_relative = 1e-14);
        }
        let ind = analytic_rearrangement(Descriptor::Indicator { s: 0.25 }, g).unwrap();
        assert_eq!(ind.value_at(0.24), 1.0);
        assert_eq!(ind.value_at(0.26), 0.0);

        let pl = Descriptor::PowerLog { p: 2.0, beta: 1.0 };
        let e_inv = (-1.0f64).exp();
        assert_relative_eq!(pl.eval(e_inv).unwrap(), 1.6487212707001282, max_relative = 1e-12);
        assert!(analytic_rearrangement(Descriptor::Numeric, g).is_err());
        assert!(analytic_rearrangement(Descriptor::PowerLog { p: -1.0, beta: 0.0 }, g).is_err());
    }

    #[test]
    fn negative_beta_goes_through_numeric_rearrangement() {
        let g = GeometricGrid::new(20, 8).unwrap();
        let r = analytic_rearrangement(Descriptor::PowerLog { p: 2.0, beta: -0.5 }, g).unwrap();
        assert!(r.samples().windows(2).all(|w| w[0] <= w[1]));
        // Near t = 1 the raw family blows up; its rearrangement puts that
        // mass at t → 0, so the shallow cells hold the smaller values.
        let raw = Descriptor::PowerLog { p: 2.0, beta: -0.5 }.eval(g.rep(0)).unwrap();
        assert!(r.samples()[0] < raw);
    }

    #[test]
    fn kernel_without_log_is_a_pure_power() {
        let g = grid();
        let k = riesz_kernel_rearrangement(0.5, 0.0, g).unwrap();
        assert_relative_eq!(k.samples()[37], g.rep(37).powf(-0.5), max_relative = 1e-14);
        assert!(riesz_kernel_rearrangement(1.0, 0.0, g).is_err());
        assert!(riesz_kernel_rearrangement(0.5, -1.0, g).is_err());
    }

    #[test]
    fn kernel_with_log_matches_fine_sampling_oracle() {
        // Oracle: 2^20 uniform samples of x^{-1/2}|ln x| sorted descending;
        // K*(t) is the sorted value at position t·2^20, so agreement is
        // limited by the oracle's own resolution.
        let n = 1usize << 20;
        let mut vals: Vec<f64> = (0..n)
            .map(|j| {
                let x = (j as f64 + 0.5) / n as f64;
                x.powf(-0.5) * (-x.ln())
            })
            .collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        let t = (-2.0f64).exp();
        let oracle = vals[(t * n as f64) as usize];

        let g = grid();
        let k = riesz_kernel_rearrangement(0.5, 1.0, g).unwrap();
        let rep = g.rep(g.cell_index(t).unwrap());
        let oracle_at_rep = vals[(rep * n as f64) as usize];
        assert_relative_eq!(k.value_at(t), oracle_at_rep, max_relative = 1e-3);
        assert_relative_eq!(oracle, 2.0 * std::f64::consts::E, max_relative = 1e-4);
        assert_relative_eq!(k.value_at(t), 2.0 * std::f64::consts::E, max_relative = 0.05);
    }

    #[test]
    fn to_uniform_step_preserves_mass() {
        let g = grid();
        let f = analytic_rearrangement(Descriptor::PowerLog { p: 2.0, beta: 0.0 }, g).unwrap();
        let s = f.to_uniform_step(256).unwrap();
        // ∫_0^1 t^{-1/2} dt = 2; piecewise-constant cells overestimate slightly.
        assert_relative_eq!(s.integral(), 2.0, max_relative = 0.02);
        assert!(s.is_non_increasing());
    }

    fn step_strategy() -> impl Strategy<Value = StepFunction> {
        prop::collection::vec((0.01f64..1.0, 0.0f64..100.0), 1..10).prop_map(|cells| {
            let total: f64 = cells.iter().map(|c| c.0).sum();
            let mut bp = vec![0.0];
            let mut acc = 0.0;
            for c in &cells[..cells.len() - 1] {
                acc += c.0 / total;
                bp.push(acc);
            }
            bp.push(1.0);
            StepFunction::new(bp, cells.iter().map(|c| c.1).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn equimeasurable(f in step_strategy(), lambda in 0.0f64..100.0) {
            let r = f.rearranged();
            prop_assert!(r.is_non_increasing());
            prop_assert!((f.distribution(lambda) - r.distribution(lambda)).abs() < 1e-12);
        }

        #[test]
        fn lp_sum_preserved(f in step_strategy(), p in 0.5f64..4.0) {
            let a = f.power_sum(p);
            let b = f.rearranged().power_sum(p);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn rearrangement_is_idempotent(f in step_strategy()) {
            let once = f.rearranged();
            let twice = once.rearranged();
            prop_assert_eq!(once.values(), twice.values());
            for (a, b) in once.breakpoints().iter().zip(twice.breakpoints()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn grid_samples_monotone(f in step_strategy()) {
            let r = decreasing_rearrangement(&f, GeometricGrid::new(10, 4).unwrap());
            prop_assert!(r.samples().windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
