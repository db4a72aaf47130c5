//! Convolution on `[0, 1]` and the power-logarithmic Riesz operator
//! `I_{α,θ} f = f ∗ K_{α,θ}` with `K_{α,θ}(x) = |x|^{α-1} |ln|x||^θ`.
//!
//! Inputs are step functions averaged onto a uniform grid of `n` cells
//! (functions extended by zero outside `[0, 1]`). Outputs are sampled at
//! cell centers.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::SpaceSpec;
use crate::rearrange::{decreasing_rearrangement, GeometricGrid, StepFunction};
use crate::report::{InequalityReport, RatioRow};

/// Above this many cells convolutions go through the FFT.
pub const DIRECT_LIMIT: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniformGrid {
    n_cells: usize,
}

impl Default for UniformGrid {
    fn default() -> Self {
        Self { n_cells: 1 << 12 }
    }
}

impl UniformGrid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 || !n_cells.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_cells = {n_cells} must be a power of two and at least 2"
            )));
        }
        Ok(Self { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn width(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.width()
    }

    pub fn refined(&self) -> Self {
        Self { n_cells: 2 * self.n_cells }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub alpha: f64,
    pub theta: f64,
}

impl KernelSpec {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} is not in (0, 1)")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta = {theta} must be >= 0")));
        }
        Ok(Self { alpha, theta })
    }

    /// `∫_a^b K(z) dz` for `0 ≤ a < b`: exact in the power factor, log factor
    /// at the geometric midpoint (at `b·e^{-1/α}` when `a = 0`, the point
    /// where `z^{α-1}` equals its mean over `(0, b)` on the log scale).
    pub fn cell_weight(&self, a: f64, b: f64) -> f64 {
        let alpha = self.alpha;
        let power = (b.powf(alpha) - a.powf(alpha)) / alpha;
        if self.theta == 0.0 {
            return power;
        }
        let rep = if a == 0.0 { b * (-1.0 / alpha).exp() } else { (a * b).sqrt() };
        power * rep.ln().abs().powf(self.theta)
    }

    /// `∫_lo^hi K(z) dz` for any `lo < hi`, splitting at 0.
    fn signed_weight(&self, lo: f64, hi: f64) -> f64 {
        if lo >= 0.0 {
            self.cell_weight(lo, hi)
        } else if hi <= 0.0 {
            self.cell_weight(-hi, -lo)
        } else {
            self.cell_weight(0.0, -lo) + self.cell_weight(0.0, hi)
        }
    }
}

/// Values at the cell centers `(i + ½)h`, `i = 0 … len-1`, of a grid with
/// width `h`. Convolutions keep their full support `[0, 2]` (`2n` cells).
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub h: f64,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn centers(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| (i as f64 + 0.5) * self.h).collect()
    }

    /// `h ∑ values`, the midpoint integral over the whole support.
    pub fn mass(&self) -> f64 {
        self.h * self.values.iter().sum::<f64>()
    }

    /// The part over `[0, 1]`.
    pub fn restrict_unit(&self) -> Sampled {
        let n = ((1.0 / self.h).round() as usize).min(self.values.len());
        Sampled { h: self.h, values: self.values[..n].to_vec() }
    }

    /// The samples over `[0, 1]` as a step function with one cell per sample.
    pub fn to_step_function(&self) -> Result<StepFunction> {
        StepFunction::uniform(self.restrict_unit().values.iter().map(|v| v.max(0.0)).collect())
    }
}

/// Full linear convolution `c_k = ∑_{i+j=k} a_i b_j`.
pub fn linear_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().max(b.len()) <= DIRECT_LIMIT {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        return out;
    }
    let len = (a.len() + b.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let pad = |v: &[f64]| {
        let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
        buf.resize(len, Complex::new(0.0, 0.0));
        buf
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / len as f64;
    fa[..a.len() + b.len() - 1].iter().map(|z| z.re * scale).collect()
}

/// `(f ∗ g)(y) = ∫ f(x) g(y - x) dx` at the `2n` cell centers of `[0, 2]`.
///
/// For cell averages `a`, `b` the continuous convolution of the step
/// functions is piecewise linear with node values `h·c_{m-1}` at `y = mh`
/// (`c = a ∗ b`), so the center values are exact node averages.
pub fn convolve(f: &StepFunction, g: &StepFunction, grid: UniformGrid) -> Sampled {
    let n = grid.n_cells();
    let h = grid.width();
    let c = linear_convolution(&f.resample_uniform(n), &g.resample_uniform(n));
    let node = |m: usize| if m == 0 || m > c.len() { 0.0 } else { h * c[m - 1] };
    let values = (0..2 * n).map(|m| 0.5 * (node(m) + node(m + 1))).collect();
    Sampled { h, values }
}

/// `I_{α,θ} f` at the `n` cell centers of `[0, 1]`.
pub fn riesz_apply(f: &StepFunction, k: KernelSpec, grid: UniformGrid) -> Sampled {
    let n = grid.n_cells();
    let h = grid.width();
    let a = f.resample_uniform(n);
    // w[d] = ∫ over the cell at offset d of K(y_m - x).
    let w: Vec<f64> = (0..n)
        .map(|d| {
            if d == 0 {
                2.0 * k.cell_weight(0.0, 0.5 * h)
            } else {
                k.cell_weight((d as f64 - 0.5) * h, (d as f64 + 0.5) * h)
            }
        })
        .collect();
    // Symmetric kernel laid out on offsets -(n-1) … n-1.
    let kernel: Vec<f64> = (0..2 * n - 1).map(|j| w[j.abs_diff(n - 1)]).collect();
    let full = linear_convolution(&a, &kernel);
    Sampled { h, values: full[n - 1..2 * n - 1].to_vec() }
}

/// `I_{α,θ} f(y)` at an arbitrary `y ∈ [0, 1]`, splitting the cell that
/// contains `y` so the singularity is integrated exactly.
pub fn riesz_at(f: &StepFunction, k: KernelSpec, grid: UniformGrid, y: f64) -> f64 {
    let a = f.resample_uniform(grid.n_cells());
    let h = grid.width();
    a.iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, &v)| {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            v * k.signed_weight(y - x1, y - x0)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Operator {
    Identity,
    Riesz(KernelSpec),
}

/// `target(op f) / source(f)` over a corpus of step functions. Samples with a
/// zero or infinite source norm are skipped and counted.
pub fn boundedness_ratio(
    op: Operator,
    source: &SpaceSpec,
    target: &SpaceSpec,
    corpus: &[(String, StepFunction)],
    grid: GeometricGrid,
    uniform: UniformGrid,
) -> Result<InequalityReport> {
    source.validate()?;
    target.validate()?;
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (id, f) in corpus {
        let rhs = source.evaluate(&decreasing_rearrangement(f, grid))?.value;
        if rhs == 0.0 || !rhs.is_finite() {
            skipped += 1;
            continue;
        }
        let image = match op {
            Operator::Identity => f.clone(),
            Operator::Riesz(k) => riesz_apply(f, k, uniform).to_step_function()?,
        };
        let lhs = target.evaluate(&decreasing_rearrangement(&image, grid))?.value;
        rows.push(RatioRow { id: id.clone(), lhs, rhs, ratio: lhs / rhs });
    }
    if rows.is_empty() {
        return Err(Error::EmptyEffectiveCorpus { skipped });
    }
    let name = match op {
        Operator::Identity => "identity".to_string(),
        Operator::Riesz(k) => format!("riesz(alpha={},theta={})", k.alpha, k.theta),
    };
    let mut report = InequalityReport::from_rows(
        &name,
        grid.descriptor(),
        format!("{target} / {source} finite"),
        rows,
        skipped,
    );
    report.n_cells = Some(uniform.n_cells());
    if !report.max_ratio.is_finite() {
        report.fail("non-finite ratio");
    }
    Ok(report)
}
