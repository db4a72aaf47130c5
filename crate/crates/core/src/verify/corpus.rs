//! Seeded test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rearrange::{
    analytic_rearrangement, decreasing_rearrangement, Descriptor, GeometricGrid, Rearrangement,
    StepFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounts {
    pub random_steps: usize,
    pub indicators: usize,
    pub power_log: usize,
    pub spikes: usize,
}

impl FamilyCounts {
    pub fn total(&self) -> usize {
        self.random_steps + self.indicators + self.power_log + self.spikes
    }

    /// Family sizes summing to `total` in the proportions of `self`; the
    /// rounding remainder goes to the random steps.
    pub fn scaled_to(&self, total: usize) -> Self {
        let base = self.total().max(1);
        let share = |n: usize| n * total / base;
        let mut c = Self {
            random_steps: share(self.random_steps),
            indicators: share(self.indicators),
            power_log: share(self.power_log),
            spikes: share(self.spikes),
        };
        c.random_steps += total - c.total();
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub counts: FamilyCounts,
    /// Range of the power-log exponent `p` in `t^{-1/p} |ln t|^β`.
    pub p_range: (f64, f64),
    pub beta_range: (f64, f64),
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self::standard(42)
    }
}

impl CorpusSpec {
    pub fn standard(seed: u64) -> Self {
        Self {
            seed,
            counts: FamilyCounts { random_steps: 24, indicators: 6, power_log: 8, spikes: 6 },
            p_range: (1.25, 8.0),
            beta_range: (-1.0, 2.0),
        }
    }

    pub fn with_counts(seed: u64, counts: FamilyCounts) -> Self {
        Self { counts, ..Self::standard(seed) }
    }

    /// Short tag used in fixture keys, e.g. `s42c24-6-8-6`.
    pub fn key(&self) -> String {
        let c = self.counts;
        format!("s{}c{}-{}-{}-{}", self.seed, c.random_steps, c.indicators, c.power_log, c.spikes)
    }
}

/// How a corpus member is defined, independent of any grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Step(StepFunction),
    Analytic(Descriptor),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub id: String,
    pub source: Source,
}

impl CorpusItem {
    pub fn rearrangement(&self, grid: GeometricGrid) -> Result<Rearrangement> {
        match &self.source {
            Source::Step(f) => Ok(decreasing_rearrangement(f, grid)),
            Source::Analytic(d) => analytic_rearrangement(*d, grid),
        }
    }

    /// A function on `[0, 1]` with this distribution: the step function
    /// itself, or `f*` averaged over `n` uniform cells.
    pub fn step_function(&self, grid: GeometricGrid, n: usize) -> Result<StepFunction> {
        match &self.source {
            Source::Step(f) => Ok(f.clone()),
            Source::Analytic(d) => analytic_rearrangement(*d, grid)?.to_uniform_step(n),
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

fn random_step(rng: &mut ChaCha8Rng) -> Result<StepFunction> {
    let cells = rng.gen_range(1..=8usize);
    let mut cuts: Vec<f64> = (1..cells).map(|_| rng.gen_range(0.0..1.0)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut bp = vec![0.0];
    bp.extend(cuts.into_iter().filter(|&x| x > 0.0));
    bp.push(1.0);
    let values = (1..bp.len()).map(|_| log_uniform(rng, 1e-3, 1e3)).collect();
    StepFunction::new(bp, values)
}

fn spike_sum(rng: &mut ChaCha8Rng) -> Result<StepFunction> {
    let base = log_uniform(rng, 1e-2, 1.0);
    let count = rng.gen_range(1..=3usize);
    let mut spikes: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            let width = log_uniform(rng, 1e-4, 1e-2);
            let start = rng.gen_range(0.0..1.0 - width);
            let height = log_uniform(rng, 10.0, 1e3);
            (start, start + width, height)
        })
        .collect();
    spikes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut bp = vec![0.0];
    let mut values = Vec::new();
    for (a, b, h) in spikes {
        let last = *bp.last().expect("non-empty");
        if a <= last {
            continue; // overlaps the previous spike
        }
        values.push(base);
        bp.push(a);
        values.push(base + h);
        bp.push(b);
    }
    if *bp.last().expect("non-empty") < 1.0 {
        values.push(base);
        bp.push(1.0);
    } else {
        *bp.last_mut().expect("non-empty") = 1.0;
    }
    StepFunction::new(bp, values)
}

/// Power-log members alternate between the borderline family
/// `t^{-1/p} |ln t|^{θ - 1/τ}` and free exponents `β ∈ beta_range`.
fn power_log(rng: &mut ChaCha8Rng, spec: &CorpusSpec, k: usize) -> Descriptor {
    let p = rng.gen_range(spec.p_range.0..=spec.p_range.1);
    let beta = if k.is_multiple_of(2) {
        let theta = [0.5, 1.0, 2.0][rng.gen_range(0..3usize)];
        let inv_tau = [1.0, 0.5, 0.0][rng.gen_range(0..3usize)];
        theta - inv_tau
    } else {
        rng.gen_range(spec.beta_range.0..=spec.beta_range.1)
    };
    Descriptor::PowerLog { p, beta }
}

/// Identical specs give identical corpora.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusItem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let c = spec.counts;
    let mut out = Vec::with_capacity(c.total());
    for k in 0..c.random_steps {
        out.push(CorpusItem { id: format!("step-{k:03}"), source: Source::Step(random_step(&mut rng)?) });
    }
    for k in 0..c.indicators {
        let s = log_uniform(&mut rng, 1e-3, 1.0);
        out.push(CorpusItem { id: format!("ind-{k:03}"), source: Source::Analytic(Descriptor::Indicator { s }) });
    }
    for k in 0..c.power_log {
        let d = power_log(&mut rng, spec, k);
        out.push(CorpusItem { id: format!("pl-{k:03}"), source: Source::Analytic(d) });
    }
    for k in 0..c.spikes {
        out.push(CorpusItem { id: format!("spike-{k:03}"), source: Source::Step(spike_sum(&mut rng)?) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = CorpusSpec::standard(42);
        assert_eq!(generate_corpus(&spec).unwrap(), generate_corpus(&spec).unwrap());
        let other = generate_corpus(&CorpusSpec::standard(43)).unwrap();
        assert_ne!(generate_corpus(&spec).unwrap(), other);
    }

    #[test]
    fn counts_and_validity() {
        let spec = CorpusSpec::standard(7);
        let corpus = generate_corpus(&spec).unwrap();
        assert_eq!(corpus.len(), 44);
        let g = GeometricGrid::default();
        for item in &corpus {
            let r = item.rearrangement(g).unwrap();
            assert!(!r.is_zero(), "{}", item.id);
        }
        let empty = CorpusSpec::with_counts(1, FamilyCounts { random_steps: 0, indicators: 0, power_log: 0, spikes: 0 });
        assert!(generate_corpus(&empty).unwrap().is_empty());
    }

    #[test]
    fn first_step_is_pinned() {
        let spec = CorpusSpec::with_counts(42, FamilyCounts { random_steps: 1, indicators: 0, power_log: 0, spikes: 0 });
        let corpus = generate_corpus(&spec).unwrap();
        let Source::Step(f) = &corpus[0].source else { panic!("expected a step function") };
        let pinned: (&[f64], &[f64]) = (PINNED_BREAKPOINTS, PINNED_VALUES);
        assert_eq!(f.breakpoints().len(), pinned.0.len(), "{f:?}");
        for (a, b) in f.breakpoints().iter().zip(pinned.0) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{f:?}");
        }
        for (a, b) in f.values().iter().zip(pinned.1) {
            assert!((a - b).abs() <= 1e-12 * b.abs(), "{f:?}");
        }
    }

    const PINNED_BREAKPOINTS: &[f64] = &[
        0.0,
        0.14995887029032495,
        0.2885938791411826,
        0.4275164028565197,
        0.6273605211973403,
        0.950275407672484,
        1.0,
    ];
    const PINNED_VALUES: &[f64] = &[
        0.07050880554781533,
        66.56356948751254,
        42.41238399800392,
        0.02700919163603437,
        1.099515160747977,
        257.52478442426855,
    ];
}
