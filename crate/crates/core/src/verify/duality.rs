//! Köthe-duality lower bounds through the aligned pairing `∫₀¹ f* g* dt`.
//!
//! Over all equimeasurable realizations, `∫ f g` is maximized by aligning the
//! rearrangements (Hardy–Littlewood), so the pairing of `f*` and `g*` is the
//! supremum the dual norm is taken over.

use crate::error::{Error, Result};
use crate::norms::{grand_lorentz_norm, pairing};
use crate::rearrange::{numeric_rearrangement, Descriptor, Rearrangement};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityOutcome {
    /// `max_g P(f, g) / ‖g‖_{GL^{-θ}_{p',q'}}` over the candidates.
    pub lower: f64,
    /// `‖f‖_{GL^θ_{p,q}}`.
    pub norm: f64,
    /// `lower ≤ 1.01 · norm`.
    pub upper_ok: bool,
    /// Index of the best candidate.
    pub best: Option<usize>,
    pub skipped: usize,
}

pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Lorentz extremals `f*^{q-1} t^{q/p-1}`, with `q/p` shifted to `q(1/p+ε)`
/// for each `ε` in `shifts`, each also perturbed by `|ln t|^{±θq'/q}`
/// (`±θ` when `q = 1`). Candidates are rearranged numerically.
pub fn extremal_candidates(f: &Rearrangement, p: f64, q: f64, theta: f64, shifts: &[f64]) -> Vec<Rearrangement> {
    let grid = f.grid();
    let log_exp = if q == 1.0 { theta } else { theta * conjugate(q) / q };
    let mut out = Vec::new();
    for &eps in std::iter::once(&0.0).chain(shifts) {
        for s in [0.0, log_exp, -log_exp] {
            let values: Vec<f64> = f
                .samples()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if v == 0.0 {
                        return 0.0;
                    }
                    let t = grid.rep(i);
                    let base = if q == 1.0 { 1.0 } else { v.powf(q - 1.0) };
                    base * t.powf(q * (1.0 / p + eps) - 1.0) * (-t.ln()).powf(s)
                })
                .collect();
            if values.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let samples = numeric_rearrangement(&grid, &values, grid);
            if let Ok(g) = Rearrangement::from_samples(grid, samples, Descriptor::Numeric) {
                out.push(g);
            }
        }
    }
    out
}

/// Lower bound for the dual norm of `f` over `candidates`, together with the
/// Hölder-direction check against the direct norm. Candidates whose dual norm
/// is zero or infinite, or whose pairing with `f` has an unresolved tail, are
/// skipped: a grid sup cannot see growth below the last cell, so a divergent
/// pairing marks a candidate that only looks dual-finite on the grid.
pub fn duality_check(
    f: &Rearrangement,
    p: f64,
    q: f64,
    theta: f64,
    candidates: &[Rearrangement],
) -> Result<DualityOutcome> {
    let (pc, qc) = (conjugate(p), conjugate(q));
    let norm = grand_lorentz_norm(f, p, q, theta)?.value;
    let mut lower = 0.0f64;
    let mut best = None;
    let mut skipped = 0;
    let mut used = 0;
    for (i, g) in candidates.iter().enumerate() {
        let dual = grand_lorentz_norm(g, pc, qc, -theta)?.value;
        if dual == 0.0 || !dual.is_finite() {
            skipped += 1;
            continue;
        }
        let pair = pairing(f, g)?;
        if !pair.is_finite() {
            skipped += 1;
            continue;
        }
        used += 1;
        let ratio = pair / dual;
        if ratio > lower || best.is_none() {
            lower = lower.max(ratio);
            best = Some(i);
        }
    }
    if used == 0 {
        return Err(Error::EmptyEffectiveCorpus { skipped });
    }
    Ok(DualityOutcome {
        lower,
        norm,
        upper_ok: lower <= 1.01 * norm,
        best,
        skipped,
    })
}
