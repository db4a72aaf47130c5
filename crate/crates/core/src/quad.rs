//! Weighted Lorentz-type integrals on geometric grids and the
//! one-dimensional optimizer used for every sup/inf over the
//! aggrandisation parameter.
//!
//! Integrals are midpoint sums in `u = -ln t`: each cell contributes its
//! integrand at the representative times `ln 2 / J`. The part below `t_min`
//! is extrapolated from the decay between the last two octaves.

use crate::error::{Error, Result};
use crate::rearrange::Rearrangement;

/// Largest extrapolated tail, relative to the full integral, that still
/// counts as converged.
pub const TAIL_REL_TOL: f64 = 5e-2;

/// Logarithmic weight multiplying `t^a f*(t)` inside the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogWeight {
    None,
    /// `|ln t|^{-θ}`.
    AbsLog(f64),
    /// `(1 - ln t)^{-θ}`.
    OnePlusLog(f64),
    /// Closed-form envelope `sup_{0<ε≤ε_max} ε^θ t^ε` for `θ > 0`, or
    /// `inf_{0<ε<ε_max} ε^θ t^{-ε}` for `θ < 0`.
    Envelope { theta: f64, eps_max: f64 },
}

impl LogWeight {
    /// Weight as a function of `u = -ln t`.
    pub fn at_log(&self, u: f64) -> f64 {
        match *self {
            LogWeight::None => 1.0,
            LogWeight::AbsLog(0.0) => 1.0,
            LogWeight::AbsLog(theta) => u.powf(-theta),
            LogWeight::OnePlusLog(theta) => (1.0 + u).powf(-theta),
            LogWeight::Envelope { theta, eps_max } => {
                let t = (-u).exp();
                if theta > 0.0 {
                    crate::norms::log_envelope_weight(t, theta, eps_max)
                } else {
                    crate::norms::log_envelope_weight_inf(t, -theta, eps_max)
                }
            }
        }
    }
}

/// `(∫₀¹ (t^a · w(t) · f*(t))^q dt/t)^{1/q}`, or the sup over `t` when `q = ∞`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedFunctional<'a> {
    pub rearrangement: &'a Rearrangement,
    pub exponent_a: f64,
    pub weight: LogWeight,
    pub outer_q: f64,
}

/// Result of a certified quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// `integral^{1/q}`.
    pub value: f64,
    /// The integral before taking the root, tail included.
    pub integral: f64,
    pub tail: f64,
    pub tail_rel: f64,
}

/// True when a scan over cells ordered toward `t → 0` peaks at its last
/// entry and its increments over `block` entries do not decay fast enough
/// for [`certify_tail`] to bound the remaining growth.
pub(crate) fn unbounded_at_end(scan: &[f64], block: usize) -> bool {
    let n = scan.len();
    if n <= 2 * block {
        return false;
    }
    let last = scan[n - 1];
    let (mid, early) = (scan[n - 1 - block], scan[n - 1 - 2 * block]);
    if !(last > mid) || scan.iter().any(|&x| x > last) {
        return false;
    }
    certify_tail(last, [f64::NAN, (mid - early).max(0.0), last - mid]).is_err()
}

/// Largest relative tail accepted when the block ratio is stable, see
/// [`certify_tail`].
pub const GEOMETRIC_TAIL_REL_TOL: f64 = 0.5;

/// Largest change of the block ratio between the last two block pairs,
/// relative to `1 - r`, for a tail to count as geometric.
pub const GEOMETRIC_DRIFT_TOL: f64 = 1e-2;

/// Extrapolates the part of a sum beyond its last block from the ratio
/// `r = last / previous` of the last two of `[earlier, previous, last]`.
///
/// The tail is accepted when it is at most [`TAIL_REL_TOL`] of the total, or
/// at most [`GEOMETRIC_TAIL_REL_TOL`] when `previous / earlier` agrees with
/// `r` to within [`GEOMETRIC_DRIFT_TOL`]` · (1 - r)`; then the blocks decay
/// geometrically and the extrapolation is accurate even for a large tail.
/// Pass `earlier = NaN` to disable the second rule.
///
/// Returns `(tail, tail / (sum + tail))`, or `TailNotConverged` when the
/// blocks do not decay or the extrapolated tail is too large.
pub fn certify_tail(sum: f64, blocks: [f64; 3]) -> Result<(f64, f64)> {
    let [earlier, previous, last] = blocks;
    if last == 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(previous > 0.0) || last >= previous || !sum.is_finite() {
        return Err(Error::TailNotConverged {
            last_octave: last,
            relative: f64::INFINITY,
        });
    }
    let r = last / previous;
    let tail = last * r / (1.0 - r);
    let rel = tail / (sum + tail);
    let geometric = earlier > previous && ((previous / earlier) - r).abs() <= GEOMETRIC_DRIFT_TOL * (1.0 - r);
    if rel > TAIL_REL_TOL && !(geometric && rel <= GEOMETRIC_TAIL_REL_TOL) {
        return Err(Error::TailNotConverged {
            last_octave: last,
            relative: rel,
        });
    }
    Ok((tail, rel))
}

/// Cell bases `(w_i f_i)^q Δ` of a functional whose power exponent varies;
/// evaluating at a new exponent costs one multiplication per cell.
#[derive(Debug, Clone)]
pub(crate) struct PowerFamily {
    base: Vec<f64>,
    q: f64,
    step: f64,
    per_octave: usize,
}

impl PowerFamily {
    pub(crate) fn new(f: &Rearrangement, weight: LogWeight, q: f64) -> Self {
        let g = f.grid();
        let step = g.log_step();
        let base = f
            .samples()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v == 0.0 {
                    return 0.0;
                }
                let wv = weight.at_log(g.log_rep(i)) * v;
                if q.is_infinite() {
                    wv
                } else {
                    wv.powf(q) * step
                }
            })
            .collect();
        Self {
            base,
            q,
            step,
            per_octave: g.subdivisions() as usize,
        }
    }

    /// Multiplies `base` by `t_i^{s}` (`s = a·q` or `a`) and hands each cell
    /// to `visit`.
    fn for_each_scaled(&self, s: f64, mut visit: impl FnMut(usize, f64)) {
        let ratio = (-s * self.step).exp();
        let mut pow = (-0.5 * s * self.step).exp();
        for (i, &b) in self.base.iter().enumerate() {
            visit(i, b * pow);
            pow *= ratio;
        }
    }

    pub(crate) fn integral(&self, a: f64) -> Result<Quadrature> {
        debug_assert!(self.q.is_finite());
        let n = self.base.len();
        let j = self.per_octave;
        let mut sum = 0.0;
        let mut blocks = [0.0; 3];
        self.for_each_scaled(a * self.q, |i, c| {
            sum += c;
            if i + 3 * j >= n {
                blocks[(i + 3 * j - n) / j] += c;
            }
        });
        let (tail, tail_rel) = certify_tail(sum, blocks)?;
        let integral = sum + tail;
        Ok(Quadrature {
            value: integral.powf(1.0 / self.q),
            integral,
            tail,
            tail_rel,
        })
    }

    /// Grid sup of `t^a w f*`, or `+∞` when the values still grow across
    /// the last octave (the sup is approached as `t → 0`, beyond the grid).
    pub(crate) fn sup(&self, a: f64) -> f64 {
        let mut scan = Vec::with_capacity(self.base.len());
        self.for_each_scaled(a, |_, c| scan.push(c));
        if unbounded_at_end(&scan, self.per_octave) {
            return f64::INFINITY;
        }
        scan.into_iter().fold(0.0, f64::max)
    }

    pub(crate) fn is_sup(&self) -> bool {
        self.q.is_infinite()
    }

    /// The functional at exponent `a` as an ε-objective input: `Some(v)` when
    /// resolved, `Some(+∞)` when the octave blocks grow at a power rate (see
    /// [`power_growth_rate`]), `None` when the grid cannot decide.
    pub(crate) fn quasinorm(&self, a: f64) -> Option<f64> {
        let value = if self.is_sup() {
            Some(self.sup(a)).filter(|v| v.is_finite())
        } else {
            self.integral(a).ok().map(|quad| quad.value)
        };
        value.or_else(|| self.grows_at_power_rate(a).then_some(f64::INFINITY))
    }

    fn grows_at_power_rate(&self, a: f64) -> bool {
        let j = self.per_octave;
        let mut blocks = vec![0.0f64; self.base.len() / j];
        let sup = self.is_sup();
        let s = if sup { a } else { a * self.q };
        self.for_each_scaled(s, |i, c| {
            let b = &mut blocks[i / j];
            *b = if sup { b.max(c) } else { *b + c };
        });
        power_growth_rate(&blocks).is_some_and(|rate| rate > DIVERGENCE_RATE_TOL)
    }
}

/// Smallest fitted per-octave log-growth that counts as divergence.
pub const DIVERGENCE_RATE_TOL: f64 = 5e-3;

/// Asymptotic per-octave growth rate of positive octave blocks `B_k`
/// (`k = 0` next to `t = 1`).
///
/// Over the deeper half of the blocks, fits `ln(B_{k+1}/B_k) = a + b·x_k`
/// with `x_k = ln((k+3/2)/(k+1/2))`, which is exact for `t^c |ln t|^β`
/// profiles: a power of the logarithm only moves `b`, so `a > 0` means the
/// blocks grow like a power of `1/t` and the sum or sup diverges. `None`
/// when a block in the window is not positive.
pub fn power_growth_rate(blocks: &[f64]) -> Option<f64> {
    let m = blocks.len();
    let start = m / 2;
    if m < start + 4 || blocks[start..].iter().any(|&b| !(b > 0.0 && b.is_finite())) {
        return None;
    }
    let pts: Vec<(f64, f64)> = (start..m - 1)
        .map(|k| {
            let k = k as f64;
            (((k + 1.5) / (k + 0.5)).ln(), (blocks[k as usize + 1] / blocks[k as usize]).ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x / n, sy + y / n));
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Some(my - slope * mx)
}

/// Quadrature of a finite-`q` weighted functional.
pub fn weighted_lorentz_integral(w: &WeightedFunctional<'_>) -> Result<Quadrature> {
    if !(w.outer_q > 0.0) {
        return Err(Error::InvalidParameter(format!("outer q = {}", w.outer_q)));
    }
    if w.outer_q.is_infinite() {
        return Err(Error::InvalidParameter(
            "q = ∞ is handled by weighted_lorentz_sup".into(),
        ));
    }
    PowerFamily::new(w.rearrangement, w.weight, w.outer_q).integral(w.exponent_a)
}

/// Grid maximum of `t^a w(t) f*(t)`.
pub fn weighted_lorentz_sup(w: &WeightedFunctional<'_>) -> f64 {
    PowerFamily::new(w.rearrangement, w.weight, f64::INFINITY).sup(w.exponent_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sup,
    Inf,
}

/// Extremize `objective` over `(0, eps_max]`. `None` from the objective
/// means the inner quasinorm diverged at that parameter.
pub struct EpsilonProblem<F> {
    pub mode: Mode,
    pub eps_max: f64,
    pub objective: F,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub arg: f64,
    pub value: f64,
    /// The optimum sits on the outermost scanned node.
    pub at_boundary: bool,
    pub diverged_nodes: usize,
}

pub const EPS_NODES_PER_OCTAVE: u32 = 8;
pub const EPS_OCTAVE_SPAN: u32 = 40;
const GOLDEN_REL_TOL: f64 = 1e-10;

/// `eps_max · 2^{-j/8}`, `j = 0 … 320`, in increasing order.
pub fn epsilon_nodes(eps_max: f64) -> Vec<f64> {
    let count = EPS_NODES_PER_OCTAVE * EPS_OCTAVE_SPAN;
    (0..=count)
        .rev()
        .map(|j| eps_max * (-(f64::from(j)) / f64::from(EPS_NODES_PER_OCTAVE)).exp2())
        .collect()
}

pub fn epsilon_optimize<F>(prob: &EpsilonProblem<F>) -> Result<Optimum>
where
    F: Fn(f64) -> Option<f64>,
{
    if !(prob.eps_max > 0.0 && prob.eps_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps_max = {}", prob.eps_max)));
    }
    let nodes = epsilon_nodes(prob.eps_max);
    optimize_on_nodes(prob.mode, &nodes, &prob.objective)
}

/// Scan `nodes` (strictly increasing), then refine around the best node by
/// golden-section search. The result is never worse than any scanned node.
pub fn optimize_on_nodes<F>(mode: Mode, nodes: &[f64], objective: &F) -> Result<Optimum>
where
    F: Fn(f64) -> Option<f64>,
{
    // Work with a maximization of `score`.
    let score = |x: f64| -> f64 {
        match objective(x) {
            Some(v) if !v.is_nan() => match mode {
                Mode::Sup => v,
                Mode::Inf => -v,
            },
            _ => f64::NEG_INFINITY,
        }
    };

    let mut diverged = 0;
    let mut best_idx = None;
    let mut best = f64::NEG_INFINITY;
    for (i, &x) in nodes.iter().enumerate() {
        let s = score(x);
        if s == f64::NEG_INFINITY {
            diverged += 1;
            continue;
        }
        if best_idx.is_none() || s > best {
            best = s;
            best_idx = Some(i);
        }
    }
    let Some(b) = best_idx else {
        return Err(Error::ObjectiveDiverged);
    };
    if mode == Mode::Sup && best == f64::INFINITY {
        return Err(Error::ObjectiveDiverged);
    }
    if mode == Mode::Sup && rises_into_unresolved(nodes, &score) {
        return Err(Error::ObjectiveDiverged);
    }

    let lo = if b == 0 {
        nodes[0] * (-1.0 / f64::from(EPS_NODES_PER_OCTAVE)).exp2()
    } else {
        nodes[b - 1]
    };
    let hi = if b + 1 == nodes.len() { nodes[b] } else { nodes[b + 1] };
    let (mut arg, mut val) = (nodes[b], best);
    if hi > lo {
        let (x, s) = golden_max(&score, lo, hi);
        if s > val {
            arg = x;
            val = s;
        }
    }
    let value = match mode {
        Mode::Sup => val,
        Mode::Inf => -val,
    };
    Ok(Optimum {
        arg,
        value,
        at_boundary: arg == nodes[nodes.len() - 1] || arg == nodes[0],
        diverged_nodes: diverged,
    })
}

/// Smallest relative rise over the last spacing that the edge rule of
/// [`optimize_on_nodes`] treats as growth; smaller rises are within the
/// extrapolation error of the edge node's tail.
pub const EDGE_RISE_TOL: f64 = 0.02;

/// True when unresolved nodes border the resolved range, the resolved edge
/// node is the overall maximum, and the objective sampled at the edge and
/// one and two spacings inside (an octave of nodes, or less when the
/// resolved run is short) climbs by at least [`EDGE_RISE_TOL`] without
/// decaying increments, judged by the same criterion as a grid sup.
fn rises_into_unresolved(nodes: &[f64], score: &impl Fn(f64) -> f64) -> bool {
    let step = EPS_NODES_PER_OCTAVE as usize;
    let vals: Vec<f64> = nodes.iter().map(|&x| score(x)).collect();
    let resolved: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > f64::NEG_INFINITY).collect();
    let (Some(&first), Some(&last)) = (resolved.first(), resolved.last()) else {
        return false;
    };
    let top = resolved.iter().map(|&i| vals[i]).fold(f64::NEG_INFINITY, f64::max);
    let spacing = step.min((last - first) / 2);
    if spacing == 0 {
        return false;
    }
    let climbs = |idx: [usize; 3]| {
        let scan = idx.map(|i| vals[i]);
        scan[2] >= top
            && scan.iter().all(|&v| v > f64::NEG_INFINITY)
            && (scan[2] - scan[1]).abs() >= EDGE_RISE_TOL * scan[1].abs()
            && unbounded_at_end(&scan, 1)
    };
    (first > 0 && climbs([first + 2 * spacing, first + spacing, first]))
        || (last + 1 < vals.len() && climbs([last - 2 * spacing, last - spacing, last]))
}

/// Golden-section maximization on `[a, b]`; returns the best evaluated point.
pub fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut best_x, mut best_f) = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a) <= GOLDEN_REL_TOL * a.abs().max(b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best_f {
                best_x = c;
                best_f = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best_f {
                best_x = d;
                best_f = fd;
            }
        }
    }
    (best_x, best_f)
}
