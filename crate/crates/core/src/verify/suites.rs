//! Built-in inequality suites.
//!
//! Exponent tuples are built from reciprocals in exact rational arithmetic,
//! so every balance equation (`1 + 1/q = 1/p + 1/r`, `θ = θ₁ - θ₀`, ...)
//! holds exactly before conversion to floating point. A reciprocal of 0
//! stands for an infinite exponent.

use num_rational::Ratio;

use super::{Case, Expr, Functional, InequalitySpec, Operand, Roles, ThresholdMode};
use crate::norms::{GrandLebesgueForm, SpaceSpec};
use crate::operators::KernelSpec;
use crate::verify::conjugate;

pub type Frac = Ratio<i64>;

fn fr(n: i64, d: i64) -> Frac {
    Frac::new(n, d)
}

fn val(x: Frac) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Exponent with reciprocal `x`.
fn exp(x: Frac) -> f64 {
    if x == fr(0, 1) {
        f64::INFINITY
    } else {
        1.0 / val(x)
    }
}

fn one() -> Frac {
    fr(1, 1)
}

/// `d_{p,q,r} = max(p', r')`.
fn d_pqr(ip: Frac, ir: Frac) -> f64 {
    conjugate(exp(ip)).max(conjugate(exp(ir)))
}

fn gl(p: f64, q: f64, theta: f64) -> SpaceSpec {
    SpaceSpec::grand_lorentz(p, q, theta)
}

fn norm(spec: SpaceSpec, o: Operand) -> Expr {
    Expr::norm(spec, o)
}

fn fmt_p(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn spec(name: &str, description: &str, roles: Roles, threshold: ThresholdMode, cases: Vec<Case>) -> InequalitySpec {
    InequalitySpec {
        name: name.into(),
        description: description.into(),
        roles,
        threshold,
        cases,
        stability_tol: None,
    }
}

/// `(1/p, 1/r, 1/q)` with `1 + 1/q = 1/p + 1/r`, `1 ≤ p, r` and `q < ∞`.
pub fn young_tuples() -> Vec<(Frac, Frac, Frac)> {
    [(fr(1, 1), fr(1, 1)), (fr(1, 2), fr(1, 1)), (fr(3, 4), fr(3, 4)), (fr(2, 3), fr(2, 3)), (fr(1, 2), fr(3, 4))]
        .into_iter()
        .map(|(ip, ir)| (ip, ir, ip + ir - one()))
        .filter(|&(ip, ir, iq)| iq > fr(0, 1) && one() + iq == ip + ir)
        .collect()
}

/// `(1/p, 1/r, 1/q)` with `1 + 1/q = 1/p + 1/r` and `1 < p, q, r < ∞`.
pub fn oneil_tuples() -> Vec<(Frac, Frac, Frac)> {
    [(fr(2, 3), fr(2, 3)), (fr(3, 4), fr(1, 2)), (fr(1, 2), fr(3, 4))]
        .into_iter()
        .map(|(ip, ir)| (ip, ir, ip + ir - one()))
        .filter(|&(ip, ir, iq)| {
            let open = |x: Frac| x > fr(0, 1) && x < one();
            open(ip) && open(ir) && open(iq) && one() + iq == ip + ir
        })
        .collect()
}

/// `(1/p, 1/q, 1/r)` with `p < q` and `1/r = 1 + 1/q - 1/p`.
pub fn proto_tuples() -> Vec<(Frac, Frac, Frac)> {
    [(fr(2, 3), fr(1, 3)), (fr(1, 2), fr(1, 4))]
        .into_iter()
        .map(|(ip, iq)| (ip, iq, one() + iq - ip))
        .filter(|&(ip, iq, ir)| ip > iq && ir > fr(0, 1) && ir < one())
        .collect()
}

pub fn suite_names() -> Vec<String> {
    builtin_suites().into_iter().map(|s| s.name).collect()
}

pub fn builtin_suites() -> Vec<InequalitySpec> {
    vec![
        hoelder_integral(),
        hoelder_lorentz(),
        nesting(),
        p1_theta_monotone(),
        p2_q_monotone(),
        p3_p_monotone(),
        dyadic_equivalence(),
        envelope_bounds(),
        lemma23_chain(),
        lemma23_equivalence(),
        grand_lebesgue_sandwich(),
        young_classical(),
        oneil_classical(),
        oneil_proto(),
        oneil_grand(),
        young_grand(),
        hls(),
        duality_upper(),
        gl_equals_grand_lebesgue(),
    ]
}

fn hoelder_integral() -> InequalitySpec {
    let mut cases = Vec::new();
    for ip in [fr(2, 3), fr(1, 2), fr(1, 3)] {
        for iq in [one(), fr(1, 2), fr(0, 1)] {
            for theta in [0.5, 1.0] {
                let (p, q) = (exp(ip), exp(iq));
                let (pc, qc) = (exp(one() - ip), exp(one() - iq));
                cases.push(Case::new(
                    format!("p={},q={},theta={theta}", fmt_p(p), fmt_p(q)),
                    Expr::Pairing,
                    norm(gl(p, q, theta), Operand::F).times(norm(gl(pc, qc, -theta), Operand::G)),
                ));
            }
        }
    }
    spec(
        "hoelder_integral",
        "∫ f g ≤ ‖f‖_{GL^θ_{p,q}} ‖g‖_{GL^{-θ}_{p',q'}}",
        Roles::FG,
        ThresholdMode::ExactWithSlack(0.01),
        cases,
    )
}

fn hoelder_lorentz() -> InequalitySpec {
    let mut cases = Vec::new();
    for (ip1, ip2) in [(fr(1, 4), fr(1, 4)), (fr(1, 3), fr(1, 6))] {
        for (iq1, iq2) in [(fr(1, 2), fr(1, 2)), (fr(0, 1), fr(0, 1)), (one(), fr(0, 1))] {
            for theta in [0.5, 1.0] {
                let (ip, iq) = (ip1 + ip2, iq1 + iq2);
                let (p, q) = (exp(ip), exp(iq));
                cases.push(Case::new(
                    format!("p1={},p2={},q1={},q2={},theta={theta}", exp(ip1), exp(ip2), fmt_p(exp(iq1)), fmt_p(exp(iq2))),
                    norm(SpaceSpec::lorentz(p, q), Operand::Product),
                    norm(gl(exp(ip1), exp(iq1), theta), Operand::F)
                        .times(norm(gl(exp(ip2), exp(iq2), -theta), Operand::G)),
                ));
            }
        }
    }
    spec(
        "hoelder_lorentz",
        "‖fg‖_{L_{p,q}} ≲ ‖f‖_{GL^θ_{p1,q1}} ‖g‖_{GL^{-θ}_{p2,q2}}, 1/p = 1/p1 + 1/p2, \
         1/q = 1/q1 + 1/q2; implemented with the exponents ±θ as displayed \
         (the accompanying condition θ = θ1 + θ2 names exponents the display does not use)",
        Roles::FG,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn nesting() -> InequalitySpec {
    let mut cases = Vec::new();
    for p in [1.0, 1.5, 2.0, 4.0] {
        for q in [1.0, 2.0, f64::INFINITY] {
            for theta in [0.5, 1.0, 2.0] {
                let tag = format!("p={p},q={},theta={theta}", fmt_p(q));
                let l = norm(SpaceSpec::lorentz(p, q), Operand::F);
                cases.push(Case::new(format!("upper:{tag}"), norm(gl(p, q, theta), Operand::F), l.clone()));
                cases.push(Case::new(format!("lower:{tag}"), l, norm(gl(p, q, -theta), Operand::F)));
            }
        }
    }
    spec(
        "nesting",
        "GL^θ_{p,q} ≤ L_{p,q} ≤ GL^{-θ}_{p,q} termwise on a shared grid",
        Roles::F,
        ThresholdMode::ExactWithSlack(1e-12),
        cases,
    )
}

fn p1_theta_monotone() -> InequalitySpec {
    let mut cases = Vec::new();
    for (p, q) in [(2.0, 1.0), (2.0, 2.0), (4.0, f64::INFINITY), (1.5, 2.0)] {
        for (t0, t1) in [(0.25, 0.5), (0.5, 1.0), (1.0, 2.0)] {
            cases.push(Case::new(
                format!("p={p},q={},theta={t0}->{t1}", fmt_p(q)),
                norm(gl(p, q, t1), Operand::F),
                norm(gl(p, q, t0), Operand::F),
            ));
        }
    }
    spec(
        "p1_theta_monotone",
        "‖f‖_{GL^{θ1}_{p,q}} ≤ ‖f‖_{GL^θ_{p,q}} for θ ≤ θ1",
        Roles::F,
        ThresholdMode::ExactWithSlack(1e-12),
        cases,
    )
}

fn p2_q_monotone() -> InequalitySpec {
    let mut cases = Vec::new();
    for p in [2.0, 4.0] {
        for theta in [-1.0, 0.5, 1.0] {
            for (q, q1) in [(1.0, 2.0), (2.0, f64::INFINITY), (1.0, f64::INFINITY)] {
                cases.push(Case::new(
                    format!("p={p},theta={theta},q={q}->{}", fmt_p(q1)),
                    norm(gl(p, q1, theta), Operand::F),
                    norm(gl(p, q, theta), Operand::F),
                ));
            }
        }
    }
    spec("p2_q_monotone", "GL^θ_{p,q} ↪ GL^θ_{p,q1} for q < q1", Roles::F, ThresholdMode::RecordedConstant, cases)
}

fn p3_p_monotone() -> InequalitySpec {
    let mut cases = Vec::new();
    for (p, q, p1, q1) in [(2.0, 1.0, 3.0, 2.0), (1.5, 2.0, 4.0, f64::INFINITY), (2.0, 1.0, 4.0, 2.0)] {
        for theta in [0.5, 1.0] {
            cases.push(Case::new(
                format!("p={p},q={q},p1={p1},q1={},theta={theta}", fmt_p(q1)),
                norm(gl(p, q, theta), Operand::F),
                norm(gl(p1, q1, theta), Operand::F),
            ));
        }
    }
    spec("p3_p_monotone", "GL^θ_{p1,q1} ↪ GL^θ_{p,q} for p < p1, q < q1", Roles::F, ThresholdMode::RecordedConstant, cases)
}

fn dyadic_equivalence() -> InequalitySpec {
    let mut cases = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        for tau in [1.0, 2.0] {
            for theta in [0.5, 1.0, 2.0] {
                cases.push(
                    Case::new(
                        format!("p={p},tau={tau},theta={theta}"),
                        norm(SpaceSpec::dyadic(p, tau, theta), Operand::F),
                        norm(gl(p, tau, theta), Operand::F),
                    )
                    .bracketed(0.25, 4.0),
                );
            }
        }
    }
    let mut s = spec(
        "dyadic_equivalence",
        "dyadic and continuous grand Lorentz quasinorms agree within a factor 4",
        Roles::F,
        ThresholdMode::Bracket { slack: 0.0 },
        cases,
    );
    s.stability_tol = Some(0.05);
    s
}

fn envelope_bounds() -> InequalitySpec {
    let mut cases = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        for tau in [1.0, 2.0, f64::INFINITY] {
            for theta in [0.5, 1.0, 2.0] {
                let tag = format!("p={p},tau={},theta={theta}", fmt_p(tau));
                cases.push(Case::new(
                    format!("upper:{tag}"),
                    norm(gl(p, tau, theta), Operand::F),
                    Expr::Apply(Functional::EnvelopeUpper { p, tau, theta }, Operand::F),
                ));
                cases.push(Case::new(
                    format!("lower:{tag}"),
                    Expr::Apply(Functional::EnvelopeLower { p, tau, theta }, Operand::F),
                    norm(gl(p, tau, -theta), Operand::F),
                ));
            }
        }
    }
    spec(
        "envelope_bounds",
        "GL^θ_{p,τ} ≤ ‖W t^{1/p} f*‖ and GL^{-θ}_{p,τ} ≥ ‖W⁻ t^{1/p} f*‖ with the closed-form envelopes",
        Roles::F,
        ThresholdMode::ExactWithSlack(0.01),
        cases,
    )
}

fn lemma23_chain() -> InequalitySpec {
    let mut cases = Vec::new();
    for p in [2.0, 4.0] {
        for tau in [1.0, 2.0] {
            for theta in [0.5, 1.0] {
                let tag = format!("p={p},tau={tau},theta={theta}");
                cases.push(Case::new(
                    format!("gl/lk:{tag}"),
                    norm(gl(p, tau, theta), Operand::F),
                    norm(SpaceSpec::lorentz_karamata(p, tau, theta), Operand::F),
                ));
                cases.push(Case::new(
                    format!("afh/gl:{tag}"),
                    norm(SpaceSpec::afh(p, tau, theta), Operand::F),
                    norm(gl(p, tau, theta), Operand::F),
                ));
                cases.push(Case::new(
                    format!("lk-/gl-:{tag}"),
                    norm(SpaceSpec::lorentz_karamata(p, tau, -theta), Operand::F),
                    norm(gl(p, tau, -theta), Operand::F),
                ));
            }
        }
    }
    spec(
        "lemma23_chain",
        "L_{p,τ,θ} ↪ GL^θ_{p,τ} ↪ L^{p),τ,θ} and GL^{-θ}_{p,τ} ↪ L_{p,τ,-θ}",
        Roles::F,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn lemma23_equivalence() -> InequalitySpec {
    let inf = f64::INFINITY;
    let mut cases = Vec::new();
    for p in [1.0, 2.0, 4.0] {
        for theta in [0.5, 1.0, 2.0] {
            let tag = format!("p={p},theta={theta}");
            let g = norm(gl(p, inf, theta), Operand::F);
            let a = norm(SpaceSpec::afh(p, inf, theta), Operand::F);
            let k = norm(SpaceSpec::lorentz_karamata(p, inf, theta), Operand::F);
            cases.push(Case::new(format!("gl/afh:{tag}"), g.clone(), a.clone()).bracketed(0.1, 10.0));
            cases.push(Case::new(format!("gl/lk:{tag}"), g, k.clone()).bracketed(0.1, 10.0));
            cases.push(Case::new(format!("afh/lk:{tag}"), a, k).bracketed(0.1, 10.0));
        }
    }
    let mut s = spec(
        "lemma23_equivalence",
        "GL^θ_{p,∞}, L^{p),∞,θ} and L_{p,∞,θ} agree within a factor 10",
        Roles::F,
        ThresholdMode::Bracket { slack: 0.0 },
        cases,
    );
    s.stability_tol = Some(0.05);
    s
}

fn grand_lebesgue_sandwich() -> InequalitySpec {
    let delta = 0.5;
    let mut cases = Vec::new();
    for p in [2.0, 3.0] {
        for theta in [0.5, 1.0] {
            let tag = format!("p={p},theta={theta}");
            let eps = norm(SpaceSpec::grand_lebesgue(p, theta, GrandLebesgueForm::EpsilonSup), Operand::F);
            cases.push(Case::new(format!("left:{tag}"), eps.clone(), norm(gl(p + delta, p, theta), Operand::F)));
            cases.push(Case::new(format!("right:{tag}"), norm(gl(p, p, theta), Operand::F), eps.clone()));
            cases.push(Case::new(format!("another:{tag}"), eps, norm(gl(p, p - delta, theta), Operand::F)));
        }
    }
    spec(
        "grand_lebesgue_sandwich",
        "GL^θ_{p+δ,p} ↪ L^{p),θ} ↪ GL^θ_{p,p} and GL^θ_{p,p-δ} ↪ L^{p),θ}, δ = 1/2",
        Roles::F,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn young_classical() -> InequalitySpec {
    let cases = young_tuples()
        .into_iter()
        .map(|(ip, ir, iq)| {
            let (p, r, q) = (exp(ip), exp(ir), exp(iq));
            Case::new(
                format!("p={p},r={r},q={q}"),
                norm(SpaceSpec::lorentz(q, q), Operand::Conv),
                norm(SpaceSpec::lorentz(p, p), Operand::F).times(norm(SpaceSpec::lorentz(r, r), Operand::G)),
            )
        })
        .collect();
    spec(
        "young_classical",
        "‖f∗g‖_{L_q} ≤ ‖f‖_{L_p} ‖g‖_{L_r}, 1 + 1/q = 1/p + 1/r",
        Roles::FG,
        ThresholdMode::ExactWithSlack(0.02),
        cases,
    )
}

fn oneil_classical() -> InequalitySpec {
    let mut cases = Vec::new();
    for (ip, ir, iq) in oneil_tuples() {
        for (is1, is2) in [(fr(1, 2), fr(1, 2)), (fr(0, 1), fr(1, 2)), (one(), fr(0, 1))] {
            let (p, r, q, s1, s2, s) = (exp(ip), exp(ir), exp(iq), exp(is1), exp(is2), exp(is1 + is2));
            cases.push(Case::new(
                format!("p={p},r={r},q={q},s1={},s2={}", fmt_p(s1), fmt_p(s2)),
                norm(SpaceSpec::lorentz(q, s), Operand::Conv),
                Expr::Const(d_pqr(ip, ir))
                    .times(norm(SpaceSpec::lorentz(p, s1), Operand::F))
                    .times(norm(SpaceSpec::lorentz(r, s2), Operand::G)),
            ));
        }
    }
    spec(
        "oneil_classical",
        "‖f∗g‖_{L_{q,s}} ≲ d_{p,q,r} ‖f‖_{L_{p,s1}} ‖g‖_{L_{r,s2}}, 1/s = 1/s1 + 1/s2",
        Roles::FG,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn oneil_proto() -> InequalitySpec {
    let inf = f64::INFINITY;
    let mut cases = Vec::new();
    for (ip, iq, ir) in proto_tuples() {
        let (p, q, r, d) = (exp(ip), exp(iq), exp(ir), d_pqr(ip, ir));
        for tau in [1.0, 2.0] {
            for theta in [0.5, 1.0] {
                let tag = format!("p={p},q={q},tau={tau},theta={theta}");
                let lhs = norm(SpaceSpec::lorentz(q, tau), Operand::Conv);
                cases.push(Case::new(
                    format!("conv1:{tag}"),
                    lhs.clone(),
                    Expr::Const(d).times(norm(gl(p, tau, -theta), Operand::F)).times(norm(gl(r, inf, theta), Operand::G)),
                ));
                cases.push(Case::new(
                    format!("conv2:{tag}"),
                    lhs,
                    Expr::Const(d).times(norm(gl(p, tau, theta), Operand::F)).times(norm(gl(r, inf, -theta), Operand::G)),
                ));
            }
        }
    }
    spec(
        "oneil_proto",
        "‖f∗g‖_{L_{q,τ}} ≲ d_{p,q,r} ‖f‖_{GL^{∓θ}_{p,τ}} ‖g‖_{GL^{±θ}_{r,∞}}",
        Roles::FG,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn oneil_grand() -> InequalitySpec {
    let inf = f64::INFINITY;
    let tau = 2.0;
    let mut cases = Vec::new();
    for (ip, iq, ir) in proto_tuples() {
        let (p, q, r) = (exp(ip), exp(iq), exp(ir));
        for (t0, t1) in [(fr(1, 2), one()), (one(), fr(1, 2))] {
            let (th0, th1) = (val(t0), val(t1));
            let tag = format!("p={p},q={q},theta0={th0},theta1={th1}");
            let sum = val(t1 + t0);
            cases.push(Case::new(
                format!("2.12:{tag}"),
                norm(gl(q, tau, th1), Operand::Conv),
                norm(gl(p, tau, -th0), Operand::F).times(norm(gl(r, inf, sum), Operand::G)),
            ));
            cases.push(Case::new(
                format!("2.13:{tag}"),
                norm(gl(q, tau, -th1), Operand::Conv),
                norm(gl(p, tau, th0), Operand::F).times(norm(gl(r, inf, -sum), Operand::G)),
            ));
            let diff = t1 - t0;
            if diff > fr(0, 1) {
                let diff = val(diff);
                cases.push(Case::new(
                    format!("2.14:{tag}"),
                    norm(gl(q, tau, th1), Operand::Conv),
                    norm(gl(p, tau, th0), Operand::F).times(norm(gl(r, inf, diff), Operand::G)),
                ));
                cases.push(Case::new(
                    format!("2.15:{tag}"),
                    norm(gl(q, tau, -th1), Operand::Conv),
                    norm(gl(p, tau, -th0), Operand::F).times(norm(gl(r, inf, diff), Operand::G)),
                ));
            }
        }
    }
    spec(
        "oneil_grand",
        "O'Neil-type bounds for f∗g in GL^{±θ1}_{q,τ}, θ = θ1 + θ0 and θ = θ1 - θ0 regimes",
        Roles::FG,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn young_grand() -> InequalitySpec {
    let mut cases = Vec::new();
    let zero = fr(0, 1);

    // Interpolated Young/O'Neil: 1 + 1/η = 1/η1 + 1/η2 + θ̄.
    for (ip, ir, iq) in oneil_tuples().into_iter().take(1) {
        let (p, r, q) = (exp(ip), exp(ir), exp(iq));
        for (ie1, ie2, tb) in [(one(), one(), one()), (fr(1, 2), fr(1, 2), fr(1, 2)), (one(), fr(1, 2), fr(1, 2))] {
            let ie = ie1 + ie2 + tb - one();
            if ie < zero || one() + ie != ie1 + ie2 + tb {
                continue;
            }
            cases.push(Case::new(
                format!("3.2:p={p},r={r},q={q},eta1={},eta2={},bar={}", exp(ie1), exp(ie2), val(tb)),
                norm(SpaceSpec::lorentz(q, exp(ie)), Operand::Conv),
                Expr::Const(d_pqr(ip, ir).powf(val(tb)))
                    .times(norm(SpaceSpec::lorentz(p, exp(ie1)), Operand::F))
                    .times(norm(SpaceSpec::lorentz(r, exp(ie2)), Operand::G)),
            ));
        }
    }

    // 1 + 1/τ1 = 1/τ0 + 1/τ + θ̄.
    for (ip, iq, ir) in proto_tuples().into_iter().take(1) {
        let (p, q, r) = (exp(ip), exp(iq), exp(ir));
        for (it0, it, tb) in [(fr(1, 2), fr(1, 2), fr(1, 2)), (one(), fr(1, 2), fr(1, 2))] {
            let it1 = it0 + it + tb - one();
            if it1 < zero || one() + it1 != it0 + it + tb {
                continue;
            }
            let d = d_pqr(ip, ir).powf(val(tb));
            let (t0, t, t1) = (exp(it0), exp(it), exp(it1));
            for theta in [0.5, 1.0] {
                let tag = format!("p={p},q={q},tau0={t0},tau={t},tau1={},theta={theta}", fmt_p(t1));
                let lhs = norm(SpaceSpec::lorentz(q, t1), Operand::Conv);
                cases.push(Case::new(
                    format!("3.3:{tag}"),
                    lhs.clone(),
                    Expr::Const(d).times(norm(gl(p, t0, -theta), Operand::F)).times(norm(gl(r, t, theta), Operand::G)),
                ));
                cases.push(Case::new(
                    format!("3.4:{tag}"),
                    lhs,
                    Expr::Const(d).times(norm(gl(p, t0, theta), Operand::F)).times(norm(gl(r, t, -theta), Operand::G)),
                ));
            }
        }
    }

    // 1 + 1/τ1 + θ1 = 1/τ0 - θ0 + 1/τ + θ.
    for p in [2.0, 3.0] {
        for (it0, it, it1, th0, th1) in [
            (one(), one(), fr(1, 2), fr(1, 2), one()),
            (fr(1, 2), fr(1, 2), one(), one(), fr(1, 2)),
        ] {
            let theta = one() + it1 + th1 - it0 + th0 - it;
            if theta <= zero || one() + it1 + th1 != it0 - th0 + it + theta {
                continue;
            }
            cases.push(Case::new(
                format!("3.5:p={p},tau0={},tau={},tau1={},theta0={},theta1={}", exp(it0), exp(it), exp(it1), val(th0), val(th1)),
                norm(gl(p, exp(it1), -val(th1)), Operand::Conv),
                norm(gl(p, exp(it0), val(th0)), Operand::F).times(norm(gl(1.0, exp(it), -val(theta)), Operand::G)),
            ));
        }
    }

    // 1 + 1/τ1 - θ1 = 1/τ0 - θ0 + 1/τ - θ.
    for p in [2.0, 3.0] {
        for (it0, it, it1, th0, th1) in [
            (one(), one(), one(), fr(1, 2), one()),
            (one(), fr(1, 2), fr(1, 2), one(), fr(2, 1)),
        ] {
            let theta = it0 - th0 + it - one() - it1 + th1;
            if theta <= zero || one() + it1 - th1 != it0 - th0 + it - theta {
                continue;
            }
            cases.push(Case::new(
                format!("3.6:p={p},tau0={},tau={},tau1={},theta0={},theta1={}", exp(it0), exp(it), exp(it1), val(th0), val(th1)),
                norm(gl(f64::INFINITY, exp(it1), val(th1)), Operand::Conv),
                norm(gl(p, exp(it0), val(th0)), Operand::F)
                    .times(norm(gl(conjugate(p), exp(it), val(theta)), Operand::G)),
            ));
        }
    }
    spec(
        "young_grand",
        "Young-type inequalities in limiting cases, exponents tied by the stated balance equations",
        Roles::FG,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn hls() -> InequalitySpec {
    let (ip, iq) = (fr(1, 2), fr(1, 4));
    let alpha = val(ip - iq);
    let (p, q, tau) = (exp(ip), exp(iq), 2.0);
    let mut cases = Vec::new();
    for (t0, t1) in [(fr(0, 1), fr(0, 1)), (fr(0, 1), one()), (fr(1, 2), fr(3, 2))] {
        let theta = val(t1 - t0);
        let k = KernelSpec { alpha, theta };
        let space = |t: Frac, p: f64| if t == fr(0, 1) { SpaceSpec::lorentz(p, tau) } else { gl(p, tau, val(t)) };
        cases.push(Case::new(
            format!("alpha={alpha},theta0={},theta1={}", val(t0), val(t1)),
            norm(space(t1, q), Operand::riesz(k)),
            norm(space(t0, p), Operand::F),
        ));
    }
    spec(
        "hls",
        "I_{α,θ}: GL^{θ0}_{p,τ} → GL^{θ1}_{q,τ}, α = 1/p - 1/q, θ = θ1 - θ0",
        Roles::F,
        ThresholdMode::RecordedConstant,
        cases,
    )
}

fn duality_upper() -> InequalitySpec {
    let cases = [(2.0, 1.0, 1.0), (2.0, 2.0, 0.5), (3.0, 2.0, 1.0)]
        .into_iter()
        .map(|(p, q, theta)| {
            Case::new(
                format!("p={p},q={q},theta={theta}"),
                Expr::Apply(Functional::DualLower { p, q, theta }, Operand::F),
                norm(gl(p, q, theta), Operand::F),
            )
        })
        .collect();
    spec(
        "duality_upper",
        "sup_g ∫ f* g* / ‖g‖_{GL^{-θ}_{p',q'}} ≤ ‖f‖_{GL^θ_{p,q}} over extremal and corpus candidates",
        Roles::F,
        ThresholdMode::ExactWithSlack(0.01),
        cases,
    )
}

fn gl_equals_grand_lebesgue() -> InequalitySpec {
    gl_equals_grand_lebesgue_for(&[2.0, 3.0])
}

/// The GL_p^θ / L^{p),θ} bracket over the given exponents.
pub fn gl_equals_grand_lebesgue_for(ps: &[f64]) -> InequalitySpec {
    let mut cases = Vec::new();
    for &p in ps {
        for theta in [0.5, 1.0] {
            let lo = p.powf(-2.0 * theta);
            let hi = (2.0 / (p * p)).powf(theta);
            cases.push(
                Case::new(
                    format!("p={p},theta={theta}"),
                    norm(SpaceSpec::grand_lebesgue(p, theta, GrandLebesgueForm::GlpTheta), Operand::F),
                    norm(SpaceSpec::grand_lebesgue(p, theta, GrandLebesgueForm::EpsilonSup), Operand::F),
                )
                .bracketed(lo, hi),
            );
        }
    }
    spec(
        "gl_equals_grand_lebesgue",
        "p^{-2θ} ≤ GL_p^θ / L^{p),θ} ≤ (2/p²)^θ; the upper constant needs p ≥ 2",
        Roles::F,
        ThresholdMode::Bracket { slack: 0.05 },
        cases,
    )
}
