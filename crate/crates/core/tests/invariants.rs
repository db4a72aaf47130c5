use gll_core::formats::{
    rearrangement_from_csv, rearrangement_to_csv, step_function_from_csv, step_function_to_csv, sweep_from_csv,
    sweep_to_csv, SweepRow,
};
use gll_core::norms::{grand_lorentz_norm, grand_lorentz_norm_cutoff, lorentz_norm};
use gll_core::quad::{epsilon_nodes, epsilon_optimize, EpsilonProblem, Mode};
use gll_core::rearrange::{analytic_rearrangement, decreasing_rearrangement};
use gll_core::verify::{
    builtin_suites, duality_check, extremal_candidates, generate_corpus, run_inequality, CorpusSpec,
    RunOptions,
};
use gll_core::{Descriptor, GeometricGrid, Rearrangement, StepFunction};
use proptest::prelude::*;

fn grid() -> GeometricGrid {
    GeometricGrid::new(24, 4).unwrap()
}

fn step() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec(0.01f64..100.0, 1..8).prop_map(|v| StepFunction::uniform(v).unwrap())
}

fn rearranged() -> impl Strategy<Value = Rearrangement> {
    step().prop_map(|f| decreasing_rearrangement(&f, grid()))
}

fn rel_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * b.abs().max(1e-300)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

fn norms(f: &Rearrangement, p: f64, q: f64, theta: f64) -> [f64; 3] {
    [
        lorentz_norm(f, p, q).unwrap().value,
        grand_lorentz_norm(f, p, q, theta).unwrap().value,
        grand_lorentz_norm(f, p, q, -theta).unwrap().value,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norms_are_homogeneous(f in rearranged(), c in 0.01f64..100.0, p in 1.0f64..4.0, q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), theta in 0.25f64..2.0) {
        let g = f.scaled(c).unwrap();
        for (a, b) in norms(&f, p, q, theta).iter().zip(norms(&g, p, q, theta)) {
            prop_assert!(close(c * a, b, 1e-9), "{a} * {c} vs {b}");
        }
    }

    #[test]
    fn norms_follow_pointwise_order(f in rearranged(), h in rearranged(), p in 1.0f64..4.0, q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), theta in 0.25f64..2.0) {
        let sum: Vec<f64> = f.samples().iter().zip(h.samples()).map(|(a, b)| a + b).collect();
        let g = Rearrangement::from_samples(grid(), sum, Descriptor::Numeric).unwrap();
        for (a, b) in norms(&f, p, q, theta).iter().zip(norms(&g, p, q, theta)) {
            prop_assert!(rel_le(*a, b, 1e-9), "{a} > {b}");
        }
    }

    #[test]
    fn larger_theta_gives_smaller_grand_norm(f in rearranged(), p in 1.0f64..4.0, q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), theta in 0.0f64..2.0, extra in 0.0f64..2.0) {
        let small = grand_lorentz_norm(&f, p, q, theta + extra).unwrap().value;
        let large = grand_lorentz_norm(&f, p, q, theta).unwrap().value;
        prop_assert!(rel_le(small, large, 1e-9), "{small} > {large}");
    }

    #[test]
    fn grand_and_small_nest_around_lorentz(f in rearranged(), p in 1.0f64..4.0, q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]), theta in 0.25f64..2.0) {
        let [lorentz, grand, small] = norms(&f, p, q, theta);
        prop_assert!(rel_le(grand, lorentz, 1e-9), "{grand} > {lorentz}");
        prop_assert!(rel_le(lorentz, small, 1e-9), "{lorentz} > {small}");
    }

    #[test]
    fn halving_the_range_costs_at_most_two_to_theta(f in rearranged(), p in 1.0f64..4.0, theta in 0.25f64..2.0) {
        let full = grand_lorentz_norm(&f, p, 2.0, theta).unwrap().value;
        let half = grand_lorentz_norm_cutoff(&f, p, 2.0, theta, Some(0.5)).unwrap().value;
        prop_assert!(rel_le(half, full, 1e-12));
        prop_assert!(rel_le(full, 2f64.powf(theta) * half, 1e-9), "{full} vs {half}");
    }

    #[test]
    fn optimizer_dominates_its_nodes(w in 0.5f64..40.0, phase in 0.0f64..6.0, c in 0.0f64..3.0, k in 0.1f64..3.0, eps_max in 0.1f64..2.0) {
        let objective = |e: f64| Some((w * e + phase).sin().abs() + c * e.powf(k));
        for mode in [Mode::Sup, Mode::Inf] {
            let opt = epsilon_optimize(&EpsilonProblem { mode, eps_max, objective: &objective }).unwrap();
            for x in epsilon_nodes(eps_max) {
                let v = objective(x).unwrap();
                match mode {
                    Mode::Sup => prop_assert!(opt.value >= v),
                    Mode::Inf => prop_assert!(opt.value <= v),
                }
            }
        }
    }

    #[test]
    fn duality_never_beats_the_direct_norm(s in 2.5f64..12.0, beta in -0.5f64..2.0, g in step(), p in 1.5f64..3.0, q in prop::sample::select(vec![1.0, 2.0, 4.0]), theta in 0.25f64..1.5) {
        let grid = GeometricGrid::default();
        let f = analytic_rearrangement(Descriptor::PowerLog { p: s.max(p + 0.25), beta }, grid).unwrap();
        let eps = grand_lorentz_norm(&f, p, q, theta).unwrap().eps_star;
        let mut cands = extremal_candidates(&f, p, q, theta, &eps.into_iter().collect::<Vec<_>>());
        cands.push(decreasing_rearrangement(&g, grid));
        let out = duality_check(&f, p, q, theta, &cands).unwrap();
        prop_assert!(out.upper_ok, "{out:?}");
    }

    #[test]
    fn step_csv_round_trips(f in step()) {
        let back = step_function_from_csv(&step_function_to_csv(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rearrangement_csv_round_trips(f in rearranged()) {
        let back = rearrangement_from_csv(&rearrangement_to_csv(&f).unwrap()).unwrap();
        prop_assert_eq!(back.samples(), f.samples());
        prop_assert_eq!(back.grid(), f.grid());
    }

    #[test]
    // Surrounding whitespace in a field is not significant.
    fn sweep_csv_round_trips(rows in prop::collection::vec((1usize..1 << 20, prop::num::f64::POSITIVE | prop::num::f64::ZERO, "[a-z0-9|,\" -]{0,12}"), 0..6)) {
        let rows: Vec<SweepRow> = rows.into_iter().map(|(n_cells, max_ratio, argmax)| SweepRow { n_cells, max_ratio, argmax: argmax.trim().to_string() }).collect();
        let back = sweep_from_csv(&sweep_to_csv(&rows).unwrap()).unwrap();
        prop_assert_eq!(back, rows);
    }
}

#[test]
fn reports_are_deterministic() {
    let spec = CorpusSpec::with_counts(7, CorpusSpec::default().counts.scaled_to(12));
    let corpus = generate_corpus(&spec).unwrap();
    let suite = builtin_suites().into_iter().find(|s| s.name == "nesting").unwrap();
    let opts = RunOptions { stability: false, ..RunOptions::default() };
    let a = run_inequality(&suite, &corpus, &opts).unwrap();
    let b = run_inequality(&suite, &generate_corpus(&spec).unwrap(), &opts).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
