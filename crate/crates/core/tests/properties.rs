use proptest::prelude::*;

use calx::energy::{energy_1d, AffinePiece, Competitor1D, RadialProfile, ThermalParams};
use calx::fields::{
    build_field_1d, build_field_ball_harmonic, build_field_harmonic, build_field_indicator_const,
    build_field_indicator_two_piece, choose_lambda, euler_lagrange_gamma, BallHarmonicOptions,
    CalibratedGraph, Field, HarmonicProfile, JumpPoint, PiecewiseField,
};
use calx::oracle::{best_with_jump_slots, oracle_1d_best, oracle_radial_sweep};
use calx::potentials::{
    critical_bracket, flux_interface, potential, potential_bounds, potential_derivative,
    robin_profile, robin_trace, scaling_identity,
};
use calx::verifier::quadrature::integrate_fiber;
use calx::verifier::{verify_all, verify_with_graphs, Axiom, Status};
use calx::{CalxError, Dimension, VerifyConfig};

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn thermal(n: u32, beta: f64, gamma: f64) -> ThermalParams {
    ThermalParams::new(dim(n), beta, gamma).unwrap()
}

/// A coarse grid keeps the verifier affordable inside property loops.
fn coarse() -> VerifyConfig {
    VerifyConfig {
        spatial_nodes: 24,
        t_nodes: 25,
        pair_nodes: 24,
        graph_samples: 100,
        ..VerifyConfig::default()
    }
}

/// One field of every construction, with parameters inside its hypotheses.
fn any_field() -> impl Strategy<Value = PiecewiseField> {
    prop_oneof![
        (0.5..0.9f64, 0.0..1.0f64, 2.0..5.0f64).prop_filter_map(
            "criterion holds",
            |(m, frac, beta)| {
                let big_m = m + (1.0 - m) * frac.max(0.05);
                build_field_1d(m, big_m, beta).ok().map(Into::into)
            }
        ),
        (2u32..=3, 1.0..3.0f64, 1.2..3.0f64, 2.0..6.0f64).prop_filter_map(
            "criterion holds",
            |(n, robin_beta, big_r, beta)| {
                let profile = HarmonicProfile::robin(dim(n), robin_beta, big_r).ok()?;
                build_field_harmonic(profile, beta).ok().map(Into::into)
            }
        ),
        (1u32..=4, 0.1..1.0f64, 0.0..1.0f64).prop_map(|(n, beta, extra)| {
            build_field_indicator_const(thermal(n, beta, beta + extra), None)
                .unwrap()
                .into()
        }),
        (1u32..=3, 0.3..2.0f64, 0.3..2.0f64).prop_filter_map(
            "bracket bounded by gamma",
            |(n, beta, gamma)| {
                build_field_indicator_two_piece(thermal(n, beta, gamma), None)
                    .ok()
                    .map(Into::into)
            }
        ),
        (1u32..=3, 0.0..2.0f64, 1.05..3.0f64).prop_map(|(n, extra, big_r)| {
            let beta = n as f64 - 0.5 + extra;
            let gamma = euler_lagrange_gamma(dim(n), beta, big_r).unwrap();
            build_field_ball_harmonic(
                thermal(n, beta, gamma),
                big_r,
                BallHarmonicOptions::default(),
            )
            .unwrap()
        }),
    ]
}

fn competitor() -> impl Strategy<Value = Competitor1D> {
    (1usize..5, any::<u64>()).prop_flat_map(|(pieces, _)| {
        (
            prop::collection::vec(0.01..1.0f64, pieces),
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), pieces),
            -1.0..1.0f64,
            -1.0..1.0f64,
        )
            .prop_map(|(lengths, values, m, big_m)| {
                let mut knots = vec![0.0];
                for l in lengths {
                    knots.push(knots.last().unwrap() + l);
                }
                let pieces = values
                    .into_iter()
                    .map(|(start, end)| AffinePiece { start, end })
                    .collect();
                Competitor1D::new(m, big_m, knots, pieces).unwrap()
            })
    })
}

fn jump_identity(field: &dyn Field, jump: &JumpPoint) -> (f64, f64) {
    let beta = field.constants().beta;
    let flux = field.antiderivative(jump.position, jump.upper)
        - field.antiderivative(jump.position, jump.lower);
    (
        flux,
        beta * (jump.lower.powi(2) + jump.upper.powi(2)) * jump.normal,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn potential_slope_matches_finite_difference(n in 1u32..=5, r in 1.01..10.0f64) {
        let n = dim(n);
        let h = 1e-5 * r;
        let fd = (potential(n, r + h).unwrap() - potential(n, r - h).unwrap()) / (2.0 * h);
        let exact = potential_derivative(n, r);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact);
        prop_assert_eq!(potential(n, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn scaling_identity_holds(n in 1u32..=5, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (s, t) = (50f64.powf(a.min(b)), 50f64.powf(a.max(b)));
        let (lhs, rhs) = scaling_identity(dim(n), s, t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn robin_trace_is_a_decreasing_fraction(n in 1u32..=4, beta in 0.1..5.0f64, r in 1.0..20.0f64, dr in 1e-3..1.0f64) {
        let n = dim(n);
        let here = robin_trace(n, beta, r).unwrap();
        let there = robin_trace(n, beta, r + dr).unwrap();
        prop_assert!(here > 0.0 && here <= 1.0);
        prop_assert!(there < here);
    }

    #[test]
    fn scaled_trace_decreases_above_n_minus_one(n in 1u32..=4, extra in 0.0..3.0f64, r in 1.0..20.0f64, dr in 1e-3..1.0f64) {
        let k = n as i32 - 1;
        let beta = f64::from(k) + extra;
        prop_assume!(beta > 0.0);
        let n = dim(n);
        let at = |r: f64| r.powi(k) * robin_trace(n, beta, r).unwrap();
        prop_assert!(at(r + dr) <= at(r) * (1.0 + 1e-12));
    }

    #[test]
    fn bracket_does_not_increase_above_n_minus_half(n in 1u32..=4, extra in 0.0..3.0f64, r in 1.0..50.0f64) {
        let beta = n as f64 - 0.5 + extra;
        let n = dim(n);
        let step = 1e-3 * r;
        let (here, next) = (critical_bracket(n, beta, r), critical_bracket(n, beta, r + step));
        prop_assert!(next <= here + 1e-12 * here.abs().max(1e-300), "{here} -> {next}");
    }

    #[test]
    fn interface_curve_is_ordered_and_decreasing(n in 1u32..=4, extra in 0.0..3.0f64, big_r in 1.05..5.0f64) {
        let beta = n as f64 - 0.5 + extra;
        let n = dim(n);
        let delta = robin_trace(n, beta, big_r).unwrap();
        let mut previous = f64::INFINITY;
        for i in 0..1000 {
            let r = 1.0 + (big_r - 1.0) * i as f64 / 1000.0;
            let rho = flux_interface(n, beta, big_r, r).unwrap();
            let u = robin_profile(n, beta, big_r, r).unwrap().value;
            prop_assert!(rho >= delta - 1e-12 && rho <= u + 1e-12, "r={r}: {delta} <= {rho} <= {u}");
            prop_assert!(rho <= previous + 1e-12);
            previous = rho;
        }
    }

    #[test]
    fn potential_bounds_hold(n in 2u32..=6, a in 1e-6..1.0f64) {
        let t = 1.0 + (100f64.powf(a) - 1.0).max(1e-9);
        let b = potential_bounds(dim(n), t, 1e-10).unwrap();
        prop_assert!(b.all_ok(), "{b:?}");
    }

    #[test]
    fn optimal_energy_minimises_over_traces(n in 1u32..=3, beta in 0.5..5.0f64, gamma in 0.1..2.0f64, big_r in 1.1..5.0f64) {
        let p = thermal(n, beta, gamma);
        let grid = 10_000;
        let (best_trace, best) = (1..=grid)
            .map(|i| {
                let d = i as f64 / grid as f64;
                (d, RadialProfile::new(p, big_r, d).unwrap().energy().total)
            })
            .fold((0.0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
        let optimal = p.optimal_energy(big_r).unwrap();
        prop_assert!((best_trace - robin_trace(p.n, beta, big_r).unwrap()).abs() <= 1.0 / grid as f64);
        prop_assert!((best - optimal).abs() <= 1e-6 * optimal);
        prop_assert!(best >= optimal * (1.0 - 1e-14));
    }

    #[test]
    fn energy_derivative_matches_finite_difference(n in 1u32..=4, beta in 0.5..5.0f64, gamma in 0.1..2.0f64, big_r in 1.05..8.0f64) {
        let p = thermal(n, beta, gamma);
        let h = 1e-3;
        let e = |r: f64| p.optimal_energy(r).unwrap();
        let fd = (e(big_r - 2.0 * h) - 8.0 * e(big_r - h) + 8.0 * e(big_r + h) - e(big_r + 2.0 * h)) / (12.0 * h);
        let exact = p.energy_derivative(big_r).unwrap();
        prop_assume!(exact.abs() > 1e-3);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs(), "{fd} vs {exact}");
    }

    #[test]
    fn energy_1d_ignores_refinement(c in competitor(), beta in 0.0..5.0f64, at in 0.01..0.99f64) {
        let (a, b) = c.interval();
        let x = a + (b - a) * at;
        prop_assume!(!c.knots().contains(&x));
        let before = energy_1d(&c, beta).unwrap().total;
        let after = energy_1d(&c.refined(x).unwrap(), beta).unwrap().total;
        prop_assert!((before - after).abs() <= 1e-12 * before.max(1.0));
    }

    #[test]
    fn energy_1d_scales_quadratically(c in competitor(), beta in 0.0..5.0f64, factor in 0.01..10.0f64) {
        let base = energy_1d(&c, beta).unwrap().total;
        let scaled = energy_1d(&c.scaled(factor), beta).unwrap().total;
        prop_assert!((scaled - factor * factor * base).abs() <= 1e-12 * scaled.max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antiderivative_vanishes_at_zero_and_is_continuous(field in any_field(), at in 0.0..1.0f64) {
        let w = field.geometry().window;
        let s = w.s_min + (w.s_max - w.s_min) * at;
        prop_assert_eq!(field.antiderivative(s, 0.0), 0.0);
        for b in field.t_breakpoints(s) {
            let eps = 1e-12;
            let jump = field.antiderivative(s, b + eps) - field.antiderivative(s, b - eps);
            prop_assert!(jump.abs() <= 1e-10, "{} at s={s}, t={b}: {jump}", field.kind());
        }
    }

    #[test]
    fn fields_match_gradient_on_their_graphs(field in any_field()) {
        let gamma2 = field.constants().gamma.powi(2);
        for graph in field.calibrated_graphs() {
            let (a, b) = graph.span;
            for i in 0..1000 {
                let s = a + (b - a) * (i as f64 + 0.5) / 1000.0;
                let (u, g) = (graph.value(s), graph.gradient(s));
                let p = field.eval(s, u);
                let volume = if u > 0.0 && u <= 1.0 { gamma2 } else { 0.0 };
                prop_assert!((p.phi_s - 2.0 * g).abs() <= 1e-9, "{} s={s}: {} vs {}", field.kind(), p.phi_s, 2.0 * g);
                prop_assert!((p.phi_t - (g * g - volume)).abs() <= 1e-9, "{} s={s}", field.kind());
            }
            for jump in &graph.jumps {
                let (flux, expected) = jump_identity(&field, jump);
                prop_assert!((flux - expected).abs() <= 1e-9, "{}: {flux} vs {expected}", field.kind());
            }
        }
    }

    #[test]
    fn antiderivative_agrees_with_quadrature(field in any_field(), at in 0.0..1.0f64, lo in 0.0..1.0f64, hi in 0.0..1.0f64) {
        let w = field.geometry().window;
        let s = w.s_min + (w.s_max - w.s_min) * at;
        let (t0, t1) = (w.t_max * lo, w.t_max * hi);
        let closed = field.antiderivative(s, t1) - field.antiderivative(s, t0);
        let quad = integrate_fiber(&field, s, t0, t1, 1e-12);
        prop_assert!((closed - quad).abs() <= 1e-9, "{} s={s} [{t0}, {t1}]: {closed} vs {quad}", field.kind());
    }

    #[test]
    fn built_fields_verify(field in any_field()) {
        let report = verify_all(&field, &coarse()).unwrap();
        prop_assert!(report.passed(), "{}\n{}", field.kind(), report.summary());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn one_jump_is_enough(m in 0.0..1.0f64, frac in 0.01..1.0f64, beta in 0.05..5.0f64) {
        let big_m = m + (1.0 - m) * frac;
        let resolution = 200;
        let single = oracle_1d_best(m, big_m, beta, 1, resolution).unwrap();
        let double = best_with_jump_slots(m, big_m, beta, 2, resolution).unwrap();
        prop_assert!(double.energy >= single.energy - 1e-3, "{} < {}", double.energy, single.energy);
        for r in [&single, &oracle_1d_best(m, big_m, beta, 2, resolution).unwrap()] {
            prop_assert!(r.competitor.jumps().iter().all(|j| j.position < 1.0), "{:?}", r.competitor);
        }
    }

    #[test]
    fn certified_affine_data_is_not_beaten(m in 0.0..1.0f64, frac in 0.0..1.0f64, beta in 0.05..8.0f64) {
        let big_m = m + (1.0 - m) * frac;
        let Ok(field) = build_field_1d(m, big_m, beta) else { return Ok(()) };
        prop_assume!(verify_all(&field, &coarse()).unwrap().passed());
        let best = oracle_1d_best(m, big_m, beta, 2, 200).unwrap();
        prop_assert!(best.energy >= (big_m - m).powi(2) - 1e-6);
    }

    #[test]
    fn failed_criterion_admits_a_cheaper_jump(m in 0.0..1.0f64, frac in 0.05..1.0f64, beta in 0.05..5.0f64) {
        let big_m = m + (1.0 - m) * frac;
        let violated = matches!(choose_lambda(m, big_m, beta), Err(CalxError::Hypothesis(_)));
        prop_assume!(violated);
        let best = oracle_1d_best(m, big_m, beta, 2, 1000).unwrap();
        prop_assert!(best.energy < (big_m - m).powi(2), "{} vs {}", best.energy, (big_m - m).powi(2));
        prop_assert!(best.jump_count >= 1);
    }
}

#[test]
fn verdict_is_stable_under_grid_doubling() {
    let fields: Vec<PiecewiseField> = vec![
        build_field_indicator_const(thermal(2, 0.3, 0.4), None)
            .unwrap()
            .into(),
        build_field_indicator_two_piece(thermal(2, 1.0, 0.4), None)
            .unwrap()
            .into(),
        build_field_1d(0.8, 1.0, 3.0).unwrap().into(),
    ];
    let base = VerifyConfig::default();
    let fine = VerifyConfig {
        spatial_nodes: 2 * base.spatial_nodes,
        t_nodes: 2 * base.t_nodes - 1,
        pair_nodes: 2 * base.pair_nodes,
        graph_samples: 2 * base.graph_samples,
        ..base
    };
    for field in &fields {
        let coarse = verify_all(field, &base).unwrap();
        let doubled = verify_all(field, &fine).unwrap();
        for axiom in Axiom::ALL {
            let (a, b) = (
                coarse.result(axiom).unwrap(),
                doubled.result(axiom).unwrap(),
            );
            assert_eq!(a.status, b.status, "{} {}", field.kind(), axiom.name());
        }
        assert!(coarse.passed() && doubled.passed());
    }
}

#[test]
fn equality_case_calibrates_affine_and_jump_minimisers() {
    let (m, big_m, beta) = (0.25, 1.0, 1.0);
    let field = build_field_1d(m, big_m, beta).unwrap();
    let affine = Competitor1D::affine(0.0, 1.0, m, big_m).unwrap();
    let jumped = Competitor1D::new(
        m,
        big_m,
        vec![0.0, 1.0],
        vec![AffinePiece {
            start: 0.5,
            end: 1.0,
        }],
    )
    .unwrap();
    let e_affine = energy_1d(&affine, beta).unwrap().total;
    let e_jump = energy_1d(&jumped, beta).unwrap().total;
    assert!((e_affine - e_jump).abs() < 1e-12, "{e_affine} vs {e_jump}");

    let graph = CalibratedGraph::new(
        "jump minimiser",
        (0.0, 1.0),
        |x| 0.5 + 0.5 * x,
        |_| 0.5,
        vec![JumpPoint {
            position: 0.0,
            lower: 0.25,
            upper: 0.5,
            normal: 1.0,
        }],
    );
    let report = verify_with_graphs(&field, &[graph], &VerifyConfig::default()).unwrap();
    assert!(
        report.passed(),
        "{}\n{:?}",
        report.summary(),
        report.result(Axiom::GraphA).unwrap().violations
    );
    assert_eq!(report.result(Axiom::GraphB).unwrap().status, Status::Pass);
    assert!(verify_all(&field, &VerifyConfig::default())
        .unwrap()
        .passed());
}

#[test]
fn certified_radial_candidates_are_not_beaten_by_the_sweep() {
    let radii: Vec<f64> = (1..=200).map(|i| 1.0 + 4.0 * i as f64 / 200.0).collect();
    let traces: Vec<f64> = (1..=200).map(|i| i as f64 / 200.0).collect();
    for (n, beta, gamma) in [(2, 0.3, 0.4), (3, 0.3, 0.4), (2, 1.0, 0.4), (1, 0.7, 0.8)] {
        let p = thermal(n, beta, gamma);
        let field = build_field_indicator_two_piece(p, None).unwrap();
        assert!(verify_all(&field, &coarse()).unwrap().passed());
        let sweep = oracle_radial_sweep(p, &radii, &traces).unwrap();
        assert!(sweep.best.energy.total >= p.indicator_energy() - 1e-6);
        assert!(sweep.indicator_wins());
    }
    let gamma = euler_lagrange_gamma(dim(1), 2.0, 2.5).unwrap();
    let p = thermal(1, 2.0, gamma);
    let sweep = oracle_radial_sweep(p, &radii, &traces).unwrap();
    assert!(sweep.best.energy.total >= p.optimal_energy(2.5).unwrap() - 1e-6);
}
