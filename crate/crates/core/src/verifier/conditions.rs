use super::{Axiom, AxiomResult, Location, Tally, VerifyConfig};
use crate::fields::Field;
use crate::grid::{linspace, map_indices};

const GOLDEN_ITERATIONS: usize = 60;

/// `φᵗ − ¼φ_s² + γ²·1_{t>0}` at every grid node. Also returns `max |φ|`.
pub fn check_condition_a(field: &dyn Field, config: &VerifyConfig) -> (AxiomResult, f64) {
    let s_grid = config.spatial_grid(field);
    let t_grid = config.t_grid(field);
    let gamma2 = field.constants().gamma.powi(2);
    let tol = config.tol_a;
    let partial = map_indices(s_grid.len(), |i| {
        let s = s_grid[i];
        let mut tally = Tally::new(Axiom::ConditionA, config.max_violations, true);
        let mut max_abs: f64 = 0.0;
        for &t in &t_grid {
            let p = field.eval(s, t);
            let volume = if t > 0.0 { gamma2 } else { 0.0 };
            let residual = p.phi_t - 0.25 * p.phi_s * p.phi_s + volume;
            max_abs = max_abs.max(p.phi_s.hypot(p.phi_t));
            tally.observe(residual);
            if !(residual >= -tol) {
                tally.violate("pointwise", Location::Node { s, t }, residual, tol);
            }
        }
        (tally, max_abs)
    });
    let mut total = Tally::new(Axiom::ConditionA, config.max_violations, true);
    let mut max_abs: f64 = 0.0;
    for (tally, m) in partial {
        total.merge(tally);
        max_abs = if m.is_nan() { m } else { max_abs.max(m) };
    }
    (total.finish(), max_abs)
}

/// Two-trace bound over all pairs of the enriched t-grid at each spatial
/// node, using the closed-form antiderivatives.
pub fn check_condition_b(field: &dyn Field, config: &VerifyConfig) -> AxiomResult {
    let s_grid = config.spatial_grid(field);
    let w = field.geometry().window;
    let pair_grid = linspace(w.t_min, w.t_max, config.pair_nodes);
    let beta = field.constants().beta;
    let tol = config.tol_b;
    let partial = map_indices(s_grid.len(), |i| {
        let s = s_grid[i];
        let mut ts = pair_grid.clone();
        ts.extend(field.t_breakpoints(s));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let psi: Vec<f64> = ts.iter().map(|&t| field.antiderivative(s, t)).collect();
        let mut tally = Tally::new(Axiom::ConditionB, config.max_violations, true);
        for j in 0..ts.len() {
            for k in j..ts.len() {
                let slack = beta * (ts[j] * ts[j] + ts[k] * ts[k]) - (psi[k] - psi[j]).abs();
                tally.observe(slack);
                if !(slack >= -tol) {
                    let location = Location::Pair {
                        s,
                        lower: ts[j],
                        upper: ts[k],
                    };
                    tally.violate("pair", location, slack, tol);
                }
            }
        }
        if ts.first() == Some(&0.0) {
            let base = psi[0];
            for k in 1..ts.len() {
                let slack = |t: f64| beta * t * t - (field.antiderivative(s, t) - base).abs();
                let (t, value) = golden_minimum(slack, ts[k - 1], ts[k]);
                tally.observe(value);
                if !(value >= -tol) {
                    let location = Location::Pair {
                        s,
                        lower: 0.0,
                        upper: t,
                    };
                    tally.violate("refined-from-zero", location, value, tol);
                }
            }
        }
        tally
    });
    let mut total = Tally::new(Axiom::ConditionB, config.max_violations, true);
    partial.into_iter().for_each(|t| total.merge(t));
    total.finish()
}

/// Golden-section search for the minimum of `f` on `[a, b]`; returns the
/// best point seen, endpoints included.
fn golden_minimum(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)].into_iter().fold(
        (a, f64::INFINITY),
        |acc, p| if p.1 < acc.1 { p } else { acc },
    );
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}
