use super::{Axiom, AxiomResult, Location, Tally, VerifyConfig};
use crate::fields::{CalibratedGraph, Field};

/// Identities on the graph and at the jumps of each calibrated function.
/// A group with nothing to sample is reported as skipped.
pub fn check_graph_conditions(
    field: &dyn Field,
    graphs: &[CalibratedGraph],
    config: &VerifyConfig,
) -> (AxiomResult, AxiomResult) {
    let gamma2 = field.constants().gamma.powi(2);
    let beta = field.constants().beta;
    let window = field.geometry().window;
    let mut on_graph = Tally::new(Axiom::GraphA, config.max_violations, false);
    let mut at_jumps = Tally::new(Axiom::GraphB, config.max_violations, false);

    for graph in graphs {
        let lo = graph.span.0.max(window.s_min);
        let hi = graph.span.1.min(window.s_max);
        if hi < lo {
            continue;
        }
        // cell midpoints: the identities hold almost everywhere, and the
        // span ends may sit on corners of the field
        let samples = config.graph_samples;
        for s in (0..samples).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / samples as f64) {
            let t = graph.value(s);
            let du = graph.gradient(s);
            let p = field.eval(s, t);
            let volume = if t > 0.0 { gamma2 } else { 0.0 };
            let dev_s = (p.phi_s - 2.0 * du).abs();
            let dev_t = (p.phi_t - (du * du - volume)).abs();
            let dev = if dev_s.is_nan() || dev_t.is_nan() {
                f64::NAN
            } else {
                dev_s.max(dev_t)
            };
            on_graph.observe(dev);
            if !(dev <= config.tol_graph) {
                on_graph.violate("graph", Location::Graph { s, t }, dev, config.tol_graph);
            }
        }
        for jump in &graph.jumps {
            let s = jump.position;
            let flux = field.antiderivative(s, jump.upper) - field.antiderivative(s, jump.lower);
            let expected = beta * (jump.lower.powi(2) + jump.upper.powi(2)) * jump.normal;
            let dev = (flux - expected).abs();
            at_jumps.observe(dev);
            if !(dev <= config.tol_graph) {
                let location = Location::Pair {
                    s,
                    lower: jump.lower,
                    upper: jump.upper,
                };
                at_jumps.violate("jump", location, dev, config.tol_graph);
            }
        }
    }
    let finish = |tally: Tally, axiom| {
        let result = tally.finish();
        if result.checked == 0 {
            AxiomResult::skipped(axiom)
        } else {
            result
        }
    };
    (
        finish(on_graph, Axiom::GraphA),
        finish(at_jumps, Axiom::GraphB),
    )
}
