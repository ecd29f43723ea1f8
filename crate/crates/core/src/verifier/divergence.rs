use super::{Axiom, AxiomResult, Location, Tally, VerifyConfig};
use crate::fields::{Field, Interface, InterfaceShape};
use crate::grid::{linspace, map_indices};

/// Relative offset used to evaluate both sides of a sphere.
const SPHERE_OFFSET: f64 = 1e-10;

/// Relative step of the central difference giving interface slopes.
const SLOPE_STEP: f64 = 1e-6;

/// Divergence inside regions, flux continuity across interfaces and
/// finiteness of the field, reported as one group.
pub fn check_divergence_and_flux(field: &dyn Field, config: &VerifyConfig) -> AxiomResult {
    let mut total = interior(field, config);
    for (index, interface) in field.interfaces().iter().enumerate() {
        total.merge(flux(field, index, interface, config));
    }
    total.finish()
}

fn divergence_at(field: &dyn Field, region: usize, s: f64, t: f64, h: f64) -> f64 {
    let geometry = field.geometry();
    let (east, _) = field.eval_region(region, s + h, t);
    let (west, _) = field.eval_region(region, s - h, t);
    let (_, north) = field.eval_region(region, s, t + h);
    let (_, south) = field.eval_region(region, s, t - h);
    let (centre, _) = field.eval_region(region, s, t);
    (east - west) / (2.0 * h)
        + geometry.coordinate.curvature(s) * centre
        + (north - south) / (2.0 * h)
}

/// Nodes whose `±2h` stencil stays inside the window and inside one region.
fn interior(field: &dyn Field, config: &VerifyConfig) -> Tally {
    let s_grid = config.spatial_grid(field);
    let t_grid = config.t_grid(field);
    let w = field.geometry().window;
    let h = config.fd_step;
    let reach = 2.0 * h;
    let partial = map_indices(s_grid.len(), |i| {
        let s = s_grid[i];
        let mut tally = Tally::new(Axiom::Divergence, config.max_violations, false);
        for &t in &t_grid {
            let sample = field.eval(s, t);
            if !(sample.phi_s.is_finite() && sample.phi_t.is_finite()) {
                tally.violate("bounded", Location::Node { s, t }, f64::INFINITY, 0.0);
                continue;
            }
            let inside = s - reach >= w.s_min
                && s + reach <= w.s_max
                && t - reach >= w.t_min
                && t + reach <= w.t_max;
            if !inside {
                continue;
            }
            let region = sample.region;
            let collar_clear = [-reach, 0.0, reach].iter().all(|&ds| {
                [-reach, 0.0, reach]
                    .iter()
                    .all(|&dt| field.region_of(s + ds, t + dt) == region)
            });
            if !collar_clear {
                continue;
            }
            // on failure, halve the step and Richardson-extrapolate the pair
            let mut step = h;
            let mut coarse = divergence_at(field, region, s, t, step);
            let mut residual = coarse.abs();
            for _ in 0..config.fd_refinements {
                if residual <= config.tol_div {
                    break;
                }
                step *= 0.5;
                let fine = divergence_at(field, region, s, t, step);
                residual = ((4.0 * fine - coarse) / 3.0).abs();
                coarse = fine;
            }
            tally.observe(residual);
            if !(residual <= config.tol_div) {
                tally.violate(
                    "divergence",
                    Location::Node { s, t },
                    residual,
                    config.tol_div,
                );
            }
        }
        tally
    });
    let mut total = Tally::new(Axiom::Divergence, config.max_violations, false);
    partial.into_iter().for_each(|t| total.merge(t));
    total
}

fn flux(field: &dyn Field, index: usize, interface: &Interface, config: &VerifyConfig) -> Tally {
    let mut tally = Tally::new(Axiom::Divergence, config.max_violations, false);
    let w = field.geometry().window;
    match interface.shape {
        InterfaceShape::Sphere { radius } => {
            let inner = radius * (1.0 - SPHERE_OFFSET);
            let outer = radius * (1.0 + SPHERE_OFFSET);
            for t in config.t_grid(field) {
                let jump = (field.eval(outer, t).phi_s - field.eval(inner, t).phi_s).abs();
                tally.observe(jump);
                if !(jump <= config.tol_flux) {
                    let location = Location::Interface {
                        label: interface.label.clone(),
                        s: radius,
                        t,
                    };
                    tally.violate("flux", location, jump, config.tol_flux);
                }
            }
        }
        InterfaceShape::Graph => {
            let (Some(lower), Some(upper)) = (interface.lower, interface.upper) else {
                return tally;
            };
            let lo = interface.span.0.max(w.s_min);
            let hi = interface.span.1.min(w.s_max);
            if hi <= lo {
                return tally;
            }
            let nodes = linspace(lo, hi, config.spatial_nodes + 2);
            for &s in &nodes[1..nodes.len() - 1] {
                let eps = SLOPE_STEP * s.abs().max(1.0);
                if s - eps < lo || s + eps > hi {
                    continue;
                }
                let g = field.interface_height(index, s);
                if !(g >= w.t_min && g <= w.t_max) {
                    continue;
                }
                let slope = (field.interface_height(index, s + eps)
                    - field.interface_height(index, s - eps))
                    / (2.0 * eps);
                let below = field.eval_region(lower, s, g);
                let above = field.eval_region(upper, s, g);
                let jump = ((above.0 - below.0) * -slope + (above.1 - below.1)).abs();
                tally.observe(jump);
                if !(jump <= config.tol_flux) {
                    let location = Location::Interface {
                        label: interface.label.clone(),
                        s,
                        t: g,
                    };
                    tally.violate("flux", location, jump, config.tol_flux);
                }
            }
        }
    }
    tally
}
