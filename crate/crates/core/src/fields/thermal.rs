//! Calibrations around the unit ball for the thermal insulation functional.
//!
//! All three fields are radial: `φ = (φ_s(r, t)·e_r, φᵗ(r, t))` on
//! `r ≥ 1`, `t ∈ [0, 1]`.

use serde::Serialize;

use super::{
    CalibratedGraph, Constants, Coordinate, Field, Geometry, Interface, JumpPoint, RegionInfo,
    Window,
};
use crate::energy::{ThermalParams, DEFAULT_SCAN_SAMPLES};
use crate::error::{domain, CalxError, Result};
use crate::potentials::{
    critical_bracket, flux_interface_unchecked, potential_unchecked, robin_trace_unchecked,
    Dimension,
};

/// Largest accepted `|γ² − (β² − β(n−1)/R)δ(R)²|` at the outer radius.
pub const EL_TOLERANCE: f64 = 1e-9;

const DEFAULT_INDICATOR_WINDOW: f64 = 3.0;

fn window(outer: f64) -> Window {
    Window {
        s_min: 1.0,
        s_max: outer,
        t_min: 0.0,
        t_max: 1.0,
    }
}

fn check_outer(outer: f64, at_least: f64) -> Result<()> {
    if !(outer.is_finite() && outer > at_least) {
        return domain(format!(
            "window must extend beyond r = {at_least}, got {outer}"
        ));
    }
    Ok(())
}

/// Indicator of `B₁`: zero for `r > 1`, jump `0 → 1` at `r = 1`.
fn indicator_graph() -> CalibratedGraph {
    CalibratedGraph::new(
        "indicator of the unit ball",
        (1.0, f64::INFINITY),
        |_| 0.0,
        |_| 0.0,
        vec![JumpPoint {
            position: 1.0,
            lower: 0.0,
            upper: 1.0,
            normal: -1.0,
        }],
    )
}

fn clip_span(graph: CalibratedGraph, outer: f64) -> CalibratedGraph {
    CalibratedGraph {
        span: (graph.span.0, graph.span.1.min(outer)),
        ..graph
    }
}

/// `φ = (−2βt·r^{1−n}, 0)`: the transport of `−2βt` along `x/|x|ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorConstField {
    params: ThermalParams,
    outer: f64,
}

/// Requires `β ≤ γ`. `outer` bounds the checked window; defaults to 3.
pub fn build_field_indicator_const(
    params: ThermalParams,
    outer: Option<f64>,
) -> Result<IndicatorConstField> {
    let outer = outer.unwrap_or(DEFAULT_INDICATOR_WINDOW);
    check_outer(outer, 1.0)?;
    if params.beta > params.gamma {
        return Err(CalxError::Hypothesis(format!(
            "constant-flux criterion needs beta <= gamma, got {} > {}",
            params.beta, params.gamma
        )));
    }
    Ok(IndicatorConstField { params, outer })
}

impl IndicatorConstField {
    pub fn n(&self) -> Dimension {
        self.params.n
    }
    pub fn beta(&self) -> f64 {
        self.params.beta
    }
    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }
    fn decay(&self, r: f64) -> f64 {
        r.powi(1 - self.params.n.get() as i32)
    }
}

impl Field for IndicatorConstField {
    fn geometry(&self) -> Geometry {
        Geometry {
            coordinate: Coordinate::Radial { n: self.params.n },
            window: window(self.outer),
        }
    }
    fn constants(&self) -> Constants {
        Constants {
            beta: self.params.beta,
            gamma: self.params.gamma,
        }
    }
    fn region_of(&self, _s: f64, _t: f64) -> usize {
        0
    }
    fn eval_region(&self, _region: usize, s: f64, t: f64) -> (f64, f64) {
        (-2.0 * self.params.beta * t * self.decay(s), 0.0)
    }
    fn antiderivative(&self, s: f64, t: f64) -> f64 {
        -self.params.beta * t * t * self.decay(s)
    }
    fn interfaces(&self) -> Vec<Interface> {
        Vec::new()
    }
    fn interface_height(&self, _index: usize, _s: f64) -> f64 {
        f64::NAN
    }
    fn regions(&self) -> Vec<RegionInfo> {
        vec![RegionInfo {
            id: 0,
            domain: "r >= 1, 0 <= t <= 1",
            phi_s: "-2 beta t r^(1-n)",
            phi_t: "0",
        }]
    }
    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        vec![clip_span(indicator_graph(), self.outer)]
    }
}

/// Largest value of `(β² − β(n−1)/r)δ(r)² − γ²` over `r ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPieceScan {
    pub holds: bool,
    /// `γ² − sup_r (β² − β(n−1)/r)δ(r)²`.
    pub margin: f64,
    /// Where the supremum is attained.
    pub worst_radius: f64,
}

/// Sufficient condition of the two-piece indicator calibration.
pub fn two_piece_hypothesis(params: ThermalParams) -> TwoPieceScan {
    let scan = params.bracket_supremum(DEFAULT_SCAN_SAMPLES);
    let margin = params.gamma * params.gamma - scan.sup;
    TwoPieceScan {
        holds: params.beta <= params.gamma || margin >= 0.0,
        margin,
        worst_radius: scan.radius,
    }
}

/// Two regions split by `t = δ(r)`; below it the field is `(−2βt,
/// βt²(n−1)/r)`, above it follows the Robin profile with outer radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPieceField {
    params: ThermalParams,
    outer: f64,
    scan: TwoPieceScan,
}

/// Fails with the offending radius when the sufficient condition does.
pub fn build_field_indicator_two_piece(
    params: ThermalParams,
    outer: Option<f64>,
) -> Result<TwoPieceField> {
    let outer = outer.unwrap_or(DEFAULT_INDICATOR_WINDOW);
    check_outer(outer, 1.0)?;
    let scan = two_piece_hypothesis(params);
    if !scan.holds {
        return Err(CalxError::Hypothesis(format!(
            "radial-bracket criterion violated at r = {:.6}: bracket exceeds gamma^2 by {:.6e}",
            scan.worst_radius, -scan.margin
        )));
    }
    Ok(TwoPieceField {
        params,
        outer,
        scan,
    })
}

/// Pieces shared by the two-piece field and the exterior of the ball field.
#[derive(Debug, Clone, Copy)]
struct ExteriorPieces {
    n: Dimension,
    beta: f64,
}

impl ExteriorPieces {
    fn delta(&self, r: f64) -> f64 {
        robin_trace_unchecked(self.n, self.beta, r)
    }

    /// `1/(r^{n−1}Γ(r)) = βδ/(1−δ)`.
    fn slope(&self, r: f64) -> f64 {
        1.0 / (r.powi(self.n.get() as i32 - 1) * potential_unchecked(self.n, r))
    }

    fn lower(&self, r: f64, t: f64) -> (f64, f64) {
        let bend = (self.n.as_f64() - 1.0) / r;
        (-2.0 * self.beta * t, self.beta * t * t * bend)
    }

    fn upper(&self, r: f64, t: f64) -> (f64, f64) {
        let c = self.slope(r);
        let bracket = critical_bracket(self.n, self.beta, r);
        let w = (1.0 - t) * c;
        (-2.0 * w, w * w - bracket)
    }

    fn antiderivative(&self, r: f64, t: f64) -> f64 {
        let delta = self.delta(r);
        if t <= delta {
            -self.beta * t * t
        } else {
            let c = self.slope(r);
            -self.beta * delta * delta - c * ((1.0 - delta).powi(2) - (1.0 - t).powi(2))
        }
    }
}

impl TwoPieceField {
    pub fn n(&self) -> Dimension {
        self.params.n
    }
    pub fn beta(&self) -> f64 {
        self.params.beta
    }
    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }
    pub fn scan(&self) -> TwoPieceScan {
        self.scan
    }
    fn pieces(&self) -> ExteriorPieces {
        ExteriorPieces {
            n: self.params.n,
            beta: self.params.beta,
        }
    }
}

impl Field for TwoPieceField {
    fn geometry(&self) -> Geometry {
        Geometry {
            coordinate: Coordinate::Radial { n: self.params.n },
            window: window(self.outer),
        }
    }
    fn constants(&self) -> Constants {
        Constants {
            beta: self.params.beta,
            gamma: self.params.gamma,
        }
    }
    fn region_of(&self, s: f64, t: f64) -> usize {
        usize::from(t > self.pieces().delta(s))
    }
    fn eval_region(&self, region: usize, s: f64, t: f64) -> (f64, f64) {
        let p = self.pieces();
        if region == 0 {
            p.lower(s, t)
        } else {
            p.upper(s, t)
        }
    }
    fn antiderivative(&self, s: f64, t: f64) -> f64 {
        self.pieces().antiderivative(s, t)
    }
    fn interfaces(&self) -> Vec<Interface> {
        vec![Interface::graph("t = delta(r)", (1.0, self.outer), 0, 1)]
    }
    fn interface_height(&self, index: usize, s: f64) -> f64 {
        if index == 0 {
            self.pieces().delta(s)
        } else {
            f64::NAN
        }
    }
    fn regions(&self) -> Vec<RegionInfo> {
        vec![
            RegionInfo {
                id: 0,
                domain: "t <= delta(r)",
                phi_s: "-2 beta t",
                phi_t: "beta t^2 (n-1)/r",
            },
            RegionInfo {
                id: 1,
                domain: "t > delta(r)",
                phi_s: "-2 (1-t) c(r), c = 1/(r^(n-1) Gamma(r))",
                phi_t: "(1-t)^2 c(r)^2 - (beta^2 - beta(n-1)/r) delta(r)^2",
            },
        ]
    }
    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        vec![clip_span(indicator_graph(), self.outer)]
    }
}

/// `γ` solving the Euler–Lagrange equation at radius `R`.
pub fn euler_lagrange_gamma(n: Dimension, beta: f64, big_r: f64) -> Result<f64> {
    if !(big_r.is_finite() && big_r >= 1.0) {
        return domain(format!("R must be ≥ 1, got {big_r}"));
    }
    let bracket = critical_bracket(n, beta, big_r);
    if bracket < 0.0 {
        return Err(CalxError::Hypothesis(format!(
            "no real gamma: radial bracket is negative ({bracket}) at R = {big_r}"
        )));
    }
    Ok(bracket.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallHarmonicOptions {
    /// Reject `β < n − ½`. Disabled only to observe what fails without it.
    pub enforce_beta_bound: bool,
    pub el_tolerance: f64,
    /// Outer edge of the checked window; defaults to `2R`.
    pub outer: Option<f64>,
}

impl Default for BallHarmonicOptions {
    fn default() -> Self {
        Self {
            enforce_beta_bound: true,
            el_tolerance: EL_TOLERANCE,
            outer: None,
        }
    }
}

/// Calibration of the Robin profile supported in `B_R`.
///
/// Inside (`r ≤ R`) four regions split by `t = δ(R)`, `t = ρ(r)` and the
/// graph `t = u(r)`; outside, the two pieces of [`TwoPieceField`] as
/// regions 4 and 5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallHarmonicField {
    params: ThermalParams,
    big_r: f64,
    delta_r: f64,
    /// `βδ(R)R^{n−1}`, so that `u = 1 − scale·Γ(r)`.
    scale: f64,
    el_residual: f64,
    outer: f64,
}

/// `R = 1` yields the two-piece field.
pub fn build_field_ball_harmonic(
    params: ThermalParams,
    big_r: f64,
    options: BallHarmonicOptions,
) -> Result<super::PiecewiseField> {
    if !(big_r.is_finite() && big_r >= 1.0) {
        return domain(format!("R must be ≥ 1, got {big_r}"));
    }
    let n = params.n;
    let bound = n.as_f64() - 0.5;
    if options.enforce_beta_bound && params.beta < bound {
        return Err(CalxError::Hypothesis(format!(
            "beta must be at least n - 1/2 = {bound}, got {}",
            params.beta
        )));
    }
    if big_r == 1.0 {
        return build_field_indicator_two_piece(params, options.outer).map(Into::into);
    }
    let el_residual = params.gamma * params.gamma - critical_bracket(n, params.beta, big_r);
    if el_residual.abs() > options.el_tolerance {
        return Err(CalxError::Hypothesis(format!(
            "R = {big_r} is not an Euler-Lagrange radius: residual {el_residual:.3e}"
        )));
    }
    let outer = options.outer.unwrap_or(2.0 * big_r);
    check_outer(outer, big_r)?;
    let delta_r = robin_trace_unchecked(n, params.beta, big_r);
    Ok(BallHarmonicField {
        params,
        big_r,
        delta_r,
        scale: params.beta * delta_r * big_r.powi(n.get() as i32 - 1),
        el_residual,
        outer,
    }
    .into())
}

impl BallHarmonicField {
    pub fn n(&self) -> Dimension {
        self.params.n
    }
    pub fn beta(&self) -> f64 {
        self.params.beta
    }
    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }
    pub fn outer_radius(&self) -> f64 {
        self.big_r
    }
    pub fn outer_trace(&self) -> f64 {
        self.delta_r
    }
    pub fn el_residual(&self) -> f64 {
        self.el_residual
    }

    fn exterior(&self) -> ExteriorPieces {
        ExteriorPieces {
            n: self.params.n,
            beta: self.params.beta,
        }
    }

    pub fn profile_value(&self, r: f64) -> f64 {
        1.0 - self.scale * potential_unchecked(self.params.n, r)
    }

    /// `|∇u| = βδ(R)(R/r)^{n−1}`.
    pub fn profile_slope(&self, r: f64) -> f64 {
        self.scale * r.powi(1 - self.params.n.get() as i32)
    }

    /// `ρ(r)` confined to `[δ(R), u(r)]`; the bounds only bind when
    /// `β < n − ½`.
    pub fn interface(&self, r: f64) -> f64 {
        let rho = flux_interface_unchecked(self.params.n, self.params.beta, self.big_r, r);
        rho.max(self.delta_r).min(self.profile_value(r))
    }

    fn inside(&self, r: f64) -> bool {
        r <= self.big_r
    }
}

impl Field for BallHarmonicField {
    fn geometry(&self) -> Geometry {
        Geometry {
            coordinate: Coordinate::Radial { n: self.params.n },
            window: window(self.outer),
        }
    }

    fn constants(&self) -> Constants {
        Constants {
            beta: self.params.beta,
            gamma: self.params.gamma,
        }
    }

    fn region_of(&self, s: f64, t: f64) -> usize {
        if !self.inside(s) {
            return if t <= self.exterior().delta(s) { 4 } else { 5 };
        }
        if t <= self.delta_r {
            0
        } else if t <= self.interface(s) {
            1
        } else if t <= self.profile_value(s) {
            2
        } else {
            3
        }
    }

    fn eval_region(&self, region: usize, s: f64, t: f64) -> (f64, f64) {
        let beta = self.params.beta;
        let g2 = self.params.gamma * self.params.gamma;
        let bend = (self.params.n.as_f64() - 1.0) / s;
        let d = self.delta_r;
        match region {
            0 => (-2.0 * beta * t, bend * beta * t * t),
            1 => (-2.0 * beta * d, bend * beta * d * (2.0 * t - d)),
            2 => {
                let g = self.profile_slope(s);
                (-2.0 * g, g * g - g2)
            }
            3 => {
                let w = (1.0 - t) * self.exterior().slope(s);
                (-2.0 * w, w * w - g2)
            }
            4 => self.exterior().lower(s, t),
            _ => self.exterior().upper(s, t),
        }
    }

    fn antiderivative(&self, s: f64, t: f64) -> f64 {
        if !self.inside(s) {
            return self.exterior().antiderivative(s, t);
        }
        let beta = self.params.beta;
        let d = self.delta_r;
        if t <= d {
            return -beta * t * t;
        }
        let rho = self.interface(s);
        let at_rho = -beta * d * d - 2.0 * beta * d * (rho - d);
        if t <= rho {
            return -beta * d * d - 2.0 * beta * d * (t - d);
        }
        let u = self.profile_value(s);
        let slope = self.profile_slope(s);
        let at_u = at_rho - 2.0 * slope * (u - rho);
        if t <= u {
            return at_rho - 2.0 * slope * (t - rho);
        }
        let c = self.exterior().slope(s);
        at_u - c * ((1.0 - u).powi(2) - (1.0 - t).powi(2))
    }

    fn interfaces(&self) -> Vec<Interface> {
        let inner = (1.0, self.big_r);
        vec![
            Interface::graph("t = delta(R)", inner, 0, 1),
            Interface::graph("t = rho(r)", inner, 1, 2),
            Interface::graph("t = u(r)", inner, 2, 3),
            Interface::sphere("r = R", self.big_r, (0.0, 1.0)),
            Interface::graph("t = delta(r)", (self.big_r, self.outer), 4, 5),
        ]
    }

    fn interface_height(&self, index: usize, s: f64) -> f64 {
        match index {
            0 => self.delta_r,
            1 => self.interface(s),
            2 => self.profile_value(s),
            4 => self.exterior().delta(s),
            _ => f64::NAN,
        }
    }

    fn regions(&self) -> Vec<RegionInfo> {
        vec![
            RegionInfo {
                id: 0,
                domain: "r <= R, t <= delta(R)",
                phi_s: "-2 beta t",
                phi_t: "(n-1) beta t^2 / r",
            },
            RegionInfo {
                id: 1,
                domain: "r <= R, delta(R) < t <= rho(r)",
                phi_s: "-2 beta delta(R)",
                phi_t: "(n-1) beta delta(R) (2t - delta(R)) / r",
            },
            RegionInfo {
                id: 2,
                domain: "r <= R, rho(r) < t <= u(r)",
                phi_s: "-2 beta delta(R) (R/r)^(n-1)",
                phi_t: "beta^2 delta(R)^2 (R/r)^(2n-2) - gamma^2",
            },
            RegionInfo {
                id: 3,
                domain: "r <= R, t > u(r)",
                phi_s: "-2 (1-t) c(r), c = 1/(r^(n-1) Gamma(r))",
                phi_t: "(1-t)^2 c(r)^2 - gamma^2",
            },
            RegionInfo {
                id: 4,
                domain: "r > R, t <= delta(r)",
                phi_s: "-2 beta t",
                phi_t: "beta t^2 (n-1)/r",
            },
            RegionInfo {
                id: 5,
                domain: "r > R, t > delta(r)",
                phi_s: "-2 (1-t) c(r)",
                phi_t: "(1-t)^2 c(r)^2 - (beta^2 - beta(n-1)/r) delta(r)^2",
            },
        ]
    }

    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        let field = *self;
        let grad = *self;
        vec![CalibratedGraph::new(
            "Robin profile",
            (1.0, self.outer),
            move |r| {
                if field.inside(r) {
                    field.profile_value(r)
                } else {
                    0.0
                }
            },
            move |r| {
                if grad.inside(r) {
                    -grad.profile_slope(r)
                } else {
                    0.0
                }
            },
            vec![JumpPoint {
                position: self.big_r,
                lower: 0.0,
                upper: self.delta_r,
                normal: -1.0,
            }],
        )]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::PiecewiseField;

    fn params(n: u32, beta: f64, gamma: f64) -> ThermalParams {
        ThermalParams::new(Dimension::new(n).unwrap(), beta, gamma).unwrap()
    }

    fn ball(n: u32, beta: f64, big_r: f64) -> BallHarmonicField {
        let dim = Dimension::new(n).unwrap();
        let gamma = euler_lagrange_gamma(dim, beta, big_r).unwrap();
        match build_field_ball_harmonic(params(n, beta, gamma), big_r, Default::default()).unwrap()
        {
            PiecewiseField::BallHarmonic(f) => f,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn indicator_const_examples() {
        let f = build_field_indicator_const(params(2, 0.3, 0.4), None).unwrap();
        assert!((f.eval(2.0, 1.0).phi_s.abs() - 0.3).abs() < 1e-15);
        let z = f.eval(1.7, 0.0);
        assert_eq!((z.phi_s, z.phi_t), (0.0, 0.0));
        assert!(build_field_indicator_const(params(2, 0.5, 0.4), None).is_err());
    }

    #[test]
    fn two_piece_examples() {
        let f = build_field_indicator_two_piece(params(2, 1.0, 0.4), None).unwrap();
        assert!((f.scan().margin - 0.028).abs() < 1e-3);
        for i in 1..50 {
            let r = 1.0 + i as f64 * 0.04;
            let d = f.interface_height(0, r);
            let (a, b) = (f.eval_region(0, r, d), f.eval_region(1, r, d));
            assert!(
                (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12,
                "r={r}"
            );
        }
        let err = build_field_indicator_two_piece(params(2, 1.0, 0.34), None).unwrap_err();
        assert!(matches!(err, CalxError::Hypothesis(_)));
        let scan = two_piece_hypothesis(params(2, 1.0, 0.34));
        assert!(!scan.holds && scan.worst_radius > 1.3 && scan.worst_radius < 1.6);
        assert!(two_piece_hypothesis(params(3, 0.5, 0.6)).holds);
    }

    #[test]
    fn ball_examples() {
        let f = ball(1, 2.0, 2.5);
        for i in 0..20 {
            let r = 1.0 + 1.5 * i as f64 / 20.0;
            assert_eq!(f.interface(r), 0.25);
        }
        let f = ball(2, 2.0, 2.0);
        assert!((f.gamma().powi(2) - 0.210786).abs() < 1e-6);
        assert!((f.interface(1.0) - 0.569_261_289_888_17).abs() < 1e-10);
        assert!((f.interface(2.0 - 1e-12) - 0.265_069_975_453_433_8).abs() < 1e-9);
    }

    #[test]
    fn ball_rejects_small_beta_and_non_critical_radius() {
        let g = euler_lagrange_gamma(Dimension::new(2).unwrap(), 1.3, 1.1).unwrap();
        assert!(build_field_ball_harmonic(params(2, 1.3, g), 1.1, Default::default()).is_err());
        let relaxed = BallHarmonicOptions {
            enforce_beta_bound: false,
            ..Default::default()
        };
        assert!(build_field_ball_harmonic(params(2, 1.3, g), 1.1, relaxed).is_ok());
        assert!(build_field_ball_harmonic(params(2, 2.0, 0.3), 2.0, Default::default()).is_err());
        let unit = build_field_ball_harmonic(params(2, 1.0, 0.4), 1.0, Default::default());
        assert!(unit.is_err());
        let unit = build_field_ball_harmonic(params(1, 2.0, 2.0), 1.0, Default::default()).unwrap();
        assert_eq!(unit.kind(), "indicator-two-piece");
    }

    #[test]
    fn ball_pieces_are_continuous_across_interior_interfaces() {
        let f = ball(3, 3.0, 1.6);
        for i in 1..40 {
            let r = 1.0 + 0.6 * i as f64 / 40.0;
            for (k, (lo, hi)) in [(0usize, (0, 1)), (2, (2, 3))] {
                let t = f.interface_height(k, r);
                let a = f.eval_region(lo, r, t);
                let b = f.eval_region(hi, r, t);
                assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
            }
            let rho = f.interface(r);
            let lo = f.antiderivative(r, rho - 1e-13);
            let hi = f.antiderivative(r, rho + 1e-13);
            assert!((lo - hi).abs() < 1e-10);
        }
    }

    #[test]
    fn ball_is_continuous_through_the_outer_sphere() {
        let f = ball(2, 2.0, 2.0);
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            let a = f.eval(2.0, t);
            let b = f.eval(2.0 * (1.0 + 1e-12), t);
            assert!((a.phi_s - b.phi_s).abs() < 1e-9, "t={t}");
            assert!((a.phi_t - b.phi_t).abs() < 1e-9, "t={t}");
        }
    }
}
