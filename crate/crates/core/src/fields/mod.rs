//! Piecewise calibration fields.
//!
//! Every field lives on `window × [t_min, t_max]` where the spatial part is a
//! single scalar coordinate: the abscissa of an interval, or the radius for
//! radially directed fields in `ℝⁿ`. A field is a finite set of regions, each
//! with a closed form for the spatial component `φ_s` (the component along
//! the coordinate direction), the value component `φᵗ`, and the
//! t-antiderivative `Ψ(s, t) = ∫₀ᵗ φ_s(s, τ) dτ`.
//!
//! Region membership is half-open: on an interface the point belongs to the
//! region below it.

mod dirichlet;
mod thermal;

use serde::Serialize;
use serde_json::json;

pub use dirichlet::{
    build_field_1d, build_field_harmonic, choose_lambda, DirichletField, HarmonicProfile,
    LambdaChoice,
};
pub use thermal::{
    build_field_ball_harmonic, build_field_indicator_const, build_field_indicator_two_piece,
    euler_lagrange_gamma, two_piece_hypothesis, BallHarmonicField, BallHarmonicOptions,
    IndicatorConstField, TwoPieceField, TwoPieceScan, EL_TOLERANCE,
};

use crate::potentials::Dimension;

/// Spatial coordinate of a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Coordinate {
    /// Abscissa of an interval; no curvature term in the divergence.
    Interval,
    /// Radius in `ℝⁿ`, the field being `φ_s(r, t)·e_r`.
    Radial { n: Dimension },
}

impl Coordinate {
    /// Factor of `φ_s` in the divergence, `(n−1)/r` for radial fields.
    pub fn curvature(&self, s: f64) -> f64 {
        match self {
            Coordinate::Interval => 0.0,
            Coordinate::Radial { n } => (n.as_f64() - 1.0) / s,
        }
    }
}

/// Rectangle in (coordinate, value) space where a field is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    pub coordinate: Coordinate,
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub region: usize,
    pub phi_s: f64,
    pub phi_t: f64,
}

/// Coefficients the axioms are checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Jump coefficient in the two-trace bound.
    pub beta: f64,
    /// Volume coefficient; zero for Dirichlet problems.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InterfaceShape {
    /// A graph `t = g(s)` over `span`.
    Graph,
    /// The hypersurface `s = radius`; its normal is `(e_s, 0)`.
    Sphere { radius: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interface {
    pub label: String,
    pub shape: InterfaceShape,
    pub span: (f64, f64),
    /// Region below a graph interface.
    pub lower: Option<usize>,
    /// Region above a graph interface.
    pub upper: Option<usize>,
}

impl Interface {
    fn graph(label: &str, span: (f64, f64), lower: usize, upper: usize) -> Self {
        Self {
            label: label.to_owned(),
            shape: InterfaceShape::Graph,
            span,
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    fn sphere(label: &str, radius: f64, t_range: (f64, f64)) -> Self {
        Self {
            label: label.to_owned(),
            shape: InterfaceShape::Sphere { radius },
            span: t_range,
            lower: None,
            upper: None,
        }
    }
}

/// Human-readable closed forms of one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionInfo {
    pub id: usize,
    pub domain: &'static str,
    pub phi_s: &'static str,
    pub phi_t: &'static str,
}

/// A jump of the calibrated function: traces `lower < upper` and the unit
/// normal `±1` along the coordinate, pointing to the side of `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpPoint {
    pub position: f64,
    pub lower: f64,
    pub upper: f64,
    pub normal: f64,
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// The function a field is meant to calibrate: value and signed derivative
/// along the coordinate on `span`, plus its jump points.
pub struct CalibratedGraph {
    pub label: String,
    pub span: (f64, f64),
    value: ScalarFn,
    gradient: ScalarFn,
    pub jumps: Vec<JumpPoint>,
}

impl CalibratedGraph {
    pub fn new(
        label: impl Into<String>,
        span: (f64, f64),
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(f64) -> f64 + Send + Sync + 'static,
        jumps: Vec<JumpPoint>,
    ) -> Self {
        Self {
            label: label.into(),
            span,
            value: Box::new(value),
            gradient: Box::new(gradient),
            jumps,
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        (self.value)(s)
    }

    pub fn gradient(&self, s: f64) -> f64 {
        (self.gradient)(s)
    }
}

impl std::fmt::Debug for CalibratedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CalibratedGraph")
            .field("label", &self.label)
            .field("span", &self.span)
            .field("jumps", &self.jumps)
            .finish_non_exhaustive()
    }
}

/// A calibration candidate, as seen by the verifier.
pub trait Field: Send + Sync {
    fn geometry(&self) -> Geometry;

    fn constants(&self) -> Constants;

    fn region_of(&self, s: f64, t: f64) -> usize;

    /// `(φ_s, φᵗ)` from the closed form of `region`, whether or not `(s, t)`
    /// lies in it.
    fn eval_region(&self, region: usize, s: f64, t: f64) -> (f64, f64);

    fn eval(&self, s: f64, t: f64) -> FieldSample {
        let region = self.region_of(s, t);
        let (phi_s, phi_t) = self.eval_region(region, s, t);
        FieldSample {
            region,
            phi_s,
            phi_t,
        }
    }

    /// `∫₀ᵗ φ_s(s, τ) dτ`.
    fn antiderivative(&self, s: f64, t: f64) -> f64;

    fn interfaces(&self) -> Vec<Interface>;

    /// Height `g(s)` of graph interface `index`; NaN for spheres.
    fn interface_height(&self, index: usize, s: f64) -> f64;

    fn regions(&self) -> Vec<RegionInfo>;

    /// Heights of the graph interfaces crossing the fiber over `s`.
    fn t_breakpoints(&self, s: f64) -> Vec<f64> {
        let w = self.geometry().window;
        let mut out: Vec<f64> = self
            .interfaces()
            .iter()
            .enumerate()
            .filter(|(_, i)| i.shape == InterfaceShape::Graph && s >= i.span.0 && s <= i.span.1)
            .map(|(k, _)| self.interface_height(k, s))
            .filter(|t| t.is_finite() && *t > w.t_min && *t < w.t_max)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Functions this field calibrates by construction.
    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        Vec::new()
    }
}

/// Any of the explicit constructions.
#[derive(Debug, Clone, PartialEq)]
pub enum PiecewiseField {
    Dirichlet(DirichletField),
    IndicatorConst(IndicatorConstField),
    IndicatorTwoPiece(TwoPieceField),
    BallHarmonic(BallHarmonicField),
}

macro_rules! delegate {
    ($self:ident, $f:ident => $body:expr) => {
        match $self {
            PiecewiseField::Dirichlet($f) => $body,
            PiecewiseField::IndicatorConst($f) => $body,
            PiecewiseField::IndicatorTwoPiece($f) => $body,
            PiecewiseField::BallHarmonic($f) => $body,
        }
    };
}

impl PiecewiseField {
    pub fn kind(&self) -> &'static str {
        match self {
            PiecewiseField::Dirichlet(_) => "dirichlet-harmonic",
            PiecewiseField::IndicatorConst(_) => "indicator-const",
            PiecewiseField::IndicatorTwoPiece(_) => "indicator-two-piece",
            PiecewiseField::BallHarmonic(_) => "ball-harmonic",
        }
    }

    fn parameters(&self) -> serde_json::Value {
        match self {
            PiecewiseField::Dirichlet(f) => json!({
                "m": f.lower_value(),
                "M": f.upper_value(),
                "beta": f.beta(),
                "profile": f.profile(),
                "lambda": f.lambda_choice(),
            }),
            PiecewiseField::IndicatorConst(f) => json!({
                "n": f.n(), "beta": f.beta(), "gamma": f.gamma(),
            }),
            PiecewiseField::IndicatorTwoPiece(f) => json!({
                "n": f.n(), "beta": f.beta(), "gamma": f.gamma(), "hypothesis": f.scan(),
            }),
            PiecewiseField::BallHarmonic(f) => json!({
                "n": f.n(),
                "beta": f.beta(),
                "gamma": f.gamma(),
                "R": f.outer_radius(),
                "outer_trace": f.outer_trace(),
                "el_residual": f.el_residual(),
            }),
        }
    }

    /// JSON description: parameters, window, regions and interfaces.
    pub fn describe(&self) -> serde_json::Value {
        json!({
            "kind": self.kind(),
            "parameters": self.parameters(),
            "geometry": self.geometry(),
            "regions": self.regions(),
            "interfaces": self.interfaces(),
        })
    }
}

impl Field for PiecewiseField {
    fn geometry(&self) -> Geometry {
        delegate!(self, f => f.geometry())
    }
    fn constants(&self) -> Constants {
        delegate!(self, f => f.constants())
    }
    fn region_of(&self, s: f64, t: f64) -> usize {
        delegate!(self, f => f.region_of(s, t))
    }
    fn eval_region(&self, region: usize, s: f64, t: f64) -> (f64, f64) {
        delegate!(self, f => f.eval_region(region, s, t))
    }
    fn antiderivative(&self, s: f64, t: f64) -> f64 {
        delegate!(self, f => f.antiderivative(s, t))
    }
    fn interfaces(&self) -> Vec<Interface> {
        delegate!(self, f => f.interfaces())
    }
    fn interface_height(&self, index: usize, s: f64) -> f64 {
        delegate!(self, f => f.interface_height(index, s))
    }
    fn regions(&self) -> Vec<RegionInfo> {
        delegate!(self, f => f.regions())
    }
    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        delegate!(self, f => f.calibrated_graphs())
    }
}

impl From<DirichletField> for PiecewiseField {
    fn from(f: DirichletField) -> Self {
        PiecewiseField::Dirichlet(f)
    }
}

impl From<IndicatorConstField> for PiecewiseField {
    fn from(f: IndicatorConstField) -> Self {
        PiecewiseField::IndicatorConst(f)
    }
}

impl From<TwoPieceField> for PiecewiseField {
    fn from(f: TwoPieceField) -> Self {
        PiecewiseField::IndicatorTwoPiece(f)
    }
}

impl From<BallHarmonicField> for PiecewiseField {
    fn from(f: BallHarmonicField) -> Self {
        PiecewiseField::BallHarmonic(f)
    }
}
