//! Browser bindings: each export takes plain numbers and returns a JSON
//! string, so the page needs no generated TypeScript types.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use calx::export::{energy_curve as curve_points, CurvePoint};
use calx::fields::{build_field_ball_harmonic, euler_lagrange_gamma, BallHarmonicOptions};
use calx::phase::{classify, phase_diagram as classify_grid, PhaseCell};
use calx::{verify_all, Dimension, Field, ThermalParams, VerifyConfig};

/// Scan resolution for roots and margins; coarser than the CLI default to
/// keep the page responsive.
const PAGE_SCAN_SAMPLES: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct CurveView {
    pub points: Vec<CurvePoint>,
    pub critical_radii: Vec<f64>,
    pub regime: &'static str,
}

pub fn energy_curve_view(
    n: u32,
    beta: f64,
    gamma: f64,
    rmax: f64,
    samples: usize,
) -> calx::Result<CurveView> {
    let params = ThermalParams::new(Dimension::new(n)?, beta, gamma)?;
    Ok(CurveView {
        points: curve_points(params, rmax, samples)?,
        critical_radii: params.critical_radii(rmax, PAGE_SCAN_SAMPLES)?,
        regime: classify(params, PAGE_SCAN_SAMPLES)?.regime.label(),
    })
}

fn axis(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect()
}

pub fn phase_view(
    n: u32,
    beta_range: (f64, f64),
    gamma_range: (f64, f64),
    count: usize,
) -> calx::Result<Vec<PhaseCell>> {
    let betas = axis(beta_range.0, beta_range.1, count);
    let gammas = axis(gamma_range.0, gamma_range.1, count);
    classify_grid(Dimension::new(n)?, &betas, &gammas, PAGE_SCAN_SAMPLES / 10)
}

#[derive(Debug, Serialize)]
pub struct SliceView {
    pub gamma: f64,
    pub radii: Vec<f64>,
    pub heights: Vec<f64>,
    /// Row-major over `heights` × `radii`.
    pub region: Vec<usize>,
    pub phi_r: Vec<f64>,
    pub phi_t: Vec<f64>,
    pub profile: Vec<f64>,
    pub certified: bool,
    pub summary: String,
}

/// Ball field at its Euler–Lagrange `γ`, sampled on a `size × size` grid of
/// `[1, 2R] × [0, 1]`, with a coarse verification.
pub fn ball_slice_view(n: u32, beta: f64, big_r: f64, size: usize) -> calx::Result<SliceView> {
    let dimension = Dimension::new(n)?;
    let gamma = euler_lagrange_gamma(dimension, beta, big_r)?;
    let params = ThermalParams::new(dimension, beta, gamma)?;
    let field = build_field_ball_harmonic(params, big_r, BallHarmonicOptions::default())?;
    let window = field.geometry().window;
    let size = size.clamp(8, 200);
    let radii = axis(window.s_min, window.s_max, size);
    let heights = axis(window.t_min, window.t_max, size);
    let samples: Vec<_> = heights
        .iter()
        .flat_map(|&t| radii.iter().map(move |&r| (r, t)))
        .map(|(r, t)| field.eval(r, t))
        .collect();
    let profile = field
        .calibrated_graphs()
        .first()
        .map(|g| radii.iter().map(|&r| g.value(r)).collect())
        .unwrap_or_default();
    let config = VerifyConfig {
        spatial_nodes: 32,
        t_nodes: 33,
        pair_nodes: 32,
        graph_samples: 200,
        ..VerifyConfig::default()
    };
    let report = verify_all(&field, &config)?;
    Ok(SliceView {
        gamma,
        region: samples.iter().map(|p| p.region).collect(),
        phi_r: samples.iter().map(|p| p.phi_s).collect(),
        phi_t: samples.iter().map(|p| p.phi_t).collect(),
        radii,
        heights,
        profile,
        certified: report.passed(),
        summary: report.summary(),
    })
}

fn to_js<T: Serialize>(value: calx::Result<T>) -> Result<String, JsValue> {
    value
        .map_err(|e| JsValue::from_str(&e.to_string()))
        .and_then(|v| serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string())))
}

#[wasm_bindgen]
pub fn energy_curve(
    n: u32,
    beta: f64,
    gamma: f64,
    rmax: f64,
    samples: usize,
) -> Result<String, JsValue> {
    to_js(energy_curve_view(n, beta, gamma, rmax, samples))
}

#[wasm_bindgen]
pub fn phase_diagram(
    n: u32,
    beta_min: f64,
    beta_max: f64,
    gamma_min: f64,
    gamma_max: f64,
    count: usize,
) -> Result<String, JsValue> {
    to_js(phase_view(
        n,
        (beta_min, beta_max),
        (gamma_min, gamma_max),
        count,
    ))
}

#[wasm_bindgen]
pub fn ball_field_slice(n: u32, beta: f64, big_r: f64, size: usize) -> Result<String, JsValue> {
    to_js(ball_slice_view(n, beta, big_r, size))
}
