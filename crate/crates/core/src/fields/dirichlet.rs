//! Calibration of harmonic functions for the Dirichlet problem with
//! boundary data between `m` and `M`.
//!
//! The field is first written for the affine function `m + (M−m)x` on
//! `[0, 1]` and then transported to any harmonic `u` by replacing `x` with
//! `(u − m)/(M − m)` and scaling by `∇u/(M−m)` and `|∇u|²/(M−m)²`.

use serde::Serialize;

use super::{
    CalibratedGraph, Constants, Coordinate, Field, Geometry, Interface, RegionInfo, Window,
};
use crate::error::{domain, CalxError, Result};
use crate::potentials::{potential_unchecked, robin_trace_unchecked, Dimension};

const SIDE_TOLERANCE: f64 = 1e-12;

/// Outcome of the choice of the intermediary slope coefficient `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaChoice {
    pub lambda: f64,
    /// Effective jump coefficient `β(M−m)/sup|∇u|`.
    pub beta0: f64,
    /// Robin value `M/(1+β₀)` of the one-jump competitor.
    pub jump_trace: f64,
    /// `∫ₘ^δ 2(M−t) dt`.
    pub integral: f64,
}

/// Smallest admissible `λ ∈ [0, β₀]`, or a hypothesis error when the
/// jump-energy criterion `∫ₘ^δ 2(M−t) dt ≤ β₀(m² + δ²)` fails.
pub fn choose_lambda(m: f64, big_m: f64, beta0: f64) -> Result<LambdaChoice> {
    if !(m.is_finite() && big_m.is_finite() && 0.0 <= m && m <= big_m) {
        return domain(format!("need 0 ≤ m ≤ M, got m={m}, M={big_m}"));
    }
    if !(beta0.is_finite() && beta0 >= 0.0) {
        return domain(format!("beta0 must be non-negative, got {beta0}"));
    }
    let delta = big_m / (1.0 + beta0);
    let integral = (big_m - m).powi(2) - (big_m - delta).powi(2);
    let choice = |lambda| LambdaChoice {
        lambda,
        beta0,
        jump_trace: delta,
        integral,
    };
    if m == big_m || m > delta {
        return Ok(choice(0.0));
    }
    let robin_part = beta0 * delta * delta;
    let violated = || {
        Err(CalxError::Hypothesis(format!(
            "jump-energy criterion violated: {} > {}",
            integral,
            beta0 * (m * m + delta * delta)
        )))
    };
    let lambda = if m == 0.0 {
        if integral > robin_part {
            return violated();
        }
        0.0
    } else {
        ((integral - robin_part) / (m * m)).max(0.0)
    };
    if lambda > beta0 {
        return violated();
    }
    let tau = big_m - m;
    if lambda * m > tau + SIDE_TOLERANCE || lambda * m > beta0 * delta + SIDE_TOLERANCE {
        return Err(CalxError::Hypothesis(format!(
            "slope bounds violated: λm = {} exceeds min(M−m, β₀δ) = {}",
            lambda * m,
            tau.min(beta0 * delta)
        )));
    }
    Ok(choice(lambda))
}

/// A harmonic function with values between `m` and `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HarmonicProfile {
    /// `m + (M−m)·x/length` on `[0, length]`.
    Affine { m: f64, big_m: f64, length: f64 },
    /// The Robin profile `1 − βδ(R)R^{n−1}Γ(r)` on `[1, R]`, from 1 down
    /// to `δ(R)`.
    Robin {
        n: Dimension,
        robin_beta: f64,
        outer_radius: f64,
    },
}

impl HarmonicProfile {
    pub fn affine(m: f64, big_m: f64, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return domain(format!("interval length must be positive, got {length}"));
        }
        if !(m.is_finite() && big_m.is_finite() && 0.0 <= m && m <= big_m) {
            return domain(format!("need 0 ≤ m ≤ M, got m={m}, M={big_m}"));
        }
        Ok(HarmonicProfile::Affine { m, big_m, length })
    }

    /// Affine profile whose slope is `sup_gradient`.
    pub fn affine_with_gradient(m: f64, big_m: f64, sup_gradient: f64) -> Result<Self> {
        if !(sup_gradient.is_finite() && sup_gradient > 0.0) {
            return domain(format!(
                "gradient bound must be positive, got {sup_gradient}"
            ));
        }
        if m == big_m {
            return Self::affine(m, big_m, 1.0);
        }
        Self::affine(m, big_m, (big_m - m) / sup_gradient)
    }

    pub fn robin(n: Dimension, robin_beta: f64, outer_radius: f64) -> Result<Self> {
        if !(robin_beta.is_finite() && robin_beta > 0.0) {
            return domain(format!("beta must be positive, got {robin_beta}"));
        }
        if !(outer_radius.is_finite() && outer_radius > 1.0) {
            return domain(format!("R must exceed 1, got {outer_radius}"));
        }
        Ok(HarmonicProfile::Robin {
            n,
            robin_beta,
            outer_radius,
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            HarmonicProfile::Affine { m, big_m, .. } => (m, big_m),
            HarmonicProfile::Robin {
                n,
                robin_beta,
                outer_radius,
            } => (robin_trace_unchecked(n, robin_beta, outer_radius), 1.0),
        }
    }

    fn span(&self) -> (f64, f64) {
        match *self {
            HarmonicProfile::Affine { length, .. } => (0.0, length),
            HarmonicProfile::Robin { outer_radius, .. } => (1.0, outer_radius),
        }
    }

    fn coordinate(&self) -> Coordinate {
        match *self {
            HarmonicProfile::Affine { .. } => Coordinate::Interval,
            HarmonicProfile::Robin { n, .. } => Coordinate::Radial { n },
        }
    }

    fn robin_scale(n: Dimension, beta: f64, big_r: f64) -> f64 {
        beta * robin_trace_unchecked(n, beta, big_r) * big_r.powi(n.get() as i32 - 1)
    }

    pub fn value(&self, s: f64) -> f64 {
        match *self {
            HarmonicProfile::Affine { m, big_m, length } => m + (big_m - m) * s / length,
            HarmonicProfile::Robin {
                n,
                robin_beta,
                outer_radius,
            } => 1.0 - Self::robin_scale(n, robin_beta, outer_radius) * potential_unchecked(n, s),
        }
    }

    /// Signed derivative along the coordinate.
    pub fn gradient(&self, s: f64) -> f64 {
        match *self {
            HarmonicProfile::Affine { m, big_m, length } => (big_m - m) / length,
            HarmonicProfile::Robin {
                n,
                robin_beta,
                outer_radius,
            } => -Self::robin_scale(n, robin_beta, outer_radius) * s.powi(1 - n.get() as i32),
        }
    }

    pub fn sup_gradient(&self) -> f64 {
        match *self {
            HarmonicProfile::Affine { .. } => self.gradient(0.0).abs(),
            HarmonicProfile::Robin { .. } => self.gradient(1.0).abs(),
        }
    }
}

/// Four-region calibration of a harmonic profile for the Dirichlet problem.
///
/// Regions, with `x = (u−m)/(M−m)`, `τ = M−m` and before transport:
/// `0` for `t ≤ m`, `1` for `m < t ≤ σ`, `2` for `σ < t ≤ u`, `3` above
/// the graph of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletField {
    beta: f64,
    profile: HarmonicProfile,
    m: f64,
    big_m: f64,
    lambda: LambdaChoice,
}

/// Field for the affine function from `(0, m)` to `(1, M)` with jump
/// coefficient `beta`.
pub fn build_field_1d(m: f64, big_m: f64, beta: f64) -> Result<DirichletField> {
    build_field_harmonic(HarmonicProfile::affine(m, big_m, 1.0)?, beta)
}

/// Transported field for a harmonic profile; `β₀ = β(M−m)/sup|∇u|`.
pub fn build_field_harmonic(profile: HarmonicProfile, beta: f64) -> Result<DirichletField> {
    if !(beta.is_finite() && beta >= 0.0) {
        return domain(format!("beta must be non-negative, got {beta}"));
    }
    let (m, big_m) = profile.bounds();
    let sup = profile.sup_gradient();
    let beta0 = if big_m == m {
        0.0
    } else {
        beta * (big_m - m) / sup
    };
    let lambda = choose_lambda(m, big_m, beta0)?;
    Ok(DirichletField {
        beta,
        profile,
        m,
        big_m,
        lambda,
    })
}

impl DirichletField {
    pub fn lower_value(&self) -> f64 {
        self.m
    }

    pub fn upper_value(&self) -> f64 {
        self.big_m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn profile(&self) -> HarmonicProfile {
        self.profile
    }

    pub fn lambda_choice(&self) -> LambdaChoice {
        self.lambda
    }

    fn tau(&self) -> f64 {
        self.big_m - self.m
    }

    fn degenerate(&self) -> bool {
        self.tau() == 0.0
    }

    /// Upper edge of region 1.
    pub fn slab_top(&self, s: f64) -> f64 {
        let u = self.profile.value(s);
        let lm = self.lambda.lambda * self.m;
        self.m + 0.5 * (u - self.m) * (1.0 - lm / self.tau())
    }

    /// Height `(M−t)(M−m)/(M−u)` of the top piece, which reads
    /// `(M−t)/(1−x)` before transport.
    fn top_scale(&self, u: f64, t: f64) -> f64 {
        let gap = self.big_m - u;
        if gap <= 0.0 {
            self.tau()
        } else {
            (self.big_m - t) * self.tau() / gap
        }
    }

    /// Antiderivative of the untransported spatial component.
    fn reduced_antiderivative(&self, s: f64, t: f64) -> f64 {
        let (m, big_m) = (self.m, self.big_m);
        let lambda = self.lambda.lambda;
        let u = self.profile.value(s);
        let sigma = self.slab_top(s);
        let tau = self.tau();
        let low = t.min(m);
        let mut acc = -lambda * low * low;
        if t > m {
            acc -= 2.0 * lambda * m * (t.min(sigma) - m);
        }
        if t > sigma {
            acc += 2.0 * tau * (t.min(u) - sigma);
        }
        if t > u && big_m > u {
            acc += tau / (big_m - u) * ((big_m - u).powi(2) - (big_m - t).powi(2));
        }
        acc
    }
}

impl Field for DirichletField {
    fn geometry(&self) -> Geometry {
        let (s_min, s_max) = self.profile.span();
        Geometry {
            coordinate: self.profile.coordinate(),
            window: Window {
                s_min,
                s_max,
                t_min: 0.0,
                t_max: self.big_m,
            },
        }
    }

    fn constants(&self) -> Constants {
        Constants {
            beta: self.beta,
            gamma: 0.0,
        }
    }

    /// The graph of `u` itself is assigned to region 2, also where it
    /// touches `t = m`.
    fn region_of(&self, s: f64, t: f64) -> usize {
        if self.degenerate() {
            return 0;
        }
        let u = self.profile.value(s);
        if t == u {
            2
        } else if t <= self.m {
            0
        } else if t <= self.slab_top(s) {
            1
        } else if t <= u {
            2
        } else {
            3
        }
    }

    fn eval_region(&self, region: usize, s: f64, t: f64) -> (f64, f64) {
        if self.degenerate() {
            return (0.0, 0.0);
        }
        let lambda = self.lambda.lambda;
        let m = self.m;
        let tau = self.tau();
        let k = self.profile.gradient(s) / tau;
        let (x_part, t_part) = match region {
            0 => (-2.0 * lambda * t, lambda * lambda * m * m),
            1 => (-2.0 * lambda * m, lambda * lambda * m * m),
            2 => (2.0 * tau, tau * tau),
            _ => {
                let w = self.top_scale(self.profile.value(s), t);
                (2.0 * w, w * w)
            }
        };
        (x_part * k, t_part * k * k)
    }

    fn antiderivative(&self, s: f64, t: f64) -> f64 {
        if self.degenerate() {
            return 0.0;
        }
        self.reduced_antiderivative(s, t) * self.profile.gradient(s) / self.tau()
    }

    fn interfaces(&self) -> Vec<Interface> {
        let span = self.profile.span();
        vec![
            Interface::graph("t = m", span, 0, 1),
            Interface::graph("t = sigma(s)", span, 1, 2),
            Interface::graph("t = u(s)", span, 2, 3),
        ]
    }

    fn interface_height(&self, index: usize, s: f64) -> f64 {
        match index {
            0 => self.m,
            1 => self.slab_top(s),
            2 => self.profile.value(s),
            _ => f64::NAN,
        }
    }

    fn regions(&self) -> Vec<RegionInfo> {
        vec![
            RegionInfo {
                id: 0,
                domain: "t <= m",
                phi_s: "-2 lambda t k",
                phi_t: "lambda^2 m^2 k^2",
            },
            RegionInfo {
                id: 1,
                domain: "m < t <= sigma(s)",
                phi_s: "-2 lambda m k",
                phi_t: "lambda^2 m^2 k^2",
            },
            RegionInfo {
                id: 2,
                domain: "sigma(s) < t <= u(s)",
                phi_s: "2 (M-m) k",
                phi_t: "(M-m)^2 k^2",
            },
            RegionInfo {
                id: 3,
                domain: "t > u(s)",
                phi_s: "2 w k, w = (M-t)(M-m)/(M-u)",
                phi_t: "w^2 k^2",
            },
        ]
    }

    fn calibrated_graphs(&self) -> Vec<CalibratedGraph> {
        let value_profile = self.profile;
        let gradient_profile = self.profile;
        vec![CalibratedGraph::new(
            "harmonic profile",
            self.profile.span(),
            move |s| value_profile.value(s),
            move |s| gradient_profile.gradient(s),
            Vec::new(),
        )]
    }
}
