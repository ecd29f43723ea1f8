//! Closed-form radial potentials around the unit ball.
//!
//! Everything here is a pure function of its arguments. Radii are
//! dimensionless with the insulated body being the unit ball `B₁`:
//!
//! * [`potential`] is the radial harmonic function `Γ` vanishing on `∂B₁`
//!   with `Γ'(r) = r^{1-n}`;
//! * [`robin_trace`] is the outer trace `δ(R)` of the harmonic profile that
//!   satisfies the Robin condition `-∂ᵣu = βu` on `∂B_R`;
//! * [`robin_profile`] evaluates that profile and its gradient;
//! * [`flux_interface`] is the curve `t = ρ(r)` that separates the two
//!   middle pieces of the ball calibration.

use serde::{Deserialize, Serialize};

use crate::error::{domain, CalxError, Result};

/// Largest supported space dimension.
pub const MAX_DIMENSION: u32 = 10;

/// Below this value of `R/r - 1` the interface curve switches to its
/// first-order expansion at `r = R`.
pub const INTERFACE_SERIES_THRESHOLD: f64 = 1e-8;

/// Space dimension `n`, `1 ≤ n ≤ MAX_DIMENSION`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return domain(format!("dimension must be in 1..={MAX_DIMENSION}, got {n}"));
        }
        Ok(Self(n))
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Volume `ωₙ` of the unit ball (`ω₁ = 2`).
    pub fn unit_ball_volume(self) -> f64 {
        // ωₙ = π^{n/2} / Γ(n/2 + 1), unrolled through ωₙ = (2π/n)·ωₙ₋₂.
        let mut omega = if self.0.is_multiple_of(2) { 1.0 } else { 2.0 };
        let mut k = if self.0.is_multiple_of(2) { 2 } else { 3 };
        while k <= self.0 {
            omega *= 2.0 * std::f64::consts::PI / f64::from(k);
            k += 2;
        }
        omega
    }

    /// Area `n·ωₙ` of the unit sphere (`2` for `n = 1`: two points).
    pub fn sphere_area(self) -> f64 {
        self.as_f64() * self.unit_ball_volume()
    }
}

impl TryFrom<u32> for Dimension {
    type Error = CalxError;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(n: Dimension) -> u32 {
        n.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return domain(format!("{name} must be positive and finite, got {value}"));
    }
    Ok(())
}

fn check_radius(name: &str, value: f64, min: f64) -> Result<()> {
    if !(value.is_finite() && value >= min) {
        return domain(format!("{name} must be finite and ≥ {min}, got {value}"));
    }
    Ok(())
}

/// `Γ(r)` without domain checks; meaningful for `r > 0`.
pub(crate) fn potential_unchecked(n: Dimension, r: f64) -> f64 {
    match n.get() {
        1 => r - 1.0,
        2 => r.ln(),
        k => {
            let p = f64::from(k - 2);
            (1.0 - r.powf(-p)) / p
        }
    }
}

/// Radial harmonic potential `Γ` with `Γ(1) = 0` and `Γ'(r) = r^{1-n}`.
pub fn potential(n: Dimension, r: f64) -> Result<f64> {
    check_radius("r", r, 1.0)?;
    Ok(potential_unchecked(n, r))
}

/// `Γ'(r) = r^{1-n}`.
pub fn potential_derivative(n: Dimension, r: f64) -> f64 {
    r.powi(1 - n.get() as i32)
}

/// Both sides of `Γ(t) − Γ(s) = s^{2−n}·Γ(t/s)` for `t ≥ s ≥ 1`.
pub fn scaling_identity(n: Dimension, s: f64, t: f64) -> Result<(f64, f64)> {
    check_radius("s", s, 1.0)?;
    check_radius("t", t, 1.0)?;
    if t < s {
        return domain(format!("scaling identity needs t ≥ s, got s={s}, t={t}"));
    }
    let lhs = potential_unchecked(n, t) - potential_unchecked(n, s);
    let rhs = s.powi(2 - n.get() as i32) * potential_unchecked(n, t / s);
    Ok((lhs, rhs))
}

pub(crate) fn robin_trace_unchecked(n: Dimension, beta: f64, big_r: f64) -> f64 {
    1.0 / (1.0 + beta * big_r.powi(n.get() as i32 - 1) * potential_unchecked(n, big_r))
}

/// Outer trace `δ(R) = 1 / (1 + β R^{n−1} Γ(R))` of the Robin harmonic profile.
pub fn robin_trace(n: Dimension, beta: f64, big_r: f64) -> Result<f64> {
    check_positive("beta", beta)?;
    check_radius("R", big_r, 1.0)?;
    Ok(robin_trace_unchecked(n, beta, big_r))
}

/// `(β² − β(n−1)/r)·δ(r)²`, the quantity balanced against `γ²` by the
/// radius derivative of the optimal energy.
pub fn critical_bracket(n: Dimension, beta: f64, r: f64) -> f64 {
    let delta = robin_trace_unchecked(n, beta, r);
    (beta * beta - beta * (n.as_f64() - 1.0) / r) * delta * delta
}

/// Value and gradient magnitude of a radial profile at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileValue {
    pub value: f64,
    pub gradient_magnitude: f64,
}

/// The Euler–Lagrange profile supported in `B_R`: equal to 1 on `B₁`,
/// harmonic in the annulus with the Robin trace `δ(R)` at `r = R`, and 0
/// outside `B_R`.
pub fn robin_profile(n: Dimension, beta: f64, big_r: f64, r: f64) -> Result<ProfileValue> {
    check_positive("beta", beta)?;
    check_radius("R", big_r, 1.0)?;
    check_radius("r", r, 0.0)?;
    Ok(robin_profile_unchecked(n, beta, big_r, r))
}

pub(crate) fn robin_profile_unchecked(n: Dimension, beta: f64, big_r: f64, r: f64) -> ProfileValue {
    if r <= 1.0 {
        return ProfileValue {
            value: 1.0,
            gradient_magnitude: 0.0,
        };
    }
    if r > big_r {
        return ProfileValue {
            value: 0.0,
            gradient_magnitude: 0.0,
        };
    }
    let delta = robin_trace_unchecked(n, beta, big_r);
    let scale = beta * delta * big_r.powi(n.get() as i32 - 1);
    ProfileValue {
        value: 1.0 - scale * potential_unchecked(n, r),
        gradient_magnitude: beta * delta * (big_r / r).powi(n.get() as i32 - 1),
    }
}

/// `Σ_{j<k} t^j = (t^k − 1)/(t − 1)`, without the cancellation at `t = 1`.
fn geometric_sum(t: f64, k: u32) -> f64 {
    let mut acc = 0.0;
    let mut power = 1.0;
    for _ in 0..k {
        acc += power;
        power *= t;
    }
    acc
}

/// `t^{n−1}Γ(t) / (t^{n−1} − 1)` for `n ≥ 2`, `t = 1 + eps`, `eps ≥ 0`.
fn potential_ratio(n: u32, eps: f64) -> f64 {
    let t = 1.0 + eps;
    match n {
        2 => {
            let log_ratio = if eps == 0.0 { 1.0 } else { eps.ln_1p() / eps };
            t * log_ratio
        }
        k => t * geometric_sum(t, k - 2) / (f64::from(k - 2) * geometric_sum(t, k - 1)),
    }
}

/// `t^{n−1}Γ(t)/(t^{n−1} − 1)`, increasing on `]1, ∞[` for `n ≥ 2`.
pub fn potential_ratio_at(n: Dimension, t: f64) -> Result<f64> {
    if n.get() < 2 {
        return domain("the potential ratio needs n ≥ 2");
    }
    check_radius("t", t, 1.0)?;
    Ok(potential_ratio(n.get(), t - 1.0))
}

pub(crate) fn flux_interface_unchecked(n: Dimension, beta: f64, big_r: f64, r: f64) -> f64 {
    let delta = robin_trace_unchecked(n, beta, big_r);
    if n.get() == 1 || r >= big_r {
        return delta;
    }
    let eps = (big_r - r) / r;
    if eps < INTERFACE_SERIES_THRESHOLD {
        return delta * (1.0 + 0.25 * (2.0 * beta * big_r - 1.0) * eps);
    }
    let k = n.get();
    let nf = n.as_f64();
    let t = big_r / r;
    let ratio = potential_ratio(k, eps);
    let power_ratio = geometric_sum(t, k) / geometric_sum(t, k - 1);
    0.5 * delta + 0.5 * beta * delta * r * t.powi(k as i32 - 1) * ratio
        - delta * r / (2.0 * nf) * (beta - (nf - 1.0) / big_r) * power_ratio
}

/// Interface curve `ρ(r)` of the ball calibration, `1 ≤ r < R`.
///
/// Constant `δ(R)` for `n = 1`. Tends to `δ(R)` as `r → R⁻`; that limit is
/// exposed separately through [`flux_interface_at_outer`].
pub fn flux_interface(n: Dimension, beta: f64, big_r: f64, r: f64) -> Result<f64> {
    check_positive("beta", beta)?;
    check_radius("R", big_r, 1.0)?;
    check_radius("r", r, 1.0)?;
    if r >= big_r {
        return domain(format!("interface curve needs r < R, got r={r}, R={big_r}"));
    }
    Ok(flux_interface_unchecked(n, beta, big_r, r))
}

/// Limit of the interface curve at `r = R`, equal to `δ(R)`.
pub fn flux_interface_at_outer(n: Dimension, beta: f64, big_r: f64) -> Result<f64> {
    robin_trace(n, beta, big_r)
}

/// Evaluations of the two-sided bound, ratio monotonicity and the sharp
/// estimate used by the ball calibration, at one point `t > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// Forward-difference sample of the monotonicity of the potential ratio.
    pub ratio_monotone: bool,
    pub estimate_lhs: f64,
    pub estimate_rhs: f64,
    pub estimate_ok: bool,
}

impl PotentialBounds {
    pub fn all_ok(&self) -> bool {
        self.lower_ok && self.upper_ok && self.ratio_monotone && self.estimate_ok
    }
}

/// Checks, at `t > 1` and with slack `tol`:
///
/// * `(t^{n−1} − 1)/((n−1)t^{n−1}) ≤ Γ(t) ≤ (tⁿ − 1)/(n t^{n−1})`;
/// * `t ↦ t^{n−1}Γ(t)/(t^{n−1} − 1)` does not decrease over `[t, t(1+10⁻³)]`;
/// * `(n−½)(t^{2n−2}Γ(t)/(tⁿ−1) − 1/n) ≥ t^{n−1}(t^{n−1}−1)/(tⁿ−1) − (n−1)/(n t)`.
pub fn potential_bounds(n: Dimension, t: f64, tol: f64) -> Result<PotentialBounds> {
    if n.get() < 2 {
        return domain("potential bounds need n ≥ 2");
    }
    if !(t.is_finite() && t > 1.0) {
        return domain(format!("potential bounds need t > 1, got {t}"));
    }
    let k = n.get();
    let nf = n.as_f64();
    let eps = t - 1.0;
    let value = potential_unchecked(n, t);
    let t_pow = t.powi(k as i32 - 1);
    // (t^{n-1} - 1)/t^{n-1} and (t^n - 1)/t^{n-1} through geometric sums
    let lower = eps * geometric_sum(t, k - 1) / ((nf - 1.0) * t_pow);
    let upper = eps * geometric_sum(t, k) / (nf * t_pow);

    let step = 1e-3 * t;
    let ratio_here = potential_ratio(k, eps);
    let ratio_next = potential_ratio(k, eps + step);

    let sums = geometric_sum(t, k - 1) / geometric_sum(t, k);
    let estimate_lhs = (nf - 0.5) * (t_pow * ratio_here * sums - 1.0 / nf);
    let estimate_rhs = t_pow * sums - (nf - 1.0) / (nf * t);

    Ok(PotentialBounds {
        lower,
        value,
        upper,
        lower_ok: lower <= value + tol,
        upper_ok: value <= upper + tol,
        ratio_monotone: ratio_next >= ratio_here - tol,
        estimate_lhs,
        estimate_rhs,
        estimate_ok: estimate_lhs >= estimate_rhs - tol,
    })
}
