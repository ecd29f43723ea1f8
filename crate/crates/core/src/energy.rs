//! Energy functionals.
//!
//! Two families are covered:
//!
//! * the one-dimensional Dirichlet free-discontinuity energy of a
//!   piecewise-affine competitor on `[a, b]` with boundary data `m` (left)
//!   and `M` (right);
//! * the thermal insulation energy of radial competitors around the unit
//!   ball: harmonic in `1 < r < R`, trace `δ` on `∂B_R`, zero outside.

use serde::{Deserialize, Serialize};

use crate::error::{domain, CalxError, Result};
use crate::grid::{linspace, map_indices};
use crate::potentials::{critical_bracket, potential_unchecked, robin_trace_unchecked, Dimension};

/// Default number of samples for radius scans.
pub const DEFAULT_SCAN_SAMPLES: usize = 100_000;

/// Absolute tolerance on located critical radii.
pub const ROOT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub dirichlet: f64,
    pub jump: f64,
    pub volume: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(dirichlet: f64, jump: f64, volume: f64) -> Self {
        Self {
            dirichlet,
            jump,
            volume,
            total: dirichlet + jump + volume,
        }
    }
}

/// Values of one affine piece at its two end knots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub start: f64,
    pub end: f64,
}

/// A jump of a 1-D competitor, including jumps against the boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump1D {
    pub position: f64,
    /// Trace on the left of `position`.
    pub left: f64,
    /// Trace on the right of `position`.
    pub right: f64,
}

/// Piecewise-affine function on `[a, b]` with finitely many jumps, and the
/// Dirichlet data it is compared against outside the interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Competitor1D {
    left_data: f64,
    right_data: f64,
    knots: Vec<f64>,
    pieces: Vec<AffinePiece>,
}

impl Competitor1D {
    /// `knots` must be strictly increasing with `pieces.len() == knots.len() - 1`.
    pub fn new(
        left_data: f64,
        right_data: f64,
        knots: Vec<f64>,
        pieces: Vec<AffinePiece>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(CalxError::InvalidCompetitor(msg));
        if knots.len() < 2 {
            return invalid("need at least two knots".into());
        }
        if pieces.len() != knots.len() - 1 {
            return invalid(format!(
                "{} knots need {} pieces, got {}",
                knots.len(),
                knots.len() - 1,
                pieces.len()
            ));
        }
        if knots.iter().any(|x| !x.is_finite()) || knots.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("knots must be finite and strictly increasing".into());
        }
        let values_ok = pieces
            .iter()
            .all(|p| p.start.is_finite() && p.end.is_finite());
        if !values_ok || !left_data.is_finite() || !right_data.is_finite() {
            return invalid("values must be finite".into());
        }
        Ok(Self {
            left_data,
            right_data,
            knots,
            pieces,
        })
    }

    /// The affine function joining `(a, m)` and `(b, big_m)`.
    pub fn affine(a: f64, b: f64, m: f64, big_m: f64) -> Result<Self> {
        Self::new(
            m,
            big_m,
            vec![a, b],
            vec![AffinePiece {
                start: m,
                end: big_m,
            }],
        )
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn boundary_data(&self) -> (f64, f64) {
        (self.left_data, self.right_data)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    /// All jumps, boundary ones included, ordered by position.
    pub fn jumps(&self) -> Vec<Jump1D> {
        let mut jumps = Vec::new();
        let mut previous = self.left_data;
        for (piece, &x) in self.pieces.iter().zip(&self.knots) {
            if piece.start != previous {
                jumps.push(Jump1D {
                    position: x,
                    left: previous,
                    right: piece.start,
                });
            }
            previous = piece.end;
        }
        if previous != self.right_data {
            jumps.push(Jump1D {
                position: self.interval().1,
                left: previous,
                right: self.right_data,
            });
        }
        jumps
    }

    fn piece_index(&self, x: f64) -> usize {
        let idx = self.knots.partition_point(|&k| k <= x);
        idx.clamp(1, self.pieces.len()) - 1
    }

    /// Value at `x` (right limit at interior knots, left limit at `b`).
    pub fn value(&self, x: f64) -> f64 {
        let i = self.piece_index(x);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let p = self.pieces[i];
        p.start + (p.end - p.start) * (x - x0) / (x1 - x0)
    }

    pub fn slope(&self, x: f64) -> f64 {
        let i = self.piece_index(x);
        let p = self.pieces[i];
        (p.end - p.start) / (self.knots[i + 1] - self.knots[i])
    }

    /// Multiplies the competitor and its boundary data by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            left_data: factor * self.left_data,
            right_data: factor * self.right_data,
            knots: self.knots.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece {
                    start: factor * p.start,
                    end: factor * p.end,
                })
                .collect(),
        }
    }

    /// Inserts a knot at `x` without changing the function.
    pub fn refined(&self, x: f64) -> Result<Self> {
        let (a, b) = self.interval();
        if !(x > a && x < b) || self.knots.contains(&x) {
            return domain(format!("cannot refine at {x}"));
        }
        let i = self.piece_index(x);
        let mid = self.value(x);
        let mut knots = self.knots.clone();
        let mut pieces = self.pieces.clone();
        knots.insert(i + 1, x);
        let old = pieces[i];
        pieces[i] = AffinePiece {
            start: old.start,
            end: mid,
        };
        pieces.insert(
            i + 1,
            AffinePiece {
                start: mid,
                end: old.end,
            },
        );
        Self::new(self.left_data, self.right_data, knots, pieces)
    }
}

/// Dirichlet plus jump energy of a 1-D competitor (no volume term).
///
/// A competitor that differs from the boundary data at `a` or `b` pays the
/// jump against that data.
pub fn energy_1d(c: &Competitor1D, beta: f64) -> Result<EnergyBreakdown> {
    if !(beta.is_finite() && beta >= 0.0) {
        return domain(format!("beta must be finite and non-negative, got {beta}"));
    }
    let dirichlet = c
        .pieces
        .iter()
        .zip(c.knots.windows(2))
        .map(|(p, w)| {
            let len = w[1] - w[0];
            let rise = p.end - p.start;
            rise * rise / len
        })
        .sum();
    let jump = beta
        * c.jumps()
            .iter()
            .map(|j| j.left * j.left + j.right * j.right)
            .sum::<f64>();
    Ok(EnergyBreakdown::new(dirichlet, jump, 0.0))
}

/// Problem constants of the thermal insulation functional around `B₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub n: Dimension,
    pub beta: f64,
    pub gamma: f64,
}

impl ThermalParams {
    pub fn new(n: Dimension, beta: f64, gamma: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return domain(format!("beta must be positive, got {beta}"));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return domain(format!("gamma must be non-negative, got {gamma}"));
        }
        Ok(Self { n, beta, gamma })
    }

    fn check_radius(big_r: f64) -> Result<()> {
        if !(big_r.is_finite() && big_r >= 1.0) {
            return domain(format!("R must be ≥ 1, got {big_r}"));
        }
        Ok(())
    }

    /// Energy of the indicator of `B₁`: `βnωₙ + ωₙγ²`.
    pub fn indicator_energy(&self) -> f64 {
        let omega = self.n.unit_ball_volume();
        self.beta * self.n.sphere_area() + omega * self.gamma * self.gamma
    }

    /// Energy of the Robin profile supported in `B_R`:
    /// `nωₙβR^{n−1}δ(R) + ωₙγ²Rⁿ`.
    pub fn optimal_energy(&self, big_r: f64) -> Result<f64> {
        Self::check_radius(big_r)?;
        let n = self.n.get() as i32;
        let delta = robin_trace_unchecked(self.n, self.beta, big_r);
        Ok(self.n.sphere_area() * self.beta * big_r.powi(n - 1) * delta
            + self.n.unit_ball_volume() * self.gamma * self.gamma * big_r.powi(n))
    }

    /// `γ² − (β² − β(n−1)/R)δ(R)²`; has the sign of the energy derivative.
    pub fn derivative_bracket(&self, big_r: f64) -> f64 {
        self.gamma * self.gamma - critical_bracket(self.n, self.beta, big_r)
    }

    /// `E'(R) = nωₙR^{n−1}[γ² − (β² − β(n−1)/R)δ(R)²]`.
    pub fn energy_derivative(&self, big_r: f64) -> Result<f64> {
        Self::check_radius(big_r)?;
        Ok(self.n.sphere_area()
            * big_r.powi(self.n.get() as i32 - 1)
            * self.derivative_bracket(big_r))
    }

    /// Sign changes of `E'` on `]1, rmax]`, located by a uniform scan of
    /// `samples` intervals and refined by bisection to [`ROOT_TOLERANCE`].
    pub fn critical_radii(&self, rmax: f64, samples: usize) -> Result<Vec<f64>> {
        if !(rmax.is_finite() && rmax > 1.0) {
            return domain(format!("rmax must be > 1, got {rmax}"));
        }
        if samples < 2 {
            return domain("need at least two scan samples");
        }
        let radii = linspace(1.0, rmax, samples + 1);
        let values = map_indices(radii.len(), |i| self.derivative_bracket(radii[i]));
        let mut roots = Vec::new();
        for i in 0..samples {
            let (f0, f1) = (values[i], values[i + 1]);
            if f0 == 0.0 {
                // exact zero on a sample: a root only if the sign really changes
                if i > 0 && values[i - 1] * f1 < 0.0 {
                    roots.push(radii[i]);
                }
                continue;
            }
            if f0 * f1 < 0.0 {
                roots.push(self.bisect(radii[i], radii[i + 1], f0));
            }
        }
        Ok(roots)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
        let lo_sign = f_lo.signum();
        while hi - lo > 0.25 * ROOT_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            let f = self.derivative_bracket(mid);
            if f == 0.0 {
                return mid;
            }
            if f.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Infimum of `γ² − (β² − β(n−1)/r)δ(r)²` over `samples + 1` uniform
    /// radii in `[1, rmax]`. A non-negative margin certifies that the
    /// optimal energy is non-decreasing on the scanned range.
    pub fn monotonicity_margin(&self, rmax: f64, samples: usize) -> Result<MarginScan> {
        if !(rmax.is_finite() && rmax > 1.0) {
            return domain(format!("rmax must be > 1, got {rmax}"));
        }
        if samples < 1 {
            return domain("need at least one scan sample");
        }
        let radii = linspace(1.0, rmax, samples + 1);
        let values = map_indices(radii.len(), |i| self.derivative_bracket(radii[i]));
        let (idx, margin) =
            values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |best, (i, v)| if v < best.1 { (i, v) } else { best },
                );
        Ok(MarginScan {
            margin,
            radius: radii[idx],
        })
    }
}

impl ThermalParams {
    /// Supremum of `(β² − β(n−1)/r)δ(r)²` over all `r ≥ 1`.
    ///
    /// The scan is log-spaced on `[1, limit]`; `limit` doubles until
    /// `βδ(limit) ≤ γ`, beyond which the bracket is below `β²δ² ≤ γ²` and
    /// cannot matter for comparisons against `γ²`.
    pub fn bracket_supremum(&self, samples: usize) -> BracketScan {
        let mut limit = 2.0;
        while self.beta * robin_trace_unchecked(self.n, self.beta, limit) > self.gamma
            && limit < MAX_SCAN_RADIUS
        {
            limit *= 2.0;
        }
        let samples = samples.max(2);
        let log_limit = limit.ln();
        let values = map_indices(samples + 1, |i| {
            let r = if i == samples {
                limit
            } else {
                (log_limit * i as f64 / samples as f64).exp()
            };
            (r, critical_bracket(self.n, self.beta, r))
        });
        let (radius, sup) = values
            .into_iter()
            .fold((1.0, f64::NEG_INFINITY), |best, (r, v)| {
                if v > best.1 {
                    (r, v)
                } else {
                    best
                }
            });
        BracketScan {
            sup,
            radius,
            scan_limit: limit,
        }
    }
}

/// Largest radius the bracket scan extends to.
pub const MAX_SCAN_RADIUS: f64 = 1.0e6;

/// Location of the largest sampled bracket value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketScan {
    pub sup: f64,
    pub radius: f64,
    pub scan_limit: f64,
}

/// Result of a margin scan: the smallest sampled value and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginScan {
    pub margin: f64,
    pub radius: f64,
}

/// Radial competitor: 1 on `B₁`, harmonic in the annulus `1 < r < R` with
/// trace `outer_trace` at `r = R`, 0 outside `B_R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub params: ThermalParams,
    pub outer_radius: f64,
    pub outer_trace: f64,
}

impl RadialProfile {
    pub fn new(params: ThermalParams, outer_radius: f64, outer_trace: f64) -> Result<Self> {
        ThermalParams::check_radius(outer_radius)?;
        if !(outer_trace > 0.0 && outer_trace <= 1.0) {
            return domain(format!("outer trace must lie in (0, 1], got {outer_trace}"));
        }
        Ok(Self {
            params,
            outer_radius,
            outer_trace,
        })
    }

    /// The Euler–Lagrange profile, with the Robin trace `δ(R)`.
    pub fn robin(params: ThermalParams, outer_radius: f64) -> Result<Self> {
        ThermalParams::check_radius(outer_radius)?;
        let delta = robin_trace_unchecked(params.n, params.beta, outer_radius);
        Self::new(params, outer_radius, delta)
    }

    /// Dirichlet `nωₙ(1−δ)²/Γ(R)`, jump `βnωₙR^{n−1}δ²`, volume `ωₙγ²Rⁿ`.
    /// At `R = 1` this is the indicator of `B₁`, whatever the trace.
    pub fn energy(&self) -> EnergyBreakdown {
        let ThermalParams { n, beta, gamma } = self.params;
        let area = n.sphere_area();
        let omega = n.unit_ball_volume();
        let big_r = self.outer_radius;
        if big_r == 1.0 {
            return EnergyBreakdown::new(0.0, beta * area, omega * gamma * gamma);
        }
        let k = n.get() as i32;
        let delta = self.outer_trace;
        let dirichlet = area * (1.0 - delta).powi(2) / potential_unchecked(n, big_r);
        let jump = beta * area * big_r.powi(k - 1) * delta * delta;
        let volume = omega * gamma * gamma * big_r.powi(k);
        EnergyBreakdown::new(dirichlet, jump, volume)
    }
}
