//! Brute-force baselines that share nothing with the calibration code.
//!
//! * [`oracle_1d_best`]: exhaustive search over one-dimensional competitors
//!   with at most two jumps on a location/value grid.
//! * [`oracle_robin_shooting`]: the Robin trace from integrating the radial
//!   Laplace equation.
//! * [`oracle_radial_sweep`]: energies of the radial family on a grid.

use serde::Serialize;

use crate::energy::{AffinePiece, Competitor1D, EnergyBreakdown, RadialProfile, ThermalParams};
use crate::error::{domain, CalxError, Result};
use crate::grid::map_indices;
use crate::potentials::Dimension;

/// Strict improvement needed to replace an incumbent in the 1-D search.
const IMPROVEMENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpSearchSpace {
    /// Grid steps across `[0, 1]` for both locations and values.
    pub resolution: usize,
    pub max_jumps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub competitor: Competitor1D,
    pub energy: f64,
    pub jump_count: usize,
    /// Location of the leftmost jump, if any.
    pub first_jump: Option<f64>,
    pub space: JumpSearchSpace,
}

/// Cheapest affine piece of a fixed length between two prescribed ends,
/// plus β times the squares of the free end values.
struct Side {
    values: Vec<f64>,
    beta: f64,
}

impl Side {
    /// `min_p (p − m)²/x + βp²`, the piece from `(0, m)` to `(x, p)`.
    /// `x = 0` forces `p = m`.
    fn left(&self, m: f64, x: f64) -> (f64, f64) {
        if x == 0.0 {
            return (self.beta * m * m, m);
        }
        self.best(|p| (p - m).powi(2) / x + self.beta * p * p)
    }

    /// `min_q βq² + (M − q)²/len`; `len = 0` forces `q = M`.
    fn right(&self, big_m: f64, len: f64) -> (f64, f64) {
        if len == 0.0 {
            return (self.beta * big_m * big_m, big_m);
        }
        self.best(|q| self.beta * q * q + (big_m - q).powi(2) / len)
    }

    /// `min_{q,p} βq² + (p − q)²/len + βp²` for an interior piece. For fixed
    /// `q` the cost is convex in `p`, so its grid minimum sits at one of
    /// the two grid values bracketing the unconstrained minimiser.
    fn middle(&self, len: f64) -> (f64, f64, f64) {
        let steps = (self.values.len() - 1) as f64;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for &q in &self.values {
            let p_star = q / (1.0 + self.beta * len);
            let k = (p_star * steps).floor() as usize;
            for j in [k, (k + 1).min(self.values.len() - 1)] {
                let p = self.values[j];
                let cost = self.beta * (q * q + p * p) + (p - q).powi(2) / len;
                if cost < best.0 - IMPROVEMENT {
                    best = (cost, q, p);
                }
            }
        }
        best
    }

    fn best(&self, cost: impl Fn(f64) -> f64) -> (f64, f64) {
        self.values
            .iter()
            .map(|&v| (cost(v), v))
            .fold((f64::INFINITY, 0.0), |acc, c| {
                if c.0 < acc.0 - IMPROVEMENT {
                    c
                } else {
                    acc
                }
            })
    }
}

fn validate_1d(m: f64, big_m: f64, beta: f64, resolution: usize) -> Result<()> {
    if !(0.0 <= m && m <= big_m && big_m <= 1.0) {
        return domain(format!("need 0 ≤ m ≤ M ≤ 1, got m={m}, M={big_m}"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    if resolution < 2 {
        return domain("resolution must be at least 2");
    }
    Ok(())
}

fn grid(resolution: usize) -> Vec<f64> {
    (0..=resolution)
        .map(|i| i as f64 / resolution as f64)
        .collect()
}

fn competitor(
    m: f64,
    big_m: f64,
    knots: Vec<f64>,
    pieces: Vec<(f64, f64)>,
) -> Result<Competitor1D> {
    let pieces = pieces
        .into_iter()
        .map(|(start, end)| AffinePiece { start, end })
        .collect();
    Competitor1D::new(m, big_m, knots, pieces)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    energy: f64,
    jumps: usize,
    first: f64,
    build: Shape,
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Affine,
    One {
        x: f64,
        p: f64,
        q: f64,
    },
    Two {
        x1: f64,
        p1: f64,
        q1: f64,
        x2: f64,
        p2: f64,
        q2: f64,
    },
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.energy < other.energy - IMPROVEMENT {
            return true;
        }
        if self.energy > other.energy + IMPROVEMENT {
            return false;
        }
        (self.jumps, self.first) < (other.jumps, other.first)
    }
}

fn realise(m: f64, big_m: f64, shape: Shape) -> Result<Competitor1D> {
    match shape {
        Shape::Affine => Competitor1D::affine(0.0, 1.0, m, big_m),
        Shape::One { x, p, q } => {
            if x == 0.0 {
                competitor(m, big_m, vec![0.0, 1.0], vec![(q, big_m)])
            } else if x == 1.0 {
                competitor(m, big_m, vec![0.0, 1.0], vec![(m, p)])
            } else {
                competitor(m, big_m, vec![0.0, x, 1.0], vec![(m, p), (q, big_m)])
            }
        }
        Shape::Two {
            x1,
            p1,
            q1,
            x2,
            p2,
            q2,
        } => {
            let mut knots = vec![0.0];
            let mut pieces = Vec::new();
            if x1 > 0.0 {
                knots.push(x1);
                pieces.push((m, p1));
            }
            knots.push(x2);
            pieces.push((q1, p2));
            if x2 < 1.0 {
                knots.push(1.0);
                pieces.push((q2, big_m));
            }
            competitor(m, big_m, knots, pieces)
        }
    }
}

/// Number of genuine jumps of a shape (equal traces are not a jump).
fn jump_count(m: f64, big_m: f64, shape: Shape) -> usize {
    match shape {
        Shape::Affine => 0,
        Shape::One { x, p, q } => {
            let left = if x == 0.0 { m } else { p };
            let right = if x == 1.0 { big_m } else { q };
            usize::from(left != right)
        }
        Shape::Two {
            x1,
            p1,
            q1,
            p2,
            q2,
            x2,
        } => {
            let first = if x1 == 0.0 { m } else { p1 };
            let last = if x2 == 1.0 { big_m } else { q2 };
            usize::from(first != q1) + usize::from(p2 != last)
        }
    }
}

fn search(
    m: f64,
    big_m: f64,
    beta: f64,
    resolution: usize,
    jumps: &[usize],
) -> Result<OracleResult> {
    validate_1d(m, big_m, beta, resolution)?;
    let values = grid(resolution);
    let side = Side {
        values: values.clone(),
        beta,
    };
    let xs = grid(resolution);
    let left = map_indices(xs.len(), |i| side.left(m, xs[i]));
    let right = map_indices(xs.len(), |i| side.right(big_m, 1.0 - xs[i]));

    let mut candidates = Vec::new();
    if jumps.contains(&0) {
        candidates.push(Candidate {
            energy: (big_m - m).powi(2),
            jumps: 0,
            first: f64::INFINITY,
            build: Shape::Affine,
        });
    }
    if jumps.contains(&1) {
        for (i, &x) in xs.iter().enumerate() {
            let (cl, p) = left[i];
            let (cr, q) = right[i];
            let shape = Shape::One { x, p, q };
            candidates.push(Candidate {
                energy: cl + cr,
                jumps: jump_count(m, big_m, shape),
                first: x,
                build: shape,
            });
        }
    }
    if jumps.contains(&2) {
        let middle = map_indices(xs.len(), |k| {
            if k == 0 {
                None
            } else {
                Some(side.middle(xs[k]))
            }
        });
        let rows = map_indices(xs.len(), |i| {
            let mut best: Option<Candidate> = None;
            for j in i + 1..xs.len() {
                let Some((cm, q1, p2)) = middle[j - i] else {
                    continue;
                };
                let (cl, p1) = left[i];
                let (cr, q2) = right[j];
                let shape = Shape::Two {
                    x1: xs[i],
                    p1,
                    q1,
                    x2: xs[j],
                    p2,
                    q2,
                };
                let c = Candidate {
                    energy: cl + cm + cr,
                    jumps: jump_count(m, big_m, shape),
                    first: xs[i],
                    build: shape,
                };
                if best.as_ref().is_none_or(|b| c.beats(b)) {
                    best = Some(c);
                }
            }
            best
        });
        candidates.extend(rows.into_iter().flatten());
    }
    let best = candidates
        .into_iter()
        .reduce(|a, b| if b.beats(&a) { b } else { a })
        .ok_or_else(|| CalxError::Domain("no jump count requested".into()))?;
    let competitor = realise(m, big_m, best.build)?;
    let first_jump = competitor.jumps().first().map(|j| j.position);
    Ok(OracleResult {
        jump_count: competitor.jumps().len(),
        competitor,
        energy: best.energy,
        first_jump,
        space: JumpSearchSpace {
            resolution,
            max_jumps: jumps.iter().copied().max().unwrap_or(0),
        },
    })
}

/// Best competitor on `[0, 1]` with data `m` at 0 and `M` at 1 and at most
/// `max_jumps ≤ 2` jumps. Ties go to fewer jumps, then to the leftmost one.
pub fn oracle_1d_best(
    m: f64,
    big_m: f64,
    beta: f64,
    max_jumps: usize,
    resolution: usize,
) -> Result<OracleResult> {
    if max_jumps > 2 {
        return domain(format!("at most two jumps are searched, got {max_jumps}"));
    }
    let counts: Vec<usize> = (0..=max_jumps).collect();
    search(m, big_m, beta, resolution, &counts)
}

/// Best competitor among shapes built with exactly `jumps` jump slots.
/// A slot whose two traces coincide costs the same as no jump, so this is
/// an upper bound for the best competitor with exactly that many jumps.
pub fn best_with_jump_slots(
    m: f64,
    big_m: f64,
    beta: f64,
    jumps: usize,
    resolution: usize,
) -> Result<OracleResult> {
    if jumps > 2 {
        return domain(format!("at most two jumps are searched, got {jumps}"));
    }
    search(m, big_m, beta, resolution, &[jumps])
}

/// Fixed step for the Robin shooting integrator.
pub const SHOOTING_STEP: f64 = 1e-4;

/// State `(u, u')` at `R` of the radial Laplace equation from `(1, slope)`.
fn integrate_radial(n: Dimension, big_r: f64, u0: f64, slope: f64) -> (f64, f64) {
    let steps = ((big_r - 1.0) / SHOOTING_STEP).ceil().max(1.0) as usize;
    let h = (big_r - 1.0) / steps as f64;
    let k = n.as_f64() - 1.0;
    let rhs = |r: f64, (_, v): (f64, f64)| (v, -k * v / r);
    let (mut u, mut v) = (u0, slope);
    for i in 0..steps {
        let r = 1.0 + i as f64 * h;
        let k1 = rhs(r, (u, v));
        let k2 = rhs(r + 0.5 * h, (u + 0.5 * h * k1.0, v + 0.5 * h * k1.1));
        let k3 = rhs(r + 0.5 * h, (u + 0.5 * h * k2.0, v + 0.5 * h * k2.1));
        let k4 = rhs(r + h, (u + h * k3.0, v + h * k3.1));
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (u, v)
}

/// `u(R)` for the radial harmonic `u` with `u(1) = 1` and `u' + βu = 0` at
/// `R`, by RK4 shooting on `u'(1)` and bisection on the Robin residual.
///
/// The equation is linear, so each shot is the superposition of two
/// integrated solutions, `(1, 0)` and `(0, 1)` at `r = 1`.
pub fn oracle_robin_shooting(n: Dimension, beta: f64, big_r: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    if !(big_r.is_finite() && big_r >= 1.0) {
        return domain(format!("R must be ≥ 1, got {big_r}"));
    }
    if big_r == 1.0 {
        return Ok(1.0);
    }
    let constant = integrate_radial(n, big_r, 1.0, 0.0);
    let sloped = integrate_radial(n, big_r, 0.0, 1.0);
    let shoot = |s: f64| {
        let u = constant.0 + s * sloped.0;
        let du = constant.1 + s * sloped.1;
        (u, du + beta * u)
    };
    // residual is β > 0 at s = 0 and decreases in s
    let mut lo = -1.0;
    let mut expansions = 0;
    while shoot(lo).1 > 0.0 {
        lo *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(CalxError::Numeric(format!(
                "shooting bracket not found for n={}, beta={beta}, R={big_r}",
                n.get()
            )));
        }
    }
    let mut hi = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if shoot(mid).1 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (u, residual) = shoot(0.5 * (lo + hi));
    if !u.is_finite() || residual.abs() > 1e-8 * (1.0 + beta) {
        return Err(CalxError::Numeric(format!(
            "shooting did not converge: residual {residual:e}, u(R) = {u}"
        )));
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub radius: f64,
    pub trace: f64,
    pub energy: EnergyBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSweep {
    /// Row 0 is the indicator of `B₁`; the rest follow the `R`-major grid.
    pub rows: Vec<SweepRow>,
    pub best: SweepRow,
}

impl RadialSweep {
    pub fn indicator_wins(&self) -> bool {
        self.best.radius == 1.0
    }
}

/// Energies of the radial family on `radii × traces` plus the indicator.
/// Radii must be `> 1`, traces in `(0, 1]`.
pub fn oracle_radial_sweep(
    params: ThermalParams,
    radii: &[f64],
    traces: &[f64],
) -> Result<RadialSweep> {
    if radii.iter().any(|&r| !(r.is_finite() && r > 1.0)) {
        return domain("sweep radii must exceed 1");
    }
    if traces.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return domain("sweep traces must lie in (0, 1]");
    }
    let indicator = SweepRow {
        radius: 1.0,
        trace: 1.0,
        energy: RadialProfile::new(params, 1.0, 1.0)?.energy(),
    };
    let per_radius = map_indices(radii.len(), |i| {
        traces
            .iter()
            .map(|&d| SweepRow {
                radius: radii[i],
                trace: d,
                energy: RadialProfile {
                    params,
                    outer_radius: radii[i],
                    outer_trace: d,
                }
                .energy(),
            })
            .collect::<Vec<_>>()
    });
    let mut rows = vec![indicator];
    rows.extend(per_radius.into_iter().flatten());
    let best = rows
        .iter()
        .copied()
        .reduce(|a, b| {
            if b.energy.total < a.energy.total {
                b
            } else {
                a
            }
        })
        .expect("sweep has the indicator row");
    Ok(RadialSweep { rows, best })
}
