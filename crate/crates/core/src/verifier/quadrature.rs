//! Adaptive Simpson quadrature, used as an independent path to the
//! closed-form antiderivatives.

use crate::fields::Field;

const MAX_DEPTH: u32 = 50;

/// `∫ₐᵇ f` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫ₜ₀ᵗ¹ φ_s(s, τ) dτ`, split at the interface heights of the fiber so
/// every sub-integral sees one smooth piece.
pub fn integrate_fiber(field: &dyn Field, s: f64, t0: f64, t1: f64, tol: f64) -> f64 {
    let (lo, hi, sign) = if t0 <= t1 {
        (t0, t1, 1.0)
    } else {
        (t1, t0, -1.0)
    };
    let mut cuts = vec![lo];
    cuts.extend(
        field
            .t_breakpoints(s)
            .into_iter()
            .filter(|&b| b > lo && b < hi),
    );
    cuts.push(hi);
    let pieces = (cuts.len() - 1) as f64;
    let integrand = |t: f64| field.eval(s, t).phi_s;
    let total: f64 = cuts
        .windows(2)
        .map(|w| adaptive_simpson(&integrand, w[0], w[1], tol / pieces))
        .sum();
    sign * total
}
