//! Which sufficient condition, if any, settles the minimiser for given
//! `(n, β, γ)`.

use serde::Serialize;

use crate::energy::{ThermalParams, DEFAULT_SCAN_SAMPLES};
use crate::error::{domain, Result};
use crate::grid::map_indices;
use crate::potentials::Dimension;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `β ≤ γ`: the indicator of `B₁` is calibrated by a constant flux.
    IndicatorByBetaLeGamma,
    /// The optimal energy is non-decreasing in `R`.
    IndicatorByMonotonicity,
    /// `β ≥ n − ½` and an Euler–Lagrange radius `R > 1` exists.
    HarmonicCertified,
    Undetermined,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::IndicatorByBetaLeGamma => "indicator-by-beta-le-gamma",
            Regime::IndicatorByMonotonicity => "indicator-by-monotonicity",
            Regime::HarmonicCertified => "harmonic-certified",
            Regime::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub regime: Regime,
    /// `γ² − sup_r (β² − β(n−1)/r)δ(r)²`.
    pub margin: f64,
    /// Euler–Lagrange radius, for the harmonic regime.
    pub critical_radius: Option<f64>,
}

/// Criteria in order: `β ≤ γ`, monotonicity, harmonic certificate.
pub fn classify(params: ThermalParams, samples: usize) -> Result<Classification> {
    let scan = params.bracket_supremum(samples);
    let margin = params.gamma * params.gamma - scan.sup;
    let outcome = |regime, critical_radius| Classification {
        regime,
        margin,
        critical_radius,
    };
    if params.beta <= params.gamma {
        return Ok(outcome(Regime::IndicatorByBetaLeGamma, None));
    }
    if margin >= 0.0 {
        return Ok(outcome(Regime::IndicatorByMonotonicity, None));
    }
    if params.beta >= params.n.as_f64() - 0.5 {
        let roots = params.critical_radii(scan.scan_limit.max(2.0), samples)?;
        if let Some(&r) = roots.first() {
            return Ok(outcome(Regime::HarmonicCertified, Some(r)));
        }
    }
    Ok(outcome(Regime::Undetermined, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseCell {
    pub beta: f64,
    pub gamma: f64,
    pub regime: Regime,
}

/// Classification of every `(β, γ)` pair, `β`-major.
pub fn phase_diagram(
    n: Dimension,
    betas: &[f64],
    gammas: &[f64],
    samples: usize,
) -> Result<Vec<PhaseCell>> {
    if betas.is_empty() || gammas.is_empty() {
        return domain("phase grids must be nonempty");
    }
    let cells = map_indices(betas.len() * gammas.len(), |k| {
        let (beta, gamma) = (betas[k / gammas.len()], gammas[k % gammas.len()]);
        ThermalParams::new(n, beta, gamma)
            .and_then(|p| classify(p, samples))
            .map(|c| PhaseCell {
                beta,
                gamma,
                regime: c.regime,
            })
    });
    cells.into_iter().collect()
}

/// Default scan resolution of [`classify`].
pub const PHASE_SAMPLES: usize = DEFAULT_SCAN_SAMPLES / 10;

#[cfg(test)]
mod tests {
    use super::*;

    fn classify_at(n: u32, beta: f64, gamma: f64) -> Classification {
        let p = ThermalParams::new(Dimension::new(n).unwrap(), beta, gamma).unwrap();
        classify(p, DEFAULT_SCAN_SAMPLES).unwrap()
    }

    #[test]
    fn regime_examples() {
        assert_eq!(
            classify_at(2, 1.0, 0.4).regime,
            Regime::IndicatorByMonotonicity
        );
        assert_eq!(
            classify_at(2, 0.3, 0.4).regime,
            Regime::IndicatorByBetaLeGamma
        );
        assert_eq!(classify_at(2, 1.0, 0.34).regime, Regime::Undetermined);
        let c = classify_at(2, 2.0, 0.210_786_f64.sqrt());
        assert_eq!(c.regime, Regime::HarmonicCertified);
        assert!((c.critical_radius.unwrap() - 2.0).abs() < 1e-4);
        let c = classify_at(1, 2.0, 0.5);
        assert!((c.critical_radius.unwrap() - 2.5).abs() < 1e-6);
    }

    #[test]
    fn diagram_is_beta_major() {
        let n = Dimension::new(2).unwrap();
        let cells = phase_diagram(n, &[0.3, 1.0], &[0.34, 0.4], 2000).unwrap();
        let labels: Vec<_> = cells.iter().map(|c| c.regime).collect();
        assert_eq!(
            labels,
            vec![
                Regime::IndicatorByBetaLeGamma,
                Regime::IndicatorByBetaLeGamma,
                Regime::Undetermined,
                Regime::IndicatorByMonotonicity
            ]
        );
    }
}
