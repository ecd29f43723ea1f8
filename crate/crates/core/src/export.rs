//! CSV and JSON emission. Floats are written as `{:.16e}` (17 significant
//! digits), so outputs are byte-stable and round-trip exactly.

use std::io::Write;

use serde::Serialize;

use crate::energy::ThermalParams;
use crate::error::{domain, Result};
use crate::grid::{linspace, map_indices};
use crate::oracle::RadialSweep;
use crate::phase::PhaseCell;

pub const ENERGY_CURVE_HEADER: [&str; 3] = ["R", "E", "dE_dR"];
pub const PHASE_HEADER: [&str; 3] = ["beta", "gamma", "regime"];
pub const SWEEP_HEADER: [&str; 6] = ["R", "delta", "dirichlet", "jump", "volume", "total"];

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub radius: f64,
    pub energy: f64,
    pub derivative: f64,
}

/// `samples + 1` evenly spaced radii on `[1, rmax]`.
pub fn energy_curve(params: ThermalParams, rmax: f64, samples: usize) -> Result<Vec<CurvePoint>> {
    if !(rmax.is_finite() && rmax > 1.0) {
        return domain(format!("rmax must be > 1, got {rmax}"));
    }
    if samples == 0 {
        return domain("need at least one sample");
    }
    let radii = linspace(1.0, rmax, samples + 1);
    map_indices(radii.len(), |i| {
        let r = radii[i];
        Ok(CurvePoint {
            radius: r,
            energy: params.optimal_energy(r)?,
            derivative: params.energy_derivative(r)?,
        })
    })
    .into_iter()
    .collect()
}

/// Sidecar of an energy curve: its parameters and critical radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSidecar {
    pub n: u32,
    pub beta: f64,
    pub gamma: f64,
    pub rmax: f64,
    pub samples: usize,
    pub critical_radii: Vec<f64>,
    pub derivative_nonnegative: bool,
}

pub fn write_energy_curve<W: Write>(out: W, points: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ENERGY_CURVE_HEADER)?;
    for p in points {
        w.write_record([
            fmt_float(p.radius),
            fmt_float(p.energy),
            fmt_float(p.derivative),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_phase_diagram<W: Write>(out: W, cells: &[PhaseCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PHASE_HEADER)?;
    for c in cells {
        w.write_record([
            fmt_float(c.beta),
            fmt_float(c.gamma),
            c.regime.label().to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(out: W, sweep: &RadialSweep) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in &sweep.rows {
        let e = row.energy;
        w.write_record([
            fmt_float(row.radius),
            fmt_float(row.trace),
            fmt_float(e.dirichlet),
            fmt_float(e.jump),
            fmt_float(e.volume),
            fmt_float(e.total),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Dimension;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e-7, 6.02e23] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_float(2.5), "2.5000000000000000e0");
    }

    #[test]
    fn energy_curve_csv_is_stable() {
        let p = ThermalParams::new(Dimension::new(2).unwrap(), 1.0, 0.34).unwrap();
        let pts = energy_curve(p, 10.0, 50).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_energy_curve(&mut a, &pts).unwrap();
        write_energy_curve(&mut b, &energy_curve(p, 10.0, 50).unwrap()).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("R,E,dE_dR\n"));
        assert_eq!(text.lines().count(), 52);
    }
}
