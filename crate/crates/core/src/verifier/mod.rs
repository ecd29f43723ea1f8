//! Grid certification of the calibration axioms.
//!
//! Five axiom groups are checked:
//!
//! * `ConditionA`: `φᵗ ≥ ¼φ_s² − γ²·1_{t>0}` at grid nodes;
//! * `ConditionB`: `|Ψ(s, t₂) − Ψ(s, t₁)| ≤ β(t₁² + t₂²)` over all pairs of
//!   a t-grid enriched with the interface heights of the fiber, plus a
//!   golden-section refinement of the pairs with `t₁ = 0`;
//! * `GraphA`: `φ = (2u', u'² − γ²·1_{u>0})` on the calibrated graph;
//! * `GraphB`: `Ψ(s, u⁺) − Ψ(s, u⁻) = β((u⁻)² + (u⁺)²)·ν` at its jumps;
//! * `Divergence`: finite-difference divergence inside each region, normal
//!   flux continuity across interfaces, and boundedness.
//!
//! Every scan runs on a fixed grid and merges results in grid order, so a
//! report depends only on the field and the configuration.

// `!(x <= tol)` on purpose: a NaN residual is a violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod conditions;
mod divergence;
mod graph;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{CalxError, Result};
use crate::fields::{CalibratedGraph, Field};
use crate::grid::linspace;

pub use conditions::{check_condition_a, check_condition_b};
pub use divergence::check_divergence_and_flux;
pub use graph::check_graph_conditions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    ConditionA,
    ConditionB,
    GraphA,
    GraphB,
    Divergence,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::ConditionA,
        Axiom::ConditionB,
        Axiom::GraphA,
        Axiom::GraphB,
        Axiom::Divergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::ConditionA => "condition-a",
            Axiom::ConditionB => "condition-b",
            Axiom::GraphA => "graph-a",
            Axiom::GraphB => "graph-b",
            Axiom::Divergence => "divergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Nodes across the spatial window, endpoints included.
    pub spatial_nodes: usize,
    /// Nodes across the value range for pointwise checks.
    pub t_nodes: usize,
    /// Nodes across the value range whose pairs feed the two-trace bound.
    pub pair_nodes: usize,
    /// Samples along each calibrated graph.
    pub graph_samples: usize,
    /// Finite-difference step for the divergence.
    pub fd_step: f64,
    /// Times the step may be halved when a residual exceeds `tol_div`.
    pub fd_refinements: u32,
    pub tol_a: f64,
    pub tol_b: f64,
    pub tol_graph: f64,
    pub tol_div: f64,
    pub tol_flux: f64,
    /// Violations kept per axiom; the total is always counted.
    pub max_violations: usize,
    pub axioms: AxiomSelection,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            spatial_nodes: 128,
            t_nodes: 129,
            pair_nodes: 128,
            graph_samples: 1000,
            fd_step: 1e-3,
            fd_refinements: 6,
            tol_a: 1e-9,
            tol_b: 1e-9,
            tol_graph: 1e-9,
            tol_div: 1e-5,
            tol_flux: 1e-5,
            max_violations: 64,
            axioms: AxiomSelection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AxiomSelection {
    pub condition_a: bool,
    pub condition_b: bool,
    pub graph_a: bool,
    pub graph_b: bool,
    pub divergence: bool,
}

impl Default for AxiomSelection {
    fn default() -> Self {
        Self {
            condition_a: true,
            condition_b: true,
            graph_a: true,
            graph_b: true,
            divergence: true,
        }
    }
}

impl AxiomSelection {
    pub fn contains(&self, axiom: Axiom) -> bool {
        match axiom {
            Axiom::ConditionA => self.condition_a,
            Axiom::ConditionB => self.condition_b,
            Axiom::GraphA => self.graph_a,
            Axiom::GraphB => self.graph_b,
            Axiom::Divergence => self.divergence,
        }
    }

    pub fn only(axiom: Axiom) -> Self {
        let mut s = Self {
            condition_a: false,
            condition_b: false,
            graph_a: false,
            graph_b: false,
            divergence: false,
        };
        match axiom {
            Axiom::ConditionA => s.condition_a = true,
            Axiom::ConditionB => s.condition_b = true,
            Axiom::GraphA => s.graph_a = true,
            Axiom::GraphB => s.graph_b = true,
            Axiom::Divergence => s.divergence = true,
        }
        s
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("spatial_nodes", self.spatial_nodes),
            ("t_nodes", self.t_nodes),
            ("pair_nodes", self.pair_nodes),
            ("graph_samples", self.graph_samples),
        ];
        for (name, value) in counts {
            if value < 16 {
                return Err(CalxError::Config(format!(
                    "{name} must be at least 16, got {value}"
                )));
            }
        }
        let tolerances = [
            ("fd_step", self.fd_step),
            ("tol_a", self.tol_a),
            ("tol_b", self.tol_b),
            ("tol_graph", self.tol_graph),
            ("tol_div", self.tol_div),
            ("tol_flux", self.tol_flux),
        ];
        for (name, value) in tolerances {
            if !(value.is_finite() && value > 0.0) {
                return Err(CalxError::Config(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Spatial nodes of a window, in the order the scans visit them.
    pub fn spatial_grid(&self, field: &dyn Field) -> Vec<f64> {
        let w = field.geometry().window;
        linspace(w.s_min, w.s_max, self.spatial_nodes)
    }

    /// Value nodes of the pointwise checks.
    pub fn t_grid(&self, field: &dyn Field) -> Vec<f64> {
        let w = field.geometry().window;
        linspace(w.t_min, w.t_max, self.t_nodes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Location {
    Node { s: f64, t: f64 },
    Pair { s: f64, lower: f64, upper: f64 },
    Graph { s: f64, t: f64 },
    Interface { label: String, s: f64, t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// Which part of the axiom group failed.
    pub check: &'static str,
    pub location: Location,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub status: Status,
    pub checked: usize,
    pub violation_count: usize,
    /// Worst observed residual: smallest slack for the inequalities, largest
    /// deviation for the identities.
    pub worst: f64,
    pub violations: Vec<Violation>,
}

impl AxiomResult {
    pub fn skipped(axiom: Axiom) -> Self {
        Self {
            axiom,
            status: Status::Skipped,
            checked: 0,
            violation_count: 0,
            worst: f64::NAN,
            violations: Vec::new(),
        }
    }
}

/// Accumulates residuals of one axiom group in scan order.
#[derive(Debug)]
pub(crate) struct Tally {
    axiom: Axiom,
    cap: usize,
    checked: usize,
    count: usize,
    worst: f64,
    lower_is_worse: bool,
    violations: Vec<Violation>,
}

impl Tally {
    /// `lower_is_worse` for slack-type residuals.
    pub(crate) fn new(axiom: Axiom, cap: usize, lower_is_worse: bool) -> Self {
        Self {
            axiom,
            cap,
            checked: 0,
            count: 0,
            worst: if lower_is_worse { f64::INFINITY } else { 0.0 },
            lower_is_worse,
            violations: Vec::new(),
        }
    }

    pub(crate) fn observe(&mut self, residual: f64) {
        self.checked += 1;
        let worse = if self.lower_is_worse {
            residual < self.worst
        } else {
            residual > self.worst
        };
        if worse || residual.is_nan() {
            self.worst = residual;
        }
    }

    pub(crate) fn violate(
        &mut self,
        check: &'static str,
        location: Location,
        residual: f64,
        tolerance: f64,
    ) {
        self.count += 1;
        if self.violations.len() < self.cap {
            self.violations.push(Violation {
                axiom: self.axiom,
                check,
                location,
                residual,
                tolerance,
            });
        }
    }

    pub(crate) fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.count += other.count;
        let worse = if self.lower_is_worse {
            other.worst < self.worst
        } else {
            other.worst > self.worst
        };
        if worse || other.worst.is_nan() {
            self.worst = other.worst;
        }
        let room = self.cap.saturating_sub(self.violations.len());
        self.violations
            .extend(other.violations.into_iter().take(room));
    }

    pub(crate) fn finish(self) -> AxiomResult {
        AxiomResult {
            axiom: self.axiom,
            status: if self.count == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            checked: self.checked,
            violation_count: self.count,
            worst: self.worst,
            violations: self.violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Construction {
    Built,
    Impossible { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub spatial_nodes: usize,
    pub t_nodes: usize,
    pub pair_nodes: usize,
    pub graph_samples: usize,
    pub fd_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub construction: Construction,
    pub results: Vec<AxiomResult>,
    /// Largest `|φ|` over the pointwise grid.
    pub max_abs_field: f64,
    pub grid: GridMeta,
}

impl VerificationReport {
    /// Report for a construction whose hypotheses failed.
    pub fn impossible(reason: impl Into<String>, config: &VerifyConfig) -> Self {
        Self {
            construction: Construction::Impossible {
                reason: reason.into(),
            },
            results: Axiom::ALL
                .iter()
                .map(|&a| AxiomResult::skipped(a))
                .collect(),
            max_abs_field: f64::NAN,
            grid: GridMeta::from(config),
        }
    }

    pub fn passed(&self) -> bool {
        self.construction == Construction::Built
            && self.results.iter().all(|r| r.status != Status::Fail)
    }

    pub fn result(&self, axiom: Axiom) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }

    pub fn violation_count(&self) -> usize {
        self.results.iter().map(|r| r.violation_count).sum()
    }

    /// One line per axiom group.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Construction::Impossible { reason } = &self.construction {
            out.push_str(&format!("construction impossible: {reason}\n"));
        }
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            out.push_str(&format!(
                "{:<12} {:<8} checked {:>9}  violations {:>6}  worst {:.3e}\n",
                r.axiom.name(),
                status,
                r.checked,
                r.violation_count,
                r.worst
            ));
        }
        out
    }
}

impl From<&VerifyConfig> for GridMeta {
    fn from(c: &VerifyConfig) -> Self {
        Self {
            spatial_nodes: c.spatial_nodes,
            t_nodes: c.t_nodes,
            pair_nodes: c.pair_nodes,
            graph_samples: c.graph_samples,
            fd_step: c.fd_step,
        }
    }
}

/// Runs every selected axiom group against the field and the graphs it
/// claims to calibrate.
pub fn verify_all(field: &dyn Field, config: &VerifyConfig) -> Result<VerificationReport> {
    let graphs = field.calibrated_graphs();
    verify_with_graphs(field, &graphs, config)
}

/// As [`verify_all`], with an explicit list of calibrated graphs.
pub fn verify_with_graphs(
    field: &dyn Field,
    graphs: &[CalibratedGraph],
    config: &VerifyConfig,
) -> Result<VerificationReport> {
    config.validate()?;
    let selected = |a| config.axioms.contains(a);
    let mut results = Vec::with_capacity(5);
    let (a, max_abs_field) = if selected(Axiom::ConditionA) {
        let (r, max) = check_condition_a(field, config);
        (r, max)
    } else {
        (AxiomResult::skipped(Axiom::ConditionA), f64::NAN)
    };
    results.push(a);
    results.push(if selected(Axiom::ConditionB) {
        check_condition_b(field, config)
    } else {
        AxiomResult::skipped(Axiom::ConditionB)
    });
    let (graph_a, graph_b) = check_graph_conditions(field, graphs, config);
    results.push(if selected(Axiom::GraphA) {
        graph_a
    } else {
        AxiomResult::skipped(Axiom::GraphA)
    });
    results.push(if selected(Axiom::GraphB) {
        graph_b
    } else {
        AxiomResult::skipped(Axiom::GraphB)
    });
    results.push(if selected(Axiom::Divergence) {
        check_divergence_and_flux(field, config)
    } else {
        AxiomResult::skipped(Axiom::Divergence)
    });
    Ok(VerificationReport {
        construction: Construction::Built,
        results,
        max_abs_field,
        grid: GridMeta::from(config),
    })
}
