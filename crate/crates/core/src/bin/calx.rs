//! `calx`: energy curves, calibration checks, phase diagrams and oracles.
//!
//! Exit codes: 0 certified / success, 1 hypothesis or axiom violation,
//! 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use calx::energy::{ThermalParams, DEFAULT_SCAN_SAMPLES};
use calx::export::{self, CurveSidecar};
use calx::fields::{
    build_field_ball_harmonic, build_field_harmonic, build_field_indicator_const,
    build_field_indicator_two_piece, BallHarmonicOptions, HarmonicProfile, PiecewiseField,
};
use calx::oracle::{oracle_1d_best, oracle_radial_sweep, oracle_robin_shooting};
use calx::phase::{phase_diagram, PHASE_SAMPLES};
use calx::potentials::{robin_trace, Dimension};
use calx::verifier::{verify_all, VerificationReport, VerifyConfig};
use calx::CalxError;

/// Energy slack allowed between a certified candidate and the oracles.
const ORACLE_SLACK: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(
    name = "calx",
    version,
    about = "Explicit calibrations for the thermal insulation functional"
)]
struct Cli {
    /// JSON file with parameter defaults; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal energy E(R) and E'(R) on [1, rmax], with critical radii.
    EnergyCurve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Sidecar JSON with the critical radii (default: <out>.critical.json).
        #[arg(long, value_name = "FILE")]
        sidecar: Option<PathBuf>,
    },
    /// Check a theorem's hypotheses, build its field and verify the axioms.
    Check {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        verify: VerifyArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Also run the matching brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Build the ball field even when beta < n - 1/2, to see which
        /// axioms then fail.
        #[arg(long)]
        no_beta_bound: bool,
    },
    /// Regime of every (beta, gamma) pair of a grid.
    PhaseDiagram {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: PhaseGridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// JSON description of a field: parameters, regions and interfaces.
    Describe {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Energies of the radial family on an (R, delta) grid.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of radii in (1, rmax].
        #[arg(long)]
        r_count: Option<usize>,
        /// Number of outer traces in (0, 1].
        #[arg(long)]
        delta_count: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive 1-D search over competitors with at most two jumps.
    Oracle1d {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        max_jumps: Option<usize>,
        #[arg(long)]
        resolution: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Robin trace: closed form against the shooting solver.
    Robin {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Theorem {
    Harmonic,
    IndicatorConst,
    IndicatorTwoPiece,
    BallHarmonic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

/// Problem parameters. Every field may also come from the config file.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ParamArgs {
    /// Space dimension.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Lower Dirichlet value.
    #[arg(long)]
    m: Option<f64>,
    /// Upper Dirichlet value.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    big_m: Option<f64>,
    /// Outer radius of the harmonic profile.
    #[arg(long = "R")]
    #[serde(rename = "R")]
    big_r: Option<f64>,
    /// Gradient bound of the affine profile.
    #[arg(long)]
    sup_grad: Option<f64>,
    /// Upper end of radius scans; also the outer edge of indicator windows.
    #[arg(long)]
    rmax: Option<f64>,
    /// Samples of a scan or curve.
    #[arg(long)]
    samples: Option<usize>,
}

impl ParamArgs {
    fn merged(self, file: &ParamArgs) -> ParamArgs {
        ParamArgs {
            n: self.n.or(file.n),
            beta: self.beta.or(file.beta),
            gamma: self.gamma.or(file.gamma),
            m: self.m.or(file.m),
            big_m: self.big_m.or(file.big_m),
            big_r: self.big_r.or(file.big_r),
            sup_grad: self.sup_grad.or(file.sup_grad),
            rmax: self.rmax.or(file.rmax),
            samples: self.samples.or(file.samples),
        }
    }

    fn dimension(&self) -> Result<Dimension, Failure> {
        Dimension::new(need(self.n, "--n")?).map_err(Failure::usage)
    }

    fn thermal(&self) -> Result<ThermalParams, Failure> {
        let n = self.dimension()?;
        ThermalParams::new(n, need(self.beta, "--beta")?, need(self.gamma, "--gamma")?)
            .map_err(Failure::usage)
    }
}

#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct VerifyArgs {
    #[arg(long)]
    spatial_nodes: Option<usize>,
    #[arg(long)]
    t_nodes: Option<usize>,
    #[arg(long)]
    pair_nodes: Option<usize>,
    #[arg(long)]
    graph_samples: Option<usize>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    tol_a: Option<f64>,
    #[arg(long)]
    tol_b: Option<f64>,
    #[arg(long)]
    tol_graph: Option<f64>,
    #[arg(long)]
    tol_div: Option<f64>,
    #[arg(long)]
    tol_flux: Option<f64>,
}

impl VerifyArgs {
    fn config(&self, file: &VerifyArgs) -> VerifyConfig {
        let d = VerifyConfig::default();
        VerifyConfig {
            spatial_nodes: self
                .spatial_nodes
                .or(file.spatial_nodes)
                .unwrap_or(d.spatial_nodes),
            t_nodes: self.t_nodes.or(file.t_nodes).unwrap_or(d.t_nodes),
            pair_nodes: self.pair_nodes.or(file.pair_nodes).unwrap_or(d.pair_nodes),
            graph_samples: self
                .graph_samples
                .or(file.graph_samples)
                .unwrap_or(d.graph_samples),
            fd_step: self.fd_step.or(file.fd_step).unwrap_or(d.fd_step),
            tol_a: self.tol_a.or(file.tol_a).unwrap_or(d.tol_a),
            tol_b: self.tol_b.or(file.tol_b).unwrap_or(d.tol_b),
            tol_graph: self.tol_graph.or(file.tol_graph).unwrap_or(d.tol_graph),
            tol_div: self.tol_div.or(file.tol_div).unwrap_or(d.tol_div),
            tol_flux: self.tol_flux.or(file.tol_flux).unwrap_or(d.tol_flux),
            ..d
        }
    }
}

#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PhaseGridArgs {
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    beta_count: Option<usize>,
    #[arg(long)]
    gamma_min: Option<f64>,
    #[arg(long)]
    gamma_max: Option<f64>,
    #[arg(long)]
    gamma_count: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Config file layout: flat parameters plus optional grouped overrides.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    #[serde(flatten)]
    params: ParamArgs,
    verify: VerifyArgs,
    phase: PhaseGridArgs,
}

#[derive(Debug)]
enum Failure {
    /// Bad arguments; exit 2.
    Usage(String),
    /// Hypothesis or axiom violation; exit 1.
    Rejected(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CalxError> for Failure {
    fn from(e: CalxError) -> Self {
        match e {
            CalxError::Hypothesis(reason) => Failure::Rejected(reason),
            CalxError::Numeric(reason) => Failure::Rejected(reason),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("missing required parameter {flag}")))
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("CALX_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "CALX_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(Failure::usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("not certified: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::EnergyCurve {
            params,
            output,
            sidecar,
        } => energy_curve(params.merged(&file.params), output, sidecar),
        Command::Check {
            theorem,
            params,
            verify,
            output,
            oracle,
            no_beta_bound,
        } => check(
            theorem,
            &params.merged(&file.params),
            verify.config(&file.verify),
            output,
            oracle,
            !no_beta_bound,
        ),
        Command::PhaseDiagram {
            params,
            grid,
            output,
        } => phase(params.merged(&file.params), grid, &file.phase, output),
        Command::Describe {
            theorem,
            params,
            output,
        } => describe(theorem, &params.merged(&file.params), output),
        Command::Sweep {
            params,
            r_count,
            delta_count,
            output,
        } => sweep(params.merged(&file.params), r_count, delta_count, output),
        Command::Oracle1d {
            params,
            max_jumps,
            resolution,
            output,
        } => oracle_1d(params.merged(&file.params), max_jumps, resolution, output),
        Command::Robin { params, output } => robin(params.merged(&file.params), output),
    }
}

fn energy_curve(
    params: ParamArgs,
    output: OutputArgs,
    sidecar: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let thermal = params.thermal()?;
    let rmax = params.rmax.unwrap_or(10.0);
    let samples = params.samples.unwrap_or(1000);
    let points = export::energy_curve(thermal, rmax, samples).map_err(Failure::usage)?;
    let roots = thermal
        .critical_radii(rmax, DEFAULT_SCAN_SAMPLES)
        .map_err(Failure::usage)?;
    let margin = thermal
        .monotonicity_margin(rmax, DEFAULT_SCAN_SAMPLES)
        .map_err(Failure::usage)?;
    let meta = CurveSidecar {
        n: thermal.n.get(),
        beta: thermal.beta,
        gamma: thermal.gamma,
        rmax,
        samples,
        critical_radii: roots,
        derivative_nonnegative: margin.margin >= 0.0,
    };
    let mut out = open_output(output.out.as_deref())?;
    match output.format.unwrap_or(Format::Csv) {
        Format::Json => {
            export::write_json(&mut out, &json!({ "curve": points, "critical": meta }))?
        }
        _ => export::write_energy_curve(&mut out, &points)?,
    }
    out.flush()?;
    let sidecar = sidecar.or_else(|| {
        output
            .out
            .as_ref()
            .map(|p| p.with_extension("critical.json"))
    });
    if let Some(path) = sidecar {
        export::write_json(open_output(Some(&path))?, &meta)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn build(
    theorem: Theorem,
    params: &ParamArgs,
    beta_bound: bool,
) -> Result<PiecewiseField, Failure> {
    Ok(match theorem {
        Theorem::Harmonic => {
            let m = need(params.m, "--m")?;
            let big_m = need(params.big_m, "--M")?;
            let beta = need(params.beta, "--beta")?;
            let sup = params.sup_grad.unwrap_or(big_m - m);
            let profile =
                HarmonicProfile::affine_with_gradient(m, big_m, sup).map_err(Failure::usage)?;
            build_field_harmonic(profile, beta)?.into()
        }
        Theorem::IndicatorConst => {
            build_field_indicator_const(params.thermal()?, params.rmax)?.into()
        }
        Theorem::IndicatorTwoPiece => {
            build_field_indicator_two_piece(params.thermal()?, params.rmax)?.into()
        }
        Theorem::BallHarmonic => {
            let options = BallHarmonicOptions {
                outer: params.rmax,
                enforce_beta_bound: beta_bound,
                ..Default::default()
            };
            build_field_ball_harmonic(params.thermal()?, need(params.big_r, "--R")?, options)?
        }
    })
}

#[derive(Debug, Serialize)]
struct OracleSummary {
    candidate_energy: f64,
    oracle_energy: f64,
    oracle_detail: serde_json::Value,
    consistent: bool,
}

fn run_oracle(
    field: &PiecewiseField,
    params: &ParamArgs,
) -> Result<Option<OracleSummary>, Failure> {
    Ok(match field {
        PiecewiseField::Dirichlet(f) => {
            let (m, big_m) = (f.lower_value(), f.upper_value());
            if big_m > 1.0 {
                return Ok(None);
            }
            // the problem on [0, L] is the unit-interval one with jump coefficient βL
            let beta0 = f.lambda_choice().beta0;
            if beta0 == 0.0 {
                return Ok(None);
            }
            let best = oracle_1d_best(m, big_m, beta0, 2, 1000)?;
            let candidate = (big_m - m).powi(2);
            Some(OracleSummary {
                candidate_energy: candidate,
                oracle_energy: best.energy,
                consistent: best.energy >= candidate - ORACLE_SLACK,
                oracle_detail: json!({ "jumps": best.jump_count, "first_jump": best.first_jump }),
            })
        }
        _ => {
            let thermal = params.thermal()?;
            let candidate = match field {
                PiecewiseField::BallHarmonic(f) => thermal.optimal_energy(f.outer_radius())?,
                _ => thermal.indicator_energy(),
            };
            let rmax = params
                .rmax
                .unwrap_or(10.0)
                .max(params.big_r.unwrap_or(1.0) * 2.0);
            let radii: Vec<f64> = (1..=400)
                .map(|i| 1.0 + (rmax - 1.0) * i as f64 / 400.0)
                .collect();
            let traces: Vec<f64> = (1..=400).map(|i| i as f64 / 400.0).collect();
            let sweep = oracle_radial_sweep(thermal, &radii, &traces)?;
            Some(OracleSummary {
                candidate_energy: candidate,
                oracle_energy: sweep.best.energy.total,
                consistent: sweep.best.energy.total >= candidate - ORACLE_SLACK,
                oracle_detail: json!({ "best_radius": sweep.best.radius, "best_trace": sweep.best.trace }),
            })
        }
    })
}

fn check(
    theorem: Theorem,
    params: &ParamArgs,
    config: VerifyConfig,
    output: OutputArgs,
    with_oracle: bool,
    beta_bound: bool,
) -> Result<ExitCode, Failure> {
    config.validate().map_err(Failure::usage)?;
    let format = output.format.unwrap_or(Format::Text);
    let built = match build(theorem, params, beta_bound) {
        Ok(f) => Ok(f),
        Err(Failure::Rejected(reason)) => Err(reason),
        Err(usage) => return Err(usage),
    };
    let (report, field) = match built {
        Ok(field) => (verify_all(&field, &config)?, Some(field)),
        Err(reason) => (VerificationReport::impossible(reason, &config), None),
    };
    let oracle = match (&field, with_oracle) {
        (Some(f), true) => run_oracle(f, params)?,
        _ => None,
    };
    let certified = report.passed() && oracle.as_ref().is_none_or(|o| o.consistent);
    let mut out = open_output(output.out.as_deref())?;
    match format {
        Format::Json => export::write_json(
            &mut out,
            &json!({
                "theorem": format!("{theorem:?}"),
                "field": field.as_ref().map(|f| f.kind()),
                "certified": certified,
                "report": report,
                "oracle": oracle,
            }),
        )?,
        _ => {
            writeln!(
                out,
                "field: {}",
                field.as_ref().map_or("none", |f| f.kind())
            )?;
            write!(out, "{}", report.summary())?;
            for r in &report.results {
                for v in r.violations.iter().take(5) {
                    writeln!(
                        out,
                        "  {} {} at {:?}: residual {:.3e} (tol {:.1e})",
                        v.axiom.name(),
                        v.check,
                        v.location,
                        v.residual,
                        v.tolerance
                    )?;
                }
            }
            if let Some(o) = &oracle {
                writeln!(
                    out,
                    "oracle: candidate {:.12} vs search {:.12} ({})",
                    o.candidate_energy,
                    o.oracle_energy,
                    if o.consistent {
                        "consistent"
                    } else {
                        "INCONSISTENT"
                    }
                )?;
            }
            writeln!(
                out,
                "{}",
                if certified {
                    "certified"
                } else {
                    "not certified"
                }
            )?;
        }
    }
    out.flush()?;
    if certified {
        return Ok(ExitCode::SUCCESS);
    }
    if let calx::verifier::Construction::Impossible { reason } = &report.construction {
        return Err(Failure::Rejected(reason.clone()));
    }
    Ok(ExitCode::from(1))
}

fn grid(min: f64, max: f64, count: usize, name: &str) -> Result<Vec<f64>, Failure> {
    if count == 0 || !(min.is_finite() && max.is_finite()) || min > max || min <= 0.0 {
        return Err(Failure::Usage(format!(
            "{name} grid needs 0 < min ≤ max and count ≥ 1, got [{min}, {max}] × {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

fn phase(
    params: ParamArgs,
    flags: PhaseGridArgs,
    file: &PhaseGridArgs,
    output: OutputArgs,
) -> Result<ExitCode, Failure> {
    let n = params.dimension()?;
    let pick = |a: Option<f64>, b: Option<f64>, d: f64| a.or(b).unwrap_or(d);
    let pick_n = |a: Option<usize>, b: Option<usize>, d: usize| a.or(b).unwrap_or(d);
    let betas = grid(
        pick(flags.beta_min, file.beta_min, 0.1),
        pick(flags.beta_max, file.beta_max, 4.0),
        pick_n(flags.beta_count, file.beta_count, 40),
        "beta",
    )?;
    let gammas = grid(
        pick(flags.gamma_min, file.gamma_min, 0.1),
        pick(flags.gamma_max, file.gamma_max, 2.0),
        pick_n(flags.gamma_count, file.gamma_count, 40),
        "gamma",
    )?;
    let cells = phase_diagram(n, &betas, &gammas, params.samples.unwrap_or(PHASE_SAMPLES))?;
    let mut out = open_output(output.out.as_deref())?;
    match output.format.unwrap_or(Format::Csv) {
        Format::Json => export::write_json(&mut out, &cells)?,
        _ => export::write_phase_diagram(&mut out, &cells)?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn describe(theorem: Theorem, params: &ParamArgs, output: OutputArgs) -> Result<ExitCode, Failure> {
    let field = build(theorem, params, true)?;
    let mut out = open_output(output.out.as_deref())?;
    export::write_json(&mut out, &field.describe())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn sweep(
    params: ParamArgs,
    r_count: Option<usize>,
    delta_count: Option<usize>,
    output: OutputArgs,
) -> Result<ExitCode, Failure> {
    let thermal = params.thermal()?;
    let rmax = params.rmax.unwrap_or(5.0);
    let r_count = r_count.unwrap_or(100);
    let d_count = delta_count.unwrap_or(100);
    if rmax.is_nan() || rmax <= 1.0 || r_count == 0 || d_count == 0 {
        return Err(Failure::Usage(
            "sweep needs rmax > 1 and positive counts".into(),
        ));
    }
    let radii: Vec<f64> = (1..=r_count)
        .map(|i| 1.0 + (rmax - 1.0) * i as f64 / r_count as f64)
        .collect();
    let traces: Vec<f64> = (1..=d_count).map(|i| i as f64 / d_count as f64).collect();
    let result = oracle_radial_sweep(thermal, &radii, &traces)?;
    let mut out = open_output(output.out.as_deref())?;
    match output.format.unwrap_or(Format::Csv) {
        Format::Json => export::write_json(&mut out, &result)?,
        _ => export::write_sweep(&mut out, &result)?,
    }
    out.flush()?;
    if output.out.is_some() {
        eprintln!(
            "minimum at R = {}, delta = {}: {}",
            result.best.radius, result.best.trace, result.best.energy.total
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_1d(
    params: ParamArgs,
    max_jumps: Option<usize>,
    resolution: Option<usize>,
    output: OutputArgs,
) -> Result<ExitCode, Failure> {
    let best = oracle_1d_best(
        need(params.m, "--m")?,
        need(params.big_m, "--M")?,
        need(params.beta, "--beta")?,
        max_jumps.unwrap_or(2),
        resolution.unwrap_or(1000),
    )?;
    let mut out = open_output(output.out.as_deref())?;
    export::write_json(&mut out, &best)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn robin(params: ParamArgs, output: OutputArgs) -> Result<ExitCode, Failure> {
    let n = params.dimension()?;
    let beta = need(params.beta, "--beta")?;
    let big_r = need(params.big_r, "--R")?;
    let closed = robin_trace(n, beta, big_r).map_err(Failure::usage)?;
    let shot = oracle_robin_shooting(n, beta, big_r)?;
    let mut out = open_output(output.out.as_deref())?;
    export::write_json(
        &mut out,
        &json!({ "closed_form": closed, "shooting": shot, "difference": (closed - shot).abs() }),
    )?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig =
            serde_json::from_str(r#"{"n": 3, "beta": 0.5, "verify": {"tol_a": 1e-6}}"#).unwrap();
        let flags = ParamArgs {
            beta: Some(0.7),
            ..Default::default()
        };
        let merged = flags.merged(&file.params);
        assert_eq!((merged.n, merged.beta), (Some(3), Some(0.7)));
        let config = VerifyArgs::default().config(&file.verify);
        assert_eq!(config.tol_a, 1e-6);
        assert!(serde_json::from_str::<FileConfig>(r#"{"nope": 1}"#).is_err());
    }
}
