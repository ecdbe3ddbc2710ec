//! Point evaluations and sweeps.

use std::fmt;

use ddsense_core::{
    assemble_fim, crlb, generate_pilots, sigma2_for_snr, validate_config, CrlbReport, Scheme,
    SystemConfig, Violation,
};
use rayon::prelude::*;

use crate::error::SweepError;
use crate::scenario::{AxisPoint, Scenario};

/// Why a single (scheme, point) evaluation produced no bounds.
#[derive(Debug, Clone, PartialEq)]
pub enum PointError {
    Invalid(Vec<Violation>),
    Numerical(ddsense_core::Error),
}

impl fmt::Display for PointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointError::Invalid(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "invalid configuration: {}", parts.join("; "))
            }
            PointError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PointError {}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub scheme: Scheme,
    pub point: Option<AxisPoint>,
    pub config: SystemConfig,
    pub snr_db: f64,
    pub result: Result<CrlbReport, PointError>,
}

fn evaluate(
    scenario: &Scenario,
    scheme: Scheme,
    point: Option<AxisPoint>,
    seed: u64,
) -> SchemeOutcome {
    let (cfg, snr) = scenario.point_config(point);
    let paths = scenario.path_set();
    let result = (|| {
        let violations = validate_config(&cfg, &paths, scheme);
        if !violations.is_empty() {
            return Err(PointError::Invalid(violations));
        }
        let pilots = generate_pilots(cfg.m, cfg.n, seed);
        let noise =
            sigma2_for_snr(scheme, &cfg, &paths, &pilots, snr).map_err(PointError::Numerical)?;
        let fim =
            assemble_fim(scheme, &cfg, &paths, &pilots, &noise).map_err(PointError::Numerical)?;
        crlb(&fim).map_err(PointError::Numerical)
    })();
    SchemeOutcome {
        scheme,
        point,
        config: cfg,
        snr_db: snr,
        result,
    }
}

/// Bounds for every scheme of `scenario` at its fixed configuration.
///
/// A failing scheme does not stop the others.
pub fn run_point(scenario: &Scenario, seed: u64) -> Vec<SchemeOutcome> {
    scenario
        .schemes
        .par_iter()
        .map(|&s| evaluate(scenario, s, None, seed))
        .collect()
}

/// One CSV row: a single path at one (scheme, axis value).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub m: usize,
    pub n: usize,
    pub scs_hz: f64,
    pub snr_db: f64,
    /// 1-based.
    pub path_index: usize,
    pub crlb_tau_s2: Option<f64>,
    pub crlb_nu_hz2: Option<f64>,
    pub crlb_amp: Option<f64>,
    pub crlb_phase_rad2: Option<f64>,
    pub fim_condition: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    fn from_outcome(o: &SchemeOutcome, num_paths: usize) -> Vec<ResultRow> {
        (0..num_paths)
            .map(|p| {
                let mut row = ResultRow {
                    scheme: o.scheme,
                    m: o.config.m,
                    n: o.config.n,
                    scs_hz: o.config.delta_f,
                    snr_db: o.snr_db,
                    path_index: p + 1,
                    crlb_tau_s2: None,
                    crlb_nu_hz2: None,
                    crlb_amp: None,
                    crlb_phase_rad2: None,
                    fim_condition: None,
                    error: None,
                };
                match &o.result {
                    Ok(r) => {
                        let b = r.paths[p];
                        row.crlb_tau_s2 = Some(b.tau);
                        row.crlb_nu_hz2 = Some(b.nu);
                        row.crlb_amp = Some(b.amp);
                        row.crlb_phase_rad2 = Some(b.phase);
                        row.fim_condition = Some(r.condition);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                row
            })
            .collect()
    }
}

/// Full cross product of schemes × axis values × paths, ordered by scheme
/// (scenario order), then axis value, then path.
pub fn run_sweep(scenario: &Scenario, seed: u64) -> Result<Vec<ResultRow>, SweepError> {
    let axis = scenario
        .axis
        .as_ref()
        .ok_or_else(|| SweepError::Scenario("a sweep needs an axis".into()))?;
    let points = axis.points();
    let jobs: Vec<(Scheme, AxisPoint)> = scenario
        .schemes
        .iter()
        .flat_map(|&s| points.iter().map(move |&p| (s, p)))
        .collect();
    let num_paths = scenario.paths.len();
    let rows = jobs
        .par_iter()
        .map(|&(s, p)| ResultRow::from_outcome(&evaluate(scenario, s, Some(p), seed), num_paths))
        .collect::<Vec<_>>()
        .concat();
    Ok(rows)
}
