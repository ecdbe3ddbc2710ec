//! JSON scenario documents.
//!
//! ```json
//! {
//!   "schemes": ["cp_free_ofdm", "cp_ofdm", "zak_otfs", "two_step_otfs"],
//!   "config": { "m": 12, "n": 12, "scs_hz": 15000, "carrier_hz": 3e9 },
//!   "snr_db": 10,
//!   "paths": [{ "amplitude": 1, "phase_rad": 0, "delay_s": 3.33e-6, "doppler_hz": 500 }],
//!   "axis": { "scs_hz": [15000, 30000, 60000] },
//!   "pilot_seed": 42,
//!   "output": "fig1"
//! }
//! ```
//!
//! Unknown fields are rejected. When `cp_s` is absent the CP is `T/4` of the
//! spacing in effect at each point.

use std::fmt;
use std::path::Path;

use ddsense_core::{PathParams, PathSet, Scheme, SystemConfig};
use serde::{Deserialize, Deserializer};

use crate::error::SweepError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub m: usize,
    pub n: usize,
    pub scs_hz: f64,
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    #[serde(default)]
    pub cp_s: Option<f64>,
}

fn default_carrier() -> f64 {
    3e9
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub amplitude: f64,
    #[serde(default)]
    pub phase_rad: f64,
    pub delay_s: f64,
    pub doppler_hz: f64,
}

impl From<PathSpec> for PathParams {
    fn from(p: PathSpec) -> Self {
        PathParams::new(p.amplitude, p.phase_rad, p.delay_s, p.doppler_hz)
    }
}

/// The swept quantity and its values.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Axis {
    SnrDb(Vec<f64>),
    ScsHz(Vec<f64>),
    GridMn(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisPoint {
    SnrDb(f64),
    ScsHz(f64),
    GridMn(usize, usize),
}

impl fmt::Display for AxisPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisPoint::SnrDb(v) => write!(f, "snr_db={v}"),
            AxisPoint::ScsHz(v) => write!(f, "scs_hz={v}"),
            AxisPoint::GridMn(m, n) => write!(f, "grid_mn={m}x{n}"),
        }
    }
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::SnrDb(_) => "snr_db",
            Axis::ScsHz(_) => "scs_hz",
            Axis::GridMn(_) => "grid_mn",
        }
    }

    pub fn points(&self) -> Vec<AxisPoint> {
        match self {
            Axis::SnrDb(v) => v.iter().map(|&x| AxisPoint::SnrDb(x)).collect(),
            Axis::ScsHz(v) => v.iter().map(|&x| AxisPoint::ScsHz(x)).collect(),
            Axis::GridMn(v) => v.iter().map(|&(m, n)| AxisPoint::GridMn(m, n)).collect(),
        }
    }

    fn check(&self) -> Result<(), String> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        let ok = match self {
            Axis::SnrDb(v) => !v.is_empty() && v.iter().all(|x| x.is_finite()) && increasing(v),
            Axis::ScsHz(v) => {
                !v.is_empty() && v.iter().all(|&x| x.is_finite() && x > 0.0) && increasing(v)
            }
            Axis::GridMn(v) => {
                if v.iter().any(|&(m, n)| m < 2 || n < 2) {
                    return Err("grid_mn entries need M >= 2 and N >= 2".into());
                }
                !v.is_empty()
                    && v.windows(2)
                        .all(|w| (w[0].0 * w[0].1, w[0]) < (w[1].0 * w[1].1, w[1]))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "{} values must be nonempty and strictly increasing",
                self.name()
            ))
        }
    }
}

/// A scenario file: fixed configuration, paths and an optional sweep axis.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "all_schemes", deserialize_with = "de_schemes")]
    pub schemes: Vec<Scheme>,
    pub config: GridSpec,
    #[serde(default = "default_snr")]
    pub snr_db: f64,
    pub paths: Vec<PathSpec>,
    #[serde(default)]
    pub axis: Option<Axis>,
    #[serde(default = "default_seed")]
    pub pilot_seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

fn all_schemes() -> Vec<Scheme> {
    Scheme::ALL.to_vec()
}

fn default_snr() -> f64 {
    10.0
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn de_schemes<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scheme>, D::Error> {
    let names = Vec::<String>::deserialize(d)?;
    names
        .iter()
        .map(|s| s.parse::<Scheme>().map_err(serde::de::Error::custom))
        .collect()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, SweepError> {
        let s: Scenario = serde_json::from_str(text)?;
        s.check()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|source| SweepError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<(), SweepError> {
        if self.schemes.is_empty() {
            return Err(SweepError::Scenario("schemes must not be empty".into()));
        }
        let mut seen = Vec::new();
        for s in &self.schemes {
            if seen.contains(s) {
                return Err(SweepError::Scenario(format!("scheme {s} listed twice")));
            }
            seen.push(*s);
        }
        if self.paths.is_empty() {
            return Err(SweepError::Scenario("at least one path required".into()));
        }
        if let Some(axis) = &self.axis {
            axis.check().map_err(SweepError::Scenario)?;
        }
        Ok(())
    }

    pub fn path_set(&self) -> PathSet {
        PathSet::new(self.paths.iter().map(|&p| p.into()).collect())
            .expect("scenario checked to have paths")
    }

    /// Grid configuration and target SNR at `point` (the fixed values when `None`).
    pub fn point_config(&self, point: Option<AxisPoint>) -> (SystemConfig, f64) {
        let base = &self.config;
        let (mut m, mut n, mut scs, mut snr) = (base.m, base.n, base.scs_hz, self.snr_db);
        match point {
            Some(AxisPoint::SnrDb(v)) => snr = v,
            Some(AxisPoint::ScsHz(v)) => scs = v,
            Some(AxisPoint::GridMn(a, b)) => (m, n) = (a, b),
            None => {}
        }
        let mut cfg = SystemConfig::new(m, n, scs).with_carrier(base.carrier_hz);
        if let Some(cp) = base.cp_s {
            cfg = cfg.with_cp(cp);
        }
        (cfg, snr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
        "config": { "m": 12, "n": 12, "scs_hz": 15000 },
        "paths": [{ "amplitude": 1, "delay_s": 3.33e-6, "doppler_hz": 500 }],
        "axis": { "scs_hz": [15000, 30000, 60000] }
    }"#;

    #[test]
    fn defaults_fill_in() {
        let s = Scenario::from_json(FIG1).unwrap();
        assert_eq!(s.schemes, Scheme::ALL.to_vec());
        assert_eq!(s.snr_db, 10.0);
        assert_eq!(s.pilot_seed, 42);
        assert_eq!(s.config.carrier_hz, 3e9);
        assert_eq!(s.axis.as_ref().unwrap().points().len(), 3);
    }

    #[test]
    fn cp_defaults_to_quarter_symbol_at_each_point() {
        let s = Scenario::from_json(FIG1).unwrap();
        let (cfg, snr) = s.point_config(Some(AxisPoint::ScsHz(60e3)));
        assert_eq!(cfg.delta_f, 60e3);
        assert_eq!(cfg.cp_s, 0.25 / 60e3);
        assert_eq!(snr, 10.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = FIG1.replace("\"scs_hz\": 15000 }", "\"scs_hz\": 15000, \"mm\": 3 }");
        assert!(matches!(
            Scenario::from_json(&bad),
            Err(SweepError::Parse(_))
        ));
        let bad = FIG1.replace("\"paths\"", "\"pathz\"");
        assert!(Scenario::from_json(&bad).is_err());
    }

    #[test]
    fn unknown_scheme_rejected() {
        let bad = FIG1.replace("\"config\"", "\"schemes\": [\"ofdm\"], \"config\"");
        let err = Scenario::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("unknown scheme"), "{err}");
    }

    #[test]
    fn axis_must_increase() {
        for axis in [
            r#"{ "snr_db": [10, 0] }"#,
            r#"{ "snr_db": [] }"#,
            r#"{ "scs_hz": [15000, 15000] }"#,
            r#"{ "grid_mn": [[12, 12], [6, 6]] }"#,
            r#"{ "grid_mn": [[1, 12]] }"#,
        ] {
            let text = FIG1.replace(r#"{ "scs_hz": [15000, 30000, 60000] }"#, axis);
            assert!(
                matches!(Scenario::from_json(&text), Err(SweepError::Scenario(_))),
                "{axis}"
            );
        }
    }

    #[test]
    fn grid_axis_parses_pairs() {
        let text = FIG1.replace(
            r#"{ "scs_hz": [15000, 30000, 60000] }"#,
            r#"{ "grid_mn": [[6, 6], [12, 12], [24, 24]] }"#,
        );
        let s = Scenario::from_json(&text).unwrap();
        let (cfg, _) = s.point_config(Some(AxisPoint::GridMn(24, 24)));
        assert_eq!((cfg.m, cfg.n), (24, 24));
    }
}
