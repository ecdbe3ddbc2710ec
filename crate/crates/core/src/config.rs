//! System configuration, path parameterization and the assumption checks
//! every channel builder relies on.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::scheme::Scheme;
use crate::C64;

/// Delay-bin values closer than this to an integer are treated as integers
/// when locating the ISI boundary, so that `τ = l·T/M` lands exactly on bin `l`.
pub const BIN_SNAP: f64 = 1e-9;

/// Resource-grid and numerology parameters.
///
/// The symbol duration `T` is not stored; it is always `1 / delta_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Subcarriers (OFDM) or delay bins (OTFS).
    pub m: usize,
    /// Symbols (OFDM) or Doppler bins (OTFS).
    pub n: usize,
    /// Subcarrier spacing in Hz.
    pub delta_f: f64,
    /// Carrier frequency in Hz. Carried for reporting; the baseband models do not use it.
    pub carrier_hz: f64,
    /// Cyclic-prefix duration in seconds (CP-OFDM only).
    pub cp_s: f64,
}

impl SystemConfig {
    /// Grid of `m × n` with spacing `delta_f`, a 3 GHz carrier and a CP of `T/4`.
    pub fn new(m: usize, n: usize, delta_f: f64) -> Self {
        Self {
            m,
            n,
            delta_f,
            carrier_hz: 3e9,
            cp_s: 0.25 / delta_f,
        }
    }

    pub fn with_carrier(mut self, carrier_hz: f64) -> Self {
        self.carrier_hz = carrier_hz;
        self
    }

    pub fn with_cp(mut self, cp_s: f64) -> Self {
        self.cp_s = cp_s;
        self
    }

    /// Symbol duration `T = 1/Δf`.
    pub fn symbol_duration(&self) -> f64 {
        1.0 / self.delta_f
    }

    /// CP-OFDM symbol duration `T' = T + T_cp`.
    pub fn cp_symbol_duration(&self) -> f64 {
        self.symbol_duration() + self.cp_s
    }

    /// Occupied bandwidth `MΔf`.
    pub fn bandwidth(&self) -> f64 {
        self.m as f64 * self.delta_f
    }

    /// Grid size `MN`, the dimension of every channel matrix.
    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    /// Delay expressed in sampling intervals `T/M`.
    pub fn delay_bins(&self, tau: f64) -> f64 {
        tau * self.m as f64 * self.delta_f
    }

    /// First sample index (in `0..=M`) that belongs to the current symbol for
    /// a path of delay `tau`: `⌈τM/T⌉`, with near-integers snapped.
    ///
    /// Samples `0..boundary` carry the previous symbol.
    pub fn isi_boundary(&self, tau: f64) -> usize {
        let k = self.delay_bins(tau);
        let r = k.round();
        let c = if (k - r).abs() <= BIN_SNAP {
            r
        } else {
            k.ceil()
        };
        c.max(0.0) as usize
    }
}

/// One propagation path: complex gain `a·e^{jφ}`, delay and Doppler shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub amplitude: f64,
    /// Radians.
    pub phase: f64,
    /// Seconds.
    pub delay: f64,
    /// Hz.
    pub doppler: f64,
}

impl PathParams {
    pub fn new(amplitude: f64, phase: f64, delay: f64, doppler: f64) -> Self {
        Self {
            amplitude,
            phase,
            delay,
            doppler,
        }
    }

    /// Complex gain `h_p`.
    pub fn gain(&self) -> C64 {
        C64::from_polar(self.amplitude, self.phase)
    }
}

/// Ordered, non-empty collection of paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    paths: Vec<PathParams>,
}

impl PathSet {
    pub fn new(paths: Vec<PathParams>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidConfig(vec![Violation::new(
                "paths",
                "at least one path required",
            )]));
        }
        Ok(Self { paths })
    }

    pub fn single(path: PathParams) -> Self {
        Self { paths: vec![path] }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PathParams> {
        self.paths.iter()
    }

    pub fn as_slice(&self) -> &[PathParams] {
        &self.paths
    }
}

impl std::ops::Index<usize> for PathSet {
    type Output = PathParams;

    fn index(&self, i: usize) -> &PathParams {
        &self.paths[i]
    }
}

impl<'a> IntoIterator for &'a PathSet {
    type Item = &'a PathParams;
    type IntoIter = std::slice::Iter<'a, PathParams>;

    fn into_iter(self) -> Self::IntoIter {
        self.paths.iter()
    }
}

/// A violated assumption, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Check the grid and every path against the assumptions of `scheme`.
///
/// Returns all violations found; an empty list means the inputs are usable.
/// Duplicate paths are not reported here: they surface as a singular Fisher
/// matrix, which carries the conditioning information.
pub fn validate_config(cfg: &SystemConfig, paths: &PathSet, scheme: Scheme) -> Vec<Violation> {
    let mut out = Vec::new();
    if cfg.m < 2 {
        out.push(Violation::new(
            "m",
            format!("M >= 2 required, got {}", cfg.m),
        ));
    }
    if cfg.n < 2 {
        out.push(Violation::new(
            "n",
            format!("N >= 2 required, got {}", cfg.n),
        ));
    }
    if !(cfg.delta_f.is_finite() && cfg.delta_f > 0.0) {
        out.push(Violation::new(
            "delta_f",
            format!("delta_f > 0 required, got {}", cfg.delta_f),
        ));
        // Every delay bound below depends on T.
        return out;
    }
    if !(cfg.cp_s.is_finite() && cfg.cp_s >= 0.0) {
        out.push(Violation::new(
            "cp_s",
            format!("T_cp >= 0 required, got {}", cfg.cp_s),
        ));
    }
    if paths.is_empty() {
        out.push(Violation::new("paths", "at least one path required"));
    }

    let t = cfg.symbol_duration();
    for (p, path) in paths.iter().enumerate() {
        let field = |name: &str| format!("paths[{p}].{name}");
        if !(path.amplitude.is_finite() && path.amplitude > 0.0) {
            out.push(Violation::new(
                field("amplitude"),
                format!("a > 0 required, got {}", path.amplitude),
            ));
        }
        if !(path.phase.is_finite() && (0.0..2.0 * PI).contains(&path.phase)) {
            out.push(Violation::new(
                field("phase"),
                format!("phi in [0, 2pi) required, got {}", path.phase),
            ));
        }
        if !path.doppler.is_finite() {
            out.push(Violation::new(field("doppler"), "nu must be finite"));
        }
        if !(path.delay.is_finite() && path.delay >= 0.0) {
            out.push(Violation::new(
                field("delay"),
                format!("tau >= 0 required, got {:e}", path.delay),
            ));
            continue;
        }
        match scheme {
            Scheme::CpOfdm => {
                if path.delay > cfg.cp_s {
                    out.push(Violation::new(
                        field("delay"),
                        format!("tau ≤ T_cp required ({:e} > {:e})", path.delay, cfg.cp_s),
                    ));
                }
            }
            Scheme::CpFreeOfdm | Scheme::ZakOtfs | Scheme::TwoStepOtfs => {
                if path.delay >= t {
                    out.push(Violation::new(
                        field("delay"),
                        format!("tau < T required ({:e} >= {:e})", path.delay, t),
                    ));
                }
            }
        }
    }
    out
}

/// Builder precondition shared by the schemes whose models assume `τ < T`.
pub(crate) fn require_delay_below_symbol(cfg: &SystemConfig, tau: f64) -> Result<()> {
    let t = cfg.symbol_duration();
    if !(tau >= 0.0 && tau < t) {
        return Err(Error::DelayOutOfRange {
            tau,
            limit: t,
            rule: "0 <= tau < T",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> (SystemConfig, PathSet) {
        (
            SystemConfig::new(12, 12, 15e3),
            PathSet::single(PathParams::new(1.0, 0.0, 3.33e-6, 500.0)),
        )
    }

    #[test]
    fn figure_configurations_validate() {
        let (cfg, paths) = fig1();
        for scheme in Scheme::ALL {
            assert!(validate_config(&cfg, &paths, scheme).is_empty());
        }
        let two = PathSet::new(vec![
            PathParams::new(0.7, PI / 3.0, 3.33e-6, 500.0),
            PathParams::new(0.3, 3.0 * PI / 4.0, 5e-6, 2.5e3),
        ])
        .unwrap();
        for scheme in Scheme::ALL {
            assert!(validate_config(&cfg, &two, scheme).is_empty());
        }
        for scs in [15e3, 30e3, 60e3] {
            let cfg = SystemConfig::new(12, 12, scs);
            for scheme in Scheme::ALL {
                assert!(validate_config(&cfg, &paths, scheme).is_empty(), "{scs}");
            }
        }
        for mn in [6, 12, 24] {
            let cfg = SystemConfig::new(mn, mn, 15e3);
            for scheme in Scheme::ALL {
                assert!(validate_config(&cfg, &paths, scheme).is_empty());
            }
        }
    }

    #[test]
    fn delay_equal_to_symbol_rejected() {
        let cfg = SystemConfig::new(12, 12, 15e3);
        let paths = PathSet::single(PathParams::new(1.0, 0.0, 1.0 / 15e3, 500.0));
        let v = validate_config(&cfg, &paths, Scheme::ZakOtfs);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "paths[0].delay");
        assert!(v[0].message.contains("tau < T required"));
    }

    #[test]
    fn cp_shorter_than_delay_rejected() {
        let cfg = SystemConfig::new(12, 12, 15e3).with_cp(4e-6);
        let paths = PathSet::single(PathParams::new(1.0, 0.0, 5e-6, 500.0));
        let v = validate_config(&cfg, &paths, Scheme::CpOfdm);
        assert_eq!(v.len(), 1);
        assert!(v[0].message.contains("tau ≤ T_cp"));
        // The same path is fine for the schemes without a CP.
        assert!(validate_config(&cfg, &paths, Scheme::TwoStepOtfs).is_empty());
    }

    #[test]
    fn reports_every_violation() {
        let cfg = SystemConfig {
            m: 1,
            n: 1,
            ..SystemConfig::new(4, 4, 15e3)
        };
        let paths = PathSet::single(PathParams::new(0.0, 7.0, -1.0, f64::NAN));
        let fields: Vec<_> = validate_config(&cfg, &paths, Scheme::CpFreeOfdm)
            .into_iter()
            .map(|v| v.field)
            .collect();
        assert_eq!(
            fields,
            [
                "m",
                "n",
                "paths[0].amplitude",
                "paths[0].phase",
                "paths[0].doppler",
                "paths[0].delay"
            ]
        );
    }

    #[test]
    fn bad_spacing_stops_early() {
        let cfg = SystemConfig::new(4, 4, 0.0);
        let (_, paths) = fig1();
        let v = validate_config(&cfg, &paths, Scheme::ZakOtfs);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "delta_f");
    }

    #[test]
    fn symbol_duration_is_reciprocal_spacing() {
        let cfg = SystemConfig::new(12, 12, 15e3);
        assert_eq!(cfg.symbol_duration(), 1.0 / 15e3);
        assert_eq!(cfg.cp_s, cfg.symbol_duration() / 4.0);
        assert_eq!(cfg.bandwidth(), 180e3);
    }

    #[test]
    fn isi_boundary_snaps_integers() {
        let cfg = SystemConfig::new(8, 4, 15e3);
        assert_eq!(cfg.isi_boundary(0.0), 0);
        for l in 1..8 {
            let tau = l as f64 / (8.0 * 15e3);
            assert_eq!(cfg.isi_boundary(tau), l);
        }
        let tau = 2.5 / (8.0 * 15e3);
        assert_eq!(cfg.isi_boundary(tau), 3);
    }

    #[test]
    fn empty_path_set_rejected() {
        assert!(PathSet::new(vec![]).is_err());
    }
}
