//! Static SVG line charts of one CRLB column against the swept axis.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use ddsense_core::Scheme;

use crate::error::SweepError;
use crate::output::format_number;
use crate::run::ResultRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotColumn {
    Tau,
    Nu,
    Amp,
    Phase,
}

impl PlotColumn {
    pub fn header(self) -> &'static str {
        match self {
            PlotColumn::Tau => "crlb_tau_s2",
            PlotColumn::Nu => "crlb_nu_hz2",
            PlotColumn::Amp => "crlb_amp",
            PlotColumn::Phase => "crlb_phase_rad2",
        }
    }

    fn value(self, r: &ResultRow) -> Option<f64> {
        match self {
            PlotColumn::Tau => r.crlb_tau_s2,
            PlotColumn::Nu => r.crlb_nu_hz2,
            PlotColumn::Amp => r.crlb_amp,
            PlotColumn::Phase => r.crlb_phase_rad2,
        }
    }
}

impl FromStr for PlotColumn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tau" | "crlb_tau_s2" => Ok(PlotColumn::Tau),
            "nu" | "crlb_nu_hz2" => Ok(PlotColumn::Nu),
            "amp" | "crlb_amp" => Ok(PlotColumn::Amp),
            "phase" | "crlb_phase_rad2" => Ok(PlotColumn::Phase),
            _ => Err(format!("unknown plot column {s:?}")),
        }
    }
}

/// Logarithmic map from data values to pixel rows, with decade-aligned bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScale {
    pub lo_decade: i32,
    pub hi_decade: i32,
    pub top: f64,
    pub bottom: f64,
}

impl LogScale {
    /// Smallest decade range covering `[min, max]` (both positive).
    pub fn covering(min: f64, max: f64, top: f64, bottom: f64) -> Self {
        let lo = min.log10().floor() as i32;
        let mut hi = max.log10().ceil() as i32;
        if hi <= lo {
            hi = lo + 1;
        }
        Self {
            lo_decade: lo,
            hi_decade: hi,
            top,
            bottom,
        }
    }

    pub fn pixel(&self, v: f64) -> f64 {
        let frac = (v.log10() - self.lo_decade as f64) / (self.hi_decade - self.lo_decade) as f64;
        self.bottom - frac * (self.bottom - self.top)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PlotAxis {
    Snr,
    Scs,
    Grid,
}

impl PlotAxis {
    fn label(self) -> &'static str {
        match self {
            PlotAxis::Snr => "SNR (dB)",
            PlotAxis::Scs => "subcarrier spacing (kHz)",
            PlotAxis::Grid => "grid size M·N",
        }
    }

    fn x(self, r: &ResultRow) -> f64 {
        match self {
            PlotAxis::Snr => r.snr_db,
            PlotAxis::Scs => r.scs_hz / 1e3,
            PlotAxis::Grid => (r.m * r.n) as f64,
        }
    }
}

fn infer_axis(rows: &[ResultRow]) -> Result<PlotAxis, SweepError> {
    let first = &rows[0];
    let snr = rows.iter().any(|r| r.snr_db != first.snr_db);
    let scs = rows.iter().any(|r| r.scs_hz != first.scs_hz);
    let grid = rows.iter().any(|r| (r.m, r.n) != (first.m, first.n));
    let varying: Vec<&str> = [(snr, "snr_db"), (scs, "scs_hz"), (grid, "grid_mn")]
        .iter()
        .filter(|(v, _)| *v)
        .map(|(_, n)| *n)
        .collect();
    match varying.as_slice() {
        [] | ["snr_db"] => Ok(PlotAxis::Snr),
        ["scs_hz"] => Ok(PlotAxis::Scs),
        ["grid_mn"] => Ok(PlotAxis::Grid),
        _ => Err(SweepError::MixedAxes(varying.join(", "))),
    }
}

struct Series {
    scheme: Scheme,
    path: usize,
    points: Vec<(f64, f64)>,
}

/// One series per (scheme, path) in first-appearance order; rows without a
/// value for `column` are skipped.
fn collect_series(rows: &[ResultRow], axis: PlotAxis, column: PlotColumn) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    for r in rows {
        let Some(y) = column.value(r).filter(|y| *y > 0.0 && y.is_finite()) else {
            continue;
        };
        let idx = match out
            .iter()
            .position(|s| s.scheme == r.scheme && s.path == r.path_index)
        {
            Some(i) => i,
            None => {
                out.push(Series {
                    scheme: r.scheme,
                    path: r.path_index,
                    points: Vec::new(),
                });
                out.len() - 1
            }
        };
        out[idx].points.push((axis.x(r), y));
    }
    out
}

/// Render `rows` as an SVG chart of `column` (log y) against the swept axis.
///
/// Fails with [`SweepError::MixedAxes`] if the rows vary along more than one
/// of SNR, spacing and grid size.
pub fn render_svg(rows: &[ResultRow], column: PlotColumn) -> Result<String, SweepError> {
    let axis = if rows.is_empty() {
        PlotAxis::Snr
    } else {
        infer_axis(rows)?
    };
    let series = collect_series(rows, axis, column);
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let (xmin, xmax) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    });
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| {
        (a.min(y), b.max(y))
    });
    let (xmin, xmax) = if xmin.is_finite() {
        (xmin, xmax)
    } else {
        (0.0, 1.0)
    };
    let (ymin, ymax) = if ymin.is_finite() {
        (ymin, ymax)
    } else {
        (1.0, 10.0)
    };

    let plot_right = WIDTH - RIGHT;
    let plot_bottom = HEIGHT - BOTTOM;
    let xspan = if xmax > xmin { xmax - xmin } else { 1.0 };
    let px = |x: f64| LEFT + (x - xmin) / xspan * (plot_right - LEFT);
    let scale = LogScale::covering(ymin, ymax, TOP, plot_bottom);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        plot_right - LEFT,
        plot_bottom - TOP
    );
    for d in scale.lo_decade..=scale.hi_decade {
        let y = scale.pixel(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{plot_right:.2}" y2="{y:.2}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let mut ticks: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    for x in ticks {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x}</text>"#,
            px(x),
            plot_bottom + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (LEFT + plot_right) / 2.0,
        HEIGHT - 12.0,
        axis.label()
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (TOP + plot_bottom) / 2.0,
        (TOP + plot_bottom) / 2.0,
        column.header()
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), scale.pixel(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = plot_right + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{} path {}</text>"#,
            lx + 26.0,
            ly + 4.0,
            ser.scheme,
            ser.path
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Whitespace-separated `x scheme path y` lines for external plotters.
pub fn render_dat(rows: &[ResultRow], column: PlotColumn) -> Result<String, SweepError> {
    let axis = if rows.is_empty() {
        PlotAxis::Snr
    } else {
        infer_axis(rows)?
    };
    let mut s = format!("# x scheme path {}\n", column.header());
    for ser in collect_series(rows, axis, column) {
        for (x, y) in ser.points {
            let _ = writeln!(
                s,
                "{} {} {} {}",
                format_number(x),
                ser.scheme,
                ser.path,
                format_number(y)
            );
        }
    }
    Ok(s)
}

/// Write the SVG to `path` and the data file next to it with a `.dat` extension.
pub fn emit_plot(rows: &[ResultRow], path: &Path, column: PlotColumn) -> Result<(), SweepError> {
    let svg = render_svg(rows, column)?;
    let dat = render_dat(rows, column)?;
    std::fs::write(path, svg)?;
    std::fs::write(path.with_extension("dat"), dat)?;
    Ok(())
}
