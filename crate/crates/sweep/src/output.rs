//! CSV emission.

use std::io::Write;
use std::path::Path;

use crate::error::SweepError;
use crate::run::ResultRow;

pub const CSV_HEADER: [&str; 12] = [
    "scheme",
    "M",
    "N",
    "scs_hz",
    "snr_db",
    "path_index",
    "crlb_tau_s2",
    "crlb_nu_hz2",
    "crlb_amp",
    "crlb_phase_rad2",
    "fim_condition",
    "error",
];

/// Shortest round-trip scientific notation, e.g. `1.5e4`.
pub fn format_number(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.name().to_string(),
            r.m.to_string(),
            r.n.to_string(),
            format_number(r.scs_hz),
            format_number(r.snr_db),
            r.path_index.to_string(),
            opt(r.crlb_tau_s2),
            opt(r.crlb_nu_hz2),
            opt(r.crlb_amp),
            opt(r.crlb_phase_rad2),
            opt(r.fim_condition),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<(), SweepError> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddsense_core::Scheme;

    fn row(i: usize) -> ResultRow {
        ResultRow {
            scheme: Scheme::ZakOtfs,
            m: 12,
            n: 12,
            scs_hz: 15e3,
            snr_db: 10.0,
            path_index: i,
            crlb_tau_s2: Some(3.1401e-15),
            crlb_nu_hz2: Some(174.73),
            crlb_amp: Some(1e-4),
            crlb_phase_rad2: Some(0.25),
            fim_condition: Some(41.0),
            error: None,
        }
    }

    fn render(rows: &[ResultRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn header_only_when_empty() {
        assert_eq!(
            render(&[]),
            "scheme,M,N,scs_hz,snr_db,path_index,crlb_tau_s2,crlb_nu_hz2,crlb_amp,crlb_phase_rad2,fim_condition,error\n"
        );
    }

    #[test]
    fn one_line_per_row() {
        let rows: Vec<_> = (1..=8).map(row).collect();
        let text = render(&rows);
        assert_eq!(text.lines().count(), 9);
        assert!(!text.contains('\r'));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "zak_otfs,12,12,1.5e4,1e1,1,3.1401e-15,1.7473e2,1e-4,2.5e-1,4.1e1,"
        );
    }

    #[test]
    fn error_rows_leave_numbers_empty() {
        let mut r = row(1);
        r.crlb_tau_s2 = None;
        r.crlb_nu_hz2 = None;
        r.crlb_amp = None;
        r.crlb_phase_rad2 = None;
        r.fim_condition = None;
        r.error = Some("Fisher matrix is singular (condition inf, eigenvalue 0e0)".into());
        let text = render(&[r]);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "zak_otfs,12,12,1.5e4,1e1,1,,,,,,\"Fisher matrix is singular (condition inf, eigenvalue 0e0)\""
        );
    }

    #[test]
    fn numbers_round_trip() {
        for v in [3.7044e-15, 0.1 + 0.2, 1.0 / 3.0, 15e3, 1e300] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }
}
