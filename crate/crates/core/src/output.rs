//! CSV and JSON emission of result rows.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::pws::{EnergyResult, GeometrySpec, PerUnit};
use crate::ratios::RatioPoint;

pub const CSV_HEADER: &str = "geometry,eps0,e_rel,l_over_r,method,L,value,ratio,quad_error,converged";

/// ħc in J·m, used to convert reduced energies to SI.
pub const HBAR_C: f64 = 3.161_526_773_4e-26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One output line. `None` prints as `NA` in CSV and `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub geometry: String,
    pub eps0: Option<f64>,
    pub e_rel: Option<f64>,
    pub l_over_r: Option<f64>,
    pub method: String,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub value: Option<f64>,
    pub ratio: Option<f64>,
    /// Absolute error estimate of `value` (energy rows) or of `ratio`
    /// (ratio rows).
    pub quad_error: Option<f64>,
    pub converged: bool,
}

fn geometry_params(g: &GeometrySpec) -> (Option<f64>, Option<f64>) {
    match *g {
        GeometrySpec::AtomSlab { l, e_a } => (Some(e_a / l), None),
        GeometrySpec::SlabSlab { l, e_a, e_b } if e_a == e_b => (Some(e_a / l), None),
        GeometrySpec::SphereSlab { l_center, radius, .. } | GeometrySpec::SpherePlate { l_center, radius } => {
            (None, Some((l_center - radius) / radius))
        }
        _ => (None, None),
    }
}

impl Row {
    pub fn from_energy(r: &EnergyResult, eps0: Option<f64>, ratio: Option<f64>) -> Self {
        let (e_rel, l_over_r) = geometry_params(&r.geometry);
        Row {
            geometry: r.geometry.name().to_string(),
            eps0,
            e_rel,
            l_over_r,
            method: r.method.name().to_string(),
            l: Some(r.geometry.gap()),
            value: Some(r.value),
            ratio,
            quad_error: r.quadrature.map(|q| q.error_estimate),
            converged: r.converged(),
        }
    }

    pub fn from_ratio(p: &RatioPoint) -> Self {
        Row {
            geometry: p.geometry.name().to_string(),
            eps0: Some(p.eps0),
            e_rel: p.e_rel,
            l_over_r: p.l_over_r,
            method: "ratio-long-range".to_string(),
            l: Some(1.0),
            value: Some(p.pws),
            ratio: p.ratio,
            quad_error: p.ratio.map(|r| (r * p.quad_error).abs()),
            converged: p.converged,
        }
    }

    /// Rescales lengths to metres and energies to joules (per m² for
    /// per-area energies), given the length unit in metres.
    pub fn to_si(mut self, unit_length: f64, per_unit: PerUnit) -> Self {
        let scale = match per_unit {
            PerUnit::Total => HBAR_C / unit_length,
            PerUnit::PerArea => HBAR_C / unit_length.powi(3),
        };
        self.l = self.l.map(|l| l * unit_length);
        self.value = self.value.map(|v| v * scale);
        if self.ratio.is_none() || self.method != "ratio-long-range" {
            self.quad_error = self.quad_error.map(|e| e * scale);
        }
        self
    }
}

/// 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        "NA".to_string()
    }
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_number)
}

fn rounded(x: Option<f64>) -> Option<f64> {
    x.filter(|v| v.is_finite()).map(|v| format_number(v).parse().expect("formatted float parses"))
}

pub fn write_csv<W: Write>(rows: &[Row], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.geometry,
            cell(r.eps0),
            cell(r.e_rel),
            cell(r.l_over_r),
            r.method,
            cell(r.l),
            cell(r.value),
            cell(r.ratio),
            cell(r.quad_error),
            r.converged
        )?;
    }
    out.flush()
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> io::Result<()> {
    let printed: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            eps0: rounded(r.eps0),
            e_rel: rounded(r.e_rel),
            l_over_r: rounded(r.l_over_r),
            l: rounded(r.l),
            value: rounded(r.value),
            ratio: rounded(r.ratio),
            quad_error: rounded(r.quad_error),
            ..r.clone()
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &printed)?;
    writeln!(out)?;
    out.flush()
}

/// Writes the rows to `destination`, or to stdout when it is `None`.
/// An empty row set still produces the header (CSV) or `[]` (JSON), with a
/// warning on stderr.
pub fn emit(rows: &[Row], format: Format, destination: Option<&Path>) -> io::Result<()> {
    if rows.is_empty() {
        eprintln!("warning: no results to write");
    }
    let write = |out: &mut dyn Write| match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    };
    match destination {
        Some(path) => write(&mut BufWriter::new(File::create(path)?)),
        None => write(&mut io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        Row {
            geometry: "atom-plate".into(),
            eps0: Some(11.87),
            e_rel: None,
            l_over_r: None,
            method: "exact".into(),
            l: Some(1.0),
            value: Some(-0.012_345_678_901_234_5),
            ratio: None,
            quad_error: Some(1e-14),
            converged: true,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "atom-plate,1.18700000000e1,NA,NA,exact,1.00000000000e0,-1.23456789012e-2,NA,1.00000000000e-14,true"
        );
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&[row()], &mut buf).unwrap();
        let back: Vec<Row> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].ratio, None);
        assert_eq!(back[0].value, Some(-0.012_345_678_901_2));
        assert_eq!(back[0].eps0, Some(11.87));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"ratio\": null"));
        assert!(text.contains("\"L\": 1.0"));
    }
}
