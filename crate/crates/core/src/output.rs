//! CSV and heatmap writers.
//!
//! Numbers are printed with 17 significant digits so a written value parses
//! back to the same f64 bit pattern. Heatmaps are binary portable pixmaps
//! (P6), self-contained and byte-deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Result, SimError};
use crate::observables::ObservableSeries;

/// Series columns that can be emitted after the `zeta,Z_mm` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesColumn {
    PseudoEnergy,
    Centroid,
    RmsWidth,
}

impl SeriesColumn {
    fn header(self) -> &'static str {
        match self {
            SeriesColumn::PseudoEnergy => "pseudo_energy",
            SeriesColumn::Centroid => "centroid",
            SeriesColumn::RmsWidth => "rms_width",
        }
    }
}

/// 17 significant digits; round-trip exact for f64.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render a series CSV: header `zeta,Z_mm,<columns>`, one row per sample,
/// LF line endings.
pub fn render_series_csv(series: &ObservableSeries, columns: &[SeriesColumn]) -> Result<String> {
    let mut out = String::from("zeta,Z_mm");
    for col in columns {
        out.push(',');
        out.push_str(col.header());
    }
    out.push('\n');
    for sample in series.samples() {
        write!(
            out,
            "{},{}",
            format_value(sample.zeta),
            format_value(sample.z_mm)
        )
        .expect("string write");
        for col in columns {
            let value = match col {
                SeriesColumn::PseudoEnergy => sample.pseudo_energy,
                SeriesColumn::Centroid => sample.centroid,
                SeriesColumn::RmsWidth => sample.rms_width,
            }
            .ok_or_else(|| {
                SimError::InvalidParameter(format!(
                    "series sample at zeta {} has no {} record",
                    sample.zeta,
                    col.header()
                ))
            })?;
            out.push(',');
            out.push_str(&format_value(value));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_series_csv(
    series: &ObservableSeries,
    columns: &[SeriesColumn],
    path: &Path,
) -> Result<()> {
    let text = render_series_csv(series, columns)?;
    fs::write(path, text)?;
    Ok(())
}

/// Render a map CSV: header `zeta,site_1,…,site_C`, one row per coordinate.
pub fn render_map_csv(zetas: &[f64], map: &[Vec<f64>]) -> Result<String> {
    if zetas.len() != map.len() {
        return Err(SimError::ShapeMismatch(format!(
            "{} coordinates for {} map rows",
            zetas.len(),
            map.len()
        )));
    }
    let cols = map.first().map(|r| r.len()).unwrap_or(0);
    let mut out = String::from("zeta");
    for c in 1..=cols {
        write!(out, ",site_{c}").expect("string write");
    }
    out.push('\n');
    for (zeta, row) in zetas.iter().zip(map) {
        if row.len() != cols {
            return Err(SimError::ShapeMismatch("ragged map rows".into()));
        }
        out.push_str(&format_value(*zeta));
        for v in row {
            out.push(',');
            out.push_str(&format_value(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_map_csv(zetas: &[f64], map: &[Vec<f64>], path: &Path) -> Result<()> {
    let text = render_map_csv(zetas, map)?;
    fs::write(path, text)?;
    Ok(())
}

/// Parse a CSV produced by the writers above back into header + rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| SimError::InvalidParameter("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(str::parse::<f64>).collect();
        rows.push(row.map_err(|e| SimError::InvalidParameter(format!("bad CSV number: {e}")))?);
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Gray,
    Viridis,
}

// Anchor points of the perceptually uniform map, interpolated linearly.
const VIRIDIS_ANCHORS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 144, 141],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
];

fn color_of(level: f64, colormap: Colormap) -> [u8; 3] {
    let t = level.clamp(0.0, 1.0);
    match colormap {
        Colormap::Gray => {
            let v = (t * 255.0).round() as u8;
            [v, v, v]
        }
        Colormap::Viridis => {
            let scaled = t * (VIRIDIS_ANCHORS.len() - 1) as f64;
            let lo = scaled.floor() as usize;
            let hi = (lo + 1).min(VIRIDIS_ANCHORS.len() - 1);
            let frac = scaled - lo as f64;
            let mut rgb = [0u8; 3];
            for (c, slot) in rgb.iter_mut().enumerate() {
                let a = VIRIDIS_ANCHORS[lo][c] as f64;
                let b = VIRIDIS_ANCHORS[hi][c] as f64;
                *slot = (a + (b - a) * frac).round() as u8;
            }
            rgb
        }
    }
}

/// Write an intensity matrix as a binary portable pixmap. Rows map to image
/// rows top-down (first row at the top), columns to pixels left-right, and
/// colors scale linearly up to the matrix maximum.
pub fn render_heatmap(map: &[Vec<f64>], path: &Path, colormap: Colormap) -> Result<()> {
    if map.is_empty() || map[0].is_empty() {
        return Err(SimError::InvalidParameter(
            "heatmap of an empty matrix".into(),
        ));
    }
    let cols = map[0].len();
    let mut max = 0.0f64;
    for row in map {
        if row.len() != cols {
            return Err(SimError::ShapeMismatch("ragged heatmap rows".into()));
        }
        for &v in row {
            if !v.is_finite() || v < 0.0 {
                return Err(SimError::InvalidParameter(format!(
                    "heatmap values must be finite and >= 0, got {v}"
                )));
            }
            max = max.max(v);
        }
    }
    if max <= 0.0 {
        return Err(SimError::DegenerateInput(
            "all-zero matrix cannot be normalized".into(),
        ));
    }
    let mut bytes = format!("P6\n{} {}\n255\n", cols, map.len()).into_bytes();
    for row in map {
        for &v in row {
            bytes.extend_from_slice(&color_of(v / max, colormap));
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}
