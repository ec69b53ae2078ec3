//! Text exports of a [`BerGrid`]: CSV rows and a plain (P2) graymap of log₁₀ BER.
//!
//! Numbers use Rust's shortest round-trip formatting, so output bytes depend
//! only on the grid values.

use std::io::{self, Write};

use crate::grid::BerGrid;

pub const CSV_HEADER: &str = "x_m,y_m,tag,h_data,signal_ms,interference_ms,noise_var,snr,ber";

/// log₁₀ BER mapped to gray level 0.
pub const HEATMAP_LOG_MIN: f64 = -8.0;
/// log₁₀ BER mapped to gray level 255.
pub const HEATMAP_LOG_MAX: f64 = -0.3;

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the header and one row per cell in row-major order, LF line endings.
pub fn write_csv<W: Write>(grid: &BerGrid, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    let tag = csv_field(&grid.tag);
    for c in &grid.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.x, c.y, tag, c.h_data, c.signal_ms, c.interference_ms, c.noise_variance, c.snr, c.ber
        )?;
    }
    Ok(())
}

pub fn csv_string(grid: &BerGrid) -> String {
    let mut buf = Vec::new();
    write_csv(grid, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

/// Gray level for a BER: log₁₀ BER mapped linearly from
/// [`HEATMAP_LOG_MIN`, `HEATMAP_LOG_MAX`] onto 0..=255, clamped. BER 0 is black.
pub fn log_ber_gray(ber: f64) -> u8 {
    let t = (ber.log10() - HEATMAP_LOG_MIN) / (HEATMAP_LOG_MAX - HEATMAP_LOG_MIN);
    if t.is_nan() {
        return 0;
    }
    (t.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Plain PGM (`P2`) heatmap; image rows follow the grid's row-major order.
pub fn write_pgm<W: Write>(grid: &BerGrid, mut out: W) -> io::Result<()> {
    let n = grid.spec.resolution;
    writeln!(out, "P2")?;
    writeln!(out, "{n} {n}")?;
    writeln!(out, "255")?;
    for row in grid.cells.chunks(n) {
        let line: Vec<String> = row.iter().map(|c| log_ber_gray(c.ber).to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
