//! CSV rendering of lab results: a header row, then one row per index with a
//! fixed-precision decimal column and the exact `num/den` value.

use std::io::Write;

use crate::rational::{format_rational, to_decimal, Rational};

use super::{DensityReport, LabError, WeylTerm};

fn write_rows<W: Write>(
    out: W,
    header: [&str; 3],
    rows: impl IntoIterator<Item = (String, Rational)>,
    digits: usize,
) -> Result<(), LabError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| LabError::Csv(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for (key, value) in rows {
        w.write_record([key, to_decimal(&value, digits), format_rational(&value)])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| LabError::Csv(e.to_string()))
}

/// Columns `n,value,exact`.
pub fn write_g_csv<W: Write>(out: W, values: &[Rational], digits: usize) -> Result<(), LabError> {
    write_rows(
        out,
        ["n", "value", "exact"],
        values.iter().enumerate().map(|(n, v)| (n.to_string(), v.clone())),
        digits,
    )
}

/// Columns `horizon,density,exact`.
pub fn write_density_csv<W: Write>(out: W, report: &DensityReport, digits: usize) -> Result<(), LabError> {
    write_rows(
        out,
        ["horizon", "density", "exact"],
        report.trajectory.iter().map(|p| (p.horizon.to_string(), p.density.clone())),
        digits,
    )
}

/// Columns `m,fractional_part,exact`.
pub fn write_weyl_csv<W: Write>(out: W, terms: &[WeylTerm], digits: usize) -> Result<(), LabError> {
    write_rows(
        out,
        ["m", "fractional_part", "exact"],
        terms.iter().map(|t| (t.index.to_string(), t.fraction.clone())),
        digits,
    )
}
