//! CSV and JSON export of sampled fields.
//!
//! CSV: header `axis1,...,value`, one sample per row in row-major order,
//! every number with 17 significant digits so it reads back bit-for-bit.
//! JSON: `{"axes": [{"name", "values"}], "shape": [...], "values": [...]}`.

use crate::config::Format;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use wigner_lab::numerics::{NamedAxis, SampledField};

/// Decimal text with 17 significant digits.
pub fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // Python and most CSV readers accept these spellings.
        if v.is_nan() { "nan" } else if v > 0.0 { "inf" } else { "-inf" }.to_string()
    }
}

pub fn to_csv(field: &SampledField<f64>) -> String {
    let mut out = String::new();
    for a in &field.axes {
        out.push_str(&a.name);
        out.push(',');
    }
    out.push_str("value\n");
    for (n, v) in field.values.iter().enumerate() {
        for c in field.coords_of(n) {
            out.push_str(&number(c));
            out.push(',');
        }
        out.push_str(&number(*v));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonAxis {
    name: String,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonField {
    axes: Vec<JsonAxis>,
    shape: Vec<usize>,
    values: Vec<Option<f64>>,
}

pub fn to_json(field: &SampledField<f64>) -> String {
    let doc = JsonField {
        axes: field.axes.iter().map(|a| JsonAxis { name: a.name.clone(), values: a.values.clone() }).collect(),
        shape: field.shape(),
        values: field.values.iter().map(|&v| v.is_finite().then_some(v)).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serialises")
}

pub fn render(field: &SampledField<f64>, format: Format) -> String {
    match format {
        Format::Csv => to_csv(field),
        Format::Json => to_json(field),
    }
}

/// Writes `field` to `path`; errors carry the path.
pub fn export_grid(field: &SampledField<f64>, path: &Path, format: Format) -> anyhow::Result<()> {
    write_text(path, &render(field, format))
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    file.write_all(text.as_bytes()).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    Ok(())
}

/// Parses CSV produced by [`to_csv`] back into a field. Lines starting
/// with `#` (report footers) are skipped.
pub fn parse_csv(text: &str) -> anyhow::Result<SampledField<f64>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| anyhow::anyhow!("empty CSV"))?.split(',').collect();
    if header.last() != Some(&"value") {
        anyhow::bail!("last CSV column must be 'value'");
    }
    let dims = header.len() - 1;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| anyhow::anyhow!("data row {}: {e}", i + 1))?;
        if row.len() != dims + 1 {
            anyhow::bail!("data row {} has {} columns, expected {}", i + 1, row.len(), dims + 1);
        }
        rows.push(row);
    }
    let mut axes: Vec<NamedAxis<f64>> = header[..dims].iter().map(|n| NamedAxis { name: n.to_string(), values: Vec::new() }).collect();
    for row in &rows {
        for (d, axis) in axes.iter_mut().enumerate() {
            if !axis.values.iter().any(|v| v.to_bits() == row[d].to_bits()) {
                axis.values.push(row[d]);
            }
        }
    }
    let values = rows.iter().map(|r| r[dims]).collect();
    Ok(SampledField::new(axes, values)?)
}

/// Appends `# key=value` footer lines to CSV text.
pub fn with_footer(mut csv: String, footer: &[(String, String)]) -> String {
    for (k, v) in footer {
        let _ = writeln!(csv, "# {k}={v}");
    }
    csv
}
