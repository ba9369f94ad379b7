//! CSV and JSON output, and reading sweep CSV back for contouring.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::config::SweepSpec;
use super::contour::Contour;
use super::run::SweepRow;
use crate::error::{Error, Result};
use crate::measures::CorrelationClass;

pub const CSV_HEADER: &str = "g,l_over_t,d_over_t,gamma_a,gamma_b,gamma_c,phi_ab,phi_ba,s_ab,s_b,s_cond,lambda_min,negativity,concurrence,eof,discord,psd_ok,class_label";

const FLOAT_COLUMNS: usize = 16;

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Rows as CSV text: the fixed header, LF endings, shortest round-trip
/// floats. Class labels contain a comma and are therefore quoted.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let record = |r: &SweepRow| -> Vec<String> {
        let floats = [
            r.g,
            r.l_over_t,
            r.d_over_t,
            r.gamma_a,
            r.gamma_b,
            r.gamma_c,
            r.phi_ab,
            r.phi_ba,
            r.s_ab,
            r.s_b,
            r.s_cond,
            r.lambda_min,
            r.negativity,
            r.concurrence,
            r.eof,
            r.discord,
        ];
        let mut out: Vec<String> = floats.iter().map(f64::to_string).collect();
        out.push(r.psd_ok.to_string());
        out.push(r.class_label.label().to_string());
        out
    };
    // Writing into a Vec cannot fail.
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for r in rows {
        w.write_record(record(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

fn parse_label(s: &str) -> Option<CorrelationClass> {
    [
        CorrelationClass::NegativeEntangled,
        CorrelationClass::PositiveEntangled,
        CorrelationClass::PositiveSeparable,
        CorrelationClass::Unphysical,
    ]
    .into_iter()
    .find(|c| c.label() == s)
}

/// Parse CSV written by [`rows_to_csv`].
pub fn rows_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Format(format!("unexpected CSV header `{header}`")));
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let line_no = idx + 2;
        let bad = |what: &str| Error::Format(format!("CSV line {line_no}: {what}"));
        if record.len() != FLOAT_COLUMNS + 2 {
            return Err(bad(&format!(
                "expected {} columns, got {}",
                FLOAT_COLUMNS + 2,
                record.len()
            )));
        }
        let mut f = [0.0; FLOAT_COLUMNS];
        for (slot, raw) in f.iter_mut().zip(record.iter()) {
            *slot = raw.trim().parse().map_err(|_| bad(&format!("bad number `{raw}`")))?;
        }
        let psd_ok = match record[FLOAT_COLUMNS].trim() {
            "true" => true,
            "false" => false,
            other => return Err(bad(&format!("bad psd_ok `{other}`"))),
        };
        let label = record[FLOAT_COLUMNS + 1].trim();
        let class_label = parse_label(label).ok_or_else(|| bad(&format!("bad class label `{label}`")))?;
        rows.push(SweepRow {
            g: f[0],
            l_over_t: f[1],
            d_over_t: f[2],
            gamma_a: f[3],
            gamma_b: f[4],
            gamma_c: f[5],
            phi_ab: f[6],
            phi_ba: f[7],
            s_ab: f[8],
            s_b: f[9],
            s_cond: f[10],
            lambda_min: f[11],
            negativity: f[12],
            concurrence: f[13],
            eof: f[14],
            discord: f[15],
            psd_ok,
            class_label,
            degenerate: psd_ok && f[10].abs() <= crate::measures::ENTROPY_ZERO_TOL,
            error: None,
        });
    }
    Ok(rows)
}

/// JSON document with the spec, its config echo, the library version and the rows.
/// Rows carry the coordinates plus the measures listed in `spec.outputs`.
pub fn rows_to_json(spec: &SweepSpec, rows: &[SweepRow]) -> Result<String> {
    let rows_json: Vec<Value> = rows
        .iter()
        .map(|r| {
            let full = serde_json::to_value(r).map_err(|e| Error::Format(e.to_string()))?;
            let Value::Object(full) = full else {
                unreachable!("rows serialize as objects")
            };
            let mut keep = Map::new();
            for (k, v) in full {
                let always = matches!(k.as_str(), "g" | "l_over_t" | "d_over_t" | "degenerate" | "error");
                if always || spec.outputs.contains(&k) {
                    keep.insert(k, v);
                }
            }
            Ok(Value::Object(keep))
        })
        .collect::<Result<_>>()?;
    let doc = json!({
        "spec": spec,
        "config": spec.to_config_string(),
        "library_version": crate::VERSION,
        "rows": rows_json,
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Polylines as CSV: `polyline,vertex,<x axis>,<y axis>`.
pub fn contour_to_csv(contour: &Contour) -> String {
    let mut out = format!("polyline,vertex,{},{}\n", contour.x_axis, contour.y_axis);
    for (i, line) in contour.polylines.iter().enumerate() {
        for (j, p) in line.iter().enumerate() {
            out.push_str(&format!("{i},{j},{},{}\n", p[0], p[1]));
        }
    }
    out
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_file(path, &rows_to_csv(rows))
}

pub fn emit_json(spec: &SweepSpec, rows: &[SweepRow], path: &Path) -> Result<()> {
    write_file(path, &rows_to_json(spec, rows)?)
}

pub fn emit_contour_csv(contour: &Contour, path: &Path) -> Result<()> {
    write_file(path, &contour_to_csv(contour))
}
