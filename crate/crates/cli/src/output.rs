//! Deterministic result tables: CSV (fixed header, 9-significant-digit
//! floats, LF line endings) and JSON (array of flat objects).

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::sweep::ResultRecord;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("nothing to emit")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    BadCsv(String),
}

/// Floats print with 9 significant digits in scientific form.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.8e}")
}

fn escape_csv(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Serializes records as CSV text in canonical column order.
pub fn csv_string(records: &[ResultRecord]) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::Empty);
    }
    let mut out = String::new();
    out.push_str(&ResultRecord::COLUMNS.join(","));
    out.push('\n');
    for r in records {
        let fields = [
            escape_csv(&r.benchmark),
            escape_csv(&r.topology),
            escape_csv(&r.density_target),
            format_float(r.density),
            r.qubits.to_string(),
            r.edges.to_string(),
            escape_csv(&r.layout),
            escape_csv(&r.routing),
            r.opt_level.to_string(),
            r.setup.to_string(),
            escape_csv(&r.scheduling),
            r.seed.to_string(),
            escape_csv(&r.error),
            opt_usize(r.swaps_added),
            opt_usize(r.gates_before),
            opt_usize(r.gates_after),
            opt_usize(r.depth_before),
            opt_usize(r.depth_after),
            opt_usize(r.n1q_before),
            opt_usize(r.n2q_before),
            opt_usize(r.n1q_after),
            opt_usize(r.n2q_after),
            opt_float(r.base_fidelity),
            opt_float(r.fid_shared_qubit),
            opt_float(r.fid_simultaneous),
            opt_float(r.fid_proximity),
            opt_float(r.fid_thermal),
            opt_float(r.fid_depolarizing),
            opt_float(r.gate_overhead),
            opt_float(r.depth_overhead),
            opt_float(r.fidelity_decrease),
            opt_float(r.cost_improvement),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_csv(records: &[ResultRecord], path: &Path) -> Result<(), OutputError> {
    let text = csv_string(records)?;
    write_file(path, text.as_bytes())
}

/// Serializes records as a JSON array of flat objects (same keys as the
/// CSV columns; unavailable metrics are null).
pub fn json_string(records: &[ResultRecord]) -> Result<String, OutputError> {
    if records.is_empty() {
        return Err(OutputError::Empty);
    }
    Ok(serde_json::to_string_pretty(records)?)
}

pub fn emit_json(records: &[ResultRecord], path: &Path) -> Result<(), OutputError> {
    let text = json_string(records)?;
    write_file(path, text.as_bytes())
}

pub fn read_json(path: &Path) -> Result<Vec<ResultRecord>, OutputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| OutputError::Read { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let io = |source| OutputError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(bytes).map_err(io)
}

/// Splits one CSV line honoring double-quote escaping.
fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    current.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if current.is_empty() => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut current)),
            c => current.push(c),
        }
    }
    fields.push(current);
    fields
}

/// Reads back a results CSV into records (inverse of [`csv_string`]).
pub fn read_csv(path: &Path) -> Result<Vec<ResultRecord>, OutputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| OutputError::Read { path: path.display().to_string(), source })?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRecord>, OutputError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| OutputError::BadCsv("empty file".to_string()))?;
    let expected = ResultRecord::COLUMNS.join(",");
    if header != expected {
        return Err(OutputError::BadCsv(format!("unexpected header '{header}'")));
    }
    let parse_usize = |s: &str| -> Result<Option<usize>, OutputError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| OutputError::BadCsv(format!("bad integer '{s}'")))
        }
    };
    let parse_float = |s: &str| -> Result<Option<f64>, OutputError> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| OutputError::BadCsv(format!("bad float '{s}'")))
        }
    };
    let mut records = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f = split_csv_line(line);
        if f.len() != ResultRecord::COLUMNS.len() {
            return Err(OutputError::BadCsv(format!("expected {} fields, got {}", ResultRecord::COLUMNS.len(), f.len())));
        }
        records.push(ResultRecord {
            benchmark: f[0].clone(),
            topology: f[1].clone(),
            density_target: f[2].clone(),
            density: f[3].parse().map_err(|_| OutputError::BadCsv(format!("bad float '{}'", f[3])))?,
            qubits: f[4].parse().map_err(|_| OutputError::BadCsv(format!("bad integer '{}'", f[4])))?,
            edges: f[5].parse().map_err(|_| OutputError::BadCsv(format!("bad integer '{}'", f[5])))?,
            layout: f[6].clone(),
            routing: f[7].clone(),
            opt_level: f[8].parse().map_err(|_| OutputError::BadCsv(format!("bad level '{}'", f[8])))?,
            setup: f[9].parse().map_err(|_| OutputError::BadCsv(format!("bad setup '{}'", f[9])))?,
            scheduling: f[10].clone(),
            seed: f[11].parse().map_err(|_| OutputError::BadCsv(format!("bad seed '{}'", f[11])))?,
            error: f[12].clone(),
            swaps_added: parse_usize(&f[13])?,
            gates_before: parse_usize(&f[14])?,
            gates_after: parse_usize(&f[15])?,
            depth_before: parse_usize(&f[16])?,
            depth_after: parse_usize(&f[17])?,
            n1q_before: parse_usize(&f[18])?,
            n2q_before: parse_usize(&f[19])?,
            n1q_after: parse_usize(&f[20])?,
            n2q_after: parse_usize(&f[21])?,
            base_fidelity: parse_float(&f[22])?,
            fid_shared_qubit: parse_float(&f[23])?,
            fid_simultaneous: parse_float(&f[24])?,
            fid_proximity: parse_float(&f[25])?,
            fid_thermal: parse_float(&f[26])?,
            fid_depolarizing: parse_float(&f[27])?,
            gate_overhead: parse_float(&f[28])?,
            depth_overhead: parse_float(&f[29])?,
            fidelity_decrease: parse_float(&f[30])?,
            cost_improvement: parse_float(&f[31])?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultRecord {
        ResultRecord {
            benchmark: "ghz:3".to_string(),
            topology: "sycamore_3x3".to_string(),
            density_target: "base".to_string(),
            density: 0.333333333,
            qubits: 9,
            edges: 12,
            layout: "sabre".to_string(),
            routing: "sabre".to_string(),
            opt_level: 1,
            setup: 0,
            scheduling: "alap".to_string(),
            seed: 1,
            error: String::new(),
            swaps_added: Some(2),
            gates_before: Some(3),
            gates_after: Some(11),
            depth_before: Some(3),
            depth_after: Some(8),
            n1q_before: Some(1),
            n2q_before: Some(2),
            n1q_after: Some(5),
            n2q_after: Some(6),
            base_fidelity: Some(0.87),
            fid_shared_qubit: Some(0.8),
            fid_simultaneous: Some(0.81),
            fid_proximity: Some(0.82),
            fid_thermal: Some(0.99),
            fid_depolarizing: Some(0.85),
            gate_overhead: Some(8.0 / 3.0),
            depth_overhead: Some(5.0 / 3.0),
            fidelity_decrease: Some(0.1),
            cost_improvement: None,
        }
    }

    #[test]
    fn empty_records_refuse_to_emit() {
        assert!(matches!(csv_string(&[]), Err(OutputError::Empty)));
        assert!(matches!(json_string(&[]), Err(OutputError::Empty)));
    }

    #[test]
    fn csv_has_header_plus_one_line_per_record() {
        let text = csv_string(&[sample(), sample()]).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("benchmark,topology,"));
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn floats_use_nine_significant_digits() {
        assert_eq!(format_float(0.333333333), "3.33333333e-1");
        assert_eq!(format_float(1.0), "1.00000000e0");
    }

    #[test]
    fn csv_roundtrip_preserves_records() {
        let records = vec![sample()];
        let text = csv_string(&records).unwrap();
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].benchmark, "ghz:3");
        assert_eq!(back[0].swaps_added, Some(2));
        assert_eq!(back[0].cost_improvement, None);
        assert!((back[0].base_fidelity.unwrap() - 0.87).abs() < 1e-8);
    }

    #[test]
    fn csv_escapes_commas_in_errors() {
        let mut r = sample();
        r.error = "expects 1 parameter(s), got 2".to_string();
        let text = csv_string(&[r]).unwrap();
        let back = parse_csv(&text).unwrap();
        assert_eq!(back[0].error, "expects 1 parameter(s), got 2");
    }

    #[test]
    fn json_roundtrip_equals_records() {
        let records = vec![sample()];
        let text = json_string(&records).unwrap();
        let back: Vec<ResultRecord> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, records);
    }
}
