//! Matrix, label and report file formats.
//!
//! Matrices are read from either CSV (one row per matrix row, optional
//! header) or a flat binary layout: the magic `ENSCMAT1`, `u32` rows and
//! `u32` cols (little endian), then `rows × cols` little-endian `f64` in
//! column-major order. Every writer goes through a temporary file in the
//! target directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::Path;

use ensc_core::orgen::OrgenTrace;
use ensc_core::theory::PhaseGridResult;
use ensc_core::{Affinity, DenseMatrix};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const MATRIX_MAGIC: &[u8; 8] = b"ENSCMAT1";

/// Writes `bytes` to `path` atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn encode_matrix(m: &DenseMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * m.as_slice().len());
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_matrix(path: &Path, bytes: &[u8]) -> CliResult<DenseMatrix> {
    if bytes.len() < 16 || &bytes[..8] != MATRIX_MAGIC {
        return Err(CliError::parse(path, "missing ENSCMAT1 header"));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    if body.len() != rows * cols * 8 {
        return Err(CliError::parse(
            path,
            format!("expected {} data bytes for {rows}x{cols}, found {}", rows * cols * 8, body.len()),
        ));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    DenseMatrix::from_column_major(rows, cols, data).map_err(|e| CliError::parse(path, e.to_string()))
}

pub fn write_matrix_binary(path: &Path, m: &DenseMatrix) -> CliResult<()> {
    write_atomic(path, &encode_matrix(m))
}

pub fn write_matrix_csv(path: &Path, m: &DenseMatrix) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    for i in 0..m.rows() {
        w.write_record((0..m.cols()).map(|j| m.get(i, j).to_string()))
            .expect("in-memory write");
    }
    write_atomic(path, &w.into_inner().expect("in-memory write"))
}

/// Numeric CSV rows; a first row that does not parse is taken as a header.
fn read_csv_rows(path: &Path, bytes: &[u8]) -> CliResult<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut rows = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e.to_string()))?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if k == 0 => continue,
            Err(e) => return Err(CliError::parse(path, format!("line {}: {e}", k + 1))),
        }
    }
    Ok(rows)
}

/// Reads a matrix in either format, chosen by the file's leading bytes.
pub fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    let bytes = read_bytes(path)?;
    if bytes.starts_with(MATRIX_MAGIC) {
        return decode_matrix(path, &bytes);
    }
    let rows = read_csv_rows(path, &bytes)?;
    if rows.is_empty() {
        return Err(CliError::parse(path, "no numeric rows"));
    }
    let n = rows.len();
    let m = rows[0].len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(CliError::parse(path, "rows differ in length"));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    DenseMatrix::from_row_major(n, m, &flat).map_err(|e| CliError::parse(path, e.to_string()))
}

/// Reads a vector stored as a single-column or single-row matrix.
pub fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    let m = read_matrix(path)?;
    if m.cols() == 1 || m.rows() == 1 {
        Ok(m.into_vec())
    } else {
        Err(CliError::parse(path, "expected a single row or column"))
    }
}

pub fn write_vector_csv(path: &Path, header: &str, v: &[f64]) -> CliResult<()> {
    let mut s = String::with_capacity(v.len() * 20);
    s.push_str(header);
    s.push('\n');
    for x in v {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())
}

pub fn read_labels(path: &Path) -> CliResult<Vec<usize>> {
    let bytes = read_bytes(path)?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let mut labels = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e.to_string()))?;
        if rec.len() != 1 {
            return Err(CliError::parse(path, format!("line {}: expected one column", k + 1)));
        }
        match rec[0].parse::<usize>() {
            Ok(l) => labels.push(l),
            Err(_) if k == 0 => continue,
            Err(e) => return Err(CliError::parse(path, format!("line {}: {e}", k + 1))),
        }
    }
    Ok(labels)
}

pub fn write_labels(path: &Path, labels: &[usize]) -> CliResult<()> {
    let mut s = String::from("label\n");
    for l in labels {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    write_atomic(path, s.as_bytes())
}

pub fn write_affinity(path: &Path, w: &Affinity) -> CliResult<()> {
    let mut s = String::from("i,j,w\n");
    for &(i, j, v) in w.triplets() {
        s.push_str(&format!("{i},{j},{v}\n"));
    }
    write_atomic(path, s.as_bytes())
}

pub fn read_affinity(path: &Path) -> CliResult<Affinity> {
    let rows = read_csv_rows(path, &read_bytes(path)?)?;
    let mut n = 0;
    let mut triplets = Vec::with_capacity(rows.len());
    for r in rows {
        if r.len() != 3 || r[0] < 0.0 || r[1] < 0.0 || r[0].fract() != 0.0 || r[1].fract() != 0.0 {
            return Err(CliError::parse(path, "expected integer i,j and weight w"));
        }
        let (i, j) = (r[0] as usize, r[1] as usize);
        n = n.max(i + 1).max(j + 1);
        triplets.push((i, j, r[2]));
    }
    Affinity::from_triplets(n, triplets).map_err(|e| CliError::parse(path, e.to_string()))
}

pub fn write_trace(path: &Path, trace: &OrgenTrace) -> CliResult<()> {
    let mut s = String::from("iteration,active_size,objective,support_size,residual\n");
    for it in &trace.iterations {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            it.iteration, it.active_size, it.objective, it.support_size, it.residual
        ));
    }
    write_atomic(path, s.as_bytes())
}

pub fn phase_grid_csv(grid: &PhaseGridResult) -> String {
    let mut s = String::from("N,lambda,experimental_pct,predicted_pct,seeds\n");
    for c in &grid.cells {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            c.n, c.lambda, c.experimental_pct, c.predicted_pct, c.seeds
        ));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub solver: String,
    pub seconds: f64,
    pub support: usize,
    pub outer_iters: usize,
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 csv")
}
