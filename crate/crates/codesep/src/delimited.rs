//! Delimited-text datasets: one sample per row, one categorical label column.
//!
//! Leading lines starting with `#` are metadata; `key=value` pairs on them are
//! collected into [`Dataset::metadata`]. Rows with an empty, `?`, `NA` or
//! `NaN` cell are dropped and counted. Row and column numbers in errors are
//! 1-based file positions.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use codesep_core::{LabeledMatrix, Matrix};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Last,
}

impl std::str::FromStr for LabelColumn {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("last") {
            return Ok(LabelColumn::Last);
        }
        s.parse()
            .map(LabelColumn::Index)
            .map_err(|_| format!("`{s}` is neither a column index nor `last`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Header {
    /// A header is assumed when no feature cell of the first row is numeric.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelimitedOptions {
    pub label_column: LabelColumn,
    pub delimiter: u8,
    pub header: Header,
}

impl Default for DelimitedOptions {
    fn default() -> Self {
        Self {
            label_column: LabelColumn::Last,
            delimiter: b',',
            header: Header::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub data: LabeledMatrix,
    /// Raw label of each dense class id, in first-appearance order.
    pub class_names: Vec<String>,
    pub feature_names: Option<Vec<String>>,
    pub dropped_rows: usize,
    pub metadata: BTreeMap<String, String>,
}

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c == "?" || c.eq_ignore_ascii_case("na") || c.eq_ignore_ascii_case("nan")
}

fn parse_metadata(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .take_while(|l| l.trim_start().starts_with('#'))
        .flat_map(|l| l.trim_start().trim_start_matches('#').split_whitespace())
        .filter_map(|kv| kv.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

pub fn parse_delimited(text: &str, opts: &DelimitedOptions) -> Result<Dataset> {
    let metadata = parse_metadata(text);
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut cols: Option<usize> = None;
    let mut feature_names = None;
    let mut values: Vec<f64> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut dropped = 0;
    let mut first = true;
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|c| c.is_empty()) {
            continue;
        }
        let n = *cols.get_or_insert(rec.len());
        if rec.len() != n {
            return Err(Error::Parse {
                row: line,
                col: rec.len().min(n) + 1,
                value: format!("{} fields, expected {n}", rec.len()),
            });
        }
        if n < 2 {
            return Err(Error::Parse {
                row: line,
                col: 1,
                value: "need a label and at least one feature".into(),
            });
        }
        let label_idx = match opts.label_column {
            LabelColumn::Last => n - 1,
            LabelColumn::Index(i) if i < n => i,
            LabelColumn::Index(i) => {
                return Err(Error::Usage(format!("label column {i} out of range for {n} columns")));
            }
        };
        if first {
            first = false;
            let header = match opts.header {
                Header::Present => true,
                Header::Absent => false,
                Header::Auto => rec
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != label_idx)
                    .all(|(_, c)| c.parse::<f64>().is_err()),
            };
            if header {
                feature_names = Some(
                    rec.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != label_idx)
                        .map(|(_, c)| c.to_string())
                        .collect(),
                );
                continue;
            }
        }
        if rec.iter().any(is_missing) {
            dropped += 1;
            continue;
        }
        for (j, cell) in rec.iter().enumerate() {
            if j == label_idx {
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::Parse {
                        row: line,
                        col: j + 1,
                        value: cell.to_string(),
                    })
                }
            }
        }
        raw_labels.push(rec[label_idx].to_string());
    }
    let m = raw_labels.len();
    if m == 0 {
        return Err(Error::EmptyAfterCleaning { dropped });
    }
    let d = cols.unwrap_or(1) - 1;
    let mut class_names: Vec<String> = Vec::new();
    let labels = raw_labels
        .iter()
        .map(|l| match class_names.iter().position(|c| c == l) {
            Some(i) => i,
            None => {
                class_names.push(l.clone());
                class_names.len() - 1
            }
        })
        .collect();
    let data = LabeledMatrix::new(Matrix::from_col_major(d, m, values)?, labels)?;
    Ok(Dataset {
        data,
        class_names,
        feature_names,
        dropped_rows: dropped,
        metadata,
    })
}

pub fn load_delimited(path: impl AsRef<Path>, opts: &DelimitedOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_delimited(&text, opts)
}

/// Writes features then the label as the last column, preceded by a
/// `# key=value ...` metadata line (if any) and a header row.
pub fn write_delimited<W: Write>(
    out: W,
    data: &LabeledMatrix,
    class_names: Option<&[String]>,
    metadata: &[(String, String)],
    delimiter: u8,
) -> Result<()> {
    let mut out = out;
    if !metadata.is_empty() {
        let line: Vec<String> = metadata.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", line.join(" ")).map_err(|e| Error::io("<output>", e))?;
    }
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(out);
    let d = data.dim();
    let mut header: Vec<String> = (0..d).map(|f| format!("x{f}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for (j, col) in data.data().columns().enumerate() {
        let mut row: Vec<String> = col.iter().map(|v| v.to_string()).collect();
        let l = data.labels()[j];
        row.push(
            class_names
                .and_then(|c| c.get(l).cloned())
                .unwrap_or_else(|| l.to_string()),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(())
}

pub fn save_delimited(
    path: impl AsRef<Path>,
    data: &LabeledMatrix,
    class_names: Option<&[String]>,
    metadata: &[(String, String)],
) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_delimited(std::io::BufWriter::new(file), data, class_names, metadata, b',')
}
