//! Feature dump files.
//!
//! Binary layout (little-endian):
//!
//! ```text
//! "FSEP"  u32 version=1  u32 record_count
//! record: u16 name_len, name (UTF-8), u32 epoch, u8 rank (2 or 4),
//!         u32 dims[rank], f32 data[prod(dims)] (row-major)
//! footer: u32 n, u32 labels[n]
//! ```
//!
//! The directory alternative holds `labels.csv` (one label per line) and one
//! `<layer>@<epoch>.csv` file per record with one sample per row.

use std::fs;
use std::path::Path;

use codesep_core::probe::{natural_cmp, FeatureDump, LayerRecord};

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"FSEP";
pub const VERSION: u32 = 1;

pub fn encode_dump(dump: &FeatureDump) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(dump.records.len() as u32).to_le_bytes());
    for r in &dump.records {
        out.extend_from_slice(&(r.name.len() as u16).to_le_bytes());
        out.extend_from_slice(r.name.as_bytes());
        out.extend_from_slice(&r.epoch.to_le_bytes());
        out.push(r.shape.len() as u8);
        for &s in &r.shape {
            out.extend_from_slice(&(s as u32).to_le_bytes());
        }
        for &v in &r.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.extend_from_slice(&(dump.labels.len() as u32).to_le_bytes());
    for &l in &dump.labels {
        out.extend_from_slice(&l.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let left = self.buf.len() - self.pos;
        if n > left {
            return Err(Error::ShapeMismatch {
                offset: self.pos as u64,
                detail: format!("file ends while reading {what}: need {n} bytes, {left} left"),
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }
}

pub fn decode_dump(bytes: &[u8]) -> Result<FeatureDump> {
    let mut c = Cursor { buf: bytes, pos: 0 };
    let magic: [u8; 4] = c.take(4, "magic")?.try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(Error::BadMagic { found: magic });
    }
    let version = c.u32("version")?;
    if version != VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: VERSION,
        });
    }
    let count = c.u32("record count")? as usize;
    let mut records = Vec::with_capacity(count.min(1 << 16));
    for i in 0..count {
        let len = c.u16("name length")? as usize;
        let at = c.pos;
        let name = std::str::from_utf8(c.take(len, "layer name")?)
            .map_err(|_| Error::ShapeMismatch {
                offset: at as u64,
                detail: format!("record {i} name is not UTF-8"),
            })?
            .to_string();
        let epoch = c.u32("epoch")?;
        let at = c.pos;
        let rank = c.u8("rank")? as usize;
        if rank != 2 && rank != 4 {
            return Err(Error::ShapeMismatch {
                offset: at as u64,
                detail: format!("record `{name}` has rank {rank}"),
            });
        }
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(c.u32("dims")? as usize);
        }
        let at = c.pos;
        let values = shape
            .iter()
            .try_fold(1usize, |a, &s| a.checked_mul(s))
            .and_then(|v| v.checked_mul(4));
        let Some(nbytes) = values else {
            return Err(Error::ShapeMismatch {
                offset: at as u64,
                detail: format!("record `{name}` shape {shape:?} overflows"),
            });
        };
        let data = c
            .take(nbytes, &format!("data of `{name}`"))?
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")))
            .collect();
        let rec = LayerRecord {
            name,
            epoch,
            shape,
            data,
        };
        rec.validate().map_err(|e| Error::ShapeMismatch {
            offset: at as u64,
            detail: e.to_string(),
        })?;
        records.push(rec);
    }
    let n = c.u32("label count")? as usize;
    let raw = c.take(n.saturating_mul(4), "labels")?;
    let labels = raw
        .chunks_exact(4)
        .map(|b| u32::from_le_bytes(b.try_into().expect("4 bytes")))
        .collect();
    if c.pos != bytes.len() {
        return Err(Error::ShapeMismatch {
            offset: c.pos as u64,
            detail: format!("{} trailing bytes after labels", bytes.len() - c.pos),
        });
    }
    Ok(FeatureDump::new(records, labels)?)
}

pub fn write_dump(path: impl AsRef<Path>, dump: &FeatureDump) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_dump(dump)).map_err(|e| Error::io(path, e))
}

/// Reads a binary dump file, or a directory in the delimited layout.
pub fn load_dump(path: impl AsRef<Path>) -> Result<FeatureDump> {
    let path = path.as_ref();
    if path.is_dir() {
        return load_dump_dir(path);
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_dump(&bytes)
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f32>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Usage(format!("{}: {other:?}", path.display())),
        })?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.parse::<f32>().map_err(|_| Error::Parse {
                    row: line,
                    col: j + 1,
                    value: c.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn load_dump_dir(dir: &Path) -> Result<FeatureDump> {
    let labels: Vec<u32> = read_rows(&dir.join("labels.csv"))?
        .into_iter()
        .flatten()
        .map(|v| v as u32)
        .collect();
    let mut found = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        if path.extension().and_then(|e| e.to_str()) != Some("csv") || stem == "labels" {
            continue;
        }
        let Some((layer, epoch)) = stem.rsplit_once('@') else {
            return Err(Error::Usage(format!(
                "{}: expected `<layer>@<epoch>.csv`",
                path.display()
            )));
        };
        let epoch: u32 = epoch
            .parse()
            .map_err(|_| Error::Usage(format!("{}: bad epoch `{epoch}`", path.display())))?;
        found.push((epoch, layer.to_string(), path.clone()));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| natural_cmp(&a.1, &b.1)));
    let mut records = Vec::with_capacity(found.len());
    for (epoch, layer, path) in found {
        let rows = read_rows(&path)?;
        let d = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::Parse {
                row: i + 1,
                col: r.len(),
                value: format!("{} values, expected {d}", r.len()),
            });
        }
        let n = rows.len();
        records.push(LayerRecord::new(
            layer,
            epoch,
            vec![n, d],
            rows.into_iter().flatten().collect(),
        )?);
    }
    Ok(FeatureDump::new(records, labels)?)
}
