//! Versioned binary container for tensors and run metadata.
//!
//! Little-endian named sections; `f64` payloads round-trip bit-exactly, so a
//! reloaded checkpoint reproduces inference outputs exactly.

use super::{ClassifierKind, ClassifierParams, ModelDims};
use crate::error::Error;
use crate::Result;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"SNDC";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Section {
    Tensor { rows: u64, cols: u64, data: Vec<f64> },
    Scalar(u64),
    Bytes(Vec<u8>),
}

/// An ordered list of named sections.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Container {
    sections: Vec<(String, Section)>,
}

impl Container {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_tensor(&mut self, name: &str, rows: usize, cols: usize, data: &[f64]) {
        debug_assert_eq!(rows * cols, data.len());
        self.sections.push((
            name.to_string(),
            Section::Tensor {
                rows: rows as u64,
                cols: cols as u64,
                data: data.to_vec(),
            },
        ));
    }

    pub fn push_scalar(&mut self, name: &str, value: u64) {
        self.sections.push((name.to_string(), Section::Scalar(value)));
    }

    pub fn push_bytes(&mut self, name: &str, bytes: &[u8]) {
        self.sections.push((name.to_string(), Section::Bytes(bytes.to_vec())));
    }

    fn find(&self, name: &str) -> Result<&Section> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Checkpoint(format!("missing section `{name}`")))
    }

    pub fn tensor(&self, name: &str) -> Result<(usize, usize, &[f64])> {
        match self.find(name)? {
            Section::Tensor { rows, cols, data } => Ok((*rows as usize, *cols as usize, data)),
            _ => Err(Error::Checkpoint(format!("section `{name}` is not a tensor"))),
        }
    }

    pub fn scalar(&self, name: &str) -> Result<u64> {
        match self.find(name)? {
            Section::Scalar(v) => Ok(*v),
            _ => Err(Error::Checkpoint(format!("section `{name}` is not a scalar"))),
        }
    }

    pub fn bytes(&self, name: &str) -> Result<&[u8]> {
        match self.find(name)? {
            Section::Bytes(b) => Ok(b),
            _ => Err(Error::Checkpoint(format!("section `{name}` is not bytes"))),
        }
    }

    pub fn has(&self, name: &str) -> bool {
        self.sections.iter().any(|(n, _)| n == name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        out.write_all(MAGIC).unwrap();
        out.write_u32::<LittleEndian>(VERSION).unwrap();
        out.write_u64::<LittleEndian>(self.sections.len() as u64).unwrap();
        for (name, section) in &self.sections {
            out.write_u64::<LittleEndian>(name.len() as u64).unwrap();
            out.write_all(name.as_bytes()).unwrap();
            match section {
                Section::Tensor { rows, cols, data } => {
                    out.write_u8(0).unwrap();
                    out.write_u64::<LittleEndian>(*rows).unwrap();
                    out.write_u64::<LittleEndian>(*cols).unwrap();
                    for &v in data {
                        out.write_f64::<LittleEndian>(v).unwrap();
                    }
                }
                Section::Scalar(v) => {
                    out.write_u8(1).unwrap();
                    out.write_u64::<LittleEndian>(*v).unwrap();
                }
                Section::Bytes(b) => {
                    out.write_u8(2).unwrap();
                    out.write_u64::<LittleEndian>(b.len() as u64).unwrap();
                    out.write_all(b).unwrap();
                }
            }
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Container> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let mut cur = std::io::Cursor::new(bytes);
        let mut magic = [0u8; 4];
        cur.read_exact(&mut magic)
            .map_err(|_| Error::Checkpoint("truncated header".into()))?;
        if &magic != MAGIC {
            return Err(Error::Checkpoint("bad magic".into()));
        }
        let bad = |_| Error::Checkpoint("truncated container".to_string());
        let version = cur.read_u32::<LittleEndian>().map_err(bad)?;
        if version != VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {version}, expected {VERSION}"
            )));
        }
        let count = cur.read_u64::<LittleEndian>().map_err(bad)?;
        let mut sections = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let name_len = cur.read_u64::<LittleEndian>().map_err(bad)? as usize;
            let mut name = vec![0u8; name_len];
            cur.read_exact(&mut name).map_err(bad)?;
            let name = String::from_utf8(name)
                .map_err(|_| Error::Checkpoint("non-utf8 section name".into()))?;
            let kind = cur.read_u8().map_err(bad)?;
            let section = match kind {
                0 => {
                    let rows = cur.read_u64::<LittleEndian>().map_err(bad)?;
                    let cols = cur.read_u64::<LittleEndian>().map_err(bad)?;
                    let mut data = vec![0.0; (rows * cols) as usize];
                    for v in data.iter_mut() {
                        *v = cur.read_f64::<LittleEndian>().map_err(bad)?;
                    }
                    Section::Tensor { rows, cols, data }
                }
                1 => Section::Scalar(cur.read_u64::<LittleEndian>().map_err(bad)?),
                2 => {
                    let len = cur.read_u64::<LittleEndian>().map_err(bad)? as usize;
                    let mut b = vec![0u8; len];
                    cur.read_exact(&mut b).map_err(bad)?;
                    Section::Bytes(b)
                }
                k => return Err(Error::Checkpoint(format!("unknown section kind {k}"))),
            };
            sections.push((name, section));
        }
        Ok(Container { sections })
    }
}

/// Append one classifier's identity and tensors under a name prefix.
pub(crate) fn push_params(container: &mut Container, prefix: &str, params: &ClassifierParams) {
    let dims = &params.dims;
    container.push_scalar(&format!("{prefix}.kind"), matches!(params.kind, ClassifierKind::Blstm) as u64);
    container.push_bytes(
        &format!("{prefix}.dims"),
        serde_json::to_vec(dims).expect("dims serialize").as_slice(),
    );
    container.push_scalar(&format!("{prefix}.word_rows"), params.word_rows() as u64);
    container.push_scalar(&format!("{prefix}.hashtag_rows"), params.hashtag_rows() as u64);
    for entry in params.arena.entries() {
        let id = params.arena.by_name(&entry.name).unwrap();
        container.push_tensor(
            &format!("{prefix}.{}", entry.name),
            entry.rows,
            entry.cols,
            params.arena.slice(id),
        );
    }
}

/// Rebuild a classifier from a container prefix written by [`push_params`].
pub(crate) fn take_params(container: &Container, prefix: &str) -> Result<ClassifierParams> {
    let kind = if container.scalar(&format!("{prefix}.kind"))? == 0 {
        ClassifierKind::Conv
    } else {
        ClassifierKind::Blstm
    };
    let dims: ModelDims = serde_json::from_slice(container.bytes(&format!("{prefix}.dims"))?)
        .map_err(|e| Error::Checkpoint(format!("bad dims section: {e}")))?;
    let word_rows = container.scalar(&format!("{prefix}.word_rows"))? as usize;
    let hashtag_rows = container.scalar(&format!("{prefix}.hashtag_rows"))? as usize;
    let mut params = ClassifierParams::new(kind, dims, word_rows, hashtag_rows);
    for entry in params.arena.entries().to_vec() {
        let (rows, cols, data) = container.tensor(&format!("{prefix}.{}", entry.name))?;
        if rows != entry.rows || cols != entry.cols {
            return Err(Error::Checkpoint(format!(
                "tensor `{}` has shape {rows}x{cols}, expected {}x{}",
                entry.name, entry.rows, entry.cols
            )));
        }
        let id = params.arena.by_name(&entry.name).unwrap();
        params.arena.slice_mut(id).copy_from_slice(data);
    }
    Ok(params)
}

/// Write one classifier with run metadata.
pub fn write_params(path: &Path, params: &ClassifierParams, config_hash: &str, seed: u64) -> Result<()> {
    let mut container = Container::new();
    container.push_bytes("config_hash", config_hash.as_bytes());
    container.push_scalar("seed", seed);
    push_params(&mut container, "model", params);
    container.write(path)
}

/// Read one classifier with run metadata: (params, config_hash, seed).
pub fn read_params(path: &Path) -> Result<(ClassifierParams, String, u64)> {
    let container = Container::read(path)?;
    let hash = String::from_utf8(container.bytes("config_hash")?.to_vec())
        .map_err(|_| Error::Checkpoint("non-utf8 config hash".into()))?;
    let seed = container.scalar("seed")?;
    Ok((take_params(&container, "model")?, hash, seed))
}
