//! Newline-delimited JSON persistence for sweeps.
//!
//! The checkpoint `<out>.ckpt` starts with a header line carrying a hash of
//! everything that determines the chunk contents (rank, alphabet, chunk
//! size). Each finished chunk appends one line and is flushed, so a killed
//! run loses at most the chunk being written; a torn trailing line is
//! discarded on resume.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::SweepError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub config_hash: String,
    pub rank: u32,
    pub alphabet: Vec<i64>,
    pub chunk_size: u64,
    pub chunks: u64,
}

/// Distinct values of one chunk: `(value, count, smallest index)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub chunk: u64,
    pub values: Vec<(String, u64, u64)>,
}

pub fn config_hash(rank: u32, alphabet: &[i64], chunk_size: u64) -> String {
    let canonical = serde_json::json!({
        "rank": rank,
        "alphabet": alphabet,
        "chunk_size": chunk_size,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn checkpoint_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".ckpt");
    PathBuf::from(name)
}

fn corrupt(path: &Path, reason: impl Into<String>) -> SweepError {
    SweepError::Checkpoint {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Reads the chunks recorded so far. A final line without its newline is a
/// write cut short by a kill; it is dropped and the file truncated so new
/// records append cleanly. Any other malformed line is an error.
pub fn load(path: &Path, expected: &Header) -> Result<Vec<ChunkRecord>, SweepError> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut line = String::new();
    let mut good_len = 0u64;
    let mut records = Vec::new();
    let mut first = true;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        if first {
            let header: Header = serde_json::from_str(&line)
                .map_err(|e| corrupt(path, format!("bad header: {e}")))?;
            if header.config_hash != expected.config_hash {
                return Err(corrupt(
                    path,
                    "checkpoint was written for a different rank, alphabet or chunk size",
                ));
            }
            first = false;
        } else {
            let record: ChunkRecord = serde_json::from_str(&line)
                .map_err(|e| corrupt(path, format!("bad chunk record: {e}")))?;
            if record.chunk >= expected.chunks {
                return Err(corrupt(
                    path,
                    format!("chunk {} out of range", record.chunk),
                ));
            }
            records.push(record);
        }
        good_len += n as u64;
    }
    // without a complete header nothing survives, and the file is emptied
    let file = OpenOptions::new().write(true).open(path)?;
    file.set_len(good_len)?;
    Ok(records)
}

/// Append-only writer for chunk records.
pub struct CheckpointWriter {
    out: BufWriter<File>,
}

impl CheckpointWriter {
    /// Starts a fresh checkpoint containing only the header.
    pub fn create(path: &Path, header: &Header) -> Result<Self, SweepError> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, header)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(Self { out })
    }

    /// Reopens an existing checkpoint for appending.
    pub fn append(path: &Path) -> Result<Self, SweepError> {
        let mut file = OpenOptions::new().write(true).open(path)?;
        file.seek(SeekFrom::End(0))?;
        Ok(Self {
            out: BufWriter::new(file),
        })
    }

    pub fn write(&mut self, record: &ChunkRecord) -> Result<(), SweepError> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.out.flush()?;
        Ok(())
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename, so
/// readers never see a half-written result.
pub fn write_atomically(path: &Path, contents: &str) -> Result<(), SweepError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
