//! Exhaustive scans: least runs of consecutive happy numbers, happy numbers
//! in a residue class, and cover values `h` with `h + x` happy for all `x` in
//! a set.
//!
//! Every scan goes through one chunked engine. The range is cut into fixed
//! chunks, workers summarize chunks independently, and a single-threaded merge
//! consumes the summaries in order, so the output does not depend on the
//! worker count or the chunk size. Scans can be interrupted and resumed from a
//! [`ScanCheckpoint`].

mod checkpoint;
mod engine;
mod scanner;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use checkpoint::{ScanCheckpoint, CHECKPOINT_FORMAT_VERSION};
pub use engine::{scan, ScanOutcome};
pub use scanner::Scanner;

use crate::map::Params;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanMode {
    /// Maximal runs of at least `length` consecutive happy numbers.
    RunSearch { length: u64 },
    /// Happy numbers `n = residue (mod modulus)`.
    ResidueSearch { residue: u64, modulus: u64 },
    /// Values `h` such that `h + x` is happy for every member `x`.
    CoverSearch { members: Vec<u64> },
}

impl ScanMode {
    fn validate(&self) -> Result<()> {
        match self {
            ScanMode::RunSearch { length: 0 } => Err(Error::InvalidArgument(
                "run length must be at least 1".into(),
            )),
            ScanMode::ResidueSearch { residue, modulus } if *modulus == 0 || residue >= modulus => {
                Err(Error::InvalidArgument(format!(
                    "residue {residue} must lie in [0, {modulus})"
                )))
            }
            ScanMode::CoverSearch { members } if members.is_empty() => {
                Err(Error::InvalidArgument("cover set must not be empty".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A scan result. For run scans `start..start + length` are all happy and the
/// run is maximal within the scanned range; residue and cover hits are
/// reported with `length = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunRecord {
    pub start: u64,
    pub length: u64,
    pub params: Params,
}

/// Periodic checkpointing.
#[derive(Clone, Debug)]
pub struct CheckpointSink {
    pub path: PathBuf,
    /// Write whenever at least this many values were scanned since the last write.
    pub every: u64,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub workers: usize,
    pub chunk_size: u64,
    /// Stop after this many results.
    pub max_hits: Option<usize>,
    pub checkpoint: Option<CheckpointSink>,
    /// Stop (as if interrupted) once `next_n` reaches this value.
    pub stop_at: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            workers: 1,
            chunk_size: 1 << 16,
            max_hits: None,
            checkpoint: None,
            stop_at: None,
        }
    }
}

impl ScanConfig {
    pub fn with_workers(workers: usize) -> Self {
        ScanConfig {
            workers,
            ..Self::default()
        }
    }
}

/// Worker count from `HAPPY_THREADS`, falling back to the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("HAPPY_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Least `s <= bound - m + 1` with `s, ..., s + m - 1` all happy. The record
/// carries the full length of the maximal run starting at `s` (clipped to `bound`).
pub fn find_least_run(
    params: &Params,
    m: u64,
    bound: u64,
    config: &ScanConfig,
) -> Result<Option<RunRecord>> {
    let config = ScanConfig {
        max_hits: Some(1),
        ..config.clone()
    };
    let out = scan(
        params,
        &ScanMode::RunSearch { length: m },
        bound,
        None,
        &config,
    )?;
    Ok(out.found.first().copied())
}

/// Least happy `h <= bound` with `h = a (mod modulus)`.
pub fn find_happy_in_residue(
    params: &Params,
    a: u64,
    modulus: u64,
    bound: u64,
) -> Result<Option<u64>> {
    let mode = ScanMode::ResidueSearch {
        residue: a,
        modulus,
    };
    let config = ScanConfig {
        max_hits: Some(1),
        ..ScanConfig::default()
    };
    Ok(scan(params, &mode, bound, None, &config)?
        .found
        .first()
        .map(|r| r.start))
}

/// Least `h <= bound` with `h + x` happy for every `x` in `members`.
pub fn find_cover_h(
    params: &Params,
    members: &[u64],
    bound: u64,
    workers: usize,
) -> Result<Option<u64>> {
    let mode = ScanMode::CoverSearch {
        members: members.to_vec(),
    };
    let config = ScanConfig {
        max_hits: Some(1),
        workers,
        ..ScanConfig::default()
    };
    Ok(scan(params, &mode, bound, None, &config)?
        .found
        .first()
        .map(|r| r.start))
}

/// All maximal runs of length at least `m` in `[1, bound]`.
pub fn parallel_scan(
    params: &Params,
    m: u64,
    bound: u64,
    chunk_size: u64,
    workers: usize,
) -> Result<Vec<RunRecord>> {
    let config = ScanConfig {
        workers,
        chunk_size,
        ..ScanConfig::default()
    };
    Ok(scan(
        params,
        &ScanMode::RunSearch { length: m },
        bound,
        None,
        &config,
    )?
    .found)
}

#[cfg(test)]
mod tests;
