use rayon::prelude::*;

use super::{RunRecord, ScanCheckpoint, ScanConfig, ScanMode, Scanner};
use crate::map::Params;
use crate::{Error, Result};

/// Chunks handed to the pool per merge round, per worker.
const CHUNKS_PER_WORKER: usize = 4;

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    /// Results in increasing order. For run scans this includes a run still
    /// open at the end of the range, clipped to it.
    pub found: Vec<RunRecord>,
    /// State after the last merged chunk; feed it back to continue.
    pub checkpoint: ScanCheckpoint,
    /// `false` when the scan stopped early because of `stop_at`.
    pub complete: bool,
}

enum Summary {
    Runs {
        len: u64,
        /// happy values from the chunk start
        prefix: u64,
        /// happy values up to the chunk end
        suffix: u64,
        /// maximal runs touching neither chunk edge, of the requested length
        inner: Vec<(u64, u64)>,
    },
    Hits(Vec<u64>),
}

fn summarize(scanner: &Scanner, mode: &ScanMode, lo: u64, hi: u64, limit: usize) -> Summary {
    match mode {
        ScanMode::RunSearch { length } => {
            let mut prefix = 0u64;
            let mut in_prefix = true;
            let mut run_start = None;
            let mut inner = Vec::new();
            scanner.for_each(lo, hi, |n, happy| {
                if happy {
                    if in_prefix {
                        prefix += 1;
                    } else if run_start.is_none() {
                        run_start = Some(n);
                    }
                } else {
                    in_prefix = false;
                    if let Some(s) = run_start.take() {
                        if n - s >= *length && inner.len() < limit {
                            inner.push((s, n - s));
                        }
                    }
                }
            });
            let len = hi - lo;
            let suffix = if in_prefix {
                len
            } else {
                run_start.map_or(0, |s| hi - s)
            };
            Summary::Runs {
                len,
                prefix,
                suffix,
                inner,
            }
        }
        ScanMode::ResidueSearch { residue, modulus } => {
            let mut hits = Vec::new();
            let offset = (residue + modulus - lo % modulus) % modulus;
            let mut n = lo.saturating_add(offset);
            while n < hi && hits.len() < limit {
                if scanner.is_happy(n) {
                    hits.push(n);
                }
                n = n.saturating_add(*modulus);
            }
            Summary::Hits(hits)
        }
        ScanMode::CoverSearch { members } => {
            let mut hits = Vec::new();
            for h in lo..hi {
                if hits.len() >= limit {
                    break;
                }
                if members.iter().all(|&x| scanner.is_happy(h + x)) {
                    hits.push(h);
                }
            }
            Summary::Hits(hits)
        }
    }
}

struct Merger {
    state: ScanCheckpoint,
    params: Params,
    length: u64,
    max_hits: usize,
}

impl Merger {
    fn done(&self) -> bool {
        self.state.found.len() >= self.max_hits
    }

    fn record(&mut self, start: u64, length: u64) {
        if !self.done() {
            self.state.found.push(RunRecord {
                start,
                length,
                params: self.params,
            });
        }
    }

    fn merge(&mut self, lo: u64, hi: u64, summary: Summary) {
        match summary {
            Summary::Runs {
                len,
                prefix,
                suffix,
                inner,
            } => {
                if prefix == len {
                    self.state.open_run_start.get_or_insert(lo);
                    self.state.open_run_len += len;
                } else {
                    let total = self.state.open_run_len + prefix;
                    let start = self.state.open_run_start.unwrap_or(lo);
                    if total >= self.length {
                        self.record(start, total);
                    }
                    for (s, l) in inner {
                        self.record(s, l);
                    }
                    self.state.open_run_start = (suffix > 0).then(|| hi - suffix);
                    self.state.open_run_len = suffix;
                }
            }
            Summary::Hits(hits) => {
                for h in hits {
                    self.record(h, 1);
                }
            }
        }
        self.state.next_n = hi;
    }
}

/// Scans `[1, bound]` (or continues from `resume`) in `mode`.
pub fn scan(
    params: &Params,
    mode: &ScanMode,
    bound: u64,
    resume: Option<ScanCheckpoint>,
    config: &ScanConfig,
) -> Result<ScanOutcome> {
    mode.validate()?;
    if config.workers == 0 || config.chunk_size == 0 {
        return Err(Error::InvalidArgument(
            "workers and chunk size must be positive".into(),
        ));
    }
    let state = match resume {
        Some(cp) => {
            cp.check()?;
            if cp.params != *params || cp.scan_mode != *mode {
                return Err(Error::InvalidArgument(format!(
                    "checkpoint is for {} {:?}, not {} {:?}",
                    cp.params, cp.scan_mode, params, mode
                )));
            }
            cp
        }
        None => ScanCheckpoint::fresh(*params, mode.clone()),
    };
    let headroom = match mode {
        ScanMode::CoverSearch { members } => members.iter().copied().max().unwrap_or(0),
        _ => 0,
    };
    if bound
        .checked_add(headroom)
        .and_then(|v| v.checked_add(1))
        .is_none()
    {
        return Err(Error::TooLarge(format!(
            "bound {bound} too close to the u64 limit"
        )));
    }
    let end = bound + 1;
    let max_hits = config.max_hits.unwrap_or(usize::MAX);
    let length = match mode {
        ScanMode::RunSearch { length } => *length,
        _ => 0,
    };

    let scanner = Scanner::new(params)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let mut merger = Merger {
        state,
        params: *params,
        length,
        max_hits,
    };
    let mut last_saved = merger.state.next_n;
    let mut complete = true;
    let batch = config.workers * CHUNKS_PER_WORKER;

    'outer: while merger.state.next_n < end && !merger.done() {
        if let Some(stop) = config.stop_at {
            if merger.state.next_n >= stop {
                complete = false;
                break;
            }
        }
        let limit = config
            .stop_at
            .map_or(end, |s| s.clamp(merger.state.next_n, end));
        let mut chunks = Vec::with_capacity(batch);
        let mut lo = merger.state.next_n;
        while chunks.len() < batch && lo < limit {
            let hi = lo.saturating_add(config.chunk_size).min(limit);
            chunks.push((lo, hi));
            lo = hi;
        }
        let hit_limit = max_hits - merger.state.found.len();
        let summaries: Vec<Summary> = pool.install(|| {
            chunks
                .par_iter()
                .map(|&(lo, hi)| summarize(&scanner, mode, lo, hi, hit_limit))
                .collect()
        });
        for ((lo, hi), summary) in chunks.into_iter().zip(summaries) {
            merger.merge(lo, hi, summary);
            if let Some(sink) = &config.checkpoint {
                if merger.state.next_n - last_saved >= sink.every {
                    merger.state.save(&sink.path)?;
                    last_saved = merger.state.next_n;
                }
            }
            if merger.done() {
                break 'outer;
            }
        }
    }
    if let Some(stop) = config.stop_at {
        if merger.state.next_n < end && !merger.done() && merger.state.next_n >= stop {
            complete = false;
        }
    }
    if let Some(sink) = &config.checkpoint {
        merger.state.save(&sink.path)?;
    }

    let mut found = merger.state.found.clone();
    if complete && !merger.done() && length > 0 && merger.state.open_run_len >= length {
        let start = merger.state.open_run_start.expect("open run has a start");
        found.push(RunRecord {
            start,
            length: merger.state.open_run_len,
            params: *params,
        });
    }
    Ok(ScanOutcome {
        found,
        checkpoint: merger.state,
        complete,
    })
}
