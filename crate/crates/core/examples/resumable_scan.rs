//! A scan interrupted halfway, checkpointed to disk and resumed.
//!
//! The resumed result is identical to an uninterrupted scan, whatever the
//! worker count or chunk size.

use consecutive_happy::search::{scan, CheckpointSink, ScanCheckpoint, ScanConfig, ScanMode};
use consecutive_happy::Params;

fn main() -> consecutive_happy::Result<()> {
    let params = Params::new(2, 10)?;
    let mode = ScanMode::RunSearch { length: 4 };
    let bound = 2_000_000;
    let path = std::env::temp_dir().join("happy-example-checkpoint.json");

    let first = ScanConfig {
        workers: 2,
        chunk_size: 10_000,
        checkpoint: Some(CheckpointSink {
            path: path.clone(),
            every: 100_000,
        }),
        stop_at: Some(bound / 2),
        ..ScanConfig::default()
    };
    let part = scan(&params, &mode, bound, None, &first)?;
    println!(
        "stopped at {} with {} runs so far (complete: {})",
        part.checkpoint.next_n,
        part.found.len(),
        part.complete
    );

    let saved = ScanCheckpoint::load(&path)?;
    let rest = ScanConfig {
        workers: 4,
        chunk_size: 7_000,
        ..ScanConfig::default()
    };
    let resumed = scan(&params, &mode, bound, Some(saved), &rest)?;
    let straight = scan(&params, &mode, bound, None, &ScanConfig::default())?;
    println!(
        "resumed: {} runs of length >= 4 up to {bound}",
        resumed.found.len()
    );
    println!(
        "identical to an uninterrupted scan: {}",
        resumed.found == straight.found
    );
    for r in resumed.found.iter().take(5) {
        println!("  {} .. {}", r.start, r.start + r.length - 1);
    }
    std::fs::remove_file(&path).ok();
    Ok(())
}
