//! Least runs of consecutive happy numbers by exhaustive scan.

use consecutive_happy::search::{find_least_run, ScanConfig};
use consecutive_happy::Params;

fn main() -> consecutive_happy::Result<()> {
    let config = ScanConfig::with_workers(consecutive_happy::search::default_workers());
    for (e, b, m, bound) in [
        (2, 10, 2, 1_000),
        (2, 10, 5, 100_000),
        (2, 10, 6, 10_000_000),
        (3, 10, 2, 1_000_000),
    ] {
        let params = Params::new(e, b)?;
        match find_least_run(&params, m, bound, &config)? {
            Some(r) => println!(
                "{params}: least run of {m} starts at {} (maximal length {})",
                r.start, r.length
            ),
            None => println!("{params}: no run of {m} up to {bound}"),
        }
    }
    Ok(())
}
