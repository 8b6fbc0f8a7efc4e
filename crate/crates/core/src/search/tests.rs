use super::*;
use crate::map::{digits_of, ClassifierCache};

fn naive_runs(params: &Params, m: u64, bound: u64) -> Vec<(u64, u64)> {
    let cache = ClassifierCache::new(params).unwrap();
    let mut out = Vec::new();
    let mut start = None;
    for n in 1..=bound + 1 {
        let happy = n <= bound && cache.is_happy(n);
        match (happy, start) {
            (true, None) => start = Some(n),
            (false, Some(s)) => {
                if n - s >= m {
                    out.push((s, n - s));
                }
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn pairs(records: &[RunRecord]) -> Vec<(u64, u64)> {
    records.iter().map(|r| (r.start, r.length)).collect()
}

#[test]
fn block_split_matches_digits() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for &(e, b) in &[(2, 10), (3, 7), (2, 16), (1, 2), (5, 3)] {
        let params = Params::new(e, b).unwrap();
        let scanner = Scanner::new(&params).unwrap();
        for _ in 0..20_000 {
            let n: u64 = rng.gen_range(0..u64::MAX / 2);
            let want: u64 = digits_of(n, b).iter().map(|d| d.pow(e)).sum();
            assert_eq!(scanner.t(n), want);
        }
    }
}

#[test]
fn runs_agree_with_naive_loop() {
    for &(e, b) in &[(2, 10), (2, 4), (3, 10), (2, 6), (2, 16), (1, 10), (4, 3)] {
        let params = Params::new(e, b).unwrap();
        for m in 1..=6 {
            let want = naive_runs(&params, m, 100_000);
            let config = ScanConfig {
                chunk_size: 997,
                workers: 3,
                ..ScanConfig::default()
            };
            let got = scan(
                &params,
                &ScanMode::RunSearch { length: m },
                100_000,
                None,
                &config,
            )
            .unwrap();
            assert_eq!(pairs(&got.found), want, "{params} m={m}");
            let least = find_least_run(&params, m, 100_000, &ScanConfig::default()).unwrap();
            assert_eq!(
                least.map(|r| (r.start, r.length)),
                want.first().copied(),
                "{params} m={m}"
            );
        }
    }
}

#[test]
fn least_five_run_in_base_ten() {
    let params = Params::new(2, 10).unwrap();
    let r = find_least_run(&params, 5, 100_000, &ScanConfig::default())
        .unwrap()
        .unwrap();
    assert_eq!((r.start, r.length), (44488, 5));
}

#[test]
fn residue_search() {
    let p = Params::new(2, 10).unwrap();
    assert_eq!(find_happy_in_residue(&p, 7, 9, 1000).unwrap(), Some(7));
    assert_eq!(find_happy_in_residue(&p, 1, 9, 1000).unwrap(), Some(1));
    let cache = ClassifierCache::new(&p).unwrap();
    for a in 0..81 {
        let want = (1..100_000).find(|n| n % 81 == a && cache.is_happy(*n));
        assert_eq!(
            find_happy_in_residue(&p, a, 81, 100_000).unwrap(),
            want,
            "a={a}"
        );
    }
    let p3 = Params::new(3, 10).unwrap();
    assert_eq!(find_happy_in_residue(&p3, 0, 3, 100_000).unwrap(), None);
}

#[test]
fn cover_search() {
    let p = Params::new(2, 2).unwrap();
    assert_eq!(find_cover_h(&p, &[1], 10, 1).unwrap(), Some(1));
    let p = Params::new(2, 16).unwrap();
    let d = crate::map::cycle_set(&p).unwrap().members_vec();
    let cache = ClassifierCache::new(&p).unwrap();
    let got = find_cover_h(&p, &d, 100_000, 2).unwrap().unwrap();
    assert_eq!(got, 51143);
    assert!((1..got).all(|h| !d.iter().all(|x| cache.is_happy(h + x))));
}

#[test]
fn chunking_and_workers_do_not_change_results() {
    let params = Params::new(2, 10).unwrap();
    let base = parallel_scan(&params, 3, 200_000, 1000, 1).unwrap();
    for &(chunk, workers) in &[(10_000, 2), (7_000, 8), (1, 2), (123_456, 3)] {
        assert_eq!(
            parallel_scan(&params, 3, 200_000, chunk, workers).unwrap(),
            base
        );
    }
}

#[test]
fn interrupted_scan_resumes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let params = Params::new(2, 10).unwrap();
    let mode = ScanMode::RunSearch { length: 2 };
    let full = scan(
        &params,
        &mode,
        150_000,
        None,
        &ScanConfig {
            chunk_size: 1000,
            ..ScanConfig::default()
        },
    )
    .unwrap();
    for stop in [1u64, 44_490, 77_777, 149_999] {
        let config = ScanConfig {
            chunk_size: 1000,
            stop_at: Some(stop),
            checkpoint: Some(CheckpointSink {
                path: path.clone(),
                every: 5000,
            }),
            ..ScanConfig::default()
        };
        let first = scan(&params, &mode, 150_000, None, &config).unwrap();
        assert!(!first.complete || stop <= 1);
        let cp = ScanCheckpoint::load(&path).unwrap();
        assert_eq!(cp, first.checkpoint);
        let rest = scan(
            &params,
            &mode,
            150_000,
            Some(cp),
            &ScanConfig {
                chunk_size: 3000,
                workers: 2,
                ..ScanConfig::default()
            },
        )
        .unwrap();
        assert_eq!(rest.found, full.found);
        assert!(rest.complete);
    }
}

#[test]
fn extending_the_bound_continues_open_runs() {
    let params = Params::new(2, 10).unwrap();
    let mode = ScanMode::RunSearch { length: 5 };
    let first = scan(&params, &mode, 44_490, None, &ScanConfig::default()).unwrap();
    assert!(first.found.is_empty());
    assert_eq!(
        (
            first.checkpoint.open_run_start,
            first.checkpoint.open_run_len
        ),
        (Some(44488), 3)
    );
    let second = scan(
        &params,
        &mode,
        100_000,
        Some(first.checkpoint),
        &ScanConfig::default(),
    )
    .unwrap();
    assert_eq!(pairs(&second.found)[0], (44488, 5));
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let params = Params::new(2, 10).unwrap();
    let cp = ScanCheckpoint::fresh(params, ScanMode::RunSearch { length: 2 });
    let err = scan(
        &params,
        &ScanMode::RunSearch { length: 3 },
        10,
        Some(cp),
        &ScanConfig::default(),
    );
    assert!(err.is_err());
    let mut bad = ScanCheckpoint::fresh(params, ScanMode::RunSearch { length: 2 });
    bad.open_run_start = Some(5);
    bad.open_run_len = 1;
    assert!(bad.check().is_err());
}
