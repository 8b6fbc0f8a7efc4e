//! The digit map `T_{e,b}`, trajectories, cycle sets and happiness
//! classification.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::numtheory::{factorize, is_prime};
use crate::{Error, Result};

/// Largest base accepted.
pub const MAX_BASE: u64 = 1 << 20;

/// Largest allowed value of `(b-1)^e`, so that `T` of any `u64` fits easily.
pub const MAX_DIGIT_POWER: u64 = 1 << 32;

/// The exponent/base pair `(e, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    e: u32,
    b: u64,
}

#[derive(Deserialize)]
struct RawParams {
    e: u32,
    b: u64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.e, raw.b)
    }
}

impl Params {
    pub fn new(e: u32, b: u64) -> Result<Self> {
        if e < 1 {
            return Err(Error::InvalidParams(format!(
                "exponent e = {e} must be at least 1"
            )));
        }
        if b < 2 {
            return Err(Error::InvalidParams(format!(
                "base b = {b} must be at least 2"
            )));
        }
        if b > MAX_BASE {
            return Err(Error::TooLarge(format!("base b = {b} exceeds {MAX_BASE}")));
        }
        match (b - 1).checked_pow(e) {
            Some(p) if p <= MAX_DIGIT_POWER => Ok(Params { e, b }),
            _ => Err(Error::TooLarge(format!(
                "(b-1)^e = {}^{e} exceeds 2^32",
                b - 1
            ))),
        }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn digit_power(&self, d: u64) -> u64 {
        d.pow(self.e)
    }

    /// `(b-1)^e`, the largest single-digit contribution.
    pub fn max_digit_power(&self) -> u64 {
        (self.b - 1).pow(self.e)
    }

    /// Upper bound on `T(n)` for any `u64` `n`.
    pub fn max_image_u64(&self) -> u64 {
        self.max_digit_power() * digit_len(u64::MAX, self.b) as u64
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(e={}, b={})", self.e, self.b)
    }
}

/// Base-`b` digits of `n`, least significant first. `0` yields `[0]`.
pub fn digits_of(mut n: u64, b: u64) -> Vec<u64> {
    assert!(b >= 2);
    if n == 0 {
        return vec![0];
    }
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % b);
        n /= b;
    }
    digits
}

/// Number of base-`b` digits of `n` (zero has none).
pub fn digit_len(mut n: u64, b: u64) -> u32 {
    let mut len = 0;
    while n > 0 {
        n /= b;
        len += 1;
    }
    len
}

/// `T_{e,b}(n)` for any `n`, including `T(0) = 0`.
#[inline]
pub fn digit_power_sum(mut n: u64, params: &Params) -> u64 {
    let b = params.b;
    let mut sum = 0;
    while n > 0 {
        sum += params.digit_power(n % b);
        n /= b;
    }
    sum
}

/// `T_{e,b}(n)` for positive `n`.
pub fn power_digit_sum(n: u64, params: &Params) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(digit_power_sum(n, params))
}

/// `max { T(y) : 0 <= y <= m }`, exactly.
///
/// The maximum is attained either at `m` itself or at a numeral that keeps a
/// prefix of `m`, lowers one nonzero digit by one and fills the rest with `b-1`.
pub fn max_power_digit_sum_upto(m: u64, params: &Params) -> u64 {
    let digits = digits_of(m, params.b);
    let top = params.max_digit_power();
    let mut best = digit_power_sum(m, params);
    // prefix sums of T over digits above position i
    let mut above = 0u64;
    for i in (0..digits.len()).rev() {
        if digits[i] > 0 {
            let candidate = above + params.digit_power(digits[i] - 1) + top * i as u64;
            best = best.max(candidate);
        }
        above += params.digit_power(digits[i]);
    }
    best
}

/// How an iteration of `T` ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    ReachedOne,
    /// A value repeated; `entry` is the first repeated value.
    EnteredCycle {
        entry: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: u64,
    /// `T^1(start), T^2(start), ...` up to the terminating value.
    pub steps: Vec<u64>,
    pub terminal: Terminal,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_happy(&self) -> bool {
        self.terminal == Terminal::ReachedOne
    }
}

/// Iterates `T` from `n` until `1` appears or a value repeats.
pub fn trajectory(n: u64, params: &Params) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut steps = Vec::new();
    let mut seen = HashSet::from([n]);
    let mut x = n;
    let terminal = loop {
        if x == 1 {
            break Terminal::ReachedOne;
        }
        x = digit_power_sum(x, params);
        steps.push(x);
        if x != 1 && !seen.insert(x) {
            break Terminal::EnteredCycle { entry: x };
        }
    };
    Ok(Trajectory {
        start: n,
        steps,
        terminal,
    })
}

/// `B = b^k` for the least `k >= 1` with `(b-1)^e (k+1) < b^k`.
///
/// Every `n >= B` has `T(n) < n`, and `T` maps `[1, B)` into itself.
pub fn contraction_bound(params: &Params) -> Result<u64> {
    let top = params.max_digit_power() as u128;
    let b = params.b as u128;
    let mut power = b;
    for k in 1u128.. {
        if top * (k + 1) < power {
            return u64::try_from(power)
                .map_err(|_| Error::TooLarge(format!("contraction bound for {params} overflows")));
        }
        power = power
            .checked_mul(b)
            .filter(|&p| p <= u64::MAX as u128)
            .ok_or_else(|| Error::TooLarge(format!("contraction bound for {params} overflows")))?;
    }
    unreachable!()
}

/// Largest contraction bound for which dense tables are built.
pub const MAX_TABLE: u64 = 1 << 30;

fn table_bound(params: &Params) -> Result<u64> {
    let bound = contraction_bound(params)?;
    if bound > MAX_TABLE {
        return Err(Error::TooLarge(format!(
            "contraction bound {bound} for {params} is too large to tabulate"
        )));
    }
    Ok(bound)
}

/// The cycle set `D_{e,b}`: all values lying on cycles of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSet {
    pub params: Params,
    pub members: BTreeSet<u64>,
    pub contraction_bound: u64,
}

impl CycleSet {
    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members_vec(&self) -> Vec<u64> {
        self.members.iter().copied().collect()
    }

    /// The cycles, each listed from its least member in iteration order.
    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut left = self.members.clone();
        let mut out = Vec::new();
        while let Some(&start) = left.iter().next() {
            let mut cycle = vec![start];
            left.remove(&start);
            let mut x = digit_power_sum(start, &self.params);
            while x != start {
                left.remove(&x);
                cycle.push(x);
                x = digit_power_sum(x, &self.params);
            }
            out.push(cycle);
        }
        out
    }
}

/// Marks the functional graph of `T` on `[1, bound)` in one pass.
/// Returns `on_cycle[n]` and `happy[n]` for every `n < bound`.
fn classify_below(params: &Params, bound: u64) -> (Vec<bool>, Vec<bool>) {
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let size = bound as usize;
    let mut color = vec![UNSEEN; size];
    let mut on_cycle = vec![false; size];
    let mut happy = vec![false; size];
    let mut path = Vec::new();
    for n in 1..bound {
        if color[n as usize] == DONE {
            continue;
        }
        path.clear();
        let mut x = n;
        while color[x as usize] == UNSEEN {
            color[x as usize] = ON_PATH;
            path.push(x);
            x = digit_power_sum(x, params);
        }
        if color[x as usize] == ON_PATH {
            // new cycle closes at x
            let at = path.iter().position(|&v| v == x).expect("x is on the path");
            let reaches_one = path[at..].contains(&1);
            for &v in &path[at..] {
                on_cycle[v as usize] = true;
                happy[v as usize] = reaches_one;
            }
        }
        let verdict = happy[x as usize];
        for &v in &path {
            if !on_cycle[v as usize] {
                happy[v as usize] = verdict;
            }
            color[v as usize] = DONE;
        }
    }
    (on_cycle, happy)
}

/// Computes `D_{e,b}` from the functional graph of `T` on `[1, B)`.
pub fn cycle_set(params: &Params) -> Result<CycleSet> {
    let bound = table_bound(params)?;
    let (on_cycle, _) = classify_below(params, bound);
    let members = (1..bound).filter(|&n| on_cycle[n as usize]).collect();
    Ok(CycleSet {
        params: *params,
        members,
        contraction_bound: bound,
    })
}

/// Happiness of every `n` below a cap (at least the contraction bound).
/// Immutable after construction, so it can be shared freely across threads.
#[derive(Clone, Debug)]
pub struct ClassifierCache {
    params: Params,
    table: Vec<bool>,
}

impl ClassifierCache {
    /// Cache capped at the contraction bound.
    pub fn new(params: &Params) -> Result<Self> {
        Self::with_cap(params, 0)
    }

    /// Cache covering `[0, max(cap, B))`.
    pub fn with_cap(params: &Params, cap: u64) -> Result<Self> {
        let bound = table_bound(params)?;
        let cap = cap.max(bound);
        if cap > MAX_TABLE {
            return Err(Error::TooLarge(format!("cache cap {cap} is too large")));
        }
        let (_, mut table) = classify_below(params, bound);
        table.reserve((cap - bound) as usize);
        for n in bound..cap {
            // T(n) < n above the contraction bound
            let t = digit_power_sum(n, params);
            table.push(table[t as usize]);
        }
        Ok(ClassifierCache {
            params: *params,
            table,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn cap(&self) -> u64 {
        self.table.len() as u64
    }

    /// `true` iff iterating `T` from `n` reaches 1. `n = 0` is never happy.
    #[inline]
    pub fn is_happy(&self, mut n: u64) -> bool {
        let cap = self.table.len() as u64;
        while n >= cap {
            n = digit_power_sum(n, &self.params);
        }
        self.table[n as usize]
    }
}

/// Whether `(e, b)` can have consecutive happy numbers at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Condition {
    Holds,
    /// `prime` divides `b - 1` and `e = 1 (mod prime - 1)`.
    Fails {
        prime: u64,
    },
}

impl Condition {
    pub fn holds(&self) -> bool {
        matches!(self, Condition::Holds)
    }
}

/// Checks that no prime `p | b-1` has `e = 1 (mod p-1)`; reports the least
/// failing prime otherwise. Vacuously true for `b = 2`.
pub fn condition_holds(params: &Params) -> Condition {
    if params.b == 2 {
        return Condition::Holds;
    }
    let e = params.e as u64;
    factorize(params.b - 1)
        .primes()
        .find(|&p| (e - 1).is_multiple_of(p - 1))
        .map_or(Condition::Holds, |prime| Condition::Fails { prime })
}

/// Checks `T(n) = n (mod p)` for every `n` in `[1, limit]`, for a prime `p`
/// dividing `b - 1` with `e = 1 (mod p - 1)`.
pub fn residue_invariance_witness(params: &Params, p: u64, limit: u64) -> Result<bool> {
    if !is_prime(p) || !(params.b - 1).is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} is not a prime divisor of b-1"
        )));
    }
    if !(params.e as u64 - 1).is_multiple_of(p - 1) {
        return Err(Error::InvalidArgument(format!("e is not 1 modulo {p}-1")));
    }
    Ok((1..=limit).all(|n| digit_power_sum(n, params) % p == n % p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: u32, b: u64) -> Params {
        Params::new(e, b).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(0, 10).is_err());
        assert!(Params::new(2, 1).is_err());
        assert!(Params::new(2, 0).is_err());
        assert!(Params::new(1, 2).is_ok());
        assert!(matches!(Params::new(40, 10), Err(Error::TooLarge(_))));
    }

    #[test]
    fn params_deserialize_validates() {
        let ok: Params = serde_json::from_str(r#"{"e":2,"b":10}"#).unwrap();
        assert_eq!(ok, p(2, 10));
        assert!(serde_json::from_str::<Params>(r#"{"e":0,"b":10}"#).is_err());
    }

    #[test]
    fn digits_examples() {
        assert_eq!(digits_of(44488, 10), vec![8, 8, 4, 4, 4]);
        assert_eq!(digits_of(0, 7), vec![0]);
        assert_eq!(digits_of(255, 16), vec![15, 15]);
    }

    #[test]
    fn power_digit_sum_examples() {
        assert_eq!(power_digit_sum(44488, &p(2, 10)).unwrap(), 176);
        assert_eq!(power_digit_sum(1, &p(5, 7)).unwrap(), 1);
        assert_eq!(power_digit_sum(255, &p(2, 16)).unwrap(), 450);
        assert!(power_digit_sum(0, &p(2, 10)).is_err());
    }

    #[test]
    fn trajectory_examples() {
        let t = trajectory(7, &p(2, 10)).unwrap();
        assert_eq!(t.steps, vec![49, 97, 130, 10, 1]);
        assert_eq!(t.terminal, Terminal::ReachedOne);

        let t = trajectory(4, &p(2, 10)).unwrap();
        assert_eq!(t.steps, vec![16, 37, 58, 89, 145, 42, 20, 4]);
        assert_eq!(t.terminal, Terminal::EnteredCycle { entry: 4 });

        let t = trajectory(1, &p(3, 12)).unwrap();
        assert!(t.steps.is_empty());
        assert!(t.is_happy());
    }

    #[test]
    fn trajectory_steps_follow_the_map() {
        let params = p(3, 10);
        for n in 1..2000 {
            let t = trajectory(n, &params).unwrap();
            let mut prev = n;
            for &s in &t.steps {
                assert_eq!(s, digit_power_sum(prev, &params));
                prev = s;
            }
            assert_eq!(t.is_happy(), t.steps.contains(&1) || n == 1);
        }
    }

    /// Direct scan of the defining inequality.
    fn bound_oracle(e: u32, b: u64) -> u64 {
        let top = (b - 1).pow(e) as u128;
        let k = (1u32..)
            .find(|&k| top * (k as u128 + 1) < (b as u128).pow(k))
            .unwrap();
        b.pow(k)
    }

    #[test]
    fn contraction_bound_examples() {
        assert_eq!(bound_oracle(2, 10), 1000);
        assert_eq!(contraction_bound(&p(2, 10)).unwrap(), 1000);
        assert_eq!(bound_oracle(1, 2), 4);
        assert_eq!(contraction_bound(&p(1, 2)).unwrap(), 4);
        assert_eq!(bound_oracle(3, 10), 10_000);
        assert_eq!(contraction_bound(&p(3, 10)).unwrap(), 10_000);
        for (e, b) in [(2, 16), (3, 14), (2, 12), (4, 7), (1, 10)] {
            assert_eq!(contraction_bound(&p(e, b)).unwrap(), bound_oracle(e, b));
        }
    }

    #[test]
    fn contraction_property() {
        for params in [p(2, 10), p(3, 10), p(2, 4), p(1, 2), p(3, 6)] {
            let bound = contraction_bound(&params).unwrap();
            for n in bound..(10 * bound).min(2_000_000) {
                assert!(digit_power_sum(n, &params) < n, "{params} n={n}");
            }
            for n in 1..bound {
                assert!(digit_power_sum(n, &params) < bound);
            }
        }
    }

    #[test]
    fn cycle_set_examples() {
        let d = cycle_set(&p(2, 10)).unwrap();
        assert_eq!(d.members_vec(), vec![1, 4, 16, 20, 37, 42, 58, 89, 145]);
        assert_eq!(
            d.cycles(),
            vec![vec![1], vec![4, 16, 37, 58, 89, 145, 42, 20]]
        );
        assert_eq!(cycle_set(&p(2, 2)).unwrap().members_vec(), vec![1]);
    }

    /// Brute force: iterate far enough to land on a cycle, then walk the cycle.
    fn cycle_set_oracle(params: &Params) -> BTreeSet<u64> {
        let bound = contraction_bound(params).unwrap();
        let mut out = BTreeSet::new();
        for n in 1..bound {
            let mut x = n;
            for _ in 0..bound {
                x = digit_power_sum(x, params);
            }
            let start = x;
            loop {
                out.insert(x);
                x = digit_power_sum(x, params);
                if x == start {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn cycle_set_base_four_golden() {
        let d = cycle_set(&p(2, 4)).unwrap();
        assert_eq!(d.members, cycle_set_oracle(&p(2, 4)));
        assert_eq!(d.members_vec(), vec![1]);
    }

    #[test]
    fn cycle_set_matches_oracle_on_grid() {
        for params in [p(2, 6), p(2, 8), p(3, 5), p(1, 10), p(2, 3)] {
            assert_eq!(
                cycle_set(&params).unwrap().members,
                cycle_set_oracle(&params)
            );
        }
    }

    #[test]
    fn cycle_set_invariants() {
        for params in [p(2, 10), p(3, 10), p(2, 16), p(3, 14), p(2, 12)] {
            let d = cycle_set(&params).unwrap();
            for &x in &d.members {
                assert!(d.contains(digit_power_sum(x, &params)));
                let mut y = x;
                let mut back = false;
                for _ in 0..d.len() {
                    y = digit_power_sum(y, &params);
                    if y == x {
                        back = true;
                        break;
                    }
                }
                assert!(back, "{params}: {x} does not return");
            }
            for n in 1..d.contraction_bound {
                let mut x = n;
                let mut steps = 0;
                while !d.contains(x) {
                    x = digit_power_sum(x, &params);
                    steps += 1;
                    assert!(steps <= d.contraction_bound);
                }
            }
        }
    }

    fn naive_happy(n: u64, params: &Params) -> bool {
        trajectory(n, params).unwrap().is_happy()
    }

    #[test]
    fn cache_agrees_with_naive() {
        for params in [p(2, 10), p(3, 10), p(2, 16), p(2, 2)] {
            let cache = ClassifierCache::new(&params).unwrap();
            for n in 1..=100_000 {
                assert_eq!(cache.is_happy(n), naive_happy(n, &params), "{params} n={n}");
            }
        }
    }

    #[test]
    fn cache_with_larger_cap() {
        let params = p(2, 10);
        let small = ClassifierCache::new(&params).unwrap();
        let big = ClassifierCache::with_cap(&params, 50_000).unwrap();
        assert_eq!(big.cap(), 50_000);
        for n in 1..200_000 {
            assert_eq!(small.is_happy(n), big.is_happy(n));
        }
        assert!(small.is_happy(44488));
        assert!(!small.is_happy(4));
        assert!(small.is_happy(1));
        assert!(!small.is_happy(0));
    }

    #[test]
    fn image_bound_holds() {
        for params in [p(2, 10), p(3, 10), p(2, 16), p(1, 2), p(4, 5)] {
            for n in 1..=100_000u64 {
                let len = digit_len(n, params.b()) as u64;
                assert!(digit_power_sum(n, &params) <= params.max_digit_power() * len);
                // (b-1)^e (log_b n + 1), attained at n = 1 when b = 2
                let log = (n as f64).ln() / (params.b() as f64).ln();
                assert!(
                    (digit_power_sum(n, &params) as f64)
                        <= params.max_digit_power() as f64 * (log + 1.0) + 1e-9
                );
            }
        }
    }

    #[test]
    fn max_power_digit_sum_matches_scan() {
        for params in [p(2, 10), p(3, 7), p(2, 2)] {
            let mut best = 0;
            for m in 0..5000 {
                best = best.max(digit_power_sum(m, &params));
                assert_eq!(max_power_digit_sum_upto(m, &params), best, "{params} m={m}");
            }
        }
    }

    #[test]
    fn condition_examples() {
        assert_eq!(condition_holds(&p(2, 10)), Condition::Holds);
        assert_eq!(condition_holds(&p(3, 10)), Condition::Fails { prime: 3 });
        assert_eq!(condition_holds(&p(2, 11)), Condition::Fails { prime: 2 });
        assert_eq!(condition_holds(&p(5, 2)), Condition::Holds);
        assert_eq!(condition_holds(&p(2, 16)), Condition::Holds);
        assert_eq!(condition_holds(&p(3, 14)), Condition::Holds);
    }

    #[test]
    fn residue_invariance_examples() {
        assert!(residue_invariance_witness(&p(3, 10), 3, 10_000).unwrap());
        assert!(residue_invariance_witness(&p(1, 10), 3, 1000).unwrap());
        assert!(residue_invariance_witness(&p(5, 16), 5, 10_000).unwrap());
        assert!(residue_invariance_witness(&p(2, 10), 3, 100).is_err());
        assert!(residue_invariance_witness(&p(3, 10), 5, 100).is_err());
    }

    #[test]
    fn failing_condition_forces_residue() {
        let params = p(3, 10);
        let cache = ClassifierCache::new(&params).unwrap();
        for n in 1..=100_000 {
            if cache.is_happy(n) {
                assert_eq!(n % 3, 1);
            }
        }
    }
}
