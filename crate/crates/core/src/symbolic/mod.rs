//! Run-length numerals with symbolic run counts.
//!
//! A [`TowerNat`] is either a machine word or a list of `(digit, count)` runs,
//! least significant first, where every `count` is itself a `TowerNat`. This is
//! enough to write down the witnesses of the run constructions exactly: a pad of
//! `l` ones where `l` already has `10^900` digits is just one more level of
//! nesting.
//!
//! Values are kept canonical: a value that fits in a `u64` is always `Small`, and
//! a `Runs` value has nonzero counts, distinct adjacent digits and a nonzero top
//! digit. Since the run-length encoding of a digit string is unique, derived
//! structural equality and hashing coincide with numeric equality.
//!
//! All arithmetic goes through [`Sym`], which carries the base and the depth
//! limit. Carry and borrow propagation across a run of identical digits is
//! handled by stepping a small state machine until it reaches a fixed point
//! and then emitting the remainder of the run in one piece.

mod arith;
mod modular;
mod serde_impl;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::{Error, Result};

pub use modular::repunit_mod_small;

/// Default limit on count nesting.
pub const DEFAULT_DEPTH_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TowerNat {
    Small(u64),
    Runs(Runs),
}

/// A canonical run list whose value is at least `2^64`. Cheap to clone; the
/// digit count is computed once and shared.
#[derive(Clone, Debug)]
pub struct Runs(Arc<RunsInner>);

#[derive(Debug)]
struct RunsInner {
    base: u64,
    segments: Vec<Segment>,
    depth: usize,
    hash: u64,
    digits: OnceLock<TowerNat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub digit: u64,
    pub count: TowerNat,
}

impl Runs {
    fn new(base: u64, segments: Vec<Segment>) -> Self {
        let depth = 1 + segments.iter().map(|s| s.count.depth()).max().unwrap_or(0);
        // children hash in constant time, so this is linear in the top level
        let mut h = std::hash::DefaultHasher::new();
        base.hash(&mut h);
        segments.hash(&mut h);
        let hash = h.finish();
        Runs(Arc::new(RunsInner {
            base,
            segments,
            depth,
            hash,
            digits: OnceLock::new(),
        }))
    }

    pub fn base(&self) -> u64 {
        self.0.base
    }

    /// Runs, least significant first.
    pub fn segments(&self) -> &[Segment] {
        &self.0.segments
    }
}

impl PartialEq for Runs {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.base == other.0.base
                && self.0.depth == other.0.depth
                && self.0.segments == other.0.segments)
    }
}

impl Eq for Runs {}

impl Hash for Runs {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl TowerNat {
    pub const ZERO: TowerNat = TowerNat::Small(0);
    pub const ONE: TowerNat = TowerNat::Small(1);

    pub fn is_zero(&self) -> bool {
        matches!(self, TowerNat::Small(0))
    }

    pub fn as_small(&self) -> Option<u64> {
        match self {
            TowerNat::Small(n) => Some(*n),
            TowerNat::Runs(_) => None,
        }
    }

    /// Nesting depth: `0` for machine words, one more than the deepest count
    /// otherwise.
    pub fn depth(&self) -> usize {
        match self {
            TowerNat::Small(_) => 0,
            TowerNat::Runs(r) => r.0.depth,
        }
    }

    /// Number of nodes in the representation, counting nested counts. Shared
    /// counts are counted every time they occur.
    pub fn node_count(&self) -> usize {
        match self {
            TowerNat::Small(_) => 1,
            TowerNat::Runs(r) => {
                1 + r
                    .segments()
                    .iter()
                    .map(|s| s.count.node_count())
                    .sum::<usize>()
            }
        }
    }

    pub fn eq_small(&self, n: u64) -> bool {
        self.as_small() == Some(n)
    }
}

impl From<u64> for TowerNat {
    fn from(n: u64) -> Self {
        TowerNat::Small(n)
    }
}

/// Longest run form `Display` writes out; beyond it only the shape is shown.
/// Shared counts are written once per occurrence, so the full form of a deep
/// numeral can be exponentially long.
pub const DISPLAY_CAP: usize = 1000;

impl fmt::Display for TowerNat {
    /// Most significant run first; `dxc` means digit `d` repeated `c` times.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerNat::Small(n) => write!(f, "{n}"),
            TowerNat::Runs(r) => {
                let mut buf = Capped(String::new(), DISPLAY_CAP);
                if write_runs(&mut buf, r).is_ok() {
                    f.write_str(&buf.0)
                } else {
                    write!(
                        f,
                        "<{} runs, nesting depth {}>_{}",
                        r.segments().len(),
                        self.depth(),
                        r.base()
                    )
                }
            }
        }
    }
}

struct Capped(String, usize);

impl fmt::Write for Capped {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        self.0.push_str(s);
        if self.0.len() > self.1 {
            Err(fmt::Error)
        } else {
            Ok(())
        }
    }
}

fn write_runs(out: &mut Capped, r: &Runs) -> fmt::Result {
    use fmt::Write as _;
    out.write_str("<")?;
    for (i, seg) in r.segments().iter().rev().enumerate() {
        if i > 0 {
            out.write_str(" ")?;
        }
        match &seg.count {
            TowerNat::Small(1) => write!(out, "{}", seg.digit)?,
            TowerNat::Small(c) => write!(out, "{}x{}", seg.digit, c)?,
            TowerNat::Runs(inner) => {
                write!(out, "{}x", seg.digit)?;
                write_runs(out, inner)?;
            }
        }
    }
    write!(out, ">_{}", r.base())
}

/// Arithmetic context: base and depth limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sym {
    base: u64,
    depth_limit: usize,
}

impl Sym {
    pub fn new(base: u64) -> Self {
        Self::with_depth_limit(base, DEFAULT_DEPTH_LIMIT)
    }

    pub fn with_depth_limit(base: u64, depth_limit: usize) -> Self {
        assert!(base >= 2, "base must be at least 2");
        Sym { base, depth_limit }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    /// `n` as a run list view (digits of `n` run-length encoded), least
    /// significant first. Works for both representations.
    pub fn segments(&self, t: &TowerNat) -> Result<Vec<Segment>> {
        Ok(self
            .runs_of(t)?
            .into_iter()
            .map(|(digit, count)| Segment { digit, count })
            .collect())
    }

    pub(crate) fn runs_of(&self, t: &TowerNat) -> Result<Vec<(u64, TowerNat)>> {
        match t {
            TowerNat::Small(n) => {
                let mut out: Vec<(u64, TowerNat)> = Vec::new();
                let mut n = *n;
                while n > 0 {
                    let d = n % self.base;
                    n /= self.base;
                    match out.last_mut() {
                        Some((last, TowerNat::Small(c))) if *last == d => *c += 1,
                        _ => out.push((d, TowerNat::Small(1))),
                    }
                }
                Ok(out)
            }
            TowerNat::Runs(r) => {
                self.check_base(r)?;
                Ok(r.segments()
                    .iter()
                    .map(|s| (s.digit, s.count.clone()))
                    .collect())
            }
        }
    }

    /// Builds a canonical value from runs (least significant first). Runs may
    /// repeat digits, carry zero counts or end in zeros.
    pub fn from_runs(&self, runs: impl IntoIterator<Item = (u64, TowerNat)>) -> Result<TowerNat> {
        let mut w = Writer::new(self);
        for (d, c) in runs {
            if d >= self.base {
                return Err(Error::Symbolic(format!(
                    "digit {d} out of range for base {}",
                    self.base
                )));
            }
            w.push(d, c)?;
        }
        w.finish()
    }

    /// The canonical numeral for `n` together with its run view, as produced by
    /// [`Sym::segments`].
    pub fn from_natural(&self, n: u64) -> TowerNat {
        TowerNat::Small(n)
    }

    fn assemble(&self, mut runs: Vec<(u64, TowerNat)>) -> Result<TowerNat> {
        while matches!(runs.last(), Some((0, _))) {
            runs.pop();
        }
        if let Some(v) = self.fits_u64(&runs) {
            return Ok(TowerNat::Small(v));
        }
        let t = TowerNat::Runs(Runs::new(
            self.base,
            runs.into_iter()
                .map(|(digit, count)| Segment { digit, count })
                .collect(),
        ));
        let depth = t.depth();
        if depth > self.depth_limit {
            return Err(Error::DepthLimit {
                depth,
                limit: self.depth_limit,
            });
        }
        Ok(t)
    }

    fn check_base(&self, r: &Runs) -> Result<()> {
        if r.base() != self.base {
            return Err(Error::Symbolic(format!(
                "base mismatch: numeral in base {} used with base {}",
                r.base(),
                self.base
            )));
        }
        Ok(())
    }

    fn fits_u64(&self, runs: &[(u64, TowerNat)]) -> Option<u64> {
        let b = self.base;
        let mut value: u64 = 0;
        let mut place: Option<u64> = Some(1); // b^pos, None once it overflows
        for (d, c) in runs {
            let c = c.as_small()?;
            if *d == 0 {
                for _ in 0..c.min(64) {
                    place = place.and_then(|p| p.checked_mul(b));
                }
                if c > 64 {
                    place = None;
                }
                continue;
            }
            if c > 64 {
                return None;
            }
            for _ in 0..c {
                let p = place?;
                value = value.checked_add(d.checked_mul(p)?)?;
                place = p.checked_mul(b);
            }
        }
        Some(value)
    }

    /// `b^k`.
    pub fn pow_base(&self, k: &TowerNat) -> Result<TowerNat> {
        self.from_runs([(0, k.clone()), (1, TowerNat::ONE)])
    }

    /// `count` copies of digit `d` followed by `shift` zeros.
    pub fn pad_run(&self, digit: u64, shift: &TowerNat, count: &TowerNat) -> Result<TowerNat> {
        if digit == 0 || digit >= self.base {
            return Err(Error::Symbolic(format!(
                "pad digit {digit} must be in [1, {})",
                self.base
            )));
        }
        if count.is_zero() {
            return Err(Error::Symbolic("pad count must be at least 1".into()));
        }
        self.from_runs([(0, shift.clone()), (digit, count.clone())])
    }

    /// `count` ones followed by `shift` zeros: `sum_{j < count} b^{shift + j}`.
    pub fn pad_ones(&self, shift: &TowerNat, count: &TowerNat) -> Result<TowerNat> {
        self.pad_run(1, shift, count)
    }

    /// `t * b^zeros`.
    pub fn shift(&self, t: &TowerNat, zeros: &TowerNat) -> Result<TowerNat> {
        if t.is_zero() || zeros.is_zero() {
            return Ok(t.clone());
        }
        let mut runs = vec![(0, zeros.clone())];
        runs.extend(self.runs_of(t)?);
        self.from_runs(runs)
    }

    /// Number of base-`b` digits (zero has none).
    pub fn digit_count(&self, t: &TowerNat) -> Result<TowerNat> {
        match t {
            TowerNat::Small(n) => Ok(TowerNat::Small(crate::map::digit_len(*n, self.base) as u64)),
            TowerNat::Runs(r) => {
                self.check_base(r)?;
                if let Some(total) = r.0.digits.get() {
                    return Ok(total.clone());
                }
                let mut total = TowerNat::ZERO;
                for seg in r.segments() {
                    total = self.add(&total, &seg.count)?;
                }
                Ok(r.0.digits.get_or_init(|| total).clone())
            }
        }
    }

    /// Number of trailing zero digits (`0` for zero).
    pub fn trailing_zeros(&self, t: &TowerNat) -> Result<TowerNat> {
        if t.is_zero() {
            return Ok(TowerNat::ZERO);
        }
        Ok(match self.runs_of(t)?.into_iter().next() {
            Some((0, c)) => c,
            _ => TowerNat::ZERO,
        })
    }

    /// Digit-disjoint sum `t + low`: requires `low < b^shift` and the lowest
    /// `shift` digits of `t` to be zero. No carry can occur.
    pub fn add_disjoint(&self, t: &TowerNat, low: &TowerNat, shift: &TowerNat) -> Result<TowerNat> {
        if self.cmp(&self.digit_count(low)?, shift)? == Ordering::Greater {
            return Err(Error::Symbolic(format!(
                "{low} does not fit below b^{shift}"
            )));
        }
        if !t.is_zero() && self.cmp(&self.trailing_zeros(t)?, shift)? == Ordering::Less {
            return Err(Error::Symbolic(format!(
                "low {shift} digits of {t} are not all zero"
            )));
        }
        self.add(t, low)
    }

    /// `T_{e,b}` applied to the numeral: `sum over runs of d^e * count`.
    pub fn power_digit_sum(&self, t: &TowerNat, e: u32) -> Result<TowerNat> {
        match t {
            TowerNat::Small(n) => {
                let mut n = *n;
                let mut sum: u128 = 0;
                while n > 0 {
                    sum += ((n % self.base) as u128).pow(e);
                    n /= self.base;
                }
                self.of_u128(sum)
            }
            TowerNat::Runs(r) => {
                self.check_depth(t)?;
                let mut acc = TowerNat::ZERO;
                for seg in r.segments() {
                    if seg.digit == 0 {
                        continue;
                    }
                    let weight = seg
                        .digit
                        .checked_pow(e)
                        .ok_or_else(|| Error::Symbolic("digit power overflows".into()))?;
                    let term = self.scale_small(&seg.count, weight)?;
                    acc = self.add(&acc, &term)?;
                }
                Ok(acc)
            }
        }
    }

    pub(crate) fn of_u128(&self, v: u128) -> Result<TowerNat> {
        if let Ok(small) = u64::try_from(v) {
            return Ok(TowerNat::Small(small));
        }
        let mut runs = Vec::new();
        let mut v = v;
        while v > 0 {
            runs.push(((v % self.base as u128) as u64, TowerNat::ONE));
            v /= self.base as u128;
        }
        self.from_runs(runs)
    }

    pub fn check_depth(&self, t: &TowerNat) -> Result<()> {
        let depth = t.depth();
        if depth > self.depth_limit {
            return Err(Error::DepthLimit {
                depth,
                limit: self.depth_limit,
            });
        }
        Ok(())
    }

    /// Digits, most significant first, if there are at most `digit_cap` of them.
    pub fn materialize(&self, t: &TowerNat, digit_cap: u64) -> Result<Option<Vec<u64>>> {
        if self.cmp(&self.digit_count(t)?, &TowerNat::Small(digit_cap))? == Ordering::Greater {
            return Ok(None);
        }
        if t.is_zero() {
            return Ok(Some(vec![0]));
        }
        let mut digits = Vec::new();
        for (d, c) in self.runs_of(t)?.into_iter().rev() {
            let c = c.as_small().expect("count bounded by cap");
            digits.extend(std::iter::repeat_n(d, c as usize));
        }
        Ok(Some(digits))
    }

    /// Renders a materialized numeral: plain digits up to base 36, dot
    /// separated digit values above.
    pub fn render(&self, t: &TowerNat, digit_cap: u64) -> Result<Option<String>> {
        Ok(self.materialize(t, digit_cap)?.map(|digits| {
            if self.base <= 36 {
                digits
                    .iter()
                    .map(|&d| char::from_digit(d as u32, self.base as u32).expect("digit"))
                    .collect()
            } else {
                digits
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(".")
            }
        }))
    }

    pub fn to_biguint(&self, t: &TowerNat, digit_cap: u64) -> Result<Option<num_bigint::BigUint>> {
        use num_bigint::BigUint;
        Ok(self.materialize(t, digit_cap)?.map(|digits| {
            let b = BigUint::from(self.base);
            digits
                .iter()
                .fold(BigUint::from(0u32), |acc, &d| acc * &b + BigUint::from(d))
        }))
    }

    pub fn from_biguint(&self, n: &num_bigint::BigUint) -> Result<TowerNat> {
        use num_traits::ToPrimitive;
        if let Some(v) = n.to_u64() {
            return Ok(TowerNat::Small(v));
        }
        let digits: Vec<u64> = if self.base <= 256 {
            n.to_radix_le(self.base as u32)
                .into_iter()
                .map(u64::from)
                .collect()
        } else {
            let b = num_bigint::BigUint::from(self.base);
            let mut rest = n.clone();
            let mut out = Vec::new();
            while rest > num_bigint::BigUint::from(0u32) {
                out.push((&rest % &b).to_u64().expect("digit"));
                rest /= &b;
            }
            out
        };
        self.from_runs(digits.into_iter().map(|d| (d, TowerNat::ONE)))
    }
}

/// Accumulates runs, merging equal neighbours and dropping empty runs.
pub(crate) struct Writer<'a> {
    sym: &'a Sym,
    runs: Vec<(u64, TowerNat)>,
}

impl<'a> Writer<'a> {
    pub(crate) fn new(sym: &'a Sym) -> Self {
        Writer {
            sym,
            runs: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, digit: u64, count: TowerNat) -> Result<()> {
        if count.is_zero() {
            return Ok(());
        }
        if let Some((last, c)) = self.runs.last_mut() {
            if *last == digit {
                *c = self.sym.add(c, &count)?;
                return Ok(());
            }
        }
        self.runs.push((digit, count));
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<TowerNat> {
        self.sym.assemble(self.runs)
    }
}

#[cfg(test)]
mod tests;
