//! Addition, subtraction, comparison and small scaling.

use std::cmp::Ordering;

use super::{Sym, TowerNat, Writer};
use crate::{Error, Result};

/// Walks a run list, handing out aligned chunks.
struct Cursor {
    runs: std::vec::IntoIter<(u64, TowerNat)>,
    current: Option<(u64, TowerNat)>,
}

impl Cursor {
    fn new(runs: Vec<(u64, TowerNat)>) -> Self {
        let mut runs = runs.into_iter();
        let current = runs.next();
        Cursor { runs, current }
    }

    fn peek(&self) -> Option<&(u64, TowerNat)> {
        self.current.as_ref()
    }

    /// Consumes `len` digits of the current run (`len` must not exceed it).
    fn advance(&mut self, sym: &Sym, len: &TowerNat) -> Result<()> {
        if let Some((_, rem)) = &mut self.current {
            if rem == len {
                self.current = self.runs.next();
            } else {
                *rem = sym.sub(rem, len)?;
            }
        }
        Ok(())
    }
}

/// One aligned chunk: digits of both operands (zero past the end) and length.
/// Returns `None` when both are exhausted.
fn next_chunk(sym: &Sym, a: &mut Cursor, b: &mut Cursor) -> Result<Option<(u64, u64, TowerNat)>> {
    let (da, db, len) = match (a.peek(), b.peek()) {
        (None, None) => return Ok(None),
        (Some((da, ra)), None) => (*da, 0, ra.clone()),
        (None, Some((db, rb))) => (0, *db, rb.clone()),
        (Some((da, ra)), Some((db, rb))) => {
            let len = if sym.cmp(ra, rb)? == Ordering::Greater {
                rb.clone()
            } else {
                ra.clone()
            };
            (*da, *db, len)
        }
    };
    a.advance(sym, &len)?;
    b.advance(sym, &len)?;
    Ok(Some((da, db, len)))
}

impl Sym {
    /// Feeds `len` copies of one input symbol through `step`, which maps a
    /// state to an output digit and the next state. Once the state stops
    /// changing the rest of the run is written in one piece.
    fn emit_run<S: Copy + PartialEq>(
        &self,
        out: &mut Writer<'_>,
        len: &TowerNat,
        state: &mut S,
        step: impl Fn(S) -> (u64, S),
    ) -> Result<()> {
        let mut done: u64 = 0;
        loop {
            if let TowerNat::Small(n) = len {
                if done >= *n {
                    return Ok(());
                }
            }
            let (digit, next) = step(*state);
            if next == *state {
                let rest = self.sub(len, &TowerNat::Small(done))?;
                return out.push(digit, rest);
            }
            out.push(digit, TowerNat::ONE)?;
            *state = next;
            done += 1;
        }
    }

    pub fn add(&self, a: &TowerNat, b: &TowerNat) -> Result<TowerNat> {
        if let (TowerNat::Small(x), TowerNat::Small(y)) = (a, b) {
            return self.of_u128(*x as u128 + *y as u128);
        }
        let base = self.base;
        let mut ca = Cursor::new(self.runs_of(a)?);
        let mut cb = Cursor::new(self.runs_of(b)?);
        let mut out = Writer::new(self);
        let mut carry = 0u64;
        while let Some((da, db, len)) = next_chunk(self, &mut ca, &mut cb)? {
            self.emit_run(&mut out, &len, &mut carry, |c| {
                let s = da + db + c;
                (s % base, s / base)
            })?;
        }
        if carry > 0 {
            out.push(carry, TowerNat::ONE)?;
        }
        out.finish()
    }

    /// `a - b`; fails when `b > a`.
    pub fn sub(&self, a: &TowerNat, b: &TowerNat) -> Result<TowerNat> {
        if let (TowerNat::Small(x), TowerNat::Small(y)) = (a, b) {
            return x
                .checked_sub(*y)
                .map(TowerNat::Small)
                .ok_or_else(|| Error::Symbolic(format!("subtraction underflow: {x} - {y}")));
        }
        let base = self.base;
        let mut ca = Cursor::new(self.runs_of(a)?);
        let mut cb = Cursor::new(self.runs_of(b)?);
        let mut out = Writer::new(self);
        let mut borrow = 0u64;
        while let Some((da, db, len)) = next_chunk(self, &mut ca, &mut cb)? {
            self.emit_run(&mut out, &len, &mut borrow, |w| {
                let need = db + w;
                if da >= need {
                    (da - need, 0)
                } else {
                    (da + base - need, 1)
                }
            })?;
        }
        if borrow != 0 {
            return Err(Error::Symbolic(format!("subtraction underflow: {a} - {b}")));
        }
        out.finish()
    }

    pub fn cmp(&self, a: &TowerNat, b: &TowerNat) -> Result<Ordering> {
        match (a, b) {
            (TowerNat::Small(x), TowerNat::Small(y)) => return Ok(x.cmp(y)),
            // Canonical run lists are never below 2^64.
            (TowerNat::Small(_), TowerNat::Runs(_)) => return Ok(Ordering::Less),
            (TowerNat::Runs(_), TowerNat::Small(_)) => return Ok(Ordering::Greater),
            (TowerNat::Runs(x), TowerNat::Runs(y)) if x == y => return Ok(Ordering::Equal),
            _ => {}
        }
        let by_len = self.cmp(&self.digit_count(a)?, &self.digit_count(b)?)?;
        if by_len != Ordering::Equal {
            return Ok(by_len);
        }
        let mut ra = self.runs_of(a)?;
        let mut rb = self.runs_of(b)?;
        ra.reverse();
        rb.reverse();
        let mut ca = Cursor::new(ra);
        let mut cb = Cursor::new(rb);
        while let Some((da, db, _)) = next_chunk(self, &mut ca, &mut cb)? {
            if da != db {
                return Ok(da.cmp(&db));
            }
        }
        Ok(Ordering::Equal)
    }

    pub fn max(&self, a: &TowerNat, b: &TowerNat) -> Result<TowerNat> {
        Ok(if self.cmp(a, b)? == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        })
    }

    /// `t * k` for a machine word `k`.
    pub fn scale_small(&self, t: &TowerNat, k: u64) -> Result<TowerNat> {
        if let TowerNat::Small(x) = t {
            return self.of_u128(*x as u128 * k as u128);
        }
        if k == 0 {
            return Ok(TowerNat::ZERO);
        }
        let base = self.base as u128;
        let mut out = Writer::new(self);
        let mut carry: u128 = 0;
        for (d, len) in self.runs_of(t)? {
            self.emit_run(&mut out, &len, &mut carry, |c| {
                let v = d as u128 * k as u128 + c;
                ((v % base) as u64, v / base)
            })?;
        }
        while carry > 0 {
            out.push((carry % base) as u64, TowerNat::ONE)?;
            carry /= base;
        }
        out.finish()
    }

    /// `t * b^k` for `k` given as a machine word; convenience over [`Sym::shift`].
    pub fn shift_small(&self, t: &TowerNat, k: u64) -> Result<TowerNat> {
        self.shift(t, &TowerNat::Small(k))
    }
}
