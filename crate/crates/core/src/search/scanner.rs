use crate::map::{digit_power_sum, ClassifierCache, Params};
use crate::Result;

/// Largest low-digit block table.
const MAX_BLOCK: u64 = 1 << 20;

/// Happiness of arbitrary `u64` values through the split
/// `T(q * b^d + r) = T(q) + T(r)`: `T` of every `d`-digit block is tabulated
/// once, and so is happiness of every possible image value.
#[derive(Clone, Debug)]
pub struct Scanner {
    params: Params,
    block: u64,
    low_t: Vec<u32>,
    happy_by_t: Vec<bool>,
}

impl Scanner {
    pub fn new(params: &Params) -> Result<Self> {
        Self::with_block_digits(params, 4)
    }

    /// Uses `d` digits per block, reduced until `b^d <= 2^20` (but at least 1).
    pub fn with_block_digits(params: &Params, d: u32) -> Result<Self> {
        let b = params.b();
        let mut d = d.max(1);
        while d > 1 && b.checked_pow(d).is_none_or(|v| v > MAX_BLOCK) {
            d -= 1;
        }
        let block = b.pow(d);
        let low_t = (0..block)
            .map(|r| digit_power_sum(r, params) as u32)
            .collect();
        let cache = ClassifierCache::new(params)?;
        let max_t = params.max_image_u64();
        let happy_by_t = (0..=max_t).map(|t| cache.is_happy(t)).collect();
        Ok(Scanner {
            params: *params,
            block,
            low_t,
            happy_by_t,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `b^d`, the block size.
    pub fn block(&self) -> u64 {
        self.block
    }

    /// `T(n)` by blocks.
    #[inline]
    pub fn t(&self, mut n: u64) -> u64 {
        let mut sum = 0u64;
        while n > 0 {
            sum += self.low_t[(n % self.block) as usize] as u64;
            n /= self.block;
        }
        sum
    }

    #[inline]
    pub fn is_happy(&self, n: u64) -> bool {
        n > 0 && self.happy_by_t[self.t(n) as usize]
    }

    /// Calls `f(n, happy)` for every `n` in `[lo, hi)` in order.
    #[inline]
    pub fn for_each(&self, lo: u64, hi: u64, mut f: impl FnMut(u64, bool)) {
        let mut n = lo;
        while n < hi {
            let q = n / self.block;
            let tq = self.t(q);
            let block_end = (q + 1).saturating_mul(self.block).min(hi);
            let base = q * self.block;
            for m in n..block_end {
                let happy = m > 0
                    && self.happy_by_t[(tq + self.low_t[(m - base) as usize] as u64) as usize];
                f(m, happy);
            }
            n = block_end;
        }
    }
}
