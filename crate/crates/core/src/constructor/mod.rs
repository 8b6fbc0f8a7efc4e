//! Witnesses for long runs of consecutive happy numbers.
//!
//! The pipeline, bottom up:
//!
//! - residue witnesses: a happy number in every class mod `b-1`, by an
//!   induction driven by the L-map on residues (this is where the condition on
//!   `(e, b)` enters), then lifted to every class mod `(b-1)^e` by placing a
//!   single extra digit 1 at a position solved from a power congruence;
//! - pairs: for every `x`, a happy `l` with `l + x` happy, from a run of `b-1`
//!   digits that collapses to a power of `b` once `x` is added;
//! - covers: an `h` with `h + x` happy for every `x` in the cycle set, by
//!   induction on subsets, merging two members per round;
//! - runs: pad towers that make `T^r(l + y) = h + T^r(y)` for all small `y`.
//!
//! Every provider tries a bounded search for a small concrete witness first
//! and falls back to the construction; [`ConstructorConfig::construct_only`]
//! disables the searches that would bypass the construction. Each result is a
//! [`WitnessCertificate`] whose steps use only digit-disjoint padding, carry
//! collapse into a power of `b`, appending zeros and residue checks, so
//! [`verify_certificate`] can check it without materializing anything.

mod certificate;
mod verify;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use serde_json::{json, Value};

pub use certificate::{Goal, Identity, Rule, Step, WitnessCertificate, CERTIFICATE_FORMAT_VERSION};
pub use verify::{verify_certificate, verify_certificate_with, Verification};

use crate::map::{
    condition_holds, cycle_set, max_power_digit_sum_upto, ClassifierCache, Condition, CycleSet,
    Params,
};
use crate::numtheory::{
    crt_solve, euler_phi, factorize, mod_inverse, mod_pow, primitive_root, successor_power_log,
};
use crate::search::{self, Scanner};
use crate::symbolic::{Sym, TowerNat, DEFAULT_DEPTH_LIMIT};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ConstructorConfig {
    /// Bound for searches of residue witnesses and covers.
    pub search_bound: u64,
    /// Bound for the search of pair witnesses inside the cover induction.
    pub pair_bound: u64,
    /// Skip the searches that shortcut a construction (covers, pairs, residue
    /// witnesses mod `b-1` requested directly). Residue witnesses feeding a
    /// pair are still searched, since the pair needs them small.
    pub construct_only: bool,
    pub depth_limit: usize,
    /// Largest digit count materialized when a quotient must be computed.
    pub digit_cap: u64,
    pub workers: usize,
}

impl Default for ConstructorConfig {
    fn default() -> Self {
        ConstructorConfig {
            search_bound: 1_000_000,
            pair_bound: 100_000,
            construct_only: false,
            depth_limit: DEFAULT_DEPTH_LIMIT,
            digit_cap: 1 << 16,
            workers: 1,
        }
    }
}

/// Accumulates steps and leaves, tracking which values are known happy.
#[derive(Default)]
struct Builder {
    steps: Vec<Step>,
    leaves: BTreeSet<u64>,
    happy: HashSet<TowerNat>,
}

impl Builder {
    fn leaf(&mut self, n: u64) {
        self.leaves.insert(n);
        self.happy.insert(TowerNat::Small(n));
    }

    fn push(&mut self, rule: Rule, inputs: Value, produced: TowerNat, identity: Identity) {
        let inputs = match inputs {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        self.steps.push(Step {
            rule,
            inputs,
            produced,
            identity,
        });
    }

    fn finish(self, params: Params, goal: Goal) -> WitnessCertificate {
        WitnessCertificate {
            format_version: CERTIFICATE_FORMAT_VERSION,
            params,
            goal,
            steps: self.steps,
            leaves: self.leaves.into_iter().collect(),
        }
    }
}

fn tv(t: &TowerNat) -> Value {
    serde_json::to_value(t).expect("numeral serializes")
}

/// Pad levels `l_1, ..., l_r` with their shifts; `l_j` is `l_{j-1}` ones
/// (`x` ones for `j = 1`) above `shift_j` zeros.
#[derive(Clone, Debug)]
pub struct PadTower {
    pub x: TowerNat,
    pub levels: Vec<(TowerNat, TowerNat)>,
}

impl PadTower {
    pub fn top(&self) -> &TowerNat {
        &self.levels.last().expect("at least one level").1
    }

    pub fn top_shift(&self) -> &TowerNat {
        &self.levels.last().expect("at least one level").0
    }
}

pub struct Constructor {
    params: Params,
    config: ConstructorConfig,
    sym: Sym,
    cache: ClassifierCache,
    scanner: Scanner,
    cycles: CycleSet,
    /// `(b-1)^e`
    modulus: u64,
    /// `(p^alpha, least primitive root)` for `b - 1 = prod p^alpha`
    roots: Vec<(u64, u64)>,
    happy_small: OnceLock<Vec<u64>>,
}

impl Constructor {
    /// Fails with [`Error::ConditionFails`] when some prime `p | b-1` has
    /// `e = 1 (mod p-1)`; then no two consecutive numbers are happy.
    pub fn new(params: Params, config: ConstructorConfig) -> Result<Self> {
        if let Condition::Fails { prime } = condition_holds(&params) {
            return Err(Error::ConditionFails { prime });
        }
        let b = params.b();
        let mut roots = Vec::new();
        for (p, alpha) in factorize(b - 1).factors {
            roots.push((p.pow(alpha), primitive_root(p, alpha)?));
        }
        Ok(Constructor {
            sym: Sym::with_depth_limit(b, config.depth_limit),
            cache: ClassifierCache::new(&params)?,
            scanner: Scanner::new(&params)?,
            cycles: cycle_set(&params)?,
            modulus: params.max_digit_power(),
            roots,
            happy_small: OnceLock::new(),
            params,
            config,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn cycle_set(&self) -> &CycleSet {
        &self.cycles
    }

    pub fn sym(&self) -> &Sym {
        &self.sym
    }

    fn b1(&self) -> u64 {
        self.params.b() - 1
    }

    fn t(&self, v: &TowerNat) -> Result<TowerNat> {
        self.sym.power_digit_sum(v, self.params.e())
    }

    // ----- residues mod b-1 -----

    /// The L-map on residues mod `b-1`, represented in `[0, b-2]`.
    pub fn lmap(&self, a: u64) -> u64 {
        let e = self.params.e();
        let parts: Vec<(u64, u64)> = self
            .roots
            .iter()
            .map(|&(q, g)| {
                let r = if a % q == 1 % q {
                    1 % q
                } else {
                    (a % q + q - g % q + mod_pow(g, e as u64, q)) % q
                };
                (r, q)
            })
            .collect();
        crt_solve(&parts).map(|(x, _)| x).unwrap_or(0)
    }

    /// `a, L(a), L(L(a)), ...` up to the first value `= 1 (mod b-1)`.
    pub fn l_orbit(&self, a: u64) -> Result<Vec<u64>> {
        let b1 = self.b1();
        let mut orbit = vec![a % b1];
        while *orbit.last().unwrap() != 1 % b1 {
            if orbit.len() > b1 as usize + 1 {
                return Err(Error::Construction(format!(
                    "L-orbit of {a} does not reach 1"
                )));
            }
            orbit.push(self.lmap(*orbit.last().unwrap()));
        }
        Ok(orbit)
    }

    /// The digit `g`: the primitive root on coordinates where `a != 1`, and 1
    /// where `a = 1`.
    pub fn combined_root(&self, a: u64) -> u64 {
        let parts: Vec<(u64, u64)> = self
            .roots
            .iter()
            .map(|&(q, g)| (if a % q == 1 % q { 1 % q } else { g % q }, q))
            .collect();
        crt_solve(&parts).map(|(x, _)| x).unwrap_or(0)
    }

    /// Given happy `l` and `h'` with `l = T(h') (mod b-1)` and `l > T(h')`,
    /// returns `h = (l - T(h')) ones above h' + h'`, which has `T(h) = l` and
    /// `h = h' (mod b-1)`.
    pub fn residue_step(&self, l: &TowerNat, hprime: &TowerNat) -> Result<TowerNat> {
        let th = self.t(hprime)?;
        if self.sym.modulo(l, self.b1())? != self.sym.modulo(&th, self.b1())? {
            return Err(Error::InvalidArgument(format!(
                "{l} and T({hprime}) = {th} differ mod b-1"
            )));
        }
        if self.sym.cmp(l, &th)?.is_le() {
            return Err(Error::InvalidArgument(format!(
                "{l} must exceed T({hprime}) = {th}; inflate it first"
            )));
        }
        let count = self.sym.sub(l, &th)?;
        let s = self.sym.digit_count(hprime)?;
        self.sym
            .add_disjoint(&self.sym.pad_ones(&s, &count)?, hprime, &s)
    }

    fn ensure_happy(&self, bld: &mut Builder, v: &TowerNat) -> Result<()> {
        if bld.happy.contains(v) {
            return Ok(());
        }
        match v {
            TowerNat::Small(n) if *n > 0 && self.cache.is_happy(*n) => {
                bld.leaf(*n);
                Ok(())
            }
            _ => Err(Error::Construction(format!("{v} is not known to be happy"))),
        }
    }

    /// Emits `produced = low + count copies of digit above shift`, deriving its
    /// happiness from that of its image under `T`.
    #[allow(clippy::too_many_arguments)]
    fn pad_step(
        &self,
        bld: &mut Builder,
        rule: Rule,
        inputs: Value,
        digit: u64,
        shift: &TowerNat,
        count: &TowerNat,
        low: &TowerNat,
    ) -> Result<TowerNat> {
        let produced =
            self.sym
                .add_disjoint(&self.sym.pad_run(digit, shift, count)?, low, shift)?;
        if bld.happy.contains(&produced) {
            return Ok(produced);
        }
        let image = self.sym.add(
            &self
                .sym
                .scale_small(count, self.params.digit_power(digit))?,
            &self.t(low)?,
        )?;
        self.ensure_happy(bld, &image)?;
        bld.push(
            rule,
            inputs,
            produced.clone(),
            Identity::Pad {
                digit,
                shift: shift.clone(),
                count: count.clone(),
                low: low.clone(),
            },
        );
        bld.happy.insert(produced.clone());
        Ok(produced)
    }

    fn congruence_step(
        &self,
        bld: &mut Builder,
        rule: Rule,
        value: &TowerNat,
        modulus: u64,
    ) -> Result<u64> {
        let residue = self.sym.modulo(value, modulus)?;
        bld.push(
            rule,
            json!({}),
            value.clone(),
            Identity::Congruence { modulus, residue },
        );
        Ok(residue)
    }

    /// Least happy `n <= search_bound` with `n = a (mod m)`.
    fn search_residue(&self, a: u64, m: u64) -> Option<u64> {
        let mut n = if a == 0 { m } else { a };
        while n <= self.config.search_bound {
            if self.scanner.is_happy(n) {
                return Some(n);
            }
            n = n.checked_add(m)?;
        }
        None
    }

    /// Appends the least number of zeros that makes `v` exceed `min`.
    fn inflate_past(
        &self,
        bld: &mut Builder,
        v: &TowerNat,
        min: &TowerNat,
        step: u64,
    ) -> Result<TowerNat> {
        let mut zeros = 0u64;
        let mut out = v.clone();
        while self.sym.cmp(&out, min)?.is_le() {
            zeros += step;
            out = self.sym.shift_small(v, zeros)?;
        }
        if zeros > 0 {
            bld.push(
                Rule::Inflate,
                json!({ "min": tv(min) }),
                out.clone(),
                Identity::ZeroShift {
                    value: v.clone(),
                    zeros: TowerNat::Small(zeros),
                },
            );
            bld.happy.insert(out.clone());
        }
        Ok(out)
    }

    /// A happy number `= a (mod b-1)`.
    fn residue_witness(&self, bld: &mut Builder, a: u64, allow_search: bool) -> Result<TowerNat> {
        let b1 = self.b1();
        let a = a % b1;
        if a == 1 % b1 {
            bld.leaf(1);
            return Ok(TowerNat::ONE);
        }
        if allow_search {
            if let Some(h) = self.search_residue(a, b1) {
                bld.leaf(h);
                return Ok(TowerNat::Small(h));
            }
        }
        let la = self.lmap(a);
        let l = self.residue_witness(bld, la, allow_search)?;
        let g = self.combined_root(a);
        let ones = a + b1 - g;
        let g_t = TowerNat::Small(g);
        let hprime = if ones == 0 {
            g_t.clone()
        } else {
            self.sym.add_disjoint(
                &self.sym.pad_ones(&TowerNat::ONE, &TowerNat::Small(ones))?,
                &g_t,
                &TowerNat::ONE,
            )?
        };
        let th = self.t(&hprime)?;
        let l = self.inflate_past(bld, &l, &th, 1)?;
        let count = self.sym.sub(&l, &th)?;
        let s = self.sym.digit_count(&hprime)?;
        let h = self.pad_step(
            bld,
            Rule::ResidueStep,
            json!({ "a": a, "l_map": la, "g": g, "h_prime": tv(&hprime), "l": tv(&l) }),
            1,
            &s,
            &count,
            &hprime,
        )?;
        self.congruence_step(bld, Rule::ResidueStep, &h, b1)?;
        Ok(h)
    }

    /// Happy `h = a (mod b-1)`.
    pub fn certify_residue(&self, a: u64) -> Result<WitnessCertificate> {
        let mut bld = Builder::default();
        let b1 = self.b1();
        let h = self.residue_witness(&mut bld, a, !self.config.construct_only)?;
        self.congruence_step(&mut bld, Rule::ResidueStep, &h, b1)?;
        Ok(bld.finish(
            self.params,
            Goal::ResidueWitness {
                value: h,
                residue: a % b1,
                modulus: b1,
            },
        ))
    }

    // ----- residues mod (b-1)^e -----

    /// Happy `H = a (mod (b-1)^e)`: from happy `h = a (mod b-1)`, the numeral
    /// with `h-1` ones above one zero and a single 1 at position `h + r`.
    fn lift(&self, bld: &mut Builder, a: u64, allow_search: bool) -> Result<TowerNat> {
        let m = self.modulus;
        let a = a % m;
        if m == 1 {
            bld.leaf(1);
            return Ok(TowerNat::ONE);
        }
        if allow_search {
            if let Some(h) = self.search_residue(a, m) {
                bld.leaf(h);
                return Ok(TowerNat::Small(h));
            }
        }
        let h = self.residue_witness(bld, a % self.b1(), true)?;
        let sym = &self.sym;
        let hm1 = sym.sub(&h, &TowerNat::ONE)?;
        let low = if hm1.is_zero() {
            TowerNat::ZERO
        } else {
            sym.pad_ones(&TowerNat::ONE, &hm1)?
        };
        let sigma = sym.modulo(&low, m)?;
        let target = (a + m - sigma) % m;
        let bh = sym.base_pow_mod(&h, m)?;
        let inv = mod_inverse(bh, m)
            .ok_or_else(|| Error::Construction("b^h is not invertible".into()))?;
        let want = crate::numtheory::mul_mod(target, inv, m);
        let r = successor_power_log(self.b1(), want, self.params.e())?;
        let shift = sym.add(&h, &TowerNat::Small(r))?;
        let lifted = self.pad_step(
            bld,
            Rule::Lift,
            json!({ "a": a, "h": tv(&h), "r": r, "b_pow_r": want }),
            1,
            &shift,
            &TowerNat::ONE,
            &low,
        )?;
        self.congruence_step(bld, Rule::Lift, &lifted, m)?;
        Ok(lifted)
    }

    /// Happy `H = a (mod (b-1)^e)`.
    pub fn certify_lifted_residue(&self, a: u64) -> Result<WitnessCertificate> {
        let mut bld = Builder::default();
        let h = self.lift(&mut bld, a, !self.config.construct_only)?;
        let m = self.modulus;
        self.congruence_step(&mut bld, Rule::Lift, &h, m)?;
        Ok(bld.finish(
            self.params,
            Goal::ResidueWitness {
                value: h,
                residue: a % m,
                modulus: m,
            },
        ))
    }

    /// `h * b^(t * phi((b-1)^e))` for the least `t` making it at least `min`;
    /// happy and congruent to `h` mod `(b-1)^e`.
    pub fn inflate_happy(&self, h: &TowerNat, min: &TowerNat) -> Result<TowerNat> {
        let step = euler_phi(self.modulus);
        let mut zeros = 0;
        let mut out = h.clone();
        while self.sym.cmp(&out, min)?.is_lt() {
            zeros += step;
            out = self.sym.shift_small(h, zeros)?;
        }
        Ok(out)
    }

    // ----- pairs -----

    /// Happy `l` with `l + d` happy.
    fn pair(&self, bld: &mut Builder, d: u64, allow_search: bool) -> Result<TowerNat> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "pair difference must be positive".into(),
            ));
        }
        if allow_search {
            let hit = (1..=self.config.pair_bound).find(|&l| {
                self.scanner.is_happy(l)
                    && l.checked_add(d).is_some_and(|v| self.scanner.is_happy(v))
            });
            if let Some(l) = hit {
                bld.leaf(l);
                bld.leaf(l + d);
                return Ok(TowerNat::Small(l));
            }
            if let Some(l) = self.offset_pair(bld, d)? {
                return Ok(l);
            }
        }
        let b = self.params.b();
        let m = self.modulus;
        let mut s = 1u32;
        while b.checked_pow(s).is_some_and(|p| p <= d) {
            s += 1;
        }
        let bs = b.checked_pow(s).ok_or_else(|| {
            Error::TooLarge(format!("no power of {b} above {d} fits a machine word"))
        })?;
        let xstar = bs - d;
        let c = self.t(&TowerNat::Small(xstar))?;
        let c_small = c.as_small().expect("T of a word is a word");
        let h = self.lift(bld, c_small % m, true)?;
        let step = euler_phi(m);
        let h = self.inflate_past(bld, &h, &c, step)?;
        let diff = self.sym.sub(&h, &c)?;
        let diff = self
            .sym
            .to_biguint(&diff, self.config.digit_cap)?
            .ok_or_else(|| {
                Error::Construction(format!("residue witness {h} is too large to divide by {m}"))
            })?;
        let k = &diff / m;
        debug_assert_eq!(&k * m, diff);
        let k = self.sym.from_biguint(&k)?;
        let shift = TowerNat::Small(s as u64);
        let l = self.pad_step(
            bld,
            Rule::Pair,
            json!({ "difference": d, "x_star": xstar, "h": tv(&h), "k": tv(&k) }),
            b - 1,
            &shift,
            &k,
            &TowerNat::Small(xstar),
        )?;
        let plus = self.sym.add(&l, &TowerNat::Small(d))?;
        if !bld.happy.contains(&plus) {
            bld.push(
                Rule::Pair,
                json!({ "difference": d }),
                l.clone(),
                Identity::Scale {
                    shift: s as u64,
                    length: k,
                    low: xstar,
                    addend: d,
                },
            );
            bld.happy.insert(plus);
        }
        Ok(l)
    }

    /// Small happy numbers, computed on first use.
    fn happy_list(&self) -> &[u64] {
        self.happy_small.get_or_init(|| {
            let mut out = Vec::new();
            self.scanner
                .for_each(1, self.config.search_bound + 1, |n, happy| {
                    if happy {
                        out.push(n);
                    }
                });
            out
        })
    }

    /// Pair by padding over a small offset: with `p` ones above `t`,
    /// `T(l) = p + T(t)` and `T(l + d) = p + T(t + d)`, so any two small happy
    /// numbers `T(t + d) - T(t)` apart give a pair.
    fn offset_pair(&self, bld: &mut Builder, d: u64) -> Result<Option<TowerNat>> {
        let list = self.happy_list();
        for t in 0..=self.config.pair_bound {
            let (a, c) = (self.scanner.t(t), self.scanner.t(t + d));
            let (lo, delta) = (a.min(c), a.abs_diff(c));
            let v = list
                .iter()
                .copied()
                .find(|&v| v > lo && self.scanner.is_happy(v + delta));
            let Some(v) = v else { continue };
            let count = TowerNat::Small(v - lo);
            let shift = TowerNat::Small(crate::map::digit_len(t + d, self.params.b()) as u64);
            let inputs = json!({ "difference": d, "offset": t });
            let l = self.pad_step(
                bld,
                Rule::Pair,
                inputs.clone(),
                1,
                &shift,
                &count,
                &TowerNat::Small(t),
            )?;
            self.pad_step(
                bld,
                Rule::Pair,
                inputs,
                1,
                &shift,
                &count,
                &TowerNat::Small(t + d),
            )?;
            return Ok(Some(l));
        }
        Ok(None)
    }

    /// Happy `l` with `l + d` happy.
    pub fn certify_pair(&self, d: u64) -> Result<WitnessCertificate> {
        let mut bld = Builder::default();
        let l = self.pair(&mut bld, d, !self.config.construct_only)?;
        Ok(bld.finish(
            self.params,
            Goal::PairWitness {
                difference: d,
                value: l,
            },
        ))
    }

    // ----- pad towers -----

    /// Upper bound on `T(y)` for `0 <= y <= m`.
    fn image_bound(&self, m: &TowerNat) -> Result<TowerNat> {
        match m {
            TowerNat::Small(v) => Ok(TowerNat::Small(max_power_digit_sum_upto(*v, &self.params))),
            _ => self
                .sym
                .scale_small(&self.sym.digit_count(m)?, self.modulus),
        }
    }

    /// Levels `l_1..l_r` with `T^r(l_r + y) = x + T^r(y)` for all `0 <= y <= m`.
    pub fn pad_tower(&self, x: &TowerNat, m: &TowerNat, r: usize) -> Result<PadTower> {
        if r == 0 {
            return Err(Error::InvalidArgument(
                "pad tower needs at least one level".into(),
            ));
        }
        if x.is_zero() {
            return Err(Error::InvalidArgument("pad target must be positive".into()));
        }
        // bounds[k] bounds T^k(y) for y <= m
        let mut bounds = vec![m.clone()];
        for _ in 1..r {
            let next = self.image_bound(bounds.last().unwrap())?;
            bounds.push(next);
        }
        let mut levels = Vec::with_capacity(r);
        let mut count = x.clone();
        for j in 1..=r {
            let shift = self.sym.digit_count(&bounds[r - j])?;
            let l = self.sym.pad_ones(&shift, &count)?;
            levels.push((shift, l.clone()));
            count = l;
        }
        Ok(PadTower {
            x: x.clone(),
            levels,
        })
    }

    /// Emits the chain establishing happiness of `l_r + z` from that of
    /// `x + T^r(z)`; returns `l_r + z`.
    fn pad_chain(
        &self,
        bld: &mut Builder,
        rule: Rule,
        tower: &PadTower,
        z: &TowerNat,
    ) -> Result<TowerNat> {
        let r = tower.levels.len();
        // lows[k] = T^k(z)
        let mut lows = vec![z.clone()];
        for _ in 1..r {
            let next = self.t(lows.last().unwrap())?;
            lows.push(next);
        }
        let mut produced = TowerNat::ZERO;
        for j in 1..=r {
            let (shift, _) = &tower.levels[j - 1];
            let count = if j == 1 {
                &tower.x
            } else {
                &tower.levels[j - 2].1
            };
            let low = &lows[r - j];
            produced = self.pad_step(
                bld,
                rule,
                json!({ "level": j, "of": r }),
                1,
                shift,
                count,
                low,
            )?;
        }
        Ok(produced)
    }

    /// Steps until `z` enters the cycle set, and the entry value.
    fn enter_cycles(&self, z: &TowerNat) -> Result<(usize, u64)> {
        let mut v = z.clone();
        let mut k = 0;
        loop {
            if let TowerNat::Small(n) = v {
                let mut n = n;
                while !self.cycles.contains(n) {
                    n = crate::map::digit_power_sum(n, &self.params);
                    k += 1;
                }
                return Ok((k, n));
            }
            v = self.t(&v)?;
            k += 1;
        }
    }

    // ----- covers -----

    fn search_cover(&self, set: &[u64]) -> Result<Option<u64>> {
        search::find_cover_h(
            &self.params,
            set,
            self.config.search_bound,
            self.config.workers,
        )
    }

    /// `h` with `h + y` happy for every `y` in `set` (which contains 1).
    fn cover(&self, bld: &mut Builder, set: &[u64]) -> Result<TowerNat> {
        let search = !self.config.construct_only;
        if search {
            if let Some(h) = self.search_cover(set)? {
                for &y in set {
                    bld.leaf(h + y);
                }
                return Ok(TowerNat::Small(h));
            }
        }
        let b = self.params.b();
        if set.len() == 1 {
            // b - 1 + 1 = b, and T(b) = 1
            bld.leaf(b);
            return Ok(TowerNat::Small(b - 1));
        }
        let x = *set
            .iter()
            .find(|&&y| y != 1)
            .expect("set has a member other than 1");
        let mut hx = None;
        if search {
            hx = self.greedy_pair(set).map(TowerNat::Small);
        }
        let hx = match hx {
            Some(h) => h,
            None => {
                let l = self.pair(bld, x - 1, search)?;
                let hx = self.sym.sub(&l, &TowerNat::ONE)?;
                if set.len() == 2 {
                    return Ok(hx);
                }
                hx
            }
        };

        let zs: Vec<TowerNat> = set
            .iter()
            .map(|&y| self.sym.add(&hx, &TowerNat::Small(y)))
            .collect::<Result<_>>()?;
        let mut r = 1;
        for z in &zs {
            r = r.max(self.enter_cycles(z)?.0);
        }
        let images: BTreeSet<u64> = zs
            .iter()
            .map(|z| {
                let mut v = z.clone();
                for _ in 0..r {
                    v = self.t(&v)?;
                }
                Ok(v.as_small().expect("inside the cycle set"))
            })
            .collect::<Result<_>>()?;
        let sub: Vec<u64> = images.into_iter().collect();
        if sub.len() >= set.len() || sub.first() != Some(&1) {
            return Err(Error::Construction(format!(
                "pair witness {hx} does not shrink {set:?}"
            )));
        }
        let hsub = self.cover(bld, &sub)?;
        let m = self.sym.add(&hx, &TowerNat::Small(*set.last().unwrap()))?;
        let tower = self.pad_tower(&hsub, &m, r)?;
        for z in &zs {
            self.pad_chain(bld, Rule::Cover, &tower, z)?;
        }
        self.sym.add_disjoint(tower.top(), &hx, tower.top_shift())
    }

    /// `h <= pair_bound` with `h + 1` happy that shrinks `set` at the least
    /// cost in tower depth: iterations needed per member removed.
    fn greedy_pair(&self, set: &[u64]) -> Option<u64> {
        let mut best: Option<(u64, usize, u64)> = None;
        for h in 1..=self.config.pair_bound {
            if !self.scanner.is_happy(h + 1)
                || set
                    .iter()
                    .filter(|&&y| self.scanner.is_happy(h + y))
                    .count()
                    < 2
            {
                continue;
            }
            let mut r = 1;
            for &y in set {
                let mut n = h + y;
                let mut k = 0;
                while !self.cycles.contains(n) {
                    n = crate::map::digit_power_sum(n, &self.params);
                    k += 1;
                }
                r = r.max(k);
            }
            let images: BTreeSet<u64> = set
                .iter()
                .map(|&y| (0..r).fold(h + y, |n, _| crate::map::digit_power_sum(n, &self.params)))
                .collect();
            let removed = set.len() - images.len();
            // compare r / removed as fractions
            let better = match best {
                None => true,
                Some((br, bremoved, _)) => (r as u64) * (bremoved as u64) < br * removed as u64,
            };
            if better {
                best = Some((r as u64, removed, h));
            }
        }
        best.map(|(_, _, h)| h)
    }

    /// `h` with `h + x` happy for every `x` in the cycle set.
    pub fn certify_cover(&self) -> Result<WitnessCertificate> {
        let mut bld = Builder::default();
        let members = self.cycles.members_vec();
        let h = self.cover(&mut bld, &members)?;
        Ok(bld.finish(self.params, Goal::CoverWitness { value: h, members }))
    }

    // ----- runs -----

    /// Least `r >= 1` with `T^r(y)` in the cycle set for all `1 <= y <= m`.
    pub fn run_depth(&self, m: u64) -> Result<usize> {
        let mut r = 1;
        for y in 1..=m {
            r = r.max(self.enter_cycles(&TowerNat::Small(y))?.0);
        }
        Ok(r)
    }

    /// `l` with `l + 1, ..., l + m` happy.
    pub fn certify_run(&self, m: u64) -> Result<WitnessCertificate> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "run length must be at least 1".into(),
            ));
        }
        let mut bld = Builder::default();
        let members = self.cycles.members_vec();
        let h = self.cover(&mut bld, &members)?;
        let r = self.run_depth(m)?;
        let tower = self.pad_tower(&h, &TowerNat::Small(m), r)?;
        for y in 1..=m {
            self.pad_chain(&mut bld, Rule::Run, &tower, &TowerNat::Small(y))?;
        }
        let start = tower.top().clone();
        Ok(bld.finish(self.params, Goal::RunOfLength { length: m, start }))
    }
}

/// Renders a numeral for people: digits when short, the run form when that
/// is short, and only its shape otherwise.
pub fn describe(sym: &Sym, t: &TowerNat) -> String {
    if let Ok(Some(s)) = sym.render(t, 60) {
        return s;
    }
    let runs = t.to_string();
    if runs.len() > 200 {
        return format!("numeral of nesting depth {}", t.depth());
    }
    match sym.digit_count(t) {
        Ok(TowerNat::Small(n)) => format!("{runs} ({n} digits)"),
        _ => runs,
    }
}

#[cfg(test)]
mod tests;
