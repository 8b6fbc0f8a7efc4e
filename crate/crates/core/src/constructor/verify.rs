// `TowerNat` caches its digit count in a `OnceLock`; the hash and equality do
// not depend on it, so it is a sound set key.
#![allow(clippy::mutable_key_type)]

use std::collections::HashSet;
use std::fmt;

use super::certificate::{Goal, Identity, Step, WitnessCertificate, CERTIFICATE_FORMAT_VERSION};
use crate::map::{cycle_set, ClassifierCache};
use crate::symbolic::{Sym, TowerNat, DEFAULT_DEPTH_LIMIT};
use crate::Result;

/// Outcome of checking a certificate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub steps_checked: usize,
    pub leaves_checked: usize,
    /// One line per failed check; empty iff the certificate is valid.
    pub failures: Vec<String>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(
                f,
                "valid ({} steps, {} leaves)",
                self.steps_checked, self.leaves_checked
            )
        } else {
            write!(f, "invalid:")?;
            for line in &self.failures {
                write!(f, "\n  {line}")?;
            }
            Ok(())
        }
    }
}

/// Checks every step, every leaf and the goal, with the default depth limit.
pub fn verify_certificate(cert: &WitnessCertificate) -> Verification {
    verify_certificate_with(cert, DEFAULT_DEPTH_LIMIT)
}

pub fn verify_certificate_with(cert: &WitnessCertificate, depth_limit: usize) -> Verification {
    let mut out = Verification::default();
    if cert.format_version != CERTIFICATE_FORMAT_VERSION {
        out.failures.push(format!(
            "format version {} (expected {CERTIFICATE_FORMAT_VERSION})",
            cert.format_version
        ));
        return out;
    }
    let params = cert.params;
    let cache = match ClassifierCache::new(&params) {
        Ok(c) => c,
        Err(e) => {
            out.failures.push(format!("cannot classify {params}: {e}"));
            return out;
        }
    };
    let sym = Sym::with_depth_limit(params.b(), depth_limit);
    let mut happy: HashSet<TowerNat> = HashSet::new();

    for &leaf in &cert.leaves {
        out.leaves_checked += 1;
        if leaf > 0 && cache.is_happy(leaf) {
            happy.insert(TowerNat::Small(leaf));
        } else {
            out.failures.push(format!("leaf {leaf} is not happy"));
        }
    }

    for (i, step) in cert.steps.iter().enumerate() {
        out.steps_checked += 1;
        match check_step(&sym, params.e(), step, &happy) {
            Ok(Ok(Some(fact))) => {
                happy.insert(fact);
            }
            Ok(Ok(None)) => {}
            Ok(Err(msg)) => out
                .failures
                .push(format!("step {i} ({:?}): {msg}", step.rule)),
            Err(e) => out
                .failures
                .push(format!("step {i} ({:?}): {e}", step.rule)),
        }
    }

    if let Err(msg) = check_goal(&sym, cert, &happy) {
        out.failures.push(format!("goal: {msg}"));
    }
    out
}

type Checked = Result<std::result::Result<Option<TowerNat>, String>>;

fn check_step(sym: &Sym, e: u32, step: &Step, happy: &HashSet<TowerNat>) -> Checked {
    let b = sym.base();
    match &step.identity {
        Identity::Pad {
            digit,
            shift,
            count,
            low,
        } => {
            if *digit == 0 || *digit >= b {
                return Ok(Err(format!("pad identity: digit {digit} out of range")));
            }
            if count.is_zero() {
                return Ok(Err("pad identity: empty pad".into()));
            }
            if sym.cmp(&sym.digit_count(low)?, shift)?.is_gt() {
                return Ok(Err(format!(
                    "pad identity: low part {low} does not fit below b^{shift}"
                )));
            }
            let expected = sym.add(low, &sym.pad_run(*digit, shift, count)?)?;
            if expected != step.produced {
                return Ok(Err(format!(
                    "pad identity: {} != {expected}",
                    step.produced
                )));
            }
            let image = sym.add(
                &sym.scale_small(count, digit.pow(e))?,
                &sym.power_digit_sum(low, e)?,
            )?;
            if !happy.contains(&image) {
                return Ok(Err(format!(
                    "pad identity: image {image} is not established as happy"
                )));
            }
            Ok(Ok(Some(step.produced.clone())))
        }
        Identity::Scale {
            shift,
            length,
            low,
            addend,
        } => {
            let top = u32::try_from(*shift).ok().and_then(|s| b.checked_pow(s));
            if top.is_none() || low.checked_add(*addend) != top {
                return Ok(Err(format!(
                    "scale identity: {low} + {addend} is not b^{shift}"
                )));
            }
            if length.is_zero() {
                return Ok(Err("scale identity: empty run".into()));
            }
            let expected = sym.add(
                &TowerNat::Small(*low),
                &sym.pad_run(b - 1, &TowerNat::Small(*shift), length)?,
            )?;
            if expected != step.produced {
                return Ok(Err(format!(
                    "scale identity: {} != {expected}",
                    step.produced
                )));
            }
            Ok(Ok(Some(
                sym.add(&step.produced, &TowerNat::Small(*addend))?,
            )))
        }
        Identity::ZeroShift { value, zeros } => {
            if !happy.contains(value) {
                return Ok(Err(format!(
                    "zero shift: {value} is not established as happy"
                )));
            }
            if sym.shift(value, zeros)? != step.produced {
                return Ok(Err(format!(
                    "zero shift: {} != {value} * b^{zeros}",
                    step.produced
                )));
            }
            Ok(Ok(Some(step.produced.clone())))
        }
        Identity::Congruence { modulus, residue } => {
            if *modulus == 0 {
                return Ok(Err("congruence: zero modulus".into()));
            }
            let got = sym.modulo(&step.produced, *modulus)?;
            if got != *residue {
                return Ok(Err(format!(
                    "congruence: value is {got} mod {modulus}, not {residue}"
                )));
            }
            Ok(Ok(None))
        }
    }
}

fn check_goal(
    sym: &Sym,
    cert: &WitnessCertificate,
    happy: &HashSet<TowerNat>,
) -> std::result::Result<(), String> {
    let is_happy = |t: &TowerNat| happy.contains(t);
    let plus = |t: &TowerNat, y: u64| sym.add(t, &TowerNat::Small(y)).map_err(|e| e.to_string());
    match &cert.goal {
        Goal::RunOfLength { length, start } => {
            if *length == 0 {
                return Err("empty run".into());
            }
            for y in 1..=*length {
                if !is_happy(&plus(start, y)?) {
                    return Err(format!("start + {y} is not established as happy"));
                }
            }
        }
        Goal::ResidueWitness {
            value,
            residue,
            modulus,
        } => {
            if !is_happy(value) {
                return Err(format!("{value} is not established as happy"));
            }
            if *modulus == 0 {
                return Err("zero modulus".into());
            }
            let got = sym.modulo(value, *modulus).map_err(|e| e.to_string())?;
            if got != *residue {
                return Err(format!("value is {got} mod {modulus}, not {residue}"));
            }
        }
        Goal::PairWitness { difference, value } => {
            if *difference == 0 {
                return Err("difference must be positive".into());
            }
            if !is_happy(value) {
                return Err(format!("{value} is not established as happy"));
            }
            if !is_happy(&plus(value, *difference)?) {
                return Err(format!("value + {difference} is not established as happy"));
            }
        }
        Goal::CoverWitness { value, members } => {
            let d = cycle_set(&cert.params).map_err(|e| e.to_string())?;
            if *members != d.members_vec() {
                return Err(format!(
                    "members {members:?} are not the cycle set {:?}",
                    d.members_vec()
                ));
            }
            for &x in members {
                if !is_happy(&plus(value, x)?) {
                    return Err(format!("value + {x} is not established as happy"));
                }
            }
        }
    }
    Ok(())
}
