//! JSON shape: `{"small": n}` or `{"base": b, "runs": [[digit, count], ...]}`
//! with runs least significant first and each `count` again a numeral.
//! Deserialization canonicalizes, so non-canonical input is accepted.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Sym, TowerNat};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Raw {
    Small { small: u64 },
    Runs { base: u64, runs: Vec<(u64, Raw)> },
}

impl From<&TowerNat> for Raw {
    fn from(t: &TowerNat) -> Self {
        match t {
            TowerNat::Small(n) => Raw::Small { small: *n },
            TowerNat::Runs(r) => Raw::Runs {
                base: r.base(),
                runs: r
                    .segments()
                    .iter()
                    .map(|s| (s.digit, Raw::from(&s.count)))
                    .collect(),
            },
        }
    }
}

impl Raw {
    fn build(self) -> Result<TowerNat, String> {
        match self {
            Raw::Small { small } => Ok(TowerNat::Small(small)),
            Raw::Runs { base, runs } => {
                if base < 2 {
                    return Err(format!("numeral base {base} must be at least 2"));
                }
                let sym = Sym::with_depth_limit(base, usize::MAX);
                let runs = runs
                    .into_iter()
                    .map(|(d, c)| {
                        let c = c.build()?;
                        if let TowerNat::Runs(inner) = &c {
                            if inner.base() != base {
                                return Err(format!(
                                    "count in base {} inside numeral in base {base}",
                                    inner.base()
                                ));
                            }
                        }
                        Ok((d, c))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                sym.from_runs(runs).map_err(|e| e.to_string())
            }
        }
    }
}

impl Serialize for TowerNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Raw::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TowerNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Raw::deserialize(deserializer)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}
