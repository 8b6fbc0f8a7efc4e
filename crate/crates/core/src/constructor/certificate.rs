use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::map::Params;
use crate::symbolic::{Sym, TowerNat};
use crate::{Error, Result};

pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

/// What a certificate establishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Goal<N = TowerNat> {
    /// `start + 1, ..., start + length` are all happy.
    RunOfLength { length: u64, start: N },
    /// `value` is happy and `value = residue (mod modulus)`.
    ResidueWitness {
        value: N,
        residue: u64,
        modulus: u64,
    },
    /// `value` and `value + difference` are both happy.
    PairWitness { difference: u64, value: N },
    /// `value + x` is happy for every `x` in `members`, the cycle set.
    CoverWitness { value: N, members: Vec<u64> },
}

/// The construction a step comes from. Informational; the verifier only
/// looks at the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Ones padded above a block of low digits, iterated.
    Pad,
    /// A run of `b-1` digits that turns into a power of `b` after an addition.
    Pair,
    /// Lifting a residue class mod `b-1` to one mod `(b-1)^e`.
    Lift,
    /// One step of the residue induction driven by the L-map.
    ResidueStep,
    /// Appending zeros to a happy number.
    Inflate,
    /// Subset induction for a cover of the cycle set.
    Cover,
    /// Final run assembly.
    Run,
}

/// The closed set of facts a step may assert.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Identity<N = TowerNat> {
    /// `produced = low + (count copies of digit) * b^shift` with `low < b^shift`,
    /// so `T(produced) = digit^e * count + T(low)`. Establishes that `produced`
    /// is happy from the happiness of that image.
    Pad {
        digit: u64,
        shift: N,
        count: N,
        low: N,
    },
    /// `produced = low + (length copies of b-1) * b^shift` with
    /// `low + addend = b^shift`, so `produced + addend = b^(shift + length)`,
    /// which is happy.
    Scale {
        shift: u64,
        length: N,
        low: u64,
        addend: u64,
    },
    /// `produced = value * b^zeros`, happy because `value` is.
    ZeroShift { value: N, zeros: N },
    /// `produced = residue (mod modulus)`.
    Congruence { modulus: u64, residue: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step<N = TowerNat> {
    pub rule: Rule,
    /// Construction parameters, for readers. Not trusted by the verifier.
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub produced: N,
    pub identity: Identity<N>,
}

impl<N> Goal<N> {
    fn try_map<M, E>(
        self,
        mut f: impl FnMut(N) -> std::result::Result<M, E>,
    ) -> std::result::Result<Goal<M>, E> {
        Ok(match self {
            Goal::RunOfLength { length, start } => Goal::RunOfLength {
                length,
                start: f(start)?,
            },
            Goal::ResidueWitness {
                value,
                residue,
                modulus,
            } => Goal::ResidueWitness {
                value: f(value)?,
                residue,
                modulus,
            },
            Goal::PairWitness { difference, value } => Goal::PairWitness {
                difference,
                value: f(value)?,
            },
            Goal::CoverWitness { value, members } => Goal::CoverWitness {
                value: f(value)?,
                members,
            },
        })
    }
}

impl<N> Step<N> {
    fn try_map<M, E>(
        self,
        mut f: impl FnMut(N) -> std::result::Result<M, E>,
    ) -> std::result::Result<Step<M>, E> {
        let identity = match self.identity {
            Identity::Pad {
                digit,
                shift,
                count,
                low,
            } => Identity::Pad {
                digit,
                shift: f(shift)?,
                count: f(count)?,
                low: f(low)?,
            },
            Identity::Scale {
                shift,
                length,
                low,
                addend,
            } => Identity::Scale {
                shift,
                length: f(length)?,
                low,
                addend,
            },
            Identity::ZeroShift { value, zeros } => Identity::ZeroShift {
                value: f(value)?,
                zeros: f(zeros)?,
            },
            Identity::Congruence { modulus, residue } => Identity::Congruence { modulus, residue },
        };
        Ok(Step {
            rule: self.rule,
            inputs: self.inputs,
            produced: f(self.produced)?,
            identity,
        })
    }
}

/// A checkable record of a construction. Steps are ordered so every fact a
/// step relies on is a leaf or was established by an earlier step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub format_version: u32,
    pub params: Params,
    pub goal: Goal,
    pub steps: Vec<Step>,
    /// Small numbers whose happiness is checked directly.
    pub leaves: Vec<u64>,
}

impl WitnessCertificate {
    /// JSON with every numeral written once into a `numerals` table; numerals
    /// elsewhere are `{"small": n}` or `{"ref": i}`. Witness towers share most
    /// of their structure, so writing them as plain trees is exponentially
    /// larger.
    pub fn to_json(&self) -> String {
        let mut table = Table::default();
        let wire = Wire {
            format_version: self.format_version,
            params: self.params,
            goal: self
                .goal
                .clone()
                .try_map(|t| Ok::<_, ()>(table.intern(&t)))
                .unwrap(),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    s.clone()
                        .try_map(|t| Ok::<_, ()>(table.intern(&t)))
                        .unwrap()
                })
                .collect(),
            leaves: self.leaves.clone(),
            numerals: table.nodes,
        };
        serde_json::to_string_pretty(&wire).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        use serde::de::Error as _;
        let wire: Wire = serde_json::from_str(text)?;
        let mut built: Vec<TowerNat> = Vec::with_capacity(wire.numerals.len());
        for node in wire.numerals {
            let runs = node
                .runs
                .into_iter()
                .map(|(d, c)| resolve(&built, c).map(|c| (d, c)))
                .collect::<std::result::Result<Vec<_>, String>>()
                .map_err(serde_json::Error::custom)?;
            for (_, c) in &runs {
                if let TowerNat::Runs(r) = c {
                    if r.base() != node.base {
                        return Err(serde_json::Error::custom(format!(
                            "count in base {} inside numeral in base {}",
                            r.base(),
                            node.base
                        )));
                    }
                }
            }
            if node.base < 2 {
                return Err(serde_json::Error::custom(format!(
                    "numeral base {} must be at least 2",
                    node.base
                )));
            }
            let t = Sym::with_depth_limit(node.base, usize::MAX)
                .from_runs(runs)
                .map_err(serde_json::Error::custom)?;
            built.push(t);
        }
        let get = |n: NumRef| resolve(&built, n).map_err(serde_json::Error::custom);
        Ok(WitnessCertificate {
            format_version: wire.format_version,
            params: wire.params,
            goal: wire.goal.try_map(get)?,
            steps: wire
                .steps
                .into_iter()
                .map(|s| s.try_map(get))
                .collect::<std::result::Result<_, _>>()?,
            leaves: wire.leaves,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cert = Self::from_json(&text).map_err(|e| Error::json(path, e))?;
        if cert.format_version != CERTIFICATE_FORMAT_VERSION {
            return Err(Error::FormatVersion {
                found: cert.format_version,
                expected: CERTIFICATE_FORMAT_VERSION,
            });
        }
        Ok(cert)
    }

    /// Deepest numeral in the certificate.
    pub fn max_depth(&self) -> usize {
        self.steps
            .iter()
            .map(|s| s.produced.depth())
            .max()
            .unwrap_or(0)
    }
}

/// A numeral inside the JSON form of a certificate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum NumRef {
    Small {
        small: u64,
    },
    Ref {
        #[serde(rename = "ref")]
        index: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct Node {
    base: u64,
    /// least significant first
    runs: Vec<(u64, NumRef)>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    format_version: u32,
    params: Params,
    goal: Goal<NumRef>,
    steps: Vec<Step<NumRef>>,
    leaves: Vec<u64>,
    /// Each entry refers only to earlier ones.
    numerals: Vec<Node>,
}

#[derive(Default)]
struct Table {
    index: HashMap<TowerNat, usize>,
    nodes: Vec<Node>,
}

impl Table {
    fn intern(&mut self, t: &TowerNat) -> NumRef {
        let r = match t {
            TowerNat::Small(n) => return NumRef::Small { small: *n },
            TowerNat::Runs(r) => r,
        };
        if let Some(&index) = self.index.get(t) {
            return NumRef::Ref { index };
        }
        let runs = r
            .segments()
            .iter()
            .map(|s| (s.digit, self.intern(&s.count)))
            .collect();
        self.nodes.push(Node {
            base: r.base(),
            runs,
        });
        let index = self.nodes.len() - 1;
        self.index.insert(t.clone(), index);
        NumRef::Ref { index }
    }
}

fn resolve(built: &[TowerNat], n: NumRef) -> std::result::Result<TowerNat, String> {
    match n {
        NumRef::Small { small } => Ok(TowerNat::Small(small)),
        NumRef::Ref { index } => built
            .get(index)
            .cloned()
            .ok_or_else(|| format!("numeral reference {index} does not point to an earlier entry")),
    }
}
