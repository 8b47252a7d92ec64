use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionKind {
    /// Holes kept on unit k-th power residues (`k ∤ l`).
    A,
    /// Holes kept on the non-l-th-power set (`k | l`).
    B,
    /// Block-pair construction along a permutative polynomial.
    #[serde(rename = "IWANIK")]
    Iwanik,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

/// How positions that may be set "arbitrarily" are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillPolicy {
    Zero,
    One,
    /// Bits drawn from a ChaCha8 stream seeded with the given value.
    Seeded(u64),
}

impl FillPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            FillPolicy::Zero => "zero",
            FillPolicy::One => "one",
            FillPolicy::Seeded(_) => "seeded",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            FillPolicy::Seeded(s) => Some(*s),
            _ => None,
        }
    }

    pub fn from_parts(name: &str, seed: Option<u64>) -> Option<Self> {
        match (name, seed) {
            ("zero", _) => Some(FillPolicy::Zero),
            ("one", _) => Some(FillPolicy::One),
            ("seeded", Some(s)) => Some(FillPolicy::Seeded(s)),
            _ => None,
        }
    }
}

/// Construction parameters carried alongside a pair so that its
/// invariants can be re-checked later.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub kind: ConstructionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    pub mode: Mode,
    pub fill_policy: String,
    pub seed: Option<u64>,
    /// Names of constants supplied by the caller instead of derived (relaxed mode).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<String>,
    /// Tower moduli `n_0, n_1, ...`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tower: Vec<u64>,
    /// Polynomial coefficients (constant first) the construction is built
    /// against, after normalisation for the block-pair kind.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poly: Vec<i64>,
}

impl ConstructionMeta {
    pub fn fill(&self) -> Option<FillPolicy> {
        FillPolicy::from_parts(&self.fill_policy, self.seed)
    }
}
