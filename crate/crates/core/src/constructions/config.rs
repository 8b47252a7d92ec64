use crate::error::{Error, Result};
use crate::ntcore::poly::IntPolynomial;
use crate::words::meta::{ConstructionKind, FillPolicy, Mode};

/// Default cap on the length of any materialised level.
pub const DEFAULT_BUDGET: u64 = 1 << 30;

/// Parameters of a construction run.
///
/// In relaxed mode the caller supplies the primes (construction A) or the
/// tower moduli (construction B, block pairs) and the growth conditions
/// are only reported. Strict mode derives everything itself and refuses
/// overrides.
#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    pub kind: ConstructionKind,
    pub k: u64,
    pub l: u64,
    /// Polynomial for the block-pair construction.
    pub poly: Option<IntPolynomial>,
    /// Levels to build in strict mode; derived from the overrides otherwise.
    pub levels: usize,
    pub mode: Mode,
    pub fill: FillPolicy,
    /// Primes `p_1 < p_2 < ...` with `n_{t+1} = n_t·p_{t+1}` (construction A).
    pub primes: Vec<u64>,
    /// Moduli `n_1, n_2, ...` (`n_0 = 1` is implicit).
    pub tower: Vec<u64>,
    pub budget: u64,
}

impl ConstructionConfig {
    pub fn relaxed_a(k: u64, l: u64, primes: Vec<u64>, fill: FillPolicy) -> Self {
        Self {
            kind: ConstructionKind::A,
            k,
            l,
            poly: None,
            levels: primes.len(),
            mode: Mode::Relaxed,
            fill,
            primes,
            tower: Vec::new(),
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn strict_a(k: u64, l: u64, levels: usize, fill: FillPolicy) -> Self {
        Self {
            mode: Mode::Strict,
            levels,
            ..Self::relaxed_a(k, l, Vec::new(), fill)
        }
    }

    pub fn relaxed_b(k: u64, l: u64, tower: Vec<u64>, fill: FillPolicy) -> Self {
        Self {
            kind: ConstructionKind::B,
            k,
            l,
            poly: None,
            levels: tower.len(),
            mode: Mode::Relaxed,
            fill,
            primes: Vec::new(),
            tower,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn strict_b(k: u64, l: u64, levels: usize, fill: FillPolicy) -> Self {
        Self {
            mode: Mode::Strict,
            levels,
            ..Self::relaxed_b(k, l, Vec::new(), fill)
        }
    }

    /// Block-pair construction along `poly` over the tower `n_1, n_2, ...`.
    /// The tower is always supplied; strict mode additionally demands the
    /// growth conditions.
    pub fn iwanik(poly: IntPolynomial, tower: Vec<u64>, mode: Mode) -> Self {
        Self {
            kind: ConstructionKind::Iwanik,
            k: 0,
            l: 0,
            poly: Some(poly),
            levels: tower.len(),
            mode,
            fill: FillPolicy::Zero,
            primes: Vec::new(),
            tower,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Rejects overrides in strict mode and missing overrides in relaxed mode.
    pub(crate) fn check_mode(&self) -> Result<()> {
        let supplied = match self.kind {
            ConstructionKind::A => !self.primes.is_empty(),
            ConstructionKind::B => !self.tower.is_empty(),
            ConstructionKind::Iwanik => return Ok(()),
        };
        match (self.mode, supplied) {
            (Mode::Strict, true) => Err(Error::InvalidInput(
                "strict mode derives the tower itself; prime/tower overrides are not allowed".into(),
            )),
            (Mode::Relaxed, false) => Err(Error::InvalidInput(
                "relaxed mode needs the primes (A) or tower moduli (B)".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Names of the constants and conditions the caller took over.
    pub(crate) fn overrides(&self) -> Vec<String> {
        if self.mode == Mode::Strict {
            return Vec::new();
        }
        let names: &[&str] = match self.kind {
            ConstructionKind::A => &["primes", "totient_ratio", "hole_budget", "prime_growth"],
            ConstructionKind::B => &["tower", "prime_floor", "omega_budget", "totient_ratio", "modulus_growth"],
            ConstructionKind::Iwanik => &["growth", "reciprocal_sum"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}
