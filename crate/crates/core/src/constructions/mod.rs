//! Builders for the three Toeplitz constructions, strict-constants
//! planning, and invariant verification.

pub mod config;
mod fill;
pub mod iwanik;
pub mod normalize;
pub mod residue_towers;
pub mod strict;
pub mod verify;

pub use config::{ConstructionConfig, DEFAULT_BUDGET};
pub use iwanik::{build_iwanik, iwanik_checkpoint, zero_quota, BlockLevel, BlockStep, IwanikBlocks};
pub use normalize::{normalize_poly, NormalizedPoly};
pub use residue_towers::{build_construction_a, build_construction_b};
pub use strict::{
    check_iwanik_growth, check_strict_a_primes, plan_strict_a, plan_strict_b, Blocked, StrictCheck,
    StrictPlan,
};
pub use verify::{config_from_meta, verify_construction_invariants, InvariantCheck, InvariantReport};
