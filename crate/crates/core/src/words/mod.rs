//! Partial words over `{0, 1, ?}`, viable pairs and their periodic structure.

pub mod freq;
pub mod meta;
pub mod pair;
pub mod partial;
pub mod periods;
pub mod symbol;
pub mod tpv;

pub use freq::{block_frequency, window_codes, window_histogram, window_string, BlockFrequency, UNRESOLVED};
pub use meta::{ConstructionKind, ConstructionMeta, FillPolicy, Mode};
pub use pair::{Level, QuestionStat, Viability, ViablePair, Violation, ViolationKind};
pub use partial::{PartialWord, StorageKind, RLE_THRESHOLD};
pub use periods::{
    divisors, essential_period_certificate, per_residues, separation_radius, EssentialVerdict,
    PeriodCertificate, PeriodEntry, ResidueStatus,
};
pub use symbol::Symbol;
pub use tpv::{from_tpv_str, read_tpv, to_tpv_string, write_tpv};
