//! Exact modular and number-theoretic kernels.

pub mod arith;
pub mod aset;
pub mod counting;
pub mod perm;
pub mod poly;
pub mod primes;
pub mod residue;

pub use arith::{factorize, gcd, iroot, is_prime, pow_mod, Factorization};
pub use aset::{
    build_a_set, est2_bound, max_power_preimage_bounded, max_power_preimage_over_shifts,
    max_shift_correlation, sampled_shift_correlation, unit_power_residues, ASet, ShiftDirection,
    ShiftMax, DEFAULT_SHIFT_LIMIT,
};
pub use counting::{power_histogram, power_residues, rho, rho_max, weil_count, WeilCount};
pub use perm::{dickson, is_permutation_mod, is_permutation_mod_bounded, lift_criterion};
pub use poly::IntPolynomial;
pub use primes::{find_ntlem_primes, find_primes, ntlem_params, NtlemParams, DEFAULT_SEARCH_SPAN};
pub use residue::ResidueSet;
