//! Exact orbit statistics along polynomial sequences: Birkhoff averages,
//! checkpoint reports, convergence and equidistribution probes, density
//! verdicts and aligned block frequencies.

pub mod ap;
pub mod average;
pub mod cylinder;
pub mod density;
pub mod probes;

pub use ap::{ap_closed_form, ap_frequency, iwanik_ap_check, ApEntry, ApReport};
pub use average::{
    birkhoff_average, checkpoint_report, construction_poly, CheckpointEntry, CheckpointReport, OrbitEvaluator,
    SignVerdict, Tally,
};
pub use cylinder::{CylinderFunction, IntervalValue, Rational};
pub use density::{
    almost_prime_obstruction, cylinder_witness_search, density_verdict, residues_covered, sequence_residues_covered,
    Coverage, DensityReport, DensityVerdict, Obstruction, WitnessReport,
};
pub use probes::{
    convergence_probe, equidistribution_check, permutation_identity, shift_question_density,
    shift_question_density_bounded, window_hole_density, EquidistributionReport, Oscillation, PermutationIdentity,
    ProbeReport, ProbeSample, QuestionDensity, SAMPLED_SHIFTS,
};
