//! Exact integer group determinants for the elementary abelian groups C2^n.
//!
//! The determinant of C2^n at an integer assignment is the product of its
//! `2^n` character sums (see [`transform`]). On top of the evaluator the
//! crate decides membership in the value sets for n = 2, 3, 4, builds
//! explicit witnesses for every attainable rank-4 value, replays the
//! residue-class case analysis behind the rank-4 classification as finite
//! checks, and runs resumable exhaustive sweeps.
//!
//! ```
//! use gdet_core::{det_group, Assignment};
//!
//! let a = Assignment::from_i64(2, &[2, 1, 1, 1]).unwrap();
//! assert_eq!(det_group(&a), 5.into());
//! ```

pub mod assignment;
pub mod classify;
pub mod determinant;
pub mod error;
pub mod factor;
pub mod search;
pub mod transform;
pub mod twoadic;
pub mod verify;
pub mod witness;

pub use assignment::Assignment;
pub use classify::{
    classify, classify_c22, classify_c23, classify_c24, is_in_a, odd_class_c2n, APair,
    Classification, Group, LowRankClass, LowRankVerdict, NonMember, ValueClass,
};
pub use determinant::{
    bcde_decompose, d2_closed_form, det_group, det_matrix_oracle, factor_step, BcdeQuad, FactorTree,
};
pub use error::{ClassifyError, DetError, FactorError, SweepError, VerifyError, WitnessError};
pub use factor::{factor_odd, FactorPolicy, OddFactorization};
pub use search::{
    a_set_oracle, coverage_check, sweep, CoverageReport, SweepAssertions, SweepConfig, SweepResult,
};
pub use transform::character_transform;
pub use twoadic::{two_adic_split, TwoAdicSplit};
pub use verify::{
    verify_all, verify_d2_residue_lemma, verify_impossibility_cases, verify_lemma,
    verify_parity_suite, Counterexample, LemmaReport, LEMMA_IDS,
};
pub use witness::{build, witness_for, Witness, WitnessFamily};
