//! Finite re-checks of the congruence lemmas behind the rank-4 classification.
//!
//! Three kinds of check live here:
//!
//! * [`parity`]: identities of the rank-4 determinant modulo 2 (and the mod-4
//!   relation between the b/c/d/e tuples), enumerated over complete residue
//!   systems of the inputs.
//! * [`residue`]: statements about `D2` at inputs `2k + e0, ..., 2n + e3`,
//!   enumerated over `(k, l, m, n)` modulo a power-of-two window.
//! * [`signature`]: the case analysis that rules out impossible rank-4
//!   values, replayed over every assignment of factor types to the four `D2`
//!   factors.
//!
//! Every check is sound for all integers, not only the enumerated
//! representatives, because each conclusion is read off polynomials with
//! integer coefficients at a modulus that divides the window (see
//! [`residue::Dyadic`]).
//!
//! Registered ids: `2.2`, `2.3`, `2.4`, `3.2` to `3.6`, `4.1`, `4.2`,
//! `4.5`, `4.6`. The statement that
//! valuation-16 values have odd part `1 mod 4` (called `L4.3` here) rests on
//! the rank-3 value set and is exercised by the sweep instead.

pub mod parity;
pub mod residue;
pub mod signature;

use std::fmt;
use std::time::Duration;

use rayon::prelude::*;

use crate::error::VerifyError;

pub const DEFAULT_WINDOW: u64 = 32;

/// Lemma ids accepted by [`verify_lemma`], in report order.
pub const LEMMA_IDS: [&str; 12] = [
    "2.2", "2.3", "2.4", "3.2", "3.3", "3.4", "3.5", "3.6", "4.1", "4.2", "4.5", "4.6",
];

/// A failing input: the clause or signature that broke, the input tuple and
/// a human-readable account of what went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub clause: String,
    pub input: Vec<i64>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let input: Vec<String> = self.input.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "{} at ({}): {}",
            self.clause,
            input.join(","),
            self.detail
        )
    }
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub lemma_id: String,
    /// Modulus of the enumerated residue system.
    pub window: u64,
    pub cases_enumerated: u64,
    /// Cardinality predicted from the window or table sizes.
    pub expected_cases: u64,
    /// Finest modulus at which a conclusion is asserted.
    pub modulus: u64,
    /// Why finitely many cases cover all integers.
    pub sufficiency: String,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && self.cases_enumerated == self.expected_cases
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    /// `lemma 2.4: 65536 cases, pass`
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "lemma {}: {} cases, {}",
            self.lemma_id,
            self.cases_enumerated,
            self.verdict()
        );
        if self.cases_enumerated != self.expected_cases {
            line.push_str(&format!(" (expected {} cases)", self.expected_cases));
        }
        if let Some(c) = &self.counterexample {
            line.push_str(&format!(", counterexample {c}"));
        }
        line
    }

    /// One `key=value` record per report, for machine consumption.
    pub fn record(&self) -> String {
        format!(
            "lemma={} window={} cases={} expected={} modulus={} verdict={} elapsed_ms={}",
            self.lemma_id,
            self.window,
            self.cases_enumerated,
            self.expected_cases,
            self.modulus,
            self.verdict(),
            self.elapsed.as_millis()
        )
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary_line())
    }
}

pub fn check_window(window: u64) -> Result<u32, VerifyError> {
    if window < DEFAULT_WINDOW || !window.is_power_of_two() || window > 1 << 12 {
        return Err(VerifyError::BadWindow(window));
    }
    Ok(window.trailing_zeros())
}

/// Runs one registered lemma. `window` applies to the residue lemmas and to
/// the table cross-check of the signature lemmas; the parity suite always
/// uses its own complete residue systems.
pub fn verify_lemma(id: &str, window: u64) -> Result<LemmaReport, VerifyError> {
    let bits = check_window(window)?;
    Ok(match id {
        "2.2" => parity::verify_bcde_congruences(),
        "2.3" => parity::verify_parity_congruences(),
        "2.4" => parity::verify_even_criterion(),
        "3.2" | "3.3" | "3.4" | "3.5" | "3.6" => {
            let table = residue::clause_table(id).expect("registered id");
            residue::verify_clauses(id, &table, bits)
        }
        "4.1" | "4.2" | "4.5" | "4.6" => signature::verify_signatures(id, bits),
        _ => return Err(VerifyError::UnknownLemma(id.to_string())),
    })
}

/// The parity suite: `2.2`, `2.3` and `2.4`.
pub fn verify_parity_suite() -> Vec<LemmaReport> {
    vec![
        parity::verify_bcde_congruences(),
        parity::verify_parity_congruences(),
        parity::verify_even_criterion(),
    ]
}

/// One of the `D2` residue lemmas `3.2` to `3.6`.
pub fn verify_d2_residue_lemma(id: &str, window: u64) -> Result<LemmaReport, VerifyError> {
    let bits = check_window(window)?;
    let table =
        residue::clause_table(id).ok_or_else(|| VerifyError::UnknownLemma(id.to_string()))?;
    Ok(residue::verify_clauses(id, &table, bits))
}

/// The signature lemmas `4.1`, `4.2`, `4.5` and `4.6` at the default window.
pub fn verify_impossibility_cases() -> Vec<LemmaReport> {
    let bits = DEFAULT_WINDOW.trailing_zeros();
    ["4.1", "4.2", "4.5", "4.6"]
        .par_iter()
        .map(|id| signature::verify_signatures(id, bits))
        .collect()
}

/// Every registered lemma, run in parallel, reported in [`LEMMA_IDS`] order.
pub fn verify_all(window: u64) -> Result<Vec<LemmaReport>, VerifyError> {
    check_window(window)?;
    LEMMA_IDS
        .par_iter()
        .map(|id| verify_lemma(id, window))
        .collect()
}
