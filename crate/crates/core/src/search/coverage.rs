//! Witness coverage over bounded class parameters, and the brute-force
//! oracle for the set `A = {(8k-3)(8l+3)}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::classify::ValueClass;
use crate::determinant::det_group;
use crate::factor::FactorPolicy;
use crate::witness::witness_for;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub bound: u64,
    /// Values checked per witness family name.
    pub per_family: BTreeMap<String, u64>,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// Every member value whose class parameters lie in `[-bound, bound]`.
pub fn member_values(bound: u64) -> Vec<BigInt> {
    let b = bound as i64;
    let range = || (-b..=b).map(BigInt::from);
    let mut classes = Vec::new();
    for m in range() {
        classes.push(ValueClass::Odd16m1 { m: m.clone() });
        classes.push(ValueClass::V16Form4m1 { m: m.clone() });
        classes.push(ValueClass::V24Form4m1 { m: m.clone() });
        classes.push(ValueClass::V24Form8m3 { m: m.clone() });
        classes.push(ValueClass::V26 { m: m.clone() });
        for l in range() {
            classes.push(ValueClass::V24A { k: m.clone(), l });
        }
    }
    let mut values: Vec<BigInt> = classes
        .iter()
        .map(|c| c.reconstruct().expect("member class"))
        .collect();
    values.sort();
    values.dedup();
    values
}

/// Builds and evaluates a witness for each of [`member_values`].
pub fn coverage_check(bound: u64, policy: &FactorPolicy) -> CoverageReport {
    let mut report = CoverageReport {
        bound,
        ..Default::default()
    };
    for v in member_values(bound) {
        report.checked += 1;
        match witness_for(&v, policy) {
            Ok(Some(w)) => {
                if det_group(&w.assignment) == v {
                    *report
                        .per_family
                        .entry(w.family.name().to_string())
                        .or_default() += 1;
                } else {
                    report
                        .failures
                        .push(format!("{v}: {} evaluates differently", w.family));
                }
            }
            Ok(None) => report
                .failures
                .push(format!("{v}: classified as a non-member")),
            Err(e) => report.failures.push(format!("{v}: {e}")),
        }
    }
    report
}

/// Elements of `A` with `|a| <= bound`, by a plain double loop.
pub fn a_set_oracle(bound: u64) -> Vec<i128> {
    let b = bound as i128;
    let k_max = b / 8 + 1;
    let mut out = Vec::new();
    for k in -k_max..=k_max {
        let x = 8 * k - 3;
        if x.abs() > b {
            continue;
        }
        for l in -k_max..=k_max {
            let y = 8 * l + 3;
            if y.abs() > b {
                continue;
            }
            let p = x * y;
            if p.abs() <= b {
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        assert_eq!(a_set_oracle(20), vec![-9, 15]);
        assert!(a_set_oracle(8).is_empty());
        let hundred = a_set_oracle(100);
        for v in [55, -65, -9, 15] {
            assert!(hundred.contains(&v), "{v}");
        }
        for v in [7, 23, -1] {
            assert!(!hundred.contains(&v), "{v}");
        }
        assert!(hundred.iter().all(|v| v.rem_euclid(8) == 7));
    }

    #[test]
    fn bound_one_coverage() {
        let r = coverage_check(1, &FactorPolicy::default());
        assert!(r.passed(), "{:?}", r.failures);
        let values = member_values(1);
        let two = |e: u32, u: i64| BigInt::from(u) << e;
        for v in [
            BigInt::from(17),
            BigInt::from(-15),
            two(16, 5),
            two(16, -3),
            two(24, 5),
            two(24, 3),
            two(24, -9),
            two(26, 1),
            BigInt::from(0),
            BigInt::from(1),
        ] {
            assert!(values.contains(&v), "{v}");
        }
        assert_eq!(r.checked, values.len() as u64);
        assert_eq!(r.per_family.values().sum::<u64>(), r.checked);
    }
}
