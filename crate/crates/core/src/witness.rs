//! Explicit rank-4 assignments realising every member of the C2^4 value set.
//!
//! Seven parametric tuples cover the six clauses of the classification; the
//! `2^16 (4m+1)` clause needs two of them, split by the residue of `4m+1`
//! modulo 8. Values of the form `2^24 (8k-3)(8l+3)` reuse the `F4` tuple with
//! `m = 2k - 1`, since `8k - 3 = 4(2k - 1) + 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::assignment::Assignment;
use crate::classify::{classify_c24, ValueClass};
use crate::determinant::det_group;
use crate::error::WitnessError;
use crate::factor::FactorPolicy;
use crate::twoadic::rem_u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessFamily {
    /// `16m + 1`
    F1 { m: BigInt },
    /// `2^16 (8k + 1)`
    F2a { k: BigInt },
    /// `2^16 (8k - 3)`
    F2b { k: BigInt },
    /// `2^24 (4m + 1)`
    F3 { m: BigInt },
    /// `2^24 (4m + 1)(8n + 3)`
    F4 { m: BigInt, n: BigInt },
    /// `2^26 * 2k`
    F5Even { k: BigInt },
    /// `2^26 (2k + 1)`
    F5Odd { k: BigInt },
}

impl WitnessFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::F1 { .. } => "F1",
            Self::F2a { .. } => "F2a",
            Self::F2b { .. } => "F2b",
            Self::F3 { .. } => "F3",
            Self::F4 { .. } => "F4",
            Self::F5Even { .. } => "F5even",
            Self::F5Odd { .. } => "F5odd",
        }
    }

    /// The determinant the family is constructed to hit.
    pub fn target(&self) -> BigInt {
        match self {
            Self::F1 { m } => m * 16 + 1,
            Self::F2a { k } => (k * 8 + 1) << 16,
            Self::F2b { k } => (k * 8 - 3) << 16,
            Self::F3 { m } => (m * 4 + 1) << 24,
            Self::F4 { m, n } => ((m * 4 + 1) * (n * 8 + 3)) << 24,
            Self::F5Even { k } => (k * 2) << 26,
            Self::F5Odd { k } => (k * 2 + 1) << 26,
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::F1 { m } | Self::F3 { m } => write!(f, "{} m={m}", self.name()),
            Self::F2a { k } | Self::F2b { k } | Self::F5Even { k } | Self::F5Odd { k } => {
                write!(f, "{} k={k}", self.name())
            }
            Self::F4 { m, n } => write!(f, "F4 m={m} n={n}"),
        }
    }
}

/// The 16-entry tuple of `family`.
pub fn build(family: &WitnessFamily) -> Assignment {
    let values: Vec<BigInt> = match family {
        WitnessFamily::F1 { m } => {
            let mut v = vec![m.clone(); 16];
            v[0] += 1;
            v
        }
        WitnessFamily::F2a { k } => {
            let mut v = vec![k.clone(); 16];
            v[0] += 2;
            v
        }
        WitnessFamily::F2b { k } => affine(
            k,
            &[
                (-1, 1),
                (1, 0),
                (-1, 1),
                (1, 0),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (1, -1),
                (-1, 1),
                (1, 0),
                (-1, 0),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 0),
                (1, 0),
            ],
        ),
        WitnessFamily::F3 { m } => {
            let mut v = vec![m.clone(); 16];
            v[0] += 3;
            v[1] += 1;
            v
        }
        WitnessFamily::F4 { m, n } => {
            let diff = m - n;
            let sum = m + n;
            let mut v = Vec::with_capacity(16);
            for block in 0..4 {
                let (first, second): (BigInt, BigInt) = if block == 0 {
                    (&diff + 2, -(&sum + 1i32))
                } else {
                    (&diff - 1, -(&sum))
                };
                v.push(first);
                v.push(second);
                v.push(&sum + 1);
                v.push(-&diff);
            }
            v
        }
        WitnessFamily::F5Even { k } => affine(
            k,
            &[
                (1, 1),
                (-1, 1),
                (1, 1),
                (-1, 0),
                (1, -1),
                (-1, 0),
                (1, 1),
                (-1, 0),
                (1, 0),
                (-1, 0),
                (1, 1),
                (-1, 0),
                (1, -2),
                (-1, 1),
                (1, 1),
                (-1, 0),
            ],
        ),
        WitnessFamily::F5Odd { k } => {
            let mut v = vec![k.clone(); 16];
            for (slot, shift) in [(0, -1), (1, 1), (2, 1), (3, 2), (4, 1), (5, 2), (6, 2)] {
                v[slot] += shift;
            }
            v
        }
    };
    Assignment::new(4, values).expect("witness tuples have 16 entries")
}

// slot-wise `coefficient * k + constant`
fn affine(k: &BigInt, slots: &[(i64, i64); 16]) -> Vec<BigInt> {
    slots.iter().map(|&(a, b)| k * a + b).collect()
}

/// A witness together with the family that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub family: WitnessFamily,
    pub assignment: Assignment,
}

/// Maps a member class to the family and parameters that realise it.
pub fn family_for(class: &ValueClass) -> Option<WitnessFamily> {
    Some(match class {
        ValueClass::Odd16m1 { m } => WitnessFamily::F1 { m: m.clone() },
        ValueClass::V16Form4m1 { m } => {
            let u: BigInt = m * 4 + 1;
            if rem_u64(&u, 8) == 1 {
                WitnessFamily::F2a { k: (u - 1) / 8 }
            } else {
                WitnessFamily::F2b { k: (u + 3) / 8 }
            }
        }
        ValueClass::V24Form4m1 { m } => WitnessFamily::F3 { m: m.clone() },
        ValueClass::V24Form8m3 { m } => WitnessFamily::F4 {
            m: BigInt::zero(),
            n: m.clone(),
        },
        ValueClass::V24A { k, l } => WitnessFamily::F4 {
            m: k * 2 - 1,
            n: l.clone(),
        },
        ValueClass::V26 { m } => {
            let (k, r) = m.div_mod_floor(&BigInt::from(2));
            if r.is_zero() {
                WitnessFamily::F5Even { k }
            } else {
                debug_assert!(r.is_one());
                WitnessFamily::F5Odd { k }
            }
        }
        ValueClass::NotMember(_) => return None,
    })
}

/// Builds `family` and evaluates it; a mismatch with the target is an error.
pub fn build_checked(family: WitnessFamily) -> Result<Witness, WitnessError> {
    let assignment = build(&family);
    let expected = family.target();
    let actual = det_group(&assignment);
    if actual != expected {
        return Err(WitnessError::Mismatch {
            family: family.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
    Ok(Witness { family, assignment })
}

/// Classifies `v` and, for members, returns a verified witness. `Ok(None)`
/// means `v` is not attained by any rank-4 assignment.
pub fn witness_for(v: &BigInt, policy: &FactorPolicy) -> Result<Option<Witness>, WitnessError> {
    let class = classify_c24(v, policy)?;
    let Some(family) = family_for(&class) else {
        return Ok(None);
    };
    let witness = build_checked(family)?;
    // the family target is derived from the class parameters, so compare
    // against the caller's value as well
    let actual = det_group(&witness.assignment);
    if &actual != v {
        return Err(WitnessError::Mismatch {
            family: witness.family.to_string(),
            expected: v.to_string(),
            actual: actual.to_string(),
        });
    }
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(a: &Assignment) -> Vec<i64> {
        a.to_i64().unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn reference_tuples() {
        let f1 = build(&WitnessFamily::F1 { m: big(1) });
        assert_eq!(ints(&f1), [vec![2], vec![1; 15]].concat());
        assert_eq!(det_group(&f1), big(17));

        let f2b = build(&WitnessFamily::F2b { k: big(0) });
        assert_eq!(
            ints(&f2b),
            vec![1, 0, 1, 0, 0, 0, 1, -1, 1, 0, 0, -1, 0, 0, 0, 0]
        );
        assert_eq!(det_group(&f2b), big(-196608));

        let f4 = build(&WitnessFamily::F4 {
            m: big(0),
            n: big(0),
        });
        assert_eq!(
            ints(&f4),
            vec![2, -1, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0]
        );
        assert_eq!(det_group(&f4), big(50331648));

        let f5 = build(&WitnessFamily::F5Odd { k: big(0) });
        assert_eq!(
            ints(&f5),
            vec![-1, 1, 1, 2, 1, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(det_group(&f5), big(1) << 26);
    }

    #[test]
    fn every_family_hits_its_target() {
        for p in -40..=40 {
            let p = big(p);
            let families = [
                WitnessFamily::F1 { m: p.clone() },
                WitnessFamily::F2a { k: p.clone() },
                WitnessFamily::F2b { k: p.clone() },
                WitnessFamily::F3 { m: p.clone() },
                WitnessFamily::F4 {
                    m: p.clone(),
                    n: -&p + 3,
                },
                WitnessFamily::F5Even { k: p.clone() },
                WitnessFamily::F5Odd { k: p.clone() },
            ];
            for f in families {
                build_checked(f).unwrap();
            }
        }
    }

    #[test]
    fn dispatcher_examples() {
        let policy = FactorPolicy::default();
        let w = witness_for(&big(17), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F1 { m: big(1) });

        let w = witness_for(&(big(-9) << 24), &policy).unwrap().unwrap();
        assert_eq!(
            w.family,
            WitnessFamily::F4 {
                m: big(-1),
                n: big(0)
            }
        );

        assert!(witness_for(&(big(7) << 24), &policy).unwrap().is_none());
        assert!(witness_for(&big(7), &policy).unwrap().is_none());

        let w = witness_for(&big(0), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F5Even { k: big(0) });
        assert!(det_group(&w.assignment).is_zero());

        let w = witness_for(&big(-196608), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F2b { k: big(0) });
        let w = witness_for(&(big(5) << 16), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F2b { k: big(1) });
        let w = witness_for(&(big(9) << 16), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F2a { k: big(1) });
        let w = witness_for(&(big(-3) << 26), &policy).unwrap().unwrap();
        assert_eq!(w.family, WitnessFamily::F5Odd { k: big(-2) });
    }

    #[test]
    fn a_values_go_through_f4() {
        let policy = FactorPolicy::default();
        // 15 = 5 * 3, so k = 1, l = 0 and m = 2k - 1 = 1
        let w = witness_for(&(big(15) << 24), &policy).unwrap().unwrap();
        assert_eq!(
            w.family,
            WitnessFamily::F4 {
                m: big(1),
                n: big(0)
            }
        );
    }
}
