//! Membership of integers in the value sets of C2^2, C2^3 and C2^4.
//!
//! For C2^4 the value set is the union of six families:
//! `16m+1`, `2^16(4m+1)`, `2^24(4m+1)`, `2^24(8m+3)`, `2^24 A` and
//! `2^26 m`, where `A = {(8k-3)(8l+3)}`. The families are told apart by the
//! exact 2-adic valuation of the value (0, 16, 24 or at least 26), so the
//! decision procedure splits off the power of two and then tests the odd
//! part. Only the valuation-24, `7 mod 8` branch needs a factorization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ClassifyError, FactorError};
use crate::factor::{factor_odd, FactorPolicy};
use crate::twoadic::{exact_quotient, rem_u64, two_adic_split};

/// Verdict for an integer against the C2^4 value set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueClass {
    /// `16m + 1`
    Odd16m1 {
        m: BigInt,
    },
    /// `2^16 (4m + 1)`
    V16Form4m1 {
        m: BigInt,
    },
    /// `2^24 (4m + 1)`
    V24Form4m1 {
        m: BigInt,
    },
    /// `2^24 (8m + 3)`
    V24Form8m3 {
        m: BigInt,
    },
    /// `2^24 (8k - 3)(8l + 3)`
    V24A {
        k: BigInt,
        l: BigInt,
    },
    /// `2^26 m`
    V26 {
        m: BigInt,
    },
    NotMember(NonMember),
}

impl ValueClass {
    pub fn is_member(&self) -> bool {
        !matches!(self, Self::NotMember(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Odd16m1 { .. } => "Odd16m1",
            Self::V16Form4m1 { .. } => "V16_4m1",
            Self::V24Form4m1 { .. } => "V24_4m1",
            Self::V24Form8m3 { .. } => "V24_8m3",
            Self::V24A { .. } => "V24_A",
            Self::V26 { .. } => "V26",
            Self::NotMember(_) => "NotMember",
        }
    }

    /// The value the clause parameters describe; `None` for non-members.
    pub fn reconstruct(&self) -> Option<BigInt> {
        let p = |shift: u32, v: BigInt| v << shift;
        Some(match self {
            Self::Odd16m1 { m } => m * 16 + 1,
            Self::V16Form4m1 { m } => p(16, m * 4 + 1),
            Self::V24Form4m1 { m } => p(24, m * 4 + 1),
            Self::V24Form8m3 { m } => p(24, m * 8 + 3),
            Self::V24A { k, l } => p(24, (k * 8 - 3) * (l * 8 + 3)),
            Self::V26 { m } => p(26, m.clone()),
            Self::NotMember(_) => return None,
        })
    }
}

impl fmt::Display for ValueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Odd16m1 { m }
            | Self::V16Form4m1 { m }
            | Self::V24Form4m1 { m }
            | Self::V24Form8m3 { m }
            | Self::V26 { m } => write!(f, "{} m={m}", self.tag()),
            Self::V24A { k, l } => write!(f, "V24_A k={k} l={l}"),
            Self::NotMember(reason) => write!(f, "NotMember: {reason}"),
        }
    }
}

/// The constraint a non-member violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonMember {
    /// Odd value not congruent to 1 modulo `modulus`.
    OddResidue { residue: u64, modulus: u64 },
    /// No family has this exact 2-adic valuation.
    Valuation { valuation: u64, odd_part: BigInt },
    /// Right valuation, but the odd part is not `1 mod 4`.
    OddPart {
        valuation: u64,
        odd_part: BigInt,
        residue: u64,
        modulus: u64,
    },
    /// Valuation 24 with odd part `7 mod 8` outside `A`.
    NotInA { odd_part: BigInt },
}

impl fmt::Display for NonMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OddResidue { residue, modulus } => {
                write!(f, "odd, {residue} ≢ 1 (mod {modulus})")
            }
            Self::Valuation {
                valuation,
                odd_part,
            } => write!(f, "valuation {valuation}, odd part {odd_part}, no clause"),
            Self::OddPart {
                valuation,
                odd_part,
                residue,
                modulus,
            } => write!(
                f,
                "valuation {valuation}, odd part {odd_part} ≡ {residue} ≢ 1 (mod {modulus})"
            ),
            Self::NotInA { odd_part } => write!(
                f,
                "valuation 24, odd part {odd_part} ≡ 7 (mod 8), {odd_part} ∉ A"
            ),
        }
    }
}

/// Parameters `(k, l)` with `u = (8k - 3)(8l + 3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APair {
    pub k: BigInt,
    pub l: BigInt,
}

impl APair {
    pub fn product(&self) -> BigInt {
        (&self.k * 8 - 3) * (&self.l * 8 + 3)
    }
}

/// Decides `u ∈ A = {(8k-3)(8l+3)}` by searching the signed divisor pairs
/// `(d, u/d)` for `d ≡ 5` and `u/d ≡ 3 (mod 8)`. When several pairs exist
/// the smallest positive `d` wins; negative `d` is used only when no positive
/// one works, again smallest `|d|` first. So `15` gives `(1, 0)` from `5 * 3`
/// rather than `(0, -1)` from `(-3)(-5)`.
pub fn is_in_a(u: &BigInt, policy: &FactorPolicy) -> Result<Option<APair>, FactorError> {
    // every element of A is odd and congruent to 5 * 3 = 7 (mod 8)
    if u.is_zero() || rem_u64(u, 8) != 7 {
        return Ok(None);
    }
    let fact = factor_odd(u, policy)?;
    let negative = u.is_negative();
    let magnitude = u.magnitude();
    // positive d first, then ascending |d|
    let divisors = fact.divisors();
    for d_negative in [false, true] {
        for &d in &divisors {
            let cofactor = (magnitude / d)
                .to_u128()
                .expect("divisor of a 128-bit value");
            let d_mod8 = signed_mod8(d % 8, d_negative);
            let c_mod8 = signed_mod8(cofactor % 8, negative != d_negative);
            if d_mod8 == 5 && c_mod8 == 3 {
                let d = if d_negative {
                    -BigInt::from(d)
                } else {
                    BigInt::from(d)
                };
                let other = u / &d;
                return Ok(Some(APair {
                    k: (d + 3) / 8,
                    l: (other - 3) / 8,
                }));
            }
        }
    }
    Ok(None)
}

fn signed_mod8(abs_mod8: u128, negative: bool) -> u128 {
    if negative {
        (8 - abs_mod8) % 8
    } else {
        abs_mod8
    }
}

/// Decision procedure for the C2^4 value set.
pub fn classify_c24(v: &BigInt, policy: &FactorPolicy) -> Result<ValueClass, ClassifyError> {
    if v.is_zero() {
        return Ok(ValueClass::V26 { m: BigInt::zero() });
    }
    let split = two_adic_split(v)?;
    let u = &split.odd_part;
    let class = match split.valuation {
        0 => {
            let r = rem_u64(u, 16);
            if r == 1 {
                ValueClass::Odd16m1 {
                    m: exact_quotient(u, 1, 16),
                }
            } else {
                ValueClass::NotMember(NonMember::OddResidue {
                    residue: r,
                    modulus: 16,
                })
            }
        }
        16 => {
            let r = rem_u64(u, 4);
            if r == 1 {
                ValueClass::V16Form4m1 {
                    m: exact_quotient(u, 1, 4),
                }
            } else {
                ValueClass::NotMember(NonMember::OddPart {
                    valuation: 16,
                    odd_part: u.clone(),
                    residue: r,
                    modulus: 4,
                })
            }
        }
        24 => match rem_u64(u, 8) {
            1 | 5 => ValueClass::V24Form4m1 {
                m: exact_quotient(u, 1, 4),
            },
            3 => ValueClass::V24Form8m3 {
                m: exact_quotient(u, 3, 8),
            },
            _ => match is_in_a(u, policy)? {
                Some(APair { k, l }) => ValueClass::V24A { k, l },
                None => ValueClass::NotMember(NonMember::NotInA {
                    odd_part: u.clone(),
                }),
            },
        },
        w if w >= 26 => ValueClass::V26 { m: v >> 26u32 },
        w => ValueClass::NotMember(NonMember::Valuation {
            valuation: w,
            odd_part: u.clone(),
        }),
    };
    Ok(class)
}

/// Verdict against the C2^2 or C2^3 value set.
///
/// C2^2: `4m+1`, `2^4(2m+1)`, `2^6 m`. C2^3: `8m+1`, `2^8(4m+1)`, `2^12 m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowRankClass {
    /// `2^n m + 1`
    Odd {
        m: BigInt,
    },
    /// `2^4 (2m+1)` for C2^2, `2^8 (4m+1)` for C2^3
    Middle {
        m: BigInt,
    },
    /// `2^6 m` for C2^2, `2^12 m` for C2^3
    Top {
        m: BigInt,
    },
    NotMember(NonMember),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowRankVerdict {
    pub rank: u32,
    pub class: LowRankClass,
}

impl LowRankVerdict {
    pub fn is_member(&self) -> bool {
        !matches!(self.class, LowRankClass::NotMember(_))
    }

    pub fn tag(&self) -> &'static str {
        match (self.rank, &self.class) {
            (2, LowRankClass::Odd { .. }) => "Odd4m1",
            (2, LowRankClass::Middle { .. }) => "V4_2m1",
            (2, LowRankClass::Top { .. }) => "V6",
            (_, LowRankClass::Odd { .. }) => "Odd8m1",
            (_, LowRankClass::Middle { .. }) => "V8_4m1",
            (_, LowRankClass::Top { .. }) => "V12",
            (_, LowRankClass::NotMember(_)) => "NotMember",
        }
    }

    pub fn reconstruct(&self) -> Option<BigInt> {
        let (odd_mod, mid_shift, mid_mod, top_shift) = if self.rank == 2 {
            (4, 4u32, 2, 6u32)
        } else {
            (8, 8, 4, 12)
        };
        Some(match &self.class {
            LowRankClass::Odd { m } => m * odd_mod + 1,
            LowRankClass::Middle { m } => (m * mid_mod + 1) << mid_shift,
            LowRankClass::Top { m } => m.clone() << top_shift,
            LowRankClass::NotMember(_) => return None,
        })
    }
}

impl fmt::Display for LowRankVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            LowRankClass::Odd { m } | LowRankClass::Middle { m } | LowRankClass::Top { m } => {
                write!(f, "{} m={m}", self.tag())
            }
            LowRankClass::NotMember(reason) => write!(f, "NotMember: {reason}"),
        }
    }
}

fn classify_low(v: &BigInt, rank: u32) -> LowRankVerdict {
    let (odd_mod, mid_shift, mid_mod, top_shift) = if rank == 2 {
        (4u64, 4u64, 2u64, 6u64)
    } else {
        (8, 8, 4, 12)
    };
    let verdict = |class| LowRankVerdict { rank, class };
    if v.is_zero() {
        return verdict(LowRankClass::Top { m: BigInt::zero() });
    }
    let split = two_adic_split(v).expect("nonzero");
    let u = &split.odd_part;
    let class = match split.valuation {
        0 => {
            let r = rem_u64(u, odd_mod);
            if r == 1 {
                LowRankClass::Odd {
                    m: exact_quotient(u, 1, odd_mod),
                }
            } else {
                LowRankClass::NotMember(NonMember::OddResidue {
                    residue: r,
                    modulus: odd_mod,
                })
            }
        }
        w if w == mid_shift => {
            let r = rem_u64(u, mid_mod);
            if r == 1 {
                LowRankClass::Middle {
                    m: exact_quotient(u, 1, mid_mod),
                }
            } else {
                LowRankClass::NotMember(NonMember::OddPart {
                    valuation: w,
                    odd_part: u.clone(),
                    residue: r,
                    modulus: mid_mod,
                })
            }
        }
        w if w >= top_shift => LowRankClass::Top {
            m: v >> top_shift as u32,
        },
        w => LowRankClass::NotMember(NonMember::Valuation {
            valuation: w,
            odd_part: u.clone(),
        }),
    };
    verdict(class)
}

pub fn classify_c22(v: &BigInt) -> LowRankVerdict {
    classify_low(v, 2)
}

pub fn classify_c23(v: &BigInt) -> LowRankVerdict {
    classify_low(v, 3)
}

/// Odd values of the C2^n value set are exactly `2^n m + 1`.
pub fn odd_class_c2n(rank: u32, v: &BigInt) -> Result<bool, ClassifyError> {
    if v.is_even() {
        return Err(ClassifyError::Even(v.to_string()));
    }
    let modulus = BigInt::one() << rank;
    Ok(v.mod_floor(&modulus).is_one() || (rank == 0))
}

/// The group whose value set is being tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    C2x2,
    C2x3,
    C2x4,
}

impl Group {
    pub fn rank(self) -> u32 {
        match self {
            Self::C2x2 => 2,
            Self::C2x3 => 3,
            Self::C2x4 => 4,
        }
    }

    pub fn from_rank(rank: u32) -> Option<Self> {
        match rank {
            2 => Some(Self::C2x2),
            3 => Some(Self::C2x3),
            4 => Some(Self::C2x4),
            _ => None,
        }
    }
}

/// A verdict for any of the supported groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    C24(ValueClass),
    Low(LowRankVerdict),
}

impl Classification {
    pub fn is_member(&self) -> bool {
        match self {
            Self::C24(c) => c.is_member(),
            Self::Low(c) => c.is_member(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::C24(c) => c.tag(),
            Self::Low(c) => c.tag(),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::C24(c) => c.fmt(f),
            Self::Low(c) => c.fmt(f),
        }
    }
}

pub fn classify(
    group: Group,
    v: &BigInt,
    policy: &FactorPolicy,
) -> Result<Classification, ClassifyError> {
    Ok(match group {
        Group::C2x2 => Classification::Low(classify_c22(v)),
        Group::C2x3 => Classification::Low(classify_c23(v)),
        Group::C2x4 => Classification::C24(classify_c24(v, policy)?),
    })
}
