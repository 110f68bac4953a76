//! 2-adic valuation and residue helpers on arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::ClassifyError;

/// `v = 2^valuation * odd_part` with `odd_part` odd (and signed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoAdicSplit {
    pub valuation: u64,
    pub odd_part: BigInt,
}

pub fn two_adic_split(v: &BigInt) -> Result<TwoAdicSplit, ClassifyError> {
    let valuation = v.trailing_zeros().ok_or(ClassifyError::Zero)?;
    Ok(TwoAdicSplit {
        valuation,
        odd_part: v >> valuation,
    })
}

/// Non-negative remainder of `v` modulo `m`.
pub fn rem_u64(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("remainder is below the modulus")
}

/// `(v - r) / m`, for `v == r (mod m)`.
pub fn exact_quotient(v: &BigInt, r: i64, m: u64) -> BigInt {
    let shifted = v - r;
    debug_assert!(shifted.is_multiple_of(&BigInt::from(m)));
    shifted / m
}

/// 2-adic valuation of an `i128`, `None` for zero.
#[inline]
pub fn valuation_i128(v: i128) -> Option<u32> {
    if v.is_zero() {
        None
    } else {
        Some(v.trailing_zeros())
    }
}
