//! Walsh-Hadamard (character) transform over C2^n.
//!
//! Component `chi` of the transform is the character sum
//! `sum_j (-1)^popcount(j & chi) * x_j`; the group determinant is the
//! product of all components.

use std::ops::{Add, Sub};

use num_bigint::BigInt;

use crate::assignment::Assignment;

/// In-place butterfly: `n` stages of paired add/sub.
pub fn butterfly<T>(values: &mut [T])
where
    T: Clone + for<'a> Add<&'a T, Output = T> + for<'a> Sub<&'a T, Output = T>,
{
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let lo = values[i].clone();
                let hi = values[i + half].clone();
                values[i] = lo.clone() + &hi;
                values[i + half] = lo - &hi;
            }
        }
        half *= 2;
    }
}

/// Butterfly on machine integers; the caller bounds the entries so that
/// no stage overflows (`|x| * len` must fit).
pub fn butterfly_i64(values: &mut [i64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (lo, hi) = (values[i], values[i + half]);
                values[i] = lo + hi;
                values[i + half] = lo - hi;
            }
        }
        half *= 2;
    }
}

/// Character sums of `a`, indexed by character.
pub fn character_transform(a: &Assignment) -> Vec<BigInt> {
    let mut values = a.values().to_vec();
    butterfly(&mut values);
    values
}

/// Sign of `x_j` in the character sum for `chi`.
#[inline]
pub fn character_sign(j: usize, chi: usize) -> i64 {
    if (j & chi).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Whether the product of `2^rank` character sums of entries bounded by
/// `max_abs` provably fits in an `i128` (and every sum in an `i64`).
pub fn fits_i128(rank: u32, max_abs: u64) -> bool {
    if rank > 6 {
        return false;
    }
    let sum_bound = (max_abs as u128) << rank;
    if sum_bound > i64::MAX as u128 {
        return false;
    }
    let mut acc: u128 = 1;
    for _ in 0..(1u32 << rank) {
        match acc.checked_mul(sum_bound) {
            Some(next) => acc = next,
            None => return false,
        }
    }
    acc <= i128::MAX as u128
}

/// Product of character sums in `i128`. Only valid when [`fits_i128`]
/// holds for the entries the sums came from.
#[inline]
pub fn product_i128(sums: &[i64]) -> i128 {
    let mut acc: i128 = 1;
    for &s in sums {
        if s == 0 {
            return 0;
        }
        acc *= s as i128;
    }
    acc
}
