//! Variable assignments for the group matrix of C2^n.
//!
//! Entry `j` of an assignment is the value of the variable attached to the
//! group element whose coordinates are the binary digits of `j`
//! (least significant digit first). The group operation is bitwise XOR.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::DetError;

/// Largest rank accepted by default.
pub const DEFAULT_MAX_RANK: u32 = 8;

/// Largest rank the matrix oracle accepts by default.
pub const DEFAULT_ORACLE_MAX_RANK: u32 = 6;

/// Rank `n` together with the `2^n` integer values `x_0 .. x_{2^n - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    rank: u32,
    values: Vec<BigInt>,
}

impl Assignment {
    /// Builds an assignment under the default rank cap.
    pub fn new(rank: u32, values: Vec<BigInt>) -> Result<Self, DetError> {
        Self::with_max_rank(rank, values, DEFAULT_MAX_RANK)
    }

    pub fn with_max_rank(rank: u32, values: Vec<BigInt>, max_rank: u32) -> Result<Self, DetError> {
        if rank > max_rank || rank >= 32 {
            return Err(DetError::RankTooLarge {
                rank,
                max: max_rank.min(31),
            });
        }
        let expected = 1usize << rank;
        if values.len() != expected {
            return Err(DetError::LengthMismatch {
                rank,
                expected,
                got: values.len(),
            });
        }
        Ok(Self { rank, values })
    }

    pub fn from_i64(rank: u32, values: &[i64]) -> Result<Self, DetError> {
        Self::new(rank, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The identity of the group algebra: `x_0 = 1`, all other entries zero.
    pub fn delta(rank: u32) -> Result<Self, DetError> {
        if rank > DEFAULT_MAX_RANK {
            return Err(DetError::RankTooLarge {
                rank,
                max: DEFAULT_MAX_RANK,
            });
        }
        let mut values = vec![BigInt::zero(); 1usize << rank];
        values[0] = BigInt::from(1);
        Ok(Self { rank, values })
    }

    /// Builds a rank-`n` assignment without re-checking the cap; callers
    /// guarantee `values.len() == 2^rank`.
    pub(crate) fn from_parts(rank: u32, values: Vec<BigInt>) -> Self {
        debug_assert_eq!(values.len(), 1usize << rank);
        Self { rank, values }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Entries as `i64` when every one fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(i64::try_from)
            .collect::<Result<_, _>>()
            .ok()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
