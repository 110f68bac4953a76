//! Exact group determinants `D_n` of C2^n.
//!
//! The evaluator multiplies the character sums produced by the butterfly
//! transform. [`det_matrix_oracle`] computes the same number as an ordinary
//! matrix determinant so the two can be checked against each other.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::assignment::{Assignment, DEFAULT_ORACLE_MAX_RANK};
use crate::error::DetError;
use crate::transform::{butterfly_i64, character_transform, fits_i128, product_i128};

/// `D_n(a)`: the product of all character sums of `a`.
pub fn det_group(a: &Assignment) -> BigInt {
    if let Some(small) = det_group_i128(a) {
        return BigInt::from(small);
    }
    character_transform(a)
        .into_iter()
        .fold(BigInt::one(), |acc, s| acc * s)
}

/// Fixed-width evaluation, available when the entries are small enough that
/// the product provably fits in an `i128`.
pub fn det_group_i128(a: &Assignment) -> Option<i128> {
    let max_abs = a.max_abs().to_u64()?;
    if !fits_i128(a.rank(), max_abs) {
        return None;
    }
    let mut sums = a.to_i64()?;
    butterfly_i64(&mut sums);
    Some(product_i128(&sums))
}

/// `det(x_{g xor h})` by fraction-free (Bareiss) elimination under the
/// default oracle rank cap.
pub fn det_matrix_oracle(a: &Assignment) -> Result<BigInt, DetError> {
    det_matrix_oracle_with_cap(a, DEFAULT_ORACLE_MAX_RANK)
}

pub fn det_matrix_oracle_with_cap(a: &Assignment, max_rank: u32) -> Result<BigInt, DetError> {
    if a.rank() > max_rank {
        return Err(DetError::OracleRankTooLarge {
            rank: a.rank(),
            max: max_rank,
        });
    }
    let size = a.len();
    let values = a.values();
    let mut m: Vec<Vec<BigInt>> = (0..size)
        .map(|g| (0..size).map(|h| values[g ^ h].clone()).collect())
        .collect();
    Ok(bareiss(&mut m))
}

/// Determinant of a square matrix, destroying it. Every division in the
/// update is exact.
fn bareiss(m: &mut [Vec<BigInt>]) -> BigInt {
    let size = m.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..size {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// One step of the recursive factorization: the rank-`n-1` assignments of
/// pairwise sums and differences `x_j +- x_{j + 2^(n-1)}`, whose
/// determinants multiply to `D_n(a)`.
pub fn factor_step(a: &Assignment) -> Result<(Assignment, Assignment), DetError> {
    if a.rank() == 0 {
        return Err(DetError::RankZero);
    }
    let half = a.len() / 2;
    let (lo, hi) = a.values().split_at(half);
    let plus = lo.iter().zip(hi).map(|(x, y)| x + y).collect();
    let minus = lo.iter().zip(hi).map(|(x, y)| x - y).collect();
    Ok((
        Assignment::from_parts(a.rank() - 1, plus),
        Assignment::from_parts(a.rank() - 1, minus),
    ))
}

/// Iterated factorization of `D_n` down to `D_1` leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTree {
    pub assignment: Assignment,
    pub value: BigInt,
    pub children: Option<Box<(FactorTree, FactorTree)>>,
}

impl FactorTree {
    /// Splits until rank 1; a rank-0 input is a single `D_0` leaf.
    pub fn build(a: &Assignment) -> Self {
        let value = det_group(a);
        let children = if a.rank() >= 2 {
            let (plus, minus) = factor_step(a).expect("rank >= 2");
            Some(Box::new((Self::build(&plus), Self::build(&minus))))
        } else {
            None
        };
        Self {
            assignment: a.clone(),
            value,
            children,
        }
    }

    pub fn leaves(&self) -> Vec<&FactorTree> {
        match &self.children {
            None => vec![self],
            Some(pair) => {
                let mut out = pair.0.leaves();
                out.extend(pair.1.leaves());
                out
            }
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(
            f,
            "{:indent$}D{}({})={}",
            "",
            self.assignment.rank(),
            self.assignment,
            self.value,
            indent = 2 * depth
        )?;
        if let Some(pair) = &self.children {
            pair.0.write_indented(f, depth + 1)?;
            pair.1.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for FactorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// Closed form of `D_2`:
/// `sum x_i^4 - 2 sum_{i<j} x_i^2 x_j^2 + 8 x_0 x_1 x_2 x_3`.
pub fn d2_closed_form(x0: &BigInt, x1: &BigInt, x2: &BigInt, x3: &BigInt) -> BigInt {
    let xs = [x0, x1, x2, x3];
    let sq: Vec<BigInt> = xs.iter().map(|x| *x * *x).collect();
    let mut total: BigInt = sq.iter().map(|s| s * s).sum();
    let mut cross = BigInt::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            cross += &sq[i] * &sq[j];
        }
    }
    total -= cross * 2;
    total += x0 * x1 * x2 * x3 * 8;
    total
}

/// `D_2` on machine integers via its two `D_1` factors; exact whenever the
/// entries are below `2^29` in absolute value.
#[inline]
pub fn d2_i128(x: [i64; 4]) -> i128 {
    let s0 = (x[0] + x[2]) as i128;
    let s1 = (x[1] + x[3]) as i128;
    let t0 = (x[0] - x[2]) as i128;
    let t1 = (x[1] - x[3]) as i128;
    (s0 * s0 - s1 * s1) * (t0 * t0 - t1 * t1)
}

/// The four derived 4-tuples of a rank-4 assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcdeQuad {
    pub b: [BigInt; 4],
    pub c: [BigInt; 4],
    pub d: [BigInt; 4],
    pub e: [BigInt; 4],
}

impl BcdeQuad {
    pub fn tuples(&self) -> [&[BigInt; 4]; 4] {
        [&self.b, &self.c, &self.d, &self.e]
    }

    /// `[D_2(b), D_2(c), D_2(d), D_2(e)]`.
    pub fn d2_values(&self) -> [BigInt; 4] {
        self.tuples()
            .map(|t| d2_closed_form(&t[0], &t[1], &t[2], &t[3]))
    }

    pub fn d2_product(&self) -> BigInt {
        self.d2_values().into_iter().product()
    }

    /// Position-wise: all four entries share a parity and sum to `0 mod 4`.
    pub fn congruences_hold(&self) -> bool {
        (0..4).all(|i| {
            let parity = |v: &BigInt| v.is_odd();
            let same = parity(&self.b[i]) == parity(&self.c[i])
                && parity(&self.c[i]) == parity(&self.d[i])
                && parity(&self.d[i]) == parity(&self.e[i]);
            let sum: BigInt = &self.b[i] + &self.c[i] + &self.d[i] + &self.e[i];
            same && (sum % 4u32).is_zero()
        })
    }
}

/// Split a rank-4 assignment `a_0..a_15` into `b, c, d, e` with
/// `D_4(a) = D_2(b) D_2(c) D_2(d) D_2(e)`.
pub fn bcde_decompose(a: &Assignment) -> Result<BcdeQuad, DetError> {
    if a.rank() != 4 {
        return Err(DetError::WrongRank {
            expected: 4,
            got: a.rank(),
        });
    }
    let v = a.values();
    let mk = |f: &dyn Fn(usize) -> BigInt| -> [BigInt; 4] { [f(0), f(1), f(2), f(3)] };
    let p = |i: usize| &v[i] + &v[i + 8];
    let q = |i: usize| &v[i + 4] + &v[i + 12];
    let r = |i: usize| &v[i] - &v[i + 8];
    let s = |i: usize| &v[i + 4] - &v[i + 12];
    Ok(BcdeQuad {
        b: mk(&|i| p(i) + q(i)),
        c: mk(&|i| p(i) - q(i)),
        d: mk(&|i| r(i) + s(i)),
        e: mk(&|i| r(i) - s(i)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asg(rank: u32, values: &[i64]) -> Assignment {
        Assignment::from_i64(rank, values).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn det_group_examples() {
        let mut v = vec![1i64; 16];
        v[0] = 2;
        assert_eq!(det_group(&asg(4, &v)), big(17));
        assert_eq!(det_group(&asg(2, &[1, 0, 0, 0])), big(1));
        assert_eq!(det_group(&asg(2, &[2, 1, 1, 1])), big(5));
        assert_eq!(det_group(&asg(0, &[-7])), big(-7));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(det_matrix_oracle(&asg(1, &[8, 3])).unwrap(), big(55));
        assert_eq!(det_matrix_oracle(&asg(4, &[0; 16])).unwrap(), big(0));
        let mut id = vec![0i64; 8];
        id[0] = 1;
        assert_eq!(det_matrix_oracle(&asg(3, &id)).unwrap(), big(1));
        // zero leading pivot forces a row swap
        assert_eq!(det_matrix_oracle(&asg(1, &[0, 3])).unwrap(), big(-9));
    }

    #[test]
    fn oracle_rank_cap() {
        let a = Assignment::new(7, vec![BigInt::zero(); 128]).unwrap();
        assert_eq!(
            det_matrix_oracle(&a).unwrap_err(),
            DetError::OracleRankTooLarge { rank: 7, max: 6 }
        );
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let a = asg(
            4,
            &[i64::MAX, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
        );
        assert!(det_group_i128(&a).is_none());
        assert_eq!(det_group(&a), det_matrix_oracle(&a).unwrap());
    }

    #[test]
    fn factor_step_examples() {
        let (p, m) = factor_step(&asg(1, &[8, 3])).unwrap();
        assert_eq!(p, asg(0, &[11]));
        assert_eq!(m, asg(0, &[5]));

        let mut v = vec![1i64; 16];
        v[0] = 2;
        let (p, m) = factor_step(&asg(4, &v)).unwrap();
        assert_eq!(p, asg(3, &[3, 2, 2, 2, 2, 2, 2, 2]));
        assert_eq!(m, asg(3, &[1, 0, 0, 0, 0, 0, 0, 0]));

        // m = 0: the delta vector splits into two deltas
        let delta = Assignment::delta(4).unwrap();
        let (p, m) = factor_step(&delta).unwrap();
        assert_eq!(p, Assignment::delta(3).unwrap());
        assert_eq!(m, Assignment::delta(3).unwrap());

        assert_eq!(factor_step(&asg(0, &[1])).unwrap_err(), DetError::RankZero);
    }

    #[test]
    fn d2_closed_form_examples() {
        assert_eq!(d2_closed_form(&big(3), &big(1), &big(0), &big(0)), big(64));
        assert_eq!(d2_closed_form(&big(1), &big(0), &big(0), &big(0)), big(1));
        assert_eq!(d2_closed_form(&big(2), &big(1), &big(1), &big(1)), big(5));
        assert_eq!(d2_i128([3, 1, 0, 0]), 64);
    }

    #[test]
    fn bcde_examples() {
        let q = bcde_decompose(&asg(4, &[1; 16])).unwrap();
        assert_eq!(q.b, [4, 4, 4, 4].map(big));
        assert_eq!(q.c, [0; 4].map(big));
        assert_eq!(q.d, [0; 4].map(big));
        assert_eq!(q.e, [0; 4].map(big));

        let q = bcde_decompose(&Assignment::delta(4).unwrap()).unwrap();
        for t in q.tuples() {
            assert_eq!(*t, [1, 0, 0, 0].map(big));
        }

        let f4 = [2, -1, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0];
        let q = bcde_decompose(&asg(4, &f4)).unwrap();
        assert_eq!(q.b, [-1, -1, 4, 0].map(big));
        for t in [&q.c, &q.d, &q.e] {
            assert_eq!(*t, [3, -1, 0, 0].map(big));
        }
        assert!(q.congruences_hold());
        assert_eq!(q.d2_product(), big(3) << 24);
        assert_eq!(det_group(&asg(4, &f4)), big(3) << 24);

        assert_eq!(
            bcde_decompose(&asg(2, &[1, 0, 0, 0])).unwrap_err(),
            DetError::WrongRank {
                expected: 4,
                got: 2
            }
        );
    }

    #[test]
    fn tree_leaves_multiply_to_root() {
        let t = FactorTree::build(&asg(2, &[3, 1, 0, 0]));
        let leaves = t.leaves();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|l| l.value == big(8)));
        assert_eq!(t.to_string(), "D2(3,1,0,0)=64\n  D1(3,1)=8\n  D1(3,1)=8\n");

        let mut v = vec![1i64; 16];
        v[0] = 2;
        let t = FactorTree::build(&asg(4, &v));
        assert_eq!(t.leaves().len(), 8);
        let product: BigInt = t.leaves().iter().map(|l| l.value.clone()).product();
        assert_eq!(product, t.value);

        let t = FactorTree::build(&asg(0, &[5]));
        assert_eq!(t.leaves().len(), 1);
        assert_eq!(t.to_string(), "D0(5)=5\n");
    }
}
