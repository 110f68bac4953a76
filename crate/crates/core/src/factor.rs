//! Factorization of odd integers below `2^128`.
//!
//! Trial division by small primes, then Brent's variant of Pollard rho in
//! Montgomery arithmetic. Primality is decided by Miller-Rabin with the
//! first thirteen prime bases, which is deterministic below
//! 3 317 044 064 679 887 385 961 981; above that bound the strong
//! Baillie-PSW test is used.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::FactorError;

/// Inputs wider than this many bits are refused.
pub const MAX_SUPPORTED_BITS: u64 = 128;

const TRIAL_LIMIT: u32 = 1 << 12;

/// Below this bound Miller-Rabin with the first 13 primes is deterministic.
const MR13_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Limits and randomness for [`factor_odd`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPolicy {
    /// Largest accepted bit length of `|u|`, at most 128.
    pub max_bits: u64,
    /// Seed for the rho starting points.
    pub seed: u64,
    /// Total rho iterations allowed for one factorization.
    pub rho_iterations: u64,
}

impl Default for FactorPolicy {
    fn default() -> Self {
        Self {
            max_bits: MAX_SUPPORTED_BITS,
            seed: 0x5eed,
            rho_iterations: 1 << 25,
        }
    }
}

impl FactorPolicy {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// `sign * prod p^e` for an odd integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddFactorization {
    pub sign: i8,
    /// Ascending odd primes with their exponents.
    pub prime_powers: Vec<(u128, u32)>,
}

impl OddFactorization {
    pub fn value(&self) -> BigInt {
        let abs = self
            .prime_powers
            .iter()
            .fold(BigInt::one(), |acc, &(p, e)| acc * BigInt::from(p).pow(e));
        if self.sign < 0 {
            -abs
        } else {
            abs
        }
    }

    /// Every positive divisor of `|u|`, ascending.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.prime_powers {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pk = d;
                next.push(pk);
                for _ in 0..e {
                    pk *= p;
                    next.push(pk);
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for OddFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        if self.prime_powers.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.prime_powers.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Complete prime factorization of an odd, nonzero `u`.
pub fn factor_odd(u: &BigInt, policy: &FactorPolicy) -> Result<OddFactorization, FactorError> {
    if u.sign() == Sign::NoSign {
        return Err(FactorError::Zero);
    }
    if u.is_even() {
        return Err(FactorError::Even(u.to_string()));
    }
    let cap = policy.max_bits.min(MAX_SUPPORTED_BITS);
    let bits = u.magnitude().bits();
    if bits > cap {
        return Err(FactorError::Infeasible(format!(
            "|{u}| has {bits} bits, the cap is {cap}"
        )));
    }
    let magnitude = u.magnitude().to_u128().expect("at most 128 bits");
    let primes = factor_u128(magnitude, policy)?;
    let mut prime_powers: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match prime_powers.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => prime_powers.push((p, 1)),
        }
    }
    Ok(OddFactorization {
        sign: if u.sign() == Sign::Minus { -1 } else { 1 },
        prime_powers,
    })
}

/// Prime factors of an odd `n`, ascending with multiplicity.
fn factor_u128(n: u128, policy: &FactorPolicy) -> Result<Vec<u128>, FactorError> {
    let mut out = Vec::new();
    let mut rest = n;
    for p in small_primes().iter().copied().skip(1) {
        let p = u128::from(p);
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            out.push(p);
            rest /= p;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut budget = policy.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m < u128::from(TRIAL_LIMIT) * u128::from(TRIAL_LIMIT) || is_prime_u128(m) {
            out.push(m);
            continue;
        }
        let d = loop {
            if budget == 0 {
                return Err(FactorError::Infeasible(format!(
                    "no factor of the composite {m} found within {} rho iterations",
                    policy.rho_iterations
                )));
            }
            if let Some(d) = pollard_brent(m, &mut rng, &mut budget) {
                break d;
            }
        };
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    Ok(out)
}

fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                for j in (i * i..=limit).step_by(i) {
                    sieve[j] = false;
                }
            }
            i += 1;
        }
        (0..=limit)
            .filter(|&i| sieve[i])
            .map(|i| i as u32)
            .collect()
    })
}

/// Primality of `n`: deterministic Miller-Rabin below [`MR13_BOUND`],
/// strong Baillie-PSW above it.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in small_primes().iter().take(64) {
        let p = u128::from(p);
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mont = Montgomery::new(n);
    if n < MR13_BOUND {
        return MR_BASES.iter().all(|&a| mont.strong_probable_prime(a));
    }
    mont.strong_probable_prime(2) && !is_square(n) && mont.strong_lucas()
}

fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Floor square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // the float estimate is within a few units; settle it exactly
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: u128, n: u128) -> i32 {
    let (mut a, mut n) = (a % n, n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Full 256-bit product as `(high, low)`.
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery arithmetic modulo an odd `n`, with `R = 2^128`.
struct Montgomery {
    n: u128,
    /// `-n^{-1} mod 2^128`
    neg_inv: u128,
    /// `R^2 mod n`
    r2: u128,
    /// `R mod n`, the Montgomery form of 1
    one: u128,
}

impl Montgomery {
    fn new(n: u128) -> Self {
        debug_assert!(n % 2 == 1 && n > 1);
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let one = (u128::MAX % n + 1) % n;
        let mut m = Self {
            n,
            neg_inv: inv.wrapping_neg(),
            r2: 0,
            one,
        };
        let mut r2 = one;
        for _ in 0..128 {
            r2 = m.add(r2, r2);
        }
        m.r2 = r2;
        m
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        let m = lo.wrapping_mul(self.neg_inv);
        let (mhi, mlo) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(mlo);
        let (s, o1) = hi.overflowing_add(mhi);
        let (s, o2) = s.overflowing_add(u128::from(carry));
        if o1 || o2 || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    /// `x / 2 mod n`; commutes with the Montgomery map.
    #[inline]
    fn half(&self, x: u128) -> u128 {
        if x.is_multiple_of(2) {
            x / 2
        } else {
            (x >> 1) + (self.n >> 1) + 1
        }
    }

    fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[cfg(test)]
    fn leave_mont(&self, a: u128) -> u128 {
        self.mul(a, 1)
    }

    fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.one;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn strong_probable_prime(&self, base: u128) -> bool {
        let n = self.n;
        if base.is_multiple_of(n) {
            return true;
        }
        let minus_one = n - self.one;
        let s = (n - 1).trailing_zeros();
        let d = (n - 1) >> s;
        let mut x = self.pow(self.to_mont(base), d);
        if x == self.one || x == minus_one {
            return true;
        }
        for _ in 1..s {
            x = self.mul(x, x);
            if x == minus_one {
                return true;
            }
        }
        false
    }

    /// Strong Lucas probable-prime test with Selfridge parameters
    /// (`P = 1`, `Q = (1 - D) / 4`). `n` must not be a perfect square.
    fn strong_lucas(&self) -> bool {
        let n = self.n;
        let mut d_abs: u128 = 5;
        let mut negative = false;
        loop {
            let residue = if negative { n - d_abs % n } else { d_abs % n };
            match jacobi(residue, n) {
                -1 => break,
                0 if !d_abs.is_multiple_of(n) => return false,
                _ => {}
            }
            d_abs += 2;
            negative = !negative;
        }
        let d_res = if negative { n - d_abs % n } else { d_abs % n };
        // Q = (1 - D) / 4
        let q_res = if negative {
            ((d_abs + 1) / 4) % n
        } else {
            n - ((d_abs - 1) / 4) % n
        };
        let dm = self.to_mont(d_res);
        let qm = self.to_mont(q_res % n);

        let Some(delta) = n.checked_add(1) else {
            return false;
        };
        let s = delta.trailing_zeros();
        let d = delta >> s;

        let mut u = self.one;
        let mut v = self.one;
        let mut qk = qm;
        let top = 127 - d.leading_zeros();
        for bit in (0..top).rev() {
            u = self.mul(u, v);
            v = self.sub(self.mul(v, v), self.add(qk, qk));
            qk = self.mul(qk, qk);
            if (d >> bit) & 1 == 1 {
                let nu = self.half(self.add(u, v));
                let nv = self.half(self.add(self.mul(dm, u), v));
                u = nu;
                v = nv;
                qk = self.mul(qk, qm);
            }
        }
        if u == 0 || v == 0 {
            return true;
        }
        for _ in 1..s {
            v = self.sub(self.mul(v, v), self.add(qk, qk));
            qk = self.mul(qk, qk);
            if v == 0 {
                return true;
            }
        }
        false
    }
}

/// One Brent rho attempt; a nontrivial factor of the odd composite `n`
/// or `None` when this starting point cycles without one.
fn pollard_brent(n: u128, rng: &mut ChaCha8Rng, budget: &mut u64) -> Option<u128> {
    const BATCH: u64 = 128;
    let mont = Montgomery::new(n);
    let c = rng.gen_range(1..n);
    let f = |x: u128| mont.add(mont.mul(x, x), c);
    let mut y = rng.gen_range(0..n);
    let mut x = y;
    let mut ys = y;
    let mut q = mont.one;
    let mut g = 1u128;
    let mut r: u64 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(y);
                q = mont.mul(q, x.abs_diff(y));
            }
            g = q.gcd(&n);
            k += steps;
        }
        let spent = r.saturating_mul(2);
        if spent >= *budget {
            *budget = 0;
            if g == 1 {
                return None;
            }
        } else {
            *budget -= spent;
        }
        r *= 2;
    }
    if g == n {
        // the batch overshot; replay it one step at a time
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn fac(u: i64) -> OddFactorization {
        factor_odd(&BigInt::from(u), &FactorPolicy::default()).unwrap()
    }

    #[test]
    fn small_examples() {
        let f = fac(15);
        assert_eq!(f.sign, 1);
        assert_eq!(f.prime_powers, vec![(3, 1), (5, 1)]);
        let f = fac(-9);
        assert_eq!(f.sign, -1);
        assert_eq!(f.prime_powers, vec![(3, 2)]);
        let f = fac(1);
        assert_eq!(f.sign, 1);
        assert!(f.prime_powers.is_empty());
        assert_eq!(f.to_string(), "1");
        assert_eq!(fac(-45).to_string(), "-3^2 * 5");
    }

    #[test]
    fn rejects_zero_even_and_oversized() {
        let p = FactorPolicy::default();
        assert_eq!(
            factor_odd(&BigInt::from(0), &p).unwrap_err(),
            FactorError::Zero
        );
        assert!(matches!(
            factor_odd(&BigInt::from(10), &p),
            Err(FactorError::Even(_))
        ));
        let huge = (BigInt::one() << 130) + 1;
        assert!(matches!(
            factor_odd(&huge, &p),
            Err(FactorError::Infeasible(_))
        ));
        let tight = FactorPolicy {
            max_bits: 10,
            ..FactorPolicy::default()
        };
        assert!(matches!(
            factor_odd(&BigInt::from(2049), &tight),
            Err(FactorError::Infeasible(_))
        ));
    }

    #[test]
    fn divisors_of_945() {
        // 945 = 3^3 * 5 * 7
        let f = fac(945);
        let divs = f.divisors();
        let brute: Vec<u128> = (1..=945u128).filter(|d| 945 % d == 0).collect();
        assert_eq!(divs, brute);
    }

    #[test]
    fn primality_against_sieve() {
        let limit = 200_000u128;
        let mut sieve = vec![true; limit as usize];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit as usize {
            if sieve[i] {
                for j in (i * i..limit as usize).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for n in 0..limit {
            assert_eq!(is_prime_u128(n), sieve[n as usize], "n = {n}");
        }
    }

    #[test]
    fn large_primes_and_pseudoprimes() {
        // 2^61 - 1, 2^89 - 1 and 2^127 - 1 are Mersenne primes
        assert!(is_prime_u128((1u128 << 61) - 1));
        assert!(is_prime_u128((1u128 << 89) - 1));
        assert!(is_prime_u128((1u128 << 127) - 1));
        // strong pseudoprime to bases 2..37 (Jaeschke / Zhang)
        assert!(!is_prime_u128(3_825_123_056_546_413_051));
        assert!(!is_prime_u128(318_665_857_834_031_151_167_461));
        // Carmichael number
        assert!(!is_prime_u128(561));
        // product of two 64-bit-ish primes above the MR13 bound
        let p = (1u128 << 61) - 1;
        let q = (1u128 << 64) - 59;
        assert!(!is_prime_u128(p * q));
        assert!(is_prime_u128(q));
    }

    #[test]
    fn montgomery_matches_bigint() {
        let moduli = [
            (1u128 << 127) - 1,
            u128::MAX,
            3_317_044_064_679_887_385_961_983,
            1_000_000_007,
            (1u128 << 100) + 277,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &moduli {
            let m = Montgomery::new(n);
            for _ in 0..200 {
                let a = rng.gen::<u128>() % n;
                let b = rng.gen::<u128>() % n;
                let got = m.leave_mont(m.mul(m.to_mont(a), m.to_mont(b)));
                let want = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(n);
                assert_eq!(BigUint::from(got), want);
                let h = m.leave_mont(m.half(m.to_mont(a)));
                assert_eq!(
                    (BigUint::from(h) * 2u32) % BigUint::from(n),
                    BigUint::from(a)
                );
            }
        }
    }

    #[test]
    fn factors_large_semiprimes() {
        let p = 4_294_967_291u128; // 2^32 - 5
        let q = 4_294_967_279u128; // 2^32 - 17
        let r = 1_000_000_007u128;
        let n = BigInt::from(p * q * r);
        let f = factor_odd(&n, &FactorPolicy::default()).unwrap();
        assert_eq!(f.prime_powers, vec![(r, 1), (q, 1), (p, 1)]);
        assert_eq!(f.value(), n);

        let sq = BigInt::from(p * p * 3);
        let f = factor_odd(&-sq.clone(), &FactorPolicy::default()).unwrap();
        assert_eq!(f.prime_powers, vec![(3, 1), (p, 2)]);
        assert_eq!(f.value(), -sq);
    }

    #[test]
    fn seed_does_not_change_the_result() {
        let n = BigInt::from(1_000_000_007u128 * 998_244_353u128 * 17);
        let a = factor_odd(&n, &FactorPolicy::with_seed(1)).unwrap();
        let b = factor_odd(&n, &FactorPolicy::with_seed(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exhausted_budget_is_reported_not_guessed() {
        // two primes near 2^62 need far more than 64 rho steps
        let p = (1u128 << 61) - 1;
        let q = 4_611_686_018_427_387_847u128;
        assert!(is_prime_u128(q));
        let policy = FactorPolicy {
            rho_iterations: 64,
            ..FactorPolicy::default()
        };
        assert!(matches!(
            factor_odd(&BigInt::from(p * q), &policy),
            Err(FactorError::Infeasible(_))
        ));
    }

    #[test]
    fn isqrt_is_floor() {
        for n in [0u128, 1, 2, 3, 4, 15, 16, 17, u64::MAX as u128, u128::MAX] {
            let r = isqrt(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        }
    }
}
