//! Parity identities of the rank-4 determinant.
//!
//! Determinants and the b/c/d/e tuples are integer polynomials in the
//! entries, so their residues modulo `2^w` depend only on the entries modulo
//! `2^w`. The mod-2 statements therefore only need the `2^16` parity vectors,
//! and the mod-4 relation between b, c, d and e only needs one four-entry
//! block modulo 4 (enumerated here modulo 16, which is `2^16` cases as well).

use std::time::Instant;

use super::{Counterexample, LemmaReport};
use crate::determinant::d2_i128;
use crate::transform::{butterfly_i64, product_i128};

const VECTORS: u64 = 1 << 16;

fn det_i64(values: &[i64]) -> i128 {
    let mut sums = values.to_vec();
    butterfly_i64(&mut sums);
    product_i128(&sums)
}

fn bits(v: u32) -> [i64; 16] {
    std::array::from_fn(|j| i64::from((v >> j) & 1))
}

/// `(b, c, d, e)` of a rank-4 tuple.
pub fn bcde_i64(a: &[i64; 16]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        let s = a[i] + a[i + 8];
        let t = a[i + 4] + a[i + 12];
        let u = a[i] - a[i + 8];
        let w = a[i + 4] - a[i + 12];
        out[0][i] = s + t;
        out[1][i] = s - t;
        out[2][i] = u + w;
        out[3][i] = u - w;
    }
    out
}

fn parity(v: i128) -> i128 {
    v.rem_euclid(2)
}

fn report(
    id: &str,
    window: u64,
    modulus: u64,
    sufficiency: &str,
    cases: u64,
    counterexample: Option<Counterexample>,
    started: Instant,
) -> LemmaReport {
    LemmaReport {
        lemma_id: id.to_string(),
        window,
        cases_enumerated: cases,
        expected_cases: VECTORS,
        modulus,
        sufficiency: sufficiency.to_string(),
        counterexample,
        elapsed: started.elapsed(),
    }
}

/// `D4 ≡ D3(sums) ≡ D3(diffs) ≡ D2(b) ≡ D2(c) ≡ D2(d) ≡ D2(e) (mod 2)`.
pub fn verify_parity_congruences() -> LemmaReport {
    let started = Instant::now();
    let mut cases = 0;
    let mut counterexample = None;
    for v in 0..VECTORS as u32 {
        cases += 1;
        let a = bits(v);
        let d4 = parity(det_i64(&a));
        let sums: Vec<i64> = (0..8).map(|j| a[j] + a[j + 8]).collect();
        let diffs: Vec<i64> = (0..8).map(|j| a[j] - a[j + 8]).collect();
        let mut named = vec![
            ("D3(sums)", parity(det_i64(&sums))),
            ("D3(diffs)", parity(det_i64(&diffs))),
        ];
        for (name, quad) in ["D2(b)", "D2(c)", "D2(d)", "D2(e)"]
            .into_iter()
            .zip(bcde_i64(&a))
        {
            named.push((name, parity(d2_i128(quad))));
        }
        if let Some((name, p)) = named.into_iter().find(|&(_, p)| p != d4) {
            counterexample = Some(Counterexample {
                clause: "2.3".into(),
                input: a.to_vec(),
                detail: format!("D4 ≡ {d4} but {name} ≡ {p} (mod 2)"),
            });
            break;
        }
    }
    report(
        "2.3",
        2,
        2,
        "determinants mod 2 depend only on entries mod 2",
        cases,
        counterexample,
        started,
    )
}

/// `D4` is even exactly when `b0 + b2 ≡ b1 + b3 (mod 2)`.
pub fn verify_even_criterion() -> LemmaReport {
    let started = Instant::now();
    let mut cases = 0;
    let mut counterexample = None;
    for v in 0..VECTORS as u32 {
        cases += 1;
        let a = bits(v);
        let even = parity(det_i64(&a)) == 0;
        let b = bcde_i64(&a)[0];
        let balanced = (b[0] + b[2] - b[1] - b[3]).rem_euclid(2) == 0;
        if even != balanced {
            counterexample = Some(Counterexample {
                clause: "2.4".into(),
                input: a.to_vec(),
                detail: format!("D4 even = {even}, b0 + b2 ≡ b1 + b3 = {balanced}"),
            });
            break;
        }
    }
    report(
        "2.4",
        2,
        2,
        "determinants and b mod 2 depend only on entries mod 2",
        cases,
        counterexample,
        started,
    )
}

/// `b_i ≡ c_i ≡ d_i ≡ e_i (mod 2)` and `b_i + c_i + d_i + e_i ≡ 0 (mod 4)`.
/// Position `i` only involves `a_i, a_{i+4}, a_{i+8}, a_{i+12}` through the
/// same linear forms, so one block modulo 16 covers every position.
pub fn verify_bcde_congruences() -> LemmaReport {
    let started = Instant::now();
    let mut cases = 0;
    let mut counterexample = None;
    'outer: for v in 0..VECTORS {
        cases += 1;
        let block: [i64; 4] = std::array::from_fn(|j| ((v >> (4 * j)) & 15) as i64);
        let mut a = [0i64; 16];
        for (j, x) in block.iter().enumerate() {
            a[4 * j] = *x;
        }
        let q = bcde_i64(&a);
        let column = [q[0][0], q[1][0], q[2][0], q[3][0]];
        let same_parity = column.iter().all(|x| (x - column[0]).rem_euclid(2) == 0);
        let sum = column.iter().sum::<i64>().rem_euclid(4);
        if !same_parity || sum != 0 {
            counterexample = Some(Counterexample {
                clause: "2.2".into(),
                input: block.to_vec(),
                detail: format!("(b, c, d, e) = {column:?}, sum mod 4 = {sum}"),
            });
            break 'outer;
        }
    }
    report(
        "2.2",
        16,
        4,
        "b, c, d, e are linear, so mod 4 they depend only on entries mod 4",
        cases,
        counterexample,
        started,
    )
}
