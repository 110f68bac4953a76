//! Congruence statements about `D2(2k + e0, 2l + e1, 2m + e2, 2n + e3)`.
//!
//! When `e0 + e1 + e2 + e3` is even, `D2` splits into four linear factors
//!
//! ```text
//! (x0 + x2 - x1 - x3)(x0 + x2 + x1 + x3)(x0 - x2 - x1 + x3)(x0 - x2 + x1 - x3)
//! ```
//!
//! each of them even, so `D2 = 16 * L0 * L1 * L2 * L3` with every `Li` an
//! integer-coefficient linear form in `(k, l, m, n)`. Modulo `2^P` such a
//! form depends only on the inputs modulo `2^P`, which pins its valuation
//! (when below `P`) and the low bits of its odd part. Multiplying those
//! partial values gives the valuation and odd residue of `D2` for every
//! integer input in the same residue class, which is how a window of `2^P`
//! representatives proves a statement about all of `Z^4`. The representatives
//! are also evaluated exactly as a second, necessary check.

use std::time::Instant;

use rayon::prelude::*;

use super::{Counterexample, LemmaReport};
use crate::determinant::d2_i128;

pub type Params = [i64; 4];

/// An integer known modulo `2^bits`: its valuation when below `bits`, and
/// its odd part modulo `2^prec`. `capped` means the residue was zero, so only
/// the lower bound `val` is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub val: u32,
    pub capped: bool,
    pub odd: u64,
    pub prec: u32,
}

impl Dyadic {
    pub fn from_residue(x: i64, bits: u32) -> Self {
        let r = x.rem_euclid(1 << bits) as u64;
        if r == 0 {
            return Self {
                val: bits,
                capped: true,
                odd: 0,
                prec: 0,
            };
        }
        let val = r.trailing_zeros();
        Self {
            val,
            capped: false,
            odd: r >> val,
            prec: bits - val,
        }
    }

    pub fn times(self, other: Self) -> Self {
        let capped = self.capped || other.capped;
        let prec = if capped { 0 } else { self.prec.min(other.prec) };
        Self {
            val: self.val + other.val,
            capped,
            odd: self.odd.wrapping_mul(other.odd) & ((1u64 << prec) - 1),
            prec,
        }
    }

    /// Odd part modulo `2^bits`, if known that precisely.
    pub fn odd_mod(self, bits: u32) -> Option<u64> {
        (!self.capped && self.prec >= bits).then(|| self.odd & ((1 << bits) - 1))
    }
}

/// Result of checking one clause at one representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
    /// The window is too coarse to decide; treated as a failure.
    Undetermined(String),
}

impl Verdict {
    fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Holds, _) | (_, Verdict::Holds) => Verdict::Holds,
            (Verdict::Undetermined(a), _) | (_, Verdict::Undetermined(a)) => {
                Verdict::Undetermined(a)
            }
            (Verdict::Fails(a), Verdict::Fails(_)) => Verdict::Fails(a),
        }
    }
}

#[derive(Clone, Copy)]
pub enum Conclusion {
    /// `D2 ≡ residue(k, l, m, n) (mod modulus)`, for odd-valued families.
    ValueMod {
        modulus: i64,
        residue: fn(Params) -> i64,
    },
    /// `D2 = 2^valuation * u` with `u ≡ residue (mod modulus)`.
    Exact {
        valuation: u32,
        modulus: u64,
        residue: u64,
    },
    /// `D2 ∈ 2^v Z`.
    AtLeast(u32),
    /// `D2 ∈ 2^exact Z_odd ∪ 2^at_least Z`.
    ExactOrAtLeast { exact: u32, at_least: u32 },
    /// One bracket `L0 L1`, `L2 L3` is odd and `≡ odd (mod 8)`, the other is
    /// `4 s` with `s ≡ quarter (mod 4)`.
    BracketPair { odd: u64, quarter: u64 },
    /// A statement about the parameters alone, decided modulo 8.
    Holds(fn(Params) -> bool),
}

#[derive(Clone, Copy)]
pub struct Clause {
    pub id: &'static str,
    /// `D2` is evaluated at `(2k + e0, 2l + e1, 2m + e2, 2n + e3)`.
    pub offsets: [i64; 4],
    pub hypothesis: fn(Params) -> bool,
    pub conclusion: Conclusion,
}

pub fn arguments(offsets: [i64; 4], p: Params) -> [i64; 4] {
    std::array::from_fn(|i| 2 * p[i] + offsets[i])
}

/// The halved linear factors `L0..L3`; `None` when the offsets have odd sum.
pub fn linear_factors(offsets: [i64; 4], p: Params) -> Option<[i64; 4]> {
    if offsets.iter().sum::<i64>() % 2 != 0 {
        return None;
    }
    let [x0, x1, x2, x3] = arguments(offsets, p);
    Some([
        (x0 + x2 - x1 - x3) / 2,
        (x0 + x2 + x1 + x3) / 2,
        (x0 - x2 - x1 + x3) / 2,
        (x0 - x2 + x1 - x3) / 2,
    ])
}

fn exact_valuation(v: i128) -> Option<u32> {
    (v != 0).then(|| v.trailing_zeros())
}

fn describe(v: i128) -> String {
    match exact_valuation(v) {
        None => "0".into(),
        Some(e) => format!("2^{e} * {}", v >> e),
    }
}

fn check_exact(alpha: i128, d: Dyadic, valuation: u32, modulus: u64, residue: u64) -> Verdict {
    let mod_bits = modulus.trailing_zeros();
    let direct_ok = exact_valuation(alpha) == Some(valuation)
        && ((alpha >> valuation).rem_euclid(modulus as i128)) as u64 == residue;
    if !direct_ok {
        return Verdict::Fails(format!(
            "value {} not in 2^{valuation} ({modulus}a + {residue})",
            describe(alpha)
        ));
    }
    let val = 4 + d.val;
    if d.capped {
        return if val > valuation {
            Verdict::Fails(format!("valuation at least {val} in this class"))
        } else {
            Verdict::Undetermined(format!("valuation only known to be at least {val}"))
        };
    }
    if val != valuation {
        return Verdict::Fails(format!("class valuation {val}"));
    }
    match d.odd_mod(mod_bits) {
        None => Verdict::Undetermined(format!("odd part known only mod 2^{}", d.prec)),
        Some(r) if r == residue => Verdict::Holds,
        Some(r) => Verdict::Fails(format!("class odd part ≡ {r} (mod {modulus})")),
    }
}

fn check_at_least(alpha: i128, d: Dyadic, bound: u32) -> Verdict {
    if exact_valuation(alpha).is_some_and(|e| e < bound) {
        return Verdict::Fails(format!("value {} not in 2^{bound} Z", describe(alpha)));
    }
    let val = 4 + d.val;
    if val >= bound {
        Verdict::Holds
    } else if d.capped {
        Verdict::Undetermined(format!("valuation only known to be at least {val}"))
    } else {
        Verdict::Fails(format!("class valuation {val}"))
    }
}

fn check_pair_order(
    odd_side: (i128, Dyadic),
    quarter_side: (i128, Dyadic),
    odd: u64,
    quarter: u64,
) -> Verdict {
    let (odd_exact, odd_class) = odd_side;
    let (quarter_exact, quarter_class) = quarter_side;
    let direct_ok = odd_exact.rem_euclid(8) as u64 == odd
        && exact_valuation(quarter_exact) == Some(2)
        && ((quarter_exact >> 2).rem_euclid(4)) as u64 == quarter;
    if !direct_ok {
        return Verdict::Fails(format!(
            "brackets {odd_exact}, {quarter_exact} not ({odd} mod 8, 4({quarter} mod 4))"
        ));
    }
    if odd_class.capped || odd_class.val != 0 || quarter_class.capped || quarter_class.val != 2 {
        return Verdict::Fails("bracket valuations differ across the class".into());
    }
    match (odd_class.odd_mod(3), quarter_class.odd_mod(2)) {
        (Some(a), Some(b)) if a == odd && b == quarter => Verdict::Holds,
        (Some(_), Some(_)) => Verdict::Fails("bracket residues differ across the class".into()),
        _ => Verdict::Undetermined("bracket residues not pinned by the window".into()),
    }
}

impl Clause {
    /// Checks the clause at representative `p` of the residue class of
    /// `(k, l, m, n)` modulo `2^bits`.
    pub fn check(&self, p: Params, bits: u32) -> Verdict {
        if !(self.hypothesis)(p) {
            return Verdict::Holds;
        }
        let alpha = d2_i128(arguments(self.offsets, p));
        match self.conclusion {
            Conclusion::ValueMod { modulus, residue } => {
                debug_assert!(bits >= modulus.trailing_zeros());
                let want = residue(p).rem_euclid(modulus);
                let got = alpha.rem_euclid(modulus as i128) as i64;
                if got == want {
                    Verdict::Holds
                } else {
                    Verdict::Fails(format!(
                        "value {alpha} ≡ {got}, expected {want} (mod {modulus})"
                    ))
                }
            }
            Conclusion::Holds(f) => {
                if f(p) {
                    Verdict::Holds
                } else {
                    Verdict::Fails("statement false".into())
                }
            }
            conclusion => {
                let Some(l) = linear_factors(self.offsets, p) else {
                    return Verdict::Fails("offsets do not split into linear factors".into());
                };
                let product: i128 = l.iter().map(|&x| x as i128).product();
                if alpha != 16 * product {
                    return Verdict::Fails(format!(
                        "D2 = {alpha} but 16 L0 L1 L2 L3 = {}",
                        16 * product
                    ));
                }
                let ld = l.map(|x| Dyadic::from_residue(x, bits));
                let d = ld[0].times(ld[1]).times(ld[2]).times(ld[3]);
                match conclusion {
                    Conclusion::Exact {
                        valuation,
                        modulus,
                        residue,
                    } => check_exact(alpha, d, valuation, modulus, residue),
                    Conclusion::AtLeast(bound) => check_at_least(alpha, d, bound),
                    Conclusion::ExactOrAtLeast { exact, at_least } => {
                        check_exact(alpha, d, exact, 2, 1).or(check_at_least(alpha, d, at_least))
                    }
                    Conclusion::BracketPair { odd, quarter } => {
                        let b1 = (l[0] as i128 * l[1] as i128, ld[0].times(ld[1]));
                        let b2 = (l[2] as i128 * l[3] as i128, ld[2].times(ld[3]));
                        check_pair_order(b1, b2, odd, quarter)
                            .or(check_pair_order(b2, b1, odd, quarter))
                    }
                    Conclusion::ValueMod { .. } | Conclusion::Holds(_) => unreachable!(),
                }
            }
        }
    }
}

fn m4(v: i64) -> i64 {
    v.rem_euclid(4)
}

fn odd(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

/// `(2k + 2l + 1)(2m + 2n + 1) mod 8`
pub fn cross_residue([k, l, m, n]: Params) -> i64 {
    ((2 * k + 2 * l + 1) * (2 * m + 2 * n + 1)).rem_euclid(8)
}

fn condition_one([k, l, m, n]: Params, target: i64) -> bool {
    (m4(k + m) == target && m4(1 - l - n) == target)
        || (m4(k - m) == target && m4(2 - l + n) == target)
}

const EVEN: [i64; 4] = [0, 0, 0, 0];
const ODD: [i64; 4] = [1, 1, 1, 1];
const MIXED: [i64; 4] = [0, 1, 0, 1];

/// The registered clauses of one lemma.
pub fn clause_table(id: &str) -> Option<Vec<Clause>> {
    Some(match id {
        "3.2" => vec![
            Clause {
                id: "3.2(1)",
                offsets: [0, 0, 0, 1],
                hypothesis: |_| true,
                conclusion: Conclusion::ValueMod {
                    modulus: 16,
                    residue: |[k, l, m, _]| 8 * (k + l + m) + 1,
                },
            },
            Clause {
                id: "3.2(2)",
                offsets: [0, 1, 1, 1],
                hypothesis: |_| true,
                conclusion: Conclusion::ValueMod {
                    modulus: 16,
                    residue: |[k, ..]| 8 * k - 3,
                },
            },
        ],
        "3.3" => vec![
            Clause {
                id: "3.3(1)",
                offsets: EVEN,
                hypothesis: |[k, l, m, n]| odd(k + m - l - n) && !odd(k * m - l * n),
                conclusion: Conclusion::Exact {
                    valuation: 4,
                    modulus: 8,
                    residue: 1,
                },
            },
            Clause {
                id: "3.3(2)",
                offsets: EVEN,
                hypothesis: |[k, l, m, n]| odd(k + m - l - n) && odd(k * m - l * n),
                conclusion: Conclusion::Exact {
                    valuation: 4,
                    modulus: 8,
                    residue: 5,
                },
            },
            Clause {
                id: "3.3(3)",
                offsets: EVEN,
                hypothesis: |p| p.iter().all(|&x| !odd(x)) && m4(p[0] + p[2] - p[1] - p[3]) != 0,
                conclusion: Conclusion::Exact {
                    valuation: 8,
                    modulus: 4,
                    residue: 1,
                },
            },
            Clause {
                id: "3.3(4)",
                offsets: EVEN,
                hypothesis: |p| p.iter().all(|&x| odd(x)) && m4(p[0] + p[2] - p[1] - p[3]) != 0,
                conclusion: Conclusion::Exact {
                    valuation: 8,
                    modulus: 4,
                    residue: 3,
                },
            },
            Clause {
                id: "3.3(5)",
                offsets: EVEN,
                hypothesis: |p| {
                    p.iter().all(|&x| odd(x) == odd(p[0])) && m4(p[0] + p[2] - p[1] - p[3]) == 0
                },
                conclusion: Conclusion::AtLeast(12),
            },
            Clause {
                id: "3.3(6)",
                offsets: EVEN,
                hypothesis: |p| p.iter().filter(|&&x| !odd(x)).count() == 2,
                conclusion: Conclusion::AtLeast(10),
            },
        ],
        "3.4" => vec![
            Clause {
                id: "3.4(1)",
                offsets: MIXED,
                hypothesis: |p| !odd(p[0]) && !odd(p[2]) && condition_one(p, 0),
                conclusion: Conclusion::BracketPair { odd: 7, quarter: 3 },
            },
            Clause {
                id: "3.4(2)",
                offsets: MIXED,
                hypothesis: |p| !odd(p[0]) && !odd(p[2]) && condition_one(p, 2),
                conclusion: Conclusion::BracketPair { odd: 3, quarter: 1 },
            },
            Clause {
                id: "3.4(3)",
                offsets: MIXED,
                hypothesis: |p| odd(p[0]) && odd(p[2]) && condition_one(p, 0),
                conclusion: Conclusion::BracketPair { odd: 3, quarter: 3 },
            },
            Clause {
                id: "3.4(4)",
                offsets: MIXED,
                hypothesis: |p| odd(p[0]) && odd(p[2]) && condition_one(p, 2),
                conclusion: Conclusion::BracketPair { odd: 7, quarter: 1 },
            },
        ],
        "3.5" => vec![
            Clause {
                id: "3.5(1)",
                offsets: EVEN,
                hypothesis: |_| true,
                conclusion: Conclusion::Holds(|p @ [k, l, m, n]| {
                    (cross_residue(p) == 1) == (m4(k - m) == m4(n - l))
                }),
            },
            Clause {
                id: "3.5(2)",
                offsets: EVEN,
                hypothesis: |_| true,
                conclusion: Conclusion::Holds(|p @ [k, l, m, n]| {
                    (cross_residue(p) == 7) == (m4(k + m) == m4(-l - n - 1))
                }),
            },
            Clause {
                id: "3.5(3)",
                offsets: EVEN,
                hypothesis: |_| true,
                conclusion: Conclusion::Holds(|p @ [k, l, m, n]| {
                    (cross_residue(p) == 3) == (m4(k + m) == m4(1 - l - n))
                }),
            },
            Clause {
                id: "3.5(4)",
                offsets: EVEN,
                hypothesis: |_| true,
                conclusion: Conclusion::Holds(|p @ [k, l, m, n]| {
                    (cross_residue(p) == 5) == (m4(k - m) == m4(2 - l + n))
                }),
            },
        ],
        "3.6" => vec![
            Clause {
                id: "3.6(1) k+m≢l+n",
                offsets: EVEN,
                hypothesis: |[k, l, m, n]| odd(k + m - l - n),
                conclusion: Conclusion::Exact {
                    valuation: 4,
                    modulus: 2,
                    residue: 1,
                },
            },
            Clause {
                id: "3.6(1) k+m≡l+n",
                offsets: EVEN,
                hypothesis: |[k, l, m, n]| !odd(k + m - l - n),
                conclusion: Conclusion::ExactOrAtLeast {
                    exact: 8,
                    at_least: 10,
                },
            },
            Clause {
                id: "3.6(2) k+m≢l+n",
                offsets: ODD,
                hypothesis: |[k, l, m, n]| odd(k + m - l - n),
                conclusion: Conclusion::Exact {
                    valuation: 4,
                    modulus: 2,
                    residue: 1,
                },
            },
            Clause {
                id: "3.6(2) k+m≡l+n",
                offsets: ODD,
                hypothesis: |[k, l, m, n]| !odd(k + m - l - n),
                conclusion: Conclusion::AtLeast(9),
            },
            Clause {
                id: "3.6(3) k≢m",
                offsets: MIXED,
                hypothesis: |[k, _, m, _]| odd(k - m),
                conclusion: Conclusion::AtLeast(7),
            },
            Clause {
                id: "3.6(3) k≡m, ±1",
                offsets: MIXED,
                hypothesis: |p| !odd(p[0] - p[2]) && matches!(cross_residue(p), 1 | 7),
                conclusion: Conclusion::AtLeast(8),
            },
            Clause {
                id: "3.6(3) k≡m, ±3",
                offsets: MIXED,
                hypothesis: |p| !odd(p[0] - p[2]) && matches!(cross_residue(p), 3 | 5),
                conclusion: Conclusion::Exact {
                    valuation: 6,
                    modulus: 2,
                    residue: 1,
                },
            },
        ],
        _ => return None,
    })
}

/// Finest modulus at which each lemma asserts something about `D2`.
fn conclusion_modulus(id: &str) -> u64 {
    match id {
        "3.2" => 16,
        "3.3" => 1 << 12,
        "3.4" => 1 << 9,
        "3.5" => 8,
        "3.6" => 1 << 10,
        _ => 0,
    }
}

/// Checks every clause at every `(k, l, m, n)` in `[0, 2^bits)^4`. The first
/// failure in lexicographic order becomes the counterexample.
pub fn verify_clauses(lemma_id: &str, clauses: &[Clause], bits: u32) -> LemmaReport {
    let started = Instant::now();
    let window = 1i64 << bits;
    let failure = (0..window).into_par_iter().find_map_first(|k| {
        for l in 0..window {
            for m in 0..window {
                for n in 0..window {
                    let p = [k, l, m, n];
                    for clause in clauses {
                        match clause.check(p, bits) {
                            Verdict::Holds => {}
                            Verdict::Fails(detail) | Verdict::Undetermined(detail) => {
                                return Some(Counterexample {
                                    clause: clause.id.to_string(),
                                    input: p.to_vec(),
                                    detail,
                                });
                            }
                        }
                    }
                }
            }
        }
        None
    });
    // a failure stops the scan early; report the cases up to and including it
    let expected = (window as u64).pow(4);
    let cases = match &failure {
        None => expected,
        Some(c) => {
            let [k, l, m, n] = [c.input[0], c.input[1], c.input[2], c.input[3]];
            (((k * window + l) * window + m) * window + n + 1) as u64
        }
    };
    LemmaReport {
        lemma_id: lemma_id.to_string(),
        window: window as u64,
        cases_enumerated: cases,
        expected_cases: expected,
        modulus: conclusion_modulus(lemma_id),
        sufficiency: format!(
            "linear factors and values of D2 modulo {window} depend only on (k, l, m, n) modulo {window}"
        ),
        counterexample: failure,
        elapsed: started.elapsed(),
    }
}
