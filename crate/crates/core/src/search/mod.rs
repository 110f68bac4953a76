//! Exhaustive sweeps over boxes `alphabet^(2^n)`.
//!
//! Tuples are numbered in mixed radix (coordinate 0 is the least significant
//! digit) and cut into fixed-size chunks. A worker decodes the first tuple of
//! its chunk, runs the full butterfly once, and from then on only patches the
//! character sums for the coordinates that the odometer step changed. Each
//! chunk produces a small map from value to `(count, first index)`; maps are
//! merged by a single writer, which is also the only thing touching disk.
//! Classification and the assertions run once per distinct value, since they
//! depend only on the value.

pub mod checkpoint;
pub mod coverage;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::mpsc;

use num_bigint::BigInt;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::classify::{classify, Group};
use crate::error::SweepError;
use crate::factor::FactorPolicy;
use crate::transform::{butterfly_i64, character_sign, fits_i128, product_i128};
use checkpoint::{CheckpointWriter, ChunkRecord, Header};

pub use coverage::{a_set_oracle, coverage_check, member_values, CoverageReport};

/// Which properties of each distinct value the sweep asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepAssertions {
    /// The classifier for the sweep's rank says member.
    pub member_check: bool,
    /// Rank 4: nonzero even values have valuation 16, 24 or at least 26.
    pub valuation_gap_check: bool,
    /// Odd values are `1 mod 2^n`.
    pub odd_residue_check: bool,
    /// Rank 4: valuation-16 values have odd part `1 mod 4`.
    pub v16_odd_part_check: bool,
}

impl Default for SweepAssertions {
    fn default() -> Self {
        Self {
            member_check: true,
            valuation_gap_check: true,
            odd_residue_check: true,
            v16_odd_part_check: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub rank: u32,
    pub alphabet: Vec<i64>,
    pub chunk_size: u64,
    pub workers: usize,
    /// Result file; the checkpoint lives next to it as `<output>.ckpt`.
    pub output: Option<PathBuf>,
    /// Continue from the checkpoint of an earlier run with the same rank,
    /// alphabet and chunk size, if there is one.
    pub resume: bool,
    /// Stop after this many new chunks (the run is then incomplete).
    pub chunk_limit: Option<u64>,
    pub assertions: SweepAssertions,
    pub policy: FactorPolicy,
}

impl SweepConfig {
    pub fn new(rank: u32, alphabet: Vec<i64>) -> Self {
        Self {
            rank,
            alphabet,
            chunk_size: 1 << 16,
            workers: rayon::current_num_threads(),
            output: None,
            resume: false,
            chunk_limit: None,
            assertions: SweepAssertions::default(),
            policy: FactorPolicy::default(),
        }
    }

    fn arity(&self) -> usize {
        1 << self.rank
    }

    /// `|alphabet|^(2^n)`, checking the configuration on the way.
    pub fn total(&self) -> Result<u64, SweepError> {
        let bad = |m: &str| Err(SweepError::Config(m.to_string()));
        if !(2..=4).contains(&self.rank) {
            return bad("rank must be 2, 3 or 4");
        }
        if self.alphabet.is_empty() {
            return bad("alphabet is empty");
        }
        if self.chunk_size == 0 {
            return bad("chunk size must be positive");
        }
        if self.workers == 0 {
            return bad("worker count must be positive");
        }
        let max_abs = self
            .alphabet
            .iter()
            .map(|a| a.unsigned_abs())
            .max()
            .unwrap_or(0);
        if !fits_i128(self.rank, max_abs) {
            return bad("alphabet entries too large for exact 128-bit evaluation");
        }
        (self.alphabet.len() as u64)
            .checked_pow(self.arity() as u32)
            .ok_or_else(|| SweepError::Config("box size exceeds a 64-bit index".into()))
    }

    /// The tuple with mixed-radix index `index`.
    pub fn decode(&self, index: u64) -> Vec<i64> {
        let base = self.alphabet.len() as u64;
        let mut rest = index;
        (0..self.arity())
            .map(|_| {
                let d = rest % base;
                rest /= base;
                self.alphabet[d as usize]
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueStats {
    pub count: u64,
    pub example_index: u64,
    pub class_tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tuple: Vec<i64>,
    pub value: String,
    pub assertion: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub distinct_values: BTreeMap<i128, ValueStats>,
    pub violations: Vec<Violation>,
    /// Values the classifier could not decide (for instance an odd part too
    /// hard to factor); not counted as violations.
    pub flagged: Vec<(i128, String)>,
    pub chunks_completed: u64,
    pub chunks_total: u64,
    pub total_enumerated: u64,
}

impl SweepResult {
    pub fn complete(&self) -> bool {
        self.chunks_completed == self.chunks_total
    }
}

type ChunkMap = FxHashMap<i128, (u64, u64)>;

/// Enumerates indices `start..end` incrementally.
fn run_chunk(config: &SweepConfig, signs: &[Vec<i64>], start: u64, end: u64) -> ChunkMap {
    let base = config.alphabet.len();
    let arity = config.arity();
    let mut digits = vec![0usize; arity];
    let mut rest = start;
    for d in digits.iter_mut() {
        *d = (rest % base as u64) as usize;
        rest /= base as u64;
    }
    let mut sums: Vec<i64> = digits.iter().map(|&d| config.alphabet[d]).collect();
    butterfly_i64(&mut sums);

    let mut map = ChunkMap::default();
    let mut index = start;
    loop {
        let v = product_i128(&sums);
        map.entry(v).or_insert((0, index)).0 += 1;
        index += 1;
        if index == end {
            break;
        }
        // odometer step, patching the sums for every digit that moves
        let mut j = 0;
        loop {
            let old = config.alphabet[digits[j]];
            digits[j] += 1;
            let wrapped = digits[j] == base;
            if wrapped {
                digits[j] = 0;
            }
            let delta = config.alphabet[digits[j]] - old;
            if delta != 0 {
                for (s, sign) in sums.iter_mut().zip(&signs[j]) {
                    *s += sign * delta;
                }
            }
            if !wrapped {
                break;
            }
            j += 1;
        }
    }
    map
}

fn to_record(chunk: u64, map: &ChunkMap) -> ChunkRecord {
    let mut values: Vec<(String, u64, u64)> = map
        .iter()
        .map(|(v, &(count, idx))| (v.to_string(), count, idx))
        .collect();
    values.sort();
    ChunkRecord { chunk, values }
}

fn merge_into(total: &mut BTreeMap<i128, (u64, u64)>, v: i128, count: u64, idx: u64) {
    let e = total.entry(v).or_insert((0, idx));
    e.0 += count;
    e.1 = e.1.min(idx);
}

/// Assertion failures of a single value, in a fixed order.
fn failed_assertions(
    rank: u32,
    v: i128,
    member: bool,
    flags: SweepAssertions,
) -> Vec<&'static str> {
    let mut out = Vec::new();
    if flags.member_check && !member {
        out.push("member_check");
    }
    if v != 0 {
        let val = v.trailing_zeros();
        let odd = v >> val;
        if flags.odd_residue_check && val == 0 && v.rem_euclid(1 << rank) != 1 {
            out.push("odd_residue_check");
        }
        if rank == 4 {
            if flags.valuation_gap_check && val > 0 && !matches!(val, 16 | 24 | 26..) {
                out.push("valuation_gap_check");
            }
            if flags.v16_odd_part_check && val == 16 && odd.rem_euclid(4) != 1 {
                out.push("v16_odd_part_check");
            }
        }
    }
    out
}

/// Runs (or continues) a sweep.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult, SweepError> {
    let total = config.total()?;
    let chunks_total = total.div_ceil(config.chunk_size);
    let header = Header {
        config_hash: checkpoint::config_hash(config.rank, &config.alphabet, config.chunk_size),
        rank: config.rank,
        alphabet: config.alphabet.clone(),
        chunk_size: config.chunk_size,
        chunks: chunks_total,
    };
    if config.resume && config.output.is_none() {
        return Err(SweepError::Config("resuming needs an output path".into()));
    }
    let ckpt = config.output.as_deref().map(checkpoint::checkpoint_path);

    let mut merged: BTreeMap<i128, (u64, u64)> = BTreeMap::new();
    let mut done: BTreeSet<u64> = BTreeSet::new();
    let mut writer = None;
    if let Some(path) = &ckpt {
        let resumable = config.resume && path.exists();
        let previous = if resumable {
            checkpoint::load(path, &header)?
        } else {
            Vec::new()
        };
        writer = Some(if resumable && std::fs::metadata(path)?.len() > 0 {
            CheckpointWriter::append(path)?
        } else {
            CheckpointWriter::create(path, &header)?
        });
        for record in previous {
            if !done.insert(record.chunk) {
                continue;
            }
            for (v, count, idx) in record.values {
                let v: i128 = v.parse().map_err(|_| SweepError::Checkpoint {
                    path: path.display().to_string(),
                    reason: format!("bad value {v:?}"),
                })?;
                merge_into(&mut merged, v, count, idx);
            }
        }
    }

    let mut todo: Vec<u64> = (0..chunks_total).filter(|c| !done.contains(c)).collect();
    if let Some(limit) = config.chunk_limit {
        todo.truncate(limit as usize);
    }

    let arity = config.arity();
    let signs: Vec<Vec<i64>> = (0..arity)
        .map(|j| (0..arity).map(|chi| character_sign(j, chi)).collect())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| SweepError::Config(e.to_string()))?;

    let (tx, rx) = mpsc::sync_channel::<(u64, ChunkMap)>(2 * config.workers);
    let write_result = std::thread::scope(|scope| {
        let merged = &mut merged;
        let done = &mut done;
        let writer_thread = scope.spawn(move || -> Result<(), SweepError> {
            for (chunk, map) in rx {
                if let Some(w) = writer.as_mut() {
                    w.write(&to_record(chunk, &map))?;
                }
                for (v, (count, idx)) in map {
                    merge_into(merged, v, count, idx);
                }
                done.insert(chunk);
            }
            Ok(())
        });
        pool.install(|| {
            todo.par_iter().for_each_with(tx, |tx, &chunk| {
                let start = chunk * config.chunk_size;
                let end = (start + config.chunk_size).min(total);
                let map = run_chunk(config, &signs, start, end);
                // a failed send means the writer already stopped on an error
                let _ = tx.send((chunk, map));
            });
        });
        writer_thread.join().expect("writer thread panicked")
    });
    write_result?;

    let total_enumerated = done
        .iter()
        .map(|&c| (total - c * config.chunk_size).min(config.chunk_size))
        .sum();
    let result = finish(
        config,
        merged,
        done.len() as u64,
        chunks_total,
        total_enumerated,
    );
    if let (Some(out), true) = (&config.output, result.complete()) {
        checkpoint::write_atomically(out, &render(config, &header, &result))?;
    }
    Ok(result)
}

fn finish(
    config: &SweepConfig,
    merged: BTreeMap<i128, (u64, u64)>,
    chunks_completed: u64,
    chunks_total: u64,
    total_enumerated: u64,
) -> SweepResult {
    let group = Group::from_rank(config.rank).expect("validated rank");
    let entries: Vec<(i128, (u64, u64))> = merged.into_iter().collect();
    let classified: Vec<_> = entries
        .par_iter()
        .map(|&(v, (count, idx))| {
            let verdict = classify(group, &BigInt::from(v), &config.policy);
            (v, count, idx, verdict)
        })
        .collect();

    let mut result = SweepResult {
        distinct_values: BTreeMap::new(),
        violations: Vec::new(),
        flagged: Vec::new(),
        chunks_completed,
        chunks_total,
        total_enumerated,
    };
    for (v, count, idx, verdict) in classified {
        let class_tag = match &verdict {
            Ok(c) => c.tag().to_string(),
            Err(e) => {
                result.flagged.push((v, e.to_string()));
                "Undecided".to_string()
            }
        };
        // an undecided value is only flagged, so treat it as a member here
        let member = verdict.as_ref().map_or(true, |c| c.is_member());
        for assertion in failed_assertions(config.rank, v, member, config.assertions) {
            result.violations.push(Violation {
                tuple: config.decode(idx),
                value: v.to_string(),
                assertion: assertion.to_string(),
            });
        }
        result.distinct_values.insert(
            v,
            ValueStats {
                count,
                example_index: idx,
                class_tag,
            },
        );
    }
    result
}

#[derive(Serialize)]
struct ResultHeader<'a> {
    kind: &'static str,
    config_hash: &'a str,
    rank: u32,
    alphabet: &'a [i64],
    total_enumerated: u64,
    distinct: usize,
    violations: usize,
    flagged: usize,
}

#[derive(Serialize)]
struct ValueLine<'a> {
    kind: &'static str,
    value: String,
    count: u64,
    example_tuple: Vec<i64>,
    class_tag: &'a str,
}

/// The deterministic result file: a header, one line per distinct value in
/// increasing order, then violations and flagged values.
pub fn render(config: &SweepConfig, header: &Header, result: &SweepResult) -> String {
    let mut out = String::new();
    let line = |out: &mut String, v: serde_json::Value| {
        writeln!(out, "{v}").expect("writing to a string");
    };
    let head = ResultHeader {
        kind: "header",
        config_hash: &header.config_hash,
        rank: config.rank,
        alphabet: &config.alphabet,
        total_enumerated: result.total_enumerated,
        distinct: result.distinct_values.len(),
        violations: result.violations.len(),
        flagged: result.flagged.len(),
    };
    line(&mut out, serde_json::to_value(head).expect("serializable"));
    for (v, stats) in &result.distinct_values {
        let record = ValueLine {
            kind: "value",
            value: v.to_string(),
            count: stats.count,
            example_tuple: config.decode(stats.example_index),
            class_tag: &stats.class_tag,
        };
        line(
            &mut out,
            serde_json::to_value(record).expect("serializable"),
        );
    }
    for violation in &result.violations {
        let mut v = serde_json::to_value(violation).expect("serializable");
        v["kind"] = "violation".into();
        line(&mut out, v);
    }
    for (v, reason) in &result.flagged {
        line(
            &mut out,
            serde_json::json!({"kind": "flagged", "value": v.to_string(), "reason": reason}),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::Assignment;
    use crate::determinant::det_group;

    fn small(rank: u32, alphabet: &[i64], chunk: u64, workers: usize) -> SweepResult {
        let mut c = SweepConfig::new(rank, alphabet.to_vec());
        c.chunk_size = chunk;
        c.workers = workers;
        sweep(&c).unwrap()
    }

    #[test]
    fn incremental_values_match_direct_evaluation() {
        let mut c = SweepConfig::new(3, vec![-1, 0, 2]);
        c.chunk_size = 1000;
        let signs: Vec<Vec<i64>> = (0..8)
            .map(|j| (0..8).map(|chi| character_sign(j, chi)).collect())
            .collect();
        let map = run_chunk(&c, &signs, 123, 1123);
        let mut direct = ChunkMap::default();
        for i in 123..1123 {
            let a = Assignment::from_i64(3, &c.decode(i)).unwrap();
            let v: i128 = det_group(&a).try_into().unwrap();
            direct.entry(v).or_insert((0, i)).0 += 1;
        }
        assert_eq!(map, direct);
    }

    #[test]
    fn rank_two_ternary() {
        let r = small(2, &[-1, 0, 1], 10, 2);
        assert!(r.complete());
        assert_eq!(r.total_enumerated, 81);
        assert!(r.violations.is_empty());
        for v in [0, 1, -3] {
            assert!(r.distinct_values.contains_key(&v), "{v}");
        }
        assert_eq!(r.distinct_values.values().map(|s| s.count).sum::<u64>(), 81);
    }

    #[test]
    fn independent_of_chunking_and_workers() {
        let a = small(3, &[0, 1, 2], 7, 1);
        let b = small(3, &[0, 1, 2], 1000, 3);
        assert_eq!(a.distinct_values, b.distinct_values);
        assert_eq!(a.total_enumerated, 6561);
    }

    #[test]
    fn rank_four_binary_is_sound() {
        let r = small(4, &[0, 1], 4096, 2);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.distinct_values[&1].class_tag, "Odd16m1");
    }

    #[test]
    fn assertions_fire_on_bad_values() {
        let all = SweepAssertions::default();
        assert!(failed_assertions(4, 1, true, all).is_empty());
        assert_eq!(failed_assertions(4, 3, true, all), ["odd_residue_check"]);
        assert_eq!(
            failed_assertions(4, 1 << 20, true, all),
            ["valuation_gap_check"]
        );
        assert_eq!(
            failed_assertions(4, 3 << 16, true, all),
            ["v16_odd_part_check"]
        );
        assert_eq!(failed_assertions(4, 0, false, all), ["member_check"]);
        assert!(failed_assertions(2, 1 << 20, true, all).is_empty());
    }

    #[test]
    fn bad_configs() {
        for c in [
            SweepConfig::new(5, vec![0, 1]),
            SweepConfig::new(4, vec![]),
            SweepConfig::new(4, vec![0, 100]),
            SweepConfig {
                chunk_size: 0,
                ..SweepConfig::new(2, vec![0])
            },
        ] {
            assert!(matches!(sweep(&c), Err(SweepError::Config(_))));
        }
    }
}
