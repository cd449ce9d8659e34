//! The block language `U = V ∪ 0V ∪ lV` with `V = {0l, l0}^ℕ` and
//! `l = ⌈b/a⌉`, whose projections avoid the overlap when `b < a² - 2 - r`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::affine::{compose_unchecked, pi_shifts};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::rational::{self, Rational};
use crate::word::{Digit, DigitWord, EventuallyPeriodicWord};

use super::{check_unique, GoodRegion, UniquenessVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LanguageInfo {
    /// `⌈b/a⌉`
    pub l: u32,
    /// `l·a - b`, so that `b = l·a - r` with `0 <= r < a`.
    pub r: u32,
    /// `b < a²`
    pub countable_condition: bool,
    /// `b < a² - 2 - r`
    pub uncountable_condition: bool,
}

impl LanguageInfo {
    fn blocks(&self) -> [[Digit; 2]; 2] {
        [[0, self.l], [self.l, 0]]
    }

    /// All distinct length-`n` prefixes of words in `U`, sorted.
    pub fn prefixes(&self, n: usize) -> Vec<DigitWord> {
        let mut out = BTreeSet::new();
        let leads: [Vec<Digit>; 3] = [vec![], vec![0], vec![self.l]];
        for lead in &leads {
            let rest = n.saturating_sub(lead.len());
            let m = rest.div_ceil(2);
            for mask in 0u64..(1u64 << m) {
                let mut w = lead.clone();
                for i in 0..m {
                    w.extend_from_slice(&self.blocks()[((mask >> i) & 1) as usize]);
                }
                w.truncate(n);
                out.insert(DigitWord(w));
            }
        }
        out.into_iter().collect()
    }
}

pub fn thm42_language(p: &Params) -> LanguageInfo {
    let (a, b) = (p.a(), p.b());
    let l = b.div_ceil(a);
    let r = l * a - b;
    let a2 = (a as i64) * (a as i64);
    LanguageInfo {
        l,
        r,
        countable_condition: (b as i64) < a2,
        uncountable_condition: (b as i64) < a2 - 2 - r as i64,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageFailure {
    pub word: EventuallyPeriodicWord,
    pub verdict: UniquenessVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageReport {
    pub info: LanguageInfo,
    pub depth: usize,
    /// π of `(0,l)(l,0)^∞`, the largest value of a `U`-word starting with 0.
    #[serde(with = "rational::serde_str")]
    pub max_start_zero: Rational,
    /// π of `(l,0)(0,l)^∞`, the smallest value of a `U`-word starting with `l`.
    #[serde(with = "rational::serde_str")]
    pub min_start_l: Rational,
    pub max_below_inv_b: bool,
    pub min_above_inv_a: bool,
    pub words_checked: usize,
    pub words_unique: usize,
    /// Words some shift of which lands on a point `j/b` but never in the overlap.
    pub exceptional: usize,
    /// Words some shift of which lands in `[1/b, 1/a]`.
    pub overlap_failures: usize,
    pub first_failure: Option<LanguageFailure>,
}

impl LanguageReport {
    /// Every checked word outside the countable exceptional set is unique.
    pub fn all_unique_outside_exceptional(&self) -> bool {
        self.overlap_failures == 0
    }
}

fn block_word(blocks: &[[Digit; 2]; 2], mask: u64, len: usize) -> Vec<Digit> {
    (0..len)
        .flat_map(|i| blocks[((mask >> i) & 1) as usize])
        .collect()
}

/// Checks every eventually periodic `U`-word with
/// `|lead| + 2·(|P| + |Q|) <= depth`, where `P` and `Q` are the block-level
/// preperiod and period, and computes the exact extremal values.
pub fn verify_language_bounds(p: &Params, depth: usize, cap: u64) -> Result<LanguageReport> {
    let info = thm42_language(p);
    let l = info.l;
    let blocks = info.blocks();

    let max_blocks = depth / 2;
    let needed = 3u128 * (max_blocks as u128) * (1u128 << max_blocks.min(100));
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }

    let to_l0 = compose_unchecked(p, &[l, 0]).fixed_point();
    let to_0l = compose_unchecked(p, &[0, l]).fixed_point();
    let max_start_zero = compose_unchecked(p, &[0, l]).apply(&to_l0);
    let min_start_l = compose_unchecked(p, &[l, 0]).apply(&to_0l);

    let region = GoodRegion::new(*p);
    let leads: [Vec<Digit>; 3] = [vec![], vec![0], vec![l]];
    let mut report = LanguageReport {
        info,
        depth,
        max_below_inv_b: max_start_zero < p.inv_b(),
        min_above_inv_a: min_start_l > p.inv_a(),
        max_start_zero,
        min_start_l,
        words_checked: 0,
        words_unique: 0,
        exceptional: 0,
        overlap_failures: 0,
        first_failure: None,
    };
    for lead in &leads {
        let budget = depth.saturating_sub(lead.len()) / 2;
        for total in 1..=budget {
            for pre_len in 0..total {
                let per_len = total - pre_len;
                for pre_mask in 0..(1u64 << pre_len) {
                    for per_mask in 0..(1u64 << per_len) {
                        let mut pre = lead.clone();
                        pre.extend(block_word(&blocks, pre_mask, pre_len));
                        let per = block_word(&blocks, per_mask, per_len);
                        let word = EventuallyPeriodicWord::new(DigitWord(pre), DigitWord(per))?;
                        let shifts = pi_shifts(p, &word)?;
                        report.words_checked += 1;
                        let hits_overlap = shifts.iter().any(|v| region.in_overlap(v));
                        let hits_boundary = shifts.iter().any(|v| region.is_boundary_point(v));
                        if !hits_overlap && !hits_boundary {
                            report.words_unique += 1;
                            continue;
                        }
                        if hits_overlap {
                            report.overlap_failures += 1;
                        } else {
                            report.exceptional += 1;
                        }
                        if report.first_failure.is_none() {
                            let verdict = check_unique(p, &word)?;
                            report.first_failure = Some(LanguageFailure { word, verdict });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
