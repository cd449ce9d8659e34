use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rational::{self, Rational};
use crate::word::{Digit, DigitWord, EventuallyPeriodicWord};

use super::check_unique;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquePoint {
    pub word: EventuallyPeriodicWord,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// Lyndon words (primitive, strictly least among their rotations) of
/// length `1..=max_len` over `0..k`, in lexicographic order (Duval).
pub fn lyndon_words(k: Digit, max_len: usize) -> Vec<DigitWord> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<i64> = vec![-1];
    while let Some(last) = w.last_mut() {
        *last += 1;
        out.push(DigitWord(w.iter().map(|&d| d as Digit).collect()));
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k as i64 - 1)) {
            w.pop();
        }
    }
    out
}

/// Every purely periodic expansion with period length at most `max_period`
/// that is the unique expansion of its value. Periods are reported by their
/// least rotation; output is sorted by value.
pub fn search_unique_periodic(p: &Params, max_period: usize, cap: u64) -> Result<Vec<UniquePoint>> {
    if max_period == 0 {
        return Err(Error::InvalidArgument("max_period must be >= 1".into()));
    }
    let needed = (p.b() as u128)
        .checked_pow(max_period as u32)
        .unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }
    let mut out = Vec::new();
    for period in lyndon_words(p.b(), max_period) {
        let word = EventuallyPeriodicWord::purely_periodic(period)?;
        let verdict = check_unique(p, &word)?;
        if verdict.unique {
            out.push(UniquePoint {
                word,
                value: verdict.value,
            });
        }
    }
    out.sort_by(|x, y| x.value.cmp(&y.value).then_with(|| x.word.cmp(&y.word)));
    Ok(out)
}
