use std::collections::HashMap;

use serde::Serialize;

use crate::affine::{compose_word, AffineMap};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::word::DigitWord;

use super::DigitSet;

/// Two distinct words inducing the same affine map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OverlapPair {
    pub left: DigitWord,
    pub right: DigitWord,
}

fn shortlex(w: &DigitWord) -> (usize, &[u32]) {
    (w.len(), w.digits())
}

fn words_up_to(n_digits: usize, depth: usize) -> u128 {
    (1..=depth as u32)
        .map(|k| (n_digits as u128).saturating_pow(k))
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

/// All minimal exact overlaps among words of length `1..=depth` over `D`.
///
/// A colliding pair with a common first digit (or common last digit) is the
/// extension of a shorter collision, since the outer (or inner) map can be
/// cancelled; only pairs differing at both ends are reported. Pairs are
/// ordered shortlex within the pair and sorted overall.
pub fn detect_exact_overlaps(
    p: &Params,
    digits: &DigitSet,
    depth: usize,
    cap: u64,
) -> Result<Vec<OverlapPair>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let needed = words_up_to(digits.len(), depth);
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }
    let mut by_map: HashMap<AffineMap, Vec<DigitWord>> = HashMap::new();
    let mut level: Vec<(DigitWord, AffineMap)> = vec![(DigitWord::empty(), AffineMap::identity())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * digits.len());
        for (w, m) in &level {
            for &d in digits.iter() {
                let child = m.compose(&AffineMap::digit(p, d));
                next.push((w.pushed(d), child));
            }
        }
        for (w, m) in &next {
            by_map.entry(m.clone()).or_default().push(w.clone());
        }
        level = next;
    }

    let mut pairs = Vec::new();
    for words in by_map.values().filter(|ws| ws.len() > 1) {
        for (i, u) in words.iter().enumerate() {
            for v in &words[i + 1..] {
                let (first_u, first_v) = (u.digits()[0], v.digits()[0]);
                let (last_u, last_v) = (*u.digits().last().unwrap(), *v.digits().last().unwrap());
                if first_u == first_v || last_u == last_v {
                    continue;
                }
                let (left, right) = if shortlex(u) <= shortlex(v) {
                    (u.clone(), v.clone())
                } else {
                    (v.clone(), u.clone())
                };
                pairs.push(OverlapPair { left, right });
            }
        }
    }
    pairs.sort_by(|x, y| {
        shortlex(&x.left)
            .cmp(&shortlex(&y.left))
            .then_with(|| shortlex(&x.right).cmp(&shortlex(&y.right)))
    });
    debug_assert!(pairs
        .iter()
        .all(|pr| compose_word(p, &pr.left).ok() == compose_word(p, &pr.right).ok()));
    Ok(pairs)
}
