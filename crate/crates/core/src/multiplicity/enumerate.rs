//! Breadth-first enumeration of expansion prefixes.
//!
//! A node carries the tail value `y` still to be expanded; digit `j` is
//! admissible when `y ∈ T_j([0,1])` and leads to `T_j⁻¹(y)`. Children of a
//! point `k/q` keep denominator `q`, so nodes are stored as numerators over
//! the fixed denominator of `x`. Nodes carrying the same value have
//! identical subtrees and are merged, with multiplicities carried along.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rational::{check_unit, Rational};
use crate::word::{Digit, DigitWord};

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixCount {
    pub depth: usize,
    /// `counts[n]` = number of length-`n` words whose cylinder contains `x`.
    pub counts: Vec<u128>,
    /// Distinct tail values processed over all levels (what the cap bounds).
    pub nodes: u64,
}

trait Numerator:
    Clone + Ord + From<u32> + Add<Output = Self> + Mul<Output = Self> + Sub<Output = Self>
{
}

impl<T> Numerator for T where
    T: Clone + Ord + From<u32> + Add<Output = T> + Mul<Output = T> + Sub<Output = T>
{
}

struct Brancher<T> {
    a: T,
    b: T,
    den: T,
    /// `multiples[j] = j·den` for `j = 0..=b`.
    multiples: Vec<T>,
}

impl<T: Numerator> Brancher<T> {
    fn new(p: &Params, den: T) -> Self {
        let multiples = (0..=p.b())
            .map(|j| T::from(j) * den.clone())
            .collect();
        Brancher {
            a: T::from(p.a()),
            b: T::from(p.b()),
            den,
            multiples,
        }
    }

    fn children(&self, y: &T, mut f: impl FnMut(Digit, T)) {
        let ay = self.a.clone() * y.clone();
        if ay <= self.den {
            f(0, ay);
        }
        let s = self.b.clone() * y.clone();
        let k = self.multiples.partition_point(|m| m <= &s).saturating_sub(1);
        let top = self.multiples.len() - 2;
        for j in k.saturating_sub(1)..=k {
            if j == 0 || j > top {
                continue;
            }
            if self.multiples[j] <= s && s <= self.multiples[j + 1] {
                f(j as Digit, s.clone() - self.multiples[j].clone());
            }
        }
    }
}

fn count_levels<T: Numerator>(
    p: &Params,
    num: T,
    den: T,
    depth: usize,
    cap: u64,
) -> Result<PrefixCount> {
    let brancher = Brancher::new(p, den);
    let mut frontier: BTreeMap<T, u128> = BTreeMap::new();
    frontier.insert(num, 1);
    let mut counts = vec![1u128];
    let mut nodes = 1u64;
    for level in 1..=depth {
        let mut next: BTreeMap<T, u128> = BTreeMap::new();
        let mut overflow = false;
        for (y, mult) in &frontier {
            brancher.children(y, |_, child| {
                let e = next.entry(child).or_insert(0);
                match e.checked_add(*mult) {
                    Some(v) => *e = v,
                    None => overflow = true,
                }
            });
        }
        if overflow {
            return Err(Error::CountOverflow(level));
        }
        nodes += next.len() as u64;
        if nodes > cap {
            return Err(Error::EnumerationOverflow {
                cap,
                depth: level,
                partial_counts: counts,
            });
        }
        let total = next
            .values()
            .try_fold(0u128, |acc, &m| acc.checked_add(m))
            .ok_or(Error::CountOverflow(level))?;
        counts.push(total);
        frontier = next;
    }
    Ok(PrefixCount {
        depth,
        counts,
        nodes,
    })
}

/// Counts, for each `n <= depth`, the length-`n` digit words `w` with
/// `x ∈ cylinder(w)`. `cap` bounds the number of distinct tail values
/// visited over the whole search.
pub fn enumerate_prefixes(p: &Params, x: &Rational, depth: usize, cap: u64) -> Result<PrefixCount> {
    check_unit(x)?;
    let (num, den) = (x.numer(), x.denom());
    // b·den must fit in u128 for the fast path.
    if den.bits() <= 90 {
        let num: u128 = num.try_into().expect("numerator <= denominator");
        let den: u128 = den.try_into().expect("checked bit length");
        count_levels(p, num, den, depth, cap)
    } else {
        count_levels(p, num.clone(), den.clone(), depth, cap)
    }
}

/// All length-`depth` words whose cylinder contains `x`, in lexicographic
/// order. `cap` bounds the total number of tree nodes.
pub fn enumerate_words(p: &Params, x: &Rational, depth: usize, cap: u64) -> Result<Vec<DigitWord>> {
    check_unit(x)?;
    let brancher = Brancher::new(p, x.denom().clone());
    let mut frontier: Vec<(BigInt, Vec<Digit>)> = vec![(x.numer().clone(), Vec::new())];
    let mut counts = vec![1u128];
    let mut nodes = 1u64;
    for level in 1..=depth {
        let mut next = Vec::new();
        for (y, word) in &frontier {
            brancher.children(y, |d, child| {
                let mut w = word.clone();
                w.push(d);
                next.push((child, w));
            });
        }
        nodes += next.len() as u64;
        if nodes > cap {
            return Err(Error::EnumerationOverflow {
                cap,
                depth: level,
                partial_counts: counts,
            });
        }
        counts.push(next.len() as u128);
        frontier = next;
    }
    let mut words: Vec<DigitWord> = frontier.into_iter().map(|(_, w)| DigitWord(w)).collect();
    words.sort();
    Ok(words)
}
