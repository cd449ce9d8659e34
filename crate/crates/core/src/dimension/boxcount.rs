//! Box counting on dyadic grids.
//!
//! A depth-`n` cylinder with `z` zeros is `[t/D, (t+1)/D]` with
//! `D = a^z·b^(n-z)`, so the whole computation runs on integer numerators.
//! Boxes at scale `e` are `[k/2^e, (k+1)/2^e)` (the last one closed). Those
//! partition each coarser box, so occupancy is marked once at the finest
//! scale and coarsened by shifting indices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::word::Digit;

use super::DigitSet;

pub const MAX_SCALE_EXPONENT: u32 = 28;
pub const DEFAULT_BOX_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxPoint {
    pub scale_exponent: u32,
    pub boxes_occupied: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<BoxPoint>,
}

/// Least squares fit of `ln N(ε)` against `ln(1/ε) = e·ln 2`.
pub fn regress(points: &[BoxPoint]) -> Result<Regression> {
    if points.len() < 2 {
        return Err(Error::DegenerateRegression("need at least two scales".into()));
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| p.scale_exponent as f64 * std::f64::consts::LN_2)
        .collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.boxes_occupied as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression("scales must be distinct".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(Regression {
        slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}

struct Marker<'a> {
    a: u128,
    b: u128,
    digits: &'a [Digit],
    depth: usize,
    finest: u32,
    bits: Vec<u64>,
}

impl Marker<'_> {
    fn mark_range(&mut self, lo: u64, hi: u64) {
        for k in lo..=hi {
            self.bits[(k / 64) as usize] |= 1 << (k % 64);
        }
    }

    fn descend(&mut self, num: u128, den: u128, level: usize) {
        if level == self.depth {
            let last = (1u64 << self.finest) - 1;
            let lo = ((num << self.finest) / den) as u64;
            let hi = (((num + 1) << self.finest) / den) as u64;
            self.mark_range(lo.min(last), hi.min(last));
            return;
        }
        for i in 0..self.digits.len() {
            let d = self.digits[i];
            if d == 0 {
                self.descend(num * self.a, den * self.a, level + 1);
            } else {
                self.descend(num * self.b + d as u128, den * self.b, level + 1);
            }
        }
    }
}

/// Occupied box counts of the union of all depth-`depth` cylinders over
/// `D`, one per requested scale exponent.
pub fn box_counts(p: &Params, digits: &DigitSet, depth: usize, scales: &[u32], cap: u64) -> Result<Vec<BoxPoint>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let finest = *scales
        .iter()
        .max()
        .ok_or_else(|| Error::DegenerateRegression("no scales given".into()))?;
    if finest > MAX_SCALE_EXPONENT {
        return Err(Error::InvalidArgument(format!(
            "scale exponent {finest} exceeds {MAX_SCALE_EXPONENT}"
        )));
    }
    let needed = (digits.len() as u128).saturating_pow(depth as u32);
    if needed > cap as u128 {
        return Err(Error::CapExceeded { needed, cap });
    }
    // (t + 1)·2^finest must fit: t < b^depth.
    if (depth as f64) * (p.b() as f64).log2() + finest as f64 >= 126.0 {
        return Err(Error::InvalidArgument(
            "depth too large for exact 128-bit box marking".into(),
        ));
    }
    let words = (1usize << finest).div_ceil(64);
    let ds: Vec<Digit> = digits.iter().copied().collect();
    let bits = ds
        .par_iter()
        .map(|&first| {
            let mut m = Marker {
                a: p.a() as u128,
                b: p.b() as u128,
                digits: &ds,
                depth,
                finest,
                bits: vec![0u64; words],
            };
            if first == 0 {
                m.descend(0, m.a, 1);
            } else {
                m.descend(first as u128, m.b, 1);
            }
            m.bits
        })
        .reduce(
            || vec![0u64; words],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(x, y)| *x |= y);
                acc
            },
        );
    let occupied: Vec<u64> = bits
        .iter()
        .enumerate()
        .flat_map(|(i, &w)| {
            (0..64u64)
                .filter(move |j| w >> j & 1 == 1)
                .map(move |j| i as u64 * 64 + j)
        })
        .collect();
    Ok(scales
        .iter()
        .map(|&e| {
            let shift = finest - e;
            let mut count = 0u64;
            let mut prev = None;
            for k in &occupied {
                let c = k >> shift;
                if prev != Some(c) {
                    count += 1;
                    prev = Some(c);
                }
            }
            BoxPoint {
                scale_exponent: e,
                boxes_occupied: count,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::cylinder;
    use crate::rational::Rational;
    use crate::word::DigitWord;
    use num_bigint::BigInt;

    /// Rational reference: box k at scale e is hit iff k/2^e <= hi and
    /// (k+1)/2^e > lo (or k is the last box and hi = 1).
    fn brute(p: &Params, digits: &[Digit], depth: usize, e: u32) -> u64 {
        let mut words = vec![DigitWord::empty()];
        for _ in 0..depth {
            words = words
                .iter()
                .flat_map(|w| digits.iter().map(move |&d| w.pushed(d)))
                .collect();
        }
        let n = 1u64 << e;
        let scale = Rational::from_integer(BigInt::from(n));
        let mut hit = vec![false; n as usize];
        for w in &words {
            let c = cylinder(p, w).unwrap();
            for k in 0..n {
                let lo = Rational::from_integer(k.into()) / &scale;
                let hi = Rational::from_integer((k + 1).into()) / &scale;
                if lo <= c.hi && (hi > c.lo || k == n - 1) {
                    hit[k as usize] = true;
                }
            }
        }
        hit.iter().filter(|&&h| h).count() as u64
    }

    #[test]
    fn matches_rational_reference() {
        for (a, b, d) in [(2u32, 3u32, vec![0u32, 1]), (2, 3, vec![1, 2]), (3, 5, vec![0, 2, 4]), (2, 4, vec![0, 1])] {
            let p = Params::new(a, b).unwrap();
            let set = DigitSet::new(&p, d.iter().copied()).unwrap();
            let got = box_counts(&p, &set, 5, &[2, 3, 4, 5, 6], 1 << 20).unwrap();
            for pt in got {
                assert_eq!(pt.boxes_occupied, brute(&p, &d, 5, pt.scale_exponent), "({a},{b}) {d:?} e={}", pt.scale_exponent);
            }
        }
    }

    #[test]
    fn regression_on_exact_line() {
        let pts: Vec<BoxPoint> = (1..6)
            .map(|e| BoxPoint {
                scale_exponent: e,
                boxes_occupied: 1 << e,
            })
            .collect();
        let r = regress(&pts).unwrap();
        assert!((r.slope - 1.0).abs() < 1e-12);
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        assert!(regress(&pts[..1]).is_err());
    }
}
