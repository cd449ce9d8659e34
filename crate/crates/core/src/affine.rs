//! Composed contractions `T_{d1} ∘ … ∘ T_{dn}`, their cylinder intervals,
//! and exact evaluation of the projection π on finite and eventually
//! periodic words.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::params::Params;
use crate::rational::{self, Rational};
use crate::word::{Digit, DigitWord, EventuallyPeriodicWord};

/// `x ↦ ratio·x + translation`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineMap {
    #[serde(with = "rational::serde_str")]
    pub ratio: Rational,
    #[serde(with = "rational::serde_str")]
    pub translation: Rational,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            ratio: Rational::one(),
            translation: Rational::zero(),
        }
    }

    pub fn digit(p: &Params, d: Digit) -> Self {
        AffineMap {
            ratio: p.digit_ratio(d),
            translation: p.digit_translation(d),
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.translation
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            ratio: &self.ratio * &inner.ratio,
            translation: &self.translation + &self.ratio * &inner.translation,
        }
    }

    /// The unique fixed point of a strict contraction.
    pub fn fixed_point(&self) -> Rational {
        debug_assert!(self.ratio < Rational::one());
        &self.translation / (Rational::one() - &self.ratio)
    }

    pub fn image(&self) -> Interval {
        Interval {
            lo: self.translation.clone(),
            hi: &self.translation + &self.ratio,
        }
    }
}

/// Closed interval `[lo, hi]` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    #[serde(with = "rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "rational::serde_str")]
    pub hi: Rational,
}

impl Interval {
    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Folds single-digit maps left to right; the empty word gives the identity.
pub fn compose_word(p: &Params, w: &DigitWord) -> Result<AffineMap> {
    w.validate(p)?;
    Ok(compose_unchecked(p, w.digits()))
}

pub(crate) fn compose_unchecked(p: &Params, digits: &[Digit]) -> AffineMap {
    digits.iter().fold(AffineMap::identity(), |m, &d| {
        m.compose(&AffineMap::digit(p, d))
    })
}

pub fn cylinder(p: &Params, w: &DigitWord) -> Result<Interval> {
    Ok(compose_word(p, w)?.image())
}

/// `Σ d_i (1/a)^{z_i} (1/b)^{i - z_i}` where `z_i` counts zeros among the
/// first `i` digits. Equals π of the word followed by zeros.
pub fn pi_prefix(p: &Params, w: &DigitWord) -> Result<Rational> {
    Ok(compose_word(p, w)?.translation)
}

pub fn pi_periodic(p: &Params, w: &EventuallyPeriodicWord) -> Result<Rational> {
    w.validate(p)?;
    let y = compose_unchecked(p, w.period().digits()).fixed_point();
    Ok(compose_unchecked(p, w.preperiod().digits()).apply(&y))
}

/// Exact values `π(σ^k(w))` for `k = 0 .. pre + per - 1`, which are all
/// the distinct shifted tails of an eventually periodic word.
pub fn pi_shifts(p: &Params, w: &EventuallyPeriodicWord) -> Result<Vec<Rational>> {
    w.validate(p)?;
    let pre = w.preperiod().len();
    let per = w.period().len();
    let n = pre + per;
    let mut values = vec![Rational::zero(); n + 1];
    values[n] = compose_unchecked(p, w.period().digits()).fixed_point();
    for k in (0..n).rev() {
        values[k] = AffineMap::digit(p, w.digit(k)).apply(&values[k + 1]);
    }
    values.truncate(n);
    Ok(values)
}
