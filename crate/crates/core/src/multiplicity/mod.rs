//! Counting and deciding uniqueness of expansions.
//!
//! A point `y` can start an expansion with digit `j` iff `y ∈ T_j([0,1])`.
//! Branching therefore happens exactly on the overlap `[1/b, 1/a]` and on
//! the shared endpoints `j/b`; everywhere else (the good region) the next
//! digit is forced.

mod enumerate;
mod language;
mod search;

pub use enumerate::{enumerate_prefixes, enumerate_words, PrefixCount, DEFAULT_MAX_NODES};
pub use language::{thm42_language, verify_language_bounds, LanguageInfo, LanguageReport};
pub use search::{lyndon_words, search_unique_periodic, UniquePoint};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::affine::pi_shifts;
use crate::error::Result;
use crate::params::Params;
use crate::rational::{self, check_unit, Rational};
use crate::word::{Digit, EventuallyPeriodicWord};

/// `([0, 1/b) ∪ (1/a, 1]) ∖ {j/b : 2 <= j <= b-1}`.
#[derive(Debug, Clone, Copy)]
pub struct GoodRegion {
    params: Params,
}

impl GoodRegion {
    pub fn new(params: Params) -> Self {
        GoodRegion { params }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if check_unit(x).is_err() {
            return false;
        }
        if x < &self.params.inv_b() {
            return true;
        }
        x > &self.params.inv_a() && !self.is_boundary_point(x)
    }

    /// `x = j/b` for some `2 <= j <= b-1`.
    pub fn is_boundary_point(&self, x: &Rational) -> bool {
        let scaled = x * Rational::from_integer(BigInt::from(self.params.b()));
        scaled.is_integer() && {
            let j = scaled.to_integer();
            j >= BigInt::from(2) && j < BigInt::from(self.params.b())
        }
    }

    /// `x ∈ [1/b, 1/a]`.
    pub fn in_overlap(&self, x: &Rational) -> bool {
        let (lo, hi) = self.params.overlap();
        &lo <= x && x <= &hi
    }
}

/// Digits `j` with `x ∈ T_j([0,1])` (closed cylinders), ascending.
pub fn viable_digits(p: &Params, x: &Rational) -> Result<Vec<Digit>> {
    check_unit(x)?;
    let mut out = Vec::with_capacity(3);
    if x <= &p.inv_a() {
        out.push(0);
    }
    let scaled = x * Rational::from_integer(BigInt::from(p.b()));
    for j in 1..p.b() {
        let j_r = Rational::from_integer(BigInt::from(j));
        if j_r <= scaled && scaled <= &j_r + Rational::from_integer(1.into()) {
            out.push(j);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessVerdict {
    pub unique: bool,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub witness_shift: Option<usize>,
    #[serde(with = "rational::serde_str::option")]
    pub witness_value: Option<Rational>,
}

/// Decides whether `π(w)` has exactly one expansion: every shifted tail
/// value `π(σ^k w)` must lie in the good region. Only `pre + per` shifts
/// are distinct, so the check is finite and exact.
pub fn check_unique(p: &Params, w: &EventuallyPeriodicWord) -> Result<UniquenessVerdict> {
    let shifts = pi_shifts(p, w)?;
    let region = GoodRegion::new(*p);
    let value = shifts.first().cloned().unwrap_or_else(Rational::zero);
    let failure = shifts.iter().position(|v| !region.contains(v));
    Ok(UniquenessVerdict {
        unique: failure.is_none(),
        witness_shift: failure,
        witness_value: failure.map(|k| shifts[k].clone()),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{cylinder, pi_periodic};
    use crate::rational::{int, ratio};
    use crate::word::DigitWord;
    use proptest::prelude::*;

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    fn per(s: &str) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::parse(s).unwrap()
    }

    #[test]
    fn viable_examples() {
        let p = p23();
        assert_eq!(viable_digits(&p, &ratio(2, 5)).unwrap(), vec![0, 1]);
        assert_eq!(viable_digits(&p, &int(0)).unwrap(), vec![0]);
        assert_eq!(viable_digits(&p, &ratio(2, 3)).unwrap(), vec![1, 2]);
        assert_eq!(viable_digits(&p, &int(1)).unwrap(), vec![2]);
        assert!(viable_digits(&p, &ratio(4, 3)).is_err());
        // 1/b = 1/5 sits on the overlap's left edge and nothing else for (3,5)
        let q = Params::new(3, 5).unwrap();
        assert_eq!(viable_digits(&q, &ratio(1, 5)).unwrap(), vec![0, 1]);
        assert_eq!(viable_digits(&q, &ratio(1, 3)).unwrap(), vec![0, 1]);
        assert_eq!(viable_digits(&q, &ratio(2, 5)).unwrap(), vec![1, 2]);
    }

    #[test]
    fn good_region_edges() {
        let g = GoodRegion::new(p23());
        assert!(g.contains(&int(0)));
        assert!(!g.contains(&ratio(1, 3)));
        assert!(!g.contains(&ratio(1, 2)));
        assert!(g.contains(&ratio(3, 5)));
        assert!(!g.contains(&ratio(2, 3)));
        assert!(g.contains(&int(1)));
    }

    #[test]
    fn unique_examples() {
        let p = p23();
        let v = check_unique(&p, &per("|0,1,2")).unwrap();
        assert!(v.unique);
        assert_eq!(v.value, ratio(5, 17));

        let v = check_unique(&p, &per("|0,2")).unwrap();
        assert!(!v.unique);
        assert_eq!(v.witness_shift, Some(0));
        assert_eq!(v.witness_value, Some(ratio(2, 5)));

        let v = check_unique(&p, &per("|2")).unwrap();
        assert!(v.unique);
        assert_eq!(v.value, int(1));
    }

    #[test]
    fn unique_shift_values_for_012() {
        let shifts = pi_shifts(&p23(), &per("|0,1,2")).unwrap();
        assert_eq!(shifts, vec![ratio(5, 17), ratio(10, 17), ratio(13, 17)]);
    }

    #[test]
    fn prepend_zero_closure() {
        let p = p23();
        let x = pi_periodic(&p, &per("|0,1,2")).unwrap();
        assert!(x < p.inv_b());
        for m in 1..=12 {
            let w = EventuallyPeriodicWord::new(DigitWord::new(vec![0; m]), DigitWord::new(vec![0, 1, 2])).unwrap();
            let v = check_unique(&p, &w).unwrap();
            assert!(v.unique, "m = {m}");
            assert_eq!(v.value, &x / Rational::from_integer(BigInt::from(2).pow(m as u32)));
        }
    }

    fn arb_case() -> impl Strategy<Value = (Params, EventuallyPeriodicWord)> {
        (2u32..5)
            .prop_flat_map(|a| (Just(a), a + 1..a + 4))
            .prop_flat_map(|(a, b)| {
                (
                    Just(Params::new(a, b).unwrap()),
                    prop::collection::vec(0..b, 0..3),
                    prop::collection::vec(0..b, 1..4),
                )
            })
            .prop_map(|(p, pre, per)| {
                (p, EventuallyPeriodicWord::new(DigitWord(pre), DigitWord(per)).unwrap())
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn checker_agrees_with_enumerator((p, w) in arb_case()) {
            let x = pi_periodic(&p, &w).unwrap();
            let n = 3 * (w.preperiod().len() + w.period().len());
            let counts = enumerate_prefixes(&p, &x, n, DEFAULT_MAX_NODES).unwrap();
            let verdict = check_unique(&p, &w).unwrap();
            prop_assert_eq!(verdict.unique, counts.counts.iter().all(|&c| c == 1));
        }

        #[test]
        fn good_region_dichotomy(k in 0i64..=600, (a, b) in (2u32..6).prop_flat_map(|a| (Just(a), a + 1..a + 5))) {
            let p = Params::new(a, b).unwrap();
            let x = ratio(k, 600);
            let branching = viable_digits(&p, &x).unwrap().len() >= 2;
            prop_assert_eq!(branching, !GoodRegion::new(p).contains(&x));
        }

        #[test]
        fn viable_digits_are_cylinder_membership(k in 0i64..=360, (a, b) in (2u32..6).prop_flat_map(|a| (Just(a), a + 1..a + 5))) {
            let p = Params::new(a, b).unwrap();
            let x = ratio(k, 360);
            let viable = viable_digits(&p, &x).unwrap();
            for j in p.alphabet() {
                let inside = cylinder(&p, &DigitWord::new(vec![j])).unwrap().contains(&x);
                prop_assert_eq!(inside, viable.contains(&j));
            }
            prop_assert!((1..=3).contains(&viable.len()));
        }
    }
}
