//! The greedy map `G`, greedy digit extraction, and seeded orbit statistics.
//!
//! `G` inverts the branch `T_j` selected by `⌊b·x⌋` (digit 0 on `[0, 1/b)`).
//! It multiplies by an integer and subtracts an integer, so a point `k/q`
//! keeps denominator `q` along its whole orbit. The samplers below exploit
//! that by iterating on the numerator alone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rational::{check_unit, Rational};
use crate::word::{Digit, DigitWord};

/// Fraction of `steps` discarded before histogram accumulation.
pub const DEFAULT_BURN_IN: f64 = 0.1;

/// One application of `G`: returns the greedy digit and `G(x)`.
pub fn greedy_step(p: &Params, x: &Rational) -> Result<(Digit, Rational)> {
    check_unit(x)?;
    Ok(greedy_step_unchecked(p, x))
}

fn greedy_step_unchecked(p: &Params, x: &Rational) -> (Digit, Rational) {
    if x.is_one() {
        return (p.b() - 1, x.clone());
    }
    let b = BigInt::from(p.b());
    let scaled = x * Rational::from_integer(b.clone());
    let j = scaled.floor().to_integer();
    let digit = j.to_u32().expect("digit below b");
    if digit == 0 {
        (0, x * Rational::from_integer(BigInt::from(p.a())))
    } else {
        (digit, scaled - Rational::from_integer(j))
    }
}

/// First `n` greedy digits of `x`.
pub fn greedy_expand(p: &Params, x: &Rational, n: usize) -> Result<DigitWord> {
    check_unit(x)?;
    let mut y = x.clone();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let (d, next) = greedy_step_unchecked(p, &y);
        digits.push(d);
        y = next;
    }
    Ok(DigitWord(digits))
}

/// `(x, G(x), …, Gⁿ(x))`.
pub fn orbit(p: &Params, x: &Rational, n: usize) -> Result<Vec<Rational>> {
    check_unit(x)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(x.clone());
    for i in 0..n {
        let (_, next) = greedy_step_unchecked(p, &out[i]);
        out.push(next);
    }
    Ok(out)
}

/// `G` on the numerator of `num/den`, exact as long as `b·den` fits.
#[inline]
pub(crate) fn greedy_step_num(p: &Params, num: u128, den: u128) -> (Digit, u128) {
    if num == den {
        return (p.b() - 1, num);
    }
    let scaled = num * p.b() as u128;
    let j = scaled / den;
    if j == 0 {
        (0, num * p.a() as u128)
    } else {
        (j as Digit, scaled - j * den)
    }
}

#[inline]
fn in_open_overlap(p: &Params, num: u128, den: u128) -> bool {
    den < num * p.b() as u128 && num * (p.a() as u128) < den
}

fn sample_numerator(seed: u64, index: u64, denom: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.gen_range(1..denom)
}

fn check_sampling(samples: usize, steps: usize, denom: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    if denom < 2 {
        return Err(Error::InvalidArgument("denom must be >= 2".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStats {
    pub samples: usize,
    pub steps: usize,
    pub hits: u64,
    pub hit_fraction: f64,
    /// First iterate index `k` (with `G^k(x)` in the open overlap) → count.
    pub first_hit_histogram: BTreeMap<usize, u64>,
}

/// Samples `k/denom` (k uniform in `1..denom`, one ChaCha stream per sample
/// index) and records whether `G^k(x)` enters the open overlap `(1/b, 1/a)`
/// for some `0 <= k <= steps`.
pub fn overlap_hit_stats(
    p: &Params,
    samples: usize,
    steps: usize,
    seed: u64,
    denom: u64,
) -> Result<OrbitStats> {
    check_sampling(samples, steps, denom)?;
    let den = denom as u128;
    let first_hits: Vec<Option<usize>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut y = sample_numerator(seed, i, denom) as u128;
            for k in 0..=steps {
                if in_open_overlap(p, y, den) {
                    return Some(k);
                }
                y = greedy_step_num(p, y, den).1;
            }
            None
        })
        .collect();
    let mut hist = BTreeMap::new();
    for k in first_hits.into_iter().flatten() {
        *hist.entry(k).or_insert(0u64) += 1;
    }
    let hits: u64 = hist.values().sum();
    Ok(OrbitStats {
        samples,
        steps,
        hits,
        hit_fraction: hits as f64 / samples as f64,
        first_hit_histogram: hist,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityHistogram {
    pub bins: usize,
    pub counts: Vec<u64>,
    pub masses: Vec<f64>,
}

impl DensityHistogram {
    fn from_counts(counts: Vec<u64>) -> Self {
        let total: u64 = counts.iter().sum();
        let masses = counts
            .iter()
            .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
            .collect();
        DensityHistogram {
            bins: counts.len(),
            counts,
            masses,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn burn_in_steps(steps: usize, burn_in: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&burn_in) {
        return Err(Error::InvalidArgument("burn-in fraction must be in [0,1)".into()));
    }
    Ok((steps as f64 * burn_in).floor() as usize)
}

/// Birkhoff-average histogram of sampled orbits over `bins` equal
/// subintervals of `[0,1]`, after a 10% burn-in.
pub fn invariant_density_histogram(
    p: &Params,
    bins: usize,
    samples: usize,
    steps: usize,
    seed: u64,
    denom: u64,
) -> Result<DensityHistogram> {
    invariant_density_histogram_with(p, bins, samples, steps, seed, denom, DEFAULT_BURN_IN)
}

pub fn invariant_density_histogram_with(
    p: &Params,
    bins: usize,
    samples: usize,
    steps: usize,
    seed: u64,
    denom: u64,
    burn_in: f64,
) -> Result<DensityHistogram> {
    if bins < 2 {
        return Err(Error::InvalidArgument("bins must be >= 2".into()));
    }
    check_sampling(samples, steps, denom)?;
    let skip = burn_in_steps(steps, burn_in)?;
    let den = denom as u128;
    let nbins = bins as u128;
    let counts = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; bins];
            let mut y = sample_numerator(seed, i, denom) as u128;
            for k in 0..steps {
                if k >= skip {
                    local[((y * nbins / den) as usize).min(bins - 1)] += 1;
                }
                y = greedy_step_num(p, y, den).1;
            }
            local
        })
        .reduce(
            || vec![0u64; bins],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                acc
            },
        );
    Ok(DensityHistogram::from_counts(counts))
}

/// Histogram of a single exact orbit `G^k(x)`, `burn-in <= k < steps`.
pub fn orbit_histogram(
    p: &Params,
    x: &Rational,
    bins: usize,
    steps: usize,
    burn_in: f64,
) -> Result<DensityHistogram> {
    if bins < 2 {
        return Err(Error::InvalidArgument("bins must be >= 2".into()));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let skip = burn_in_steps(steps, burn_in)?;
    let points = orbit(p, x, steps)?;
    let scale = Rational::from_integer(bins.into());
    let mut counts = vec![0u64; bins];
    for y in &points[skip..steps] {
        let idx = (y * &scale).floor().to_integer();
        let idx = idx.to_usize().unwrap_or(bins).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(DensityHistogram::from_counts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{compose_word, cylinder};
    use crate::rational::{int, ratio};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn p23() -> Params {
        Params::new(2, 3).unwrap()
    }

    #[test]
    fn step_examples() {
        let p = p23();
        assert_eq!(greedy_step(&p, &ratio(1, 2)).unwrap(), (1, ratio(1, 2)));
        assert_eq!(greedy_step(&p, &ratio(1, 4)).unwrap(), (0, ratio(1, 2)));
        assert_eq!(greedy_step(&p, &int(1)).unwrap(), (2, int(1)));
        assert!(greedy_step(&p, &ratio(3, 2)).is_err());
    }

    #[test]
    fn expand_examples() {
        let p = p23();
        assert_eq!(greedy_expand(&p, &ratio(1, 2), 4).unwrap().digits(), &[1, 1, 1, 1]);
        assert_eq!(greedy_expand(&p, &ratio(1, 4), 4).unwrap().digits(), &[0, 1, 1, 1]);
        assert_eq!(greedy_expand(&p, &int(0), 3).unwrap().digits(), &[0, 0, 0]);
        assert_eq!(greedy_expand(&p, &int(1), 3).unwrap().digits(), &[2, 2, 2]);
    }

    #[test]
    fn orbit_examples() {
        let p = p23();
        assert_eq!(orbit(&p, &ratio(1, 2), 3).unwrap(), vec![ratio(1, 2); 4]);
        assert_eq!(
            orbit(&p, &ratio(1, 5), 2).unwrap(),
            vec![ratio(1, 5), ratio(2, 5), ratio(1, 5)]
        );
        assert!(orbit(&Params::new(3, 7).unwrap(), &int(0), 5)
            .unwrap()
            .iter()
            .all(|y| y.is_zero()));
    }

    #[test]
    fn hit_stats_half_never_hits() {
        // denom 2 forces x = 1/2, the fixed point on the overlap's closed edge.
        let s = overlap_hit_stats(&p23(), 1, 10, 7, 2).unwrap();
        assert_eq!(s.hit_fraction, 0.0);
        assert!(s.first_hit_histogram.is_empty());
    }

    #[test]
    fn hit_stats_rejects_zero_steps() {
        assert!(overlap_hit_stats(&p23(), 10, 0, 1, 101).is_err());
        assert!(overlap_hit_stats(&p23(), 0, 10, 1, 101).is_err());
        assert!(overlap_hit_stats(&p23(), 10, 10, 1, 1).is_err());
    }

    #[test]
    fn hit_stats_deterministic() {
        let p = Params::new(3, 5).unwrap();
        let a = overlap_hit_stats(&p, 500, 30, 99, 1_000_003).unwrap();
        let b = overlap_hit_stats(&p, 500, 30, 99, 1_000_003).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.hits, a.first_hit_histogram.values().sum::<u64>());
    }

    #[test]
    fn density_two_bins_normalized() {
        let h = invariant_density_histogram(&p23(), 2, 50, 40, 3, 1009).unwrap();
        assert_eq!(h.masses.len(), 2);
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(invariant_density_histogram(&p23(), 1, 50, 40, 3, 1009).is_err());
    }

    #[test]
    fn density_full_support() {
        let h = invariant_density_histogram(&p23(), 10, 1000, 500, 42, 1_000_003).unwrap();
        assert!(h.masses.iter().all(|&m| m > 0.0), "{:?}", h.masses);
    }

    #[test]
    fn fixed_orbit_concentrates() {
        let h = orbit_histogram(&p23(), &ratio(1, 2), 10, 100, DEFAULT_BURN_IN).unwrap();
        assert_eq!(h.masses[5], 1.0);
        assert_eq!(h.total(), 90);
    }

    proptest! {
        #[test]
        fn greedy_inverts_ifs(k in 0u64..=10007, n in 1usize..40, (a, b) in (2u32..6).prop_flat_map(|a| (Just(a), a + 1..a + 6))) {
            let p = Params::new(a, b).unwrap();
            let x = ratio(k as i64, 10007);
            let word = greedy_expand(&p, &x, n).unwrap();
            let tail = orbit(&p, &x, n).unwrap();
            // T_{g1}∘…∘T_{gn}(Gⁿ(x)) = x
            let m = compose_word(&p, &word).unwrap();
            prop_assert_eq!(m.apply(&tail[n]), x.clone());
            let cyl = cylinder(&p, &word).unwrap();
            prop_assert!(cyl.contains(&x));
            prop_assert!(cyl.width() <= Rational::new(1.into(), BigInt::from(a).pow(n as u32)));
            for y in &tail {
                prop_assert!(BigInt::from(10007u32) % y.denom() == BigInt::zero());
            }
            prop_assert!(word.digits().iter().all(|&d| d < b));
        }

        #[test]
        fn numerator_step_matches_rational(k in 0u64..=997, (a, b) in (2u32..6).prop_flat_map(|a| (Just(a), a + 1..a + 6))) {
            let p = Params::new(a, b).unwrap();
            let (d1, n1) = greedy_step_num(&p, k as u128, 997);
            let (d2, y) = greedy_step(&p, &ratio(k as i64, 997)).unwrap();
            prop_assert_eq!(d1, d2);
            prop_assert_eq!(ratio(n1 as i64, 997), y);
        }
    }
}
