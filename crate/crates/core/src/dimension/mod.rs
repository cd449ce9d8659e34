//! Dimensions of restricted-digit sets `π(D^ℕ)`.
//!
//! With `0 ∈ D` the maps `{T_d : d ∈ D}` have one ratio `1/a` and `|D| - 1`
//! ratios `1/b`. The similarity dimension, capped at 1, is the Hausdorff
//! dimension when no two distinct words compose to the same map. The open
//! set condition `min(D ∖ {0}) >= b/a` guarantees that. Multiplicative
//! independence of `a` and `b` only forces colliding words to share length
//! and zero count; collisions such as `T_0∘T_a = T_1∘T_0` still occur, so
//! a bounded overlap search runs before the formula is trusted. Anything
//! else gets a flagged box-counting estimate.

mod boxcount;
mod commensurable;
mod overlap;
mod solver;

pub use boxcount::{box_counts, regress, BoxPoint, Regression, DEFAULT_BOX_CAP, MAX_SCALE_EXPONENT};
pub use commensurable::is_commensurable;
pub use overlap::{detect_exact_overlaps, OverlapPair};
pub use solver::{moran_residual, moran_root, DEFAULT_TOL};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::word::Digit;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DigitSet(BTreeSet<Digit>);

impl DigitSet {
    pub fn new(p: &Params, digits: impl IntoIterator<Item = Digit>) -> Result<Self> {
        let set: BTreeSet<Digit> = digits.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        for &d in &set {
            p.check_digit(d)?;
        }
        Ok(DigitSet(set))
    }

    pub fn full(p: &Params) -> Self {
        DigitSet(p.alphabet().collect())
    }

    pub fn parse(p: &Params, s: &str) -> Result<Self> {
        let digits = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<Digit>()
                    .map_err(|_| Error::Parse(format!("bad digit {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, digits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.0.contains(&0)
    }

    pub fn min_nonzero(&self) -> Option<Digit> {
        self.0.iter().copied().find(|&d| d != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Digit> {
        self.0.iter()
    }

    /// Contraction ratios of `{T_d : d ∈ D}`.
    pub fn ratios(&self, p: &Params) -> Vec<f64> {
        self.0
            .iter()
            .map(|&d| if d == 0 { 1.0 / p.a() as f64 } else { 1.0 / p.b() as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimensionCase {
    /// `|D| = 1`
    SinglePoint,
    /// `D` is the whole alphabet, so `π(D^ℕ) = [0,1]`.
    FullInterval,
    /// `0 ∉ D`: an ordinary base-`b` restricted-digit set.
    NoZeroFormula,
    /// `0 ∈ D`, `a` and `b` multiplicatively independent.
    #[serde(rename = "similarity-min-s-1")]
    SimilarityMinS1,
    /// `0 ∈ D`, `min(D ∖ {0}) >= b/a`.
    #[serde(rename = "osc-min-s-1")]
    OscMinS1,
    /// Commensurable bases with possible exact overlaps; numeric estimate only.
    UndeterminedEstimateOnly,
}

impl DimensionCase {
    pub fn is_estimate(&self) -> bool {
        matches!(self, DimensionCase::UndeterminedEstimateOnly)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DimensionCase::SinglePoint => "single-point",
            DimensionCase::FullInterval => "full-interval",
            DimensionCase::NoZeroFormula => "no-zero-formula",
            DimensionCase::SimilarityMinS1 => "similarity-min-s-1",
            DimensionCase::OscMinS1 => "osc-min-s-1",
            DimensionCase::UndeterminedEstimateOnly => "undetermined-estimate-only",
        }
    }
}

impl std::fmt::Display for DimensionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionResult {
    pub case: DimensionCase,
    /// Similarity dimension, where one is defined.
    pub s: Option<f64>,
    pub value: f64,
    pub residual: Option<f64>,
    pub estimate: bool,
    pub regression: Option<Regression>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Solves `(1/a)^s + (|D| - 1)(1/b)^s = 1`.
pub fn similarity_dimension(p: &Params, digits: &DigitSet, tol: f64) -> Result<f64> {
    if !digits.contains_zero() {
        return Err(Error::InvalidArgument("similarity equation requires 0 ∈ D".into()));
    }
    if digits.len() < 2 {
        return Err(Error::InvalidArgument("similarity equation requires |D| >= 2".into()));
    }
    moran_root(&digits.ratios(p), tol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxConfig {
    /// Cylinder depth; `None` picks the smallest depth whose widest cylinder
    /// is narrower than the finest box.
    pub depth: Option<usize>,
    pub scales: Vec<u32>,
    pub cap: u64,
}

impl Default for BoxConfig {
    fn default() -> Self {
        BoxConfig {
            depth: None,
            scales: (6..=12).collect(),
            cap: DEFAULT_BOX_CAP,
        }
    }
}

fn widest_ratio(p: &Params, digits: &DigitSet) -> f64 {
    if digits.contains_zero() {
        1.0 / p.a() as f64
    } else {
        1.0 / p.b() as f64
    }
}

/// Box-counting estimate of `dim π(D^ℕ)` from all depth-`depth` cylinders.
pub fn box_count_dimension(p: &Params, digits: &DigitSet, depth: usize, scales: &[u32], cap: u64) -> Result<DimensionResult> {
    let mut warnings = Vec::new();
    let finest = scales.iter().copied().max().unwrap_or(0);
    let widest = widest_ratio(p, digits).powi(depth as i32);
    if widest >= (0.5f64).powi(finest as i32) {
        warnings.push(format!(
            "largest cylinder width {widest:.3e} is not below the smallest box 2^-{finest}"
        ));
    }
    let points = box_counts(p, digits, depth, scales, cap)?;
    let regression = regress(&points)?;
    Ok(DimensionResult {
        case: DimensionCase::UndeterminedEstimateOnly,
        s: None,
        value: regression.slope,
        residual: None,
        estimate: true,
        regression: Some(regression),
        warnings,
    })
}

fn auto_depth(p: &Params, digits: &DigitSet, cfg: &BoxConfig, warnings: &mut Vec<String>) -> usize {
    if let Some(d) = cfg.depth {
        return d;
    }
    let finest = cfg.scales.iter().copied().max().unwrap_or(12) as f64;
    let ratio = widest_ratio(p, digits);
    let wanted = (finest * std::f64::consts::LN_2 / -ratio.ln()).floor() as usize + 1;
    let affordable = ((cfg.cap as f64).ln() / (digits.len() as f64).ln()).floor() as usize;
    if wanted > affordable {
        warnings.push(format!("depth reduced from {wanted} to {affordable} by the word cap"));
        affordable.max(1)
    } else {
        wanted
    }
}

/// Words up to this length are searched for exact overlaps before the
/// similarity formula is applied to multiplicatively independent bases.
pub const OVERLAP_PROBE_DEPTH: usize = 6;
const OVERLAP_PROBE_CAP: u64 = 2_000_000;

fn probe_overlaps(p: &Params, digits: &DigitSet) -> Result<Option<OverlapPair>> {
    let mut depth = OVERLAP_PROBE_DEPTH;
    while depth > 2 && (digits.len() as u128).pow(depth as u32) * 2 > OVERLAP_PROBE_CAP as u128 {
        depth -= 1;
    }
    Ok(detect_exact_overlaps(p, digits, depth, OVERLAP_PROBE_CAP)?
        .into_iter()
        .next())
}

/// Dimension of `π(D^ℕ)` by case analysis, falling back to a flagged
/// box-counting estimate where no formula applies.
pub fn hausdorff_formula(p: &Params, digits: &DigitSet) -> Result<DimensionResult> {
    hausdorff_formula_with(p, digits, &BoxConfig::default())
}

pub fn hausdorff_formula_with(p: &Params, digits: &DigitSet, cfg: &BoxConfig) -> Result<DimensionResult> {
    let exact = |case, s: Option<f64>, value: f64, residual: Option<f64>| DimensionResult {
        case,
        s,
        value,
        residual,
        estimate: false,
        regression: None,
        warnings: Vec::new(),
    };
    let n = digits.len();
    if n == 1 {
        return Ok(exact(DimensionCase::SinglePoint, None, 0.0, None));
    }
    if n == p.b() as usize {
        let s = similarity_dimension(p, digits, DEFAULT_TOL)?;
        let residual = moran_residual(&digits.ratios(p), s);
        return Ok(exact(DimensionCase::FullInterval, Some(s), 1.0, Some(residual)));
    }
    if !digits.contains_zero() {
        let s = (n as f64).ln() / (p.b() as f64).ln();
        let residual = moran_residual(&digits.ratios(p), s);
        return Ok(exact(DimensionCase::NoZeroFormula, Some(s), s, Some(residual)));
    }
    let osc = digits
        .min_nonzero()
        .is_some_and(|m| m as u64 * p.a() as u64 >= p.b() as u64);
    let independent = is_commensurable(p.a() as u64, p.b() as u64).is_none();
    let mut warnings = Vec::new();
    let collision = if independent && !osc {
        probe_overlaps(p, digits)?
    } else {
        None
    };
    if let Some(pair) = &collision {
        warnings.push(format!(
            "exact overlap {} ~ {}: min(s,1) is only an upper bound",
            pair.left, pair.right
        ));
    }
    if (independent || osc) && collision.is_none() {
        let s = similarity_dimension(p, digits, DEFAULT_TOL)?;
        let residual = moran_residual(&digits.ratios(p), s);
        let case = if independent {
            DimensionCase::SimilarityMinS1
        } else {
            DimensionCase::OscMinS1
        };
        return Ok(exact(case, Some(s), s.min(1.0), Some(residual)));
    }
    let depth = auto_depth(p, digits, cfg, &mut warnings);
    let mut est = box_count_dimension(p, digits, depth, &cfg.scales, cfg.cap)?;
    est.s = similarity_dimension(p, digits, DEFAULT_TOL).ok();
    warnings.append(&mut est.warnings);
    est.warnings = warnings;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: &Params, d: &[Digit]) -> DigitSet {
        DigitSet::new(p, d.iter().copied()).unwrap()
    }

    /// Independent bisection on `2^-s + 3^-s = 1`, written out longhand.
    fn oracle_two_three() -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..100 {
            let mid = (lo + hi) / 2.0;
            if 2f64.powf(-mid) + 3f64.powf(-mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / 2.0
    }

    #[test]
    fn golden_ratio_case() {
        let p = Params::new(2, 4).unwrap();
        let s = similarity_dimension(&p, &set(&p, &[0, 1]), DEFAULT_TOL).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s - golden.log2()).abs() < 1e-9);
        assert!((s - 0.6942419).abs() < 1e-7);
    }

    #[test]
    fn two_three_case() {
        let p = Params::new(2, 3).unwrap();
        let s = similarity_dimension(&p, &set(&p, &[0, 1]), DEFAULT_TOL).unwrap();
        assert!((s - oracle_two_three()).abs() < 1e-9);
        assert!((s - 0.788).abs() < 1e-3);
        assert!(moran_residual(&[0.5, 1.0 / 3.0], s).abs() < DEFAULT_TOL);
    }

    #[test]
    fn full_alphabet_exceeds_one() {
        let p = Params::new(2, 3).unwrap();
        let d = set(&p, &[0, 1, 2]);
        assert!(similarity_dimension(&p, &d, DEFAULT_TOL).unwrap() > 1.0);
        let r = hausdorff_formula(&p, &d).unwrap();
        assert_eq!(r.case, DimensionCase::FullInterval);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn solver_preconditions() {
        let p = Params::new(2, 3).unwrap();
        assert!(similarity_dimension(&p, &set(&p, &[1, 2]), DEFAULT_TOL).is_err());
        assert!(similarity_dimension(&p, &set(&p, &[0]), DEFAULT_TOL).is_err());
        assert!(DigitSet::new(&p, []).is_err());
        assert!(DigitSet::new(&p, [3]).is_err());
    }

    #[test]
    fn case_split() {
        let p23 = Params::new(2, 3).unwrap();
        let r = hausdorff_formula(&p23, &set(&p23, &[1, 2])).unwrap();
        assert_eq!(r.case, DimensionCase::NoZeroFormula);
        assert!((r.value - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((r.value - 0.63093).abs() < 1e-5);

        let r = hausdorff_formula(&p23, &set(&p23, &[0, 1])).unwrap();
        assert_eq!(r.case, DimensionCase::SimilarityMinS1);
        assert!((r.value - 0.788).abs() < 1e-3);

        let p24 = Params::new(2, 4).unwrap();
        let r = hausdorff_formula(&p24, &set(&p24, &[0, 2])).unwrap();
        assert_eq!(r.case, DimensionCase::OscMinS1);
        assert!((r.value - 0.6942419).abs() < 1e-7);

        let r = hausdorff_formula(&p24, &set(&p24, &[0, 1])).unwrap();
        assert_eq!(r.case, DimensionCase::UndeterminedEstimateOnly);
        assert!(r.estimate);
        assert!(r.regression.is_some());

        let r = hausdorff_formula(&p23, &set(&p23, &[2])).unwrap();
        assert_eq!((r.case, r.value), (DimensionCase::SinglePoint, 0.0));

        // independent bases, but T_0∘T_2 = T_1∘T_0
        let p25 = Params::new(2, 5).unwrap();
        let r = hausdorff_formula(&p25, &set(&p25, &[0, 1, 2])).unwrap();
        assert_eq!(r.case, DimensionCase::UndeterminedEstimateOnly);
        assert!(r.warnings.iter().any(|w| w.contains("0,2 ~ 1,0")));
        assert!(r.value <= r.s.unwrap() + 0.05);
    }

    #[test]
    fn no_zero_case_is_equal_ratio_similarity() {
        for (a, b, d) in [(2u32, 5u32, vec![1u32, 3]), (3, 7, vec![2, 4, 6]), (2, 9, vec![1, 2, 3, 4])] {
            let p = Params::new(a, b).unwrap();
            let ds = set(&p, &d);
            let r = hausdorff_formula(&p, &ds).unwrap();
            let s = moran_root(&vec![1.0 / b as f64; d.len()], DEFAULT_TOL).unwrap();
            assert!((r.value - s).abs() < 1e-10);
            assert!((0.0..=1.0).contains(&r.value));
        }
    }

    #[test]
    fn case_names_match_serde() {
        for c in [
            DimensionCase::SinglePoint,
            DimensionCase::FullInterval,
            DimensionCase::NoZeroFormula,
            DimensionCase::SimilarityMinS1,
            DimensionCase::OscMinS1,
            DimensionCase::UndeterminedEstimateOnly,
        ] {
            assert_eq!(serde_json::to_value(c).unwrap(), c.as_str());
        }
    }

    #[test]
    fn monotone_in_digits_and_a() {
        for b in 4u32..9 {
            for a in 2..b - 1 {
                let p = Params::new(a, b).unwrap();
                let mut prev = 0.0;
                for k in 2..=b {
                    let s = similarity_dimension(&p, &set(&p, &(0..k).collect::<Vec<_>>()), DEFAULT_TOL).unwrap();
                    assert!(s > prev);
                    prev = s;
                }
                let q = Params::new(a + 1, b).unwrap();
                let d: Vec<Digit> = vec![0, 1];
                let s_a = similarity_dimension(&p, &set(&p, &d), DEFAULT_TOL).unwrap();
                let s_a1 = similarity_dimension(&q, &set(&q, &d), DEFAULT_TOL).unwrap();
                assert!(s_a1 < s_a);
            }
        }
    }
}
