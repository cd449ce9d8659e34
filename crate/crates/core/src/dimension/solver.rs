use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// `Σ r_i^s - 1`
pub fn moran_residual(ratios: &[f64], s: f64) -> f64 {
    ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0
}

/// Solves `Σ r_i^s = 1` for contraction ratios in `(0,1)` by bisection.
///
/// The left side is strictly decreasing in `s` and equals `n - 1 > 0` at
/// `s = 0`; the bracket starts at `[0, 2]` and doubles until it changes sign.
pub fn moran_root(ratios: &[f64], tol: f64) -> Result<f64> {
    if ratios.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two maps for a similarity dimension".into(),
        ));
    }
    if ratios.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidArgument("ratios must lie in (0,1)".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let f = |s: f64| moran_residual(ratios, s);
    let mut lo = 0.0;
    let mut hi = 2.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NotConverged {
                tol,
                residual: f(hi),
            });
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v == 0.0 || mid <= lo || mid >= hi {
            break;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = f(mid);
    if residual.abs() >= tol {
        return Err(Error::NotConverged { tol, residual });
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_ratios_give_log_ratio() {
        let s = moran_root(&[1.0 / 3.0; 2], DEFAULT_TOL).unwrap();
        assert!((s - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn bracket_expands() {
        // ten maps of ratio 1/2 have dimension log2(10) > 2
        let s = moran_root(&[0.5; 10], DEFAULT_TOL).unwrap();
        assert!((s - 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(moran_root(&[0.5], DEFAULT_TOL).is_err());
        assert!(moran_root(&[0.5, 1.0], DEFAULT_TOL).is_err());
        assert!(moran_root(&[0.5, 0.5], 0.0).is_err());
    }
}
