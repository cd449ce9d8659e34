/// Prime factorization by trial division, as `(prime, exponent)` pairs.
fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(mut x: u32, mut y: u32) -> u32 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Least `(m, n)` with `a^m = b^n`, i.e. `log b / log a = m/n`, or `None`
/// when `a` and `b` are multiplicatively independent.
///
/// `a^m = b^n` iff the prime exponent vectors satisfy `m·α = n·β`, so the
/// vectors must share support and be proportional.
pub fn is_commensurable(a: u64, b: u64) -> Option<(u32, u32)> {
    if a < 2 || b < 2 {
        return None;
    }
    let fa = factor(a);
    let fb = factor(b);
    if fa.len() != fb.len() || fa.iter().zip(&fb).any(|(x, y)| x.0 != y.0) {
        return None;
    }
    let (alpha, beta) = (fa[0].1, fb[0].1);
    let g = gcd(alpha, beta);
    let (m, n) = (beta / g, alpha / g);
    fa.iter()
        .zip(&fb)
        .all(|(x, y)| x.1 * m == y.1 * n)
        .then_some((m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(is_commensurable(2, 4), Some((2, 1)));
        assert_eq!(is_commensurable(4, 8), Some((3, 2)));
        assert_eq!(is_commensurable(2, 3), None);
        assert_eq!(is_commensurable(6, 36), Some((2, 1)));
        assert_eq!(is_commensurable(12, 18), None);
        assert_eq!(is_commensurable(8, 32), Some((5, 3)));
    }

    /// Brute force: search small exponents for `a^m = b^n`.
    fn brute(a: u64, b: u64) -> Option<(u32, u32)> {
        for m in 1..=12u32 {
            for n in 1..=12u32 {
                let (x, y) = (num_bigint::BigUint::from(a).pow(m), num_bigint::BigUint::from(b).pow(n));
                if x == y {
                    return Some((m, n));
                }
            }
        }
        None
    }

    proptest! {
        #[test]
        fn matches_brute_force(base in 2u64..7, i in 1u32..5, j in 1u32..5, a in 2u64..60, b in 2u64..60) {
            let (x, y) = (base.pow(i), base.pow(j));
            prop_assert_eq!(is_commensurable(x, y), brute(x, y));
            prop_assert_eq!(is_commensurable(a, b), brute(a, b));
        }
    }
}
