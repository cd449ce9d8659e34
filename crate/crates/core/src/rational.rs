//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}, expected p/q")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}, expected p/q")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Checks `0 <= x <= 1`.
pub fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::OutOfUnitInterval(x.clone()));
    }
    Ok(())
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter writing rationals as `"p/q"` strings (bare integers stay bare).
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::Rational;
        use serde::{Serialize, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            x.as_ref().map(|r| r.to_string()).serialize(s)
        }
    }
}
