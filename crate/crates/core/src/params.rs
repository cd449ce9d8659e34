use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::word::Digit;

/// A validated base pair with `1 < a < b`.
///
/// Digit 0 contracts by `1/a`; digits `1..b` act as ordinary base-`b` digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    a: u32,
    b: u32,
}

impl Params {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a <= 1 {
            return Err(Error::BlowUpBaseTooSmall(a));
        }
        if b <= a {
            return Err(Error::BasesNotOrdered { a, b });
        }
        Ok(Params { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn inv_a(&self) -> Rational {
        Rational::new(1.into(), self.a.into())
    }

    pub fn inv_b(&self) -> Rational {
        Rational::new(1.into(), self.b.into())
    }

    /// Endpoints `(1/b, 1/a)` of the interval where `T_0([0,1])` and
    /// `T_1([0,1])` overlap.
    pub fn overlap(&self) -> (Rational, Rational) {
        (self.inv_b(), self.inv_a())
    }

    /// The points `j/b` for `j = 2..b-1`, shared endpoints of adjacent
    /// base-`b` cylinders.
    pub fn boundary_points(&self) -> Vec<Rational> {
        (2..self.b)
            .map(|j| Rational::new(j.into(), self.b.into()))
            .collect()
    }

    pub fn contains_digit(&self, d: Digit) -> bool {
        d < self.b
    }

    pub fn check_digit(&self, d: Digit) -> Result<()> {
        if self.contains_digit(d) {
            Ok(())
        } else {
            Err(Error::DigitOutOfRange { digit: d, b: self.b })
        }
    }

    pub fn alphabet(&self) -> impl Iterator<Item = Digit> {
        0..self.b
    }

    /// Contraction ratio of the single map `T_d`.
    pub fn digit_ratio(&self, d: Digit) -> Rational {
        if d == 0 {
            self.inv_a()
        } else {
            self.inv_b()
        }
    }

    pub fn digit_translation(&self, d: Digit) -> Rational {
        if d == 0 {
            int(0)
        } else {
            Rational::new(d.into(), self.b.into())
        }
    }
}

/// Alias matching the validation entry point used by the CLI.
pub fn validate_params(a: i64, b: i64) -> Result<Params> {
    let a32 = u32::try_from(a).map_err(|_| Error::BlowUpBaseTooSmall(0))?;
    let b32 = u32::try_from(b).map_err(|_| Error::BasesNotOrdered { a: a32, b: 0 })?;
    Params::new(a32, b32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn accepts_two_three() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(p.overlap(), (ratio(1, 3), ratio(1, 2)));
        assert_eq!(p.boundary_points(), vec![ratio(2, 3)]);
    }

    #[test]
    fn rejects_equal_bases() {
        let err = Params::new(3, 3).unwrap_err();
        assert!(err.to_string().contains("a < b required"));
    }

    #[test]
    fn rejects_unit_a() {
        let err = Params::new(1, 5).unwrap_err();
        assert!(err.to_string().contains("a > 1 required"));
        assert!(validate_params(-2, 5).is_err());
        assert!(validate_params(4, 2).is_err());
    }
}
