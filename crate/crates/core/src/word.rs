use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;

pub type Digit = u32;

/// A finite digit word. Validity against an alphabet is checked by the
/// operations that take [`Params`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct DigitWord(pub Vec<Digit>);

impl DigitWord {
    pub fn new(digits: Vec<Digit>) -> Self {
        DigitWord(digits)
    }

    pub fn empty() -> Self {
        DigitWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&d| d == 0).count()
    }

    pub fn validate(&self, p: &Params) -> Result<()> {
        self.0.iter().try_for_each(|&d| p.check_digit(d))
    }

    pub fn concat(&self, other: &DigitWord) -> DigitWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DigitWord(v)
    }

    pub fn pushed(&self, d: Digit) -> DigitWord {
        let mut v = self.0.clone();
        v.push(d);
        DigitWord(v)
    }

    /// Parses a comma separated digit list; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DigitWord::empty());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<Digit>()
                    .map_err(|_| Error::Parse(format!("bad digit {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DigitWord)
    }
}

impl From<Vec<Digit>> for DigitWord {
    fn from(v: Vec<Digit>) -> Self {
        DigitWord(v)
    }
}

impl From<&[Digit]> for DigitWord {
    fn from(v: &[Digit]) -> Self {
        DigitWord(v.to_vec())
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `preperiod` followed by `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EventuallyPeriodicWord {
    preperiod: DigitWord,
    period: DigitWord,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: DigitWord, period: DigitWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(EventuallyPeriodicWord { preperiod, period })
    }

    pub fn purely_periodic(period: DigitWord) -> Result<Self> {
        Self::new(DigitWord::empty(), period)
    }

    pub fn preperiod(&self) -> &DigitWord {
        &self.preperiod
    }

    pub fn period(&self) -> &DigitWord {
        &self.period
    }

    pub fn validate(&self, p: &Params) -> Result<()> {
        self.preperiod.validate(p)?;
        self.period.validate(p)
    }

    /// Digit at position `i` (0-based) of the infinite word.
    pub fn digit(&self, i: usize) -> Digit {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod.0[i]
        } else {
            self.period.0[(i - pre) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> DigitWord {
        DigitWord((0..n).map(|i| self.digit(i)).collect())
    }

    /// The shifted word `σ^k(self)`.
    pub fn shift(&self, k: usize) -> EventuallyPeriodicWord {
        let pre = self.preperiod.len();
        if k <= pre {
            EventuallyPeriodicWord {
                preperiod: DigitWord(self.preperiod.0[k..].to_vec()),
                period: self.period.clone(),
            }
        } else {
            let r = (k - pre) % self.period.len();
            let mut rot = self.period.0[r..].to_vec();
            rot.extend_from_slice(&self.period.0[..r]);
            EventuallyPeriodicWord {
                preperiod: DigitWord::empty(),
                period: DigitWord(rot),
            }
        }
    }

    /// Parses `"pre|per"`, e.g. `"|0,1,2"` or `"0,0|2"`. A string without
    /// `|` is read as a pure period.
    pub fn parse(s: &str) -> Result<Self> {
        let (pre, per) = match s.split_once('|') {
            Some((a, b)) => (a, b),
            None => ("", s),
        };
        Self::new(DigitWord::parse(pre)?, DigitWord::parse(per)?)
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.preperiod, self.period)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_periodic() {
        let w = EventuallyPeriodicWord::parse("|0,1,2").unwrap();
        assert!(w.preperiod().is_empty());
        assert_eq!(w.period().digits(), &[0, 1, 2]);
        let w = EventuallyPeriodicWord::parse("0,0|2").unwrap();
        assert_eq!(w.preperiod().digits(), &[0, 0]);
        assert_eq!(w.to_string(), "0,0|2");
        assert_eq!(EventuallyPeriodicWord::parse("1|"), Err(Error::EmptyPeriod));
    }

    #[test]
    fn shift_rotates_period() {
        let w = EventuallyPeriodicWord::parse("5|0,1,2").unwrap();
        assert_eq!(w.shift(0), w);
        assert_eq!(w.shift(1).to_string(), "|0,1,2");
        assert_eq!(w.shift(2).to_string(), "|1,2,0");
        assert_eq!(w.shift(4).to_string(), "|0,1,2");
        assert_eq!(w.prefix(6).digits(), &[5, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn validate_checks_alphabet() {
        let p = Params::new(2, 3).unwrap();
        assert!(DigitWord::new(vec![0, 2]).validate(&p).is_ok());
        assert!(DigitWord::new(vec![0, 3]).validate(&p).is_err());
    }
}
