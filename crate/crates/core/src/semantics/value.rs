use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SemanticsError;

/// An exact rational in `[0,1]`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthValue(Rational64);

impl TruthValue {
    pub const ZERO: TruthValue = TruthValue(Rational64::new_raw(0, 1));
    pub const ONE: TruthValue = TruthValue(Rational64::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Result<TruthValue, SemanticsError> {
        if denom == 0 {
            return Err(SemanticsError::BadValue(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Rational64::new(numer, denom))
    }

    pub fn from_ratio(r: Rational64) -> Result<TruthValue, SemanticsError> {
        if r < Rational64::zero() || r > Rational64::one() {
            return Err(SemanticsError::BadValue(r.to_string()));
        }
        Ok(TruthValue(r))
    }

    /// `i/n`, for `0 ≤ i ≤ n`.
    pub fn fraction(i: usize, n: usize) -> TruthValue {
        assert!(n > 0 && i <= n, "fraction {i}/{n} outside [0,1]");
        TruthValue(Rational64::new(i as i64, n as i64))
    }

    pub fn ratio(self) -> Rational64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn min(self, other: TruthValue) -> TruthValue {
        Ord::min(self, other)
    }

    pub fn max(self, other: TruthValue) -> TruthValue {
        Ord::max(self, other)
    }

    /// Gödel implication.
    pub fn implies(self, other: TruthValue) -> TruthValue {
        if self <= other {
            Self::ONE
        } else {
            other
        }
    }

    pub fn delta(self) -> TruthValue {
        if self.is_one() {
            Self::ONE
        } else {
            Self::ZERO
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for TruthValue {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SemanticsError::BadValue(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        TruthValue::new(n, d).map_err(|_| bad())
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
