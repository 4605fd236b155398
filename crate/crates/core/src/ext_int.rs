//! Saturating extended integers.
//!
//! Costs and scores throughout the crate live in `ℤ ∪ {⊤}`, where `⊤` is the
//! absorbing "forbidden" element standing in for infinite costs. Addition
//! saturates at `⊤`; `⊤` is the unique maximum, so `min` ignores it whenever a
//! finite alternative exists.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A signed integer with an absorbing top element.
///
/// The finite payload is an `i128`, which comfortably holds every constant the
/// instance builders produce (the largest is `3·M²` with `M` polynomial in
/// `n·W_max`; builders check the bound explicitly). Finite overflow is a bug,
/// not a value, and panics.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    /// A finite value.
    Fin(i128),
    /// The absorbing maximum; stands in for forbidden (`∞`) costs.
    Top,
}

pub use ExtInt::{Fin, Top};

impl ExtInt {
    /// Additive identity.
    pub const ZERO: ExtInt = Fin(0);

    /// Returns the finite payload, if any.
    pub fn finite(self) -> Option<i128> {
        match self {
            Fin(v) => Some(v),
            Top => None,
        }
    }

    /// True iff this is the absorbing top element.
    pub fn is_top(self) -> bool {
        matches!(self, Top)
    }

    /// Finite payload or a panic; for contexts where `⊤` indicates a bug.
    pub fn expect_finite(self, what: &str) -> i128 {
        match self {
            Fin(v) => v,
            Top => panic!("expected a finite value for {what}, got top"),
        }
    }
}

impl Add for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a.checked_add(b).expect("finite cost overflow")),
            _ => Top,
        }
    }
}

impl Add<i128> for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: i128) -> ExtInt {
        self + Fin(rhs)
    }
}

impl Sum for ExtInt {
    fn sum<I: Iterator<Item = ExtInt>>(iter: I) -> ExtInt {
        iter.fold(ExtInt::ZERO, |acc, x| acc + x)
    }
}

impl From<i128> for ExtInt {
    fn from(v: i128) -> ExtInt {
        Fin(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(v) => write!(f, "{v}"),
            Top => write!(f, "inf"),
        }
    }
}

// Reports serialize costs as strings: `i128` does not survive every JSON
// consumer and "inf" needs a spelling anyway.
impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ExtInt, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "inf" {
            Ok(Top)
        } else {
            s.parse::<i128>().map(Fin).map_err(D::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn top_is_absorbing_maximum() {
        assert_eq!(Fin(3) + Top, Top);
        assert_eq!(Top + Fin(-5), Top);
        assert_eq!(Top + Top, Top);
        assert_eq!(Fin(7).min(Top), Fin(7));
        assert_eq!(Top.min(Fin(i128::MIN)), Fin(i128::MIN));
        assert!(Fin(i128::MAX - 1) < Top);
    }

    #[test]
    fn serde_round_trip() {
        for v in [Fin(-42), Fin(0), Top] {
            let s = serde_json::to_string(&v).unwrap();
            let back: ExtInt = serde_json::from_str(&s).unwrap();
            assert_eq!(v, back);
        }
    }

    fn ext(v: i64) -> ExtInt {
        Fin(v as i128)
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000, c in -1_000_000i64..1_000_000, top_mask in 0u8..8) {
            let pick = |v: i64, bit: u8| if top_mask & (1 << bit) != 0 { Top } else { ext(v) };
            let (x, y, z) = (pick(a, 0), pick(b, 1), pick(c, 2));
            prop_assert_eq!((x + y) + z, x + (y + z));
        }

        #[test]
        fn min_respects_top(a in any::<i64>()) {
            prop_assert_eq!(ext(a).min(Top), ext(a));
            prop_assert_eq!(Top.min(ext(a)), ext(a));
        }
    }
}
