//! Exact dyadic ultrametric values.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// A metric value: `Zero`, or `Val(i)` standing for 2^-i.
///
/// Ordered by the value it denotes, so `Val(0)` (= 1) is the largest and a
/// larger index is a smaller value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Zero,
    Val(u32),
}

impl Level {
    pub const ONE: Level = Level::Val(0);

    pub fn index(self) -> Option<u32> {
        match self {
            Level::Zero => None,
            Level::Val(i) => Some(i),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Level::Zero
    }

    /// Value multiplied by 2^-n (`Val(i)` becomes `Val(i+n)`).
    pub fn scale_down(self, n: u32) -> Level {
        match self {
            Level::Zero => Level::Zero,
            Level::Val(i) => Level::Val(i + n),
        }
    }

    /// 2^-i as an exact fraction with denominator 2^`scale`; requires i <= scale.
    fn numerator(self, scale: u32) -> BigUint {
        match self {
            Level::Zero => BigUint::from(0u32),
            Level::Val(i) => BigUint::from(1u32) << (scale - i),
        }
    }

    /// Exact test of |self - other| <= bound.
    pub fn abs_diff_le(self, other: Level, bound: Level) -> bool {
        let scale = [self, other, bound].iter().filter_map(|l| l.index()).max().unwrap_or(0);
        let a = self.numerator(scale);
        let b = other.numerator(scale);
        let diff = if a >= b { a - b } else { b - a };
        diff <= bound.numerator(scale)
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Level::Zero, Level::Zero) => Ordering::Equal,
            (Level::Zero, Level::Val(_)) => Ordering::Less,
            (Level::Val(_), Level::Zero) => Ordering::Greater,
            (Level::Val(i), Level::Val(j)) => j.cmp(i),
        }
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Zero => write!(f, "0"),
            Level::Val(0) => write!(f, "1"),
            Level::Val(i) => write!(f, "2^-{i}"),
        }
    }
}

/// Result of comparing two prefixes: the first index where they differ, or
/// agreement on every index below the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Differ(u32),
    Exhausted(u32),
}

impl Agreement {
    /// The metric value, reading exhaustion as equality at this horizon.
    pub fn distance(self) -> Level {
        match self {
            Agreement::Differ(i) => Level::Val(i),
            Agreement::Exhausted(_) => Level::Zero,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_follows_denoted_value() {
        assert!(Level::Zero < Level::Val(5));
        assert!(Level::Val(5) < Level::Val(4));
        assert_eq!(Level::ONE, Level::Val(0));
        let mut v = vec![Level::Val(1), Level::Zero, Level::Val(3), Level::Val(0)];
        v.sort();
        assert_eq!(v, vec![Level::Zero, Level::Val(3), Level::Val(1), Level::Val(0)]);
    }

    #[test]
    fn dyadic_difference() {
        // |1/2 - 1/8| = 3/8 <= 1/2 but not <= 1/4
        assert!(Level::Val(1).abs_diff_le(Level::Val(3), Level::Val(1)));
        assert!(!Level::Val(1).abs_diff_le(Level::Val(3), Level::Val(2)));
        assert!(Level::Zero.abs_diff_le(Level::Zero, Level::Zero));
        assert!(!Level::Zero.abs_diff_le(Level::Val(40), Level::Zero));
        assert!(Level::Val(200).abs_diff_le(Level::Val(201), Level::Val(201)));
    }

    #[test]
    fn json_shape() {
        assert_eq!(serde_json::to_string(&Level::Zero).unwrap(), "\"zero\"");
        assert_eq!(serde_json::to_string(&Level::Val(3)).unwrap(), "{\"val\":3}");
    }
}
