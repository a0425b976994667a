//! Fixed-point route costs.
//!
//! Costs are whole micrometers. Every real-valued length is rounded up once
//! when it enters the planner; from then on all sums are exact integer
//! additions, so two searches over the same edges agree to the last digit
//! regardless of the order in which they add things up.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

const PER_METER: f64 = 1e6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cost(u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const MAX: Cost = Cost(u64::MAX);

    /// Rounds up to the next micrometer. Negative and NaN inputs give zero.
    pub fn from_meters(m: f64) -> Cost {
        if !(m > 0.0) {
            return Cost::ZERO;
        }
        let v = (m * PER_METER).ceil();
        if v >= u64::MAX as f64 {
            Cost::MAX
        } else {
            Cost(v as u64)
        }
    }

    /// Largest cost not above `m`; used for heuristics, which must not
    /// overestimate.
    pub fn floor_meters(m: f64) -> Cost {
        if !(m > 0.0) {
            return Cost::ZERO;
        }
        Cost(((m * PER_METER).floor()).min(u64::MAX as f64) as u64)
    }

    pub const fn from_micros(um: u64) -> Cost {
        Cost(um)
    }

    pub const fn micros(self) -> u64 {
        self.0
    }

    pub fn meters(self) -> f64 {
        self.0 as f64 / PER_METER
    }

    /// Multiplies and rounds up. Exact for integer factors.
    pub fn scale(self, factor: f64) -> Cost {
        if !(factor > 0.0) {
            return Cost::ZERO;
        }
        let v = (self.0 as f64 * factor).ceil();
        if v >= u64::MAX as f64 {
            Cost::MAX
        } else {
            Cost(v as u64)
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0.saturating_add(rhs.0))
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        *self = *self + rhs;
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:06} m", self.0 / 1_000_000, self.0 % 1_000_000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rounding() {
        assert_eq!(Cost::from_meters(1.0).micros(), 1_000_000);
        assert_eq!(Cost::from_meters(0.1).micros(), 100_000);
        assert_eq!(Cost::from_meters(1e-7).micros(), 1);
        assert_eq!(Cost::from_meters(-3.0), Cost::ZERO);
        assert_eq!(Cost::from_meters(f64::NAN), Cost::ZERO);
        assert_eq!(Cost::floor_meters(1.0000009).micros(), 1_000_000);
    }

    #[test]
    fn display() {
        assert_eq!(Cost::from_micros(157_570_000).to_string(), "157.570000 m");
    }

    proptest! {
        #[test]
        fn integer_scaling_is_exact(parts in proptest::collection::vec(0u64..10_000_000_000, 1..20), k in 0u32..50) {
            let total: Cost = parts.iter().map(|p| Cost::from_micros(*p)).sum();
            let scaled: Cost = parts.iter().map(|p| Cost::from_micros(*p).scale(k as f64)).sum();
            prop_assert_eq!(scaled.micros(), total.micros() * k as u64);
        }

        #[test]
        fn ceil_never_undercounts(m in 0.0f64..1e5) {
            // Up to float noise in the product itself.
            prop_assert!(Cost::from_meters(m).meters() >= m - 1e-9);
            prop_assert!(Cost::floor_meters(m).meters() <= m + 1e-9);
        }
    }
}
