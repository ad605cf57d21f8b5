//! Exact root-of-unity scalars.
//!
//! A [`Phase`] is a rational number modulo 1 standing for the unimodular
//! complex `exp(2πi·value)`. All arithmetic stays in reduced fractions, so
//! phase equality is decidable and exact. Multiplying scalars is addition
//! of phases.

use std::fmt;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A rational number modulo 1, representing the scalar `exp(2πi·num/den)`.
///
/// Invariants: `den >= 1`, `0 <= num < den`, `gcd(num, den) == 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

pub const ZERO: Phase = Phase { num: 0, den: 1 };

impl Phase {
    pub const ZERO: Phase = ZERO;
    /// The scalar -1.
    pub const HALF: Phase = Phase { num: 1, den: 2 };
    /// The scalar i.
    pub const QUARTER: Phase = Phase { num: 1, den: 4 };
    /// The scalar -i.
    pub const THREE_QUARTERS: Phase = Phase { num: 3, den: 4 };

    /// Reduced fraction `num/den` taken modulo 1. `den` must be nonzero.
    pub fn new(num: i64, den: u64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let d = den as i64;
        let n = num.rem_euclid(d) as u64;
        let g = gcd(n, den);
        Phase {
            num: n / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// Phase of the complex conjugate.
    pub fn conj(&self) -> Phase {
        self.neg()
    }

    pub fn neg(&self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }

    pub fn add(&self, other: Phase) -> Phase {
        let den = lcm(self.den, other.den);
        let num = self.num * (den / self.den) + other.num * (den / other.den);
        Phase::new(num as i64, den)
    }

    pub fn sub(&self, other: Phase) -> Phase {
        self.add(other.neg())
    }

    /// Integer multiple of the phase (the scalar raised to `k`).
    pub fn times(&self, k: i64) -> Phase {
        let n = (self.num as i64).checked_mul(k.rem_euclid(self.den as i64)).unwrap();
        Phase::new(n, self.den)
    }

    /// True if the denominator divides `modulus`, i.e. the scalar is a
    /// `modulus`-th root of unity.
    pub fn divides(&self, modulus: u64) -> bool {
        modulus.is_multiple_of(self.den)
    }

    /// Exponent `k` with this phase equal to `k/modulus`. Panics if the
    /// phase is not a `modulus`-th root of unity.
    pub fn exponent(&self, modulus: u64) -> u64 {
        assert!(
            self.divides(modulus),
            "phase {}/{} is not a {}-th root of unity",
            self.num,
            self.den,
            modulus
        );
        self.num * (modulus / self.den)
    }

    /// Phase `k/modulus`.
    pub fn from_exponent(k: i64, modulus: u64) -> Phase {
        Phase::new(k, modulus)
    }
}

impl Default for Phase {
    fn default() -> Self {
        ZERO
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "+1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "+i"),
            (3, 4) => write!(f, "-i"),
            (n, d) => write!(f, "e(2πi·{n}/{d})"),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| D::Error::custom("expected \"num/den\" phase"))?;
        let num: i64 = n.parse().map_err(D::Error::custom)?;
        let den: u64 = d.parse().map_err(D::Error::custom)?;
        if den == 0 {
            return Err(D::Error::custom("zero phase denominator"));
        }
        Ok(Phase::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_mod_one() {
        assert_eq!(Phase::new(5, 4), Phase::new(1, 4));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(2, 4), Phase::new(1, 2));
        assert_eq!(Phase::new(4, 4), ZERO);
    }

    #[test]
    fn arithmetic() {
        let i = Phase::QUARTER;
        assert_eq!(i.add(i), Phase::HALF);
        assert_eq!(i.add(i).add(i), Phase::THREE_QUARTERS);
        assert_eq!(i.times(4), ZERO);
        assert_eq!(i.conj(), Phase::THREE_QUARTERS);
        assert_eq!(Phase::new(1, 3).add(Phase::new(1, 6)), Phase::HALF);
    }

    #[test]
    fn exponents() {
        assert_eq!(Phase::QUARTER.exponent(4), 1);
        assert_eq!(Phase::HALF.exponent(4), 2);
        assert_eq!(Phase::from_exponent(7, 4), Phase::THREE_QUARTERS);
        assert!(Phase::new(1, 3).divides(12));
        assert!(!Phase::new(1, 3).divides(4));
    }
}
