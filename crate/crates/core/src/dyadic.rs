//! Exact non-negative dyadic rationals `m / 2^e`.
//!
//! Every Kraft sum is a finite sum of powers of two, so Kraft matrices, their
//! powers and all row sums live exactly in this type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Non-negative dyadic rational in canonical form: the mantissa is odd, or
/// zero with a zero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mantissa: BigUint,
    exponent: u64,
}

impl Dyadic {
    pub fn new(mantissa: BigUint, exponent: u64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0).min(exponent);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^{-len}`, the Kraft weight of a codeword of `len` bits.
    pub fn pow2_neg(len: u64) -> Self {
        Dyadic {
            mantissa: BigUint::one(),
            exponent: len,
        }
    }

    /// `2^{k}` for a non-negative integer power.
    pub fn pow2(k: u64) -> Self {
        Dyadic::new(BigUint::one() << k, 0)
    }

    pub fn from_u64(n: u64) -> Self {
        Dyadic::new(BigUint::from(n), 0)
    }

    pub fn from_biguint(n: BigUint) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        Dyadic::new(&self.mantissa * BigUint::from(k), self.exponent)
    }

    pub fn mul_biguint(&self, k: &BigUint) -> Self {
        Dyadic::new(&self.mantissa * k, self.exponent)
    }

    fn aligned(&self, exponent: u64) -> BigUint {
        &self.mantissa << (exponent - self.exponent)
    }

    /// Nearest `f64` (truncated to the top 64 mantissa bits).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mantissa >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        ldexp(top, shift as i64 - self.exponent as i64)
    }

    /// Exact decimal expansion (terminates since the denominator is a power of two).
    pub fn to_decimal_string(&self) -> String {
        if self.exponent == 0 {
            return self.mantissa.to_string();
        }
        let e = self.exponent as usize;
        let scaled = &self.mantissa * BigUint::from(5u32).pow(self.exponent as u32);
        let digits = scaled.to_string();
        let (int_part, frac_part) = if digits.len() > e {
            let (a, b) = digits.split_at(digits.len() - e);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(e - digits.len()), digits))
        };
        format!("{}.{}", int_part, frac_part.trim_end_matches('0'))
    }
}

/// `x * 2^k` without intermediate overflow for large |k|.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.aligned(e).cmp(&other.aligned(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.aligned(e) + rhs.aligned(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + x)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/2^{}", self.mantissa, self.exponent)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DyadicRepr {
    m: String,
    e: u64,
}

// Lossless wire form: {"m": "<decimal mantissa>", "e": exponent}.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DyadicRepr {
            m: self.mantissa.to_string(),
            e: self.exponent,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DyadicRepr::deserialize(deserializer)?;
        let m: BigUint = repr
            .m
            .parse()
            .map_err(|_| D::Error::custom(format!("bad mantissa `{}`", repr.m)))?;
        Ok(Dyadic::new(m, repr.e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: u64, e: u64) -> Dyadic {
        Dyadic::new(BigUint::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, 4);
        assert_eq!(x.mantissa(), &BigUint::from(3u32));
        assert_eq!(x.exponent(), 2);
        let z = d(0, 9);
        assert_eq!(z.exponent(), 0);
        assert_eq!(z, Dyadic::zero());
        // integers keep exponent zero
        assert_eq!(d(8, 0).exponent(), 0);
    }

    #[test]
    fn arithmetic() {
        let three_quarters = &Dyadic::pow2_neg(1) + &Dyadic::pow2_neg(2);
        assert_eq!(three_quarters, d(3, 2));
        assert_eq!(&three_quarters * &three_quarters, d(9, 4));
        assert_eq!(&Dyadic::pow2_neg(1) + &Dyadic::pow2_neg(1), Dyadic::one());
        assert!(d(3, 2) < Dyadic::one());
        assert!(d(5, 2) > Dyadic::from_u64(1));
        assert_eq!(Dyadic::pow2(3), Dyadic::from_u64(8));
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(d(3, 4).to_decimal_string(), "0.1875");
        assert_eq!(d(5, 2).to_decimal_string(), "1.25");
        assert_eq!(Dyadic::from_u64(16).to_decimal_string(), "16");
        assert_eq!(d(3, 2).to_f64(), 0.75);
    }

    #[test]
    fn serde_is_lossless() {
        let x = &Dyadic::pow2_neg(300) + &Dyadic::from_u64(7);
        let json = serde_json::to_string(&x).unwrap();
        let back: Dyadic = serde_json::from_str(&json).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn to_f64_handles_wide_values() {
        let tiny = Dyadic::pow2_neg(1070);
        assert!(tiny.to_f64() > 0.0);
        let big = Dyadic::pow2(2000);
        assert!(big.to_f64().is_infinite());
        let x = &Dyadic::pow2(100) + &Dyadic::pow2_neg(100);
        assert_eq!(x.to_f64(), 2f64.powi(100));
    }

    proptest! {
        #[test]
        fn ring_laws(a in 0u64..1 << 20, ea in 0u64..40, b in 0u64..1 << 20, eb in 0u64..40, c in 0u64..1 << 10, ec in 0u64..20) {
            let (a, b, c) = (d(a, ea), d(b, eb), d(c, ec));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            let fa = a.to_f64();
            let fb = b.to_f64();
            prop_assert_eq!(a.cmp(&b), fa.partial_cmp(&fb).unwrap());
        }
    }
}
