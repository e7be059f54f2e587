//! Exact rational arithmetic for approximation parameters and weight scaling.
//!
//! Every threshold that decides a branch in the algorithms is computed here
//! with big rationals and only then converted to an integer unit count.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, ToPrimitive, Zero};
use num::Integer;

use crate::error::Error;

/// Values above this are treated as "unbounded" when converted to units.
pub const UNIT_SATURATION: u64 = u64::MAX / 8;

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn to_u64_saturating(x: &BigInt) -> u64 {
    if x.sign() == num::bigint::Sign::Minus {
        return 0;
    }
    match x.to_u64() {
        Some(v) if v < UNIT_SATURATION => v,
        _ => UNIT_SATURATION,
    }
}

pub fn floor_u64(x: &BigRational) -> u64 {
    to_u64_saturating(&x.floor().to_integer())
}

pub fn ceil_u64(x: &BigRational) -> u64 {
    to_u64_saturating(&x.ceil().to_integer())
}

/// Approximation parameter epsilon, kept as an exact fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eps {
    value: BigRational,
    base: BigRational,
}

impl Eps {
    pub fn new(value: BigRational) -> Result<Self, Error> {
        if value <= BigRational::zero() {
            return Err(Error::Param(format!("epsilon must be positive, got {value}")));
        }
        let base = BigRational::one() + &value;
        Ok(Eps { value, base })
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Eps::new(ratio(n, d)).expect("positive epsilon")
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// (1 + eps)^e for any integer exponent.
    pub fn pow(&self, e: i64) -> BigRational {
        if e >= 0 {
            Pow::pow(&self.base, e as u64)
        } else {
            Pow::pow(&self.base.recip(), (-e) as u64)
        }
    }

    /// Smallest e >= 0 with (1+eps)^e >= x. Values below 1 map to 0.
    pub fn ceil_log(&self, x: &BigRational) -> i64 {
        let mut e = 0i64;
        let mut p = BigRational::one();
        while &p < x {
            p *= &self.base;
            e += 1;
        }
        e
    }

    /// Largest e >= 0 with (1+eps)^e <= x, for x >= 1.
    pub fn floor_log(&self, x: &BigRational) -> i64 {
        let mut e = 0i64;
        let mut p = self.base.clone();
        while &p <= x {
            p *= &self.base;
            e += 1;
        }
        e
    }

    /// ceil(log_{1+eps} x) for an integer x >= 1.
    pub fn ceil_log_int(&self, x: u64) -> i64 {
        self.ceil_log(&int(x))
    }

    /// eps / d, used when recalibrating epsilon for compounding factors.
    pub fn divided(&self, d: u64) -> Eps {
        Eps::new(&self.value / int(d)).expect("positive")
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FromStr for Eps {
    type Err = Error;

    /// Accepts decimals ("0.05") and fractions ("1/20").
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Param(format!("cannot parse epsilon '{s}'"));
        let value = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else if let Some((ip, fp)) = s.split_once('.') {
            let digits = format!("{ip}{fp}");
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let d = Pow::pow(&BigInt::from(10), fp.len() as u32);
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(s.parse().map_err(|_| bad())?)
        };
        Eps::new(value)
    }
}

/// Power rounding: for (1+eps)^i <= w < (1+eps)^{i+1} the
/// rounded weight is floor((1+eps)^{i+1}).
pub fn round_weight_up(w: u64, eps: &Eps) -> u64 {
    let x = int(w);
    let i = eps.floor_log(&x);
    floor_u64(&eps.pow(i + 1))
}

/// Converts weights of a graph to integer multiples of a fixed unit:
/// w maps to ceil(w / unit).
#[derive(Clone, Debug)]
pub struct Scaler {
    unit: BigRational,
    fast: Option<(u128, u128)>,
}

impl Scaler {
    pub fn new(unit: BigRational) -> Self {
        assert!(unit > BigRational::zero(), "unit must be positive");
        let fast = match (unit.numer().to_u128(), unit.denom().to_u128()) {
            (Some(n), Some(d)) if n < (1 << 60) && d < (1 << 60) => Some((n, d)),
            _ => None,
        };
        Scaler { unit, fast }
    }

    /// unit = eps (1+eps)^r / h, the scaling behind the hop-rounded graphs.
    pub fn hop_rounding(eps: &Eps, h: &BigRational, r: i64) -> Self {
        Scaler::new(eps.value() * eps.pow(r) / h)
    }

    pub fn unit(&self) -> &BigRational {
        &self.unit
    }

    /// ceil(w / unit)
    pub fn units(&self, w: u64) -> u64 {
        if let Some((n, d)) = self.fast {
            let num = w as u128 * d;
            let q = num.div_ceil(n);
            return if q < UNIT_SATURATION as u128 { q as u64 } else { UNIT_SATURATION };
        }
        let x = BigInt::from(w) * self.unit.denom();
        let (q, r) = x.div_rem(self.unit.numer());
        let q = if r.is_zero() { q } else { q + 1 };
        to_u64_saturating(&q)
    }

    /// floor(threshold / unit): the largest unit count not exceeding threshold.
    pub fn floor_units(&self, threshold: &BigRational) -> u64 {
        floor_u64(&(threshold / &self.unit))
    }

    pub fn to_real(&self, units: u64) -> BigRational {
        int(units) * &self.unit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_eps_forms() {
        assert_eq!("0.05".parse::<Eps>().unwrap().value(), &ratio(1, 20));
        assert_eq!("1/3".parse::<Eps>().unwrap().value(), &ratio(1, 3));
        assert_eq!("1".parse::<Eps>().unwrap().value(), &ratio(1, 1));
        assert!("0".parse::<Eps>().is_err());
        assert!("x".parse::<Eps>().is_err());
    }

    #[test]
    fn power_rounding_values() {
        let one = Eps::from_ratio(1, 1);
        assert_eq!(round_weight_up(5, &one), 8);
        assert_eq!(round_weight_up(6, &one), 8);
        assert_eq!(round_weight_up(8, &one), 16);
        assert_eq!(round_weight_up(1, &one), 2);
        let half = Eps::from_ratio(1, 2);
        assert_eq!(round_weight_up(1, &half), 1);
        assert_eq!(round_weight_up(2, &half), 2);
        assert_eq!(round_weight_up(3, &half), 3);
        assert_eq!(round_weight_up(4, &half), 5);
    }

    #[test]
    fn hop_scaler_unit() {
        let eps = Eps::from_ratio(1, 2);
        let s = Scaler::hop_rounding(&eps, &int(3), 2);
        assert_eq!(s.unit(), &ratio(3, 8));
        assert_eq!(s.units(1), 3);
        assert_eq!(s.to_real(s.units(1)), ratio(9, 8));
        assert_eq!(s.floor_units(&ratio(3, 2)), 4);
    }

    #[test]
    fn big_path_matches_fast_path() {
        let eps = Eps::from_ratio(1, 20);
        let s = Scaler::hop_rounding(&eps, &int(12), 90);
        for w in [1u64, 7, 16, 500] {
            let direct = ceil_u64(&(int(w) / s.unit()));
            assert_eq!(s.units(w), direct);
        }
    }

    #[test]
    fn logs() {
        let eps = Eps::from_ratio(1, 1);
        assert_eq!(eps.ceil_log_int(1), 0);
        assert_eq!(eps.ceil_log_int(5), 3);
        assert_eq!(eps.ceil_log_int(8), 3);
        assert_eq!(eps.floor_log(&int(7)), 2);
        assert_eq!(eps.floor_log(&int(8)), 3);
    }
}
