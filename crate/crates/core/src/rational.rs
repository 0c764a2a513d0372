//! Exact rationals, p-adic valuations and the string forms used in reports.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// p-adic valuation of an integer; `Infinite` for zero.
pub fn int_valuation(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    if p == 2 {
        return Valuation::Finite(x.trailing_zeros().unwrap_or(0) as i64);
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        x = q;
        v += 1;
    }
}

pub fn rational_valuation(x: &Rational, p: u64) -> Valuation {
    match int_valuation(x.numer(), p) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(vn) => match int_valuation(x.denom(), p) {
            Valuation::Finite(vd) => Valuation::Finite(vn - vd),
            Valuation::Infinite => unreachable!("denominator is never zero"),
        },
    }
}

/// `"num/den"`, denominator always present.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// p-adic valuation, with `Infinite` standing for the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, n: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= n,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Valuation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(Valuation::Infinite),
            t => t
                .parse::<i64>()
                .map(Valuation::Finite)
                .map_err(|e| format!("bad valuation {t:?}: {e}")),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(Valuation::Finite(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Binomial coefficients as exact integers, row by row.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for j in 0..n {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
        row.push(c.clone());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_rationals() {
        assert_eq!(rational_valuation(&frac(-60, 1), 2), Valuation::Finite(2));
        assert_eq!(rational_valuation(&frac(1, 12), 2), Valuation::Finite(-2));
        assert_eq!(rational_valuation(&frac(9, 7), 3), Valuation::Finite(2));
        assert_eq!(rational_valuation(&rat(0), 5), Valuation::Infinite);
    }

    #[test]
    fn valuation_ordering_puts_infinity_last() {
        let mut v = vec![Valuation::Infinite, Valuation::Finite(3), Valuation::Finite(-1)];
        v.sort();
        assert_eq!(v, vec![Valuation::Finite(-1), Valuation::Finite(3), Valuation::Infinite]);
        assert!(Valuation::Infinite.at_least(1_000));
        assert!(!Valuation::Finite(2).at_least(3));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&frac(-691, 2730)), "-691/2730");
        assert_eq!(format_rational(&rat(5)), "5/1");
        assert_eq!(parse_rational("6/-4"), Some(frac(-3, 2)));
        assert_eq!(parse_rational("17"), Some(rat(17)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn binomials() {
        let row: Vec<i64> = binomial_row(6).iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
    }
}
