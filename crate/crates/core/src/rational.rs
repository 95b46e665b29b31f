use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Zp};

/// A reduced fraction with positive denominator, written `num/den` (or `num`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational {
    num: i64,
    den: u64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Rational> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Ok(Rational {
            num: n,
            den: d as u64,
        })
    }

    pub const fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Image in Z_p; fails when p divides the denominator.
    pub fn to_padic(&self, zp: &Zp) -> Result<PAdicInt> {
        if self.den % zp.p() == 0 {
            return Err(Error::Domain {
                op: "rational to Z_p",
                why: format!("{self} is not {}-integral", zp.p()),
            });
        }
        zp.from_ratio(self.num as i128, self.den as i128)
    }

    /// Residue modulo `m`, when the denominator is invertible mod `m`.
    pub fn residue_mod(&self, m: u64) -> Option<u64> {
        let m_i = m as i128;
        let inv = modinv_i128(self.den as i128 % m_i, m_i)?;
        Some(((self.num as i128).rem_euclid(m_i) * inv).rem_euclid(m_i) as u64)
    }

    /// `n·den - num`, whose p-adic valuation equals `ν_p(n - self)` when
    /// the denominator is prime to p.
    pub fn numerator_of_difference(&self, n: i128) -> BigInt {
        BigInt::from(n) * BigInt::from(self.den) - BigInt::from(self.num)
    }
}

pub(crate) fn modinv_i128(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Solution of `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for coprime moduli, as
/// `(x mod m1·m2, m1·m2)`.
pub fn crt((r1, m1): (i128, i128), (r2, m2): (i128, i128)) -> Option<(i128, i128)> {
    let inv = modinv_i128(m1 % m2, m2)?;
    let m = m1.checked_mul(m2)?;
    let t = (BigInt::from((r2 - r1).rem_euclid(m2)) * inv).mod_floor(&BigInt::from(m2));
    let t = i128::try_from(t).expect("reduced below m2");
    Some((r1.rem_euclid(m1).checked_add(m1.checked_mul(t)?)?.rem_euclid(m), m))
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Rational::integer(s.parse().map_err(|_| bad())?)),
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The integer zeros of T.
pub const INTEGER_TARGETS: [Rational; 4] = [
    Rational::integer(0),
    Rational::integer(-1),
    Rational::integer(-4),
    Rational::integer(-17),
];

/// The two non-integral rational twisted zeros of T.
pub const FRACTIONAL_TARGETS: [Rational; 2] = [Rational { num: 1, den: 3 }, Rational { num: -5, den: 3 }];

/// All six rational twisted zeros, integers first.
pub fn rational_targets() -> [Rational; 6] {
    [
        INTEGER_TARGETS[0],
        INTEGER_TARGETS[1],
        INTEGER_TARGETS[2],
        INTEGER_TARGETS[3],
        FRACTIONAL_TARGETS[0],
        FRACTIONAL_TARGETS[1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let r: Rational = "-10/6".parse().unwrap();
        assert_eq!(r, Rational::new(-5, 3).unwrap());
        assert_eq!(r.to_string(), "-5/3");
        assert_eq!("17".parse::<Rational>().unwrap().to_string(), "17");
        assert_eq!(Rational::new(2, -4).unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(FRACTIONAL_TARGETS[0].residue_mod(5), Some(2));
        assert_eq!(FRACTIONAL_TARGETS[1].residue_mod(5), Some(0));
        assert_eq!(FRACTIONAL_TARGETS[0].residue_mod(39), None);
        assert_eq!(Rational::integer(-17).residue_mod(13), Some(9));
    }

    #[test]
    fn chinese_remainders() {
        assert_eq!(crt((12, 13), (80, 81)), Some((1052, 1053)));
        assert_eq!(crt((0, 4), (3, 9)), Some((12, 36)));
        assert_eq!(crt((1, 6), (1, 4)), None);
        assert_eq!(crt((0, 7), (0, 1)), Some((0, 7)));
        let big = 587i128.pow(8);
        let (x, m) = crt((5, 293), (big - 3, big)).unwrap();
        assert_eq!((x % 293, x % big, m), (5, big - 3, 293 * big));
    }

    #[test]
    fn padic_image() {
        let zp = Zp::new(7, 5).unwrap();
        let third = FRACTIONAL_TARGETS[0].to_padic(&zp).unwrap();
        assert_eq!(third.mul_int(3), zp.one());
        assert!(FRACTIONAL_TARGETS[0].to_padic(&Zp::new(3, 4).unwrap()).is_err());
    }
}
