//! Bounded-precision arithmetic in Z_p.
//!
//! A [`PAdicInt`] is a residue modulo `p^K` together with its known
//! valuation; the residue 0 means "valuation at least K". The exponential,
//! logarithm and cube root are implemented for odd unramified `p` on the
//! disks where they converge (`exp` on `pZ_p`, `log` on `1 + pZ_p`).
//!
//! Series are truncated at the first index from which every remaining term
//! is provably divisible by `p^K`, using `ν_p(n!) <= (n-1)/(p-1)` and
//! `ν_p(n) <= log_p(n)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::is_prime;

/// A p-adic valuation, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
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

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `ν_p(x)` for nonzero `x`.
pub fn val_int(x: i128, p: u64) -> Result<u32> {
    check_prime(p)?;
    if x == 0 {
        return Err(Error::ZeroValuation);
    }
    let p = p as u128;
    let mut m = x.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Ok(v)
}

/// `ν_p(x)` with `ν_p(0) = ∞`.
pub fn val_big(x: &BigInt, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(val_biguint_unchecked(x.magnitude(), p)))
}

pub(crate) fn val_biguint_unchecked(x: &BigUint, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let pb = BigUint::from(p);
    let mut m = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Valuation of `x` when `x` is known modulo `p^prec`; zero maps to `prec`.
pub(crate) fn truncated_val(x: &BigUint, p: u64, prec: u32) -> u32 {
    if x.is_zero() {
        prec
    } else {
        val_biguint_unchecked(x, p).min(prec)
    }
}

pub(crate) fn p_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

pub(crate) fn reduce_signed(x: &BigInt, m: &BigUint) -> BigUint {
    let r = x.magnitude() % m;
    if x.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

/// Unit part and p-exponent of a positive integer.
fn split_p(mut n: u64, p: u64) -> (u64, u32) {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (n, v)
}

/// Operations the exp/log series need; implemented by [`PAdicInt`] and by
/// elements of unramified extensions.
pub(crate) trait LocalRing: Clone {
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    fn modulus(&self) -> &BigUint;
    fn one_like(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigUint) -> Self;
    /// Coordinate-wise floor division by `p^k`. Exact on the low
    /// `precision() - k` digits when every coordinate is divisible by `p^k`.
    fn shift_down(&self, k: u32) -> Self;
}

/// Truncated `exp(y)` for `ν_p(y) >= 1`, `p` odd.
///
/// With `t = y/p` the n-th term is `p^(n-ν(n!)) / u(n!) * t^n`, whose
/// p-power is at least 1, so the unknown top digit of `t` never reaches the
/// result.
pub(crate) fn exp_series<R: LocalRing>(y: &R) -> R {
    let p = y.prime();
    let prec = y.precision();
    let m = y.modulus().clone();
    let t = y.shift_down(1);
    let mut sum = y.one_like();
    let mut power = y.one_like();
    let mut unit_fact = BigUint::one();
    let mut v_fact = 0u32;
    let mut n = 1u64;
    // n - floor((n-1)/(p-1)) bounds ν(p^n/n!) from below and is nondecreasing.
    while n - (n - 1) / (p - 1) < prec as u64 {
        let (w, v) = split_p(n, p);
        v_fact += v;
        unit_fact = (unit_fact * w) % &m;
        power = power.ring_mul(&t);
        let shift = n as u32 - v_fact;
        if shift < prec {
            let inv = unit_fact.modinv(&m).expect("unit part of n! is invertible");
            let coeff = (p_pow(p, shift) * inv) % &m;
            sum = sum.ring_add(&power.scale(&coeff));
        }
        n += 1;
    }
    sum
}

/// Truncated `log(x)` for `x ≡ 1 (mod p)`, `p` odd.
pub(crate) fn log_series<R: LocalRing>(x: &R) -> R {
    let p = x.prime();
    let prec = x.precision();
    let m = x.modulus().clone();
    let one = x.one_like();
    let t = x.ring_sub(&one).shift_down(1);
    let mut sum = one.scale(&BigUint::zero());
    let mut power = x.one_like();
    let mut n = 1u64;
    loop {
        // ν(p^n / n) >= n - floor(log_p n), nondecreasing in n.
        let mut log_floor = 0u32;
        let mut q = p;
        while q <= n {
            log_floor += 1;
            q = q.saturating_mul(p);
        }
        if n - log_floor as u64 >= prec as u64 {
            break;
        }
        power = power.ring_mul(&t);
        let (w, v) = split_p(n, p);
        let shift = n as u32 - v;
        if shift < prec {
            let inv = BigUint::from(w).modinv(&m).expect("unit part of n is invertible");
            let mut coeff = (p_pow(p, shift) * inv) % &m;
            if n % 2 == 0 && !coeff.is_zero() {
                coeff = &m - coeff;
            }
            sum = sum.ring_add(&power.scale(&coeff));
        }
        n += 1;
    }
    sum
}

#[derive(Debug, PartialEq, Eq)]
struct ZpInner {
    p: u64,
    prec: u32,
    modulus: BigUint,
}

/// The ring `Z/p^K`, viewed as Z_p known to K digits.
#[derive(Debug, Clone)]
pub struct Zp(Arc<ZpInner>);

impl PartialEq for Zp {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.prec == other.0.prec
    }
}
impl Eq for Zp {}

impl Zp {
    /// Rejects non-primes, and the ramified primes 2 and 11.
    pub fn new(p: u64, prec: u32) -> Result<Zp> {
        check_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime(2, "exp/log need an odd prime"));
        }
        if p == 11 {
            return Err(Error::UnsupportedPrime(11, "ramified in the splitting field"));
        }
        Self::new_unchecked(p, prec)
    }

    pub(crate) fn new_unchecked(p: u64, prec: u32) -> Result<Zp> {
        if prec == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Zp(Arc::new(ZpInner {
            p,
            prec,
            modulus: p_pow(p, prec),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn prec(&self) -> u32 {
        self.0.prec
    }

    /// `p^K`.
    pub fn modulus(&self) -> &BigUint {
        &self.0.modulus
    }

    pub fn with_prec(&self, prec: u32) -> Result<Zp> {
        if prec == self.prec() {
            Ok(self.clone())
        } else {
            Zp::new_unchecked(self.p(), prec)
        }
    }

    pub fn from_biguint(&self, x: BigUint) -> PAdicInt {
        let residue = x % self.modulus();
        let val = truncated_val(&residue, self.p(), self.prec());
        PAdicInt {
            ring: self.clone(),
            residue,
            val,
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> PAdicInt {
        self.from_biguint(reduce_signed(x, self.modulus()))
    }

    pub fn from_int(&self, x: i128) -> PAdicInt {
        self.from_bigint(&BigInt::from(x))
    }

    /// `num/den` with `den` prime to p.
    pub fn from_ratio(&self, num: i128, den: i128) -> Result<PAdicInt> {
        let d = self.from_int(den);
        let inv = d.inv()?;
        Ok(&self.from_int(num) * &inv)
    }

    pub fn zero(&self) -> PAdicInt {
        self.from_biguint(BigUint::zero())
    }

    pub fn one(&self) -> PAdicInt {
        self.from_biguint(BigUint::one())
    }
}

/// An element of Z_p known modulo `p^K`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "PAdicRepr", try_from = "PAdicRepr")]
pub struct PAdicInt {
    ring: Zp,
    residue: BigUint,
    val: u32,
}

#[derive(Serialize, Deserialize)]
struct PAdicRepr {
    p: u64,
    prec: u32,
    residue: String,
}

impl From<PAdicInt> for PAdicRepr {
    fn from(x: PAdicInt) -> Self {
        PAdicRepr {
            p: x.p(),
            prec: x.prec(),
            residue: x.residue.to_string(),
        }
    }
}

impl TryFrom<PAdicRepr> for PAdicInt {
    type Error = Error;
    fn try_from(r: PAdicRepr) -> Result<Self> {
        let ring = Zp::new(r.p, r.prec)?;
        let v: BigUint = r
            .residue
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue {:?}", r.residue)))?;
        if &v >= ring.modulus() {
            return Err(Error::Parse("residue out of range".into()));
        }
        Ok(ring.from_biguint(v))
    }
}

impl PartialEq for PAdicInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.residue == other.residue
    }
}
impl Eq for PAdicInt {}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p(), self.prec())
    }
}

impl PAdicInt {
    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn prec(&self) -> u32 {
        self.ring.prec()
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// `min(ν_p(residue), K)`.
    pub fn val(&self) -> u32 {
        self.val
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.val)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.val == 0
    }

    /// Representative in `(-p^K/2, p^K/2]`.
    pub fn to_signed(&self) -> BigInt {
        let m = self.ring.modulus();
        let half = m >> 1u32;
        if self.residue > half {
            BigInt::from_biguint(Sign::Minus, m - &self.residue)
        } else {
            BigInt::from_biguint(Sign::Plus, self.residue.clone())
        }
    }

    /// Base-p digits, least significant first, exactly `K` of them.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigUint::from(self.p());
        let mut m = self.residue.clone();
        (0..self.prec())
            .map(|_| {
                let (q, r) = m.div_rem(&pb);
                m = q;
                r.to_u64().unwrap_or(0)
            })
            .collect()
    }

    /// Reduces to a lower precision; asking for more precision than known is
    /// clamped.
    pub fn reduce(&self, prec: u32) -> PAdicInt {
        let prec = prec.min(self.prec()).max(1);
        let ring = self.ring.with_prec(prec).expect("prec >= 1");
        ring.from_biguint(self.residue.clone())
    }

    /// Agreement modulo `p^k` (k clamped to both precisions).
    pub fn eq_mod(&self, other: &PAdicInt, k: u32) -> bool {
        if self.p() != other.p() {
            return false;
        }
        let k = k.min(self.prec()).min(other.prec());
        let m = p_pow(self.p(), k);
        (&self.residue % &m) == (&other.residue % &m)
    }

    fn common(&self, other: &PAdicInt) -> Result<Zp> {
        if self.p() != other.p() {
            return Err(Error::PrimeMismatch(self.p(), other.p()));
        }
        Ok(if self.prec() <= other.prec() {
            self.ring.clone()
        } else {
            other.ring.clone()
        })
    }

    pub fn try_add(&self, other: &PAdicInt) -> Result<PAdicInt> {
        let r = self.common(other)?;
        Ok(r.from_biguint(&self.residue + &other.residue))
    }

    pub fn try_sub(&self, other: &PAdicInt) -> Result<PAdicInt> {
        let r = self.common(other)?;
        let m = r.modulus();
        let a = &self.residue % m;
        let b = &other.residue % m;
        Ok(r.from_biguint(a + m - b))
    }

    pub fn try_mul(&self, other: &PAdicInt) -> Result<PAdicInt> {
        let r = self.common(other)?;
        Ok(r.from_biguint(&self.residue * &other.residue))
    }

    pub fn mul_int(&self, c: i128) -> PAdicInt {
        self * &self.ring.from_int(c)
    }

    pub fn pow(&self, e: u64) -> PAdicInt {
        let e = BigUint::from(e);
        self.ring
            .from_biguint(self.residue.modpow(&e, self.ring.modulus()))
    }

    /// Inverse of a unit.
    pub fn inv(&self) -> Result<PAdicInt> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let inv = self
            .residue
            .modinv(self.ring.modulus())
            .ok_or(Error::NotUnit)?;
        Ok(self.ring.from_biguint(inv))
    }

    /// Exact division by `p^k`; the result is known to `K - k` digits.
    pub fn div_p_pow(&self, k: u32) -> Result<PAdicInt> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.prec() {
            return Err(Error::Domain {
                op: "div_p_pow",
                why: format!("dividing by p^{k} leaves no known digits"),
            });
        }
        if self.val < k {
            return Err(Error::Domain {
                op: "div_p_pow",
                why: format!("valuation {} < {k}", self.val),
            });
        }
        let ring = self.ring.with_prec(self.prec() - k)?;
        Ok(ring.from_biguint(&self.residue / p_pow(self.p(), k)))
    }

    /// Multiplication by `p^k`, keeping the precision `K`.
    pub fn mul_p_pow(&self, k: u32) -> PAdicInt {
        self.ring
            .from_biguint(&self.residue * p_pow(self.p(), k))
    }

    /// `exp(z)` for `z ∈ pZ_p`.
    pub fn exp(&self) -> Result<PAdicInt> {
        if self.val < 1 {
            return Err(Error::Domain {
                op: "exp",
                why: "argument must lie in pZ_p".into(),
            });
        }
        Ok(exp_series(self))
    }

    /// `log(u)` for `u ≡ 1 (mod p)`.
    pub fn log(&self) -> Result<PAdicInt> {
        let one = self.ring.one();
        if (self - &one).val() < 1 {
            return Err(Error::Domain {
                op: "log",
                why: "argument must be ≡ 1 (mod p)".into(),
            });
        }
        Ok(log_series(self))
    }

    /// The unique cube root of a unit when `p ≡ 2 (mod 3)`.
    pub fn cube_root(&self) -> Result<PAdicInt> {
        let p = self.p();
        if p == 3 {
            return Err(Error::UnsupportedPrime(3, "cube roots need p ≠ 3"));
        }
        if p % 3 == 1 {
            return Err(Error::Domain {
                op: "cube_root",
                why: format!("p = {p} ≡ 1 (mod 3): cube roots are not unique"),
            });
        }
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        // y0 = u^((2p-1)/3) inverts cubing on F_p^x.
        let e = ((2 * p - 1) / 3) % (p - 1);
        let u0 = (&self.residue % p).to_u64().unwrap_or(0);
        let y0 = crate::factor::pow_mod(u0, e, p);
        let mut y = self.ring.from_int(y0 as i128);
        let three = self.ring.from_int(3);
        for _ in 0..=64 {
            let f = &y.pow(3) - self;
            if f.is_zero() {
                return Ok(y);
            }
            let df = &three * &y.pow(2);
            y = &y - &(&f * &df.inv()?);
        }
        Err(Error::Certificate("cube root Newton iteration did not settle".into()))
    }
}

impl LocalRing for PAdicInt {
    fn prime(&self) -> u64 {
        self.p()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn modulus(&self) -> &BigUint {
        self.ring.modulus()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &BigUint) -> Self {
        self.ring.from_biguint(&self.residue * c)
    }
    fn shift_down(&self, k: u32) -> Self {
        self.ring
            .from_biguint(&self.residue / p_pow(self.p(), k))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a PAdicInt> for &'a PAdicInt {
            type Output = PAdicInt;
            fn $method(self, rhs: &'a PAdicInt) -> PAdicInt {
                self.$checked(rhs).expect("p-adic operands over different primes")
            }
        }
        impl $tr<PAdicInt> for PAdicInt {
            type Output = PAdicInt;
            fn $method(self, rhs: PAdicInt) -> PAdicInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &PAdicInt {
    type Output = PAdicInt;
    fn neg(self) -> PAdicInt {
        &self.ring.zero() - self
    }
}

impl Neg for PAdicInt {
    type Output = PAdicInt;
    fn neg(self) -> PAdicInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp(p: u64, k: u32) -> Zp {
        Zp::new(p, k).unwrap()
    }

    #[test]
    fn val_int_examples() {
        assert_eq!(val_int(24, 2).unwrap(), 3);
        assert_eq!(val_int(121_415, 5).unwrap(), 1);
        assert_eq!(val_int(927, 3).unwrap(), 2);
        assert_eq!(val_int(0, 5), Err(Error::ZeroValuation));
        assert_eq!(val_int(10, 4), Err(Error::NotPrime(4)));
        assert_eq!(val_big(&BigInt::zero(), 7).unwrap(), Valuation::Infinite);
    }

    #[test]
    fn rejects_ramified_and_composite() {
        assert!(matches!(Zp::new(2, 5), Err(Error::UnsupportedPrime(2, _))));
        assert!(matches!(Zp::new(11, 5), Err(Error::UnsupportedPrime(11, _))));
        assert_eq!(Zp::new(9, 5), Err(Error::NotPrime(9)));
        assert_eq!(Zp::new(5, 0), Err(Error::ZeroPrecision));
    }

    #[test]
    fn inverse_examples() {
        let r = zp(5, 3);
        assert_eq!(r.one().inv().unwrap(), r.one());
        assert_eq!(r.from_int(2).inv().unwrap(), r.from_int(63));
        // extended-gcd oracle: 3 * 113 = 339 = 2*169 + 1
        let r = zp(13, 2);
        assert_eq!(r.from_int(3).inv().unwrap(), r.from_int(113));
        assert_eq!(r.from_int(13).inv(), Err(Error::NotUnit));
    }

    #[test]
    fn known_val_semantics() {
        let r = zp(5, 4);
        assert_eq!(r.zero().val(), 4);
        assert_eq!(r.from_int(50).val(), 2);
        assert_eq!(r.from_int(-1).residue(), &BigUint::from(624u32));
        assert_eq!(r.from_int(-3).to_signed(), BigInt::from(-3));
    }

    #[test]
    fn mismatched_primes_are_errors() {
        let a = zp(5, 4).one();
        let b = zp(7, 4).one();
        assert_eq!(a.try_add(&b), Err(Error::PrimeMismatch(5, 7)));
        assert_eq!(a.try_mul(&b), Err(Error::PrimeMismatch(5, 7)));
    }

    /// Series summation with exact rationals: the oracle sums z^n/n! as a
    /// fraction until the terms are divisible by p^K.
    fn exp_oracle(p: u64, k: u32, z: i128) -> BigUint {
        let m = p_pow(p, k);
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        let mut term_num = BigInt::one();
        let mut fact = BigInt::one();
        for n in 0..200u32 {
            if n > 0 {
                term_num *= z;
                fact *= n;
            }
            // num/den += term_num/fact
            num = &num * &fact + &term_num * &den;
            den *= &fact;
            let g = num.gcd(&den);
            num /= &g;
            den /= &g;
        }
        let d = reduce_signed(&den, &m).modinv(&m).unwrap();
        (reduce_signed(&num, &m) * d) % m
    }

    #[test]
    fn exp_examples() {
        let r = zp(7, 4);
        assert_eq!(r.zero().exp().unwrap(), r.one());
        let e = r.from_int(7).exp().unwrap();
        assert_eq!((&e - &r.one()).val(), 1);
        assert_eq!(e.log().unwrap(), r.from_int(7));
        assert_eq!(e.residue(), &exp_oracle(7, 4, 7));
        assert_eq!(r.from_int(14).exp().unwrap().residue(), &exp_oracle(7, 4, 14));
        assert!(r.from_int(3).exp().is_err());
    }

    #[test]
    fn exp_oracle_p3() {
        let r = zp(3, 6);
        for z in [3i128, 6, -9, 27] {
            assert_eq!(r.from_int(z).exp().unwrap().residue(), &exp_oracle(3, 6, z), "z={z}");
        }
    }

    #[test]
    fn log_examples() {
        let r = zp(5, 6);
        assert!(r.one().log().unwrap().is_zero());
        assert!(r.from_int(2).log().is_err());
    }

    #[test]
    fn cube_root_examples() {
        let r = zp(5, 3);
        assert_eq!(r.one().cube_root().unwrap(), r.one());
        let y = r.from_int(2).cube_root().unwrap();
        // exhaustive oracle over [0, 125)
        let hits: Vec<u32> = (0u32..125).filter(|y| (y * y * y) % 125 == 2).collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(y.residue(), &BigUint::from(hits[0]));
        assert!(zp(7, 3).from_int(2).cube_root().is_err());
        assert!(zp(3, 3).from_int(2).cube_root().is_err());
        assert_eq!(r.from_int(5).cube_root(), Err(Error::NotUnit));
    }

    #[test]
    fn div_and_digits() {
        let r = zp(3, 5);
        let x = r.from_int(54);
        let y = x.div_p_pow(3).unwrap();
        assert_eq!(y.prec(), 2);
        assert_eq!(y.residue(), &BigUint::from(2u32));
        assert!(r.from_int(5).div_p_pow(1).is_err());
        assert_eq!(r.from_int(5 + 2 * 81).digits(), vec![2, 1, 0, 0, 2]);
    }

    fn sample_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![3u64, 5, 7, 13, 17, 23, 29, 83, 397, 599])
    }

    proptest! {
        #[test]
        fn exp_is_additive_and_isometric(p in sample_prime(), a in any::<i64>(), b in any::<i64>()) {
            let r = zp(p, 12);
            let z = r.from_int(a as i128).mul_p_pow(1);
            let w = r.from_int(b as i128).mul_p_pow(1);
            let ez = z.exp().unwrap();
            let ew = w.exp().unwrap();
            prop_assert_eq!((&z + &w).exp().unwrap(), &ez * &ew);
            if !z.is_zero() {
                prop_assert_eq!((&ez - &r.one()).val(), z.val());
            }
            prop_assert_eq!(ez.log().unwrap(), z);
        }

        #[test]
        fn log_is_multiplicative(p in sample_prime(), a in any::<i64>(), b in any::<i64>()) {
            let r = zp(p, 12);
            let u = &r.one() + &r.from_int(a as i128).mul_p_pow(1);
            let v = &r.one() + &r.from_int(b as i128).mul_p_pow(1);
            let lu = u.log().unwrap();
            prop_assert_eq!((&u * &v).log().unwrap(), &lu + &v.log().unwrap());
            prop_assert_eq!((&u * &u).log().unwrap(), lu.mul_int(2));
            prop_assert_eq!(lu.exp().unwrap(), u);
        }

        #[test]
        fn val_int_is_additive(a in 1i64..1_000_000_000, b in 1i64..1_000_000_000, p in sample_prime()) {
            let v = val_int(a as i128 * b as i128, p).unwrap();
            prop_assert_eq!(v, val_int(a as i128, p).unwrap() + val_int(b as i128, p).unwrap());
        }

        #[test]
        fn cube_root_inverts_cubing(p in prop::sample::select(vec![5u64, 17, 23]), a in any::<i64>()) {
            let r = zp(p, 16);
            let u = r.from_int(a as i128);
            prop_assume!(u.is_unit());
            let y = u.cube_root().unwrap();
            prop_assert_eq!(y.pow(3), u.clone());
            prop_assert_eq!(u.pow(3).cube_root().unwrap(), u);
        }
    }
}
