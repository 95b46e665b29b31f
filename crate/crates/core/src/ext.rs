//! Unramified extensions `Z_p[x]/(h)` truncated modulo `p^K`.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{p_pow, reduce_signed, truncated_val, LocalRing, PAdicInt, Zp};

/// `Z/p^K [x] / (h)` for a monic `h` of degree `d` irreducible modulo `p`.
#[derive(Debug)]
pub struct ExtRing {
    zp: Zp,
    /// Low coefficients `h_0 .. h_{d-1}` of the monic modulus, reduced mod `p^K`.
    h: Vec<BigUint>,
}

impl ExtRing {
    /// `h_low` lists the non-leading coefficients of the monic modulus,
    /// lowest first. Irreducibility mod p is the caller's responsibility.
    pub fn new(zp: Zp, h_low: &[BigInt]) -> Result<Arc<ExtRing>> {
        if h_low.is_empty() || h_low.len() > 3 {
            return Err(Error::Precondition(format!(
                "extension degree {} outside 1..=3",
                h_low.len()
            )));
        }
        let m = zp.modulus().clone();
        Ok(Arc::new(ExtRing {
            h: h_low.iter().map(|c| reduce_signed(c, &m)).collect(),
            zp,
        }))
    }

    pub fn degree(&self) -> usize {
        self.h.len()
    }

    pub fn p(&self) -> u64 {
        self.zp.p()
    }

    pub fn prec(&self) -> u32 {
        self.zp.prec()
    }

    pub fn zp(&self) -> &Zp {
        &self.zp
    }

    pub fn modulus_poly(&self) -> &[BigUint] {
        &self.h
    }

    /// Same modulus polynomial at another precision.
    pub fn with_prec(&self, prec: u32) -> Result<Arc<ExtRing>> {
        let zp = self.zp.with_prec(prec)?;
        let h: Vec<BigInt> = self.h.iter().map(|c| BigInt::from(c.clone())).collect();
        ExtRing::new(zp, &h)
    }

    fn m(&self) -> &BigUint {
        self.zp.modulus()
    }
}

/// An element `Σ coords[i] x^i` of an [`ExtRing`].
#[derive(Clone)]
pub struct ExtElem {
    ring: Arc<ExtRing>,
    coords: Vec<BigUint>,
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtElem")
            .field("p", &self.ring.p())
            .field("prec", &self.ring.prec())
            .field("coords", &self.coords)
            .finish()
    }
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.p() == other.ring.p()
            && self.ring.prec() == other.ring.prec()
            && self.ring.h == other.ring.h
            && self.coords == other.coords
    }
}
impl Eq for ExtElem {}

impl ExtElem {
    pub fn from_coords(ring: &Arc<ExtRing>, coords: &[BigInt]) -> ExtElem {
        let m = ring.m();
        let mut c: Vec<BigUint> = coords.iter().map(|x| reduce_signed(x, m)).collect();
        c.resize(ring.degree(), BigUint::zero());
        ExtElem {
            ring: ring.clone(),
            coords: c,
        }
    }

    pub fn from_int(ring: &Arc<ExtRing>, x: i128) -> ExtElem {
        Self::from_coords(ring, &[BigInt::from(x)])
    }

    pub fn from_padic(ring: &Arc<ExtRing>, x: &PAdicInt) -> ExtElem {
        Self::from_coords(ring, &[BigInt::from(x.residue().clone())])
    }

    /// The generator `x` (or the constant `-h_0` when `d = 1`).
    pub fn generator(ring: &Arc<ExtRing>) -> ExtElem {
        if ring.degree() == 1 {
            let m = ring.m();
            let c = (m - &ring.h[0]) % m;
            ExtElem {
                ring: ring.clone(),
                coords: vec![c],
            }
        } else {
            Self::from_coords(ring, &[BigInt::zero(), BigInt::one()])
        }
    }

    pub fn zero(ring: &Arc<ExtRing>) -> ExtElem {
        Self::from_int(ring, 0)
    }

    pub fn one(ring: &Arc<ExtRing>) -> ExtElem {
        Self::from_int(ring, 1)
    }

    pub fn ring(&self) -> &Arc<ExtRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn val(&self) -> u32 {
        let (p, k) = (self.ring.p(), self.ring.prec());
        self.coords
            .iter()
            .map(|c| truncated_val(c, p, k))
            .min()
            .unwrap_or(k)
    }

    pub fn is_unit(&self) -> bool {
        self.val() == 0
    }

    /// True when every non-constant coordinate vanishes modulo `p^k`.
    pub fn is_rational_mod(&self, k: u32) -> bool {
        let m = p_pow(self.ring.p(), k.min(self.ring.prec()));
        self.coords[1..].iter().all(|c| (c % &m).is_zero())
    }

    /// Projection to Z_p of an element whose other coordinates vanish.
    pub fn to_padic(&self, what: &str) -> Result<PAdicInt> {
        if !self.is_rational_mod(self.ring.prec()) {
            return Err(Error::GaloisInstability {
                what: what.to_string(),
            });
        }
        Ok(self.ring.zp.from_biguint(self.coords[0].clone()))
    }

    /// Reduction to a lower precision.
    pub fn reduce(&self, ring: &Arc<ExtRing>) -> ExtElem {
        debug_assert!(ring.prec() <= self.ring.prec());
        let m = ring.m();
        ExtElem {
            ring: ring.clone(),
            coords: self.coords.iter().map(|c| c % m).collect(),
        }
    }

    /// Reinterprets coordinates in a ring of higher precision (any lift).
    pub fn lift_to(&self, ring: &Arc<ExtRing>) -> ExtElem {
        ExtElem {
            ring: ring.clone(),
            coords: self.coords.clone(),
        }
    }

    pub fn add(&self, o: &ExtElem) -> ExtElem {
        let m = self.ring.m();
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| (a + b) % m)
            .collect();
        ExtElem {
            ring: self.ring.clone(),
            coords,
        }
    }

    pub fn sub(&self, o: &ExtElem) -> ExtElem {
        let m = self.ring.m();
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| (a + m - b) % m)
            .collect();
        ExtElem {
            ring: self.ring.clone(),
            coords,
        }
    }

    pub fn neg(&self) -> ExtElem {
        ExtElem::zero(&self.ring).sub(self)
    }

    pub fn mul(&self, o: &ExtElem) -> ExtElem {
        let d = self.ring.degree();
        let m = self.ring.m();
        let mut prod = vec![BigUint::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // x^d = -Σ h_i x^i
        for top in (d..2 * d - 1).rev() {
            let c = std::mem::take(&mut prod[top]) % m;
            if c.is_zero() {
                continue;
            }
            let neg = m - &c;
            for (i, h) in self.ring.h.iter().enumerate() {
                prod[top - d + i] += &neg * h;
            }
        }
        prod.truncate(d);
        for c in prod.iter_mut() {
            *c %= m;
        }
        ExtElem {
            ring: self.ring.clone(),
            coords: prod,
        }
    }

    pub fn mul_padic(&self, c: &PAdicInt) -> ExtElem {
        self.scale(c.residue())
    }

    pub fn pow(&self, e: &BigUint) -> ExtElem {
        let mut acc = ExtElem::one(&self.ring);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> ExtElem {
        self.pow(&BigUint::from(e))
    }

    /// Integer powers, negative exponents through the inverse.
    pub fn pow_signed(&self, e: i64) -> Result<ExtElem> {
        if e >= 0 {
            Ok(self.pow_u64(e as u64))
        } else {
            Ok(self.inv()?.pow_u64(e.unsigned_abs()))
        }
    }

    /// Inverse of a unit: Fermat inversion in the residue field, then Newton
    /// `y <- y(2 - a y)`.
    pub fn inv(&self) -> Result<ExtElem> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let ring = &self.ring;
        let p = ring.p();
        let d = ring.degree() as u32;
        let residue_ring = ring.with_prec(1)?;
        let a1 = self.reduce(&residue_ring);
        let q_minus_2 = BigUint::from(p).pow(d) - 2u32;
        let mut y = a1.pow(&q_minus_2).lift_to(ring);
        let two = ExtElem::from_int(ring, 2);
        let one = ExtElem::one(ring);
        let mut known = 1u32;
        loop {
            let ay = self.mul(&y);
            if ay == one {
                return Ok(y);
            }
            if known >= ring.prec() {
                return Err(Error::Certificate("extension inverse did not converge".into()));
            }
            y = y.mul(&two.sub(&ay));
            known = known.saturating_mul(2);
        }
    }

    /// Frobenius-free residue of the constant coordinate, used for F_p roots.
    pub fn constant_u64(&self) -> Option<u64> {
        self.coords[0].to_u64()
    }
}

impl LocalRing for ExtElem {
    fn prime(&self) -> u64 {
        self.ring.p()
    }
    fn precision(&self) -> u32 {
        self.ring.prec()
    }
    fn modulus(&self) -> &BigUint {
        self.ring.m()
    }
    fn one_like(&self) -> Self {
        ExtElem::one(&self.ring)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale(&self, c: &BigUint) -> Self {
        let m = self.ring.m();
        ExtElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|a| (a * c) % m).collect(),
        }
    }
    fn shift_down(&self, k: u32) -> Self {
        let q = p_pow(self.ring.p(), k);
        ExtElem {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|a| a / &q).collect(),
        }
    }
}

impl ExtElem {
    /// `exp(y)` for `y ∈ pO`.
    pub fn exp(&self) -> Result<ExtElem> {
        if self.val() < 1 {
            return Err(Error::Domain {
                op: "exp",
                why: "argument must lie in pO".into(),
            });
        }
        Ok(crate::padic::exp_series(self))
    }

    /// `log(u)` for `u ≡ 1 (mod p)`.
    pub fn log(&self) -> Result<ExtElem> {
        if self.sub(&ExtElem::one(&self.ring)).val() < 1 {
            return Err(Error::Domain {
                op: "log",
                why: "argument must be ≡ 1 (mod p)".into(),
            });
        }
        Ok(crate::padic::log_series(self))
    }

    /// Division by `p^k` of an element divisible by it; known to `K - k` digits
    /// and returned in the ring of that precision.
    pub fn div_p_pow(&self, k: u32) -> Result<ExtElem> {
        if self.val() < k {
            return Err(Error::Domain {
                op: "div_p_pow",
                why: format!("valuation {} < {k}", self.val()),
            });
        }
        if k >= self.ring.prec() {
            return Err(Error::PrecisionExhausted(self.ring.prec()));
        }
        let ring = self.ring.with_prec(self.ring.prec() - k)?;
        Ok(self.shift_down(k).reduce(&ring))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad_ring(prec: u32) -> Arc<ExtRing> {
        // x^2 + 1 is irreducible mod 7
        ExtRing::new(Zp::new(7, prec).unwrap(), &[BigInt::from(1), BigInt::from(0)]).unwrap()
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let r = quad_ring(5);
        let x = ExtElem::generator(&r);
        assert_eq!(x.mul(&x), ExtElem::from_int(&r, -1));
    }

    #[test]
    fn inverse_in_quadratic_extension() {
        let r = quad_ring(6);
        let a = ExtElem::from_coords(&r, &[BigInt::from(3), BigInt::from(5)]);
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), ExtElem::one(&r));
        let non_unit = ExtElem::from_coords(&r, &[BigInt::from(7), BigInt::from(14)]);
        assert_eq!(non_unit.inv(), Err(Error::NotUnit));
    }

    #[test]
    fn frobenius_is_conjugation() {
        // x^7 = -x in F_49 = F_7[x]/(x^2+1)
        let r = quad_ring(1);
        let x = ExtElem::generator(&r);
        assert_eq!(x.pow_u64(7), x.neg());
    }

    #[test]
    fn exp_log_roundtrip_in_extension() {
        let r = quad_ring(8);
        let y = ExtElem::from_coords(&r, &[BigInt::from(14), BigInt::from(7 * 3)]);
        let e = y.exp().unwrap();
        assert_eq!(e.log().unwrap(), y);
        let z = ExtElem::from_coords(&r, &[BigInt::from(7), BigInt::from(-49)]);
        assert_eq!(y.add(&z).exp().unwrap(), e.mul(&z.exp().unwrap()));
    }

    #[test]
    fn cubic_modulus_reduction() {
        // P(x) = x^3 - x^2 - x - 1, irreducible mod 5
        let r = ExtRing::new(
            Zp::new(5, 4).unwrap(),
            &[BigInt::from(-1), BigInt::from(-1), BigInt::from(-1)],
        )
        .unwrap();
        let x = ExtElem::generator(&r);
        let x3 = x.pow_u64(3);
        let rhs = x.mul(&x).add(&x).add(&ExtElem::one(&r));
        assert_eq!(x3, rhs);
    }
}
