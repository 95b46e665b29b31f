//! Roots of `P(X) = X^3 - X^2 - X - 1` over unramified extensions of Z_p.
//!
//! The discriminant of `P` is `-44`, so for `p ∉ {2, 11}` the reduction is
//! squarefree and its roots lift uniquely. All three roots live in the
//! unramified extension whose degree `d` is the lcm of the degrees of the
//! irreducible factors mod p.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtRing};
use crate::factor::{factorize, is_prime, pow_mod};
use crate::padic::{PAdicInt, Zp};

/// How `P` factors modulo p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    /// Degree of the splitting field's residue extension.
    pub d: u32,
    /// Roots of `P` in F_p, ascending.
    pub rational_roots: Vec<u64>,
    /// Monic factors over F_p, each as low-to-high coefficients without the leading 1.
    pub factors: Vec<Vec<u64>>,
}

fn check_supported(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match p {
        2 => Err(Error::UnsupportedPrime(2, "ramified in the splitting field")),
        11 => Err(Error::UnsupportedPrime(11, "ramified in the splitting field")),
        _ => Ok(()),
    }
}

fn p_eval_mod(x: u64, p: u64) -> u64 {
    let x2 = x * x % p;
    let x3 = x2 * x % p;
    (x3 + 3 * p - x2 - x - 1) % p
}

/// Factorization pattern of `P mod p`, by exhaustive root search.
pub fn splitting_type(p: u64) -> Result<Splitting> {
    check_supported(p)?;
    let roots: Vec<u64> = (0..p).filter(|&x| p_eval_mod(x, p) == 0).collect();
    let neg = |v: u64| (p - v % p) % p;
    let (d, factors) = match roots.len() {
        3 => (1, roots.iter().map(|&r| vec![neg(r)]).collect()),
        1 => {
            let r = roots[0];
            // P = (x - r)(x^2 + (r-1)x + (r^2 - r - 1))
            let a = (r + p - 1) % p;
            let b = ((r * r % p) + 2 * p - r - 1) % p;
            (2, vec![vec![neg(r)], vec![b, a]])
        }
        0 => (3, vec![vec![p - 1, p - 1, p - 1]]),
        k => {
            return Err(Error::Precondition(format!(
                "{k} roots of P mod {p}; the reduction is not squarefree"
            )))
        }
    };
    Ok(Splitting {
        d,
        rational_roots: roots,
        factors,
    })
}

/// Per-prime precomputation: the extension ring, the lifted roots `λ`,
/// the Binet coefficients `c_λ = λ / P'(λ)` and the period `N`.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    pub p: u64,
    pub splitting: Splitting,
    ring: Arc<ExtRing>,
    roots: [ExtElem; 3],
    coeffs: [ExtElem; 3],
    n: u64,
    /// Prime factorization of `p^d - 1`.
    pub group_order_factors: Vec<(u64, u32)>,
}

fn eval_p(x: &ExtElem) -> ExtElem {
    let one = ExtElem::one(x.ring());
    let x2 = x.mul(x);
    x2.mul(x).sub(&x2).sub(x).sub(&one)
}

fn eval_dp(x: &ExtElem) -> ExtElem {
    let r = x.ring();
    let x2 = x.mul(x);
    x2.scale_int(3).sub(&x.scale_int(2)).sub(&ExtElem::one(r))
}

trait ScaleInt {
    fn scale_int(&self, c: u64) -> ExtElem;
}

impl ScaleInt for ExtElem {
    fn scale_int(&self, c: u64) -> ExtElem {
        self.mul(&ExtElem::from_int(self.ring(), c as i128))
    }
}

/// Newton-Hensel lift of a simple root of `P` given modulo p.
fn lift_root(mut x: ExtElem) -> Result<ExtElem> {
    let prec = x.ring().prec();
    let mut known = 1u32;
    loop {
        let fx = eval_p(&x);
        if fx.is_zero() {
            return Ok(x);
        }
        if known >= prec {
            return Err(Error::Certificate("root lift did not converge".into()));
        }
        let step = fx.mul(&eval_dp(&x).inv()?);
        x = x.sub(&step);
        known = known.saturating_mul(2);
    }
}

fn multiplicative_order(x: &ExtElem, group_order: u64, factors: &[(u64, u32)]) -> u64 {
    let one = ExtElem::one(x.ring());
    let mut ord = group_order;
    for &(q, _) in factors {
        while ord % q == 0 && x.pow_u64(ord / q) == one {
            ord /= q;
        }
    }
    ord
}

impl PrimeContext {
    /// Lifts the roots of `P` to precision `prec` and computes `N`.
    pub fn new(p: u64, prec: u32) -> Result<PrimeContext> {
        let splitting = splitting_type(p)?;
        let zp = Zp::new(p, prec)?;
        let d = splitting.d;
        let h_low: Vec<BigInt> = match d {
            1 => vec![BigInt::from(0)],
            2 => splitting.factors[1].iter().map(|&c| BigInt::from(c)).collect(),
            _ => vec![BigInt::from(-1); 3],
        };
        let ring = ExtRing::new(zp, &h_low)?;

        let mut approx: Vec<ExtElem> = splitting
            .rational_roots
            .iter()
            .map(|&r| ExtElem::from_int(&ring, r as i128))
            .collect();
        if d > 1 {
            // x and its Frobenius conjugates are the remaining roots mod p
            let residue = ring.with_prec(1)?;
            let x1 = ExtElem::generator(&residue);
            let mut conj = x1.clone();
            for _ in 0..d {
                approx.push(conj.lift_to(&ring));
                conj = conj.pow_u64(p);
            }
        }
        let roots_vec = approx.into_iter().map(lift_root).collect::<Result<Vec<_>>>()?;
        let roots: [ExtElem; 3] = roots_vec
            .try_into()
            .map_err(|_| Error::Precondition("expected three roots".into()))?;
        let coeffs = roots
            .clone()
            .map(|l| l.mul(&eval_dp(&l).inv().expect("P' is a unit at simple roots")));

        let group_order = (p as u128).pow(d) - 1;
        let group_order = u64::try_from(group_order)
            .map_err(|_| Error::Precondition(format!("p^{d} - 1 exceeds 64 bits")))?;
        let group_order_factors = factorize(group_order)?;
        let residue = ring.with_prec(1)?;
        let n = roots
            .iter()
            .map(|l| multiplicative_order(&l.reduce(&residue), group_order, &group_order_factors))
            .fold(1u64, |a, b| a.lcm(&b));

        Ok(PrimeContext {
            p,
            splitting,
            ring,
            roots,
            coeffs,
            n,
            group_order_factors,
        })
    }

    /// Same prime at another precision.
    pub fn at_precision(&self, prec: u32) -> Result<PrimeContext> {
        PrimeContext::new(self.p, prec)
    }

    pub fn d(&self) -> u32 {
        self.splitting.d
    }

    pub fn prec(&self) -> u32 {
        self.ring.prec()
    }

    /// Order of the group generated by the roots in the residue field.
    pub fn period(&self) -> u64 {
        self.n
    }

    pub fn ring(&self) -> &Arc<ExtRing> {
        &self.ring
    }

    pub fn zp(&self) -> &Zp {
        self.ring.zp()
    }

    pub fn roots(&self) -> &[ExtElem; 3] {
        &self.roots
    }

    pub fn coeffs(&self) -> &[ExtElem; 3] {
        &self.coeffs
    }

    pub fn group_order(&self) -> u64 {
        (self.p as u128).pow(self.d()) as u64 - 1
    }

    /// `Σ_λ w_λ`, projected to Z_p after checking that the extension
    /// coordinates vanish.
    pub fn stable_sum(&self, terms: &[ExtElem], what: &str) -> Result<PAdicInt> {
        let mut acc = ExtElem::zero(&self.ring);
        for t in terms {
            acc = acc.add(t);
        }
        acc.to_padic(what)
    }

    /// `Σ_λ c_λ λ^m`, which equals `T(m)` modulo `p^K`.
    pub fn binet(&self, m: i64) -> Result<PAdicInt> {
        let terms = self
            .roots
            .iter()
            .zip(&self.coeffs)
            .map(|(l, c)| Ok(c.mul(&l.pow_signed(m)?)))
            .collect::<Result<Vec<_>>>()?;
        self.stable_sum(&terms, "Binet sum")
    }

    /// Reduction of the roots modulo p, as elements of F_{p^d}.
    pub fn residue_roots(&self) -> Result<Vec<ExtElem>> {
        let residue = self.ring.with_prec(1)?;
        Ok(self.roots.iter().map(|l| l.reduce(&residue)).collect())
    }

    /// True when every root satisfies `λ^m ≡ 1 (mod p)`.
    pub fn annihilates(&self, m: u64) -> Result<bool> {
        let rr = self.residue_roots()?;
        Ok(rr.iter().all(|l| l.pow_u64(m) == ExtElem::one(l.ring())))
    }
}

/// Order of `x` in `(Z/p)^×`, for `p ∤ x`.
pub fn order_mod_p(x: u64, p: u64) -> Result<u64> {
    let fs = factorize(p - 1)?;
    let mut ord = p - 1;
    for &(q, _) in &fs {
        while ord % q == 0 && pow_mod(x, ord / q, p) == 1 {
            ord /= q;
        }
    }
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::primes_up_to;
    use num_bigint::BigUint;
    use crate::tribonacci::{trib, trib_mod_u64};
    use proptest::prelude::*;

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(5).unwrap().d, 3);
        assert_eq!(splitting_type(13).unwrap().d, 2);
        let s47 = splitting_type(47).unwrap();
        assert_eq!(s47.d, 1);
        assert_eq!(s47.rational_roots.len(), 3);
        assert!(splitting_type(2).is_err());
        assert!(splitting_type(11).is_err());
        assert!(splitting_type(15).is_err());
    }

    #[test]
    fn periods_match_known_values() {
        for (p, n) in [(5, 31), (3, 13), (7, 48), (13, 168), (47, 46), (83, 287), (397, 132), (599, 598)] {
            assert_eq!(PrimeContext::new(p, 4).unwrap().period(), n, "p = {p}");
        }
    }

    #[test]
    fn symmetric_functions_of_roots() {
        for p in [3u64, 5, 7, 13, 47, 83, 103] {
            let ctx = PrimeContext::new(p, 12).unwrap();
            let r = ctx.ring();
            let [a, b, c] = ctx.roots().clone();
            assert_eq!(a.add(&b).add(&c), ExtElem::one(r));
            assert_eq!(a.mul(&b).mul(&c), ExtElem::one(r));
            assert_eq!(ctx.binet(0).unwrap().residue(), &BigUint::from(0u32));
            assert_eq!(ctx.binet(1).unwrap().residue(), &BigUint::from(1u32));
            for i in 0..3 {
                for j in 0..i {
                    let diff = ctx.roots()[i].sub(&ctx.roots()[j]);
                    assert!(diff.is_unit(), "roots collide mod {p}");
                }
                assert!(ctx.coeffs()[i].is_unit());
            }
        }
    }

    #[test]
    fn period_is_minimal_and_divides_expected_orders() {
        for p in primes_up_to(400).into_iter().filter(|&p| p != 2 && p != 11) {
            let ctx = PrimeContext::new(p, 2).unwrap();
            let n = ctx.period();
            assert!(ctx.annihilates(n).unwrap());
            assert_eq!(ctx.group_order() % n, 0);
            if ctx.d() == 3 {
                assert_eq!((p * p + p + 1) % n, 0, "p = {p}");
            }
            for &(q, _) in &ctx.group_order_factors {
                if n % q == 0 {
                    assert!(!ctx.annihilates(n / q).unwrap(), "p = {p}, N not minimal");
                }
            }
            for k in 0..60 {
                assert_eq!(trib_mod_u64(k + n as i128, p), trib_mod_u64(k, p));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn binet_formula_matches_recurrence(
            p in prop::sample::select(vec![3u64, 5, 7, 13, 17, 19, 23, 47, 83, 163]),
            n in -50i64..=50,
        ) {
            let ctx = PrimeContext::new(p, 10).unwrap();
            let b = ctx.binet(n).unwrap();
            prop_assert_eq!(b, ctx.zp().from_bigint(&trib(n)));
        }
    }
}
