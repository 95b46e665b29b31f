//! Analytic interpolation of `T` on residue classes.
//!
//! For a residue `ℓ` and period `M = sN` the function
//! `f_ℓ(z) = Σ_λ c_λ λ^ℓ exp(z log λ^M)` satisfies `f_ℓ(m) = T(ℓ + mM)` for
//! every integer m. With `e = 1 + ν_p(s)` and `L_λ = log(λ^M) / p^e` the
//! series of `g = f_ℓ / p^e` has coefficients
//!
//! ```text
//! β_0 = T(ℓ) / p^e,   β_k = p^(e(k-1)) / k! · Σ_λ c_λ λ^ℓ L_λ^k   (k >= 1)
//! ```
//!
//! and `ν_p(β_k) >= e(k-1) - ⌊(k-1)/(p-1)⌋`, which certifies the tail.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtRing};
use crate::galois::PrimeContext;
use crate::padic::{p_pow, PAdicInt, Zp};
use crate::rational::{Rational, FRACTIONAL_TARGETS, INTEGER_TARGETS};
use crate::tribonacci::trib_mod;

use std::sync::Arc;

/// `1 + ν_p(s)`, the power of p dividing `f_ℓ` identically when `p^e | T(ℓ)`.
pub fn divisor_exponent(p: u64, s: u64) -> u32 {
    let mut s = s;
    let mut v = 0;
    while s % p == 0 {
        s /= p;
        v += 1;
    }
    1 + v
}

fn val_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Guaranteed lower bound for `ν_p(β_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    pub p: u64,
    pub e: u32,
}

impl TailBound {
    pub fn at(&self, k: u64) -> i64 {
        if k == 0 {
            return 0;
        }
        self.e as i64 * (k as i64 - 1) - ((k - 1) / (self.p - 1)) as i64
    }

    /// Smallest `J` with `at(k) >= prec` for every `k > J`.
    pub fn cut(&self, prec: u32) -> usize {
        let mut j = 1u64;
        while self.at(j + 1) < prec as i64 {
            j += 1;
        }
        j as usize
    }
}

/// Per `(p, s)` data shared by all residues: the logarithms `L_λ`.
#[derive(Debug, Clone)]
pub struct Interpolant {
    ctx: PrimeContext,
    s: u64,
    e: u32,
    prec: u32,
    out_ring: Arc<ExtRing>,
    logs: [ExtElem; 3],
}

impl Interpolant {
    /// Interpolants of period `s·N` with coefficients known modulo `p^prec`.
    pub fn new(p: u64, prec: u32, s: u64) -> Result<Interpolant> {
        if s == 0 {
            return Err(Error::Precondition("multiplier must be positive".into()));
        }
        let e = divisor_exponent(p, s);
        let ctx = PrimeContext::new(p, prec + e)?;
        Self::build(ctx, s, e, prec)
    }

    /// Reuses `ctx` when its precision is `prec + e`, otherwise rebuilds it.
    pub fn from_context(ctx: &PrimeContext, prec: u32, s: u64) -> Result<Interpolant> {
        if s == 0 {
            return Err(Error::Precondition("multiplier must be positive".into()));
        }
        let e = divisor_exponent(ctx.p, s);
        let ctx = if ctx.prec() == prec + e {
            ctx.clone()
        } else {
            ctx.at_precision(prec + e)?
        };
        Self::build(ctx, s, e, prec)
    }

    fn build(ctx: PrimeContext, s: u64, e: u32, prec: u32) -> Result<Interpolant> {
        let m = ctx.period() * s;
        let logs_vec = ctx
            .roots()
            .iter()
            .map(|l| l.pow_u64(m).log()?.div_p_pow(e))
            .collect::<Result<Vec<_>>>()?;
        let out_ring = logs_vec[0].ring().clone();
        debug_assert_eq!(out_ring.prec(), prec);
        let logs: [ExtElem; 3] = logs_vec.try_into().expect("three roots");
        Ok(Interpolant {
            ctx,
            s,
            e,
            prec,
            out_ring,
            logs,
        })
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn multiplier(&self) -> u64 {
        self.s
    }

    pub fn divisor_exponent(&self) -> u32 {
        self.e
    }

    /// `s·N`.
    pub fn period(&self) -> u64 {
        self.ctx.period() * self.s
    }

    pub fn tail(&self) -> TailBound {
        TailBound {
            p: self.p(),
            e: self.e,
        }
    }

    /// Power-series coefficients of `g = f_ℓ / p^e` modulo `p^K`.
    ///
    /// Requires `p^e | T(ℓ)`; each `β_k` with `k >= 1` comes from a
    /// Galois-stable sum whose extension coordinates are checked to vanish.
    pub fn series(&self, ell: i64) -> Result<SeriesTrunc> {
        let p = self.p();
        let (k, e) = (self.prec, self.e);
        let zp = Zp::new(p, k)?;
        let t = trib_mod(ell as i128, &p_pow(p, k + e));
        let pe = p_pow(p, e);
        if !(&t % &pe).is_zero() {
            return Err(Error::ConditionFailed {
                condition: "46",
                ell,
                detail: format!("p^{e} does not divide T(ell)"),
            });
        }
        let beta0 = zp.from_biguint(&t / &pe);

        // the Binet sum must reproduce T(ell) at full working precision
        let weights = self
            .ctx
            .roots()
            .iter()
            .zip(self.ctx.coeffs())
            .map(|(l, c)| Ok(c.mul(&l.pow_signed(ell)?)))
            .collect::<Result<Vec<_>>>()?;
        let s0 = self.ctx.stable_sum(&weights, "Binet sum")?;
        if s0.residue() != &t {
            return Err(Error::Certificate(format!(
                "Binet sum disagrees with the recurrence at ell = {ell}"
            )));
        }

        let tail = self.tail();
        let cut = tail.cut(k);
        let m = zp.modulus().clone();
        let mut coeffs = Vec::with_capacity(cut + 1);
        coeffs.push(beta0);
        let mut terms: Vec<ExtElem> = weights.iter().map(|w| w.reduce(&self.out_ring)).collect();
        let mut unit_fact = BigUint::from(1u32);
        let mut v_fact = 0u32;
        for kk in 1..=cut as u64 {
            for (term, l) in terms.iter_mut().zip(&self.logs) {
                *term = term.mul(l);
            }
            let mut acc = ExtElem::zero(&self.out_ring);
            for term in &terms {
                acc = acc.add(term);
            }
            let sk = acc.to_padic(&format!("series coefficient {kk} at ell = {ell}"))?;
            let mut w = kk;
            while w % p == 0 {
                w /= p;
                v_fact += 1;
            }
            unit_fact = (unit_fact * w) % &m;
            let shift = e as i64 * (kk as i64 - 1) - v_fact as i64;
            debug_assert!(shift >= 0);
            let beta = if shift >= k as i64 {
                zp.zero()
            } else {
                let inv = unit_fact.modinv(&m).expect("unit");
                zp.from_biguint(sk.residue() * inv * p_pow(p, shift as u32))
            };
            coeffs.push(beta);
        }
        Ok(SeriesTrunc {
            p,
            prec: k,
            ell,
            s: self.s,
            e,
            period: self.period(),
            coeffs,
            tail,
            galois_checks: cut,
        })
    }

    /// `f_ℓ(z)` by its defining exponential sum, modulo `p^K`.
    pub fn eval_f(&self, ell: i64, z: &PAdicInt) -> Result<PAdicInt> {
        eval_f_at(&self.ctx, ell, self.s, z)
    }
}

/// `Σ_λ c_λ λ^ℓ exp(z log λ^(sN))` at the precision of `ctx`.
pub fn eval_f_at(ctx: &PrimeContext, ell: i64, s: u64, z: &PAdicInt) -> Result<PAdicInt> {
    if z.p() != ctx.p {
        return Err(Error::PrimeMismatch(z.p(), ctx.p));
    }
    let ring = if z.prec() >= ctx.prec() {
        ctx.ring().clone()
    } else {
        ctx.ring().with_prec(z.prec())?
    };
    let zr = z.reduce(ring.prec());
    let m = ctx.period() * s;
    let mut terms = Vec::with_capacity(3);
    for (l, c) in ctx.roots().iter().zip(ctx.coeffs()) {
        let l = l.reduce(&ring);
        let c = c.reduce(&ring);
        let log = l.pow_u64(m).log()?;
        let ex = log.mul_padic(&zr).exp()?;
        terms.push(c.mul(&l.pow_signed(ell)?).mul(&ex));
    }
    let mut acc = ExtElem::zero(&ring);
    for t in &terms {
        acc = acc.add(t);
    }
    acc.to_padic("interpolant value")
}

/// `f_ℓ(z)` for the period `N` itself.
pub fn eval_f(ctx: &PrimeContext, ell: i64, z: &PAdicInt) -> Result<PAdicInt> {
    eval_f_at(ctx, ell, 1, z)
}

/// Coefficients `β_0..β_J` of `g = f_ℓ / p^e`; every `β_k` with `k > J` is
/// divisible by `p^K`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesTrunc {
    pub p: u64,
    pub prec: u32,
    pub ell: i64,
    pub s: u64,
    pub e: u32,
    /// `s·N`.
    pub period: u64,
    pub coeffs: Vec<PAdicInt>,
    pub tail: TailBound,
    /// Number of Galois-stable sums whose extension coordinates were checked.
    pub galois_checks: usize,
}

impl SeriesTrunc {
    pub fn cut(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn zp(&self) -> &Zp {
        self.coeffs[0].ring()
    }

    /// `ν_p(β_k)` with values `>= K` clamped to K.
    pub fn valuations(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.val()).collect()
    }

    pub fn eval(&self, z: &PAdicInt) -> PAdicInt {
        let z = z.reduce(self.prec);
        let mut acc = self.zp().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &z) + c;
        }
        acc
    }

    pub fn deriv(&self, z: &PAdicInt) -> PAdicInt {
        let z = z.reduce(self.prec);
        let mut acc = self.zp().zero();
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = &(&acc * &z) + &c.mul_int(k as i128);
        }
        acc
    }

    /// Largest index attaining the minimal coefficient valuation.
    ///
    /// Every tail coefficient has valuation at least K, so a minimum below K
    /// is attained within the computed range.
    pub fn strassman_mu(&self) -> Result<usize> {
        let vals = self.valuations();
        let vmin = *vals.iter().min().expect("nonempty");
        if vmin >= self.prec {
            return Err(Error::PrecisionExhausted(self.prec));
        }
        Ok(vals.iter().rposition(|&v| v == vmin).expect("attained"))
    }

    /// Coefficients of `g(b + w)` as a series in w.
    pub fn recenter(&self, b: &PAdicInt) -> Vec<PAdicInt> {
        let prec = self.prec.min(b.prec());
        let b = b.reduce(prec);
        let mut a: Vec<PAdicInt> = self.coeffs.iter().map(|c| c.reduce(prec)).collect();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                a[j] = &a[j] + &(&b * &a[j + 1]);
            }
        }
        a
    }

    /// Hensel-Newton zero of g; requires `μ = 1`.
    pub fn hensel_zero(&self) -> Result<ZeroRecord> {
        let mu = self.strassman_mu()?;
        if mu == 0 {
            return Err(Error::ConditionFailed {
                condition: "46",
                ell: self.ell,
                detail: "the constant coefficient dominates, so g has no zero".into(),
            });
        }
        if mu > 1 {
            return Err(Error::ConditionFailed {
                condition: "48",
                ell: self.ell,
                detail: format!("derivative is not dominant (μ = {mu})"),
            });
        }
        let v = self.coeffs[1].val();
        let work = self.prec - v;
        let h: Vec<PAdicInt> = self
            .coeffs
            .iter()
            .map(|c| c.div_p_pow(v))
            .collect::<Result<_>>()?;
        let norm = SeriesTrunc {
            prec: work,
            coeffs: h,
            ..self.clone()
        };
        let zp = norm.zp().clone();
        let h0 = to_small(&norm.coeffs[0], self.p);
        let h1 = to_small(&norm.coeffs[1], self.p);
        let b0 = ((self.p - h0) % self.p) * crate::factor::pow_mod(h1, self.p - 2, self.p) % self.p;
        let mut b = zp.from_int(b0 as i128);
        let mut trace = Vec::new();
        loop {
            let hb = norm.eval(&b);
            trace.push(hb.val());
            if hb.is_zero() {
                break;
            }
            if trace.len() > 64 {
                return Err(Error::Certificate("Newton iteration did not settle".into()));
            }
            let d = norm.deriv(&b).inv()?;
            b = &b - &(&hb * &d);
        }
        let mut rec = ZeroRecord {
            p: self.p,
            prec: self.prec,
            ell: self.ell,
            s: self.s,
            e: self.e,
            period: self.period,
            b,
            mu,
            unique: true,
            newton_trace: trace,
            u: 0,
            target: ZeroTarget::Other { digits: vec![] },
        };
        rec.u = rec.residue_mod_p();
        rec.target = classify_zero(&rec);
        Ok(rec)
    }

    /// A zero of g: by Hensel when `μ = 1`, otherwise by testing the points
    /// `(a - ℓ) / (sN)` for the known rational zeros `a`. `None` when the
    /// constant term dominates.
    pub fn locate_zero(&self) -> Result<Option<ZeroRecord>> {
        let mu = self.strassman_mu()?;
        if mu == 0 {
            return Ok(None);
        }
        if mu == 1 {
            return self.hensel_zero().map(Some);
        }
        for a in candidate_targets(self.p) {
            if let Some(rec) = self.target_zero(a, mu)? {
                return Ok(Some(rec));
            }
        }
        Err(Error::ConditionFailed {
            condition: "48",
            ell: self.ell,
            detail: format!("μ = {mu} and no known rational zero lies in this class"),
        })
    }

    fn target_zero(&self, a: Rational, mu: usize) -> Result<Option<ZeroRecord>> {
        let p = self.p;
        let vs = val_u64(self.s, p);
        let zp = Zp::new(p, self.prec + vs)?;
        let Ok(diff) = a.to_padic(&zp).map(|x| &x - &zp.from_int(self.ell as i128)) else {
            return Ok(None);
        };
        if diff.val() < vs {
            return Ok(None);
        }
        let unit_period = zp.from_int((self.period / p.pow(vs)) as i128).inv()?;
        let b = &diff.div_p_pow(vs)? * &unit_period.reduce(self.prec);
        let gb = self.eval(&b);
        if gb.val() + 2 < self.prec {
            return Ok(None);
        }
        let mut rec = ZeroRecord {
            p,
            prec: self.prec,
            ell: self.ell,
            s: self.s,
            e: self.e,
            period: self.period,
            b,
            mu,
            unique: false,
            newton_trace: vec![gb.val()],
            u: 0,
            target: ZeroTarget::Other { digits: vec![] },
        };
        rec.u = rec.residue_mod_p();
        rec.target = classify_zero(&rec);
        Ok(Some(rec))
    }

    /// Certifies `ν_p(T(n)) = κ + ν_p(n - a)` on the class `n ≡ ℓ (mod sN)`
    /// from a zero `b`, when the linear coefficient at b strictly dominates.
    pub fn derive_linear_formula(&self, zero: &ZeroRecord) -> Result<Option<LinearCertificate>> {
        let gamma = self.recenter(&zero.b);
        let prec = zero.b.prec().min(self.prec);
        let v1 = gamma[1].val();
        if v1 >= prec {
            return Ok(None);
        }
        if gamma.iter().skip(2).any(|g| g.val() <= v1) {
            return Ok(None);
        }
        let a = match zero.target {
            ZeroTarget::Integer { value } | ZeroTarget::Rational { value } => Some(value),
            ZeroTarget::Other { .. } => None,
        };
        let kappa = self.e as i64 + v1 as i64 - val_u64(self.s, self.p) as i64;
        Ok(Some(LinearCertificate {
            p: self.p,
            ell: self.ell,
            modulus: self.period,
            a,
            kappa,
            mu: 1,
            gamma1_val: v1,
        }))
    }
}

fn to_small(x: &PAdicInt, p: u64) -> u64 {
    (x.residue() % p).to_u64().unwrap_or(0)
}

fn candidate_targets(p: u64) -> Vec<Rational> {
    let mut v = INTEGER_TARGETS.to_vec();
    if p != 3 {
        v.extend(FRACTIONAL_TARGETS);
    }
    v
}

/// Where `ℓ + sN·b` lands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroTarget {
    Integer { value: Rational },
    Rational { value: Rational },
    /// Base-p digits of `ℓ + sN·b`, least significant first.
    Other { digits: Vec<u64> },
}

impl ZeroTarget {
    pub fn value(&self) -> Option<Rational> {
        match self {
            ZeroTarget::Integer { value } | ZeroTarget::Rational { value } => Some(*value),
            ZeroTarget::Other { .. } => None,
        }
    }
}

/// A zero of an interpolant and its identification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub p: u64,
    pub prec: u32,
    pub ell: i64,
    pub s: u64,
    pub e: u32,
    pub period: u64,
    pub b: PAdicInt,
    pub mu: usize,
    /// Set when Strassman's bound is 1, so b is the only zero on Z_p.
    pub unique: bool,
    /// Valuations of the normalised series at the successive Newton iterates.
    pub newton_trace: Vec<u32>,
    /// `ℓ + sN·b mod p`.
    pub u: u64,
    pub target: ZeroTarget,
}

impl ZeroRecord {
    /// `ℓ + sN·b` as a p-adic integer.
    pub fn point(&self) -> PAdicInt {
        let zp = self.b.ring();
        &zp.from_int(self.ell as i128) + &self.b.mul_int(self.period as i128)
    }

    fn residue_mod_p(&self) -> u64 {
        to_small(&self.point(), self.p)
    }

    /// Digits used when matching against rational targets.
    pub fn tolerance(&self) -> u32 {
        self.b.prec().min(self.prec.saturating_sub(2)).max(1)
    }
}

/// Compares `ℓ + sN·b` with the integer zeros of T, then with 1/3 and -5/3,
/// modulo `p^tol` where `tol = min(prec(b), K - 2)`. For p = 3 the fractional
/// targets are not 3-integral and only integers are tried.
pub fn classify_zero(rec: &ZeroRecord) -> ZeroTarget {
    let a = rec.point();
    let tol = rec.tolerance();
    let zp = a.ring();
    for z in INTEGER_TARGETS {
        if a.eq_mod(&z.to_padic(zp).expect("integer"), tol) {
            return ZeroTarget::Integer { value: z };
        }
    }
    if rec.p != 3 {
        for r in FRACTIONAL_TARGETS {
            if a.eq_mod(&r.to_padic(zp).expect("3 is a unit"), tol) {
                return ZeroTarget::Rational { value: r };
            }
        }
    }
    ZeroTarget::Other { digits: a.digits() }
}

/// `ν_p(T(n)) = κ + ν_p(n - a)` for `n ≡ ℓ (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCertificate {
    pub p: u64,
    pub ell: i64,
    pub modulus: u64,
    /// `None` when the zero matched no known rational.
    pub a: Option<Rational>,
    pub kappa: i64,
    pub mu: u32,
    pub gamma1_val: u32,
}

/// Outcome of the cube-root vanishing certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeRootReport {
    pub p: u64,
    pub n_period: u64,
    pub prec: u32,
    /// Whether the unique cube root agrees with `λ^ℓ exp(b log λ^N)`;
    /// `None` when `p ≡ 1 (mod 3)` and only the latter is defined.
    pub branches_agree: Option<bool>,
    pub sum_one_third_vanishes: bool,
    pub sum_minus_five_thirds_vanishes: bool,
    pub symmetric_identity_holds: bool,
    /// `(n, ν_p(T(n)), ν_p(n - r))` for sampled n, with r = 1/3 or -5/3.
    pub samples: Vec<(i128, u32, u32, Rational)>,
    pub inequality_holds: bool,
}

impl CubeRootReport {
    pub fn passed(&self) -> bool {
        self.branches_agree != Some(false)
            && self.sum_one_third_vanishes
            && self.sum_minus_five_thirds_vanishes
            && self.symmetric_identity_holds
            && self.inequality_holds
    }
}

/// Verifies that `Σ c_λ λ^(1/3)` and `Σ c_λ λ^(-5/3)` vanish for the branch
/// of cube roots given by interpolation, and samples the resulting bound
/// `ν_p(T(n)) >= ν_p(n - r)`. Needs `d = 1` and `3 ∤ N`.
pub fn cube_root_certificate(ctx: &PrimeContext, samples_per_target: usize, max_depth: u32) -> Result<CubeRootReport> {
    let p = ctx.p;
    let n = ctx.period();
    if ctx.d() != 1 {
        return Err(Error::Precondition(format!("p = {p}: roots are not in Q_p")));
    }
    if n % 3 == 0 {
        return Err(Error::Precondition(format!("p = {p}: 3 divides N = {n}")));
    }
    let zp = ctx.zp().clone();
    let lambdas = ctx
        .roots()
        .iter()
        .map(|l| l.to_padic("rational root"))
        .collect::<Result<Vec<_>>>()?;
    let cs = ctx
        .coeffs()
        .iter()
        .map(|c| c.to_padic("rational coefficient"))
        .collect::<Result<Vec<_>>>()?;

    // 1/3 = ℓ + N b with ℓ = 3^{-1} mod N
    let third = Rational::new(1, 3)?;
    let ell = third.residue_mod(n).expect("3 ∤ N");
    let b = &(&third.to_padic(&zp)? - &zp.from_int(ell as i128)) * &zp.from_int(n as i128).inv()?;
    let mut roots3 = Vec::with_capacity(3);
    let mut agree = true;
    for l in &lambdas {
        let r = &l.pow(ell) * &(&l.pow(n).log()? * &b).exp()?;
        if r.pow(3) != *l {
            return Err(Error::Certificate(format!("interpolated cube root fails at p = {p}")));
        }
        if p % 3 == 2 {
            agree &= l.cube_root()? == r;
        }
        roots3.push(r);
    }
    let branches_agree = (p % 3 == 2).then_some(agree);

    let sum = |f: &dyn Fn(usize) -> PAdicInt| (0..3).fold(zp.zero(), |acc, i| &acc + &f(i));
    let s1 = sum(&|i| &cs[i] * &roots3[i]);
    let s2 = sum(&|i| &cs[i] * &roots3[i].inv().expect("unit").pow(5));
    let prod_c = &(&cs[0] * &cs[1]) * &cs[2];
    let f1 = &sum(&|i| &cs[i].pow(3) * &lambdas[i]) - &prod_c.mul_int(3);
    let f2 = &sum(&|i| &cs[i].pow(3) * &lambdas[i].inv().expect("unit").pow(5)) - &prod_c.mul_int(3);

    let mut samples = Vec::new();
    let mut ineq = true;
    let step = if (p - 1) % 3 == 0 { n } else { p - 1 };
    for r in FRACTIONAL_TARGETS {
        let base = r.residue_mod(step).expect("3 ∤ step");
        for i in 0..samples_per_target {
            let depth = (i as u32) % (max_depth + 1);
            let pk = (p as i128).pow(depth);
            let r_pk = r.residue_mod(pk as u64).unwrap_or(0) as i128;
            let (x, m) = crate::rational::crt((base as i128, step as i128), (r_pk, pk)).expect("coprime moduli");
            let nn = x + m * (i as i128 / (max_depth as i128 + 1));
            let vt = crate::tribonacci::trib_val_fast(nn, p);
            let vd = crate::padic::val_big(&r.numerator_of_difference(nn), p)?;
            let (vt, vd) = match (vt.finite(), vd.finite()) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            ineq &= vt >= vd;
            samples.push((nn, vt, vd, r));
        }
    }

    Ok(CubeRootReport {
        p,
        n_period: n,
        prec: ctx.prec(),
        branches_agree,
        sum_one_third_vanishes: s1.is_zero(),
        sum_minus_five_thirds_vanishes: s2.is_zero(),
        symmetric_identity_holds: f1.is_zero() && f2.is_zero(),
        samples,
        inequality_holds: ineq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tribonacci::trib;
    use proptest::prelude::*;

    #[test]
    fn tail_cut_is_minimal() {
        let t = TailBound { p: 5, e: 1 };
        let j = t.cut(24);
        assert!(t.at(j as u64 + 1) >= 24);
        assert!(t.at(j as u64) < 24);
        for k in j as u64 + 1..200 {
            assert!(t.at(k) >= 24);
        }
    }

    #[test]
    fn series_for_p5_ell21() {
        let it = Interpolant::new(5, 24, 1).unwrap();
        let s = it.series(21).unwrap();
        assert_eq!(s.coeffs[0], Zp::new(5, 24).unwrap().from_int(24283));
        assert_eq!(s.strassman_mu().unwrap(), 1);
        for c in &s.coeffs[2..] {
            assert!(c.val() >= 1);
        }
        let z = s.hensel_zero().unwrap();
        assert!(z.unique);
        assert_eq!(z.u, 2);
        assert!(z.newton_trace.windows(2).all(|w| w[1] >= (2 * w[0]).min(24)));
    }

    #[test]
    fn beta_one_valuation_at_three() {
        let it = Interpolant::new(3, 24, 1).unwrap();
        assert_eq!(it.series(0).unwrap().coeffs[1].val(), 1);
        assert_eq!(it.series(12).unwrap().coeffs[1].val(), 1);
    }

    #[test]
    fn eval_matches_recurrence_on_integers() {
        for (p, ell) in [(7u64, 5i64), (5, 21), (13, 6), (83, 0)] {
            let ctx = PrimeContext::new(p, 12).unwrap();
            let zp = ctx.zp().clone();
            for m in -6i64..6 {
                let f = eval_f(&ctx, ell, &zp.from_int(m as i128)).unwrap();
                let n = ell + m * ctx.period() as i64;
                assert_eq!(f, zp.from_bigint(&trib(n)), "p = {p}, m = {m}");
            }
        }
    }

    #[test]
    fn nonvanishing_when_p_does_not_divide() {
        let ctx = PrimeContext::new(7, 10).unwrap();
        let zp = ctx.zp().clone();
        assert_eq!(eval_f(&ctx, 5, &zp.zero()).unwrap(), zp.from_int(7));
        for z in [0i128, 3, 100, -45, 7 * 7 * 13] {
            assert!(eval_f(&ctx, 4, &zp.from_int(z)).unwrap().is_unit());
        }
    }

    #[test]
    fn zero_at_integer_target() {
        let it = Interpolant::new(83, 24, 1).unwrap();
        let s = it.series(0).unwrap();
        let z = s.hensel_zero().unwrap();
        assert!(z.b.is_zero());
        assert_eq!(z.target, ZeroTarget::Integer { value: Rational::integer(0) });
        let s = it.series(287 - 17).unwrap();
        let z = s.hensel_zero().unwrap();
        assert_eq!(z.target, ZeroTarget::Integer { value: Rational::integer(-17) });
        let cert = s.derive_linear_formula(&z).unwrap().unwrap();
        assert_eq!((cert.kappa, cert.mu), (1, 1));
    }

    #[test]
    fn p5_zero_matches_its_target_to_full_tolerance() {
        let it = Interpolant::new(5, 24, 1).unwrap();
        let z = it.series(21).unwrap().hensel_zero().unwrap();
        let point = z.point();
        match z.target {
            ZeroTarget::Other { ref digits } => assert_eq!(digits, &point.digits()),
            ref t => {
                let v = t.value().unwrap().to_padic(point.ring()).unwrap();
                assert!(point.eq_mod(&v, z.tolerance()));
            }
        }
    }

    #[test]
    fn cube_root_certificate_small_family_prime() {
        let ctx = PrimeContext::new(47, 24).unwrap();
        let rep = cube_root_certificate(&ctx, 30, 4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.branches_agree, Some(true));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn series_agrees_with_exponential_sum(z in any::<i64>(), idx in 0usize..4) {
            let (p, ell) = [(5u64, 21i64), (13, 6), (47, 31), (83, 0)][idx];
            let it = Interpolant::new(p, 16, 1).unwrap();
            let s = it.series(ell).unwrap();
            let ctx = PrimeContext::new(p, 16).unwrap();
            let zz = ctx.zp().from_int(z as i128);
            let direct = eval_f(&ctx, ell, &zz).unwrap();
            prop_assert_eq!(s.eval(&zz).mul_p_pow(1), direct);
        }
    }
}
