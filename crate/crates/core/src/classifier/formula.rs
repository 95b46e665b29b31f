//! Closed-form valuation laws `ν_p(T(n)) = κ` or `κ + μ ν_p(n - a)` on residue classes.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::is_prime;
use crate::padic::{val_big, Valuation};
use crate::rational::{crt, modinv_i128, Rational};
use crate::tribonacci::trib_val_fast;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseKind {
    Constant { kappa: i64 },
    Linear { a: Rational, kappa: i64, mu: u32 },
}

/// `n mod modulus ∈ residues`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaCase {
    pub modulus: u64,
    pub residues: Vec<u64>,
    #[serde(flatten)]
    pub kind: CaseKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSpec {
    pub p: u64,
    /// Common modulus `Q`; every case modulus divides it.
    pub modulus: u64,
    pub cases: Vec<FormulaCase>,
    /// Law for residues no case lists.
    pub default: Option<CaseKind>,
}

fn val_i128(x: i128, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % p as u128 == 0 {
        x /= p as u128;
        v += 1;
    }
    Some(v)
}

impl FormulaSpec {
    /// Checks the partition of `[0, Q)`, p-integrality of every centre, and
    /// `ν_p(a - i) >= ν_p(q)` for each residue i of a linear case mod q.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFormula(m));
        if !is_prime(self.p) {
            return bad(format!("{} is not prime", self.p));
        }
        if self.modulus == 0 || self.modulus > 50_000_000 {
            return bad(format!("modulus {} out of range", self.modulus));
        }
        for (idx, case) in self.cases.iter().enumerate() {
            if case.modulus == 0 || self.modulus % case.modulus != 0 {
                return bad(format!("case {idx}: modulus {} does not divide {}", case.modulus, self.modulus));
            }
            if case.residues.is_empty() {
                return bad(format!("case {idx}: no residues"));
            }
            if let Some(r) = case.residues.iter().find(|&&r| r >= case.modulus) {
                return bad(format!("case {idx}: residue {r} not reduced mod {}", case.modulus));
            }
            if let CaseKind::Linear { a, mu, .. } = case.kind {
                if mu == 0 {
                    return bad(format!("case {idx}: μ must be positive"));
                }
                if a.den() % self.p == 0 {
                    return bad(format!("case {idx}: centre {a} is not {}-integral", self.p));
                }
                let vq = val_i128(case.modulus as i128, self.p).unwrap_or(0);
                for &i in &case.residues {
                    let diff = a.num() as i128 - i as i128 * a.den() as i128;
                    if val_i128(diff, self.p).is_some_and(|v| v < vq) {
                        return bad(format!(
                            "case {idx}: ν_{}({a} - {i}) < ν_{}({})",
                            self.p, self.p, case.modulus
                        ));
                    }
                }
            }
        }
        for (idx, kind) in self.cases.iter().map(|c| &c.kind).chain(self.default.iter()).enumerate() {
            if let CaseKind::Constant { kappa } = kind {
                if *kappa < 0 {
                    return bad(format!("law {idx}: negative constant valuation"));
                }
            }
        }
        self.lookup_table().map(|_| ())
    }

    /// For each `r ∈ [0, Q)` the index of its case, `None` for the default.
    fn lookup_table(&self) -> Result<Vec<Option<usize>>> {
        let mut table = vec![None; self.modulus as usize];
        for (idx, case) in self.cases.iter().enumerate() {
            for &res in &case.residues {
                let mut r = res;
                while r < self.modulus {
                    if let Some(prev) = table[r as usize] {
                        return Err(Error::InvalidFormula(format!(
                            "residue {r} mod {} lies in cases {prev} and {idx}",
                            self.modulus
                        )));
                    }
                    table[r as usize] = Some(idx);
                    r += case.modulus;
                }
            }
        }
        if self.default.is_none() {
            if let Some(r) = table.iter().position(Option::is_none) {
                return Err(Error::InvalidFormula(format!("residue {r} is not covered")));
            }
        }
        Ok(table)
    }

    /// The law in force on the class of `n`.
    pub fn kind_for(&self, n: i128) -> CaseKind {
        let r = n.rem_euclid(self.modulus as i128) as u64;
        self.cases
            .iter()
            .find(|c| c.residues.contains(&(r % c.modulus)))
            .map(|c| c.kind)
            .or(self.default)
            .expect("validated spec covers every residue")
    }

    /// Predicted `ν_p(T(n))`; `None` stands for infinity.
    pub fn predict(&self, n: i128) -> Result<Option<i64>> {
        Ok(match self.kind_for(n) {
            CaseKind::Constant { kappa } => Some(kappa),
            CaseKind::Linear { a, kappa, mu } => {
                match val_big(&a.numerator_of_difference(n), self.p)? {
                    Valuation::Infinite => None,
                    Valuation::Finite(v) => Some(kappa + mu as i64 * v as i64),
                }
            }
        })
    }

    /// Cases sorted by (modulus, residues) with sorted residue lists.
    pub fn canonical(&self) -> FormulaSpec {
        let mut out = self.clone();
        for c in &mut out.cases {
            c.residues.sort_unstable();
        }
        out.cases.sort_by(|a, b| (a.modulus, &a.residues).cmp(&(b.modulus, &b.residues)));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: i128,
    pub predicted: Option<i64>,
    pub actual: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub p: u64,
    pub checked: usize,
    /// Mismatches in increasing order of n.
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the law against `ν_p(T(n))` for n in `range` and in `extra`.
pub fn verify_formula(spec: &FormulaSpec, range: RangeInclusive<i64>, extra: &[i128]) -> Result<VerifyReport> {
    spec.validate()?;
    let points: Vec<i128> = range.map(i128::from).chain(extra.iter().copied()).collect();
    let mut mismatches = points
        .par_iter()
        .map(|&n| {
            let predicted = spec.predict(n)?;
            let actual = trib_val_fast(n, spec.p).finite();
            let ok = match (predicted, actual) {
                (None, None) => true,
                (Some(k), Some(v)) => k == v as i64,
                _ => false,
            };
            Ok((!ok).then_some(Mismatch { n, predicted, actual }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    mismatches.sort_by_key(|m| m.n);
    mismatches.dedup();
    Ok(VerifyReport {
        p: spec.p,
        checked: points.len(),
        mismatches,
    })
}

/// Smallest positive n with `n ≡ i (mod q)` and `n ≡ a (mod p^k)`.
///
/// Requires `ν_p(a - i) >= ν_p(q)` and `k >= ν_p(q)`, so the two
/// congruences agree on their common p-power part.
pub fn crt_witness(i: i128, q: u64, a: Rational, p: u64, k: u32) -> Result<i128> {
    let pre = |m: String| Err(Error::Precondition(m));
    if a.den() % p == 0 {
        return pre(format!("{a} is not {p}-integral"));
    }
    let nu = val_i128(q as i128, p).unwrap_or(0);
    let diff = a.num() as i128 - i * a.den() as i128;
    if val_i128(diff, p).is_some_and(|v| v < nu) {
        return pre(format!("ν_{p}({a} - {i}) < ν_{p}({q})"));
    }
    if k < nu {
        return pre(format!("k = {k} below ν_{p}({q}) = {nu}"));
    }
    let q_prime = (q / p.pow(nu)) as i128;
    let pk = (p as i128)
        .checked_pow(k)
        .ok_or_else(|| Error::Precondition("p^k overflows".into()))?;
    let inv = modinv_i128(a.den() as i128, pk).expect("denominator prime to p");
    let a_mod = (BigInt::from(a.num()) * inv).mod_floor(&BigInt::from(pk));
    let a_mod = i128::try_from(a_mod).expect("reduced below p^k");
    let (x, m) = crt((i.rem_euclid(q_prime), q_prime), (a_mod, pk))
        .ok_or_else(|| Error::Precondition("CRT moduli overflow".into()))?;
    Ok(if x == 0 { m } else { x })
}

/// Adversarial points `n` deep inside each linear class: `ν_p(n - a) >= j`
/// for `j` up to `max_depth`.
pub fn adversarial_points(spec: &FormulaSpec, max_depth: u32) -> Result<Vec<i128>> {
    let mut out = Vec::new();
    for case in &spec.cases {
        if let CaseKind::Linear { a, .. } = case.kind {
            let nu = val_i128(case.modulus as i128, spec.p).unwrap_or(0);
            for &i in &case.residues {
                for j in nu..=max_depth.max(nu) {
                    let n = crt_witness(i as i128, case.modulus, a, spec.p, j)?;
                    out.push(n);
                    out.push(n + case.modulus as i128 * (spec.p as i128).pow(j));
                }
            }
        }
    }
    Ok(out)
}

fn constant(kappa: i64) -> CaseKind {
    CaseKind::Constant { kappa }
}

fn linear(a: Rational, kappa: i64) -> CaseKind {
    CaseKind::Linear { a, kappa, mu: 1 }
}

fn case(modulus: u64, residues: &[u64], kind: CaseKind) -> FormulaCase {
    FormulaCase {
        modulus,
        residues: residues.to_vec(),
        kind,
    }
}

/// The known law for p = 2.
pub fn spec_p2() -> FormulaSpec {
    let int = Rational::integer;
    FormulaSpec {
        p: 2,
        modulus: 32,
        cases: vec![
            case(4, &[1, 2], constant(0)),
            case(16, &[3, 11], constant(1)),
            case(16, &[4, 8], constant(2)),
            case(16, &[7], constant(3)),
            case(16, &[0], linear(int(0), -1)),
            case(16, &[12], linear(int(-4), -1)),
            case(32, &[15], linear(int(-17), 1)),
            case(32, &[31], linear(int(-1), 1)),
        ],
        default: None,
    }
}

/// The law for p = 3 with the class of 9 mod 13 refined mod 39.
pub fn spec_p3() -> FormulaSpec {
    let int = Rational::integer;
    FormulaSpec {
        p: 3,
        modulus: 39,
        cases: vec![
            case(13, &[1, 2, 3, 4, 5, 6, 8, 10, 11], constant(0)),
            case(13, &[7], constant(1)),
            case(13, &[0], linear(int(0), 2)),
            case(13, &[12], linear(int(-1), 2)),
            case(39, &[9], constant(4)),
            case(39, &[22], linear(int(-17), 4)),
            case(39, &[35], linear(int(-4), 4)),
        ],
        default: None,
    }
}

/// `ν_p(T(n)) = 1 + ν_p(n - c)` for `n ≡ c (mod Q)`, c among `centres`, else 0.
pub fn spec_linear_classes(p: u64, q: u64, centres: &[Rational]) -> Result<FormulaSpec> {
    let cases = centres
        .iter()
        .map(|&c| {
            let r = c
                .residue_mod(q)
                .ok_or_else(|| Error::InvalidFormula(format!("{c} has no residue mod {q}")))?;
            Ok(case(q, &[r], linear(c, 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = FormulaSpec {
        p,
        modulus: q,
        cases,
        default: Some(constant(0)),
    };
    spec.validate()?;
    Ok(spec)
}

/// Names accepted by [`builtin_spec`].
pub const BUILTIN_SPECS: [&str; 9] = ["p2", "p3", "p83", "p397", "p269", "p401", "p419", "p499", "p587"];

/// Moduli of the integer-centred laws.
pub const INTEGER_LAW_MODULI: [(u64, u64); 2] = [(83, 287), (397, 132)];
/// Moduli of the rational-centred laws.
pub const RATIONAL_LAW_MODULI: [(u64, u64); 5] = [(269, 268), (401, 400), (419, 418), (499, 166), (587, 293)];

pub fn builtin_spec(name: &str) -> Option<FormulaSpec> {
    use crate::rational::{rational_targets, INTEGER_TARGETS};
    match name {
        "p2" => return Some(spec_p2()),
        "p3" => return Some(spec_p3()),
        _ => {}
    }
    let p: u64 = name.strip_prefix('p')?.parse().ok()?;
    if let Some(&(_, q)) = INTEGER_LAW_MODULI.iter().find(|(pp, _)| *pp == p) {
        return spec_linear_classes(p, q, &INTEGER_TARGETS).ok();
    }
    if let Some(&(_, q)) = RATIONAL_LAW_MODULI.iter().find(|(pp, _)| *pp == p) {
        return spec_linear_classes(p, q, &rational_targets()).ok();
    }
    None
}

/// All well-formed single-case corruptions of a spec: each law's κ shifted
/// by ±1, and each linear law replaced by the constant κ.
pub fn corruptions(spec: &FormulaSpec) -> Vec<(String, FormulaSpec)> {
    let mut out = Vec::new();
    let shift = |k: CaseKind, by: i64| match k {
        CaseKind::Constant { kappa } => CaseKind::Constant { kappa: kappa + by },
        CaseKind::Linear { a, kappa, mu } => CaseKind::Linear { a, kappa: kappa + by, mu },
    };
    let negative = |k: CaseKind| matches!(k, CaseKind::Constant { kappa } if kappa < 0);
    for (idx, c) in spec.cases.iter().enumerate() {
        for by in [1, -1] {
            if negative(shift(c.kind, by)) {
                continue;
            }
            let mut s = spec.clone();
            s.cases[idx].kind = shift(c.kind, by);
            out.push((format!("case {idx}: κ {by:+}"), s));
        }
        if let CaseKind::Linear { kappa, .. } = c.kind {
            let mut s = spec.clone();
            s.cases[idx].kind = CaseKind::Constant { kappa: kappa.max(0) };
            out.push((format!("case {idx}: linear law made constant"), s));
        }
    }
    if let Some(d) = spec.default {
        for by in [1, -1] {
            if negative(shift(d, by)) {
                continue;
            }
            let mut s = spec.clone();
            s.default = Some(shift(d, by));
            out.push((format!("default: κ {by:+}"), s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_SPECS {
            let spec = builtin_spec(name).unwrap_or_else(|| panic!("{name}"));
            spec.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(builtin_spec("p5").is_none());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let mut s = spec_p2();
        s.cases.pop();
        assert!(matches!(s.validate(), Err(Error::InvalidFormula(_))));
        let mut s = spec_p2();
        s.cases[0].residues.push(3);
        assert!(s.validate().is_err());
        let mut s = spec_p3();
        s.cases[5].kind = linear(Rational::integer(-16), 4);
        assert!(s.validate().is_err());
        let mut s = spec_p3();
        s.cases[2].kind = linear(Rational::new(1, 3).unwrap(), 2);
        assert!(s.validate().is_err());
    }

    #[test]
    fn crt_witness_examples() {
        let n = crt_witness(0, 13, Rational::integer(0), 3, 5).unwrap();
        assert_eq!(n, 13 * 243);
        let n = crt_witness(12, 13, Rational::integer(-1), 3, 4).unwrap();
        assert_eq!(n % 13, 12);
        assert!(val_i128(n + 1, 3).unwrap() >= 4);
        assert_eq!(n, 1052);
        assert!(crt_witness(9, 39, Rational::integer(-16), 3, 4).is_err());
        let third = Rational::new(1, 3).unwrap();
        let n = crt_witness(third.residue_mod(268).unwrap() as i128, 268, third, 269, 3).unwrap();
        assert!(val_i128(3 * n - 1, 269).unwrap() >= 3);
    }

    #[test]
    fn p2_and_p3_laws_hold_on_a_short_range() {
        for spec in [spec_p2(), spec_p3()] {
            let extra = adversarial_points(&spec, 8).unwrap();
            let rep = verify_formula(&spec, 1..=2000, &extra).unwrap();
            assert!(rep.passed(), "{:?}", &rep.mismatches[..rep.mismatches.len().min(5)]);
        }
    }

    #[test]
    fn corruption_is_detected() {
        let spec = spec_p3();
        for (what, bad) in corruptions(&spec) {
            let rep = verify_formula(&bad, 1..=10_000, &[]).unwrap();
            assert!(!rep.passed(), "{what}");
        }
    }
}
