//! The prime 3, where the residue condition for uniqueness fails at one class
//! and the period has to be refined to `3N = 39`.

use crate::classifier::formula::{spec_p3, CaseKind, FormulaCase, FormulaSpec};
use crate::classifier::{zero_rows, ClassificationRecord, Verdict, ZeroSummary};
use crate::error::{Error, Result};
use crate::galois::PrimeContext;
use crate::interpolation::{Interpolant, SeriesTrunc};
use crate::tribonacci::{trib_mod_u64, trib_period_mod};

const P: u64 = 3;

/// Constant valuation on `n ≡ ℓ (mod q)`, read off `T` modulo `3^(κ+1)` over
/// a full period of T mod that power.
fn constant_by_period(ell: u64, q: u64, kappa: u32) -> Result<bool> {
    let m = P.pow(kappa + 1);
    let period = trib_period_mod(m);
    if period % q != 0 {
        return Err(Error::Certificate(format!("period {period} mod {m} is not a multiple of {q}")));
    }
    let lower = P.pow(kappa);
    Ok((0..period / q).all(|j| {
        let t = trib_mod_u64((ell + j * q) as i128, m);
        t % lower == 0 && t != 0
    }))
}

/// Constant valuation `e + ν(β_0)` when the series has no zero.
fn constant_by_series(series: &SeriesTrunc) -> Result<Option<i64>> {
    if series.strassman_mu()? != 0 {
        return Ok(None);
    }
    Ok(Some(series.e as i64 + series.coeffs[0].val() as i64))
}

fn linear_case(series: &SeriesTrunc) -> Result<(FormulaCase, ZeroSummary)> {
    let zero = series
        .locate_zero()?
        .ok_or_else(|| Error::Certificate(format!("no zero in the class of {}", series.ell)))?;
    let cert = series
        .derive_linear_formula(&zero)?
        .ok_or_else(|| Error::Certificate(format!("linear term does not dominate at {}", series.ell)))?;
    let a = cert
        .a
        .ok_or_else(|| Error::Certificate(format!("zero at {} is not an integer zero", series.ell)))?;
    Ok((
        FormulaCase {
            modulus: cert.modulus,
            residues: vec![series.ell.rem_euclid(cert.modulus as i64) as u64],
            kind: CaseKind::Linear {
                a,
                kappa: cert.kappa,
                mu: cert.mu,
            },
        },
        ZeroSummary::from(&zero),
    ))
}

/// Derives the full law for p = 3 at working precision `prec` and checks it
/// against the known table.
pub fn p3_pipeline(prec: u32) -> Result<(ClassificationRecord, FormulaSpec)> {
    let ctx = PrimeContext::new(P, 2)?;
    let n = ctx.period();
    let mut rows = zero_rows(P, n);
    let base = Interpolant::new(P, prec, 1)?;
    let refined = Interpolant::new(P, prec, P)?;
    let q = refined.period();

    let mut cases = Vec::new();
    let zero_classes: Vec<u64> = rows.iter().map(|r| r.ell).collect();
    let others: Vec<u64> = (0..n).filter(|r| !zero_classes.contains(r)).collect();
    cases.push(FormulaCase {
        modulus: n,
        residues: others,
        kind: CaseKind::Constant { kappa: 0 },
    });

    for row in &mut rows {
        let series = base.series(row.ell as i64)?;
        let mu = series.strassman_mu()?;
        if mu == 0 {
            let kappa = constant_by_series(&series)?.expect("mu = 0");
            if !constant_by_period(row.ell, n, kappa as u32)? {
                return Err(Error::Certificate(format!("class {} mod {n} is not constant", row.ell)));
            }
            cases.push(FormulaCase {
                modulus: n,
                residues: vec![row.ell],
                kind: CaseKind::Constant { kappa },
            });
            row.zero = Some(ZeroSummary {
                target: None,
                unique: false,
                mu: Some(0),
                u: None,
                error: None,
            });
        } else if mu == 1 {
            let (case, summary) = linear_case(&series)?;
            cases.push(case);
            row.zero = Some(summary);
        } else {
            row.zero = Some(ZeroSummary {
                target: None,
                unique: false,
                mu: Some(mu),
                u: None,
                error: Some(format!("zero not simple; refined to modulus {q}")),
            });
            for j in 0..P {
                let ell = row.ell + j * n;
                let sub = refined.series(ell as i64)?;
                match constant_by_series(&sub)? {
                    Some(kappa) => {
                        if !constant_by_period(ell, q, kappa as u32)? {
                            return Err(Error::Certificate(format!("class {ell} mod {q} is not constant")));
                        }
                        cases.push(FormulaCase {
                            modulus: q,
                            residues: vec![ell],
                            kind: CaseKind::Constant { kappa },
                        });
                    }
                    None => cases.push(linear_case(&sub)?.0),
                }
            }
        }
    }

    let spec = FormulaSpec {
        p: P,
        modulus: q,
        cases,
        default: None,
    }
    .canonical();
    spec.validate()?;
    if spec != spec_p3().canonical() {
        return Err(Error::Certificate(format!("derived law for p = 3 differs from the known table: {spec:?}")));
    }
    let record = ClassificationRecord {
        p: P,
        n_period: Some(n),
        d: Some(ctx.d()),
        precision_used: prec,
        verdict_ml: Verdict::Holds { q, implied: false },
        verdict_rat: Verdict::Holds { q, implied: true },
        zero_table: rows,
        formula_ml: Some(spec.clone()),
        formula_rat: Some(spec.clone()),
    };
    Ok((record, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_seven_is_constant_one() {
        assert!(constant_by_period(7, 13, 1).unwrap());
        assert!(!constant_by_period(7, 13, 2).unwrap());
    }

    #[test]
    fn pipeline_reproduces_the_table() {
        let (rec, spec) = p3_pipeline(20).unwrap();
        assert_eq!(spec, spec_p3().canonical());
        let ells: Vec<u64> = rec.zero_table.iter().map(|r| r.ell).collect();
        assert_eq!(ells, vec![0, 7, 9, 12]);
        let mus: Vec<Option<usize>> = rec.zero_table.iter().map(|r| r.zero.as_ref().unwrap().mu).collect();
        assert_eq!(mus[0], Some(1));
        assert_eq!(mus[1], Some(0));
        assert!(mus[2].unwrap() >= 2);
        assert_eq!(mus[3], Some(1));
    }
}
