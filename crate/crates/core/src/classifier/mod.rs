//! Per-prime decision procedure for the integer and rational forms of the
//! valuation conjecture.
//!
//! Over one period `ℓ ∈ [0, N)` the classifier needs only `T(ℓ)` and
//! `T(ℓ + N)` modulo `p^2`:
//!
//! * `p | T(ℓ)` (the class can contain zeros of the interpolant),
//! * `T(ℓ + N) ≢ T(ℓ) (mod p^2)` (the zero is simple and unique),
//! * `u = ℓ - (T(ℓ)/p) · ((T(ℓ+N) - T(ℓ))/p)^{-1} · N (mod p)`, the residue of
//!   `ℓ + N b` for the zero b.
//!
//! A residue whose u avoids the integer zeros of T mod p refutes the integer
//! form; avoiding all six rational twisted zeros refutes the rational form.

pub mod formula;
pub mod p3;
pub mod scan;
pub mod table;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{is_prime, pow_mod};
use crate::galois::PrimeContext;
use crate::interpolation::{Interpolant, LinearCertificate, ZeroRecord, ZeroTarget};
use crate::rational::{rational_targets, Rational, INTEGER_TARGETS};
use crate::tribonacci::TribWindow;

pub use formula::{
    builtin_spec, crt_witness, verify_formula, CaseKind, FormulaCase, FormulaSpec, VerifyReport, BUILTIN_SPECS,
};
pub use p3::p3_pipeline;
pub use scan::{scan_range, ScanSummary};
pub use table::{reproduce_table, EmbeddedRow, TableRow};

pub const DEFAULT_PRECISION: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// Two distinct rational twisted zeros share a class mod N.
    QtCollision { pairs: Vec<(Rational, Rational)> },
    /// The derivative condition fails at these residues.
    Cond48Fails { ells: Vec<u64> },
    /// Every simple zero lands on an integer zero mod p, yet some zero class
    /// is not an integer zero mod N.
    Cond49FailsEverywhere,
    /// As above with the six rational twisted zeros.
    Cond50FailsEverywhere,
    /// The sufficient condition for the rational form needs `d = 1` and `3 ∤ N`.
    HoldsCriterionInapplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// The law holds with modulus `q`. `implied` marks a rational verdict
    /// inherited from the integer one.
    Holds { q: u64, implied: bool },
    Fails { ell: u64, u: u64 },
    Undecided { diagnostic: Diagnostic },
    Excluded { reason: String },
}

impl Verdict {
    pub fn is_decided(&self) -> bool {
        matches!(self, Verdict::Holds { .. } | Verdict::Fails { .. })
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn undecided(&self) -> bool {
        matches!(self, Verdict::Undecided { .. })
    }
}

/// One residue `ℓ ∈ [0, N)` with `p | T(ℓ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub ell: u64,
    pub t_mod_p2: u64,
    pub t_shift_mod_p2: u64,
    /// `T(ℓ + N) ≢ T(ℓ) (mod p^2)`.
    pub simple: bool,
    /// `u mod p`, defined when `simple`.
    pub u: Option<u64>,
    pub u_integer_zero: bool,
    pub u_rational_zero: bool,
    /// Integer zero of T congruent to ℓ mod N.
    pub class_integer: Option<Rational>,
    /// Rational twisted zero congruent to ℓ mod N.
    pub class_rational: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zero: Option<ZeroSummary>,
}

/// Result of locating the zero of `f_ℓ` at precision K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSummary {
    pub target: Option<ZeroTarget>,
    pub unique: bool,
    pub mu: Option<usize>,
    pub u: Option<u64>,
    pub error: Option<String>,
}

impl From<&ZeroRecord> for ZeroSummary {
    fn from(r: &ZeroRecord) -> Self {
        ZeroSummary {
            target: Some(r.target.clone()),
            unique: r.unique,
            mu: Some(r.mu),
            u: Some(r.u),
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub p: u64,
    pub n_period: Option<u64>,
    pub d: Option<u32>,
    pub precision_used: u32,
    pub verdict_ml: Verdict,
    pub verdict_rat: Verdict,
    pub zero_table: Vec<ZeroRow>,
    /// Certified law behind a `Holds` verdict.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub formula_ml: Option<FormulaSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub formula_rat: Option<FormulaSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub prec: u32,
    /// Locate and identify the zero of every interpolant with `p | T(ℓ)`.
    pub locate_zeros: bool,
    /// Derive and attach the law behind each `Holds` verdict.
    pub certify: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            prec: DEFAULT_PRECISION,
            locate_zeros: true,
            certify: true,
        }
    }
}

impl ClassifyOptions {
    /// Verdicts only: no series are built.
    pub fn verdicts_only(prec: u32) -> Self {
        ClassifyOptions {
            prec,
            locate_zeros: false,
            certify: false,
        }
    }
}

fn excluded(p: u64, prec: u32, reason: &str) -> ClassificationRecord {
    ClassificationRecord {
        p,
        n_period: None,
        d: None,
        precision_used: prec,
        verdict_ml: Verdict::Excluded { reason: reason.into() },
        verdict_rat: Verdict::Excluded { reason: reason.into() },
        zero_table: Vec::new(),
        formula_ml: None,
        formula_rat: None,
    }
}

/// Residue modulo p of `u` and whether `T(ℓ+N) ≢ T(ℓ) (mod p^2)`.
pub fn residue_u(p: u64, n: u64, ell: u64, t: u64, t_shift: u64) -> Option<u64> {
    let p2 = p * p;
    let diff = (t_shift + p2 - t) % p2;
    if diff % p != 0 || t % p != 0 {
        return None;
    }
    let delta = (diff / p) % p;
    if delta == 0 {
        return None;
    }
    let beta0 = (t / p) % p;
    let inv = pow_mod(delta, p - 2, p);
    let corr = (beta0 as u128 * inv as u128 % p as u128 * (n % p) as u128 % p as u128) as u64;
    Some(((ell % p) + p - corr) % p)
}

/// Rational twisted zeros reduced mod m; `None` where 3 is not invertible.
fn targets_mod(m: u64, targets: &[Rational]) -> Vec<(Rational, Option<u64>)> {
    targets.iter().map(|&r| (r, r.residue_mod(m))).collect()
}

fn q_t_collisions(n: u64) -> Vec<(Rational, Rational)> {
    let res = targets_mod(n, &rational_targets());
    let mut out = Vec::new();
    for i in 0..res.len() {
        for j in i + 1..res.len() {
            if let (Some(a), Some(b)) = (res[i].1, res[j].1) {
                if a == b {
                    out.push((res[i].0, res[j].0));
                }
            }
        }
    }
    out
}

/// Residues `ℓ ∈ [0, N)` with `p | T(ℓ)`, from one pass over the period
/// modulo `p^2`.
pub(crate) fn zero_rows(p: u64, n: u64) -> Vec<ZeroRow> {
    let p2 = p * p;
    let int_mod_p = targets_mod(p, &INTEGER_TARGETS);
    let rat_mod_p = targets_mod(p, &rational_targets());
    let int_mod_n = targets_mod(n, &INTEGER_TARGETS);
    let rat_mod_n = targets_mod(n, &rational_targets());
    let hit = |table: &[(Rational, Option<u64>)], r: u64| table.iter().find(|(_, x)| *x == Some(r)).map(|(q, _)| *q);

    let mut rows = Vec::new();
    let mut w0 = TribWindow::at(0, p2);
    let mut w1 = TribWindow::at(n as i128, p2);
    for ell in 0..n {
        let t = w0.current();
        if t % p == 0 {
            let ts = w1.current();
            let u = residue_u(p, n, ell, t, ts);
            rows.push(ZeroRow {
                ell,
                t_mod_p2: t,
                t_shift_mod_p2: ts,
                simple: u.is_some(),
                u,
                u_integer_zero: u.is_some_and(|u| hit(&int_mod_p, u).is_some()),
                u_rational_zero: u.is_some_and(|u| hit(&rat_mod_p, u).is_some()),
                class_integer: hit(&int_mod_n, ell),
                class_rational: hit(&rat_mod_n, ell),
                zero: None,
            });
        }
        w0.step();
        w1.step();
    }
    rows
}

/// Classification with default options.
pub fn classify_prime(p: u64, prec: u32) -> Result<ClassificationRecord> {
    classify_prime_with(
        p,
        &ClassifyOptions {
            prec,
            ..ClassifyOptions::default()
        },
    )
}

pub fn classify_prime_with(p: u64, opts: &ClassifyOptions) -> Result<ClassificationRecord> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if opts.prec < 3 {
        return Err(Error::Precondition("precision must be at least 3".into()));
    }
    match p {
        2 => return Ok(excluded(p, opts.prec, "ramified in the splitting field; exp does not converge on 2Z_2")),
        11 => return Ok(excluded(p, opts.prec, "ramified in the splitting field")),
        3 => return Ok(p3_pipeline(opts.prec)?.0),
        _ => {}
    }
    let ctx = PrimeContext::new(p, 2)?;
    let n = ctx.period();
    let d = ctx.d();

    let rows = zero_rows(p, n);

    let non_simple: Vec<u64> = rows.iter().filter(|r| !r.simple).map(|r| r.ell).collect();

    let verdict_ml = if let Some(r) = rows.iter().find(|r| r.simple && !r.u_integer_zero) {
        Verdict::Fails {
            ell: r.ell,
            u: r.u.expect("simple"),
        }
    } else if non_simple.is_empty() && rows.iter().all(|r| r.class_integer.is_some()) {
        Verdict::Holds { q: n, implied: false }
    } else if !non_simple.is_empty() {
        Verdict::Undecided {
            diagnostic: Diagnostic::Cond48Fails {
                ells: non_simple.clone(),
            },
        }
    } else {
        Verdict::Undecided {
            diagnostic: Diagnostic::Cond49FailsEverywhere,
        }
    };

    let collisions = if n % 3 == 0 { Vec::new() } else { q_t_collisions(n) };
    let verdict_rat = if let Some(r) = rows.iter().find(|r| r.simple && !r.u_rational_zero) {
        Verdict::Fails {
            ell: r.ell,
            u: r.u.expect("simple"),
        }
    } else if let Verdict::Holds { q, .. } = verdict_ml {
        Verdict::Holds { q, implied: true }
    } else if !collisions.is_empty() {
        Verdict::Undecided {
            diagnostic: Diagnostic::QtCollision { pairs: collisions },
        }
    } else if !non_simple.is_empty() {
        Verdict::Undecided {
            diagnostic: Diagnostic::Cond48Fails { ells: non_simple },
        }
    } else if d != 1 || n % 3 == 0 {
        Verdict::Undecided {
            diagnostic: Diagnostic::HoldsCriterionInapplicable {
                reason: if d != 1 {
                    format!("the roots generate an extension of degree {d}")
                } else {
                    format!("3 divides N = {n}")
                },
            },
        }
    } else if rows.iter().all(|r| r.class_rational.is_some()) {
        Verdict::Holds { q: n, implied: false }
    } else {
        Verdict::Undecided {
            diagnostic: Diagnostic::Cond50FailsEverywhere,
        }
    };

    let mut record = ClassificationRecord {
        p,
        n_period: Some(n),
        d: Some(d),
        precision_used: opts.prec,
        verdict_ml,
        verdict_rat,
        zero_table: rows,
        formula_ml: None,
        formula_rat: None,
    };

    if opts.locate_zeros || opts.certify {
        let interp = Interpolant::new(p, opts.prec, 1)?;
        let mut certs: Vec<Option<LinearCertificate>> = Vec::with_capacity(record.zero_table.len());
        for row in &mut record.zero_table {
            let series = interp.series(row.ell as i64)?;
            let (summary, cert) = match series.locate_zero() {
                Ok(Some(z)) => {
                    let cert = series.derive_linear_formula(&z)?;
                    (ZeroSummary::from(&z), cert)
                }
                Ok(None) => (
                    ZeroSummary {
                        target: None,
                        unique: false,
                        mu: Some(0),
                        u: None,
                        error: None,
                    },
                    None,
                ),
                Err(e) => (
                    ZeroSummary {
                        target: None,
                        unique: false,
                        mu: series.strassman_mu().ok(),
                        u: None,
                        error: Some(e.to_string()),
                    },
                    None,
                ),
            };
            if opts.locate_zeros {
                row.zero = Some(summary);
            }
            certs.push(cert);
        }
        if opts.certify {
            if let Verdict::Holds { q, implied: false } = record.verdict_ml {
                record.formula_ml = Some(assemble_linear_spec(p, q, &certs)?);
            }
            if let Verdict::Holds { q, implied } = record.verdict_rat {
                record.formula_rat = if implied {
                    record.formula_ml.clone()
                } else {
                    Some(assemble_linear_spec(p, q, &certs)?)
                };
            }
        }
    }
    Ok(record)
}

/// Builds the law from one linear certificate per zero class; residues
/// without a zero class have valuation 0.
fn assemble_linear_spec(p: u64, q: u64, certs: &[Option<LinearCertificate>]) -> Result<FormulaSpec> {
    let mut cases = Vec::new();
    for cert in certs {
        let cert = cert
            .as_ref()
            .ok_or_else(|| Error::Certificate("a zero class has no linear certificate".into()))?;
        let a = cert
            .a
            .ok_or_else(|| Error::Certificate(format!("zero at ell = {} matches no rational", cert.ell)))?;
        cases.push(FormulaCase {
            modulus: cert.modulus,
            residues: vec![cert.ell.rem_euclid(cert.modulus as i64) as u64],
            kind: CaseKind::Linear {
                a,
                kappa: cert.kappa,
                mu: cert.mu,
            },
        });
    }
    let spec = FormulaSpec {
        p,
        modulus: q,
        cases,
        default: Some(CaseKind::Constant { kappa: 0 }),
    }
    .canonical();
    spec.validate()?;
    Ok(spec)
}

/// Linear law on `n ≡ ℓ (mod sN)` derived from the zero of the interpolant.
pub fn derive_linear_formula(p: u64, prec: u32, ell: i64, s: u64) -> Result<Option<LinearCertificate>> {
    let interp = Interpolant::new(p, prec, s)?;
    let series = interp.series(ell)?;
    match series.locate_zero()? {
        Some(z) => series.derive_linear_formula(&z),
        None => Ok(None),
    }
}
