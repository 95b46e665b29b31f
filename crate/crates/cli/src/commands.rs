use std::path::Path;

use rayon::prelude::*;

use tribadic::classifier::formula::adversarial_points;
use tribadic::classifier::scan::ScanSummary;
use tribadic::classifier::table::validate_embedded_rows;
use tribadic::classifier::{
    builtin_spec, classify_prime_with, reproduce_table, scan_range, verify_formula, ClassifyOptions, FormulaSpec,
    Verdict,
};
use tribadic::interpolation::Interpolant;
use tribadic::Error;

use crate::output::{Payload, ScanPayload, Status, TablePayload, VerifyPayload, ZeroPayload};

/// Number of precision doublings tried before giving up.
const MAX_DOUBLINGS: u32 = 3;

pub struct Outcome {
    pub status: Status,
    pub payload: Payload,
    pub precision_used: u32,
}

/// Failure the front end reports as a usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn with_doubling<T>(prec: u32, mut f: impl FnMut(u32) -> Result<T, Error>) -> Result<(T, u32), Error> {
    let mut k = prec;
    for _ in 0..MAX_DOUBLINGS {
        match f(k) {
            Err(Error::PrecisionExhausted(_)) => k *= 2,
            other => return other.map(|v| (v, k)),
        }
    }
    f(k).map(|v| (v, k))
}

pub fn classify(p: u64, prec: u32, locate_zeros: bool) -> Result<Outcome, UsageError> {
    let (rec, k) = with_doubling(prec, |k| {
        classify_prime_with(
            p,
            &ClassifyOptions {
                prec: k,
                locate_zeros,
                certify: true,
            },
        )
    })?;
    let status = match (&rec.verdict_ml, &rec.verdict_rat) {
        (Verdict::Excluded { .. }, _) => Status::Excluded,
        (a, b) if a.is_decided() || b.is_decided() => Status::Pass,
        _ => Status::Undecided,
    };
    Ok(Outcome {
        status,
        payload: Payload::Classification(rec),
        precision_used: k,
    })
}

pub fn table(max: u64, prec: u32, validate: bool) -> Result<Outcome, UsageError> {
    let rows = reproduce_table(max, prec)?;
    let annotations = rows
        .par_iter()
        .filter(|r| r.ell.is_none())
        .map(|r| {
            let rec = classify_prime_with(r.p, &ClassifyOptions::verdicts_only(prec))?;
            let label = match rec.verdict_ml {
                Verdict::Holds { q, .. } => format!("integer law holds, Q = {q}"),
                Verdict::Undecided { diagnostic } => format!("undecided: {diagnostic:?}"),
                other => format!("{other:?}"),
            };
            Ok((r.p, label))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let checks = if validate { Some(validate_embedded_rows()?) } else { None };
    let ok = checks.as_ref().is_none_or(|c| c.iter().all(|c| c.passed()));
    Ok(Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        payload: Payload::Table(TablePayload {
            rows,
            annotations,
            checks,
        }),
        precision_used: prec,
    })
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

pub fn load_spec(name: &str) -> Result<FormulaSpec, UsageError> {
    if let Some(spec) = builtin_spec(name) {
        return Ok(spec);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(UsageError(format!("unknown spec {name:?}")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{name}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{name}: {e}")))
}

pub fn verify(spec: &FormulaSpec, range: (i64, i64), depth: u32) -> Result<Outcome, UsageError> {
    spec.validate()?;
    let extra = if depth > 0 { adversarial_points(spec, depth)? } else { Vec::new() };
    let report = verify_formula(spec, range.0..=range.1, &extra)?;
    Ok(Outcome {
        status: if report.passed() { Status::Pass } else { Status::Fail },
        payload: Payload::Verify(VerifyPayload {
            spec: spec.clone(),
            range,
            adversarial_points: extra.len(),
            report,
        }),
        precision_used: 0,
    })
}

pub fn zero(p: u64, ell: i64, prec: u32, s: u64) -> Result<Outcome, UsageError> {
    let mut payload = ZeroPayload {
        p,
        ell,
        multiplier: s,
        period: None,
        digits: Vec::new(),
        mu: None,
        unique: false,
        u: None,
        newton_trace: Vec::new(),
        target: None,
        certificate: None,
        error: None,
    };
    let interp = match Interpolant::new(p, prec, s) {
        Ok(i) => i,
        Err(e @ Error::UnsupportedPrime(..)) => {
            payload.error = Some(e.to_string());
            return Ok(Outcome {
                status: Status::Excluded,
                payload: Payload::Zero(payload),
                precision_used: prec,
            });
        }
        Err(e) => return Err(e.into()),
    };
    payload.period = Some(interp.period());
    let found = with_doubling(prec, |k| {
        let interp = if k == prec { interp.clone() } else { Interpolant::new(p, k, s)? };
        let series = interp.series(ell)?;
        payload.mu = Some(series.strassman_mu()?);
        let zero = series.locate_zero()?;
        let cert = match &zero {
            Some(z) => series.derive_linear_formula(z)?,
            None => None,
        };
        Ok((zero, cert))
    });
    let (status, k) = match found {
        Ok(((Some(z), cert), k)) => {
            payload.digits = z.b.digits();
            payload.unique = z.unique;
            payload.u = Some(z.u);
            payload.newton_trace = z.newton_trace.clone();
            payload.target = Some(z.target.clone());
            payload.certificate = cert;
            (Status::Pass, k)
        }
        Ok(((None, _), k)) => {
            payload.error = Some("Strassman bound is 0: the interpolant has no zero on Z_p".into());
            (Status::Fail, k)
        }
        Err(e) => {
            payload.error = Some(e.to_string());
            (Status::Fail, prec)
        }
    };
    Ok(Outcome {
        status,
        payload: Payload::Zero(payload),
        precision_used: k,
    })
}

pub fn scan(max: u64, prec: u32) -> Result<Outcome, UsageError> {
    let summary = scan_range(max, prec)?;
    let counts = [
        ("primes", summary.primes.len()),
        ("ml_holds", summary.ml_holds.len()),
        ("ml_fails", summary.ml_fails.len()),
        ("ml_undecided", summary.ml_undecided.len()),
        ("rat_holds", summary.rat_holds.len()),
        ("rat_holds_implied", summary.rat_holds_implied.len()),
        ("rat_fails", summary.rat_fails.len()),
        ("rat_undecided", summary.rat_undecided.len()),
        ("excluded", summary.excluded.len()),
        ("family", summary.family.len()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(Outcome {
        status: Status::Pass,
        payload: Payload::Scan(ScanPayload {
            family_fraction: summary.family_fraction(),
            family_expected: ScanSummary::FAMILY_DENSITY,
            summary,
            counts,
        }),
        precision_used: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..10000"), Ok((1, 10000)));
        assert_eq!(parse_range("-5..=5"), Ok((-5, 5)));
        assert!(parse_range("3..2").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn doubling_stops_on_success() {
        let mut calls = 0;
        let r = with_doubling(8, |k| {
            calls += 1;
            if k < 32 {
                Err(Error::PrecisionExhausted(k))
            } else {
                Ok(k)
            }
        });
        assert_eq!(r, Ok((32, 32)));
        assert_eq!(calls, 3);
    }
}
