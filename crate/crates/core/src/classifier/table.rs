//! Failure witnesses per prime and the checked-in witness table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{classify_prime_with, residue_u, ClassifyOptions, Verdict};
use crate::error::{Error, Result};
use crate::factor::primes_up_to;
use crate::galois::PrimeContext;
use crate::tribonacci::trib_mod_u64;

const TABLE1_CSV: &str = include_str!("../../assets/table1.csv");
const TABLE1_SHA256: &str = "eec62c649df6445d1939c32757842f56ad4c05f5ca1b8404b9f639f579c6e93d";

/// Largest `p_max` accepted by [`reproduce_table`] and the range scan.
pub const P_MAX_LIMIT: u64 = 10_000;

/// One row `p, N, ell, u`; `ell` and `u` are empty unless the integer form fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub ell: Option<u64>,
    pub u: Option<u64>,
}

/// A row of the embedded table; `starred` marks primes where the listed
/// residue does not refute the rational form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedRow {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub ell: u64,
    pub u: u64,
    pub starred: bool,
}

/// Independent recheck of one embedded row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub row: EmbeddedRow,
    pub n_computed: u64,
    /// `p | T(ℓ)`.
    pub divides: bool,
    /// `T(ℓ + N) ≢ T(ℓ) (mod p^2)`.
    pub simple: bool,
    pub u_computed: Option<u64>,
    /// Our own witness ℓ for the prime, when the search finds one.
    pub our_ell: Option<u64>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.n_computed == self.row.n && self.divides && self.simple && self.u_computed == Some(self.row.u)
    }

    pub fn listed_is_smallest(&self) -> bool {
        self.our_ell == Some(self.row.ell)
    }
}

fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Rows of the embedded table after checksum verification.
pub fn embedded_rows() -> Result<Vec<EmbeddedRow>> {
    let digest = sha256_hex(TABLE1_CSV.as_bytes());
    if digest != TABLE1_SHA256 {
        return Err(Error::Asset(format!("table checksum mismatch: {digest}")));
    }
    csv::Reader::from_reader(TABLE1_CSV.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Asset(e.to_string())))
        .collect()
}

fn primes_for_table(p_max: u64) -> Result<Vec<u64>> {
    if p_max > P_MAX_LIMIT {
        return Err(Error::Precondition(format!("p_max must not exceed {P_MAX_LIMIT}")));
    }
    Ok(primes_up_to(p_max).into_iter().filter(|&p| p >= 5 && p != 11).collect())
}

/// `N` and our smallest failure witness for every prime `5 <= p <= p_max`
/// other than 11, ordered by p.
pub fn reproduce_table(p_max: u64, prec: u32) -> Result<Vec<TableRow>> {
    let opts = ClassifyOptions::verdicts_only(prec);
    let mut rows = primes_for_table(p_max)?
        .par_iter()
        .map(|&p| {
            let rec = classify_prime_with(p, &opts)?;
            let (ell, u) = match rec.verdict_ml {
                Verdict::Fails { ell, u } => (Some(ell), Some(u)),
                _ => (None, None),
            };
            Ok(TableRow {
                p,
                n: rec.n_period.expect("unramified prime"),
                ell,
                u,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.p);
    Ok(rows)
}

/// Rechecks every embedded row from scratch.
pub fn validate_embedded_rows() -> Result<Vec<RowCheck>> {
    let rows = embedded_rows()?;
    let mut out = rows
        .par_iter()
        .map(|row| {
            let p = row.p;
            let n = PrimeContext::new(p, 2)?.period();
            let p2 = p * p;
            let t = trib_mod_u64(row.ell as i128, p2);
            let ts = trib_mod_u64(row.ell as i128 + row.n as i128, p2);
            let u_computed = residue_u(p, row.n, row.ell, t, ts);
            let rec = classify_prime_with(p, &ClassifyOptions::verdicts_only(3))?;
            let our_ell = match rec.verdict_ml {
                Verdict::Fails { ell, .. } => Some(ell),
                _ => None,
            };
            Ok(RowCheck {
                row: row.clone(),
                n_computed: n,
                divides: t % p == 0,
                simple: (ts + p2 - t) % p2 != 0,
                u_computed,
                our_ell,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|c| c.row.p);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asset_parses() {
        let rows = embedded_rows().unwrap();
        assert_eq!(rows.len(), 102);
        assert_eq!(rows[0], EmbeddedRow { p: 5, n: 31, ell: 21, u: 2, starred: false });
        let starred: Vec<u64> = rows.iter().filter(|r| r.starred).map(|r| r.p).collect();
        assert_eq!(starred, vec![47, 53, 269, 401, 419, 499, 587]);
    }

    #[test]
    fn small_rows_validate() {
        let rows = reproduce_table(60, 8).unwrap();
        assert_eq!(rows.iter().map(|r| r.p).next(), Some(5));
        assert!(rows.iter().all(|r| r.ell.is_some()));
        assert_eq!(rows.iter().find(|r| r.p == 7).map(|r| r.n), Some(48));
        assert!(reproduce_table(P_MAX_LIMIT + 1, 8).is_err());
    }
}
