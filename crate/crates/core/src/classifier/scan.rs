//! Verdict counts over a range of primes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::table::P_MAX_LIMIT;
use crate::classifier::{classify_prime_with, ClassifyOptions, Verdict};
use crate::error::{Error, Result};
use crate::factor::primes_up_to;
use crate::galois::splitting_type;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub p_max: u64,
    pub primes: BTreeSet<u64>,
    pub ml_holds: BTreeSet<u64>,
    pub ml_fails: BTreeSet<u64>,
    pub ml_undecided: BTreeSet<u64>,
    pub rat_holds: BTreeSet<u64>,
    /// Rational holds inherited from the integer law.
    pub rat_holds_implied: BTreeSet<u64>,
    pub rat_fails: BTreeSet<u64>,
    pub rat_undecided: BTreeSet<u64>,
    pub excluded: BTreeSet<u64>,
    /// Primes `p ≡ 2 (mod 3)` at which P splits completely.
    pub family: BTreeSet<u64>,
}

impl ScanSummary {
    /// Union of two disjoint scans.
    pub fn merge(mut self, other: ScanSummary) -> ScanSummary {
        self.p_max = self.p_max.max(other.p_max);
        for (a, b) in [
            (&mut self.primes, other.primes),
            (&mut self.ml_holds, other.ml_holds),
            (&mut self.ml_fails, other.ml_fails),
            (&mut self.ml_undecided, other.ml_undecided),
            (&mut self.rat_holds, other.rat_holds),
            (&mut self.rat_holds_implied, other.rat_holds_implied),
            (&mut self.rat_fails, other.rat_fails),
            (&mut self.rat_undecided, other.rat_undecided),
            (&mut self.excluded, other.excluded),
            (&mut self.family, other.family),
        ] {
            a.extend(b);
        }
        self
    }

    pub fn family_fraction(&self) -> f64 {
        if self.primes.is_empty() {
            0.0
        } else {
            self.family.len() as f64 / self.primes.len() as f64
        }
    }

    /// Expected density of the split family among all primes.
    pub const FAMILY_DENSITY: f64 = 1.0 / 12.0;
}

fn scan_one(p: u64, prec: u32) -> Result<ScanSummary> {
    let mut s = ScanSummary {
        p_max: p,
        ..ScanSummary::default()
    };
    s.primes.insert(p);
    let rec = classify_prime_with(p, &ClassifyOptions::verdicts_only(prec))?;
    match rec.verdict_ml {
        Verdict::Holds { .. } => s.ml_holds.insert(p),
        Verdict::Fails { .. } => s.ml_fails.insert(p),
        Verdict::Undecided { .. } => s.ml_undecided.insert(p),
        Verdict::Excluded { .. } => s.excluded.insert(p),
    };
    match rec.verdict_rat {
        Verdict::Holds { implied: true, .. } => s.rat_holds_implied.insert(p),
        Verdict::Holds { implied: false, .. } => s.rat_holds.insert(p),
        Verdict::Fails { .. } => s.rat_fails.insert(p),
        Verdict::Undecided { .. } => s.rat_undecided.insert(p),
        Verdict::Excluded { .. } => false,
    };
    if p % 3 == 2 && p != 2 && p != 11 && splitting_type(p)?.d == 1 {
        s.family.insert(p);
    }
    Ok(s)
}

/// Classifies every prime `p <= p_max` in parallel.
pub fn scan_range(p_max: u64, prec: u32) -> Result<ScanSummary> {
    if p_max > P_MAX_LIMIT {
        return Err(Error::Precondition(format!("p_max must not exceed {P_MAX_LIMIT}")));
    }
    let parts = primes_up_to(p_max)
        .par_iter()
        .map(|&p| scan_one(p, prec))
        .collect::<Result<Vec<_>>>()?;
    let mut out = parts.into_iter().fold(ScanSummary::default(), ScanSummary::merge);
    out.p_max = p_max;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_independent() {
        let a = scan_one(5, 8).unwrap();
        let b = scan_one(83, 8).unwrap();
        assert_eq!(a.clone().merge(b.clone()), b.merge(a));
    }

    #[test]
    fn prefix_is_consistent() {
        let small = scan_range(60, 8).unwrap();
        assert!(small.excluded.contains(&2) && small.excluded.contains(&11));
        assert!(small.ml_holds.contains(&3));
        assert!(small.rat_undecided.contains(&47) && small.rat_undecided.contains(&53));
        assert_eq!(small.ml_fails.len() + 3, small.primes.len());
        assert!(small.family.contains(&47));
    }
}
