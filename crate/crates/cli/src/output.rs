//! The record every command emits, and its JSON, CSV and text encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use tribadic::classifier::formula::Mismatch;
use tribadic::classifier::table::RowCheck;
use tribadic::classifier::{ClassificationRecord, FormulaSpec, ScanSummary, TableRow, Verdict, VerifyReport};
use tribadic::interpolation::{LinearCertificate, ZeroTarget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
    Excluded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecided => 2,
            Status::Excluded => 3,
        }
    }
}

pub const USAGE_EXIT: i32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub payload: Payload,
    pub precision_used: u32,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Classification(ClassificationRecord),
    Table(TablePayload),
    Verify(VerifyPayload),
    Zero(ZeroPayload),
    Scan(ScanPayload),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablePayload {
    pub rows: Vec<TableRow>,
    /// Verdict of each prime without a failure witness.
    pub annotations: Vec<(u64, String)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checks: Option<Vec<RowCheck>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub spec: FormulaSpec,
    pub range: (i64, i64),
    pub adversarial_points: usize,
    pub report: VerifyReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPayload {
    pub p: u64,
    pub ell: i64,
    pub multiplier: u64,
    pub period: Option<u64>,
    /// p-adic digits of b, least significant first.
    pub digits: Vec<u64>,
    pub mu: Option<usize>,
    pub unique: bool,
    pub u: Option<u64>,
    pub newton_trace: Vec<u32>,
    pub target: Option<ZeroTarget>,
    pub certificate: Option<LinearCertificate>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPayload {
    pub summary: ScanSummary,
    pub counts: BTreeMap<String, usize>,
    pub family_fraction: f64,
    pub family_expected: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// CSV row of a classification zero table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCsvRow {
    pub ell: u64,
    pub simple: bool,
    pub u: Option<u64>,
    pub u_integer_zero: bool,
    pub u_rational_zero: bool,
    pub class_integer: Option<String>,
    pub class_rational: Option<String>,
    pub target: Option<String>,
}

/// CSV summary of a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCsvRow {
    pub category: String,
    pub count: usize,
    pub primes: String,
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

fn target_label(t: &ZeroTarget) -> String {
    match t {
        ZeroTarget::Integer { value } | ZeroTarget::Rational { value } => value.to_string(),
        ZeroTarget::Other { .. } => "other".into(),
    }
}

fn set_label(s: &std::collections::BTreeSet<u64>) -> String {
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn zero_csv_rows(rec: &ClassificationRecord) -> Vec<ZeroCsvRow> {
    rec.zero_table
        .iter()
        .map(|r| ZeroCsvRow {
            ell: r.ell,
            simple: r.simple,
            u: r.u,
            u_integer_zero: r.u_integer_zero,
            u_rational_zero: r.u_rational_zero,
            class_integer: r.class_integer.map(|c| c.to_string()),
            class_rational: r.class_rational.map(|c| c.to_string()),
            target: r.zero.as_ref().and_then(|z| z.target.as_ref()).map(target_label),
        })
        .collect()
}

pub fn count_csv_rows(s: &ScanSummary) -> Vec<CountCsvRow> {
    [
        ("ml_holds", &s.ml_holds),
        ("ml_fails", &s.ml_fails),
        ("ml_undecided", &s.ml_undecided),
        ("rat_holds", &s.rat_holds),
        ("rat_holds_implied", &s.rat_holds_implied),
        ("rat_fails", &s.rat_fails),
        ("rat_undecided", &s.rat_undecided),
        ("excluded", &s.excluded),
        ("family", &s.family),
    ]
    .into_iter()
    .map(|(k, v)| CountCsvRow {
        category: k.into(),
        count: v.len(),
        primes: set_label(v),
    })
    .collect()
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Holds { q, implied: false } => format!("holds with Q = {q}"),
        Verdict::Holds { q, implied: true } => format!("holds with Q = {q} (from the integer law)"),
        Verdict::Fails { ell, u } => format!("fails (ell = {ell}, u = {u})"),
        Verdict::Undecided { diagnostic } => format!("undecided: {diagnostic:?}"),
        Verdict::Excluded { reason } => format!("excluded: {reason}"),
    }
}

impl OutputRecord {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable record") + "\n",
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_csv(&self) -> String {
        match &self.payload {
            Payload::Classification(rec) => to_csv(&zero_csv_rows(rec)),
            Payload::Table(t) => to_csv(&t.rows),
            Payload::Verify(v) => to_csv(&v.report.mismatches),
            Payload::Zero(z) => to_csv(std::slice::from_ref(z).iter().map(ZeroCsvLine::from).collect::<Vec<_>>().as_slice()),
            Payload::Scan(s) => to_csv(&count_csv_rows(&s.summary)),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        match &self.payload {
            Payload::Classification(rec) => {
                let _ = writeln!(out, "p = {}", rec.p);
                if let (Some(n), Some(d)) = (rec.n_period, rec.d) {
                    let _ = writeln!(out, "N = {n}, splitting degree {d}");
                }
                let _ = writeln!(out, "integer form:  {}", verdict_text(&rec.verdict_ml));
                let _ = writeln!(out, "rational form: {}", verdict_text(&rec.verdict_rat));
                for r in &rec.zero_table {
                    let target = r.zero.as_ref().and_then(|z| z.target.as_ref()).map(target_label);
                    let _ = writeln!(
                        out,
                        "  ell = {:>6}  simple = {:<5}  u = {:>5}  zero = {}",
                        r.ell,
                        r.simple,
                        r.u.map_or("-".into(), |u| u.to_string()),
                        target.unwrap_or_else(|| "-".into())
                    );
                }
            }
            Payload::Table(t) => {
                for r in &t.rows {
                    let tail = match (r.ell, r.u) {
                        (Some(e), Some(u)) => format!("{e:>8} {u:>6}"),
                        _ => t.annotations.iter().find(|(p, _)| *p == r.p).map(|(_, a)| a.clone()).unwrap_or_default(),
                    };
                    let _ = writeln!(out, "{:>6} {:>8} {tail}", r.p, r.n);
                }
                if let Some(checks) = &t.checks {
                    let ok = checks.iter().filter(|c| c.passed()).count();
                    let smallest = checks.iter().filter(|c| c.listed_is_smallest()).count();
                    let _ = writeln!(out, "embedded table: {ok}/{} rows revalidate, {smallest} list our smallest ell", checks.len());
                    for c in checks.iter().filter(|c| !c.passed()) {
                        let _ = writeln!(out, "  row p = {} fails: {c:?}", c.row.p);
                    }
                }
            }
            Payload::Verify(v) => {
                let _ = writeln!(
                    out,
                    "p = {}, Q = {}: {} points checked ({} adversarial), {} mismatches",
                    v.spec.p,
                    v.spec.modulus,
                    v.report.checked,
                    v.adversarial_points,
                    v.report.mismatches.len()
                );
                if let Some(m) = v.report.mismatches.first() {
                    let _ = writeln!(out, "first mismatch: {}", mismatch_text(m));
                }
            }
            Payload::Zero(z) => {
                let _ = writeln!(out, "p = {}, ell = {}, s = {}", z.p, z.ell, z.multiplier);
                if let Some(e) = &z.error {
                    let _ = writeln!(out, "{e}");
                }
                if !z.digits.is_empty() {
                    let digits: Vec<String> = z.digits.iter().map(u64::to_string).collect();
                    let _ = writeln!(out, "b = {} (digits, lowest first)", digits.join(" "));
                    let _ = writeln!(out, "unique = {}, mu = {:?}, u = {:?}", z.unique, z.mu, z.u);
                }
                if let Some(t) = &z.target {
                    let _ = writeln!(out, "zero class: {}", target_label(t));
                }
                if let Some(c) = &z.certificate {
                    let shift = match c.a {
                        Some(a) if a.num() < 0 => format!("n + {}", a.to_string().trim_start_matches('-')),
                        Some(a) => format!("n - {a}"),
                        None => "n - a".into(),
                    };
                    let _ = writeln!(
                        out,
                        "nu_p(T(n)) = {} + nu_p({shift}) for n = {} mod {}",
                        c.kappa, c.ell, c.modulus
                    );
                }
            }
            Payload::Scan(s) => {
                for r in count_csv_rows(&s.summary) {
                    let _ = writeln!(out, "{:<18} {:>5}  {}", r.category, r.count, r.primes);
                }
                let _ = writeln!(
                    out,
                    "split family fraction {:.4} against {:.4}",
                    s.family_fraction, s.family_expected
                );
            }
        }
        let precision = match self.precision_used {
            0 => String::new(),
            k => format!(", precision {k}"),
        };
        let _ = writeln!(out, "status: {:?}{precision}, {} ms", self.status, self.elapsed_ms);
        out
    }
}

fn mismatch_text(m: &Mismatch) -> String {
    let show = |x: Option<String>| x.unwrap_or_else(|| "inf".into());
    format!(
        "n = {}: predicted {}, actual {}",
        m.n,
        show(m.predicted.map(|k| k.to_string())),
        show(m.actual.map(|k| k.to_string()))
    )
}

/// Single CSV line for a zero record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCsvLine {
    pub p: u64,
    pub ell: i64,
    pub s: u64,
    pub b_digits: String,
    pub unique: bool,
    pub mu: Option<usize>,
    pub u: Option<u64>,
    pub target: Option<String>,
}

impl From<&ZeroPayload> for ZeroCsvLine {
    fn from(z: &ZeroPayload) -> Self {
        ZeroCsvLine {
            p: z.p,
            ell: z.ell,
            s: z.multiplier,
            b_digits: z.digits.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
            unique: z.unique,
            mu: z.mu,
            u: z.u,
            target: z.target.as_ref().map(target_label),
        }
    }
}
