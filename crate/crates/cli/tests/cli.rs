use std::collections::BTreeMap;
use std::process::{Command, Output};

use proptest::prelude::*;

use tribadic::classifier::formula::Mismatch;
use tribadic::classifier::{builtin_spec, CaseKind, TableRow};
use tribadic_cli::output::{
    from_csv, to_csv, OutputRecord, Payload, Status, TablePayload, ZeroCsvRow,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribadic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (OutputRecord, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let rec = serde_json::from_slice(&out.stdout).expect("valid record");
    (rec, out.status.code().unwrap())
}

#[test]
fn exit_codes_follow_status() {
    assert_eq!(run(&["classify", "--prime", "397"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "--prime", "11"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--prime", "12"]).status.code(), Some(64));
    assert_eq!(run(&["classify", "--prime", "103", "--no-zeros"]).status.code(), Some(2));
    assert_eq!(run(&["classify"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "--spec", "nope"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "--spec", "p2", "--range", "9..1"]).status.code(), Some(64));
}

#[test]
fn classify_397_holds() {
    let (rec, code) = json(&["classify", "--prime", "397"]);
    assert_eq!(code, 0);
    assert_eq!(rec.command, "classify");
    assert_eq!(rec.precision_used, 24);
    let Payload::Classification(c) = rec.payload else {
        panic!("wrong payload")
    };
    assert_eq!(c.verdict_ml, tribadic::classifier::Verdict::Holds { q: 132, implied: false });
}

#[test]
fn table_csv_and_validation() {
    let out = run(&["table", "--max", "600", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p,N,ell,u\n"));
    let rows: Vec<TableRow> = from_csv(&text).unwrap();
    assert_eq!(rows.iter().filter(|r| r.ell.is_some()).count(), 102);
    for (p, n, ell, u) in [(179, 32221, 100, 114), (593, 3256, 849, 422)] {
        assert!(rows.contains(&TableRow { p, n, ell: Some(ell), u: Some(u) }));
    }
    let (rec, code) = json(&["table", "--max", "600", "--validate-paper"]);
    assert_eq!(code, 0);
    let Payload::Table(t) = rec.payload else { panic!() };
    assert!(t.checks.unwrap().iter().all(|c| c.passed()));
    assert_eq!(t.annotations.len(), 4);
}

#[test]
fn corrupted_spec_file_fails_with_first_mismatch() {
    let mut spec = builtin_spec("p2").unwrap();
    if let CaseKind::Constant { kappa } = &mut spec.cases[1].kind {
        *kappa += 1;
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    let out = run(&["verify", "--spec", path.to_str().unwrap(), "--range", "1..10000"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("first mismatch: n = 3:"), "{text}");

    let good = dir.path().join("good.json");
    let dumped = run(&["verify", "--spec", "p419", "--dump"]);
    std::fs::write(&good, dumped.stdout).unwrap();
    assert_eq!(run(&["verify", "--spec", good.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn zero_reports_certificate_and_conditions() {
    let (rec, code) = json(&["zero", "--prime", "3", "--ell", "35", "--multiplier", "3"]);
    assert_eq!(code, 0);
    let Payload::Zero(z) = rec.payload else { panic!() };
    let cert = z.certificate.unwrap();
    assert_eq!((cert.a.unwrap().to_string(), cert.kappa, cert.modulus), ("-4".into(), 4, 39));

    let (rec, _) = json(&["zero", "--prime", "5", "--ell", "21"]);
    let Payload::Zero(z) = rec.payload else { panic!() };
    assert!(z.unique);
    assert_eq!(z.u, Some(2));

    let (rec, code) = json(&["zero", "--prime", "7", "--ell", "4"]);
    assert_eq!(code, 1);
    let Payload::Zero(z) = rec.payload else { panic!() };
    assert!(z.error.unwrap().contains("(46)"));
}

#[test]
fn scan_prefix_is_consistent() {
    let (small, _) = json(&["scan", "--max", "100", "--jobs", "2"]);
    let (large, _) = json(&["scan", "--max", "600"]);
    let (Payload::Scan(a), Payload::Scan(b)) = (small.payload, large.payload) else {
        panic!()
    };
    let below = |s: &std::collections::BTreeSet<u64>| s.iter().copied().filter(|&p| p <= 100).collect::<Vec<_>>();
    assert_eq!(below(&b.summary.ml_fails), a.summary.ml_fails.iter().copied().collect::<Vec<_>>());
    assert_eq!(below(&b.summary.rat_undecided), a.summary.rat_undecided.iter().copied().collect::<Vec<_>>());
    assert_eq!(b.summary.rat_holds.iter().copied().collect::<Vec<_>>(), vec![269, 401, 419, 499, 587]);
}

fn table_row() -> impl Strategy<Value = TableRow> {
    (2u64..10_000, 1u64..1 << 40, proptest::option::of(0u64..1 << 40), proptest::option::of(0u64..10_000))
        .prop_map(|(p, n, ell, u)| TableRow { p, n, ell, u })
}

proptest! {
    #[test]
    fn table_rows_round_trip_csv(rows in proptest::collection::vec(table_row(), 0..20)) {
        prop_assert_eq!(from_csv::<TableRow>(&to_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn mismatches_round_trip_csv(v in proptest::collection::vec((any::<i64>(), proptest::option::of(-5i64..50), proptest::option::of(0u32..50)), 0..20)) {
        let rows: Vec<Mismatch> = v.into_iter().map(|(n, predicted, actual)| Mismatch { n: n as i128, predicted, actual }).collect();
        prop_assert_eq!(from_csv::<Mismatch>(&to_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn zero_rows_round_trip_csv(ell in 0u64..1000, simple: bool, u in proptest::option::of(0u64..600), t in proptest::option::of("-?[0-9]{1,3}(/3)?")) {
        let rows = vec![ZeroCsvRow { ell, simple, u, u_integer_zero: simple, u_rational_zero: !simple, class_integer: t.clone(), class_rational: None, target: t }];
        prop_assert_eq!(from_csv::<ZeroCsvRow>(&to_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn records_round_trip_json(rows in proptest::collection::vec(table_row(), 0..10), ms in 0u64..1_000_000, pass: bool) {
        let rec = OutputRecord {
            command: "table".into(),
            params: BTreeMap::from([("max".to_string(), "600".to_string())]),
            status: if pass { Status::Pass } else { Status::Fail },
            payload: Payload::Table(TablePayload { rows, annotations: vec![(83, "holds".to_string())], checks: None }),
            precision_used: 24,
            elapsed_ms: ms,
        };
        let text = serde_json::to_string(&rec).unwrap();
        prop_assert_eq!(serde_json::from_str::<OutputRecord>(&text).unwrap(), rec);
    }
}
