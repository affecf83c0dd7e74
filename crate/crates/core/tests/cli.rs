use std::process::{Command, Output as ProcessOutput};

use ffmzv::cli::{ErrorOutput, Output, RelationsBody, RelationsReport, ValueBody, VerifyBody, SCHEMA_VERSION};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

fn ffmzv(args: &[&str]) -> ProcessOutput {
    Command::new(env!("CARGO_BIN_EXE_ffmzv"))
        .args(args)
        .env_remove("FFMZV_ENUM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &ProcessOutput) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses the document as `T`, re-serializes it and checks nothing was lost.
fn round_trip<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let raw: Value = serde_json::from_str(text).unwrap();
    let typed: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_value(&typed).unwrap(), raw);
    typed
}

#[test]
fn zeta_document_round_trips() {
    let out = ffmzv(&["zeta", "--q", "3", "--index", "1,5", "--N", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Output<ValueBody> = round_trip(&stdout(&out));
    assert_eq!(doc.schema_version, SCHEMA_VERSION);
    assert_eq!(doc.kind, "zeta");
    assert_eq!(doc.body.q, 3);
    assert!(doc.body.value.is_some());

    let enumerated = ffmzv(&["zeta", "--q", "3", "--index", "1,5", "--N", "30", "--method", "enumerate"]);
    let enumerated: Output<ValueBody> = round_trip(&stdout(&enumerated));
    assert_eq!(enumerated.body.value, doc.body.value);

    let small = |method: &str| {
        let out = ffmzv(&["zeta", "--q", "3", "--index", "1,5", "--N", "12", "--method", method]);
        round_trip::<Output<ValueBody>>(&stdout(&out)).body.value
    };
    assert_eq!(small("brute"), small("fast"));
}

#[test]
fn value_commands_round_trip() {
    let cases: [&[&str]; 5] = [
        &["pi", "--q", "2", "--N", "40"],
        &["omega", "--q", "2", "--T", "8", "--N", "40"],
        &["cmpl", "--q", "3", "--index", "1,2", "--z", "1,1/(theta+1)", "--N", "20"],
        &["lseries", "--q", "3", "--index", "2", "--u", "t+theta", "--T", "4", "--N", "20"],
        &["zeta", "--q", "4", "--index", "3", "--N", "12", "--method", "enumerate"],
    ];
    for args in cases {
        let out = ffmzv(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        let doc: Output<ValueBody> = round_trip(&stdout(&out));
        assert_eq!(doc.kind, args[0]);
    }
    let pi: Output<ValueBody> = round_trip(&stdout(&ffmzv(&["pi", "--q", "2", "--N", "40"])));
    assert_eq!(pi.body.reciprocal_check, Some(true));
}

#[test]
fn verify_documents_round_trip() {
    let cases: [&[&str]; 5] = [
        &["verify", "system", "--q", "3", "--index", "1,2", "--u", "1,1", "--T", "6", "--N", "30"],
        &["verify", "omega", "--q", "2", "--T", "8", "--N", "40"],
        &["verify", "lseries", "--q", "3", "--index", "1,2", "--T", "5", "--N", "20"],
        &["verify", "psitilde", "--q", "2", "--index", "1,1", "--T", "4", "--N", "20"],
        &["verify", "compat", "--q", "3", "--seed", "7"],
    ];
    for args in cases {
        let out = ffmzv(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        let doc: Output<VerifyBody> = round_trip(&stdout(&out));
        assert!(doc.body.passed);
        assert!(!doc.body.fault_injected);
    }
}

#[test]
fn injected_faults_exit_nonzero() {
    for target in ["system", "omega", "lseries"] {
        let out = ffmzv(&["verify", target, "--q", "3", "--index", "1,2", "--T", "4", "--N", "20", "--inject-fault"]);
        assert_eq!(out.status.code(), Some(1), "{target}");
        let doc: Output<VerifyBody> = round_trip(&stdout(&out));
        assert!(!doc.body.passed);
        assert!(doc.body.fault_injected);
    }
}

#[test]
fn relations_documents_round_trip() {
    let suite = ffmzv(&["relations", "suite", "--q", "2", "--n-max", "3", "--N", "50"]);
    assert_eq!(suite.status.code(), Some(0));
    let doc: Output<RelationsBody> = round_trip(&stdout(&suite));
    assert!(matches!(doc.body.report, RelationsReport::Suite(ref s) if s.all_passed));

    let rational = ffmzv(&["relations", "rational", "--q", "3", "--expr", "zeta(1)/pi^1", "--B", "8"]);
    assert_eq!(rational.status.code(), Some(0));
    let doc: Output<RelationsBody> = round_trip(&stdout(&rational));
    let RelationsReport::Rational { status, .. } = doc.body.report else { panic!("wrong report") };
    assert_eq!(serde_json::to_value(status).unwrap(), "failure_at_bound");

    let even = ffmzv(&["relations", "rational", "--q", "3", "--expr", "zeta(2)/pi^2", "--B", "8"]);
    let doc: Output<RelationsBody> = round_trip(&stdout(&even));
    let RelationsReport::Rational { status, .. } = doc.body.report else { panic!("wrong report") };
    assert_eq!(serde_json::to_value(status).unwrap(), "success");

    let scan = ffmzv(&["relations", "scan", "--q", "2", "--expr", "zeta(2)", "--expr", "zeta(1)^2", "--N", "40", "--B", "1"]);
    assert_eq!(scan.status.code(), Some(0), "{}", stdout(&scan));
    let doc: Output<RelationsBody> = round_trip(&stdout(&scan));
    let RelationsReport::Scan { basis, .. } = doc.body.report else { panic!("wrong report") };
    assert!(!basis.relations.is_empty());

    let indep = ffmzv(&["relations", "independence", "--q", "3", "--index", "1,5", "--N", "60", "--B", "3"]);
    assert_eq!(indep.status.code(), Some(0));
    let doc: Output<RelationsBody> = round_trip(&stdout(&indep));
    let RelationsReport::Independence(report) = doc.body.report else { panic!("wrong report") };
    assert_eq!(report.relation_count, 0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let runs: [&[&str]; 3] = [
        &["zeta", "--q", "9", "--index", "2,1", "--N", "20"],
        &["verify", "compat", "--q", "2", "--seed", "11"],
        &["relations", "independence", "--q", "2", "--index", "1,3", "--N", "40", "--B", "2"],
    ];
    for args in runs {
        let a = ffmzv(args);
        let b = ffmzv(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn errors_are_structured() {
    let cases: [(&[&str], &str); 4] = [
        (&["zeta", "--q", "3", "--index", "0,1"], "invalid_index"),
        (&["zeta", "--q", "6", "--index", "1"], "not_prime"),
        (&["cmpl", "--q", "3", "--index", "1", "--z", "theta^2"], "domain"),
        (&["zeta", "--q", "3", "--index", "1", "--N", "0"], "invalid_argument"),
    ];
    for (args, kind) in cases {
        let out = ffmzv(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: ErrorOutput = round_trip(&stdout(&out));
        assert_eq!(err.schema_version, SCHEMA_VERSION);
        assert_eq!(err.error.kind, kind, "{args:?}: {}", err.error.message);
    }
    let out = ffmzv(&["zeta", "--q", "3", "--index", "0,1"]);
    let err: ErrorOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert!(err.error.message.contains("index parts must be ≥ 1"));
}

#[test]
fn budget_comes_from_flag_or_environment() {
    let args = ["zeta", "--q", "3", "--index", "3", "--N", "40", "--method", "enumerate"];
    let out = Command::new(env!("CARGO_BIN_EXE_ffmzv")).args(args).env("FFMZV_ENUM_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: ErrorOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err.error.kind, "budget_exceeded");

    let mut flagged = args.to_vec();
    flagged.extend(["--budget", "100000000"]);
    let out = Command::new(env!("CARGO_BIN_EXE_ffmzv")).args(&flagged).env("FFMZV_ENUM_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = ffmzv(&["zeta", "--q", "9", "--index", "1", "--budget", "4"]);
    let err: ErrorOutput = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(err.error.kind, "invalid_argument");
}

#[test]
fn text_format_is_readable() {
    let out = ffmzv(&["pi", "--q", "2", "--N", "10", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(serde_json::from_str::<Value>(&text).is_err());
    assert!(text.contains("pi"));

    let out = ffmzv(&["verify", "omega", "--q", "2", "--T", "4", "--N", "20", "--format", "text"]);
    assert!(stdout(&out).contains("passed"));
}
