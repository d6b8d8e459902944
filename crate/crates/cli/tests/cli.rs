//! End-to-end tests for the problem-file front end: parsing, canonical
//! printing, pipeline verdicts, exit codes, and determinism.

use std::process::Command;

use mslh_cli::{
    parse_limits, parse_query, run_member, run_sat, CliError, PipelineOptions, ProblemFile,
    Verdict,
};

const CORPUS: &[(&str, &str)] = &[
    ("intro.p", include_str!("corpus/intro.p")),
    ("intro_nosplit.p", include_str!("corpus/intro_nosplit.p")),
    ("small.p", include_str!("corpus/small.p")),
    ("equivalence.p", include_str!("corpus/equivalence.p")),
    ("partial_order.p", include_str!("corpus/partial_order.p")),
    ("example1.p", include_str!("corpus/example1.p")),
    ("unsat.p", include_str!("corpus/unsat.p")),
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mslh"))
}

#[test]
fn parse_print_parse_is_a_fixpoint_on_the_corpus() {
    for (name, src) in CORPUS {
        let once = ProblemFile::parse(src).unwrap_or_else(|e| panic!("{name}: {e}")).to_text();
        let twice = ProblemFile::parse(&once).unwrap().to_text();
        assert_eq!(once, twice, "printing {name} is not stable");
    }
}

#[test]
fn exit_codes_match_printed_verdicts_on_the_corpus() {
    let dir = format!("{}/tests/corpus", env!("CARGO_MANIFEST_DIR"));
    for (name, _) in CORPUS {
        let out = bin().arg("sat").arg(format!("{dir}/{name}")).output().unwrap();
        let stdout = String::from_utf8(out.stdout).unwrap();
        let verdict = stdout.lines().next().unwrap_or_default();
        let expect = match verdict {
            "Satisfiable" => 0,
            "Unsatisfiable" => 1,
            "Unknown (approximation refuted)" => 2,
            other => panic!("{name}: unexpected verdict line `{other}`"),
        };
        assert_eq!(out.status.code(), Some(expect), "{name}: code vs `{verdict}`");
    }
}

#[test]
fn run_sat_is_deterministic() {
    let dir = format!("{}/tests/corpus", env!("CARGO_MANIFEST_DIR"));
    for name in ["intro.p", "example1.p", "partial_order.p"] {
        let one = bin().args(["sat", "--json"]).arg(format!("{dir}/{name}")).output().unwrap();
        let two = bin().args(["sat", "--json"]).arg(format!("{dir}/{name}")).output().unwrap();
        assert_eq!(one.stdout, two.stdout, "{name}: output differs between runs");
        assert_eq!(one.status.code(), two.status.code());
    }
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let err = ProblemFile::parse("p(a).\np(X Y).\n").unwrap_err();
    match err {
        CliError::Parse { line, col, .. } => {
            assert_eq!(line, 2);
            assert!(col > 1);
        }
        other => panic!("expected a parse error, got {other}"),
    }
    assert!(matches!(
        ProblemFile::parse("#frobnicate r\n"),
        Err(CliError::Parse { line: 1, .. })
    ));
}

#[test]
fn non_horn_and_bad_split_are_unsupported() {
    assert!(matches!(
        ProblemFile::parse("p(X) | q(X)."),
        Err(CliError::Unsupported(_))
    ));
    assert!(matches!(
        ProblemFile::parse("#split p\np(a)."),
        Err(CliError::Unsupported(_))
    ));
}

#[test]
fn empty_clause_input_is_directly_unsatisfiable() {
    let file = ProblemFile::parse("false.").unwrap();
    let report = run_sat(&file, &PipelineOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Unsatisfiable);
}

#[test]
fn unsat_without_approximation_loss_reports_unsatisfiable() {
    let file = ProblemFile::parse("p(a).\n~p(X).\n").unwrap();
    let report = run_sat(&file, &PipelineOptions::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Unsatisfiable);
    assert_eq!(report.verdict.exit_code(), 1);
}

#[test]
fn member_answers_over_the_original_signature() {
    let file = ProblemFile::parse(include_str!("corpus/intro.p")).unwrap();
    let opts = PipelineOptions::default();
    let yes = parse_query("r(g(c), g(c))").unwrap();
    let no = parse_query("r(g(c), c)").unwrap();
    assert!(run_member(&file, &opts, &yes).unwrap());
    assert!(!run_member(&file, &opts, &no).unwrap());
}

#[test]
fn limits_parse_and_reject_garbage() {
    let l = parse_limits("100, 200").unwrap();
    assert_eq!((l.max_clauses, l.max_iterations), (100, 200));
    assert!(matches!(parse_limits("100"), Err(CliError::BadLimits(_))));
    assert!(matches!(parse_limits("x,y"), Err(CliError::BadLimits(_))));
}

#[test]
fn tight_limits_trigger_resource_out_exit_code() {
    let dir = format!("{}/tests/corpus", env!("CARGO_MANIFEST_DIR"));
    let out = bin()
        .args(["sat", "--limits", "3,1"])
        .arg(format!("{dir}/example1.p"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(14), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn mslh_limits_environment_variable_is_honoured() {
    let dir = format!("{}/tests/corpus", env!("CARGO_MANIFEST_DIR"));
    let out = bin()
        .env("MSLH_LIMITS", "3,1")
        .args(["sat"])
        .arg(format!("{dir}/example1.p"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(14));
    let out = bin()
        .env("MSLH_LIMITS", "nonsense")
        .args(["sat"])
        .arg(format!("{dir}/example1.p"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn missing_file_reports_an_error_code() {
    let out = bin().args(["sat", "/nonexistent/problem.p"]).output().unwrap();
    assert!(out.status.code().unwrap_or(0) >= 10);
}

#[test]
fn ta_subcommands_round_trip() {
    use std::io::Write;
    let mut atom_file = tempfile::NamedTempFile::new().unwrap();
    write!(atom_file, "unused").unwrap();
    let out = bin()
        .args(["ta", "from-atom", "r(X,g(a,Y))", "--sig", "g/2 a/0 b/0 ; r/2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let ta_text = String::from_utf8(out.stdout).unwrap();
    let mut ta_file = tempfile::NamedTempFile::new().unwrap();
    write!(ta_file, "{ta_text}").unwrap();
    let accepts = bin()
        .args(["ta", "accepts"])
        .arg(ta_file.path())
        .arg("r(b,g(a,a))")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(accepts.stdout).unwrap().trim(), "true");
    let rejects = bin()
        .args(["ta", "accepts"])
        .arg(ta_file.path())
        .arg("r(a,g(b,a))")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(rejects.stdout).unwrap().trim(), "false");
}
