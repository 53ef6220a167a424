use z3g::cli::run;

fn z3g(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("z3g").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = z3g(args);
    assert_eq!(code, 0, "{args:?} exited {code}: {err}");
    out
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["normalize", "--algebra", "exterior_plane", "phi*theta"], "q*theta*phi\n"),
        (&["normalize", "theta^3"], "0\n"),
        (&["normalize", "--algebra", "weyl", "ptheta*theta"], "1 + q^2*theta*ptheta\n"),
        (
            &["act", "--map", "coproduct", "--algebra", "exterior_plane", "theta^2"],
            "theta^2 (x) 1 - q^2*theta (x) theta + 1 (x) theta^2\n",
        ),
        (&["act", "--map", "counit", "1 + theta"], "1\n"),
        (&["act", "--map", "star", "ptheta*theta"], "-q^2*theta*ptheta\n"),
        (&["act", "--map", "d", "theta^2"], "-q*dtheta*theta\n"),
        (&["act", "--map", "partial", "--var", "phi", "theta*phi"], "q*theta\n"),
        (&["basis", "--algebra", "z3_line", "--max-len", "4"], "1\ntheta\ntheta^2\ndimension 3\n"),
        (
            &["coact", "theta*phi"],
            "q*a*gamma (x) theta^2 + a*dd (x) theta*phi + beta*gamma (x) theta*phi + beta*dd (x) phi^2\n",
        ),
        (&["coact", "--algebra", "calc_covariant", "d2phi"], "q^2*gamma (x) d2theta + dd (x) d2phi\n"),
    ];
    for (args, want) in cases {
        assert_eq!(ok(args), *want, "{args:?}");
    }
}

#[test]
fn plane_basis_has_nine_words() {
    let out = ok(&["basis", "--max-len", "6"]);
    assert_eq!(out.lines().last(), Some("dimension 9"));
    assert!(out.lines().any(|l| l == "theta^2*phi^2"));
}

#[test]
fn hopf_suite_on_the_line() {
    let out = ok(&["verify", "--suite", "hopf", "--algebra", "z3_line"]);
    assert!(out.starts_with("suite hopf\n"));
    assert!(out.ends_with("summary 9/9\n"));
    assert_eq!(out.lines().filter(|l| l.ends_with("PASS")).count(), 9);
}

#[test]
fn ansatz_prints_two_branches() {
    let out = ok(&["solve-ansatz"]);
    let branches: Vec<&str> = out.lines().filter(|l| l.starts_with("branch:")).collect();
    assert_eq!(
        branches,
        [
            "branch: Q1 = q, Q2 = 1, Q3 = 1, C1 = 1, C2 = 0, C3 = q^2, C4 = 1 - q, K1 = 0; \
             A1 = q^2, A2 = -q + q^2, A3 = 1, A4 = 0, A5 = 1, A6 = 0, A7 = q, A8 = 0",
            "branch: Q1 = q, Q2 = 1, Q3 = 1, C1 = q, C2 = q - q^2, C3 = q, C4 = 0, K1 = 0; \
             A1 = q^2, A2 = 0, A3 = q^2, A4 = 0, A5 = 1, A6 = 1 - q^2, A7 = q^2, A8 = 0",
        ]
    );
    assert!(out.ends_with("2 branches\n"));
}

#[test]
fn noncovariant_calculus_reports_its_witness_in_json() {
    let (code, out, _) = z3g(&[
        "verify",
        "--suite",
        "calculus",
        "--algebra",
        "calc_noncov",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let check = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "covariance.calc_noncov.fails")
        .expect("covariance check present");
    assert_eq!(check["status"], "pass");
    assert!(check["detail"].as_str().unwrap().starts_with("relation["));
    let failed = v["summary"]["failed"].as_u64().unwrap();
    assert_eq!(code, if failed == 0 { 0 } else { 1 });
}

#[test]
fn exit_codes() {
    let (code, _, err) = z3g(&["normalize", "theta +* phi"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 8"), "{err}");

    let (code, _, err) = z3g(&["normalize", "--algebra", "z3_line", "phi"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown generator `phi`"), "{err}");

    assert_eq!(z3g(&["bogus"]).0, 2);
    assert_eq!(z3g(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(z3g(&["--help"]).0, 0);

    // the primitive coproduct does not respect the plane relation
    let (code, out, _) = z3g(&["verify", "--suite", "hopf", "--algebra", "exterior_plane"]);
    assert_eq!(code, 1);
    assert!(out.contains("exterior_plane.relations_preserved"));
}

fn strip_elapsed(s: &str) -> String {
    s.lines()
        .filter(|l| !l.trim_start().starts_with("\"elapsed_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["verify", "--suite", "rmatrix"][..],
        &["verify", "--suite", "weyl", "--format", "json"],
        &[
            "verify",
            "--suite",
            "confluence",
            "--max-len",
            "3",
            "--format",
            "json",
        ],
        &["solve-ansatz"],
    ] {
        let a = z3g(args);
        let b = z3g(args);
        assert_eq!(a.0, b.0);
        assert_eq!(strip_elapsed(&a.1), strip_elapsed(&b.1), "{args:?}");
    }
}
