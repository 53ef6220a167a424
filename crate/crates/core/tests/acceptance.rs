//! One line per acceptance criterion. Every comparison is exact.

use z3g::calculus::{
    branch_mismatch, solve_ansatz, verify_d_rules, verify_partial_relations, CalculusSpec,
};
use z3g::catalog::{get_presentation, AlgebraId, ALL};
use z3g::cli::run;
use z3g::engine::{check_confluence, enumerate_basis, mul};
use z3g::hopf::{
    coaction_kills_plane_relations, coproduct, verify_covariance, verify_hopf, CoactionLift,
    SignRule, StructureMaps,
};
use z3g::rmatrix::{
    braid_check, hecke_check, matrix_rep_check, reconstruct_relations, RelationKind,
};
use z3g::weyl::{
    derive_enveloping_relations, verify_euler, verify_heisenberg, verify_star_invariance,
};
use z3g::{Report, Scalar};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Collapse reports into one outcome, naming the first failing check.
fn all_pass(reports: &[Report]) -> Outcome {
    let total: usize = reports.iter().map(|r| r.checks().len()).sum();
    for r in reports {
        if let Some(c) = r.failures().next() {
            return Err(format!(
                "{}.{}: {}",
                r.suite(),
                c.id(),
                c.witness().unwrap_or("")
            ));
        }
    }
    Ok(format!("{total} checks"))
}

fn basis_dimensions() -> Outcome {
    let dims = |id| {
        (1..=6)
            .map(|n| enumerate_basis(&get_presentation(id), n).len())
            .collect::<Vec<_>>()
    };
    let line = dims(AlgebraId::Z3Line);
    let plane = dims(AlgebraId::ExteriorPlane);
    if line[3..].iter().all(|&d| d == 3) && plane[3..].iter().all(|&d| d == 9) {
        Ok("line 3, plane 9, stable from length 4".into())
    } else {
        Err(format!("line {line:?}, plane {plane:?}"))
    }
}

fn hopf_suites() -> Outcome {
    let mut reports = Vec::new();
    for id in [AlgebraId::Z3Line, AlgebraId::ExteriorPlane] {
        let maps = StructureMaps::for_algebra(id).map_err(|e| e.to_string())?;
        let p = maps.algebra().clone();
        let d = coproduct(
            &mul(&p.gen("theta").unwrap(), &p.gen("theta").unwrap(), &p).unwrap(),
            &maps,
        )
        .map_err(|e| e.to_string())?
        .render();
        if d != "theta^2 (x) 1 - q^2*theta (x) theta + 1 (x) theta^2" {
            return Err(format!("{}: Delta(theta^2) = {d}", id.cli_name()));
        }
        reports.push(verify_hopf(id, &maps, SignRule::Braided));
    }
    all_pass(&reports)
}

fn calculus_suites() -> Outcome {
    let mut reports = Vec::new();
    for id in [
        AlgebraId::CalcCovariant,
        AlgebraId::CalcCovariantAlt,
        AlgebraId::CalcNoncov,
    ] {
        reports.push(verify_d_rules(
            &CalculusSpec::new(id).map_err(|e| e.to_string())?,
            3,
        ));
    }
    all_pass(&reports)
}

fn ansatz() -> Outcome {
    let sol = solve_ansatz().map_err(|e| e.to_string())?;
    let (q, q2, one) = (Scalar::q(), Scalar::q2(), Scalar::one());
    if sol.q1_roots != [one.clone(), q.clone()] || sol.q2_roots != [one.clone(), q2.clone()] {
        return Err("first-stage roots differ".into());
    }
    if sol.branches.len() != 2 {
        return Err(format!("{} branches", sol.branches.len()));
    }
    for b in &sol.branches {
        let ok = b.q3.is_one()
            && b.c2 == &q * &(&one - &b.c1)
            && b.c3 == &b.c2 + &q2
            && b.c4 == &b.c1 - &q
            && (b.c1 == one || b.c1 == q);
        if !ok {
            return Err(format!("constraints violated by {}", b.render()));
        }
        let target = if b.c1.is_one() {
            AlgebraId::CalcCovariant
        } else {
            AlgebraId::CalcNoncov
        };
        if let Some(w) = branch_mismatch(b, target).map_err(|e| e.to_string())? {
            return Err(format!(
                "branch C1 = {} vs {}: {w}",
                b.c1,
                target.cli_name()
            ));
        }
    }
    Ok("two branches, matching both catalog calculi".into())
}

fn covariance() -> Outcome {
    let lift = CoactionLift::default();
    all_pass(&[
        verify_covariance(AlgebraId::CalcCovariant, lift),
        verify_covariance(AlgebraId::CalcCovariantAlt, lift),
        coaction_kills_plane_relations(),
    ])?;
    let noncov = verify_covariance(AlgebraId::CalcNoncov, lift);
    let first = noncov
        .failures()
        .next()
        .filter(|c| c.witness().is_some())
        .map(|c| c.id().to_string());
    match first {
        Some(id) => Ok(format!("calc_noncov fails at {id}")),
        None => Err("calc_noncov passed covariance".into()),
    }
}

fn partials() -> Outcome {
    let r = verify_partial_relations(4);
    // only the relations as stated count here; the corrected variants are reported alongside
    let stated: Vec<_> = r
        .checks()
        .iter()
        .filter(|c| !c.id().ends_with(".corrected"))
        .collect();
    match stated.iter().find(|c| !c.passed()) {
        Some(c) => Err(format!("{}: {}", c.id(), c.witness().unwrap_or(""))),
        None => Ok(format!("{} relations on the 9 plane words", stated.len())),
    }
}

fn weyl_heisenberg() -> Outcome {
    let h = verify_heisenberg();
    let stated: Vec<_> = h
        .checks()
        .iter()
        .filter(|c| !c.id().ends_with(".weight_q2"))
        .collect();
    if let Some(c) = stated.iter().find(|c| !c.passed()) {
        return Err(format!(
            "heisenberg.{}: {}",
            c.id(),
            c.witness().unwrap_or("")
        ));
    }
    all_pass(&[verify_star_invariance(), verify_euler()])
}

fn enveloping() -> Outcome {
    let r = derive_enveloping_relations();
    let stated: Vec<_> = r
        .checks()
        .iter()
        .filter(|c| {
            c.id().starts_with("relation_") && !c.id().ends_with(".corrected")
                || c.id().starts_with("d_central")
        })
        .collect();
    match stated.iter().find(|c| !c.passed()) {
        Some(c) => Err(format!("{}: {}", c.id(), c.witness().unwrap_or(""))),
        None => Ok(format!("{} relations", stated.len())),
    }
}

fn rmatrix() -> Outcome {
    let mut reports = vec![braid_check(), hecke_check()];
    reports.extend(RelationKind::ALL.iter().map(|&k| reconstruct_relations(k)));
    for (c1, c2) in [(0, Scalar::zero()), (1, Scalar::one()), (5, Scalar::q())] {
        reports.push(matrix_rep_check(&Scalar::from_int(c1), &c2));
    }
    all_pass(&reports)
}

fn engineering() -> Outcome {
    let reports: Vec<Report> = ALL
        .iter()
        .filter(|a| a.fully_specified())
        .map(|&a| check_confluence(&get_presentation(a), 4))
        .collect();
    let confluence = all_pass(&reports);

    // associativity after normalization on a fixed sample of basis triples
    for id in [
        AlgebraId::ExteriorPlane,
        AlgebraId::Weyl,
        AlgebraId::CalcCovariant,
    ] {
        let p = get_presentation(id);
        let basis = enumerate_basis(&p, 2);
        for a in basis.iter().step_by(3) {
            for b in basis.iter().step_by(2) {
                for c in basis.iter().step_by(5) {
                    let (a, b, c) = (
                        z3g::Element::from_word(a.clone()),
                        z3g::Element::from_word(b.clone()),
                        z3g::Element::from_word(c.clone()),
                    );
                    let l = mul(&mul(&a, &b, &p).unwrap(), &c, &p).unwrap();
                    let r = mul(&a, &mul(&b, &c, &p).unwrap(), &p).unwrap();
                    if l != r {
                        return Err(format!(
                            "{}: ({})*({})*({}) not associative",
                            p.name(),
                            p.render(&a),
                            p.render(&b),
                            p.render(&c)
                        ));
                    }
                }
            }
        }
    }

    let call = |args: &[&str]| {
        let mut out = Vec::new();
        run(
            std::iter::once("z3g").chain(args.iter().copied()),
            &mut out,
            &mut Vec::new(),
        );
        String::from_utf8(out).unwrap()
    };
    let golden = [
        (vec!["normalize", "phi*theta"], "q*theta*phi\n"),
        (
            vec!["act", "--map", "coproduct", "theta^2"],
            "theta^2 (x) 1 - q^2*theta (x) theta + 1 (x) theta^2\n",
        ),
    ];
    for (args, want) in golden {
        let (a, b) = (call(&args), call(&args));
        if a != want || a != b {
            return Err(format!("{args:?} printed {a:?}"));
        }
    }
    confluence.map(|c| format!("{c}, associativity sample and goldens ok"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("basis dimensions", basis_dimensions),
        ("hopf suites", hopf_suites),
        ("calculus suites", calculus_suites),
        ("ansatz derivation", ansatz),
        ("covariance", covariance),
        ("partial derivative identities", partials),
        ("weyl and heisenberg", weyl_heisenberg),
        ("enveloping algebra", enveloping),
        ("r-matrix", rmatrix),
        ("engineering soundness", engineering),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (tag, note) = match f() {
            Ok(n) => ("PASS", n),
            Err(w) => {
                failed.push(k + 1);
                ("FAIL", w)
            }
        };
        println!("criterion {:>2}  {tag}  {name}: {note}", k + 1);
    }
    println!(
        "acceptance {}/{}",
        criteria.len() - failed.len(),
        criteria.len()
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
