//! Expression grammar, report emission and the command dispatcher.

pub mod parse;
pub mod report;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::calculus::{
    apply_d, branch_mismatch, cubes_are_central, dual_plane_identification, partial_on_form,
    solve_ansatz, verify_d_rules, verify_partial_relations, CalculusSpec,
};
use crate::catalog::{
    enveloping_corrected, get_presentation, quantum_determinant_check, verify_files, AlgebraId, ALL,
};
use crate::engine::{check_confluence, enumerate_basis, normal_form};
use crate::hopf::{
    antipode, coaction, coaction_kills_plane_relations, coproduct, counit, covariance_lift,
    extend_hom, verify_covariance, verify_hopf, CoactionLift, SignRule, StructureMaps,
};
use crate::rmatrix::verify_rmatrix;
use crate::weyl::{
    derive_enveloping_relations, star, verify_heisenberg, verify_weyl, StarAssignment,
};
use report::{emit_report, Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "z3g",
    about = "Exact computations in Z3-graded exterior algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the normal form of an expression.
    Normalize {
        #[arg(long, default_value = "exterior_plane")]
        algebra: AlgebraId,
        expr: String,
    },
    /// Apply a structure map to an expression.
    Act {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long)]
        algebra: Option<AlgebraId>,
        /// Coordinate for --map partial.
        #[arg(long, default_value = "theta")]
        var: String,
        #[arg(long, value_enum, default_value = "braided")]
        sign_rule: SignArg,
        expr: String,
    },
    /// List normal-form words up to a length.
    Basis {
        #[arg(long, default_value = "exterior_plane")]
        algebra: AlgebraId,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        algebra: Option<AlgebraId>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "braided")]
        sign_rule: SignArg,
        #[arg(long, value_enum, default_value = "graded")]
        lift: LiftArg,
    },
    /// Rederive the bimodule relations from the bilinear ansatz.
    SolveAnsatz,
    /// Left coaction of the quantum matrices on a plane or calculus element.
    Coact {
        #[arg(long, default_value = "exterior_plane")]
        algebra: AlgebraId,
        #[arg(long, value_enum, default_value = "graded")]
        lift: LiftArg,
        expr: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MapKind {
    Coproduct,
    Counit,
    Antipode,
    Star,
    D,
    Partial,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    All,
    Hopf,
    Calculus,
    Partials,
    Weyl,
    Heisenberg,
    Rmatrix,
    Enveloping,
    Confluence,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Braided,
    Alpha,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LiftArg {
    Graded,
    Identity,
}

impl From<SignArg> for SignRule {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Braided => SignRule::Braided,
            SignArg::Alpha => SignRule::Alpha,
        }
    }
}

impl From<LiftArg> for CoactionLift {
    fn from(l: LiftArg) -> Self {
        match l {
            LiftArg::Graded => CoactionLift::Graded,
            LiftArg::Identity => CoactionLift::Identity,
        }
    }
}

/// Outcome of a command: text to print and the exit code.
enum Outcome {
    Done(String),
    Verified(Report, Format),
}

type CmdResult = Result<Outcome, String>;

fn parse_in(expr: &str, id: AlgebraId) -> Result<crate::engine::Element, String> {
    let p = get_presentation(id);
    parse::parse_element(expr, &p).map_err(|e| e.to_string())
}

fn hopf_maps(id: Option<AlgebraId>, rule: SignArg) -> Result<StructureMaps, String> {
    let id = id.unwrap_or(AlgebraId::ExteriorPlane);
    Ok(StructureMaps::for_algebra(id)
        .map_err(|e| e.to_string())?
        .with_sign_rule(rule.into()))
}

fn act(
    map: MapKind,
    algebra: Option<AlgebraId>,
    var: &str,
    rule: SignArg,
    expr: &str,
) -> CmdResult {
    let text = match map {
        MapKind::Coproduct | MapKind::Counit | MapKind::Antipode => {
            let maps = hopf_maps(algebra, rule)?;
            let id = algebra.unwrap_or(AlgebraId::ExteriorPlane);
            let e = parse_in(expr, id)?;
            let p = maps.algebra().clone();
            match map {
                MapKind::Coproduct => coproduct(&e, &maps).map_err(|x| x.to_string())?.render(),
                MapKind::Counit => counit(&e, &maps).to_string(),
                _ => p.render(&antipode(&e, &maps).map_err(|x| x.to_string())?),
            }
        }
        MapKind::Star => {
            let id = algebra.unwrap_or(AlgebraId::Weyl);
            if id != AlgebraId::Weyl {
                return Err(format!("star is defined on weyl, not {}", id.cli_name()));
            }
            let e = parse_in(expr, id)?;
            let p = get_presentation(id);
            p.render(&star(&e, &StarAssignment::default()).map_err(|x| x.to_string())?)
        }
        MapKind::D | MapKind::Partial => {
            let id = algebra.unwrap_or(AlgebraId::CalcCovariant);
            let c = CalculusSpec::new(id).map_err(|x| x.to_string())?;
            let e = parse_in(expr, id)?;
            let p = c.presentation().clone();
            if map == MapKind::D {
                p.render(&apply_d(&e, &c).map_err(|x| x.to_string())?)
            } else {
                let k = match var {
                    "theta" => 0,
                    "phi" => 1,
                    other => return Err(format!("--var must be theta or phi, not `{other}`")),
                };
                let f = normal_form(&e, &p).map_err(|x| x.to_string())?;
                p.render(&partial_on_form(k, &f, &c).map_err(|x| x.to_string())?)
            }
        }
    };
    Ok(Outcome::Done(text + "\n"))
}

/// Absorb a sub-report under its own suite name.
fn nest(r: &mut Report, sub: Report) {
    let prefix = format!("{}.", sub.suite());
    r.absorb(&prefix, sub);
}

fn hopf_suite(algebra: Option<AlgebraId>, rule: SignArg) -> Report {
    let mut r = Report::new("hopf");
    let ids = algebra.map_or(vec![AlgebraId::Z3Line, AlgebraId::ExteriorPlane], |a| {
        vec![a]
    });
    for id in ids {
        match StructureMaps::for_algebra(id) {
            Ok(maps) => r.absorb(
                &format!("{}.", id.cli_name()),
                verify_hopf(id, &maps, rule.into()),
            ),
            Err(e) => r.run(&format!("hopf.{}", id.cli_name()), || Err(e.to_string())),
        }
    }
    r
}

const CALCULI: [AlgebraId; 3] = [
    AlgebraId::CalcCovariant,
    AlgebraId::CalcCovariantAlt,
    AlgebraId::CalcNoncov,
];

/// d-rules, covariance, the ansatz and the structural remarks on the calculi.
fn calculus_suite(algebra: Option<AlgebraId>, max_len: usize, lift: CoactionLift) -> Report {
    let mut r = Report::new("calculus");
    let ids = algebra.map_or(CALCULI.to_vec(), |a| vec![a]);
    for id in &ids {
        match CalculusSpec::new(*id) {
            Ok(c) => r.absorb(&format!("{}.", id.cli_name()), verify_d_rules(&c, max_len)),
            Err(e) => r.run(&format!("{}.d_rules", id.cli_name()), || Err(e.to_string())),
        }
        let cov = verify_covariance(*id, lift);
        // the non-covariant calculus is expected to break covariance
        if *id == AlgebraId::CalcNoncov {
            let witness = cov
                .failures()
                .next()
                .map(|c| format!("{}: {}", c.id(), c.witness().unwrap_or("")));
            r.run("covariance.calc_noncov.fails", || match witness {
                Some(w) => Ok(Some(w)),
                None => Err("every covariance check passed".into()),
            });
        } else {
            nest(&mut r, cov);
        }
    }
    nest(&mut r, coaction_kills_plane_relations());
    nest(&mut r, dual_plane_identification());
    if let Ok(c) = CalculusSpec::new(AlgebraId::CalcCovariant) {
        r.absorb("calc_covariant.", cubes_are_central(&c));
    }
    nest(&mut r, quantum_determinant_check());
    nest(&mut r, ansatz_report());
    r
}

fn ansatz_report() -> Report {
    let mut r = Report::new("ansatz");
    let sol = match solve_ansatz() {
        Ok(s) => s,
        Err(e) => {
            r.run("ansatz.solve", || Err(e.to_string()));
            return r;
        }
    };
    r.run("ansatz.branches", || {
        if sol.branches.len() == 2 {
            Ok(Some(
                sol.branches
                    .iter()
                    .map(|b| b.render())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        } else {
            Err(format!("{} branches", sol.branches.len()))
        }
    });
    for (k, b) in sol.branches.iter().enumerate() {
        let target = if b.c1.is_one() {
            AlgebraId::CalcCovariant
        } else {
            AlgebraId::CalcNoncov
        };
        r.run(
            &format!("ansatz.branch_{}.matches_{}", k + 1, target.cli_name()),
            || match branch_mismatch(b, target).map_err(|e| e.to_string())? {
                None => Ok(None),
                Some(w) => Err(w),
            },
        );
    }
    r
}

fn confluence_suite(algebra: Option<AlgebraId>, max_len: usize) -> Report {
    let mut r = Report::new("confluence");
    let ids: Vec<AlgebraId> = algebra.map_or(
        ALL.iter()
            .copied()
            .filter(|a| a.fully_specified())
            .collect(),
        |a| vec![a],
    );
    for id in ids {
        r.absorb("", check_confluence(&get_presentation(id), max_len));
    }
    if algebra.is_none() {
        r.absorb("", check_confluence(&enveloping_corrected(), max_len));
    }
    r
}

fn run_suite(
    suite: Suite,
    algebra: Option<AlgebraId>,
    max_len: Option<usize>,
    rule: SignArg,
    lift: LiftArg,
) -> Report {
    match suite {
        Suite::Hopf => hopf_suite(algebra, rule),
        Suite::Calculus => calculus_suite(algebra, max_len.unwrap_or(3), lift.into()),
        Suite::Partials => verify_partial_relations(max_len.unwrap_or(4)),
        Suite::Weyl => verify_weyl(),
        Suite::Heisenberg => verify_heisenberg(),
        Suite::Rmatrix => verify_rmatrix(),
        Suite::Enveloping => derive_enveloping_relations(),
        Suite::Confluence => confluence_suite(algebra, max_len.unwrap_or(4)),
        Suite::All => {
            let mut r = Report::new("all");
            for s in [
                Suite::Hopf,
                Suite::Calculus,
                Suite::Partials,
                Suite::Weyl,
                Suite::Heisenberg,
                Suite::Rmatrix,
                Suite::Enveloping,
                Suite::Confluence,
            ] {
                let sub = run_suite(s, None, max_len, rule, lift);
                r.absorb(&format!("{}.", sub.suite()), sub);
            }
            r
        }
    }
}

fn coact(algebra: AlgebraId, lift: LiftArg, expr: &str) -> CmdResult {
    let e = parse_in(expr, algebra)?;
    let t = if algebra == AlgebraId::ExteriorPlane {
        coaction(&e).map_err(|x| x.to_string())?
    } else {
        let c = CalculusSpec::new(algebra).map_err(|x| x.to_string())?;
        let images = covariance_lift(&c, lift.into()).map_err(|x| x.to_string())?;
        let factors = images[0].factors().to_vec();
        extend_hom(&e, &images, &factors, SignRule::Braided).map_err(|x| x.to_string())?
    };
    Ok(Outcome::Done(t.render() + "\n"))
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Normalize { algebra, expr } => {
            let p = get_presentation(algebra);
            let e = parse_in(&expr, algebra)?;
            Ok(Outcome::Done(
                p.render(&normal_form(&e, &p).map_err(|x| x.to_string())?) + "\n",
            ))
        }
        Cmd::Act {
            map,
            algebra,
            var,
            sign_rule,
            expr,
        } => act(map, algebra, &var, sign_rule, &expr),
        Cmd::Basis { algebra, max_len } => {
            let p = get_presentation(algebra);
            let words = enumerate_basis(&p, max_len);
            let mut out: String = words.iter().map(|w| p.render_word(w) + "\n").collect();
            out.push_str(&format!("dimension {}\n", words.len()));
            Ok(Outcome::Done(out))
        }
        Cmd::Verify {
            suite,
            algebra,
            max_len,
            format,
            sign_rule,
            lift,
        } => {
            let fmt = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Json => Format::Json,
            };
            Ok(Outcome::Verified(
                run_suite(suite, algebra, max_len, sign_rule, lift),
                fmt,
            ))
        }
        Cmd::SolveAnsatz => {
            let sol = solve_ansatz().map_err(|e| e.to_string())?;
            let mut out: String = sol.trace.iter().map(|l| l.clone() + "\n").collect();
            out.push_str(&format!("{} branches\n", sol.branches.len()));
            Ok(Outcome::Done(out))
        }
        Cmd::Coact {
            algebra,
            lift,
            expr,
        } => coact(algebra, lift, &expr),
    }
}

/// Run the CLI. Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    if let Err(e) = verify_files() {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Done(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok(Outcome::Verified(r, fmt)) => {
            let _ = out.write_all(emit_report(&r, fmt).as_bytes());
            if r.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
