//! Frozen values, hand-checked once and pinned here.

use z3g::calculus::{apply_d, CalculusSpec};
use z3g::catalog::{get_presentation, AlgebraId};
use z3g::cli::parse::parse_element;
use z3g::engine::{enumerate_basis, normal_form};
use z3g::hopf::{antipode, coproduct, counit, StructureMaps};
use z3g::rmatrix::{graded_permutation, minimal_polynomial, render_polynomial, rhat};
use z3g::weyl::action_matrix;
use z3g::Scalar;

fn nf(id: AlgebraId, s: &str) -> String {
    let p = get_presentation(id);
    let e = parse_element(s, &p).unwrap();
    p.render(&normal_form(&e, &p).unwrap())
}

#[test]
fn root_of_unity_identities() {
    let q = Scalar::q();
    let one = Scalar::one();
    assert!((&(&one + &q) + &Scalar::q2()).is_zero());
    assert!(q.pow(3).is_one());
    assert!((&Scalar::i() * &Scalar::i() + one).is_zero());
    assert_eq!(Scalar::q().inv().unwrap(), Scalar::q2());
}

#[test]
fn plane_normal_forms() {
    use AlgebraId::ExteriorPlane as P;
    assert_eq!(nf(P, "phi*theta"), "q*theta*phi");
    assert_eq!(nf(P, "phi^2*theta"), "q^2*theta*phi^2");
    assert_eq!(nf(P, "phi*theta^2*phi"), "q^2*theta^2*phi^2");
    assert_eq!(nf(P, "theta*phi*theta*phi*theta"), "0");
}

#[test]
fn dimensions() {
    assert_eq!(
        enumerate_basis(&get_presentation(AlgebraId::Z3Line), 4).len(),
        3
    );
    assert_eq!(
        enumerate_basis(&get_presentation(AlgebraId::ExteriorPlane), 4).len(),
        9
    );
    assert_eq!(
        enumerate_basis(&get_presentation(AlgebraId::ExteriorPlane), 8).len(),
        9
    );
}

#[test]
fn structure_maps_on_the_plane() {
    let maps = StructureMaps::for_algebra(AlgebraId::ExteriorPlane).unwrap();
    let p = maps.algebra().clone();
    let el = |s: &str| parse_element(s, &p).unwrap();
    assert_eq!(
        coproduct(&el("theta^2"), &maps).unwrap().render(),
        "theta^2 (x) 1 - q^2*theta (x) theta + 1 (x) theta^2"
    );
    assert_eq!(
        coproduct(&el("phi^2"), &maps).unwrap().render(),
        "phi^2 (x) 1 - q^2*phi (x) phi + 1 (x) phi^2"
    );
    assert_eq!(p.render(&antipode(&el("theta"), &maps).unwrap()), "-theta");
    assert_eq!(
        p.render(&antipode(&el("theta^2"), &maps).unwrap()),
        "q*theta^2"
    );
    assert!(counit(&el("phi + theta*phi"), &maps).is_zero());
}

#[test]
fn differentials_in_the_covariant_calculus() {
    let c = CalculusSpec::new(AlgebraId::CalcCovariant).unwrap();
    let p = c.presentation().clone();
    let d = |s: &str| p.render(&apply_d(&parse_element(s, &p).unwrap(), &c).unwrap());
    assert_eq!(d("theta"), "dtheta");
    assert_eq!(d("theta^2"), "-q*dtheta*theta");
    assert_eq!(d("dtheta"), "d2theta");
    assert_eq!(d("d2phi"), "0");
    assert_eq!(
        nf(AlgebraId::CalcCovariant, "theta*dtheta"),
        "q*dtheta*theta"
    );
}

#[test]
fn rhat_spectrum() {
    let r = rhat();
    assert_eq!(r.det(), -Scalar::q2());
    assert_eq!(
        render_polynomial(&minimal_polynomial(&r), "x"),
        "x^2 + (-q + q^2)*x - 1"
    );
    assert_eq!(
        render_polynomial(&minimal_polynomial(&graded_permutation()), "x"),
        "x^3 - q*x^2 - q*x + q^2"
    );
}

#[test]
fn euler_operator_on_the_plane() {
    let e = action_matrix("1 + (q^2 - 1)*(theta*ptheta + phi*pphi)").unwrap();
    assert_eq!(e.rows(), 9);
    assert!(e.det().is_one());
}
