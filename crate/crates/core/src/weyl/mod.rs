//! The Grassmann-Weyl algebra on θ, φ, ∂_θ, ∂_φ: the graded star involution, the
//! Heisenberg brackets of the hermitean generators, the Euler derivation D and
//! E = 1 + (q²−1)D, and the enveloping algebra realized by the quadratic elements E_ij.

use crate::calculus::{act, parse_operator, CalculusSpec};
use crate::catalog::{enveloping_corrected, get_presentation, AlgebraId};
use crate::cli::parse::parse_element;
use crate::cli::report::Report;
use crate::engine::{enumerate_basis, normal_form, Element, EngineError, Presentation, Word};
use crate::rmatrix::Matrix;
use crate::scalar::Scalar;

fn weyl() -> std::sync::Arc<Presentation> {
    get_presentation(AlgebraId::Weyl)
}

fn el(s: &str) -> Element {
    parse_element(s, &weyl()).expect("fixed Weyl expression")
}

/// Generator images of the involution: θ* = θ, φ* = φ, ∂_θ* = −∂_θ, ∂_φ* = −q²∂_φ.
#[derive(Debug, Clone)]
pub struct StarAssignment {
    images: Vec<Element>,
}

impl Default for StarAssignment {
    fn default() -> Self {
        StarAssignment {
            images: ["theta", "phi", "-ptheta", "-q^2*pphi"]
                .iter()
                .map(|s| el(s))
                .collect(),
        }
    }
}

/// (ξ₁…ξₙ)* = q^{Σ_{i<j}ρᵢρⱼ} ξₙ*…ξ₁*, conjugate-linear, normalized.
pub fn star(e: &Element, s: &StarAssignment) -> Result<Element, EngineError> {
    let p = weyl();
    let mut out = Element::zero();
    for (w, c) in e.terms() {
        let x = w.letters();
        let mut exp = 0i64;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                exp +=
                    p.generator(x[i]).grade.value() as i64 * p.generator(x[j]).grade.value() as i64;
            }
        }
        let mut acc = Element::from_scalar(&c.conjugate() * &Scalar::q_pow(exp));
        for &g in x.iter().rev() {
            acc = acc.concat(&s.images[g as usize]);
        }
        out += acc;
    }
    normal_form(&out, &p)
}

fn zero_check(p: &Presentation, label: &str, e: &Element) -> Result<Option<String>, String> {
    let nf = normal_form(e, p).map_err(|x| x.to_string())?;
    if nf.is_zero() {
        Ok(None)
    } else {
        Err(format!("{label} leaves {}", p.render(&nf)))
    }
}

pub fn verify_star_invariance() -> Report {
    let p = weyl();
    let s = StarAssignment::default();
    let mut r = Report::new("star");
    for rule in p.all_rules() {
        let lhs = p.render_word(&rule.lhs);
        r.run(&format!("relation[{lhs}]"), || {
            let img = star(&rule.relation(), &s).map_err(|e| e.to_string())?;
            if img.is_zero() {
                Ok(None)
            } else {
                Err(format!(
                    "star({lhs} - ({})) = {}",
                    p.render(&rule.rhs),
                    p.render(&img)
                ))
            }
        });
    }
    r.run("involutive", || {
        for w in enumerate_basis(&p, 3) {
            let x = Element::from_word(w.clone());
            let back =
                star(&star(&x, &s).map_err(|e| e.to_string())?, &s).map_err(|e| e.to_string())?;
            if back != x {
                return Err(format!(
                    "star(star({})) = {}",
                    p.render_word(&w),
                    p.render(&back)
                ));
            }
        }
        Ok(None)
    });
    r
}

/// [a, b]_w = ab − w·ba, normalized in `p`.
pub fn bracket(
    a: &Element,
    b: &Element,
    w: &Scalar,
    p: &Presentation,
) -> Result<Element, EngineError> {
    normal_form(&(&a.concat(b) - &b.concat(a).scale(w)), p)
}

/// The nine relations of the hermitean generators θ̂ = θ, φ̂ = φ, p̂_θ = i∂_θ,
/// p̂_φ = iq∂_φ with their printed weights, and the weight the last one actually takes.
pub fn verify_heisenberg() -> Report {
    let h = get_presentation(AlgebraId::Heisenberg);
    let e = |s: &str| parse_element(s, &h).expect("fixed Heisenberg expression");
    let mut r = Report::new("heisenberg");
    let cubes = [
        ("theta_cubed", "theta^3"),
        ("phi_cubed", "phi^3"),
        ("ptheta_cubed", "ptheta^3"),
        ("pphi_cubed", "pphi^3"),
    ];
    for (id, s) in cubes {
        r.run(id, || zero_check(&h, s, &e(s)));
    }
    let q = Scalar::q();
    let q2 = Scalar::q2();
    let brackets = [
        ("theta_phi", "theta", "phi", q2.clone(), "0"),
        ("ptheta_theta", "ptheta", "theta", q2.clone(), "i"),
        ("ptheta_phi", "ptheta", "phi", q.clone(), "0"),
        ("pphi_theta", "pphi", "theta", q.clone(), "0"),
        (
            "pphi_phi",
            "pphi",
            "phi",
            q.clone(),
            "i*q + (1 - q)*theta*ptheta",
        ),
        (
            "pphi_phi.weight_q2",
            "pphi",
            "phi",
            q2.clone(),
            "i*q + (1 - q)*theta*ptheta",
        ),
    ];
    for (id, a, b, w, rhs) in brackets {
        r.run(id, || {
            let got = bracket(&e(a), &e(b), &w, &h).map_err(|x| x.to_string())?;
            let want = normal_form(&e(rhs), &h).map_err(|x| x.to_string())?;
            if got == want {
                Ok(None)
            } else {
                Err(format!(
                    "[{a}, {b}]_({w}) = {}, expected {}",
                    h.render(&got),
                    h.render(&want)
                ))
            }
        });
    }
    r
}

fn equal_check(
    p: &Presentation,
    label: &str,
    a: &Element,
    b: &Element,
) -> Result<Option<String>, String> {
    let x = normal_form(a, p).map_err(|e| e.to_string())?;
    let y = normal_form(b, p).map_err(|e| e.to_string())?;
    if x == y {
        Ok(None)
    } else {
        Err(format!("{label}: {} vs {}", p.render(&x), p.render(&y)))
    }
}

pub fn euler_d() -> Element {
    el("theta*ptheta + phi*pphi")
}

pub fn euler_e() -> Element {
    el("1 + (q^2 - 1)*(theta*ptheta + phi*pphi)")
}

/// Matrix of an operator expression on the plane basis, acting through the covariant
/// calculus: coordinates multiply, ∂ letters differentiate.
pub fn action_matrix(expr: &str) -> Result<Matrix, String> {
    let c = CalculusSpec::new(AlgebraId::CalcCovariant).map_err(|e| e.to_string())?;
    let ops = parse_operator(expr, &c)?;
    let plane = get_presentation(AlgebraId::ExteriorPlane);
    let basis: Vec<Word> = enumerate_basis(&plane, 4)
        .iter()
        .map(|w| c.from_plane(w))
        .collect();
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|b| {
            let img = act(&ops, &Element::from_word(b.clone()), &c).map_err(|e| e.to_string())?;
            Ok(basis.iter().map(|w| img.coefficient(w)).collect())
        })
        .collect::<Result<_, String>>()?;
    Ok(Matrix::from_columns(&cols))
}

pub fn verify_euler() -> Report {
    let p = weyl();
    let s = StarAssignment::default();
    let st = |x: &Element| star(x, &s).map_err(|e| e.to_string());
    let (d, e) = (euler_d(), euler_e());
    let mut r = Report::new("euler");
    r.run("d_plus_d_star", || {
        equal_check(&p, "D + D*", &(&d + &st(&d)?), &Element::one())
    });
    r.run("d_normal", || {
        let ds = st(&d)?;
        equal_check(&p, "D D* vs D* D", &d.concat(&ds), &ds.concat(&d))
    });
    let moves = [
        ("e_theta", "theta", Scalar::q2()),
        ("e_phi", "phi", Scalar::q2()),
        ("e_ptheta", "ptheta", Scalar::q()),
        ("e_pphi", "pphi", Scalar::q()),
    ];
    for (id, g, w) in moves {
        r.run(id, || {
            let x = el(g);
            equal_check(
                &p,
                &format!("E {g} vs ({w}) {g} E"),
                &e.concat(&x),
                &x.concat(&e).scale(&w),
            )
        });
    }
    r.run("e_star", || {
        equal_check(&p, "E* vs q E", &st(&e)?, &e.scale(&Scalar::q()))
    });
    r.run("e_normal", || {
        let es = st(&e)?;
        equal_check(&p, "E E* vs E* E", &e.concat(&es), &es.concat(&e))
    });
    r.run("e_invertible_on_plane", || {
        let m = action_matrix("1 + (q^2 - 1)*(theta*ptheta + phi*pphi)")?;
        let det = m.det();
        if det.is_zero() {
            Err(format!("E acts singularly on the plane basis:\n{m}"))
        } else {
            Ok(Some(format!("det = {det} on the 9-dimensional plane module; abstract invertibility is not certified")))
        }
    });
    r.run("d_singular_on_plane", || {
        let det = action_matrix("theta*ptheta + phi*pphi")?.det();
        if det.is_zero() {
            Ok(None)
        } else {
            Err(format!("D acts invertibly, det = {det}"))
        }
    });
    r
}

/// E₁₁ = θ∂_θ, E₁₂ = θ∂_φ, E₂₁ = φ∂_θ, E₂₂ = φ∂_φ.
pub fn quadratic_generators() -> [Element; 4] {
    ["theta*ptheta", "theta*pphi", "phi*ptheta", "phi*pphi"].map(el)
}

/// Substitute the quadratic generators into an element of an E-alphabet presentation.
pub fn realize(e: &Element) -> Result<Element, EngineError> {
    let images = quadratic_generators();
    let mut out = Element::zero();
    for (w, c) in e.terms() {
        let mut acc = Element::from_scalar(c.clone());
        for &g in w.letters() {
            acc = acc.concat(&images[g as usize]);
        }
        out += acc;
    }
    normal_form(&out, &weyl())
}

/// The enveloping relations with the E_ij realized in the Weyl algebra; the stored sixth
/// relation and its sign-corrected form; centrality of D; agreement of the two
/// normal forms on E-words.
pub fn derive_enveloping_relations() -> Report {
    let target = get_presentation(AlgebraId::EnvelopingTarget);
    let corrected = enveloping_corrected();
    let w = weyl();
    let mut r = Report::new("enveloping");
    for (k, rule) in target.rules().iter().enumerate() {
        let lhs = target.render_word(&rule.lhs);
        r.run(&format!("relation_{}[{lhs}]", k + 1), || {
            zero_check(
                &w,
                &format!("{lhs} = {}", target.render(&rule.rhs)),
                &realize(&rule.relation()).map_err(|e| e.to_string())?,
            )
        });
    }
    let sixth = &corrected.rules()[5];
    r.run(
        &format!(
            "relation_6[{}].corrected",
            corrected.render_word(&sixth.lhs)
        ),
        || {
            zero_check(
                &w,
                &format!(
                    "{} = {}",
                    corrected.render_word(&sixth.lhs),
                    corrected.render(&sixth.rhs)
                ),
                &realize(&sixth.relation()).map_err(|e| e.to_string())?,
            )
        },
    );
    let d = euler_d();
    for (name, x) in ["e11", "e12", "e21", "e22"]
        .iter()
        .zip(quadratic_generators())
    {
        r.run(&format!("d_central[{name}]"), || {
            zero_check(
                &w,
                &format!("[D, {name}]"),
                &(&d.concat(&x) - &x.concat(&d)),
            )
        });
    }
    r.absorb("", envelope_consistency(&target, 3));
    r
}

/// Normalizing in an E-presentation then realizing agrees with realizing then
/// normalizing, on every E-word up to `max_len`.
pub fn envelope_consistency(p: &Presentation, max_len: usize) -> Report {
    let mut r = Report::new("envelope");
    r.run(
        &format!("consistency[{}]", p.name().to_ascii_lowercase()),
        || {
            for word in crate::engine::all_words(p.generators().len(), max_len) {
                let x = Element::from_word(word.clone());
                let via = realize(&normal_form(&x, p).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let direct = realize(&x).map_err(|e| e.to_string())?;
                if via != direct {
                    let w = weyl();
                    return Err(format!(
                        "{}: {} via the E-relations, {} directly",
                        p.render_word(&word),
                        w.render(&via),
                        w.render(&direct)
                    ));
                }
            }
            Ok(None)
        },
    );
    r
}

/// ∂_u·r and r·∂_u reduce to zero for every plane relation r and u ∈ {θ, φ}.
pub fn ideal_stability() -> Report {
    let w = weyl();
    let mut r = Report::new("ideal");
    let relations = [
        ("theta_phi", "theta*phi - q^2*phi*theta"),
        ("theta_cubed", "theta^3"),
        ("phi_cubed", "phi^3"),
    ];
    for u in ["ptheta", "pphi"] {
        for (name, rel) in relations {
            let (pu, rel_e) = (el(u), el(rel));
            r.run(&format!("{u}.{name}"), || {
                zero_check(&w, &format!("{u}*({rel})"), &pu.concat(&rel_e))?;
                zero_check(&w, &format!("({rel})*{u}"), &rel_e.concat(&pu))
            });
        }
    }
    r
}

pub fn verify_weyl() -> Report {
    let mut r = Report::new("weyl");
    r.absorb("star.", verify_star_invariance());
    r.absorb("euler.", verify_euler());
    r.absorb("ideal.", ideal_stability());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_values() {
        let s = StarAssignment::default();
        assert_eq!(star(&el("theta"), &s).unwrap(), el("theta"));
        assert_eq!(star(&el("theta*phi"), &s).unwrap(), el("theta*phi"));
        let once = star(&el("pphi"), &s).unwrap();
        assert_eq!(once, el("-q^2*pphi"));
        assert_eq!(star(&once, &s).unwrap(), el("pphi"));
    }

    #[test]
    fn bracket_values() {
        let h = get_presentation(AlgebraId::Heisenberg);
        let e = |s: &str| parse_element(s, &h).unwrap();
        let b = bracket(&e("ptheta"), &e("theta"), &Scalar::q2(), &h).unwrap();
        assert_eq!(b, e("i"));
        assert!(bracket(&e("theta"), &e("phi"), &Scalar::q2(), &h)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn d_plus_d_star_is_one() {
        let s = StarAssignment::default();
        let d = euler_d();
        assert_eq!(
            normal_form(&(&d + &star(&d, &s).unwrap()), &weyl()).unwrap(),
            Element::one()
        );
    }

    #[test]
    fn first_enveloping_relation() {
        let target = get_presentation(AlgebraId::EnvelopingTarget);
        let rel = parse_element("e11*e12 - q^2*e12*e11 - e12", &target).unwrap();
        assert!(realize(&rel).unwrap().is_zero());
    }
}
