//! Graded tensor products, Hopf structure maps on the line and the plane, and the
//! left coaction of M̃_q(2) on the plane and its differential calculi.

mod coaction;
mod tensor;

use std::sync::Arc;

pub use coaction::{
    coaction, coaction_kills_plane_relations, covariance_lift, verify_covariance, CoactionLift,
};
pub use tensor::{extend_hom, flip, tensor_mul, SignRule, TensorElement, TensorKey};

use crate::catalog::{get_presentation, AlgebraId};
use crate::cli::report::Report;
use crate::engine::{enumerate_basis, normal_form, Element, EngineError, Presentation, Word};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum HopfError {
    #[error("tensor factors live in different presentations")]
    MismatchedPresentations,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Δ, ε, κ on generators. Δ and ε extend as algebra maps, κ as a graded
/// anti-homomorphism κ(ab) = q^{ρ(a)ρ(b)} κ(b)κ(a).
#[derive(Debug, Clone)]
pub struct StructureMaps {
    algebra: Arc<Presentation>,
    coproduct: Vec<TensorElement>,
    counit: Vec<Scalar>,
    antipode: Vec<Element>,
    sign_rule: SignRule,
}

impl StructureMaps {
    /// Primitive maps: Δ(g) = g⊗𝟏 + 𝟏⊗g, ε(g) = 0, κ(g) = −g.
    pub fn primitive(algebra: Arc<Presentation>) -> Self {
        let n = algebra.generators().len();
        let factors = vec![algebra.clone(), algebra.clone()];
        let coproduct = (0..n as u8)
            .map(|g| {
                let x = Element::letter(g);
                let mut t = TensorElement::pure(factors.clone(), &[x.clone(), Element::one()]);
                t.add_expanded(&Scalar::one(), &[Element::one(), x]);
                t
            })
            .collect();
        StructureMaps {
            algebra,
            coproduct,
            counit: vec![Scalar::zero(); n],
            antipode: (0..n as u8)
                .map(|g| Element::letter(g).scale(&Scalar::from_int(-1)))
                .collect(),
            sign_rule: SignRule::Braided,
        }
    }

    /// The maps of the line or the plane.
    pub fn for_algebra(id: AlgebraId) -> Result<Self, HopfError> {
        match id {
            AlgebraId::Z3Line | AlgebraId::ExteriorPlane => {
                Ok(Self::primitive(get_presentation(id)))
            }
            other => Err(HopfError::Unsupported(format!(
                "no Hopf structure is provided for {other}"
            ))),
        }
    }

    pub fn with_sign_rule(mut self, rule: SignRule) -> Self {
        self.sign_rule = rule;
        self
    }

    pub fn sign_rule(&self) -> SignRule {
        self.sign_rule
    }

    pub fn algebra(&self) -> &Arc<Presentation> {
        &self.algebra
    }

    fn pair(&self) -> Vec<Arc<Presentation>> {
        vec![self.algebra.clone(), self.algebra.clone()]
    }
}

pub fn coproduct(e: &Element, maps: &StructureMaps) -> Result<TensorElement, HopfError> {
    extend_hom(e, &maps.coproduct, &maps.pair(), maps.sign_rule)
}

pub fn counit(e: &Element, maps: &StructureMaps) -> Scalar {
    let mut s = Scalar::zero();
    for (w, c) in e.terms() {
        let v = w
            .letters()
            .iter()
            .fold(Scalar::one(), |acc, &g| &acc * &maps.counit[g as usize]);
        s += &(c * &v);
    }
    s
}

pub fn antipode(e: &Element, maps: &StructureMaps) -> Result<Element, HopfError> {
    let p = &maps.algebra;
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
        let mut acc = Element::from_scalar(c * &Scalar::q_pow(exp));
        for &g in x.iter().rev() {
            acc = acc.concat(&maps.antipode[g as usize]);
        }
        out += acc;
    }
    Ok(normal_form(&out, p)?)
}

/// (Δ⊗id) or (id⊗Δ) on a two-fold tensor.
fn coproduct_on_slot(
    t: &TensorElement,
    slot: usize,
    maps: &StructureMaps,
) -> Result<TensorElement, HopfError> {
    t.map_slot(slot, &maps.pair(), |w| {
        coproduct(&Element::from_word(w.clone()), maps)
    })
}

/// First coordinate where two tensors differ, as a readable witness.
fn tensor_mismatch(
    label: &str,
    expected: &TensorElement,
    actual: &TensorElement,
) -> Option<String> {
    if expected == actual {
        return None;
    }
    let mut keys: Vec<Vec<Word>> = expected.terms().map(|(k, _)| k.to_vec()).collect();
    keys.extend(actual.terms().map(|(k, _)| k.to_vec()));
    keys.sort_by_key(|k| TensorKey(k.clone()));
    for k in keys {
        let (e, a) = (expected.coefficient(&k), actual.coefficient(&k));
        if e != a {
            let mono = k
                .iter()
                .zip(expected.factors())
                .map(|(w, p)| p.render_word(w))
                .collect::<Vec<_>>()
                .join(" (x) ");
            return Some(format!(
                "{label}: coefficient of {mono} is {a}, expected {e}"
            ));
        }
    }
    Some(format!("{label}: tensors differ"))
}

fn element_mismatch(
    label: &str,
    p: &Presentation,
    expected: &Element,
    actual: &Element,
) -> Option<String> {
    (expected != actual).then(|| {
        format!(
            "{label}: got {}, expected {}",
            p.render(actual),
            p.render(expected)
        )
    })
}

type CheckResult = Result<Option<String>, String>;

fn first_failure<I: IntoIterator<Item = Result<Option<String>, HopfError>>>(it: I) -> CheckResult {
    for r in it {
        match r {
            Ok(None) => {}
            Ok(Some(w)) => return Err(w),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(None)
}

/// Hopf axioms on every basis word: coassociativity, counit and antipode laws, κ as an
/// algebra and coalgebra anti-homomorphism, preservation of the defining relations,
/// the reference value of Δ(θ²), vanishing of Δ on cubes, and τ² = q^{2ρρ}.
pub fn verify_hopf(id: AlgebraId, maps: &StructureMaps, sign_rule: SignRule) -> Report {
    let maps = maps.clone().with_sign_rule(sign_rule);
    let p = maps.algebra.clone();
    let rule_tag = match sign_rule {
        SignRule::Braided => "braided",
        SignRule::Alpha => "alpha",
    };
    let mut r = Report::new(&format!("hopf.{}.{rule_tag}", id.name().to_lowercase()));
    let basis = enumerate_basis(&p, 6);
    let pair = maps.pair();
    let name = |w: &Word| p.render_word(w);

    r.run("delta_theta_squared", || {
        let t = p.gen("theta").map_err(|e| e.to_string())?;
        let theta = t.clone();
        let sq = theta.concat(&theta);
        let mut expected = TensorElement::pure(pair.clone(), &[sq.clone(), Element::one()]);
        expected.add_expanded(&-Scalar::q2(), &[theta.clone(), theta.clone()]);
        expected.add_expanded(&Scalar::one(), &[Element::one(), sq.clone()]);
        let expected = expected.normalize().map_err(|e| e.to_string())?;
        let got = coproduct(&sq, &maps).map_err(|e| e.to_string())?;
        match tensor_mismatch("Delta(theta^2)", &expected, &got) {
            None => Ok(Some(format!("Delta(theta^2) = {}", got.render()))),
            Some(w) => Err(w),
        }
    });

    r.run("delta_cubes_vanish", || {
        first_failure(p.generators().iter().enumerate().map(|(g, spec)| {
            let x = Element::letter(g as u8);
            let cube = x.concat(&x).concat(&x);
            let got = coproduct(&cube, &maps)?;
            Ok((!got.is_zero()).then(|| format!("Delta({}^3) = {}", spec.name, got.render())))
        }))
    });

    r.run("coassociativity", || {
        first_failure(basis.iter().map(|w| {
            let d = coproduct(&Element::from_word(w.clone()), &maps)?;
            let left = coproduct_on_slot(&d, 0, &maps)?;
            let right = coproduct_on_slot(&d, 1, &maps)?;
            Ok(tensor_mismatch(
                &format!("(Delta (x) id)Delta({})", name(w)),
                &right,
                &left,
            ))
        }))
    });

    r.run("counit_law", || {
        first_failure(basis.iter().map(|w| {
            let x = Element::from_word(w.clone());
            let d = coproduct(&x, &maps)?;
            let (mut left, mut right) = (Element::zero(), Element::zero());
            for (k, c) in d.terms() {
                left += Element::term(
                    c * &counit(&Element::from_word(k[0].clone()), &maps),
                    k[1].clone(),
                );
                right += Element::term(
                    c * &counit(&Element::from_word(k[1].clone()), &maps),
                    k[0].clone(),
                );
            }
            Ok(
                element_mismatch(&format!("(eps (x) id)Delta({})", name(w)), &p, &x, &left)
                    .or_else(|| {
                        element_mismatch(&format!("(id (x) eps)Delta({})", name(w)), &p, &x, &right)
                    }),
            )
        }))
    });

    r.run("antipode_law", || {
        first_failure(basis.iter().map(|w| {
            let x = Element::from_word(w.clone());
            let d = coproduct(&x, &maps)?;
            let unit = Element::from_scalar(counit(&x, &maps));
            let (mut left, mut right) = (Element::zero(), Element::zero());
            for (k, c) in d.terms() {
                let a = Element::from_word(k[0].clone());
                let b = Element::from_word(k[1].clone());
                left += antipode(&a, &maps)?.concat(&b).scale(c);
                right += a.concat(&antipode(&b, &maps)?).scale(c);
            }
            let left = normal_form(&left, &p)?;
            let right = normal_form(&right, &p)?;
            Ok(element_mismatch(
                &format!("m(kappa (x) id)Delta({})", name(w)),
                &p,
                &unit,
                &left,
            )
            .or_else(|| {
                element_mismatch(
                    &format!("m(id (x) kappa)Delta({})", name(w)),
                    &p,
                    &unit,
                    &right,
                )
            }))
        }))
    });

    r.run("antipode_antihomomorphism", || {
        let pairs = basis.iter().flat_map(|a| basis.iter().map(move |b| (a, b)));
        first_failure(pairs.map(|(a, b)| {
            let (ea, eb) = (Element::from_word(a.clone()), Element::from_word(b.clone()));
            let lhs = antipode(&normal_form(&ea.concat(&eb), &p)?, &maps)?;
            let t = TensorElement::pure(
                pair.clone(),
                &[antipode(&ea, &maps)?, antipode(&eb, &maps)?],
            );
            let rhs = flip(&t)?.multiply_out()?;
            Ok(element_mismatch(
                &format!("kappa({}*{})", name(a), name(b)),
                &p,
                &rhs,
                &lhs,
            ))
        }))
    });

    r.run("antipode_coalgebra_antihomomorphism", || {
        first_failure(basis.iter().map(|w| {
            let x = Element::from_word(w.clone());
            let k = antipode(&x, &maps)?;
            let lhs = coproduct(&k, &maps)?;
            let d = coproduct(&x, &maps)?;
            let mut kk = TensorElement::zero(pair.clone());
            for (ws, c) in d.terms() {
                let a = antipode(&Element::from_word(ws[0].clone()), &maps)?;
                let b = antipode(&Element::from_word(ws[1].clone()), &maps)?;
                kk.add_expanded(c, &[a, b]);
            }
            let rhs = flip(&kk)?;
            if let Some(m) = tensor_mismatch(&format!("Delta(kappa({}))", name(w)), &rhs, &lhs) {
                return Ok(Some(m));
            }
            let (e1, e2) = (counit(&k, &maps), counit(&x, &maps));
            Ok((e1 != e2).then(|| format!("eps(kappa({})) = {e1}, expected {e2}", name(w))))
        }))
    });

    r.run("relations_preserved", || {
        first_failure(p.all_rules().iter().map(|rule| {
            let rel = rule.relation();
            let label = format!("{} = {}", p.render_word(&rule.lhs), p.render(&rule.rhs));
            let d = coproduct(&rel, &maps)?;
            if !d.is_zero() {
                return Ok(Some(format!("Delta({label}) leaves {}", d.render())));
            }
            let e = counit(&rel, &maps);
            if !e.is_zero() {
                return Ok(Some(format!("eps({label}) = {e}")));
            }
            // κ evaluated on the free words of the relation, before any rewriting
            let k = antipode(&rel, &maps)?;
            Ok((!k.is_zero()).then(|| format!("kappa({label}) leaves {}", p.render(&k))))
        }))
    });

    r.run("flip_square", || {
        let pairs = basis.iter().flat_map(|a| basis.iter().map(move |b| (a, b)));
        first_failure(pairs.map(|(a, b)| {
            let t = TensorElement::pure(
                pair.clone(),
                &[Element::from_word(a.clone()), Element::from_word(b.clone())],
            );
            let twice = flip(&flip(&t)?)?;
            let e = 2 * p.grade_of(a)?.value() as i64 * p.grade_of(b)?.value() as i64;
            Ok(tensor_mismatch(
                &format!("tau^2({} (x) {})", name(a), name(b)),
                &t.scale(&Scalar::q_pow(e)),
                &twice,
            ))
        }))
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse_element;

    fn plane() -> Arc<Presentation> {
        get_presentation(AlgebraId::ExteriorPlane)
    }

    fn el(s: &str) -> Element {
        parse_element(s, &plane()).unwrap()
    }

    fn pure(a: &str, b: &str) -> TensorElement {
        TensorElement::pure(vec![plane(), plane()], &[el(a), el(b)])
    }

    #[test]
    fn tensor_products_pick_up_grade_signs() {
        let t = tensor_mul(&pure("1", "theta"), &pure("phi", "1"), SignRule::Braided).unwrap();
        assert_eq!(t, pure("q^2*phi", "theta"));
        let t = tensor_mul(&pure("1", "theta"), &pure("theta", "1"), SignRule::Braided).unwrap();
        assert_eq!(t, pure("q*theta", "theta"));
        let t = tensor_mul(&pure("theta", "1"), &pure("1", "phi"), SignRule::Braided).unwrap();
        assert_eq!(t, pure("theta", "phi"));
    }

    #[test]
    fn coproduct_of_theta_squared() {
        let maps = StructureMaps::for_algebra(AlgebraId::ExteriorPlane).unwrap();
        let d = coproduct(&el("theta^2"), &maps).unwrap();
        assert_eq!(
            d.render(),
            "theta^2 (x) 1 - q^2*theta (x) theta + 1 (x) theta^2"
        );
        assert!(coproduct(&el("theta^3"), &maps).unwrap().is_zero());
        assert_eq!(
            coproduct(&el("theta"), &maps).unwrap().render(),
            "theta (x) 1 + 1 (x) theta"
        );
    }

    #[test]
    fn counit_and_antipode_values() {
        let maps = StructureMaps::for_algebra(AlgebraId::ExteriorPlane).unwrap();
        assert_eq!(counit(&el("1"), &maps), Scalar::one());
        assert_eq!(counit(&el("theta*phi"), &maps), Scalar::zero());
        assert_eq!(counit(&el("5 + theta"), &maps), Scalar::from_int(5));
        assert_eq!(antipode(&el("theta"), &maps).unwrap(), el("-theta"));
        assert_eq!(antipode(&el("1"), &maps).unwrap(), el("1"));
        assert_eq!(antipode(&el("theta*phi"), &maps).unwrap(), el("theta*phi"));
    }

    #[test]
    fn flip_values() {
        assert_eq!(flip(&pure("theta", "1")).unwrap(), pure("1", "theta"));
        assert_eq!(
            flip(&pure("theta", "phi")).unwrap(),
            pure("q^2*phi", "theta")
        );
        assert_eq!(
            flip(&pure("theta", "theta")).unwrap(),
            pure("q*theta", "theta")
        );
    }

    #[test]
    fn line_is_a_graded_hopf_algebra() {
        let maps = StructureMaps::for_algebra(AlgebraId::Z3Line).unwrap();
        let r = verify_hopf(AlgebraId::Z3Line, &maps, SignRule::Braided);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.summary(), "9/9");
    }

    // No bicharacter q^{kρρ} lets a primitive Δ respect θφ = q²φθ: the cross terms need
    // χ(θ,φ) = q² and χ(θ,φ)χ(φ,θ) = 1 at once.
    #[test]
    fn plane_relation_is_not_preserved_by_the_primitive_coproduct() {
        let maps = StructureMaps::for_algebra(AlgebraId::ExteriorPlane).unwrap();
        let r = verify_hopf(AlgebraId::ExteriorPlane, &maps, SignRule::Braided);
        let failed: Vec<&str> = r.failures().map(|c| c.id()).collect();
        assert_eq!(
            failed,
            [
                "antipode_antihomomorphism",
                "antipode_coalgebra_antihomomorphism",
                "relations_preserved"
            ]
        );
        let w = r.find("relations_preserved").unwrap().witness().unwrap();
        assert_eq!(
            w,
            "Delta(phi*theta = q*theta*phi) leaves (-q + q^2)*theta (x) phi"
        );
        for id in [
            "delta_theta_squared",
            "coassociativity",
            "counit_law",
            "antipode_law",
        ] {
            assert!(r.find(id).unwrap().passed(), "{id}");
        }
    }

    #[test]
    fn alpha_sign_rule_contradicts_the_reference_coproduct() {
        let maps = StructureMaps::for_algebra(AlgebraId::Z3Line).unwrap();
        let r = verify_hopf(AlgebraId::Z3Line, &maps, SignRule::Alpha);
        let c = r.find("delta_theta_squared").unwrap();
        assert!(!c.passed());
        assert!(
            c.witness()
                .unwrap()
                .contains("coefficient of theta^2 (x) 1"),
            "{:?}",
            c.witness()
        );
    }
}
