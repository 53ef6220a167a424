use std::sync::Arc;

use super::{extend_hom, tensor_mismatch, HopfError, SignRule, TensorElement};
use crate::calculus::{apply_d_iter, CalculusSpec};
use crate::catalog::{get_presentation, AlgebraId};
use crate::cli::parse::parse_element;
use crate::cli::report::Report;
use crate::engine::{enumerate_basis, normal_form, Element, Presentation};
use crate::scalar::Scalar;

/// How δ_L is carried from coordinates to differentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoactionLift {
    /// Δ_L∘dᵏ = (ρᵏ⊗dᵏ)∘Δ_L with (ρᵏ⊗dᵏ)(h⊗x) = q^{kρ(h)} h⊗dᵏx, the grade of the
    /// passed-over matrix element supplying the sign.
    #[default]
    Graded,
    /// The same matrix on every form degree: (id⊗dᵏ).
    Identity,
}

impl CoactionLift {
    fn weight(self, k: i64, grade: i64) -> Scalar {
        match self {
            CoactionLift::Graded => Scalar::q_pow(k * grade),
            CoactionLift::Identity => Scalar::one(),
        }
    }
}

/// [a β; γ d] as elements of M̃_q(2).
fn matrix_elements() -> (Arc<Presentation>, [[Element; 2]; 2]) {
    let m = get_presentation(AlgebraId::Mq2);
    let g = |s: &str| m.gen(s).expect("matrix generator");
    let els = [[g("a"), g("beta")], [g("gamma"), g("dd")]];
    (m, els)
}

/// Images x_i ↦ Σ_j weight·t_ij ⊗ y_j, for letters y in `targets`.
fn row_images(
    factors: &[Arc<Presentation>],
    targets: [u8; 2],
    k: i64,
    lift: CoactionLift,
) -> [TensorElement; 2] {
    let (m, t) = matrix_elements();
    let row = |i: usize| {
        let mut out = TensorElement::zero(factors.to_vec());
        for (j, &y) in targets.iter().enumerate() {
            let h = &t[i][j];
            let grade = h
                .terms()
                .next()
                .map(|(w, _)| m.grade_of(w).expect("declared").value() as i64)
                .unwrap_or(0);
            out.add_expanded(&lift.weight(k, grade), &[h.clone(), Element::letter(y)]);
        }
        out
    };
    [row(0), row(1)]
}

/// δ_L(θ) = a⊗θ + β⊗φ, δ_L(φ) = γ⊗θ + d⊗φ, extended as an algebra map into
/// M̃_q(2) ⊗ plane.
pub fn coaction(e: &Element) -> Result<TensorElement, HopfError> {
    let plane = get_presentation(AlgebraId::ExteriorPlane);
    let (m, _) = matrix_elements();
    let factors = vec![m, plane.clone()];
    let coords = [plane.index_of("theta")?, plane.index_of("phi")?];
    let images = row_images(&factors, coords, 0, CoactionLift::Graded);
    extend_hom(e, &images, &factors, SignRule::Braided)
}

/// Generator images of Δ_L on a calculus, indexed by generator.
pub fn covariance_lift(
    c: &CalculusSpec,
    lift: CoactionLift,
) -> Result<Vec<TensorElement>, HopfError> {
    let p = c.presentation().clone();
    let (m, _) = matrix_elements();
    let factors = vec![m, p.clone()];
    let families = [
        c.coordinates(),
        c.first_differentials(),
        c.second_differentials(),
    ];
    let mut images = vec![TensorElement::zero(factors.clone()); p.generators().len()];
    for (k, fam) in families.iter().enumerate() {
        let rows = row_images(&factors, *fam, k as i64, lift);
        for (i, img) in rows.into_iter().enumerate() {
            images[fam[i] as usize] = img;
        }
    }
    Ok(images)
}

/// (ρᵏ⊗dᵏ) on M̃_q(2) ⊗ calculus.
fn graded_d_on_right(
    t: &TensorElement,
    c: &CalculusSpec,
    k: usize,
    lift: CoactionLift,
) -> Result<TensorElement, HopfError> {
    let m = &t.factors()[0];
    let mut out = TensorElement::zero(t.factors().to_vec());
    for (words, coef) in t.terms() {
        let rho = m.grade_of(&words[0])?.value() as i64;
        let dx = apply_d_iter(&Element::from_word(words[1].clone()), c, k)?;
        out.add_expanded(
            &(coef * &lift.weight(k as i64, rho)),
            &[Element::from_word(words[0].clone()), dx],
        );
    }
    out.normalize()
}

fn calc_name(id: AlgebraId) -> String {
    id.cli_name()
}

/// Left covariance of a calculus: Δ_L agrees with δ_L on coordinates, annihilates every
/// relation, and intertwines d and d² with (ρᵏ⊗dᵏ).
pub fn verify_covariance(calc_id: AlgebraId, lift: CoactionLift) -> Report {
    let mut r = Report::new(&format!("covariance.{}", calc_name(calc_id)));
    let c = match CalculusSpec::new(calc_id) {
        Ok(c) => c,
        Err(e) => {
            r.run("calculus", || Err(e.to_string()));
            return r;
        }
    };
    let p = c.presentation().clone();
    let images = match covariance_lift(&c, lift) {
        Ok(i) => i,
        Err(e) => {
            r.run("lift", || Err(e.to_string()));
            return r;
        }
    };
    let factors = images[0].factors().to_vec();
    let delta = |e: &Element| extend_hom(e, &images, &factors, SignRule::Braided);
    let plane = get_presentation(AlgebraId::ExteriorPlane);
    let basis = enumerate_basis(&plane, 4);

    r.run("coordinates", || {
        for w in &basis {
            let on_plane = coaction(&Element::from_word(w.clone())).map_err(|e| e.to_string())?;
            let mut expected = TensorElement::zero(factors.clone());
            for (ws, x) in on_plane.terms() {
                expected.add_term(vec![ws[0].clone(), c.from_plane(&ws[1])], x.clone());
            }
            let actual = delta(&Element::from_word(c.from_plane(w))).map_err(|e| e.to_string())?;
            if let Some(m) = tensor_mismatch(
                &format!("delta_L({})", plane.render_word(w)),
                &expected,
                &actual,
            ) {
                return Err(m);
            }
        }
        Ok(None)
    });

    for rule in p.all_rules() {
        let lhs = p.render_word(&rule.lhs);
        r.run(&format!("relation[{lhs}]"), || {
            let img = delta(&rule.relation()).map_err(|e| e.to_string())?;
            if img.is_zero() {
                Ok(None)
            } else {
                Err(format!(
                    "delta_L({lhs} - ({})) = {}",
                    p.render(&rule.rhs),
                    img.render()
                ))
            }
        });
    }

    for k in 1..=2usize {
        let id = if k == 1 { "d_commutes" } else { "d2_commutes" };
        r.run(id, || {
            for w in &basis {
                let f = Element::from_word(c.from_plane(w));
                let lhs = delta(&apply_d_iter(&f, &c, k).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let rhs = graded_d_on_right(&delta(&f).map_err(|e| e.to_string())?, &c, k, lift)
                    .map_err(|e| e.to_string())?;
                if let Some(m) = tensor_mismatch(
                    &format!("on {}", p.render_word(&c.from_plane(w))),
                    &rhs,
                    &lhs,
                ) {
                    return Err(m);
                }
            }
            Ok(None)
        });
    }
    r.run("d_commutes.one_forms", || {
        for dx in c.first_differentials() {
            for w in &basis {
                let f = normal_form(
                    &Element::letter(dx).concat(&Element::from_word(c.from_plane(w))),
                    &p,
                )
                .map_err(|e| e.to_string())?;
                let lhs = delta(&apply_d_iter(&f, &c, 1).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let rhs = graded_d_on_right(&delta(&f).map_err(|e| e.to_string())?, &c, 1, lift)
                    .map_err(|e| e.to_string())?;
                if let Some(m) = tensor_mismatch(&format!("on {}", p.render(&f)), &rhs, &lhs) {
                    return Err(m);
                }
            }
        }
        Ok(None)
    });
    r
}

/// δ_L kills θφ − q²φθ, θ³ and φ³ computed on free words.
pub fn coaction_kills_plane_relations() -> Report {
    let plane = get_presentation(AlgebraId::ExteriorPlane);
    let mut r = Report::new("coaction.plane");
    for (id, rel) in [
        ("theta_phi", "theta*phi - q^2*phi*theta"),
        ("theta_cubed", "theta^3"),
        ("phi_cubed", "phi^3"),
    ] {
        r.run(id, || {
            let e = parse_element(rel, &plane).map_err(|e| e.to_string())?;
            let img = coaction(&e).map_err(|e| e.to_string())?;
            if img.is_zero() {
                Ok(None)
            } else {
                Err(format!("delta_L({rel}) = {}", img.render()))
            }
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coaction_on_theta() {
        let plane = get_presentation(AlgebraId::ExteriorPlane);
        let t = coaction(&plane.gen("theta").unwrap()).unwrap();
        assert_eq!(t.render(), "a (x) theta + beta (x) phi");
    }

    #[test]
    fn plane_relations_are_annihilated() {
        assert!(coaction_kills_plane_relations().passed());
    }

    #[test]
    fn lift_weights_on_differentials() {
        let c = CalculusSpec::new(AlgebraId::CalcCovariant).unwrap();
        let img = covariance_lift(&c, CoactionLift::Graded).unwrap();
        let [dt, dp] = c.first_differentials();
        assert_eq!(
            img[dt as usize].render(),
            "a (x) dtheta + q^2*beta (x) dphi"
        );
        assert_eq!(
            img[dp as usize].render(),
            "q*gamma (x) dtheta + dd (x) dphi"
        );
    }
}
