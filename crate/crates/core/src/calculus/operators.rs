//! Words in coordinates, differentials, ∂_θ, ∂_φ, d and d² acting on forms of the
//! covariant calculus, read right to left.

use std::sync::{Arc, OnceLock};

use super::{apply_d, apply_d_iter, CalculusError, CalculusSpec};
use crate::catalog::{get_presentation, AlgebraId};
use crate::cli::parse::parse_element;
use crate::cli::report::Report;
use crate::engine::{enumerate_basis, normal_form, Element, GeneratorSpec, Presentation, Word};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    /// Left multiplication by a calculus generator.
    Left(u8),
    /// ∂_θ (0) or ∂_φ (1).
    Partial(usize),
    D,
    D2,
}

/// Letters usable in operator expressions. No relations: a word is a composition.
pub fn operator_alphabet() -> Arc<Presentation> {
    static ALPHABET: OnceLock<Arc<Presentation>> = OnceLock::new();
    ALPHABET
        .get_or_init(|| {
            let gens = [
                ("theta", 1, 0),
                ("phi", 2, 0),
                ("dtheta", 2, 1),
                ("dphi", 0, 1),
                ("d2theta", 0, 2),
                ("d2phi", 1, 2),
                ("ptheta", 2, 0),
                ("pphi", 1, 0),
                ("d", 1, 1),
                ("d2", 2, 2),
            ]
            .iter()
            .map(|&(n, g, f)| GeneratorSpec::new(n, g, f, None))
            .collect();
            Arc::new(
                Presentation::new("OPERATORS", gens, Vec::new())
                    .expect("operator alphabet is valid"),
            )
        })
        .clone()
}

pub type OperatorExpr = Vec<(Scalar, Vec<Operator>)>;

pub fn parse_operator(s: &str, c: &CalculusSpec) -> Result<OperatorExpr, String> {
    let alpha = operator_alphabet();
    let e = parse_element(s, &alpha).map_err(|e| e.to_string())?;
    e.terms()
        .map(|(w, coef)| {
            let ops = w
                .letters()
                .iter()
                .map(|&g| {
                    let name = alpha.generator(g).name.as_str();
                    Ok(match name {
                        "ptheta" => Operator::Partial(0),
                        "pphi" => Operator::Partial(1),
                        "d" => Operator::D,
                        "d2" => Operator::D2,
                        other => Operator::Left(
                            c.presentation()
                                .index_of(other)
                                .map_err(|e| e.to_string())?,
                        ),
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok((coef.clone(), ops))
        })
        .collect()
}

/// ∂_k on a form: expand ω = Σ g_s·s with coordinates on the left and differentiate g_s.
pub fn partial_on_form(
    k: usize,
    omega: &Element,
    c: &CalculusSpec,
) -> Result<Element, CalculusError> {
    let mut out = Element::zero();
    for (g, s) in c.left_expansion(omega)? {
        let parts = super::extract_partials(&g, c)?;
        let dg = if k == 0 { parts.0 } else { parts.1 };
        out += dg.concat(&Element::from_word(s));
    }
    Ok(normal_form(&out, c.presentation())?)
}

fn act_letter(op: Operator, f: &Element, c: &CalculusSpec) -> Result<Element, CalculusError> {
    match op {
        Operator::Left(g) => Ok(normal_form(
            &Element::letter(g).concat(f),
            c.presentation(),
        )?),
        Operator::Partial(k) => partial_on_form(k, f, c),
        Operator::D => Ok(apply_d(f, c)?),
        Operator::D2 => Ok(apply_d_iter(f, c, 2)?),
    }
}

/// Apply an operator expression to a form; each word acts right to left.
pub fn act(ops: &OperatorExpr, f: &Element, c: &CalculusSpec) -> Result<Element, CalculusError> {
    let mut out = Element::zero();
    for (coef, word) in ops {
        let mut g = f.clone();
        for &op in word.iter().rev() {
            g = act_letter(op, &g, c)?;
            if g.is_zero() {
                break;
            }
        }
        out += g.scale(coef);
    }
    Ok(out)
}

fn relation_check(r: &mut Report, id: &str, expr: &str, c: &CalculusSpec, basis: &[Word]) {
    r.run(id, || {
        let ops = parse_operator(expr, c)?;
        for b in basis {
            let res = act(&ops, &Element::from_word(b.clone()), c).map_err(|e| e.to_string())?;
            if !res.is_zero() {
                let p = c.presentation();
                return Err(format!(
                    "{expr} on {} leaves {}",
                    p.render_word(b),
                    p.render(&res)
                ));
            }
        }
        Ok(None)
    });
}

fn is_second_order(c: &CalculusSpec, w: &Word) -> bool {
    w.letters()
        .iter()
        .any(|g| c.second_differentials().contains(g))
}

fn split(c: &CalculusSpec, e: &Element, second: bool) -> Element {
    e.terms()
        .filter(|(w, _)| is_second_order(c, w) == second)
        .map(|(w, x)| (w.clone(), x.clone()))
        .collect()
}

/// Operator identities between coordinates, partial derivatives, differentials and d,
/// checked on the plane basis words of length ≤ max_basis_len. Entries suffixed
/// `corrected` are the forms that the action actually satisfies where the printed
/// relation does not hold.
pub fn verify_partial_relations(max_basis_len: usize) -> Report {
    let c = CalculusSpec::new(AlgebraId::CalcCovariant).expect("catalog calculus");
    let plane = get_presentation(AlgebraId::ExteriorPlane);
    let basis: Vec<Word> = enumerate_basis(&plane, max_basis_len)
        .iter()
        .map(|w| c.from_plane(w))
        .collect();
    let mut r = Report::new("partials");

    let weyl = get_presentation(AlgebraId::Weyl);
    for rule in weyl.rules().iter().filter(|x| {
        let names: Vec<&str> = x
            .lhs
            .letters()
            .iter()
            .map(|&g| weyl.generator(g).name.as_str())
            .collect();
        names.iter().any(|n| *n == "ptheta" || *n == "pphi")
    }) {
        let lhs = weyl.render_word(&rule.lhs);
        let expr = format!("{lhs} - ({})", weyl.render(&rule.rhs));
        relation_check(
            &mut r,
            &format!("weyl.{}", lhs.replace('*', "_")),
            &expr,
            &c,
            &basis,
        );
    }
    relation_check(&mut r, "weyl.ptheta_cubed", "ptheta^3", &c, &basis);
    relation_check(&mut r, "weyl.pphi_cubed", "pphi^3", &c, &basis);

    let first = [
        (
            "one_form.dtheta_ptheta",
            "dtheta*ptheta - q*ptheta*dtheta - (q^2 - 1)*pphi*dphi",
        ),
        ("one_form.dphi_ptheta", "dphi*ptheta - ptheta*dphi"),
        ("one_form.dtheta_pphi", "dtheta*pphi - q^2*pphi*dtheta"),
        ("one_form.dphi_pphi", "dphi*pphi - pphi*dphi"),
        (
            "two_form.d2theta_ptheta",
            "d2theta*ptheta - ptheta*d2theta - (1 - q)*d2phi*pphi",
        ),
        (
            "two_form.d2theta_ptheta.corrected",
            "d2theta*ptheta - ptheta*d2theta - (1 - q)*pphi*d2phi",
        ),
        ("two_form.d2phi_ptheta", "d2phi*ptheta - q^2*ptheta*d2phi"),
        ("two_form.d2theta_pphi", "d2theta*pphi - pphi*d2theta"),
        ("two_form.d2phi_pphi", "d2phi*pphi - q*pphi*d2phi"),
    ];
    for (id, expr) in first {
        relation_check(&mut r, id, expr, &c, &basis);
    }

    let alpha = operator_alphabet();
    for (k, name) in ["ptheta", "pphi"].iter().enumerate() {
        let rho = alpha
            .generator(alpha.index_of(name).expect("listed"))
            .grade
            .value() as i64;
        let w1 = Scalar::q_pow(1 + 2 * rho);
        let w2 = Scalar::q_pow(2 + rho);
        relation_check(
            &mut r,
            &format!("exterior_d.{name}_d"),
            &format!("{name}*d - ({w1})*d*{name}"),
            &c,
            &basis,
        );
        relation_check(
            &mut r,
            &format!("exterior_d.{name}_d2"),
            &format!("{name}*d2 - ({w2})*d2*{name}"),
            &c,
            &basis,
        );
        // the wedge part carries q^{2+ρ}, the d²-part q^{1+ρ}
        r.run(&format!("exterior_d.{name}_d2.corrected"), || {
            let w3 = Scalar::q_pow(1 + rho);
            for b in &basis {
                let f = Element::from_word(b.clone());
                let lhs =
                    partial_on_form(k, &apply_d_iter(&f, &c, 2).map_err(|e| e.to_string())?, &c)
                        .map_err(|e| e.to_string())?;
                let parts = super::extract_partials(&f, &c).map_err(|e| e.to_string())?;
                let dk = if k == 0 { parts.0 } else { parts.1 };
                let rhs = apply_d_iter(&dk, &c, 2).map_err(|e| e.to_string())?;
                let ok = split(&c, &lhs, false) == split(&c, &rhs, false).scale(&w2)
                    && split(&c, &lhs, true) == split(&c, &rhs, true).scale(&w3);
                if !ok {
                    let p = c.presentation();
                    return Err(format!(
                        "on {}: {} vs {}",
                        p.render_word(b),
                        p.render(&lhs),
                        p.render(&rhs)
                    ));
                }
            }
            Ok(Some(format!(
                "{name}*d2 = ({w2})*d2*{name} on wedge terms, ({w3})*d2*{name} on d2-terms"
            )))
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partials_act_on_one_forms_from_the_left() {
        let c = CalculusSpec::new(AlgebraId::CalcCovariant).unwrap();
        // ∂_θ(θ·dφ) = dφ; θ·dφ = dφ·θ in this calculus
        let omega = c.element("dphi*theta");
        assert_eq!(partial_on_form(0, &omega, &c).unwrap(), c.element("dphi"));
        assert!(partial_on_form(1, &omega, &c).unwrap().is_zero());
    }

    #[test]
    fn operator_words_compose_right_to_left() {
        let c = CalculusSpec::new(AlgebraId::CalcCovariant).unwrap();
        let ops = parse_operator("ptheta*theta", &c).unwrap();
        // ∂_θ(θ·1) = 1
        assert_eq!(act(&ops, &Element::one(), &c).unwrap(), Element::one());
    }
}
