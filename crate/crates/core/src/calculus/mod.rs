//! The differential d on the graded plane's calculi, partial derivatives read off from
//! df = dθ·∂_θf + dφ·∂_φf, the operator action on forms, and the ansatz solver that
//! rederives the bimodule relations.

mod ansatz;
mod operators;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use ansatz::{
    branch_mismatch, branch_presentation, solve_ansatz, AnsatzParams, AnsatzSolution,
};
pub use operators::{
    act, operator_alphabet, parse_operator, partial_on_form, verify_partial_relations, Operator,
};

use crate::catalog::{get_presentation, AlgebraId};
use crate::cli::parse::parse_element;
use crate::cli::report::Report;
use crate::engine::{
    all_words, enumerate_basis, normal_form, Element, EngineError, Presentation, Word,
};
use crate::rmatrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum CalculusError {
    #[error("{0} is not a differential calculus")]
    NotACalculus(String),
    #[error("`{0}` is missing from the calculus alphabet")]
    MissingGenerator(String),
    #[error("partial derivatives are defined on coordinate elements only")]
    NotCoordinate,
    #[error("residual word {0} has no leading differential; the relation set is incomplete")]
    NoLeadingDifferential(String),
    #[error("forms of degree {0} have no unique left coordinate expansion")]
    LeftFormsSingular(u32),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub const COORDINATES: [&str; 2] = ["theta", "phi"];
pub const FIRST: [&str; 2] = ["dtheta", "dphi"];
pub const SECOND: [&str; 2] = ["d2theta", "d2phi"];

/// Left expansion of the right-ordered forms of one form degree: each normal word s·b
/// (differentials s, coordinates b) written as Σ x·b'·s'.
#[derive(Debug)]
struct LeftForms {
    expansion: HashMap<Word, Vec<(Word, Word, Scalar)>>,
}

/// A calculus presentation together with the assignment θ↦dθ↦d²θ↦0, φ↦dφ↦d²φ↦0.
#[derive(Debug, Clone)]
pub struct CalculusSpec {
    algebra: Arc<Presentation>,
    d_map: Vec<Option<u8>>,
    coords: [u8; 2],
    first: [u8; 2],
    second: [u8; 2],
    left: Arc<Mutex<HashMap<u32, Arc<LeftForms>>>>,
}

impl CalculusSpec {
    pub fn new(id: AlgebraId) -> Result<Self, CalculusError> {
        if !id.is_calculus() {
            return Err(CalculusError::NotACalculus(id.name().to_string()));
        }
        Self::from_presentation(get_presentation(id))
    }

    /// Any presentation over the six calculus generators.
    pub fn from_presentation(algebra: Arc<Presentation>) -> Result<Self, CalculusError> {
        let idx = |n: &str| {
            algebra
                .index_of(n)
                .map_err(|_| CalculusError::MissingGenerator(n.to_string()))
        };
        let coords = [idx(COORDINATES[0])?, idx(COORDINATES[1])?];
        let first = [idx(FIRST[0])?, idx(FIRST[1])?];
        let second = [idx(SECOND[0])?, idx(SECOND[1])?];
        let mut d_map = vec![None; algebra.generators().len()];
        for k in 0..2 {
            d_map[coords[k] as usize] = Some(first[k]);
            d_map[first[k] as usize] = Some(second[k]);
        }
        Ok(CalculusSpec {
            algebra,
            d_map,
            coords,
            first,
            second,
            left: Arc::default(),
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.algebra
    }

    pub fn coordinates(&self) -> [u8; 2] {
        self.coords
    }

    pub fn first_differentials(&self) -> [u8; 2] {
        self.first
    }

    pub fn second_differentials(&self) -> [u8; 2] {
        self.second
    }

    pub fn d_of(&self, g: u8) -> Option<u8> {
        self.d_map.get(g as usize).copied().flatten()
    }

    pub fn is_coordinate_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|g| self.coords.contains(g))
    }

    /// θⁱφʲ, i, j < 3, in calculus letters.
    pub fn coordinate_basis(&self) -> Vec<Word> {
        let plane = get_presentation(AlgebraId::ExteriorPlane);
        enumerate_basis(&plane, 4)
            .iter()
            .map(|w| self.from_plane(w))
            .collect()
    }

    /// Relabel a word of the exterior plane into calculus letters.
    pub fn from_plane(&self, w: &Word) -> Word {
        Word::new(
            w.letters()
                .iter()
                .map(|&g| self.coords[g as usize])
                .collect(),
        )
    }

    pub fn element(&self, s: &str) -> Element {
        parse_element(s, &self.algebra).expect("expression over the calculus alphabet")
    }

    fn left_forms(&self, degree: u32) -> Result<Arc<LeftForms>, CalculusError> {
        if let Some(l) = self.left.lock().expect("cache lock").get(&degree) {
            return Ok(l.clone());
        }
        let built = Arc::new(self.build_left_forms(degree)?);
        self.left
            .lock()
            .expect("cache lock")
            .insert(degree, built.clone());
        Ok(built)
    }

    fn build_left_forms(&self, degree: u32) -> Result<LeftForms, CalculusError> {
        let p = &self.algebra;
        let diffs: Vec<u8> = self.first.iter().chain(&self.second).copied().collect();
        let patterns: Vec<Word> = all_words(diffs.len(), degree as usize)
            .into_iter()
            .map(|w| Word::new(w.letters().iter().map(|&i| diffs[i as usize]).collect()))
            .filter(|w| p.form_degree_of(w) == degree && p.is_normal(w))
            .collect();
        let basis = self.coordinate_basis();
        let mut left = Vec::new();
        let mut images = Vec::new();
        for s in &patterns {
            for b in &basis {
                left.push((b.clone(), s.clone()));
                images.push(normal_form(&Element::from_word(b.concat(s)), p)?);
            }
        }
        let mut right: Vec<Word> = patterns
            .iter()
            .flat_map(|s| basis.iter().map(move |b| s.concat(b)))
            .collect();
        for im in &images {
            for (w, _) in im.terms() {
                if !right.contains(w) {
                    right.push(w.clone());
                }
            }
        }
        if right.len() != left.len() {
            return Err(CalculusError::LeftFormsSingular(degree));
        }
        let cols: Vec<Vec<Scalar>> = images
            .iter()
            .map(|im| right.iter().map(|w| im.coefficient(w)).collect())
            .collect();
        let inv = Matrix::from_columns(&cols)
            .inverse()
            .ok_or(CalculusError::LeftFormsSingular(degree))?;
        let mut expansion = HashMap::new();
        for (i, w) in right.iter().enumerate() {
            let terms = (0..left.len())
                .filter(|&j| !inv.get(j, i).is_zero())
                .map(|j| (left[j].0.clone(), left[j].1.clone(), inv.get(j, i).clone()))
                .collect();
            expansion.insert(w.clone(), terms);
        }
        Ok(LeftForms { expansion })
    }

    /// Write a form as Σ g_s·s, coordinates on the left of each differential monomial s.
    pub fn left_expansion(&self, omega: &Element) -> Result<Vec<(Element, Word)>, CalculusError> {
        let nf = normal_form(omega, &self.algebra)?;
        let mut by_pattern: Vec<(Word, Element)> = Vec::new();
        for (w, c) in nf.terms() {
            let split = w
                .letters()
                .iter()
                .position(|g| self.coords.contains(g))
                .unwrap_or(w.len());
            let s = Word::new(w.letters()[..split].to_vec());
            let degree = self.algebra.form_degree_of(&s);
            let entries = if degree == 0 {
                vec![(w.clone(), Word::unit(), Scalar::one())]
            } else {
                let lf = self.left_forms(degree)?;
                lf.expansion
                    .get(w)
                    .cloned()
                    .ok_or(CalculusError::LeftFormsSingular(degree))?
            };
            for (b, s, x) in entries {
                let slot = match by_pattern.iter_mut().position(|(k, _)| *k == s) {
                    Some(i) => i,
                    None => {
                        by_pattern.push((s, Element::zero()));
                        by_pattern.len() - 1
                    }
                };
                by_pattern[slot].1.add_term(b, &x * c);
            }
        }
        Ok(by_pattern
            .into_iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(s, g)| (g, s))
            .collect())
    }
}

/// One application of d by the graded Leibniz rule, without normalization:
/// d(x₁⋯xₙ) = Σᵢ q^{ρ(x₁⋯xᵢ₋₁)} x₁⋯dxᵢ⋯xₙ.
pub fn apply_d_free(e: &Element, c: &CalculusSpec) -> Element {
    let p = &c.algebra;
    let mut out = Element::zero();
    for (w, coef) in e.terms() {
        let mut prefix = 0i64;
        for (i, &g) in w.letters().iter().enumerate() {
            if let Some(dg) = c.d_of(g) {
                let mut letters = w.letters().to_vec();
                letters[i] = dg;
                out.add_term(Word::new(letters), coef * &Scalar::q_pow(prefix));
            }
            prefix += p.generator(g).grade.value() as i64;
        }
    }
    out
}

pub fn apply_d(e: &Element, c: &CalculusSpec) -> Result<Element, EngineError> {
    normal_form(&apply_d_free(e, c), &c.algebra)
}

/// dᵏ applied freely and normalized once.
pub fn apply_d_iter(e: &Element, c: &CalculusSpec, k: usize) -> Result<Element, EngineError> {
    let mut x = e.clone();
    for _ in 0..k {
        x = apply_d_free(&x, c);
    }
    normal_form(&x, &c.algebra)
}

/// (∂_θ e, ∂_φ e) for a coordinate element e.
pub fn extract_partials(
    e: &Element,
    c: &CalculusSpec,
) -> Result<(Element, Element), CalculusError> {
    if !e.terms().all(|(w, _)| c.is_coordinate_word(w)) {
        return Err(CalculusError::NotCoordinate);
    }
    let de = apply_d(e, c)?;
    let (mut dt, mut dp) = (Element::zero(), Element::zero());
    for (w, coef) in de.terms() {
        let l = w.letters();
        let rest = Word::new(l.get(1..).unwrap_or_default().to_vec());
        match l.first() {
            Some(&g) if g == c.first[0] && c.is_coordinate_word(&rest) => {
                dt.add_term(rest, coef.clone())
            }
            Some(&g) if g == c.first[1] && c.is_coordinate_word(&rest) => {
                dp.add_term(rest, coef.clone())
            }
            _ => {
                return Err(CalculusError::NoLeadingDifferential(
                    c.algebra.render_word(w),
                ))
            }
        }
    }
    Ok((dt, dp))
}

fn coordinate_words(c: &CalculusSpec, max_len: usize) -> Vec<Word> {
    all_words(2, max_len)
        .iter()
        .map(|w| Word::new(w.letters().iter().map(|&i| c.coords[i as usize]).collect()))
        .collect()
}

/// d³ = 0, d² ≠ 0, the second-order Leibniz rule and grade/form bookkeeping on every
/// coordinate word of length ≤ max_len.
pub fn verify_d_rules(c: &CalculusSpec, max_len: usize) -> Report {
    let p = c.algebra.clone();
    let mut r = Report::new(&format!("d_rules.{}", p.name().to_lowercase()));
    let words = coordinate_words(c, max_len);
    let render = |e: &Element| p.render(e);

    r.run("d_squared_nonzero", || {
        for g in c.coords {
            let d2 = apply_d_iter(&Element::letter(g), c, 2).map_err(|e| e.to_string())?;
            if d2.is_zero() {
                return Err(format!("d^2 {} = 0", p.generator(g).name));
            }
        }
        Ok(None)
    });

    r.run("d_cubed_vanishes", || {
        for w in &words {
            let d3 =
                apply_d_iter(&Element::from_word(w.clone()), c, 3).map_err(|e| e.to_string())?;
            if !d3.is_zero() {
                return Err(format!("d^3({}) = {}", p.render_word(w), render(&d3)));
            }
        }
        Ok(Some(format!("{} coordinate words", words.len())))
    });

    r.run("second_order_leibniz", || {
        let mut n = 0;
        for f in &words {
            for g in &words {
                let (ef, eg) = (Element::from_word(f.clone()), Element::from_word(g.clone()));
                let lhs = apply_d_iter(&ef.concat(&eg), c, 2).map_err(|e| e.to_string())?;
                let rf = p.grade_of(f).map_err(|e| e.to_string())?.value() as i64;
                let d2f = apply_d_free(&apply_d_free(&ef, c), c);
                let d2g = apply_d_free(&apply_d_free(&eg, c), c);
                let closed = &(&d2f.concat(&eg)
                    - &apply_d_free(&ef, c)
                        .concat(&apply_d_free(&eg, c))
                        .scale(&Scalar::q_pow(rf - 1)))
                    + &ef.concat(&d2g).scale(&Scalar::q_pow(2 * rf));
                let rhs = normal_form(&closed, &p).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!(
                        "d^2({}*{}) = {} but the closed form gives {}",
                        p.render_word(f),
                        p.render_word(g),
                        render(&lhs),
                        render(&rhs)
                    ));
                }
                n += 1;
            }
        }
        Ok(Some(format!("{n} pairs")))
    });

    r.run("grade_and_form_raised_by_one", || {
        for w in &words {
            let gw = p.grade_of(w).map_err(|e| e.to_string())?.value() as i64;
            let fw = p.form_degree_of(w);
            let dw = apply_d(&Element::from_word(w.clone()), c).map_err(|e| e.to_string())?;
            for (t, _) in dw.terms() {
                let gt = p.grade_of(t).map_err(|e| e.to_string())?.value() as i64;
                if gt != (gw + 1).rem_euclid(3) || p.form_degree_of(t) != fw + 1 {
                    return Err(format!(
                        "d({}) contains {}",
                        p.render_word(w),
                        p.render_word(t)
                    ));
                }
            }
        }
        Ok(None)
    });
    r
}

/// ξ = dθ, x = dφ carries the dual plane's relation onto the 1-form relation, grades included.
pub fn dual_plane_identification() -> Report {
    let mut r = Report::new("dual_plane");
    r.run("relation_coincides", || {
        let dual = get_presentation(AlgebraId::DualPlane);
        let calc = get_presentation(AlgebraId::CalcCovariant);
        fn rename(name: &str) -> &str {
            match name {
                "xi" => "dtheta",
                "x" => "dphi",
                _ => name,
            }
        }
        let map_word = |w: &Word| -> Result<Word, String> {
            let names: Vec<&str> = w
                .letters()
                .iter()
                .map(|&g| rename(&dual.generator(g).name))
                .collect();
            calc.word(&names).map_err(|e| e.to_string())
        };
        for g in dual.generators() {
            let cg = calc.generator(calc.index_of(rename(&g.name)).map_err(|e| e.to_string())?);
            if cg.grade != g.grade {
                return Err(format!(
                    "grade of {} is {}, of {} is {}",
                    g.name,
                    g.grade.value(),
                    cg.name,
                    cg.grade.value()
                ));
            }
        }
        for rule in dual.rules() {
            let lhs = map_word(&rule.lhs)?;
            let mut rhs = Element::zero();
            for (w, c) in rule.rhs.terms() {
                rhs.add_term(map_word(w)?, c.clone());
            }
            let found = calc.rules().iter().any(|cr| cr.lhs == lhs && cr.rhs == rhs);
            if !found {
                return Err(format!(
                    "{} = {} is not a relation of {}",
                    calc.render_word(&lhs),
                    calc.render(&rhs),
                    calc.name()
                ));
            }
        }
        Ok(Some("x*xi = xi*x becomes dphi*dtheta = dtheta*dphi".into()))
    });
    r
}

/// (dθ)³ and (dφ)³ commute with the coordinates and the 1-forms. The 2-forms are left
/// out because no 1-form/2-form relations are available to reorder them.
pub fn cubes_are_central(c: &CalculusSpec) -> Report {
    let p = c.algebra.clone();
    let mut r = Report::new(&format!("cubes_central.{}", p.name().to_lowercase()));
    for &d in &c.first {
        let name = format!("{}^3", p.generator(d).name);
        r.run(&format!("{name}_commutes"), || {
            let cube = Element::from_word(Word::new(vec![d; 3]));
            for &g in c.coords.iter().chain(&c.first) {
                let x = Element::letter(g);
                let comm = normal_form(&(&x.concat(&cube) - &cube.concat(&x)), &p)
                    .map_err(|e| e.to_string())?;
                if !comm.is_zero() {
                    return Err(format!(
                        "[{}, {name}] = {}",
                        p.generator(g).name,
                        p.render(&comm)
                    ));
                }
            }
            Ok(None)
        });
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov() -> CalculusSpec {
        CalculusSpec::new(AlgebraId::CalcCovariant).unwrap()
    }

    #[test]
    fn d_values() {
        let c = cov();
        assert_eq!(
            apply_d(&c.element("theta"), &c).unwrap(),
            c.element("dtheta")
        );
        assert_eq!(
            apply_d(&c.element("theta*phi"), &c).unwrap(),
            c.element("dtheta*phi + q*dphi*theta")
        );
        assert!(apply_d(&c.element("d2theta"), &c).unwrap().is_zero());
    }

    #[test]
    fn partials_of_small_words() {
        let c = cov();
        let (t, p) = extract_partials(&c.element("theta"), &c).unwrap();
        assert_eq!((t, p), (c.element("1"), Element::zero()));
        let (t, p) = extract_partials(&c.element("theta^2"), &c).unwrap();
        assert_eq!((t, p), (c.element("-q*theta"), Element::zero()));
        let (t, p) = extract_partials(&c.element("theta*phi"), &c).unwrap();
        assert_eq!((t, p), (c.element("phi"), c.element("q*theta")));
    }

    #[test]
    fn partials_reassemble_d() {
        let c = cov();
        for w in c.coordinate_basis() {
            let e = Element::from_word(w);
            let (t, p) = extract_partials(&e, &c).unwrap();
            let back = normal_form(
                &(&c.element("dtheta").concat(&t) + &c.element("dphi").concat(&p)),
                c.presentation(),
            )
            .unwrap();
            assert_eq!(back, apply_d(&e, &c).unwrap());
        }
    }

    #[test]
    fn d_rules_hold_in_all_calculi() {
        for id in [
            AlgebraId::CalcCovariant,
            AlgebraId::CalcCovariantAlt,
            AlgebraId::CalcNoncov,
        ] {
            let r = verify_d_rules(&CalculusSpec::new(id).unwrap(), 3);
            assert!(r.passed(), "{id}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn left_expansion_of_a_one_form() {
        let c = cov();
        // φ·dθ on the left is itself; its right form must expand back to it
        let omega = c.element("q^2*dtheta*phi + (1 - q)*dphi*theta");
        let left = c.left_expansion(&omega).unwrap();
        assert_eq!(left.len(), 1);
        assert_eq!(left[0].0, c.element("phi"));
        assert_eq!(c.presentation().render_word(&left[0].1), "dtheta");
    }

    #[test]
    fn dual_plane_and_cubes() {
        assert!(dual_plane_identification().passed());
        let r = cubes_are_central(&cov());
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
