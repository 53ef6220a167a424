//! Rederive the bimodule relations of a calculus on the plane from the bilinear ansatz
//!   θ·dθ = Q₁ dθ·θ,  θ·dφ = C₁ dφ·θ + C₂ dθ·φ,  φ·dφ = Q₂ dφ·φ,  φ·dθ = C₃ dθ·φ + C₄ dφ·θ,
//!   dθ∧dφ = Q₃ dφ∧dθ.
//!
//! Every constraint is produced by the rewriting engine at exact sample values of the
//! unknowns; its symbolic shape (a low-degree polynomial or an affine map) is recovered
//! by interpolation and then solved exactly.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{apply_d_free, extract_partials, partial_on_form, CalculusError, CalculusSpec};
use crate::catalog::{get_presentation, AlgebraId};
use crate::engine::{normal_form, render_sum, Element, Presentation, RewriteRule, Word};
use crate::rmatrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzParams {
    pub q1: Scalar,
    pub q2: Scalar,
    pub q3: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
    pub c3: Scalar,
    pub c4: Scalar,
    /// Coefficient of dθ∧dφ in the derived θ·d²φ relation before homogeneity is imposed.
    pub k1: Scalar,
    /// ∂_θdθ = A₁dθ∂_θ + A₂dφ∂_φ, ∂_θdφ = A₃dφ∂_θ + A₄dθ∂_φ,
    /// ∂_φdφ = A₅dφ∂_φ + A₆dθ∂_θ, ∂_φdθ = A₇dθ∂_φ + A₈dφ∂_θ, when a fit exists.
    pub a: Option<[Scalar; 8]>,
}

impl AnsatzParams {
    pub fn render(&self) -> String {
        let mut s = format!(
            "Q1 = {}, Q2 = {}, Q3 = {}, C1 = {}, C2 = {}, C3 = {}, C4 = {}, K1 = {}",
            self.q1, self.q2, self.q3, self.c1, self.c2, self.c3, self.c4, self.k1
        );
        if let Some(a) = &self.a {
            let parts: Vec<String> = a
                .iter()
                .enumerate()
                .map(|(i, x)| format!("A{} = {x}", i + 1))
                .collect();
            s.push_str(&format!("; {}", parts.join(", ")));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub q1_roots: Vec<Scalar>,
    pub q2_roots: Vec<Scalar>,
    pub branches: Vec<AnsatzParams>,
    pub trace: Vec<String>,
}

/// Univariate polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<Scalar>);

impl Poly {
    fn trimmed(mut v: Vec<Scalar>) -> Self {
        while v.last().is_some_and(Scalar::is_zero) {
            v.pop();
        }
        Poly(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, x: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Divide by (x − r), assuming r is a root.
    fn deflate(&self, r: &Scalar) -> Poly {
        let n = self.0.len();
        let mut out = vec![Scalar::zero(); n - 1];
        let mut carry = Scalar::zero();
        for k in (1..n).rev() {
            carry = &self.0[k] + &(&carry * r);
            out[k - 1] = carry.clone();
        }
        Poly::trimmed(out)
    }

    fn render(&self, var: &str) -> String {
        render_sum(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    let mono = match k {
                        0 => None,
                        1 => Some(var.to_string()),
                        _ => Some(format!("{var}^{k}")),
                    };
                    (c.clone(), mono)
                }),
        )
    }
}

/// Lagrange interpolation through (xᵢ, yᵢ) at the points 0, 1, …, n−1.
fn interpolate(ys: &[Scalar]) -> Poly {
    let n = ys.len();
    let pts: Vec<Scalar> = (0..n as i64).map(Scalar::from_int).collect();
    let rows: Vec<Vec<Scalar>> = pts
        .iter()
        .map(|x| (0..n as u32).map(|k| x.pow(k)).collect())
        .collect();
    let coeffs = Matrix::from_rows(rows)
        .solve(ys)
        .expect("Vandermonde system is regular");
    Poly::trimmed(coeffs)
}

/// Coefficient polynomials of an element-valued function of one unknown of degree ≤ `degree`,
/// confirmed at one extra point.
fn poly_family<F>(degree: usize, mut f: F) -> Result<Vec<(Word, Poly)>, CalculusError>
where
    F: FnMut(&Scalar) -> Result<Element, CalculusError>,
{
    let samples: Vec<Element> = (0..=degree as i64 + 1)
        .map(|x| f(&Scalar::from_int(x)))
        .collect::<Result<_, _>>()?;
    let words: BTreeSet<Word> = samples
        .iter()
        .flat_map(|e| e.terms().map(|(w, _)| w.clone()))
        .collect();
    let mut out = Vec::new();
    for w in words {
        let ys: Vec<Scalar> = samples.iter().map(|e| e.coefficient(&w)).collect();
        let p = interpolate(&ys[..=degree]);
        assert_eq!(
            p.eval(&Scalar::from_int(degree as i64 + 1)),
            ys[degree + 1],
            "degree bound exceeded"
        );
        out.push((w, p));
    }
    Ok(out)
}

/// All ζ-combinations with coefficients in {−1, 0, 1}: every root the constraints have.
fn candidates() -> Vec<Scalar> {
    let mut out = Vec::new();
    for n in 0..81i64 {
        let c = [
            n % 3 - 1,
            (n / 3) % 3 - 1,
            (n / 9) % 3 - 1,
            (n / 27) % 3 - 1,
        ];
        out.push(Scalar::from_coords(c));
    }
    out.sort_by_key(|s| (s.term_count(), s.to_string()));
    out
}

/// Common roots of the nonzero polynomials; every polynomial must split over the candidates.
fn common_roots(polys: &[(Word, Poly)]) -> Result<Vec<Scalar>, String> {
    let nonzero: Vec<&Poly> = polys
        .iter()
        .map(|(_, p)| p)
        .filter(|p| !p.is_zero())
        .collect();
    if nonzero.is_empty() {
        return Err("constraint vanishes identically".into());
    }
    for p in &nonzero {
        let mut rest = (*p).clone();
        for r in candidates() {
            while rest.degree() > 0 && rest.eval(&r).is_zero() {
                rest = rest.deflate(&r);
            }
        }
        if rest.degree() > 0 {
            return Err(format!(
                "{} does not split over the candidate set",
                p.render("x")
            ));
        }
    }
    Ok(candidates()
        .into_iter()
        .filter(|r| nonzero.iter().all(|p| p.eval(r).is_zero()))
        .collect())
}

fn render_set(xs: &[Scalar]) -> String {
    let parts: Vec<String> = xs.iter().map(Scalar::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// The simplest nonzero constraint polynomial, for the trace.
fn show_poly(polys: &[(Word, Poly)], var: &str) -> String {
    polys
        .iter()
        .map(|(_, p)| p)
        .filter(|p| !p.is_zero())
        .min_by_key(|p| (p.degree(), p.0.len()))
        .map(|p| p.render(var))
        .unwrap_or_else(|| "0".into())
}

/// Affine map v ↦ const + Σ coeffᵢ vᵢ.
#[derive(Debug, Clone)]
struct Affine {
    constant: Scalar,
    coeffs: Vec<Scalar>,
}

impl Affine {
    fn eval(&self, v: &[Scalar]) -> Scalar {
        self.coeffs
            .iter()
            .zip(v)
            .fold(self.constant.clone(), |acc, (c, x)| &acc + &(c * x))
    }

    fn render(&self, vars: &[&str]) -> String {
        let mut terms: Vec<(Scalar, Option<String>)> = self
            .coeffs
            .iter()
            .zip(vars)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| (c.clone(), Some(v.to_string())))
            .collect();
        if !self.constant.is_zero() {
            terms.push((self.constant.clone(), None));
        }
        render_sum(terms)
    }
}

/// Linearize an element-valued affine function of `n` unknowns: rows are word
/// coefficients, confirmed at a probe point.
fn affine_family<F>(n: usize, mut f: F) -> Result<(Vec<Word>, Matrix, Vec<Scalar>), CalculusError>
where
    F: FnMut(&[Scalar]) -> Result<Element, CalculusError>,
{
    let zero = vec![Scalar::zero(); n];
    let base = f(&zero)?;
    let mut cols = Vec::new();
    for i in 0..n {
        let mut v = zero.clone();
        v[i] = Scalar::one();
        cols.push(&f(&v)? - &base);
    }
    let probe: Vec<Scalar> = (0..n as i64).map(|i| Scalar::from_int(i + 2)).collect();
    let at_probe = f(&probe)?;
    let words: BTreeSet<Word> = std::iter::once(&base)
        .chain(&cols)
        .chain(std::iter::once(&at_probe))
        .flat_map(|e| e.terms().map(|(w, _)| w.clone()))
        .collect();
    let words: Vec<Word> = words.into_iter().collect();
    let m = Matrix::from_rows(
        words
            .iter()
            .map(|w| cols.iter().map(|c| c.coefficient(w)).collect())
            .collect(),
    );
    let b: Vec<Scalar> = words.iter().map(|w| base.coefficient(w)).collect();
    let predicted: Vec<Scalar> = m.apply(&probe).iter().zip(&b).map(|(x, y)| x + y).collect();
    let actual: Vec<Scalar> = words.iter().map(|w| at_probe.coefficient(w)).collect();
    assert_eq!(
        predicted, actual,
        "constraint is not affine in the unknowns"
    );
    Ok((words, m, b))
}

/// Solve M·v + b = 0 for the leading variables in terms of the trailing `free` ones.
fn solve_affine(m: &Matrix, b: &[Scalar], free: usize) -> Option<Vec<Affine>> {
    let n = m.cols();
    let mut aug = Matrix::zeros(m.rows(), n + 1);
    for i in 0..m.rows() {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, -&b[i]);
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&n) {
        return None;
    }
    let bound = n - free;
    if pivots.len() != bound || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(
        (0..bound)
            .map(|row| Affine {
                constant: r.get(row, n).clone(),
                coeffs: (bound..n).map(|j| -r.get(row, j)).collect(),
            })
            .collect(),
    )
}

struct Builder {
    base: Arc<Presentation>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            base: get_presentation(AlgebraId::CalcCovariant),
        }
    }

    fn el(&self, s: &str) -> Element {
        crate::cli::parse::parse_element(s, &self.base).expect("fixed expression")
    }

    fn word(&self, s: &str) -> Word {
        crate::cli::parse::parse_word(s, &self.base).expect("fixed word")
    }

    fn presentation(&self, rules: Vec<RewriteRule>) -> Result<Arc<Presentation>, CalculusError> {
        Ok(Arc::new(Presentation::new(
            "ANSATZ",
            self.base.generators().to_vec(),
            rules,
        )?))
    }

    fn plane_rule(&self) -> RewriteRule {
        RewriteRule::new(self.word("phi*theta"), self.el("q*theta*phi"))
    }

    fn wedge_rule(&self, w: &Scalar) -> RewriteRule {
        RewriteRule::new(self.word("dphi*dtheta"), self.el("dtheta*dphi").scale(w))
    }

    fn first_order(&self, q1: &Scalar, q2: &Scalar, c: &[Scalar; 4]) -> Vec<RewriteRule> {
        let t =
            |a: &Scalar, x: &str, b: &Scalar, y: &str| &self.el(x).scale(a) + &self.el(y).scale(b);
        vec![
            RewriteRule::new(self.word("theta*dtheta"), self.el("dtheta*theta").scale(q1)),
            RewriteRule::new(
                self.word("theta*dphi"),
                t(&c[0], "dphi*theta", &c[1], "dtheta*phi"),
            ),
            RewriteRule::new(self.word("phi*dphi"), self.el("dphi*phi").scale(q2)),
            RewriteRule::new(
                self.word("phi*dtheta"),
                t(&c[2], "dtheta*phi", &c[3], "dphi*theta"),
            ),
        ]
    }

    /// Apply d to X·dY = rhs: q^{ρ(X)} X·d²Y = d(rhs) − dX·dY. Wedge terms are kept.
    fn second_order(
        &self,
        first: &[RewriteRule],
        w: &Scalar,
    ) -> Result<Vec<RewriteRule>, CalculusError> {
        let p = self.presentation(vec![self.wedge_rule(w)])?;
        let spec = CalculusSpec::from_presentation(p.clone())?;
        first
            .iter()
            .map(|r| {
                let (x, dy) = (r.lhs.letters()[0], r.lhs.letters()[1]);
                let dx = spec.d_of(x).expect("coordinate");
                let d2y = spec.d_of(dy).expect("1-form");
                let rho = p.generator(x).grade.value() as i64;
                let raw =
                    &apply_d_free(&r.rhs, &spec) - &Element::from_word(Word::new(vec![dx, dy]));
                let rhs = normal_form(&raw.scale(&Scalar::q_pow(-rho)), &p)?;
                Ok(RewriteRule::new(Word::new(vec![x, d2y]), rhs))
            })
            .collect()
    }

    fn wedge_part(&self, e: &Element) -> Element {
        let second = [
            self.base.index_of("d2theta").unwrap(),
            self.base.index_of("d2phi").unwrap(),
        ];
        e.terms()
            .filter(|(w, _)| !w.letters().iter().any(|g| second.contains(g)))
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    fn homogeneous(&self, rules: Vec<RewriteRule>) -> Vec<RewriteRule> {
        rules
            .into_iter()
            .map(|r| {
                let wedge = self.wedge_part(&r.rhs);
                RewriteRule::new(r.lhs, &r.rhs - &wedge)
            })
            .collect()
    }
}

fn residual_for(rules: &[RewriteRule], lhs: &Word) -> Element {
    rules
        .iter()
        .find(|r| r.lhs == *lhs)
        .map(|r| r.rhs.clone())
        .unwrap_or_default()
}

/// The full rule set of one solution: plane relation, first- and second-order bimodule
/// relations and the 1-form relation.
pub fn branch_presentation(params: &AnsatzParams) -> Result<Presentation, CalculusError> {
    let b = Builder::new();
    let c = [
        params.c1.clone(),
        params.c2.clone(),
        params.c3.clone(),
        params.c4.clone(),
    ];
    let first = b.first_order(&params.q1, &params.q2, &c);
    let w = params
        .q3
        .inv()
        .map_err(|_| CalculusError::NotACalculus("Q3 = 0".into()))?;
    let second = b.homogeneous(b.second_order(&first, &w)?);
    let mut rules = vec![b.plane_rule()];
    rules.extend(first);
    rules.extend(second);
    rules.push(b.wedge_rule(&w));
    Ok(Presentation::new(
        "ANSATZ",
        b.base.generators().to_vec(),
        rules,
    )?)
}

/// Fit the A-coefficients of the ∂ and d ansatz on the plane basis.
fn fit_partials_with_forms(spec: &CalculusSpec) -> Option<[Scalar; 8]> {
    let [dt, dp] = spec.first_differentials();
    let basis = spec.coordinate_basis();
    // (∂ index, 1-form, first term (form, ∂ index), second term (form, ∂ index))
    let shapes = [
        (0, dt, (dt, 0), (dp, 1)),
        (0, dp, (dp, 0), (dt, 1)),
        (1, dp, (dp, 1), (dt, 0)),
        (1, dt, (dt, 1), (dp, 0)),
    ];
    let mut out: Vec<Scalar> = Vec::new();
    for (k, form, t1, t2) in shapes {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs = Vec::new();
        for b in &basis {
            let f = Element::from_word(b.clone());
            let lhs = partial_on_form(
                k,
                &normal_form(&Element::letter(form).concat(&f), spec.presentation()).ok()?,
                spec,
            )
            .ok()?;
            let parts = extract_partials(&f, spec).ok()?;
            let term = |(g, j): (u8, usize)| {
                let d = if j == 0 { &parts.0 } else { &parts.1 };
                normal_form(&Element::letter(g).concat(d), spec.presentation()).ok()
            };
            let (x, y) = (term(t1)?, term(t2)?);
            let words: BTreeSet<Word> = lhs
                .terms()
                .chain(x.terms())
                .chain(y.terms())
                .map(|(w, _)| w.clone())
                .collect();
            for w in words {
                rows.push(vec![x.coefficient(&w), y.coefficient(&w)]);
                rhs.push(lhs.coefficient(&w));
            }
        }
        let m = Matrix::from_rows(rows);
        if m.rank() < 2 {
            return None;
        }
        out.extend(m.solve(&rhs)?);
    }
    out.try_into().ok()
}

/// Staged derivation; each stage is recorded in the trace.
pub fn solve_ansatz() -> Result<AnsatzSolution, CalculusError> {
    let b = Builder::new();
    let mut trace = Vec::new();
    let one = Scalar::one();
    let zero4 = [
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
        Scalar::zero(),
    ];

    // d(θ³) = 0 and d(φ³) = 0
    let cube_constraint = |gen: &str, q_is_first: bool| {
        poly_family(2, |x| {
            let (q1, q2) = if q_is_first {
                (x.clone(), one.clone())
            } else {
                (one.clone(), x.clone())
            };
            let p = b.presentation(b.first_order(&q1, &q2, &zero4))?;
            let spec = CalculusSpec::from_presentation(p.clone())?;
            Ok(normal_form(
                &apply_d_free(&b.el(&format!("{gen}^3")), &spec),
                &p,
            )?)
        })
    };
    let q1_polys = cube_constraint("theta", true)?;
    let q1_roots = common_roots(&q1_polys).map_err(CalculusError::NotACalculus)?;
    trace.push(format!(
        "d(theta^3) = 0: {} = 0, so Q1 in {}",
        show_poly(&q1_polys, "Q1"),
        render_set(&q1_roots)
    ));
    let q2_polys = cube_constraint("phi", false)?;
    let q2_roots = common_roots(&q2_polys).map_err(CalculusError::NotACalculus)?;
    trace.push(format!(
        "d(phi^3) = 0: {} = 0, so Q2 in {}",
        show_poly(&q2_polys, "Q2"),
        render_set(&q2_roots)
    ));

    // d of the plane relation, unknowns ordered (C3, C4, C1, C2)
    let rel = b.el("phi*theta - q*theta*phi");
    let (_, m, r0) = affine_family(4, |v| {
        let c = [v[2].clone(), v[3].clone(), v[0].clone(), v[1].clone()];
        let p = b.presentation(b.first_order(&q1_roots[0], &q2_roots[0], &c))?;
        let spec = CalculusSpec::from_presentation(p.clone())?;
        Ok(normal_form(&apply_d_free(&rel, &spec), &p)?)
    })?;
    let c34 = solve_affine(&m, &r0, 2).ok_or_else(|| {
        CalculusError::NotACalculus("d of the plane relation is inconsistent".into())
    })?;
    trace.push(format!(
        "d(phi*theta - q*theta*phi) = 0: C3 = {}, C4 = {}",
        c34[0].render(&["C1", "C2"]),
        c34[1].render(&["C1", "C2"])
    ));
    let full_c = |c1: &Scalar, c2: &Scalar| {
        let v = [c1.clone(), c2.clone()];
        [c1.clone(), c2.clone(), c34[0].eval(&v), c34[1].eval(&v)]
    };

    // homogeneity of θ·d²θ and φ·d²φ
    let hom = |lhs: &str, q_is_first: bool| {
        let lhs = b.word(lhs);
        poly_family(2, |x| {
            let (q1, q2) = if q_is_first {
                (x.clone(), one.clone())
            } else {
                (one.clone(), x.clone())
            };
            let second = b.second_order(&b.first_order(&q1, &q2, &full_c(&one, &one)), &one)?;
            Ok(b.wedge_part(&residual_for(&second, &lhs)))
        })
    };
    let h1 = hom("theta*d2theta", true)?;
    let q1_final: Vec<Scalar> = common_roots(&h1)
        .map_err(CalculusError::NotACalculus)?
        .into_iter()
        .filter(|x| q1_roots.contains(x))
        .collect();
    trace.push(format!(
        "theta*d2theta free of 1-form products: {} = 0, so Q1 in {}",
        show_poly(&h1, "Q1"),
        render_set(&q1_final)
    ));
    let h2 = hom("phi*d2phi", false)?;
    let q2_final: Vec<Scalar> = common_roots(&h2)
        .map_err(CalculusError::NotACalculus)?
        .into_iter()
        .filter(|x| q2_roots.contains(x))
        .collect();
    trace.push(format!(
        "phi*d2phi free of 1-form products: {} = 0, so Q2 in {}",
        show_poly(&h2, "Q2"),
        render_set(&q2_final)
    ));

    // homogeneity of θ·d²φ and φ·d²θ; w = 1/Q3 from the candidates, unknowns (C2, C1)
    let mixed = [b.word("theta*d2phi"), b.word("phi*d2theta")];
    let mut consistent: Vec<(Scalar, Affine)> = Vec::new();
    for w in candidates().into_iter().filter(|w| !w.is_zero()) {
        let (_, m, r0) = affine_family(2, |v| {
            let second = b.second_order(&b.first_order(&one, &one, &full_c(&v[1], &v[0])), &w)?;
            let mut e = Element::zero();
            for (k, lhs) in mixed.iter().enumerate() {
                // tag the two relations apart by word length offset
                for (word, c) in b.wedge_part(&residual_for(&second, lhs)).terms() {
                    let mut letters = word.letters().to_vec();
                    letters.extend(std::iter::repeat_n(word.letters()[0], k));
                    e.add_term(Word::new(letters), c.clone());
                }
            }
            Ok(e)
        })?;
        if let Some(sol) = solve_affine(&m, &r0, 1) {
            consistent.push((w, sol[0].clone()));
        }
    }
    let [(w, c2_of_c1)] = <[(Scalar, Affine); 1]>::try_from(consistent.clone()).map_err(|_| {
        CalculusError::NotACalculus(format!(
            "{} values of Q3 make the mixed relations homogeneous",
            consistent.len()
        ))
    })?;
    let q3 = w.inv().expect("nonzero candidate");
    trace.push(format!(
        "theta*d2phi and phi*d2theta free of 1-form products: Q3 = {q3}, C2 = {}",
        c2_of_c1.render(&["C1"])
    ));

    // overlaps of the plane relation with each differential
    let mut c1_roots: Option<Vec<Scalar>> = None;
    for &q1 in &q1_final.iter().collect::<Vec<_>>() {
        for &q2 in &q2_final.iter().collect::<Vec<_>>() {
            for x in ["dtheta", "dphi", "d2theta", "d2phi"] {
                let probe = rel.concat(&b.el(x));
                let polys = poly_family(3, |c1| {
                    let c2 = c2_of_c1.eval(std::slice::from_ref(c1));
                    let first = b.first_order(q1, q2, &full_c(c1, &c2));
                    let second = b.homogeneous(b.second_order(&first, &w)?);
                    // move the differential to the left past both coordinates before the
                    // plane relation may reorder them
                    let mut rules = vec![b.wedge_rule(&w)];
                    rules.extend(first);
                    rules.extend(second);
                    let bimodule = b.presentation(rules.clone())?;
                    rules.push(b.plane_rule());
                    let full = b.presentation(rules)?;
                    Ok(normal_form(&normal_form(&probe, &bimodule)?, &full)?)
                })?;
                if polys.iter().all(|(_, p)| p.is_zero()) {
                    trace.push(format!(
                        "(phi*theta - q*theta*phi)*{x} = 0 holds identically"
                    ));
                    continue;
                }
                let roots = common_roots(&polys).map_err(CalculusError::NotACalculus)?;
                trace.push(format!(
                    "(phi*theta - q*theta*phi)*{x} = 0: {} = 0, so C1 in {}",
                    show_poly(&polys, "C1"),
                    render_set(&roots)
                ));
                c1_roots = Some(match c1_roots {
                    None => roots,
                    Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
                });
            }
        }
    }
    let c1_roots = c1_roots.unwrap_or_default();

    let mut branches = Vec::new();
    for q1 in &q1_final {
        for q2 in &q2_final {
            for c1 in &c1_roots {
                let c2 = c2_of_c1.eval(std::slice::from_ref(c1));
                let [c1, c2, c3, c4] = full_c(c1, &c2);
                let k1 = &Scalar::q2() * &(&(&(&c1 * &w) + &(&Scalar::q2() * &c2)) - &one);
                let mut params = AnsatzParams {
                    q1: q1.clone(),
                    q2: q2.clone(),
                    q3: q3.clone(),
                    c1,
                    c2,
                    c3,
                    c4,
                    k1,
                    a: None,
                };
                let spec =
                    CalculusSpec::from_presentation(Arc::new(branch_presentation(&params)?))?;
                params.a = fit_partials_with_forms(&spec);
                trace.push(format!("branch: {}", params.render()));
                branches.push(params);
            }
        }
    }
    Ok(AnsatzSolution {
        q1_roots,
        q2_roots,
        branches,
        trace,
    })
}

/// Witness of the first branch relation missing from, or differing with, a catalog entry.
pub fn branch_mismatch(
    params: &AnsatzParams,
    id: AlgebraId,
) -> Result<Option<String>, CalculusError> {
    let derived = branch_presentation(params)?;
    let cat = get_presentation(id);
    for r in derived.rules() {
        let found = cat.rules().iter().find(|x| x.lhs == r.lhs);
        let lhs = derived.render_word(&r.lhs);
        match found {
            None => return Ok(Some(format!("{lhs} has no relation in {id}"))),
            Some(x) if x.rhs != r.rhs => {
                return Ok(Some(format!(
                    "{lhs} = {} derived, {} in {id}",
                    derived.render(&r.rhs),
                    cat.render(&x.rhs)
                )))
            }
            _ => {}
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_a_quadratic() {
        let q = Scalar::q();
        let p = Poly(vec![Scalar::one(), q.clone(), Scalar::q2()]);
        let ys: Vec<Scalar> = (0..3).map(|x| p.eval(&Scalar::from_int(x))).collect();
        assert_eq!(interpolate(&ys), p);
        let roots = common_roots(&[(Word::unit(), p.clone())]).unwrap();
        assert_eq!(roots, vec![Scalar::one(), q]);
        assert_eq!(p.render("Q1"), "1 + q*Q1 + q^2*Q1^2");
    }

    #[test]
    fn two_branches_with_the_expected_constants() {
        let sol = solve_ansatz().unwrap();
        let q = Scalar::q();
        assert_eq!(sol.q1_roots, vec![Scalar::one(), q.clone()]);
        assert_eq!(sol.q2_roots, vec![Scalar::one(), Scalar::q2()]);
        assert_eq!(sol.branches.len(), 2);
        let c1s: Vec<Scalar> = sol.branches.iter().map(|b| b.c1.clone()).collect();
        assert!(c1s.contains(&Scalar::one()) && c1s.contains(&q));
        for br in &sol.branches {
            assert_eq!(br.q3, Scalar::one());
            assert_eq!(br.c2, &q * &(&Scalar::one() - &br.c1));
            assert_eq!(br.c3, &br.c2 + &Scalar::q2());
            assert_eq!(br.c4, &br.c1 - &q);
            assert!(br.k1.is_zero());
            let id = if br.c1.is_one() {
                AlgebraId::CalcCovariant
            } else {
                AlgebraId::CalcNoncov
            };
            assert_eq!(branch_mismatch(br, id).unwrap(), None);
        }
    }
}
