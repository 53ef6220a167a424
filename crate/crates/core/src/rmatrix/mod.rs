//! The 4×4 R̂-matrix of the graded plane: braid and Hecke identities, eigenspaces,
//! the commutation relations it encodes, the graded permutation and the 3×3
//! coordinate representations.
//!
//! Index convention: pairs (i, j) over {1, 2} are numbered 2(i−1) + (j−1), and
//! R̂^{kl}_{ij} sits at row (k, l), column (i, j), i.e. it is the coefficient of
//! e_k⊗e_l in R̂(e_i⊗e_j).

pub mod matrix;

use std::fmt;
use std::str::FromStr;

pub use matrix::{Matrix, SquareMatrix};

use crate::catalog::{get_presentation, AlgebraId};
use crate::cli::report::{Check, Report};
use crate::engine::{normal_form, render_sum, Element, Presentation, Word};
use crate::scalar::Scalar;

/// Grades of the plane coordinates θ₁ = θ, θ₂ = φ.
const RHO: [i64; 2] = [1, 2];

fn pair(i: usize, j: usize) -> usize {
    2 * i + j
}

pub fn rhat() -> SquareMatrix {
    let q = Scalar::q();
    let mut m = Matrix::zeros(4, 4);
    m.set(pair(0, 0), pair(0, 0), q.clone());
    m.set(pair(1, 1), pair(1, 1), q.clone());
    m.set(pair(0, 1), pair(1, 0), Scalar::one());
    m.set(pair(1, 0), pair(0, 1), Scalar::one());
    m.set(pair(1, 0), pair(1, 0), &q - &Scalar::q2());
    m
}

/// R̂^{kl}_{ij}, indices 0-based.
pub fn entry(r: &Matrix, k: usize, l: usize, i: usize, j: usize) -> Scalar {
    r.get(pair(k, l), pair(i, j)).clone()
}

pub fn braid_holds(r: &Matrix) -> bool {
    let i2 = Matrix::identity(2);
    let r12 = r.kron(&i2);
    let r23 = i2.kron(r);
    &(&r12 * &r23) * &r12 == &(&r23 * &r12) * &r23
}

pub fn braid_check() -> Report {
    let r = rhat();
    let mut rep = Report::new("rmatrix.braid");
    rep.run("braid", || {
        if braid_holds(&r) {
            Ok(None)
        } else {
            Err("R12 R23 R12 differs from R23 R12 R23".into())
        }
    });
    rep.run("invertible", || {
        let det = r.det();
        if det.is_zero() {
            return Err("det = 0".into());
        }
        let inv = r.inverse().ok_or("no inverse")?;
        if &r * &inv != Matrix::identity(4) {
            return Err("R times its inverse is not the identity".into());
        }
        Ok(Some(format!("det = {det}")))
    });
    rep.run("identity_control", || {
        if braid_holds(&Matrix::identity(4)) {
            Ok(None)
        } else {
            Err("identity fails".into())
        }
    });
    rep
}

fn minus_q2() -> Scalar {
    -Scalar::q2()
}

fn shifted(r: &Matrix, lambda: &Scalar) -> Matrix {
    r - &Matrix::identity(r.rows()).scale(lambda)
}

pub fn hecke_check() -> Report {
    let r = rhat();
    let q = Scalar::q();
    let mut rep = Report::new("rmatrix.hecke");
    let a = shifted(&r, &q);
    let b = shifted(&r, &minus_q2());
    rep.run("hecke_product", || {
        let p = &a * &b;
        if p.is_zero() {
            Ok(None)
        } else {
            Err(format!("(R - q I)(R + q^2 I) =\n{p}"))
        }
    });
    let wp = a.kernel();
    let wm = b.kernel();
    rep.push(Check::from_witness(
        "multiplicity.q",
        (wp.len() != 3).then(|| format!("dim ker(R - q I) = {}", wp.len())),
    ));
    rep.push(Check::from_witness(
        "multiplicity.minus_q2",
        (wm.len() != 1).then(|| format!("dim ker(R + q^2 I) = {}", wm.len())),
    ));
    rep.run("decomposition", || {
        let (ra, rb) = (a.rank(), b.rank());
        let mut cols = wp.clone();
        cols.extend(wm.iter().cloned());
        let span = Matrix::from_columns(&cols).rank();
        if ra + rb == 4 && span == 4 {
            Ok(Some(format!(
                "rank(R - q I) = {ra}, rank(R + q^2 I) = {rb}"
            )))
        } else {
            Err(format!("ranks {ra} + {rb}, eigenvectors span {span}"))
        }
    });
    // the image of R − qI is the −q² eigenspace, the image of R + q²I the q eigenspace
    rep.run("images", || {
        let im_a = a.rank();
        let im_b = b.rank();
        let both = |m: &Matrix, v: &[Vec<Scalar>]| {
            let mut cols: Vec<Vec<Scalar>> = (0..4)
                .map(|j| (0..4).map(|i| m.get(i, j).clone()).collect())
                .collect();
            cols.extend(v.iter().cloned());
            Matrix::from_columns(&cols).rank()
        };
        if im_a == wm.len() && both(&a, &wm) == im_a && im_b == wp.len() && both(&b, &wp) == im_b {
            Ok(Some(
                "Im(R - q I) = ker(R + q^2 I), Im(R + q^2 I) = ker(R - q I)".into(),
            ))
        } else {
            Err("images and eigenspaces differ".into())
        }
    });
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// q^{ρ(θᵢ)} θᵢ dθⱼ = q Σ R̂^{kl}_{ij} dθ_k θ_l
    CoordDiff,
    /// Σ R̂^{kl}_{ij} θ_k θ_l = q θᵢ θⱼ
    CoordCoord,
    /// ∂ᵢ θⱼ = δᵢⱼ + q Σ R̂^{jk}_{il} θ_l ∂_k
    DerivCoord,
    /// ∂ᵢ ∂ⱼ = q² Σ R̂^{lk}_{ji} ∂_k ∂_l
    DerivDeriv,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [
        RelationKind::CoordDiff,
        RelationKind::CoordCoord,
        RelationKind::DerivCoord,
        RelationKind::DerivDeriv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::CoordDiff => "coord_diff",
            RelationKind::CoordCoord => "coord_coord",
            RelationKind::DerivCoord => "deriv_coord",
            RelationKind::DerivDeriv => "deriv_deriv",
        }
    }

    fn target(self) -> AlgebraId {
        match self {
            RelationKind::CoordDiff => AlgebraId::CalcCovariant,
            RelationKind::CoordCoord => AlgebraId::ExteriorPlane,
            RelationKind::DerivCoord | RelationKind::DerivDeriv => AlgebraId::Weyl,
        }
    }

    /// Letter families (left, right) of the relations in this block.
    fn families(self) -> (&'static [&'static str; 2], &'static [&'static str; 2]) {
        const X: [&str; 2] = ["theta", "phi"];
        const DX: [&str; 2] = ["dtheta", "dphi"];
        const P: [&str; 2] = ["ptheta", "pphi"];
        match self {
            RelationKind::CoordDiff => (&X, &DX),
            RelationKind::CoordCoord => (&X, &X),
            RelationKind::DerivCoord => (&P, &X),
            RelationKind::DerivDeriv => (&P, &P),
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown relation block `{s}`"))
    }
}

fn mono(p: &Presentation, c: Scalar, names: &[&str]) -> Element {
    let w = p.word(names).expect("catalog generator");
    Element::term(c, w)
}

/// The relations (lhs − rhs) the R̂-matrix generates for one block, by component (i, j).
pub fn generated_relations(kind: RelationKind) -> Vec<((usize, usize), Element)> {
    let r = rhat();
    let p = get_presentation(kind.target());
    let q = Scalar::q();
    let (left, right) = kind.families();
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Element::zero();
            match kind {
                RelationKind::CoordDiff => {
                    e += &mono(&p, Scalar::q_pow(RHO[i]), &[left[i], right[j]]);
                    for k in 0..2 {
                        for l in 0..2 {
                            e -= &mono(&p, &q * &entry(&r, k, l, i, j), &[right[k], left[l]]);
                        }
                    }
                }
                RelationKind::CoordCoord => {
                    for k in 0..2 {
                        for l in 0..2 {
                            e += &mono(&p, entry(&r, k, l, i, j), &[left[k], left[l]]);
                        }
                    }
                    e -= &mono(&p, q.clone(), &[left[i], left[j]]);
                }
                RelationKind::DerivCoord => {
                    e += &mono(&p, Scalar::one(), &[left[i], right[j]]);
                    if i == j {
                        e -= &Element::one();
                    }
                    for k in 0..2 {
                        for l in 0..2 {
                            e -= &mono(&p, &q * &entry(&r, j, k, i, l), &[right[l], left[k]]);
                        }
                    }
                }
                RelationKind::DerivDeriv => {
                    e += &mono(&p, Scalar::one(), &[left[i], left[j]]);
                    for k in 0..2 {
                        for l in 0..2 {
                            e -= &mono(
                                &p,
                                &Scalar::q2() * &entry(&r, l, k, j, i),
                                &[left[k], left[l]],
                            );
                        }
                    }
                }
            }
            out.push(((i + 1, j + 1), e));
        }
    }
    out
}

/// c with a = c·b, when one exists.
fn proportional(a: &Element, b: &Element) -> Option<Scalar> {
    let (w, x) = b.terms().next()?;
    let c = a.coefficient(w).checked_div(x).ok()?;
    (b.scale(&c) == *a).then_some(c)
}

/// Generated relations hold in the catalog presentation; every catalog rule of the
/// block is proportional to a generated relation.
pub fn reconstruct_relations(kind: RelationKind) -> Report {
    let p = get_presentation(kind.target());
    let mut rep = Report::new(&format!("rmatrix.{}", kind.name()));
    let generated = generated_relations(kind);
    for ((i, j), rel) in &generated {
        rep.run(&format!("{}.component_{i}{j}", kind.name()), || {
            let nf = normal_form(rel, &p).map_err(|e| e.to_string())?;
            if !nf.is_zero() {
                return Err(format!("{} = 0 leaves {}", p.render(rel), p.render(&nf)));
            }
            let detail = if rel.is_zero() {
                "trivially satisfied".to_string()
            } else {
                format!("{} = 0", p.render(rel))
            };
            Ok(Some(detail))
        });
    }
    let (left, right) = kind.families();
    let in_block = |w: &Word| {
        let names: Vec<&str> = w
            .letters()
            .iter()
            .map(|&g| p.generator(g).name.as_str())
            .collect();
        names.len() == 2 && left.contains(&names[0]) && right.contains(&names[1])
    };
    rep.run(&format!("{}.catalog_covered", kind.name()), || {
        let mut covered = 0;
        for rule in p.rules().iter().filter(|r| in_block(&r.lhs)) {
            let rel = rule.relation();
            if !generated
                .iter()
                .any(|(_, g)| proportional(&rel, g).is_some())
            {
                return Err(format!(
                    "{} = {} is not generated",
                    p.render_word(&rule.lhs),
                    p.render(&rule.rhs)
                ));
            }
            covered += 1;
        }
        if covered == 0 {
            return Err("no catalog rule in this block".into());
        }
        Ok(Some(format!("{covered} catalog rules covered")))
    });
    rep
}

/// σ(eᵢ⊗eⱼ) = q^{ρᵢρⱼ} eⱼ⊗eᵢ.
pub fn graded_permutation() -> SquareMatrix {
    let mut m = Matrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(pair(j, i), pair(i, j), Scalar::q_pow(RHO[i] * RHO[j]));
        }
    }
    m
}

/// Monic minimal polynomial, ascending coefficients.
pub fn minimal_polynomial(m: &Matrix) -> Vec<Scalar> {
    let n = m.rows();
    let flat = |x: &Matrix| {
        (0..n * n)
            .map(|k| x.get(k / n, k % n).clone())
            .collect::<Vec<_>>()
    };
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let next = &powers[powers.len() - 1] * m;
        let basis = Matrix::from_columns(&powers.iter().map(flat).collect::<Vec<_>>());
        if let Some(c) = basis.solve(&flat(&next)) {
            let mut out: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
            out.push(Scalar::one());
            return out;
        }
        powers.push(next);
    }
}

pub fn render_polynomial(coeffs: &[Scalar], var: &str) -> String {
    render_sum(
        coeffs
            .iter()
            .enumerate()
            .rev()
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

pub fn graded_permutation_check() -> Report {
    let s = graded_permutation();
    let mut rep = Report::new("rmatrix.sigma");
    let min = minimal_polynomial(&s);
    let rendered = render_polynomial(&min, "x");
    rep.push(Check::pass("minimal_polynomial").with_detail(rendered.clone()));
    rep.run("braid", || {
        if braid_holds(&s) {
            Ok(None)
        } else {
            Err("sigma violates the braid relation".into())
        }
    });
    rep.run("hecke_polynomial", || {
        let p = &shifted(&s, &Scalar::q()) * &shifted(&s, &minus_q2());
        if p.is_zero() {
            Ok(None)
        } else {
            Err(format!(
                "(sigma - q I)(sigma + q^2 I) != 0; minimal polynomial {rendered}"
            ))
        }
    });
    rep
}

pub fn coordinate_matrices(c1: &Scalar, c2: &Scalar) -> (Matrix, Matrix) {
    let (z, o, q2) = (Scalar::zero(), Scalar::one(), Scalar::q2());
    let t = Matrix::from_rows(vec![
        vec![z.clone(), o.clone(), c1.clone()],
        vec![z.clone(), z.clone(), q2.clone()],
        vec![z.clone(), z.clone(), z.clone()],
    ]);
    let f = Matrix::from_rows(vec![
        vec![z.clone(), q2, c2.clone()],
        vec![z.clone(), z.clone(), o],
        vec![z.clone(), z.clone(), z],
    ]);
    (t, f)
}

pub fn matrix_rep_check(c1: &Scalar, c2: &Scalar) -> Report {
    let (t, f) = coordinate_matrices(c1, c2);
    let mut rep = Report::new(&format!("rmatrix.representation({c1}, {c2})"));
    rep.run("commutation", || {
        let lhs = &t * &f;
        let rhs = (&f * &t).scale(&Scalar::q2());
        if lhs == rhs {
            Ok(None)
        } else {
            Err(format!(
                "rho(theta)rho(phi) =\n{lhs}q^2 rho(phi)rho(theta) =\n{rhs}"
            ))
        }
    });
    rep.run("theta_cubed", || {
        if t.pow(3).is_zero() {
            Ok(None)
        } else {
            Err(format!("{}", t.pow(3)))
        }
    });
    rep.run("phi_cubed", || {
        if f.pow(3).is_zero() {
            Ok(None)
        } else {
            Err(format!("{}", f.pow(3)))
        }
    });
    rep
}

/// Every R̂ check: braid, Hecke, reconstruction of all four blocks, representations at
/// three parameter points and the graded permutation.
pub fn verify_rmatrix() -> Report {
    let mut rep = Report::new("rmatrix");
    rep.absorb("", braid_check());
    rep.absorb("", hecke_check());
    for k in RelationKind::ALL {
        rep.absorb("", reconstruct_relations(k));
    }
    for (i, (c1, c2)) in [
        (Scalar::zero(), Scalar::zero()),
        (Scalar::one(), Scalar::one()),
        (Scalar::from_int(5), Scalar::q()),
    ]
    .iter()
    .enumerate()
    {
        rep.absorb(&format!("representation_{i}."), matrix_rep_check(c1, c2));
    }
    rep.absorb("sigma.", graded_permutation_check());
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhat_entries() {
        let r = rhat();
        let q = Scalar::q();
        assert_eq!(entry(&r, 0, 0, 0, 0), q);
        assert_eq!(entry(&r, 1, 0, 1, 0), &q - &Scalar::q2());
        assert_eq!(entry(&r, 0, 1, 1, 0), Scalar::one());
        assert_eq!(entry(&r, 1, 0, 0, 1), Scalar::one());
        assert_eq!(entry(&r, 1, 1, 0, 0), Scalar::zero());
        assert_eq!(r.det(), -Scalar::q2());
    }

    #[test]
    fn braid_and_hecke() {
        assert!(braid_check().passed());
        assert!(hecke_check().passed());
    }

    #[test]
    fn reconstruction_blocks() {
        for k in RelationKind::ALL {
            let r = reconstruct_relations(k);
            assert!(r.passed(), "{k}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn sigma_is_not_hecke() {
        let s = graded_permutation();
        let q = Scalar::q();
        assert_eq!(s.get(pair(1, 0), pair(0, 1)), &Scalar::q2());
        assert_eq!(s.get(pair(0, 0), pair(0, 0)), &q);
        // (x − q)(x − q²)(x + q²) = x³ − q x² − q x + q²
        let min = minimal_polynomial(&s);
        assert_eq!(min, vec![Scalar::q2(), -&q, -&q, Scalar::one()]);
        assert!(!graded_permutation_check().passed());
    }

    #[test]
    fn coordinate_representation_at_origin() {
        let (t, f) = coordinate_matrices(&Scalar::zero(), &Scalar::zero());
        assert_eq!((&t * &f).get(0, 2), &Scalar::one());
        assert_eq!((&f * &t).get(0, 2), &Scalar::q());
        assert!(matrix_rep_check(&Scalar::from_int(5), &Scalar::q()).passed());
    }
}
