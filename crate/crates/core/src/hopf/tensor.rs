use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::HopfError;
use crate::engine::{normal_form, render_sum, Element, Presentation, Word};
use crate::scalar::Scalar;

/// How the scalar factor of a graded tensor product is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    /// (a⊗b)(c⊗d) = q^{ρ(b)ρ(c)} ac⊗bd, generalized to n factors as
    /// q^{Σ_{i>j} ρ(a_i)ρ(b_j)}.
    Braided,
    /// Factor α(ρ(b), ρ(c)) with α(x,y) = q^{x−y} for x ≠ y and q^x for x = y,
    /// reading the cases as comparisons of degrees. Two factors only.
    Alpha,
}

/// Key ordered from the last factor to the first, so that Δ(θ²) lists
/// θ²⊗1 before θ⊗θ before 1⊗θ².
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorKey(pub Vec<Word>);

impl Ord for TensorKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.iter().rev().cmp(o.0.iter().rev())
    }
}

impl PartialOrd for TensorKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse combination of pure tensors w₁⊗…⊗wₙ, each factor living in its own presentation.
#[derive(Debug, Clone)]
pub struct TensorElement {
    factors: Vec<Arc<Presentation>>,
    terms: BTreeMap<TensorKey, Scalar>,
}

impl PartialEq for TensorElement {
    fn eq(&self, o: &Self) -> bool {
        self.same_factors(o) && self.terms == o.terms
    }
}

impl TensorElement {
    pub fn zero(factors: Vec<Arc<Presentation>>) -> Self {
        TensorElement {
            factors,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(factors: Vec<Arc<Presentation>>) -> Self {
        let n = factors.len();
        let mut t = Self::zero(factors);
        t.add_term(vec![Word::unit(); n], Scalar::one());
        t
    }

    /// e₁⊗…⊗eₙ for elements already expressed in the given factors.
    pub fn pure(factors: Vec<Arc<Presentation>>, parts: &[Element]) -> Self {
        assert_eq!(factors.len(), parts.len(), "one element per factor");
        let mut t = Self::zero(factors);
        t.add_expanded(&Scalar::one(), parts);
        t
    }

    pub fn factors(&self) -> &[Arc<Presentation>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn same_factors(&self, o: &Self) -> bool {
        self.factors.len() == o.factors.len()
            && self
                .factors
                .iter()
                .zip(&o.factors)
                .all(|(a, b)| Arc::ptr_eq(a, b) || **a == **b)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Word], &Scalar)> {
        self.terms.iter().map(|(k, c)| (k.0.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, words: &[Word]) -> Scalar {
        self.terms
            .get(&TensorKey(words.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn add_term(&mut self, words: Vec<Word>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = TensorKey(words);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Add c·(e₁⊗…⊗eₙ), expanding each factor's terms.
    pub fn add_expanded(&mut self, c: &Scalar, parts: &[Element]) {
        let mut acc: Vec<(Vec<Word>, Scalar)> = vec![(Vec::new(), c.clone())];
        for e in parts {
            let mut next = Vec::with_capacity(acc.len() * e.len());
            for (ws, x) in &acc {
                for (w, y) in e.terms() {
                    let mut v = ws.clone();
                    v.push(w.clone());
                    next.push((v, x * y));
                }
            }
            acc = next;
        }
        for (ws, x) in acc {
            self.add_term(ws, x);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut t = Self::zero(self.factors.clone());
        for (k, x) in &self.terms {
            t.add_term(k.0.clone(), x * c);
        }
        t
    }

    pub fn add(&self, o: &Self) -> Result<Self, HopfError> {
        self.check_factors(o)?;
        let mut t = self.clone();
        for (k, x) in &o.terms {
            t.add_term(k.0.clone(), x.clone());
        }
        Ok(t)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HopfError> {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    fn check_factors(&self, o: &Self) -> Result<(), HopfError> {
        if self.same_factors(o) {
            Ok(())
        } else {
            Err(HopfError::MismatchedPresentations)
        }
    }

    /// Normalize every factor within its own presentation.
    pub fn normalize(&self) -> Result<Self, HopfError> {
        let mut t = Self::zero(self.factors.clone());
        for (k, c) in &self.terms {
            let parts =
                k.0.iter()
                    .zip(&self.factors)
                    .map(|(w, p)| normal_form(&Element::from_word(w.clone()), p))
                    .collect::<Result<Vec<_>, _>>()?;
            t.add_expanded(c, &parts);
        }
        Ok(t)
    }

    /// Juxtapose factors: (u₁⊗…⊗u_m) ⊗ (v₁⊗…⊗v_n). No scalar factor arises.
    pub fn juxtapose(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        let mut t = Self::zero(factors);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut v = a.0.clone();
                v.extend(b.0.iter().cloned());
                t.add_term(v, x * y);
            }
        }
        t
    }

    /// Apply a linear map to one tensor slot, replacing it by the factors of the image.
    pub fn map_slot<F>(
        &self,
        slot: usize,
        image_factors: &[Arc<Presentation>],
        mut f: F,
    ) -> Result<Self, HopfError>
    where
        F: FnMut(&Word) -> Result<TensorElement, HopfError>,
    {
        let mut factors: Vec<Arc<Presentation>> = self.factors[..slot].to_vec();
        factors.extend(image_factors.iter().cloned());
        factors.extend(self.factors[slot + 1..].iter().cloned());
        let mut t = Self::zero(factors);
        for (k, c) in &self.terms {
            let img = f(&k.0[slot])?;
            for (ws, x) in img.terms() {
                let mut v: Vec<Word> = k.0[..slot].to_vec();
                v.extend(ws.iter().cloned());
                v.extend(k.0[slot + 1..].iter().cloned());
                t.add_term(v, c * x);
            }
        }
        Ok(t)
    }

    /// Multiply out the factors (all in one presentation): m(a⊗b) = ab.
    pub fn multiply_out(&self) -> Result<Element, HopfError> {
        let p = self
            .factors
            .first()
            .ok_or(HopfError::MismatchedPresentations)?;
        if self.factors.iter().any(|f| **f != **p) {
            return Err(HopfError::MismatchedPresentations);
        }
        let mut e = Element::zero();
        for (k, c) in &self.terms {
            let w = k.0.iter().fold(Word::unit(), |acc, w| acc.concat(w));
            e.add_term(w, c.clone());
        }
        Ok(normal_form(&e, p)?)
    }

    pub fn render(&self) -> String {
        render_sum(self.terms.iter().map(|(k, c)| {
            let mono =
                k.0.iter()
                    .zip(&self.factors)
                    .map(|(w, p)| p.render_word(w))
                    .collect::<Vec<_>>()
                    .join(" (x) ");
            (c.clone(), Some(mono))
        }))
    }
}

fn word_grade(p: &Presentation, w: &Word) -> Result<i64, HopfError> {
    Ok(p.grade_of(w)?.value() as i64)
}

/// Graded product of tensors, each factor normalized in its own presentation.
pub fn tensor_mul(
    u: &TensorElement,
    v: &TensorElement,
    rule: SignRule,
) -> Result<TensorElement, HopfError> {
    u.check_factors(v)?;
    let n = u.arity();
    if rule == SignRule::Alpha && n != 2 {
        return Err(HopfError::Unsupported(
            "the alpha sign rule is defined for two factors".into(),
        ));
    }
    let mut raw = TensorElement::zero(u.factors.clone());
    for (a, x) in &u.terms {
        for (b, y) in &v.terms {
            let ga: Vec<i64> =
                a.0.iter()
                    .zip(&u.factors)
                    .map(|(w, p)| word_grade(p, w))
                    .collect::<Result<_, _>>()?;
            let gb: Vec<i64> =
                b.0.iter()
                    .zip(&u.factors)
                    .map(|(w, p)| word_grade(p, w))
                    .collect::<Result<_, _>>()?;
            let sign = match rule {
                SignRule::Braided => {
                    let mut e = 0;
                    for i in 0..n {
                        for j in 0..i {
                            e += ga[i] * gb[j];
                        }
                    }
                    Scalar::q_pow(e)
                }
                SignRule::Alpha => {
                    let (s, t) = (ga[1], gb[0]);
                    Scalar::q_pow(if s != t { s - t } else { s })
                }
            };
            let words: Vec<Word> = a.0.iter().zip(&b.0).map(|(l, r)| l.concat(r)).collect();
            raw.add_term(words, &(x * y) * &sign);
        }
    }
    raw.normalize()
}

/// τ(a⊗b) = q^{ρ(a)ρ(b)} b⊗a.
pub fn flip(t: &TensorElement) -> Result<TensorElement, HopfError> {
    if t.arity() != 2 {
        return Err(HopfError::Unsupported(
            "flip acts on two-fold tensors".into(),
        ));
    }
    let factors = vec![t.factors[1].clone(), t.factors[0].clone()];
    let mut out = TensorElement::zero(factors);
    for (k, c) in &t.terms {
        let e = word_grade(&t.factors[0], &k.0[0])? * word_grade(&t.factors[1], &k.0[1])?;
        out.add_term(vec![k.0[1].clone(), k.0[0].clone()], c * &Scalar::q_pow(e));
    }
    Ok(out)
}

/// Homomorphic extension of generator images to an element, computed on the words as
/// written (not first normalized), so that relations are genuinely tested.
pub fn extend_hom(
    e: &Element,
    images: &[TensorElement],
    factors: &[Arc<Presentation>],
    rule: SignRule,
) -> Result<TensorElement, HopfError> {
    let mut out = TensorElement::zero(factors.to_vec());
    for (w, c) in e.terms() {
        let mut acc = TensorElement::one(factors.to_vec());
        for &g in w.letters() {
            let img = images
                .get(g as usize)
                .ok_or(HopfError::MismatchedPresentations)?;
            acc = tensor_mul(&acc, img, rule)?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}
