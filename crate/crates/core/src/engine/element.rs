use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use super::Word;
use crate::scalar::Scalar;

/// Sparse linear combination of words. No zero coefficients are stored and iteration
/// follows the term order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(Scalar::one(), w)
    }

    pub fn letter(g: u8) -> Self {
        Self::from_word(Word::letter(g))
    }

    pub fn from_scalar(c: Scalar) -> Self {
        Self::term(c, Word::unit())
    }

    pub fn term(c: Scalar, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Word, Scalar> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// The scalar part (coefficient of the unit word).
    pub fn constant(&self) -> Scalar {
        self.coefficient(&Word::unit())
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Free (unnormalized) product: concatenation of words.
    pub fn concat(&self, o: &Element) -> Element {
        let mut out = Element::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }

    /// Apply a conjugate-free linear map word by word.
    pub fn map_words<F: FnMut(&Word) -> Element>(&self, mut f: F) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out += &f(w).scale(c);
        }
        out
    }

    pub fn letters_used(&self) -> impl Iterator<Item = u8> + '_ {
        self.terms.keys().flat_map(|w| w.letters().iter().copied())
    }
}

impl std::ops::AddAssign<&Element> for Element {
    fn add_assign(&mut self, o: &Element) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Element> for Element {
    fn sub_assign(&mut self, o: &Element) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl std::ops::AddAssign for Element {
    fn add_assign(&mut self, o: Element) {
        *self += &o;
    }
}

impl std::ops::SubAssign for Element {
    fn sub_assign(&mut self, o: Element) {
        *self -= &o;
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, o: Element) -> Element {
        self += &o;
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, o: Element) -> Element {
        self -= &o;
        self
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl FromIterator<(Word, Scalar)> for Element {
    fn from_iter<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        Element::from_terms(it)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_terms() {
        let mut e = Element::letter(0);
        e.add_term(Word::letter(0), Scalar::from_int(-1));
        assert!(e.is_zero());
        assert_eq!(e.len(), 0);
    }

    #[test]
    fn concat_is_bilinear() {
        let a = &Element::letter(0) + &Element::letter(1).scale(&Scalar::q());
        let b = Element::letter(2);
        let ab = a.concat(&b);
        assert_eq!(ab.coefficient(&Word::new(vec![1, 2])), Scalar::q());
        assert_eq!(ab.coefficient(&Word::new(vec![0, 2])), Scalar::one());
    }
}
