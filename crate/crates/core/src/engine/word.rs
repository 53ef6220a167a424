use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// An element of Z₃.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Grade(u8);

impl Grade {
    pub const ZERO: Grade = Grade(0);

    pub fn new(g: i64) -> Self {
        Grade(g.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl Add for Grade {
    type Output = Grade;
    fn add(self, o: Grade) -> Grade {
        Grade((self.0 + o.0) % 3)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A monomial: generator positions in some presentation's declared order.
/// The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(g: u8) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + o.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&o.0);
        Word(v)
    }

    /// Replace `len` letters at `pos` by `with`.
    pub fn splice(&self, pos: usize, len: usize, with: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + with.0.len() - len.min(self.0.len()));
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(&with.0);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn push(&mut self, g: u8) {
        self.0.push(g);
    }
}

impl Add<&Word> for &Word {
    type Output = Word;
    fn add(self, o: &Word) -> Word {
        self.concat(o)
    }
}

/// Term order: length first, then lexicographic by generator position.
impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_lex_order() {
        assert!(Word::new(vec![1]) < Word::new(vec![0, 0]));
        assert!(Word::new(vec![0, 1]) < Word::new(vec![1, 0]));
        assert!(Word::unit() < Word::letter(0));
    }

    #[test]
    fn splice_replaces_factor() {
        let w = Word::new(vec![0, 1, 2, 3]);
        assert_eq!(
            w.splice(1, 2, &Word::new(vec![5])),
            Word::new(vec![0, 5, 3])
        );
        assert_eq!(w.splice(0, 4, &Word::unit()), Word::unit());
    }

    #[test]
    fn grade_arithmetic() {
        assert_eq!(Grade::new(1) + Grade::new(2), Grade::ZERO);
        assert_eq!(Grade::new(-1), Grade::new(2));
    }
}
