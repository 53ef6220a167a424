//! Exact arithmetic in the cyclotomic field Q(ζ) with ζ a primitive 12th root of unity.
//!
//! Elements are stored as c0 + c1·ζ + c2·ζ² + c3·ζ³, reduced modulo ζ⁴ = ζ² − 1.
//! The deformation parameter q = ζ⁴ and the imaginary unit i = ζ³ both live here.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown scalar symbol `{0}`")]
    UnknownSymbol(String),
}

/// Canonical embedded constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    One,
    Q,
    Q2,
    I,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    c: [BigRational; 4],
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            c: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self, ScalarError> {
        if d == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::from_rational(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        )))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut s = Self::zero();
        s.c[0] = r;
        s
    }

    /// Build from ζ-basis coordinates given as small integers.
    pub fn from_coords(c: [i64; 4]) -> Self {
        Scalar {
            c: [rat(c[0]), rat(c[1]), rat(c[2]), rat(c[3])],
        }
    }

    pub fn from_rational_coords(c: [BigRational; 4]) -> Self {
        Scalar { c }
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn zeta() -> Self {
        Self::from_coords([0, 1, 0, 0])
    }

    pub fn q() -> Self {
        Self::from_coords([-1, 0, 1, 0])
    }

    pub fn q2() -> Self {
        Self::from_coords([0, 0, -1, 0])
    }

    pub fn i() -> Self {
        Self::from_coords([0, 0, 0, 1])
    }

    /// q^k for any integer k (q has order 3).
    pub fn q_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::q(),
            _ => Self::q2(),
        }
    }

    pub fn from_symbol(sym: Symbol) -> Self {
        match sym {
            Symbol::One => Self::one(),
            Symbol::Q => Self::q(),
            Symbol::Q2 => Self::q2(),
            Symbol::I => Self::i(),
        }
    }

    /// Parse a symbol name: `one`, `q`, `q2`, `i`.
    pub fn from_symbol_name(name: &str) -> Result<Self, ScalarError> {
        let sym = match name {
            "one" | "1" => Symbol::One,
            "q" => Symbol::Q,
            "q2" => Symbol::Q2,
            "i" => Symbol::I,
            _ => return Err(ScalarError::UnknownSymbol(name.to_string())),
        };
        Ok(Self::from_symbol(sym))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// True when the element lies in Q(q), i.e. contains no odd powers of ζ.
    pub fn is_i_free(&self) -> bool {
        self.c[1].is_zero() && self.c[3].is_zero()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism ζ ↦ ζ^k, k coprime to 12.
    fn galois(&self, k: u32) -> Self {
        let z = Self::zeta().pow(k);
        let mut acc = Self::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * &z) + &Self::from_rational(c.clone());
        }
        acc
    }

    /// Complex conjugation: ζ ↦ ζ⁻¹ = ζ¹¹.
    pub fn conjugate(&self) -> Self {
        self.galois(11)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let others = &(&self.galois(5) * &self.galois(7)) * &self.galois(11);
        let norm = self * &others;
        let n = norm.as_rational().expect("field norm is rational").clone();
        Ok(others.scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Scalar {
            c: [
                &self.c[0] * r,
                &self.c[1] * r,
                &self.c[2] * r,
                &self.c[3] * r,
            ],
        }
    }

    /// Terms of the canonical rendering, each a rational coefficient and a unit label.
    ///
    /// i-free values use {1, q, q²}; since 1 + q + q² = 0 the representation with the
    /// fewest terms (then smallest coefficient mass) is chosen. Otherwise {1, ζ, ζ², ζ³}.
    pub fn render_terms(&self) -> Vec<(BigRational, &'static str)> {
        if self.is_i_free() {
            // c0 + c2 ζ² = (c0 + c2) + c2 q
            let a = &self.c[0] + &self.c[2];
            let b = self.c[2].clone();
            let base = [a, b, BigRational::zero()];
            let shifts = [BigRational::zero(), -base[1].clone(), -base[0].clone()];
            let mut best: Option<([BigRational; 3], usize, BigRational)> = None;
            for t in shifts.iter() {
                let v = [&base[0] + t, &base[1] + t, &base[2] + t];
                let nz = v.iter().filter(|x| !x.is_zero()).count();
                let l1 = v.iter().fold(BigRational::zero(), |s, x| s + x.abs());
                let better = match &best {
                    None => true,
                    Some((_, bn, bl)) => nz < *bn || (nz == *bn && l1 < *bl),
                };
                if better {
                    best = Some((v, nz, l1));
                }
            }
            let (v, _, _) = best.unwrap();
            let units = ["1", "q", "q^2"];
            v.into_iter()
                .zip(units)
                .filter(|(x, _)| !x.is_zero())
                .collect()
        } else {
            let units = ["1", "zeta", "zeta^2", "zeta^3"];
            self.c
                .iter()
                .cloned()
                .zip(units)
                .filter(|(x, _)| !x.is_zero())
                .collect()
        }
    }

    /// Number of terms in the canonical rendering.
    pub fn term_count(&self) -> usize {
        self.render_terms().len()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.render_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (c, unit)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if *unit == "1" {
                out.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                out.push_str(unit);
            } else {
                out.push_str(&fmt_rational(&mag));
                out.push('*');
                out.push_str(unit);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        // convolution up to ζ⁶, then ζ⁴ = ζ² − 1, ζ⁵ = ζ³ − ζ, ζ⁶ = −1
        let mut p: [BigRational; 7] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        let [p0, p1, p2, p3, p4, p5, p6] = p;
        Scalar {
            c: [p0 - &p4 - p6, p1 - &p5, p2 + p4, p3 + p5],
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        for k in 0..4 {
            self.c[k] += &o.c[k];
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        for k in 0..4 {
            self.c[k] -= &o.c[k];
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_identities() {
        let q = Scalar::q();
        let q2 = Scalar::q2();
        assert_eq!(&q * &q2, Scalar::one());
        assert_eq!(&(&Scalar::one() + &q) + &q2, Scalar::zero());
        assert_eq!(q.pow(3), Scalar::one());
        assert_eq!(&q * &q, q2);
        assert_eq!(q.inv().unwrap(), q2);
        assert_eq!(&Scalar::one() + &q, -&q2);
    }

    #[test]
    fn imaginary_unit() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert_eq!(Scalar::i().conjugate(), -Scalar::i());
    }

    #[test]
    fn symbols_embed() {
        assert_eq!(
            Scalar::from_symbol(Symbol::Q).coords().clone(),
            Scalar::from_coords([-1, 0, 1, 0]).coords().clone()
        );
        assert_eq!(
            Scalar::from_symbol(Symbol::I),
            Scalar::from_coords([0, 0, 0, 1])
        );
        assert_eq!(
            Scalar::from_symbol(Symbol::One),
            Scalar::from_coords([1, 0, 0, 0])
        );
        assert!(matches!(
            Scalar::from_symbol_name("w"),
            Err(ScalarError::UnknownSymbol(_))
        ));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Scalar::q().conjugate(), Scalar::q2());
        let r = Scalar::from_ratio(3, 2).unwrap();
        assert_eq!(r.conjugate(), r);
        // ζ̄ = ζ − ζ³
        assert_eq!(
            Scalar::zeta().conjugate(),
            Scalar::from_coords([0, 1, 0, -1])
        );
    }

    #[test]
    fn division() {
        assert_eq!(
            Scalar::one().checked_div(&Scalar::q()).unwrap(),
            Scalar::q2()
        );
        assert_eq!(
            Scalar::q().checked_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
        let x = Scalar::from_coords([2, -1, 3, 5]);
        assert_eq!(&x * &x.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn rendering() {
        let q = Scalar::q();
        let q2 = Scalar::q2();
        let one = Scalar::one();
        assert_eq!(q.to_string(), "q");
        assert_eq!(q2.to_string(), "q^2");
        assert_eq!((&one - &q2).to_string(), "1 - q^2");
        assert_eq!((&q - &q2).to_string(), "q - q^2");
        assert_eq!((&one + &q).to_string(), "-q^2");
        assert_eq!((&q2 - &one).to_string(), "-1 + q^2");
        assert_eq!(Scalar::from_int(-1).to_string(), "-1");
        assert_eq!(Scalar::from_ratio(3, 2).unwrap().to_string(), "3/2");
        assert_eq!((&Scalar::from_int(2) * &q).to_string(), "2*q");
        assert_eq!(Scalar::i().to_string(), "zeta^3");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
