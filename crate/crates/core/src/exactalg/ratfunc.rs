//! Quotients of multivariate polynomials, used for rational parametrizations.
//!
//! No gcd cancellation is attempted beyond clearing constant denominators and
//! common monomial factors; equality is decided by cross-multiplication.

use super::multipoly::MultiPoly;
use super::ring::{Field, Rational, Ring};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Panics on a zero denominator.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }.normalized()
    }

    pub fn poly(p: MultiPoly) -> Self {
        Self {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    /// The polynomial this function equals, when the denominator is a constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let d = self.den.as_constant()?;
        Some(self.num.mul(&MultiPoly::constant(d.inv()?)))
    }

    fn normalized(self) -> Self {
        if self.num.is_zero() {
            return Self::poly(MultiPoly::zero());
        }
        // strip the largest monomial dividing both numerator and denominator
        let common = min_exponent(&self.num, &self.den);
        let (mut num, mut den) = (self.num, self.den);
        if common.iter().any(|&k| k > 0) {
            num = divide_monomial(&num, &common);
            den = divide_monomial(&den, &common);
        }
        if let Some(c) = den.as_constant() {
            let inv = MultiPoly::constant(c.inv().expect("nonzero"));
            return Self {
                num: num.mul(&inv),
                den: MultiPoly::one(),
            };
        }
        Self { num, den }
    }
}

fn min_exponent(a: &MultiPoly, b: &MultiPoly) -> Vec<u32> {
    let mut it = a.terms().chain(b.terms()).map(|(e, _)| e.clone());
    let Some(mut m) = it.next() else {
        return Vec::new();
    };
    for e in it {
        m.truncate(e.len());
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = (*slot).min(e[i]);
        }
    }
    m
}

fn divide_monomial(p: &MultiPoly, e: &[u32]) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (te, c) in p.terms() {
        let mut ne = te.clone();
        for (i, &k) in e.iter().enumerate() {
            ne[i] -= k;
        }
        out = out.add(&MultiPoly::monomial(ne, c.clone()));
    }
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, rhs: &Self) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::poly(MultiPoly::zero())
    }
    fn one() -> Self {
        Self::poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::poly(MultiPoly::constant(q.clone()))
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }
}
