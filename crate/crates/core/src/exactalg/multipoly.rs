//! Sparse multivariate polynomials over the rationals.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so polynomials in
//! different numbers of variables mix freely and `zero`/`one` need no context.
//! Variable names only matter for printing.

use std::collections::BTreeMap;
use std::fmt;

use super::ring::{rational_to_string, Rational, Ring};
use super::unipoly::UniPoly;

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Exponent, Rational>,
}

fn trim(mut e: Exponent) -> Exponent {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_at(e: &[u32], i: usize) -> u32 {
    e.get(i).copied().unwrap_or(0)
}

fn exp_add(a: &[u32], b: &[u32]) -> Exponent {
    let n = a.len().max(b.len());
    (0..n).map(|i| exp_at(a, i) + exp_at(b, i)).collect()
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = Self::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = Self::default();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the monomial with exponent `e`.
    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms
            .get(&trim(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The constant coefficient when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| exp_at(e, var)).max()
    }

    /// Whether every term has the same degree in the listed variables.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|e| vars.iter().map(|&v| exp_at(e, v)).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Expand as `Σ_k c_k · x_var^k` and return `[c_0, c_1, …]`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MultiPoly::default(); deg + 1];
        for (e, c) in &self.terms {
            let k = exp_at(e, var) as usize;
            let mut rest = e.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            out[k].add_term(rest, c.clone());
        }
        if self.terms.is_empty() {
            out.clear();
        }
        out
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(var);
        let mut acc = MultiPoly::default();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Substitute a rational value for one variable.
    pub fn specialize(&self, var: usize, value: &Rational) -> MultiPoly {
        self.substitute(var, &MultiPoly::constant(value.clone()))
    }

    /// Evaluate with `values[i]` for variable `i`; missing variables must not occur.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&Ring::pow(&values[i], k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// View as a univariate polynomial in `var` when no other variable occurs.
    pub fn to_unipoly(&self, var: usize) -> Option<UniPoly> {
        let cs = self.coeffs_in(var);
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            out.push(c.as_constant()?);
        }
        Some(UniPoly::new(out))
    }

    pub fn from_unipoly(p: &UniPoly, var: usize) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; var + 1];
            e[var] = k as u32;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Terms sorted by graded-lex order, largest first.
    fn sorted_terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| {
                let n = a.len().max(b.len());
                (0..n)
                    .map(|i| exp_at(b, i).cmp(&exp_at(a, i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        v
    }

    /// Canonical graded-lex rendering with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.sorted_terms() {
            let neg = c < &Rational::zero();
            let abs = if neg { c.neg() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names
                        .get(i)
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&rational_to_string(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&rational_to_string(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(exp_add(ea, eb), ca.mul(cb));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}
