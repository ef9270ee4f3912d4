//! Multiquadratic number fields `Q(√r₁, …, √r_k)`.
//!
//! An element is a coefficient vector over the basis `Π_{i∈S} √r_i`, indexed
//! by the bitmask `S`. Radicands are kept multiplicatively independent modulo
//! squares, so the representation is canonical. Fields only ever grow by
//! appending a radicand, so two elements always live in a common field: the
//! one whose radicand list extends the other.

use std::fmt;
use std::sync::Arc;

use super::ring::{rational_sqrt, rational_to_string, Field, Rational, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurdField {
    radicands: Arc<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct Surd {
    radicands: Arc<Vec<Rational>>,
    c: Vec<Rational>,
}

impl SurdField {
    pub fn rationals() -> Self {
        Self::default()
    }

    pub fn radicands(&self) -> &[Rational] {
        &self.radicands
    }

    pub fn embed(&self, q: &Rational) -> Surd {
        let mut c = vec![Rational::zero(); 1 << self.radicands.len()];
        c[0] = q.clone();
        Surd {
            radicands: self.radicands.clone(),
            c,
        }
    }

    /// Return a field containing a square root of `d` together with that root.
    /// Errors never occur; a rational square root is returned directly.
    pub fn adjoin_sqrt(&self, d: &Rational) -> (SurdField, Surd) {
        if d.is_zero() {
            return (self.clone(), self.embed(d));
        }
        let k = self.radicands.len();
        for mask in 0..(1usize << k) {
            let prod = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .fold(Rational::one(), |acc, i| acc.mul(&self.radicands[i]));
            if let Some(q) = rational_sqrt(&d.mul(&prod)) {
                // √d = q / Π_{S} √r_i = q · Π_{S} √r_i / Π_{S} r_i
                let mut c = vec![Rational::zero(); 1 << k];
                c[mask] = q.mul(&prod.inv().expect("radicands are nonzero"));
                return (
                    self.clone(),
                    Surd {
                        radicands: self.radicands.clone(),
                        c,
                    },
                );
            }
        }
        let mut r = (*self.radicands).clone();
        r.push(d.clone());
        let field = SurdField {
            radicands: Arc::new(r),
        };
        let mut c = vec![Rational::zero(); 1 << (k + 1)];
        c[1 << k] = Rational::one();
        let root = Surd {
            radicands: field.radicands.clone(),
            c,
        };
        (field, root)
    }

    /// Whether `other` equals this field or extends it.
    pub fn is_subfield_of(&self, other: &SurdField) -> bool {
        other.radicands.starts_with(&self.radicands)
    }
}

impl Surd {
    pub fn field(&self) -> SurdField {
        SurdField {
            radicands: self.radicands.clone(),
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.c.iter().skip(1).all(Ring::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn lift_to(&self, radicands: &Arc<Vec<Rational>>) -> Surd {
        if Arc::ptr_eq(&self.radicands, radicands) || self.radicands.len() == radicands.len() {
            return Surd {
                radicands: radicands.clone(),
                c: self.c.clone(),
            };
        }
        debug_assert!(radicands.starts_with(&self.radicands));
        let mut c = self.c.clone();
        c.resize(1 << radicands.len(), Rational::zero());
        Surd {
            radicands: radicands.clone(),
            c,
        }
    }

    /// Bring both operands into the larger of the two fields.
    fn common(&self, rhs: &Surd) -> (Surd, Surd) {
        let target = if self.radicands.len() >= rhs.radicands.len() {
            assert!(
                self.radicands.starts_with(&rhs.radicands),
                "surds from unrelated fields"
            );
            &self.radicands
        } else {
            assert!(
                rhs.radicands.starts_with(&self.radicands),
                "surds from unrelated fields"
            );
            &rhs.radicands
        };
        (self.lift_to(target), rhs.lift_to(target))
    }

    /// Split as `a + b·√r_last` with `a`, `b` in the field without the last radicand.
    fn split_last(&self) -> (Surd, Surd, Rational) {
        let k = self.radicands.len();
        let half = 1 << (k - 1);
        let sub = Arc::new(self.radicands[..k - 1].to_vec());
        let a = Surd {
            radicands: sub.clone(),
            c: self.c[..half].to_vec(),
        };
        let b = Surd {
            radicands: sub,
            c: self.c[half..].to_vec(),
        };
        (a, b, self.radicands[k - 1].clone())
    }

    fn join_last(a: &Surd, b: &Surd, radicands: &Arc<Vec<Rational>>) -> Surd {
        let mut c = a.c.clone();
        c.extend(b.c.iter().cloned());
        Surd {
            radicands: radicands.clone(),
            c,
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, rhs: &Self) -> bool {
        let (a, b) = self.common(rhs);
        a.c == b.c
    }
}

impl Ring for Surd {
    fn zero() -> Self {
        SurdField::rationals().embed(&Rational::zero())
    }
    fn one() -> Self {
        SurdField::rationals().embed(&Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = self.common(rhs);
        Surd {
            radicands: a.radicands,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x.add(y)).collect(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        let (a, b) = self.common(rhs);
        Surd {
            radicands: a.radicands,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x.sub(y)).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = self.common(rhs);
        let n = a.c.len();
        let k = a.radicands.len();
        let mut out = vec![Rational::zero(); n];
        for (s, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, y) in b.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let both = s & t;
                let factor = (0..k)
                    .filter(|i| both >> i & 1 == 1)
                    .fold(x.mul(y), |acc, i| acc.mul(&a.radicands[i]));
                out[s ^ t] = out[s ^ t].add(&factor);
            }
        }
        Surd {
            radicands: a.radicands,
            c: out,
        }
    }
    fn neg(&self) -> Self {
        Surd {
            radicands: self.radicands.clone(),
            c: self.c.iter().map(Ring::neg).collect(),
        }
    }
    fn from_rational(q: &Rational) -> Self {
        SurdField::rationals().embed(q)
    }
}

impl Field for Surd {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.radicands.is_empty() {
            return Some(SurdField::rationals().embed(&self.c[0].inv()?));
        }
        // (a + b√r)⁻¹ = (a − b√r) / (a² − r b²)
        let (a, b, r) = self.split_last();
        let norm = a.mul(&a).sub(&b.mul(&b).mul(&Surd::from_rational(&r)));
        let ninv = norm.inv()?;
        let na = a.mul(&ninv);
        let nb = b.neg().mul(&ninv);
        let sub = &self.radicands;
        Some(Self::join_last(
            &na.lift_to(&Arc::new(sub[..sub.len() - 1].to_vec())),
            &nb.lift_to(&Arc::new(sub[..sub.len() - 1].to_vec())),
            sub,
        ))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.radicands.len();
        let mut parts = Vec::new();
        for (mask, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let roots: Vec<String> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| format!("sqrt({})", rational_to_string(&self.radicands[i])))
                .collect();
            if roots.is_empty() {
                parts.push(rational_to_string(c));
            } else {
                parts.push(format!("{}*{}", rational_to_string(c), roots.join("*")));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
