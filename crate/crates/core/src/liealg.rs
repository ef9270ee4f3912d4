//! Matrix realizations of the classical simple Lie algebras.
//!
//! Types B, C, D preserve a form with a monomial Gram matrix `J` supported on
//! the anti-diagonal, `J[k][N-1-k] = c_k`, and consist of the `M` with
//! `MJ + JMᵀ = 0`. Entrywise this reads `c_q M[i][q] + c_i M[σq][σi] = 0` with
//! `σk = N-1-k`, so each basis element is supported on one position and its
//! mirror image. Type A is realized as trace-zero matrices.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, Field, Matrix, Rational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            other => Err(Error::Domain(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let min = match family {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
        };
        if rank < min {
            return Err(Error::Domain(format!(
                "{family}{rank}: rank must be at least {min}"
            )));
        }
        Ok(Self { family, rank })
    }

    /// Size of the standard representation.
    pub fn std_dim(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n + 1,
            Family::B => 2 * n + 1,
            Family::C | Family::D => 2 * n,
        }
    }

    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
        }
    }

    pub fn dim(&self) -> usize {
        self.rank + self.root_count()
    }

    /// Fundamental degrees, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let n = self.rank;
        let mut d: Vec<usize> = match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
            Family::D => (1..n).map(|i| 2 * i).chain([n]).collect(),
        };
        d.sort_unstable();
        d
    }

    /// Marks `a_0, …, a_n` of the affine Dynkin diagram.
    pub fn affine_marks(&self) -> Vec<usize> {
        let n = self.rank;
        match self.family {
            Family::A => vec![1; n + 1],
            Family::B => {
                let mut m = vec![2; n + 1];
                m[0] = 1;
                m[1] = 1;
                m
            }
            Family::C => {
                let mut m = vec![2; n + 1];
                m[0] = 1;
                m[n] = 1;
                m
            }
            Family::D => {
                let mut m = vec![2; n + 1];
                for i in [0, 1, n - 1, n] {
                    m[i] = 1;
                }
                m
            }
        }
    }

    /// Coxeter number.
    pub fn coxeter_number(&self) -> usize {
        self.root_count() / self.rank
    }

    /// The Langlands dual type (B and C swap).
    pub fn dual(&self) -> LieType {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        };
        LieType {
            family,
            rank: self.rank,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A basis element: `coeff_rep · E[rep] + coeff_mirror · E[mirror]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    /// Position whose entry is the coordinate of this element.
    pub rep: (usize, usize),
    /// Remaining support, with coefficients.
    pub partner: Option<((usize, usize), Rational)>,
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    lie_type: LieType,
    n: usize,
    /// Anti-diagonal Gram coefficients `c_k` (empty for type A).
    gram_diag: Vec<Rational>,
    basis: Vec<BasisElement>,
}

/// Build the realization of a classical type.
pub fn build_algebra(t: LieType) -> Result<LieAlgebra> {
    let t = LieType::new(t.family, t.rank)?;
    let n = t.std_dim();
    let rank = t.rank;
    let gram_diag: Vec<Rational> = match t.family {
        Family::A => Vec::new(),
        Family::C => (0..n).map(|k| int(if k < rank { 1 } else { -1 })).collect(),
        Family::B => (0..n).map(|k| int(if k == rank { 2 } else { 1 })).collect(),
        Family::D => vec![int(1); n],
    };
    let mut basis = Vec::new();
    if t.family == Family::A {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    basis.push(BasisElement {
                        rep: (i, j),
                        partner: None,
                    });
                } else if i + 1 < n {
                    basis.push(BasisElement {
                        rep: (i, i),
                        partner: Some(((n - 1, n - 1), int(-1))),
                    });
                }
            }
        }
    } else {
        let s = |k: usize| n - 1 - k;
        for i in 0..n {
            for q in 0..n {
                let mirror = (s(q), s(i));
                if mirror == (i, q) {
                    if (gram_diag[q].add(&gram_diag[i])).is_zero() {
                        basis.push(BasisElement {
                            rep: (i, q),
                            partner: None,
                        });
                    }
                } else if (i, q) < mirror {
                    let coeff = gram_diag[q].div(&gram_diag[i]).expect("nonzero").neg();
                    basis.push(BasisElement {
                        rep: (i, q),
                        partner: Some((mirror, coeff)),
                    });
                }
            }
        }
    }
    let alg = LieAlgebra {
        lie_type: t,
        n,
        gram_diag,
        basis,
    };
    if alg.basis.len() != t.dim() {
        return Err(Error::Consistency(format!(
            "{t}: built {} basis elements, expected {}",
            alg.basis.len(),
            t.dim()
        )));
    }
    Ok(alg)
}

impl LieAlgebra {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn family(&self) -> Family {
        self.lie_type.family
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn std_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn root_count(&self) -> usize {
        self.lie_type.root_count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.lie_type.degrees()
    }

    pub fn affine_marks(&self) -> Vec<usize> {
        self.lie_type.affine_marks()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Gram matrix, `None` for type A.
    pub fn gram(&self) -> Option<Matrix<Rational>> {
        if self.gram_diag.is_empty() {
            return None;
        }
        let n = self.n;
        Some(Matrix::from_fn(n, n, |i, j| {
            if j == n - 1 - i {
                self.gram_diag[i].clone()
            } else {
                Rational::zero()
            }
        }))
    }

    pub fn basis_matrix<T: Ring>(&self, b: usize) -> Matrix<T> {
        let e = &self.basis[b];
        let mut m: Matrix<T> = Matrix::zeros(self.n, self.n);
        m.set(e.rep.0, e.rep.1, T::one());
        if let Some(((i, j), c)) = &e.partner {
            m.set(*i, *j, T::from_rational(c));
        }
        m
    }

    pub fn basis_matrices(&self) -> Vec<Matrix<Rational>> {
        (0..self.dim()).map(|b| self.basis_matrix(b)).collect()
    }

    /// Linear combination `Σ coords[b] · E_b`.
    pub fn from_coords<T: Ring>(&self, coords: &[T]) -> Matrix<T> {
        assert_eq!(coords.len(), self.dim());
        let mut m: Matrix<T> = Matrix::zeros(self.n, self.n);
        for (e, c) in self.basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            let (i, j) = e.rep;
            let v = m.get(i, j).add(c);
            m.set(i, j, v);
            if let Some(((i, j), k)) = &e.partner {
                let v = m.get(*i, *j).add(&c.mul(&T::from_rational(k)));
                m.set(*i, *j, v);
            }
        }
        m
    }

    fn check_size<T>(&self, m: &Matrix<T>) -> Result<()>
    where
        T: Ring,
    {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} (standard dimension {})",
                m.rows(),
                m.cols(),
                self.lie_type,
                self.n
            )));
        }
        Ok(())
    }

    /// The defining relation evaluated at `m`: `MJ + JMᵀ` for B/C/D, the
    /// 1×1 matrix holding the trace for A. Zero iff `m` lies in the algebra.
    pub fn relation<T: Ring>(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_size(m)?;
        if self.gram_diag.is_empty() {
            return Ok(Matrix::from_fn(1, 1, |_, _| m.trace()));
        }
        let j: Matrix<T> = self.gram().expect("gram").map(T::from_rational);
        Ok(m.mul(&j).add(&j.mul(&m.transpose())))
    }

    pub fn contains<T: Ring>(&self, m: &Matrix<T>) -> Result<bool> {
        Ok(self.relation(m)?.is_zero())
    }

    /// Coordinates of `m` on the stored basis; `m` must lie in the algebra.
    pub fn coords<T: Ring>(&self, m: &Matrix<T>) -> Result<Vec<T>> {
        if !self.contains(m)? {
            return Err(Error::Domain(format!(
                "matrix does not lie in {}",
                self.lie_type
            )));
        }
        Ok(self.coords_unchecked(m))
    }

    pub(crate) fn coords_unchecked<T: Ring>(&self, m: &Matrix<T>) -> Vec<T> {
        self.basis
            .iter()
            .map(|e| m.get(e.rep.0, e.rep.1).clone())
            .collect()
    }

    /// The element of the algebra with the prescribed entries. Each entry
    /// may sit at either position of a basis element; entries must agree.
    pub fn element_from_entries(
        &self,
        entries: &[((usize, usize), Rational)],
    ) -> Result<Matrix<Rational>> {
        let mut coords: Vec<Option<Rational>> = vec![None; self.dim()];
        for ((i, j), v) in entries {
            let found = self.basis.iter().enumerate().find_map(|(b, e)| {
                if e.rep == (*i, *j) {
                    Some((b, v.clone()))
                } else {
                    match &e.partner {
                        Some((p, c)) if *p == (*i, *j) => {
                            Some((b, v.div(c).expect("nonzero partner coefficient")))
                        }
                        _ => None,
                    }
                }
            });
            match found {
                Some((b, c)) => match &coords[b] {
                    Some(prev) if *prev != c => {
                        return Err(Error::Domain(format!(
                            "conflicting entries for the basis element at {:?}",
                            self.basis[b].rep
                        )))
                    }
                    _ => coords[b] = Some(c),
                },
                None if v.is_zero() => {}
                None => {
                    return Err(Error::Domain(format!(
                        "entry ({i},{j}) is zero on {}",
                        self.lie_type
                    )))
                }
            }
        }
        let coords: Vec<Rational> = coords
            .into_iter()
            .map(|c| c.unwrap_or_else(Rational::zero))
            .collect();
        Ok(self.from_coords(&coords))
    }

    /// Matrix of `ad X = [X, ·]` on the stored basis (column `b` holds the
    /// coordinates of `[X, E_b]`).
    pub fn ad_matrix<T: Ring>(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if !self.contains(x)? {
            return Err(Error::Domain(format!(
                "ad of a matrix outside {}",
                self.lie_type
            )));
        }
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for b in 0..d {
            let e: Matrix<T> = self.basis_matrix(b);
            let col = self.coords_unchecked(&x.bracket(&e));
            for (r, v) in col.into_iter().enumerate() {
                out.set(r, b, v);
            }
        }
        Ok(out)
    }

    /// Whether `g` lies in the group preserving the form (`gJgᵀ = J`),
    /// or has determinant one in type A.
    pub fn group_contains<F: Field>(&self, g: &Matrix<F>) -> Result<bool> {
        self.check_size(g)?;
        match self.gram() {
            None => Ok(g.det()? == F::one()),
            Some(j) => {
                let j: Matrix<F> = j.map(F::from_rational);
                Ok(g.mul(&j).mul(&g.transpose()) == j)
            }
        }
    }

    /// Diagonal matrix of the Cartan element with the given free coordinates
    /// `(a_1, …, a_rank)`: `diag(a, 0?, -rev a)` for B/C/D, and
    /// `diag(a_1, …, a_n, -Σa)` for A.
    pub fn cartan_element(&self, a: &[Rational]) -> Matrix<Rational> {
        assert_eq!(a.len(), self.rank());
        let d = match self.family() {
            Family::A => {
                let mut d = a.to_vec();
                d.push(a.iter().fold(Rational::zero(), |acc, x| acc.sub(x)));
                d
            }
            _ => mirrored(a, self.family() == Family::B),
        };
        Matrix::diagonal(&d)
    }
}

/// `(a_1, …, a_n, [0], -a_n, …, -a_1)`.
pub fn mirrored<T: Ring>(a: &[T], center: bool) -> Vec<T> {
    let mut d = a.to_vec();
    if center {
        d.push(T::zero());
    }
    d.extend(a.iter().rev().map(Ring::neg));
    d
}
