//! Gradings of a realization from Kac coordinates.
//!
//! Kac coordinates `s_0..s_n` fix a point `x` of the closed fundamental alcove
//! through `α_i(x) = s_i/m`, `m = Σ a_i s_i`. On the standard representation
//! `x` acts diagonally; the integer-scaled weights `w = m·x` give matrix entry
//! `(i, j)` the degree `w_i − w_j`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, rat, Matrix, Rational, Ring};
use crate::liealg::{mirrored, Family, LieAlgebra, LieType};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KacCoords {
    pub s: Vec<u32>,
}

impl KacCoords {
    pub fn new(s: Vec<u32>) -> Self {
        Self { s }
    }

    /// Parse a comma-separated list such as `1,0,1`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Domain(format!("bad Kac coordinate {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { s })
    }

    /// `m = Σ a_i s_i` for the given marks.
    pub fn order(&self, marks: &[usize]) -> usize {
        self.s
            .iter()
            .zip(marks)
            .map(|(&s, &a)| s as usize * a)
            .sum()
    }

    pub fn s0(&self) -> u32 {
        self.s[0]
    }
}

impl fmt::Display for KacCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.s.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Grading {
    algebra: LieAlgebra,
    kac: KacCoords,
    m: usize,
    weights: Vec<Rational>,
    basis_degrees: Vec<i64>,
    pieces: BTreeMap<i64, Vec<usize>>,
}

/// Solve `α_i(x) = s_i/m` for the coordinates of `x` on the standard torus.
fn alcove_point(t: LieType, s: &[u32], m: usize) -> Vec<Rational> {
    let n = t.rank;
    let q = |i: usize| rat(s[i] as i64, m as i64);
    let mut x = vec![Rational::zero(); n];
    match t.family {
        Family::A => {
            // n+1 coordinates, consecutive differences s_i/m, summing to zero
            let mut y = vec![Rational::zero(); n + 1];
            for i in (0..n).rev() {
                y[i] = y[i + 1].add(&q(i + 1));
            }
            let mean = y
                .iter()
                .fold(Rational::zero(), |a, b| a.add(b))
                .mul(&rat(1, n as i64 + 1));
            return y.iter().map(|v| v.sub(&mean)).collect();
        }
        Family::B => {
            x[n - 1] = q(n);
        }
        Family::C => {
            x[n - 1] = q(n).mul(&rat(1, 2));
        }
        Family::D => {
            x[n - 1] = q(n).sub(&q(n - 1)).mul(&rat(1, 2));
            x[n - 2] = q(n).add(&q(n - 1)).mul(&rat(1, 2));
        }
    }
    let top = if t.family == Family::D { n - 2 } else { n - 1 };
    for i in (0..top).rev() {
        x[i] = x[i + 1].add(&q(i + 1));
    }
    x
}

/// Grading of `algebra` attached to the Kac coordinates.
pub fn kac_grading(algebra: &LieAlgebra, kac: &KacCoords) -> Result<Grading> {
    let t = algebra.lie_type();
    if kac.s.len() != t.rank + 1 {
        return Err(Error::Domain(format!(
            "{t} needs {} Kac coordinates, got {}",
            t.rank + 1,
            kac.s.len()
        )));
    }
    if kac.s.iter().all(|&s| s == 0) {
        return Err(Error::Domain("Kac coordinates are all zero".into()));
    }
    let m = kac.order(&algebra.affine_marks());
    let x = alcove_point(t, &kac.s, m);
    let scale = int(m as i64);
    let weights: Vec<Rational> = match t.family {
        Family::A => x.iter().map(|v| v.mul(&scale)).collect(),
        f => mirrored(
            &x.iter().map(|v| v.mul(&scale)).collect::<Vec<_>>(),
            f == Family::B,
        ),
    };
    let mut basis_degrees = Vec::with_capacity(algebra.dim());
    let mut pieces: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (b, e) in algebra.basis().iter().enumerate() {
        let (i, j) = e.rep;
        let d = weights[i].sub(&weights[j]);
        if !d.is_integer() {
            return Err(Error::Consistency(format!(
                "non-integral degree {d} at entry ({i},{j})"
            )));
        }
        let d: i64 = d.to_integer().try_into().expect("small degree");
        if d.unsigned_abs() as usize > m {
            return Err(Error::Consistency(format!(
                "degree {d} outside [-{m}, {m}]: Kac point not in the alcove"
            )));
        }
        basis_degrees.push(d);
        pieces.entry(d).or_default().push(b);
    }
    let g = Grading {
        algebra: algebra.clone(),
        kac: kac.clone(),
        m,
        weights,
        basis_degrees,
        pieces,
    };
    let total: usize = g.pieces.values().map(Vec::len).sum();
    if total != algebra.dim() {
        return Err(Error::Consistency("piece dimensions do not add up".into()));
    }
    Ok(g)
}

/// The tabulated stable Kac coordinates of order `m`.
pub fn stable_kac_coords(t: LieType, m: usize) -> Result<KacCoords> {
    let n = t.rank;
    let unsupported = || {
        Error::Unsupported(format!(
            "no built-in stable Kac coordinates for {t} of order {m}; supply them \
             explicitly (see the stable-grading tables of Reeder, Levy, Yu and Gross)"
        ))
    };
    let mut s = vec![0u32; n + 1];
    match t.family {
        Family::A if m == n + 1 => s.fill(1),
        Family::C => {
            if m == 0 || !m.is_multiple_of(2) || !(2 * n).is_multiple_of(m) {
                return Err(unsupported());
            }
            let k = 2 * n / m;
            if !n.is_multiple_of(k) {
                return Err(unsupported());
            }
            for r in 0..=n / k {
                s[k * r] = 1;
            }
        }
        Family::B if m == 2 * n => s.fill(1),
        Family::B if m == n && n.is_multiple_of(2) => {
            s[0] = 1;
            for i in (1..n).step_by(2) {
                s[i] = 1;
            }
        }
        Family::B => {
            if m == 0 || !m.is_multiple_of(2) || !(2 * n).is_multiple_of(m) {
                return Err(unsupported());
            }
            let k = 2 * n / m;
            if k <= 1 || !n.is_multiple_of(k) || k == 2 {
                return Err(unsupported());
            }
            for r in 1..=n / k {
                let i = if k.is_multiple_of(2) {
                    k * r - k / 2
                } else {
                    k * r - (k - 1) / 2
                };
                s[i] = 1;
            }
        }
        _ => return Err(unsupported()),
    }
    let kac = KacCoords::new(s);
    debug_assert_eq!(kac.order(&t.affine_marks()), m);
    Ok(kac)
}

/// Orders `m` for which [`stable_kac_coords`] has an entry.
pub fn supported_orders(t: LieType) -> Vec<usize> {
    (1..=2 * t.rank + 1)
        .filter(|&m| stable_kac_coords(t, m).is_ok())
        .collect()
}

/// Stability status of a graded vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stability {
    Unchecked,
    Stable,
    Unstable,
}

/// An element `X = X₁ + X_{1−m}` of the degree-one piece.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedVector<T: Ring = Rational> {
    pub matrix: Matrix<T>,
    pub component_1: Matrix<T>,
    pub component_1m: Matrix<T>,
    pub stability: Stability,
}

/// Index ranges of the standard basis sharing one weight, highest first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightBlock {
    pub weight: String,
    pub start: usize,
    pub len: usize,
}

impl Grading {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn kac(&self) -> &KacCoords {
        &self.kac
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// `λ̌ = m·x` on the standard representation.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn basis_degree(&self, b: usize) -> i64 {
        self.basis_degrees[b]
    }

    /// Degree of the matrix entry `(i, j)`, when integral.
    pub fn entry_degree(&self, i: usize, j: usize) -> Option<i64> {
        let d = self.weights[i].sub(&self.weights[j]);
        d.is_integer().then(|| d.to_integer().try_into().expect("small"))
    }

    /// Basis indices of `g(k)`.
    pub fn piece(&self, k: i64) -> &[usize] {
        self.pieces.get(&k).map_or(&[], Vec::as_slice)
    }

    /// Dimensions of the nonzero pieces `g(k)`.
    pub fn piece_dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    /// Basis indices of `g_i = ⊕_{k ≡ i mod m} g(k)`.
    pub fn zm_piece(&self, i: i64) -> Vec<usize> {
        let m = self.m as i64;
        self.pieces
            .iter()
            .filter(|(&k, _)| (k - i).rem_euclid(m) == 0)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    pub fn zm_piece_dims(&self) -> BTreeMap<i64, usize> {
        (0..self.m as i64)
            .map(|i| (i, self.zm_piece(i).len()))
            .collect()
    }

    /// Basis indices of `⊕_{k ≥ 1} g(k)`.
    pub fn positive_part(&self) -> Vec<usize> {
        self.pieces
            .range(1..)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    /// Keep the entries of `x` whose degree satisfies `keep`.
    pub fn project<T: Ring>(&self, x: &Matrix<T>, keep: impl Fn(i64) -> bool) -> Matrix<T> {
        let n = x.rows();
        Matrix::from_fn(n, n, |i, j| match self.entry_degree(i, j) {
            Some(d) if keep(d) => x.get(i, j).clone(),
            _ => T::zero(),
        })
    }

    /// Split `x ∈ g₁` as `X₁ + X_{1−m}`.
    pub fn split_components<T: Ring>(&self, x: &Matrix<T>) -> Result<GradedVector<T>> {
        if !self.algebra.contains(x)? {
            return Err(Error::Domain("vector is not in the Lie algebra".into()));
        }
        let m = self.m as i64;
        let one_m = 1 - m;
        let c1 = self.project(x, |d| d == 1);
        let c1m = self.project(x, |d| d == one_m);
        let residual = x.sub(&c1).sub(&c1m);
        if !residual.is_zero() {
            let mut bad = Vec::new();
            for i in 0..x.rows() {
                for j in 0..x.cols() {
                    if !residual.get(i, j).is_zero() {
                        bad.push(format!(
                            "({i},{j}) degree {:?}",
                            self.entry_degree(i, j)
                        ));
                    }
                }
            }
            return Err(Error::Domain(format!(
                "vector has components outside g(1) + g({one_m}): {}",
                bad.join(", ")
            )));
        }
        Ok(GradedVector {
            matrix: x.clone(),
            component_1: c1,
            component_1m: c1m,
            stability: Stability::Unchecked,
        })
    }

    /// Contiguous runs of equal weight on the standard representation.
    pub fn weight_blocks(&self) -> Vec<(Rational, std::ops::Range<usize>)> {
        let mut out: Vec<(Rational, std::ops::Range<usize>)> = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            match out.last_mut() {
                Some((v, r)) if v == w => r.end = i + 1,
                _ => out.push((w.clone(), i..i + 1)),
            }
        }
        out
    }

    /// Whether `g` is block diagonal for the weight decomposition, i.e. lies
    /// in the centralizer of `λ̌`.
    pub fn preserves_weights<T: Ring>(&self, g: &Matrix<T>) -> bool {
        let n = g.rows();
        (0..n).all(|i| {
            (0..n).all(|j| self.weights[i] == self.weights[j] || g.get(i, j).is_zero())
        })
    }

    pub fn summary(&self) -> GradingSummary {
        GradingSummary {
            lie_type: self.algebra.lie_type().to_string(),
            kac: self.kac.to_string(),
            order: self.m,
            weights: self
                .weights
                .iter()
                .map(crate::exactalg::ring::rational_to_string)
                .collect(),
            piece_dims: self.piece_dims(),
            zm_piece_dims: self.zm_piece_dims(),
            pieces: self.pieces.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingSummary {
    pub lie_type: String,
    pub kac: String,
    pub order: usize,
    pub weights: Vec<String>,
    pub piece_dims: BTreeMap<i64, usize>,
    pub zm_piece_dims: BTreeMap<i64, usize>,
    pub pieces: BTreeMap<i64, Vec<usize>>,
}

/// The Kac coordinates of the parabolic on the same algebra whose Levi has
/// the simple roots of the Langlands-dual stable grading of order `m`.
///
/// When the grading has `s_0 = 0` its nilradical is not the one that governs
/// the residue; the dual-type grading of the same order has `s_0 > 0` in the
/// tabulated B/C cases, and its support on the finite nodes names the
/// parabolic. Self-dual families reuse their own support.
pub fn dual_parabolic_kac(g: &Grading) -> Result<KacCoords> {
    let t = g.algebra().lie_type();
    let support: Vec<u32> = if g.kac().s0() > 0 {
        g.kac().s.clone()
    } else {
        match t.family {
            Family::B | Family::C => {
                let dual = stable_kac_coords(t.dual(), g.order())?;
                if dual.s0() == 0 {
                    return Err(Error::Unsupported(format!(
                        "dual grading of {} has s_0 = 0 as well",
                        t.dual()
                    )));
                }
                dual.s
            }
            _ => g.kac().s.clone(),
        }
    };
    let mut s: Vec<u32> = support.iter().map(|&v| u32::from(v > 0)).collect();
    s[0] = 0;
    if s.iter().all(|&v| v == 0) {
        // no finite node in the support: the parabolic is the whole group
        s[0] = 1;
    }
    Ok(KacCoords::new(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_algebra;

    fn grading(f: Family, n: usize, s: &[u32]) -> Grading {
        let l = build_algebra(LieType::new(f, n).unwrap()).unwrap();
        kac_grading(&l, &KacCoords::new(s.to_vec())).unwrap()
    }

    fn dims(pairs: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn c2_order_two() {
        let g = grading(Family::C, 2, &[1, 0, 1]);
        assert_eq!(g.order(), 2);
        assert_eq!(g.piece_dims(), dims(&[(-1, 3), (0, 4), (1, 3)]));
        assert_eq!(g.zm_piece(1).len(), 6);
        assert_eq!(
            g.weights(),
            &[rat(1, 2), rat(1, 2), rat(-1, 2), rat(-1, 2)]
        );
    }

    #[test]
    fn b4_order_four() {
        let g = grading(Family::B, 4, &[1, 1, 0, 1, 0]);
        assert_eq!(g.order(), 4);
        let w: Vec<Rational> = [2, 1, 1, 0, 0, 0, -1, -1, -2].iter().map(|&v| int(v)).collect();
        assert_eq!(g.weights(), w.as_slice());
        // g(1) = A1 (1x2) + A2 (2x3) together with their mirrors
        assert_eq!(g.piece(1).len(), 2 + 6);
    }

    #[test]
    fn trivial_grading() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::C, 2), (Family::D, 4)] {
            let mut s = vec![0; n + 1];
            s[0] = 1;
            let g = grading(f, n, &s);
            assert_eq!(g.order(), 1);
            assert_eq!(g.piece_dims(), dims(&[(0, g.algebra().dim())]));
        }
    }

    #[test]
    fn sl7_order_three() {
        let g = grading(Family::A, 6, &[1, 0, 0, 1, 1, 0, 0]);
        assert_eq!(g.order(), 3);
        assert_eq!(g.piece(1).len(), 6);
        assert_eq!(g.piece(2).len(), 9);
    }

    #[test]
    fn stable_coordinates_table() {
        let c2 = LieType::new(Family::C, 2).unwrap();
        let b4 = LieType::new(Family::B, 4).unwrap();
        assert_eq!(stable_kac_coords(c2, 2).unwrap().s, vec![1, 0, 1]);
        assert_eq!(stable_kac_coords(b4, 4).unwrap().s, vec![1, 1, 0, 1, 0]);
        assert_eq!(stable_kac_coords(b4, 2).unwrap().s, vec![0, 0, 1, 0, 0]);
        let b3 = LieType::new(Family::B, 3).unwrap();
        assert_eq!(stable_kac_coords(b3, 2).unwrap().s, vec![0, 0, 1, 0]);
        assert!(matches!(
            stable_kac_coords(LieType::new(Family::D, 4).unwrap(), 2),
            Err(Error::Unsupported(_))
        ));
        assert!(stable_kac_coords(c2, 3).is_err());
    }

    #[test]
    fn coxeter_gradings_have_cartan_degree_zero() {
        for (f, n) in [(Family::B, 3), (Family::C, 3), (Family::A, 4)] {
            let t = LieType::new(f, n).unwrap();
            let g = grading(f, n, &vec![1; n + 1]);
            assert_eq!(g.order(), t.coxeter_number());
            assert_eq!(g.piece(0).len(), n);
        }
    }

    #[test]
    fn bracket_respects_degrees() {
        let g = grading(Family::B, 4, &[1, 1, 0, 1, 0]);
        let l = g.algebra();
        for (&j, us) in &g.pieces {
            for (&k, vs) in &g.pieces {
                let u: Matrix<Rational> = l.basis_matrix(us[0]);
                let v: Matrix<Rational> = l.basis_matrix(*vs.last().unwrap());
                let c = u.bracket(&v);
                assert_eq!(g.project(&c, |d| d == j + k), c);
            }
        }
    }

    #[test]
    fn split_rejects_outside_vectors() {
        let g = grading(Family::C, 2, &[1, 0, 1]);
        let h = g.algebra().cartan_element(&[int(1), int(2)]);
        assert!(g.split_components(&h).is_err());
    }
}
