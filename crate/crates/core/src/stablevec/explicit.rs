//! Hand-built stable vectors for type B gradings with `s_0 = 0`, and the
//! six-parameter family in `so_7`.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::exactalg::{int, Matrix, Rational, Ring};
use crate::grading::{kac_grading, stable_kac_coords, GradedVector, Grading};
use crate::liealg::{build_algebra, Family, LieType};

use super::certify;

#[derive(Clone, Debug, PartialEq)]
pub enum ExplicitFamily {
    /// `so_{2n+1}`, `k = 2n/m > 2` even.
    BKEven { n: usize, k: usize },
    /// `so_{2n+1}`, `k = 2n/m > 1` odd.
    BKOdd { n: usize, k: usize },
    /// The `so_7` family at rational `b_1..b_6`.
    So7Rational([Rational; 6]),
}

impl ExplicitFamily {
    /// Identifiers accepted by [`ExplicitFamily::parse`].
    pub const IDS: [&'static str; 4] = ["B-k-even", "B-k-odd", "SO7-rational", "SO7-symbolic"];

    /// `B-k-even` / `B-k-odd` take `n,k`; `SO7-rational` takes six rationals.
    /// `SO7-symbolic` has no rational form and is rejected here; use
    /// [`so7_matrix`] over polynomials instead.
    pub fn parse(id: &str, params: &[Rational]) -> Result<Self> {
        let small = |q: &Rational| -> Result<usize> {
            if !q.is_integer() || q < &Rational::zero() {
                return Err(Error::Domain(format!("expected a natural number, got {q}")));
            }
            q.to_integer()
                .try_into()
                .map_err(|_| Error::Domain(format!("{q} is too large")))
        };
        match id {
            "B-k-even" | "B-k-odd" => {
                let [n, k] = params else {
                    return Err(Error::Domain(format!("{id} takes two parameters n,k")));
                };
                let (n, k) = (small(n)?, small(k)?);
                Ok(if id == "B-k-even" {
                    Self::BKEven { n, k }
                } else {
                    Self::BKOdd { n, k }
                })
            }
            "SO7-rational" => {
                let b: [Rational; 6] = params.to_vec().try_into().map_err(|_| {
                    Error::Domain("SO7-rational takes six parameters b1..b6".into())
                })?;
                Ok(Self::So7Rational(b))
            }
            "SO7-symbolic" => Err(Error::Domain(
                "SO7-symbolic has polynomial entries; build it with so7_matrix".into(),
            )),
            _ => Err(Error::Domain(format!(
                "unknown family {id:?}; expected one of {}",
                Self::IDS.join(", ")
            ))),
        }
    }

    /// The type B rank and order `m` of the grading the vector lives in.
    fn shape(&self) -> Result<(usize, usize)> {
        match *self {
            Self::BKEven { n, k } | Self::BKOdd { n, k } => {
                let even = matches!(self, Self::BKEven { .. });
                if k < 2 || n < 2 || n % k != 0 || (k % 2 == 0) != even || (even && k == 2) {
                    return Err(Error::Domain(format!(
                        "{self}: need k | n with k {}",
                        if even { "even and > 2" } else { "odd and > 1" }
                    )));
                }
                Ok((n, 2 * n / k))
            }
            Self::So7Rational(_) => Ok((3, 2)),
        }
    }
}

impl fmt::Display for ExplicitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BKEven { n, k } => write!(f, "B-k-even(n={n}, k={k})"),
            Self::BKOdd { n, k } => write!(f, "B-k-odd(n={n}, k={k})"),
            Self::So7Rational(b) => {
                let parts: Vec<String> = b.iter().map(|q| q.to_string()).collect();
                write!(f, "SO7-rational({})", parts.join(","))
            }
        }
    }
}

/// The `so_7` matrix with parameters `b_1..b_6`, over any ring.
pub fn so7_matrix<T: Ring>(b: &[T]) -> Matrix<T> {
    assert_eq!(b.len(), 6, "six parameters");
    let z = T::zero;
    let one = T::one;
    let two = T::from_rational(&int(2));
    let b = |i: usize| b[i - 1].clone();
    let rows = vec![
        vec![z(), z(), one(), z(), z(), z(), z()],
        vec![z(), z(), z(), z(), one(), z(), z()],
        vec![b(6).neg(), b(5).neg(), z(), z(), z(), one().neg(), z()],
        vec![two.mul(&b(4)).neg(), two.mul(&b(3)).neg(), z(), z(), z(), z(), z()],
        vec![b(2).neg(), b(1).neg(), z(), z(), z(), z(), one().neg()],
        vec![z(), z(), b(1), b(3), b(5), z(), z()],
        vec![z(), z(), b(2), b(4), b(6), z(), z()],
    ];
    Matrix::from_rows(rows)
}

/// Entries of `m` placed at the block `rows × cols`.
fn place(
    out: &mut Vec<((usize, usize), Rational)>,
    rows: &Range<usize>,
    cols: &Range<usize>,
    m: &Matrix<Rational>,
) {
    assert_eq!((m.rows(), m.cols()), (rows.len(), cols.len()), "block shape");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_zero() {
                out.push(((rows.start + i, cols.start + j), m.get(i, j).clone()));
            }
        }
    }
}

/// `r × c` matrix with ones at the listed positions.
fn ones_at(r: usize, c: usize, at: impl IntoIterator<Item = (usize, usize)>) -> Matrix<Rational> {
    let mut m = Matrix::zeros(r, c);
    for (i, j) in at {
        m.set(i, j, Rational::one());
    }
    m
}

fn even_entries(blocks: &[Range<usize>], m: usize, k: usize) -> Vec<((usize, usize), Rational)> {
    let h = m / 2;
    let half = k / 2;
    let mut e = Vec::new();
    let lower_rows = &blocks[m - 1];
    if m == 2 {
        // A_1 = (I, e_1, 0); the lower block keeps (I, 0)ᵗ
        let mut a1 = ones_at(half, k + 1, (0..half).map(|i| (i, i)));
        a1.set(0, half, Rational::one());
        place(&mut e, &blocks[0], &blocks[1], &a1);
        let low = ones_at(k + 1, half, (0..half).map(|i| (i, i)));
        place(&mut e, lower_rows, &blocks[0], &low);
        return e;
    }
    place(&mut e, &blocks[0], &blocks[1], &ones_at(half, k, (0..half).map(|i| (i, i))));
    for i in 2..h {
        place(&mut e, &blocks[i - 1], &blocks[i], &Matrix::identity(k));
    }
    let mut ah = ones_at(k, k + 1, (0..k).map(|i| (i, i)));
    ah.set(0, k, Rational::one());
    place(&mut e, &blocks[h - 1], &blocks[h], &ah);
    place(&mut e, lower_rows, &blocks[0], &ones_at(k, half, (0..half).map(|i| (i, i))));
    e
}

fn odd_entries(blocks: &[Range<usize>], m: usize, k: usize) -> Vec<((usize, usize), Rational)> {
    let h = m / 2;
    let up = k.div_ceil(2);
    let down = (k - 1) / 2;
    let mut e = Vec::new();
    place(&mut e, &blocks[0], &blocks[1], &ones_at(up, k, (0..up).map(|i| (i, i))));
    for i in 2..=h {
        place(&mut e, &blocks[i - 1], &blocks[i], &Matrix::identity(k));
    }
    let low = ones_at(
        k,
        up,
        (0..down).map(|r| (r, r + 1)).chain(std::iter::once((k - 1, 0))),
    );
    place(&mut e, &blocks[m - 1], &blocks[0], &low);
    e
}

/// The grading and the certified vector of an explicit family. The
/// vector's stability status records the outcome of the check; it is not
/// assumed.
pub fn explicit_stable(family: &ExplicitFamily) -> Result<(Grading, GradedVector)> {
    let (n, m) = family.shape()?;
    let t = LieType::new(Family::B, n)?;
    let g = kac_grading(&build_algebra(t)?, &stable_kac_coords(t, m)?)?;
    let x = match family {
        ExplicitFamily::So7Rational(b) => so7_matrix(b),
        ExplicitFamily::BKEven { k, .. } | ExplicitFamily::BKOdd { k, .. } => {
            let blocks: Vec<Range<usize>> = g.weight_blocks().into_iter().map(|(_, r)| r).collect();
            let entries = match family {
                ExplicitFamily::BKEven { .. } => even_entries(&blocks, m, *k),
                _ => odd_entries(&blocks, m, *k),
            };
            g.algebra().element_from_entries(&entries)?
        }
    };
    let v = g.split_components(&x)?;
    let (v, _) = certify(&g, v)?;
    Ok((g, v))
}
