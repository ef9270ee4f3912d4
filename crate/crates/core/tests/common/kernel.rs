//! Strategies and property bodies shared by the property suites and the
//! acceptance run.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use theta_forge::exactalg::linalg::bareiss_rank;
use theta_forge::exactalg::{rat, Matrix, MultiPoly, Rational, Ring, UniPoly};

/// Cases per kernel property.
pub const KERNEL_CASES: u32 = 500;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn square(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(small_rational(), n * n)
        .prop_map(move |v| Matrix::from_vec(n, n, v).unwrap())
}

/// Rectangular matrices, half of them forced to low rank by a product.
pub fn rectangular() -> impl Strategy<Value = Matrix<Rational>> {
    (1usize..=5, 1usize..=6, 1usize..=5, any::<bool>()).prop_flat_map(|(r, c, k, low)| {
        let a = prop::collection::vec(small_rational(), r * k);
        let b = prop::collection::vec(small_rational(), k * c);
        let full = prop::collection::vec(small_rational(), r * c);
        (a, b, full).prop_map(move |(a, b, full)| {
            if low {
                let a = Matrix::from_vec(r, k, a).unwrap();
                let b = Matrix::from_vec(k, c, b).unwrap();
                a.mul(&b)
            } else {
                Matrix::from_vec(r, c, full).unwrap()
            }
        })
    })
}

/// A polynomial in two variables with small integer coefficients.
pub fn poly2() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..=2, 0u32..=2), -3i64..=3), 0..4).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(), |acc, ((i, j), c)| {
            acc.add(&MultiPoly::monomial(vec![i, j], Rational::from_int(c)))
        })
    })
}

/// `c · Π (x − r_i)` together with the number of distinct roots.
pub fn split_poly() -> impl Strategy<Value = (UniPoly, usize, usize)> {
    (prop::collection::vec(-3i64..=3, 1..=4), 1i64..=5).prop_map(|(roots, c)| {
        let p = roots.iter().fold(UniPoly::constant(rat(c, 1)), |acc, &r| {
            acc.mul(&UniPoly::from_ints(&[-r, 1]))
        });
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        (p, roots.len(), distinct.len())
    })
}

pub type Outcome = Result<(), TestCaseError>;

pub fn cayley_hamilton(m: Matrix<Rational>) -> Outcome {
    let c = m.charpoly_coeffs().unwrap();
    prop_assert!(m.eval_poly(&c).is_zero());
    prop_assert_eq!(c.last().cloned(), Some(Rational::one()));
    prop_assert_eq!(c[m.rows() - 1].clone(), m.trace().neg());
    Ok(())
}

pub fn rank_nullity(m: Matrix<Rational>) -> Outcome {
    let ker = m.nullspace();
    prop_assert_eq!(m.rank() + ker.len(), m.cols());
    prop_assert_eq!(bareiss_rank(&m), m.rank());
    prop_assert_eq!(m.transpose().rank(), m.rank());
    for v in &ker {
        prop_assert!(m.mul_vec(v).iter().all(Ring::is_zero));
    }
    Ok(())
}

pub fn squarefree_coherence((p, deg, distinct): (UniPoly, usize, usize), d: i64) -> Outcome {
    prop_assert_eq!(p.degree(), Some(deg));
    prop_assert_eq!(p.is_squarefree().unwrap(), distinct == deg);
    prop_assert!(!p.mul(&p).is_squarefree().unwrap());
    prop_assert_eq!(p.squarefree_part().unwrap().degree(), Some(distinct));
    // an irreducible quadratic factor adds two new simple roots
    let q = p.mul(&UniPoly::from_ints(&[2 * d * d + 1, 0, 1]));
    prop_assert_eq!(q.is_squarefree().unwrap(), distinct == deg);
    Ok(())
}

pub fn specialization_commutes(entries: Vec<MultiPoly>, x: Rational, y: Rational) -> Outcome {
    let m = Matrix::from_vec(3, 3, entries).unwrap();
    let symbolic = m.charpoly_coeffs().unwrap();
    let point = [x, y];
    let specialized: Vec<Rational> = symbolic.iter().map(|c| c.eval(&point)).collect();
    let direct = m.map(|e| e.eval(&point)).charpoly_coeffs().unwrap();
    prop_assert_eq!(specialized, direct);
    Ok(())
}
