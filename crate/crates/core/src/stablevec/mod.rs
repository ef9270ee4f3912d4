//! Stability of graded vectors: certification, seeded sampling,
//! normalization to canonical forms and the explicit families.

mod explicit;
mod normalize;

pub use explicit::{explicit_stable, so7_matrix, ExplicitFamily};
pub use normalize::{canonical_charpoly, canonical_x1, normalize, NormalizedVector};

use rand::{RngExt, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Rational, Ring, UniPoly};
use crate::grading::{GradedVector, Grading, Stability};
use crate::liealg::Family;

/// Name of the generator behind every seeded draw, printed in reports.
pub const PRNG_NAME: &str = "xoshiro256++ (rand_xoshiro 0.8, seed_from_u64)";

pub type Rng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> Rng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Which zero-eigenvalue pattern a type D vector showed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroEigenvalues {
    None,
    One,
    Two,
    Other(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityCertificate {
    pub rss_by_std: bool,
    pub rss_by_ad: bool,
    pub theta_fixed_centralizer_dim: usize,
    pub ad_nullity: usize,
    pub zero_eigenvalues: ZeroEigenvalues,
    pub charpoly: String,
    pub stable: bool,
}

/// Characteristic polynomial of a rational matrix.
pub fn charpoly(x: &Matrix<Rational>) -> Result<UniPoly> {
    Ok(UniPoly::new(x.charpoly_coeffs()?))
}

/// Standard-representation regular semisimplicity test by family.
pub fn rss_by_std(family: Family, p: &UniPoly) -> Result<bool> {
    let z = p.zero_root_multiplicity();
    let q = p.shift_down(z);
    let sqf = q.is_squarefree()?;
    Ok(match family {
        Family::A => p.is_squarefree()?,
        Family::C => z == 0 && sqf,
        Family::B => z == 1 && sqf,
        Family::D => (z == 0 || z == 2) && sqf,
    })
}

/// Whether `x` is semisimple: the squarefree part of its characteristic
/// polynomial annihilates it.
pub fn is_semisimple(x: &Matrix<Rational>) -> Result<bool> {
    let p = charpoly(x)?;
    let r = p.squarefree_part()?;
    Ok(x.eval_poly(r.coeffs()).is_zero())
}

/// Certify `v` for the grading `g`.
pub fn is_stable(g: &Grading, v: &GradedVector) -> Result<StabilityCertificate> {
    let l = g.algebra();
    let x = &v.matrix;
    g.split_components(x)?;
    let p = charpoly(x)?;
    let z = p.zero_root_multiplicity();
    let std_ok = rss_by_std(l.family(), &p)?;
    let ad = l.ad_matrix(x)?;
    let ad_nullity = ad.nullity();
    let ad_ok = ad_nullity == l.rank() && is_semisimple(x)?;
    let g0 = g.zm_piece(0);
    let restricted = Matrix::from_fn(ad.rows(), g0.len(), |i, j| ad.get(i, g0[j]).clone());
    let theta_fixed = restricted.nullity();
    let zero_eigenvalues = match z {
        0 => ZeroEigenvalues::None,
        1 => ZeroEigenvalues::One,
        2 => ZeroEigenvalues::Two,
        k => ZeroEigenvalues::Other(k),
    };
    Ok(StabilityCertificate {
        rss_by_std: std_ok,
        rss_by_ad: ad_ok,
        theta_fixed_centralizer_dim: theta_fixed,
        ad_nullity,
        zero_eigenvalues,
        charpoly: p.display_in("λ"),
        stable: std_ok && ad_ok && theta_fixed == 0,
    })
}

/// Random integer combination of the listed basis elements.
pub fn random_element(
    g: &Grading,
    indices: &[usize],
    rng: &mut Rng,
    bound: i64,
) -> Matrix<Rational> {
    let l = g.algebra();
    let mut coords = vec![Rational::zero(); l.dim()];
    for &b in indices {
        coords[b] = Rational::from_int(rng.random_range(-bound..=bound));
    }
    l.from_coords(&coords)
}

/// Like [`random_element`] with every listed coordinate in `±[1, bound]`.
pub fn random_element_nonzero(
    g: &Grading,
    indices: &[usize],
    rng: &mut Rng,
    bound: i64,
) -> Matrix<Rational> {
    let l = g.algebra();
    let bound = bound.max(1);
    let mut coords = vec![Rational::zero(); l.dim()];
    for &b in indices {
        let v = rng.random_range(1..=bound);
        coords[b] = Rational::from_int(if rng.random_range(0..2) == 0 { v } else { -v });
    }
    l.from_coords(&coords)
}

/// Random element of `g₁`, not necessarily stable.
pub fn random_g1(g: &Grading, rng: &mut Rng, bound: i64) -> GradedVector {
    let x = random_element(g, &g.zm_piece(1), rng, bound);
    g.split_components(&x).expect("random element lies in g1")
}

/// Outcome of a successful rejection-sampling run.
#[derive(Clone, Debug)]
pub struct StableSample {
    pub vector: GradedVector,
    pub certificate: StabilityCertificate,
    pub tries: usize,
}

/// Draw integer vectors of `g₁` until one is certified stable.
pub fn sample_stable_from(
    g: &Grading,
    rng: &mut Rng,
    height_bound: i64,
    max_tries: usize,
) -> Result<StableSample> {
    let g1 = g.zm_piece(1);
    if g1.is_empty() {
        return Err(Error::SamplingFailure(
            "the degree-one piece is zero".into(),
        ));
    }
    for tries in 1..=max_tries {
        let mut v = random_g1(g, rng, height_bound);
        let cert = is_stable(g, &v)?;
        if cert.stable {
            v.stability = Stability::Stable;
            return Ok(StableSample {
                vector: v,
                certificate: cert,
                tries,
            });
        }
    }
    Err(Error::SamplingFailure(format!(
        "no stable vector in {max_tries} draws with entries in [-{height_bound}, {height_bound}] \
         for {} with Kac coordinates {}; the grading is probably not stable",
        g.algebra().lie_type(),
        g.kac()
    )))
}

/// Seeded rejection sampling of a certified-stable vector.
pub fn sample_stable(
    g: &Grading,
    seed: u64,
    height_bound: i64,
    max_tries: usize,
) -> Result<GradedVector> {
    let mut rng = rng_from_seed(seed);
    Ok(sample_stable_from(g, &mut rng, height_bound, max_tries)?.vector)
}

/// Attach a certificate to a vector, returning it with its status set.
pub fn certify(g: &Grading, mut v: GradedVector) -> Result<(GradedVector, StabilityCertificate)> {
    let cert = is_stable(g, &v)?;
    v.stability = if cert.stable {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    Ok((v, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::grading::{kac_grading, stable_kac_coords, KacCoords};
    use crate::liealg::{build_algebra, LieType};

    fn stable_grading(f: Family, n: usize, m: usize) -> Grading {
        let t = LieType::new(f, n).unwrap();
        kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, m).unwrap()).unwrap()
    }

    /// sp4, m = 2 vector with upper-right block `up` and lower-left block `low`.
    fn sp4_vector(g: &Grading, up: [[i64; 2]; 2], low: [[i64; 2]; 2]) -> GradedVector {
        let mut entries = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                entries.push(((i, j + 2), int(up[i][j])));
                entries.push(((i + 2, j), int(low[i][j])));
            }
        }
        let x = g.algebra().element_from_entries(&entries).unwrap();
        g.split_components(&x).unwrap()
    }

    #[test]
    fn sp4_examples() {
        let g = stable_grading(Family::C, 2, 2);
        let v = sp4_vector(&g, [[1, 0], [0, 1]], [[1, 2], [3, 1]]);
        let c = is_stable(&g, &v).unwrap();
        assert_eq!(c.charpoly, "λ^4 - 2*λ^2 - 5");
        assert!(c.stable && c.rss_by_std && c.rss_by_ad);
        assert_eq!(c.theta_fixed_centralizer_dim, 0);
        let s = sp4_vector(&g, [[0, 1], [1, 0]], [[0, 1], [1, 0]]);
        let c = is_stable(&g, &s).unwrap();
        assert!(!c.stable && !c.rss_by_std && !c.rss_by_ad);
    }

    #[test]
    fn sampling_is_deterministic_and_stable() {
        let g = stable_grading(Family::C, 2, 2);
        let a = sample_stable(&g, 1, 5, 100).unwrap();
        let b = sample_stable(&g, 1, 5, 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stability, Stability::Stable);
    }

    #[test]
    fn zero_degree_one_piece_fails() {
        let l = build_algebra(LieType::new(Family::A, 1).unwrap()).unwrap();
        let g = kac_grading(&l, &KacCoords::new(vec![2, 0])).unwrap();
        assert!(g.zm_piece(1).is_empty());
        assert!(matches!(
            sample_stable(&g, 1, 5, 10),
            Err(Error::SamplingFailure(_))
        ));
    }

    #[test]
    fn trivial_grading_is_never_stable() {
        let l = build_algebra(LieType::new(Family::C, 2).unwrap()).unwrap();
        let g = kac_grading(&l, &KacCoords::new(vec![1, 0, 0])).unwrap();
        let mut rng = rng_from_seed(3);
        let v = random_g1(&g, &mut rng, 5);
        let c = is_stable(&g, &v).unwrap();
        // regular semisimple, yet its centralizer (a Cartan) lies in g_0 = g
        assert!(c.rss_by_std && c.rss_by_ad);
        assert_eq!(c.theta_fixed_centralizer_dim, 2);
        assert!(!c.stable);
    }
}
