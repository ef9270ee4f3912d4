//! Jordan types of nilpotent matrices, dominance order, and a sampled
//! Richardson-orbit oracle.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Rational};
use crate::grading::{dual_parabolic_kac, kac_grading, GradedVector, Grading};
use crate::liealg::{Family, LieType};
use crate::stablevec::{random_element_nonzero, rng_from_seed};

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(m^k)`.
    pub fn rectangle(m: usize, k: usize) -> Self {
        Self::new(vec![m; k])
    }

    pub fn transpose(&self) -> Self {
        let top = self.parts.first().copied().unwrap_or(0);
        Self::new(
            (1..=top)
                .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
                .collect(),
        )
    }

    /// Parse `(3,2,2)` or `3,2,2`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Domain(format!("bad partition part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Ranks of `N^0, N^1, …` down to the first zero.
pub fn rank_sequence(n: &Matrix<Rational>) -> Result<Vec<usize>> {
    if n.rows() != n.cols() {
        return Err(Error::Dimension("rank sequence of a non-square matrix".into()));
    }
    let size = n.rows();
    let mut ranks = vec![size];
    let mut p: Matrix<Rational> = Matrix::identity(size);
    while *ranks.last().expect("nonempty") > 0 {
        if ranks.len() > size {
            return Err(Error::Domain("matrix is not nilpotent".into()));
        }
        p = p.mul(n);
        let r = p.rank();
        if r == *ranks.last().expect("nonempty") {
            return Err(Error::Domain("matrix is not nilpotent".into()));
        }
        ranks.push(r);
    }
    Ok(ranks)
}

/// Jordan type of a nilpotent matrix from its rank sequence: part `j`
/// occurs `r_{j-1} - 2 r_j + r_{j+1}` times.
pub fn jordan_type(n: &Matrix<Rational>) -> Result<Partition> {
    let r = rank_sequence(n)?;
    let at = |j: usize| r.get(j).copied().unwrap_or(0) as i64;
    let mut parts = Vec::new();
    for j in 1..r.len() {
        let mult = at(j - 1) - 2 * at(j) + at(j + 1);
        debug_assert!(mult >= 0);
        parts.extend(std::iter::repeat_n(j, mult as usize));
    }
    Ok(Partition::new(parts))
}

/// All partitions of `n`, largest first in lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Whether `p` is the Jordan type of a nilpotent in the standard
/// representation of `family`: in symplectic type odd parts come in pairs,
/// in orthogonal types even parts do.
pub fn is_valid_type(family: Family, p: &Partition) -> bool {
    let paired = match family {
        Family::A => return true,
        Family::C => 1,
        Family::B | Family::D => 0,
    };
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in &p.parts {
        *counts.entry(x).or_default() += 1;
    }
    counts.iter().all(|(&x, &c)| x % 2 != paired || c % 2 == 0)
}

/// Dimension of the centralizer in `g` of a nilpotent of Jordan type `p`,
/// from the transpose partition.
pub fn centralizer_dim_of_type(family: Family, p: &Partition) -> usize {
    let sq: usize = p.transpose().parts.iter().map(|c| c * c).sum();
    let odd = p.parts.iter().filter(|&&x| x % 2 == 1).count();
    match family {
        Family::A => sq - 1,
        Family::C => (sq + odd) / 2,
        Family::B | Family::D => (sq - odd) / 2,
    }
}

/// Valid types for `t` whose centralizer has dimension `dim`.
pub fn types_with_centralizer_dim(t: LieType, dim: usize) -> Vec<Partition> {
    partitions(t.std_dim())
        .into_iter()
        .filter(|p| is_valid_type(t.family, p) && centralizer_dim_of_type(t.family, p) == dim)
        .collect()
}

/// Whether `p ≤ q` in dominance order.
pub fn dominance_leq(p: &Partition, q: &Partition) -> Result<bool> {
    if p.size() != q.size() {
        return Err(Error::Domain(format!(
            "dominance needs equal sizes: {p} has {}, {q} has {}",
            p.size(),
            q.size()
        )));
    }
    let (mut sp, mut sq) = (0, 0);
    for i in 0..p.parts.len().max(q.parts.len()) {
        sp += p.parts.get(i).copied().unwrap_or(0);
        sq += q.parts.get(i).copied().unwrap_or(0);
        if sp > sq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dominance comparison; `None` when incomparable.
pub fn dominance_cmp(p: &Partition, q: &Partition) -> Result<Option<Ordering>> {
    Ok(match (dominance_leq(p, q)?, dominance_leq(q, p)?) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    })
}

/// The observed types that no other observed type strictly dominates.
pub fn maximal_types<'a>(types: impl IntoIterator<Item = &'a Partition> + Clone) -> Vec<Partition> {
    types
        .clone()
        .into_iter()
        .filter(|p| {
            !types
                .clone()
                .into_iter()
                .any(|q| matches!(dominance_cmp(p, q), Ok(Some(Ordering::Less))))
        })
        .cloned()
        .collect()
}

/// The observed types that strictly dominate no other observed type.
pub fn minimal_types<'a>(types: impl IntoIterator<Item = &'a Partition> + Clone) -> Vec<Partition> {
    types
        .clone()
        .into_iter()
        .filter(|p| {
            !types
                .clone()
                .into_iter()
                .any(|q| matches!(dominance_cmp(p, q), Ok(Some(Ordering::Greater))))
        })
        .cloned()
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RichardsonReport {
    pub partition: Partition,
    pub trials: usize,
    /// Fraction of trials whose type equals `partition`.
    pub agreement: f64,
    pub seed: u64,
    pub height_bound: i64,
    /// Kac coordinates of the parabolic whose nilradical was sampled.
    pub parabolic_kac: String,
    pub observed: BTreeMap<Partition, usize>,
    /// Set when several incomparable maximal types were observed.
    pub ambiguous: bool,
}

/// Sample `⊕_{k≥1} g(k)` for the parabolic attached to `g`, with every
/// coordinate nonzero, and report the dominance-maximal Jordan type. For
/// gradings with `s_0 = 0` in types B and C the parabolic is read off the
/// dual-type stable grading of the same order (see [`dual_parabolic_kac`]).
pub fn richardson_partition(
    g: &Grading,
    seed: u64,
    trials: usize,
    height_bound: i64,
) -> Result<RichardsonReport> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let kac = dual_parabolic_kac(g)?;
    let p = kac_grading(g.algebra(), &kac)?;
    let nil = p.positive_part();
    let mut rng = rng_from_seed(seed);
    let mut observed: BTreeMap<Partition, usize> = BTreeMap::new();
    for _ in 0..trials {
        let x = random_element_nonzero(&p, &nil, &mut rng, height_bound);
        *observed.entry(jordan_type(&x)?).or_default() += 1;
    }
    let maximal = maximal_types(observed.keys());
    let partition = maximal
        .iter()
        .max_by_key(|p| observed[*p])
        .expect("at least one trial")
        .clone();
    let agreement = observed[&partition] as f64 / trials as f64;
    Ok(RichardsonReport {
        partition,
        trials,
        agreement,
        seed,
        height_bound,
        parabolic_kac: kac.to_string(),
        ambiguous: maximal.len() > 1,
        observed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    Exact,
    Closure,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub residue: Partition,
    pub oracle: Partition,
    pub mode: MatchMode,
    pub matches: bool,
}

/// Compare the Jordan type of `X₁` with an oracle partition.
pub fn residue_matches(
    v: &GradedVector,
    oracle: &Partition,
    mode: MatchMode,
) -> Result<ResidueReport> {
    let residue = jordan_type(&v.component_1).map_err(|_| {
        Error::Domain("X1 is not nilpotent; the grading is misconfigured".into())
    })?;
    let matches = match mode {
        MatchMode::Exact => &residue == oracle,
        MatchMode::Closure => dominance_leq(&residue, oracle)?,
    };
    Ok(ResidueReport {
        residue,
        oracle: oracle.clone(),
        mode,
        matches,
    })
}

/// Centralizer dimension of a matrix in the algebra: nullity of its adjoint.
pub fn centralizer_dim(l: &crate::liealg::LieAlgebra, x: &Matrix<Rational>) -> Result<usize> {
    Ok(l.ad_matrix(x)?.nullity())
}

/// `g N g⁻¹`, used by tests and censuses that need a conjugate.
pub fn conjugate(g: &Matrix<Rational>, n: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    Ok(g.mul(n).mul(&g.inverse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{stable_kac_coords, KacCoords};
    use crate::liealg::{build_algebra, Family, LieType};
    use crate::stablevec::random_element;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn stable_grading(f: Family, n: usize, m: usize) -> Grading {
        let t = LieType::new(f, n).unwrap();
        kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, m).unwrap()).unwrap()
    }

    #[test]
    fn jordan_basics() {
        assert_eq!(jordan_type(&Matrix::from_ints(&[&[0, 1], &[0, 0]])).unwrap(), p(&[2]));
        assert_eq!(jordan_type(&Matrix::zeros(3, 3)).unwrap(), p(&[1, 1, 1]));
        assert!(jordan_type(&Matrix::from_ints(&[&[1, 0], &[0, 0]])).is_err());
        // a single 3-block next to a 1-block, with an off-diagonal twist
        let n = Matrix::from_ints(&[&[0, 1, 0, 5], &[0, 0, 1, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(jordan_type(&n).unwrap(), p(&[3, 1]));
    }

    #[test]
    fn dominance() {
        assert!(dominance_leq(&p(&[2, 2]), &p(&[4])).unwrap());
        assert!(!dominance_leq(&p(&[4]), &p(&[2, 2])).unwrap());
        assert!(dominance_leq(&p(&[2, 2]), &p(&[3, 1])).unwrap());
        assert!(dominance_leq(&p(&[2]), &p(&[1, 1, 1])).is_err());
        assert_eq!(dominance_cmp(&p(&[3, 3]), &p(&[4, 1, 1])).unwrap(), None);
    }

    #[test]
    fn transpose_and_parse() {
        assert_eq!(p(&[3, 2, 2]).transpose(), p(&[3, 3, 1]));
        assert_eq!(Partition::parse("(5,3,1)").unwrap(), p(&[5, 3, 1]));
        assert_eq!(p(&[5, 3, 1]).to_string(), "(5,3,1)");
    }

    #[test]
    fn richardson_examples() {
        let r = richardson_partition(&stable_grading(Family::C, 2, 2), 1, 25, 10).unwrap();
        assert_eq!(r.partition, p(&[2, 2]));
        let r = richardson_partition(&stable_grading(Family::B, 4, 4), 1, 25, 10).unwrap();
        assert_eq!(r.partition, p(&[5, 3, 1]));
        assert!(r.agreement >= 0.9);
        let r = richardson_partition(&stable_grading(Family::B, 3, 2), 1, 25, 10).unwrap();
        assert_eq!(r.partition, p(&[3, 2, 2]));
        // Borel in type A: regular nilpotent
        let l = build_algebra(LieType::new(Family::A, 3).unwrap()).unwrap();
        let g = kac_grading(&l, &KacCoords::new(vec![1; 4])).unwrap();
        assert_eq!(richardson_partition(&g, 2, 25, 10).unwrap().partition, p(&[4]));
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(8).len(), 22);
        assert!(is_valid_type(Family::B, &p(&[3, 2, 2])));
        assert!(!is_valid_type(Family::B, &p(&[4, 3])));
        assert!(!is_valid_type(Family::C, &p(&[3, 1])));
        let d4 = LieType::new(Family::D, 4).unwrap();
        assert_eq!(types_with_centralizer_dim(d4, 12), vec![p(&[3, 2, 2, 1])]);
    }

    #[test]
    fn centralizer_formula_matches_kernel() {
        // nilpotents from several parabolics, compared with dim ker(ad N)
        let cases: [(Family, usize, Vec<u32>); 4] = [
            (Family::B, 3, vec![0, 1, 1, 0]),
            (Family::C, 3, vec![0, 1, 0, 1]),
            (Family::D, 4, vec![0, 1, 1, 0, 0]),
            (Family::A, 4, vec![0, 1, 0, 1, 0]),
        ];
        let mut rng = rng_from_seed(9);
        for (f, n, s) in cases {
            let t = LieType::new(f, n).unwrap();
            let g = kac_grading(&build_algebra(t).unwrap(), &KacCoords::new(s)).unwrap();
            let nil = g.positive_part();
            for _ in 0..6 {
                let x = random_element(&g, &nil, &mut rng, 2);
                let jt = jordan_type(&x).unwrap();
                assert!(is_valid_type(f, &jt), "{t} {jt}");
                assert_eq!(
                    centralizer_dim(g.algebra(), &x).unwrap(),
                    centralizer_dim_of_type(f, &jt),
                    "{t} {jt}"
                );
            }
        }
    }
}
