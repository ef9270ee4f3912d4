//! Dimension bookkeeping for Hitchin bases and the invariant-theoretic
//! matching of stable vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::ring::{ceil_div, floor_div, rational_to_string};
use crate::exactalg::{Rational, Ring};
use crate::grading::{GradedVector, Grading, Stability};
use crate::liealg::{Family, LieType};
use crate::stablevec::charpoly;

/// Degrees divisible by `m`.
pub fn s_m_set(t: LieType, m: usize) -> Vec<usize> {
    assert!(m >= 1, "order must be positive");
    t.degrees().into_iter().filter(|d| d % m == 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    P,
    P1,
    P2,
    Custom(u32),
}

impl Level {
    pub fn k(self) -> i64 {
        match self {
            Level::P => 0,
            Level::P1 => 1,
            Level::P2 => 2,
            Level::Custom(k) => k as i64,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::P => f.write_str("p"),
            Level::P1 => f.write_str("p(1)"),
            Level::P2 => f.write_str("p(2)"),
            Level::Custom(k) => write!(f, "p({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HitchinShape {
    pub degrees: Vec<usize>,
    pub twists: Vec<i64>,
    pub level: Level,
}

/// Twist `d − ⌈d(1−k)/m⌉` for each degree `d`.
pub fn local_twists(t: LieType, m: usize, level: Level) -> HitchinShape {
    let degrees = t.degrees();
    let k = level.k();
    let twists = degrees
        .iter()
        .map(|&d| {
            let d = d as i64;
            d - ceil_div(d * (1 - k), m as i64)
        })
        .collect();
    HitchinShape {
        degrees,
        twists,
        level,
    }
}

/// `Σ_i h⁰(P¹, O(⌊d_i/m⌋ − ⌈d_i/m⌉))`.
pub fn global_hitchin_dim(t: LieType, m: usize) -> usize {
    t.degrees()
        .iter()
        .map(|&d| {
            let e = floor_div(d as i64, m as i64) - ceil_div(d as i64, m as i64);
            if e >= 0 {
                (e + 1) as usize
            } else {
                0
            }
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct HitchinRow {
    pub degree: usize,
    pub twist_p: i64,
    pub twist_p1: i64,
    pub twist_p2: i64,
    pub in_s_m: bool,
}

pub fn hitchin_table(t: LieType, m: usize) -> Vec<HitchinRow> {
    let p = local_twists(t, m, Level::P);
    let p1 = local_twists(t, m, Level::P1);
    let p2 = local_twists(t, m, Level::P2);
    p.degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| HitchinRow {
            degree: d,
            twist_p: p.twists[i],
            twist_p1: p1.twists[i],
            twist_p2: p2.twists[i],
            in_s_m: d % m == 0,
        })
        .collect()
}

pub fn hitchin_tsv(rows: &[HitchinRow]) -> String {
    let mut out = String::from("degree\ttwist_p\ttwist_p1\ttwist_p2\tin_S_m\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.degree, r.twist_p, r.twist_p1, r.twist_p2, r.in_s_m
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviCheck {
    /// Factors such as `gl2`, `so3`.
    pub levi: Vec<String>,
    pub levi_degrees: Vec<usize>,
    /// `⌈d_i/m⌉`, sorted.
    pub expected: Vec<usize>,
    pub pass: bool,
}

/// Compare the degrees of the Levi `g(0)` with `⌈d_i/m⌉`.
pub fn levi_degree_check(g: &Grading) -> Result<LeviCheck> {
    let t = g.algebra().lie_type();
    if t.family == Family::D {
        return Err(Error::Unsupported(
            "Levi degree check is not available in type D".into(),
        ));
    }
    if g.kac().s0() == 0 {
        return Err(Error::Unsupported(
            "Levi degree check needs s_0 > 0 (the parahoric must be a parabolic)".into(),
        ));
    }
    let mut levi = Vec::new();
    let mut degrees = Vec::new();
    let gl = |k: usize, levi: &mut Vec<String>, degrees: &mut Vec<usize>| {
        levi.push(format!("gl{k}"));
        degrees.extend(1..=k);
    };
    for (w, r) in g.weight_blocks() {
        let k = r.len();
        match t.family {
            Family::A => gl(k, &mut levi, &mut degrees),
            _ if w > Rational::zero() => gl(k, &mut levi, &mut degrees),
            _ if w.is_zero() => match t.family {
                Family::C => {
                    levi.push(format!("sp{k}"));
                    degrees.extend((2..=k).step_by(2));
                }
                _ => {
                    if k > 1 {
                        levi.push(format!("so{k}"));
                        degrees.extend((2..k).step_by(2));
                    }
                }
            },
            _ => {}
        }
    }
    if t.family == Family::A {
        // the determinant condition removes one central degree
        let pos = degrees.iter().position(|&d| d == 1).expect("a gl factor");
        degrees.remove(pos);
    }
    degrees.sort_unstable();
    let m = g.order();
    let mut expected: Vec<usize> = t.degrees().iter().map(|&d| d.div_ceil(m)).collect();
    expected.sort_unstable();
    Ok(LeviCheck {
        pass: degrees == expected,
        levi,
        levi_degrees: degrees,
        expected,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantVector {
    /// Degree in `S_m` ↦ value, rendered exactly.
    pub values: BTreeMap<usize, String>,
    /// Degrees outside `S_m` checked to vanish.
    pub vanishing_checked: Vec<usize>,
    /// The type D Pfaffian is not computed.
    pub pfaffian_unchecked: bool,
}

/// Degrees realized by characteristic-polynomial coefficients.
fn charpoly_degrees(t: LieType) -> Vec<usize> {
    match t.family {
        Family::A => (2..=t.rank + 1).collect(),
        Family::B | Family::C => (1..=t.rank).map(|i| 2 * i).collect(),
        Family::D => (1..t.rank).map(|i| 2 * i).collect(),
    }
}

/// Coefficient of `λ^{N−d}` for each invariant degree `d`; values outside
/// `S_m` must vanish on `g₁`.
pub fn invariants_of(g: &Grading, v: &GradedVector) -> Result<InvariantVector> {
    let t = g.algebra().lie_type();
    let m = g.order();
    let x = &v.matrix;
    g.split_components(x)?;
    let p = charpoly(x)?;
    let n = x.rows();
    let mut values = BTreeMap::new();
    let mut vanishing_checked = Vec::new();
    for d in charpoly_degrees(t) {
        let c = p.coeff(n - d);
        if d % m == 0 {
            values.insert(d, rational_to_string(&c));
        } else if c.is_zero() {
            vanishing_checked.push(d);
        } else {
            return Err(Error::Consistency(format!(
                "degree {d} invariant is {c} on g_1 although {m} does not divide {d}"
            )));
        }
    }
    Ok(InvariantVector {
        values,
        vanishing_checked,
        pfaffian_unchecked: t.family == Family::D,
    })
}

/// Whether two stable vectors have the same invariants.
pub fn git_match(g: &Grading, v: &GradedVector, w: &GradedVector) -> Result<bool> {
    if v.stability != Stability::Stable || w.stability != Stability::Stable {
        return Err(Error::Precondition(
            "invariant matching compares certified-stable vectors".into(),
        ));
    }
    Ok(invariants_of(g, v)? == invariants_of(g, w)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, Matrix};
    use crate::grading::{kac_grading, stable_kac_coords, KacCoords};
    use crate::liealg::build_algebra;
    use crate::stablevec::{certify, random_g1, rng_from_seed, sample_stable};

    fn ty(f: Family, n: usize) -> LieType {
        LieType::new(f, n).unwrap()
    }

    fn stable_grading(f: Family, n: usize, m: usize) -> Grading {
        let t = ty(f, n);
        kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, m).unwrap()).unwrap()
    }

    #[test]
    fn s_m_and_twists() {
        assert_eq!(s_m_set(ty(Family::C, 4), 4), vec![4, 8]);
        assert_eq!(s_m_set(ty(Family::C, 2), 2), vec![2, 4]);
        assert_eq!(s_m_set(ty(Family::B, 3), 1), vec![2, 4, 6]);
        let c2 = ty(Family::C, 2);
        assert_eq!(local_twists(c2, 2, Level::P).twists, vec![1, 2]);
        assert_eq!(local_twists(c2, 2, Level::P2).twists, vec![3, 6]);
        assert_eq!(local_twists(c2, 1, Level::P2).twists, vec![4, 8]);
        assert_eq!(global_hitchin_dim(c2, 2), 2);
        assert_eq!(global_hitchin_dim(ty(Family::C, 4), 4), 2);
        assert_eq!(global_hitchin_dim(c2, 5), 0);
    }

    #[test]
    fn levi_degrees() {
        for (f, n, m) in [(Family::C, 2, 2), (Family::C, 2, 4), (Family::B, 4, 4), (Family::C, 3, 2)] {
            let c = levi_degree_check(&stable_grading(f, n, m)).unwrap();
            assert!(c.pass, "{f}{n} m={m}: {c:?}");
        }
        let c = levi_degree_check(&stable_grading(Family::B, 4, 4)).unwrap();
        assert_eq!(c.levi, vec!["gl1", "gl2", "so3"]);
        assert!(levi_degree_check(&stable_grading(Family::B, 3, 2)).is_err());
        let l = build_algebra(ty(Family::D, 4)).unwrap();
        let g = kac_grading(&l, &KacCoords::new(vec![1, 0, 0, 0, 0])).unwrap();
        assert!(levi_degree_check(&g).is_err());
    }

    #[test]
    fn sp4_invariants() {
        let g = stable_grading(Family::C, 2, 2);
        let x = g
            .algebra()
            .element_from_entries(&[
                ((0, 2), int(1)),
                ((1, 3), int(1)),
                ((2, 0), int(1)),
                ((2, 1), int(2)),
                ((3, 0), int(3)),
                ((3, 1), int(1)),
            ])
            .unwrap();
        let v = g.split_components(&x).unwrap();
        let inv = invariants_of(&g, &v).unwrap();
        assert_eq!(inv.values.get(&2).map(String::as_str), Some("-2"));
        assert_eq!(inv.values.get(&4).map(String::as_str), Some("-5"));
        let z = g.split_components(&Matrix::zeros(4, 4)).unwrap();
        assert!(invariants_of(&g, &z).unwrap().values.values().all(|s| s == "0"));
    }

    #[test]
    fn vanishing_at_order_four() {
        let g = stable_grading(Family::C, 2, 4);
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let inv = invariants_of(&g, &random_g1(&g, &mut rng, 7)).unwrap();
            assert_eq!(inv.vanishing_checked, vec![2]);
            assert_eq!(inv.values.keys().copied().collect::<Vec<_>>(), vec![4]);
        }
    }

    #[test]
    fn matching() {
        let g = stable_grading(Family::C, 2, 2);
        let v = sample_stable(&g, 1, 5, 100).unwrap();
        let w = sample_stable(&g, 2, 5, 100).unwrap();
        assert!(git_match(&g, &v, &v).unwrap());
        let (v2, c) = certify(&g, g.split_components(&v.matrix.scale(&int(2))).unwrap()).unwrap();
        assert!(c.stable);
        assert!(!git_match(&g, &v, &v2).unwrap());
        assert_eq!(git_match(&g, &v, &w).unwrap(), invariants_of(&g, &v).unwrap() == invariants_of(&g, &w).unwrap());
    }
}
