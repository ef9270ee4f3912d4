//! The `so_7` orbit dichotomy for the order-two grading with `s_0 = 0`:
//! symbolic checks of the six-parameter family, the elimination argument,
//! and seeded orbit censuses for arbitrary gradings.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{int, rat, Matrix, MultiPoly, Rational, RationalFunction, Ring, UniPoly};
use crate::grading::{kac_grading, stable_kac_coords, Grading, Stability};
use crate::liealg::{build_algebra, Family, LieType};
use crate::nilorbit::{
    dominance_cmp, jordan_type, maximal_types, minimal_types, richardson_partition,
    types_with_centralizer_dim, Partition,
};
use crate::stablevec::{certify, rng_from_seed, sample_stable_from, so7_matrix};

/// Variable indices used by the symbolic `so_7` computations.
pub const A: usize = 6;
pub const LAMBDA: usize = 7;
pub const T: usize = 8;
pub const VAR_NAMES: [&str; 9] = ["b1", "b2", "b3", "b4", "b5", "b6", "a", "λ", "t"];

fn b(i: usize) -> MultiPoly {
    MultiPoly::var(i - 1)
}

fn c(n: i64) -> MultiPoly {
    MultiPoly::int(n)
}

fn q(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(rat(n, d))
}

fn show(p: &MultiPoly) -> String {
    p.display_with(&VAR_NAMES)
}

fn mismatch(what: &str, diff: &MultiPoly) -> Error {
    Error::Verification(format!("{what}: computed minus expected = {}", show(diff)))
}

/// The order-two grading of `so_7` with Kac coordinates `(0,0,1,0)`.
pub fn so7_grading() -> Result<Grading> {
    let t = LieType::new(Family::B, 3)?;
    kac_grading(&build_algebra(t)?, &stable_kac_coords(t, 2)?)
}

/// The highest root vector `E_γ` in degree two: the upper-right trace-zero
/// diagonal block with first-row entry 1.
pub fn e_gamma(g: &Grading) -> Result<Matrix<Rational>> {
    let e = g.algebra().element_from_entries(&[((0, 5), Rational::one())])?;
    if g.entry_degree(0, 5) != Some(2) || e.get(1, 6) != &int(-1) {
        return Err(Error::Consistency("unexpected shape of the highest root vector".into()));
    }
    Ok(e)
}

/// `q(p(Ad_{exp(a E_γ)} X)²)` for `x` with polynomial entries, where `a` is
/// the variable `a_var`. `p` keeps degree one and `q` reads the 2×2 block of
/// degree two with columns in the order `(6, 5)`.
fn shifted_block(g: &Grading, x: &Matrix<MultiPoly>, a_var: usize) -> Result<Matrix<MultiPoly>> {
    let e = e_gamma(g)?.map(|v| MultiPoly::var(a_var).mul(&MultiPoly::constant(v.clone())));
    let n = x.rows();
    // E_γ² = 0, so exp(aE_γ) = I + aE_γ
    let id = Matrix::identity(n);
    let ad = id.add(&e).mul(x).mul(&id.sub(&e));
    let p = g.project(&ad, |d| d == 1);
    let sq = p.mul(&p);
    for i in 0..n {
        for j in 0..n {
            if !sq.get(i, j).is_zero() && !(i < 2 && j >= 5) {
                return Err(Error::Consistency(format!(
                    "square of a degree-one element has an entry at ({i},{j})"
                )));
            }
        }
    }
    Ok(Matrix::from_fn(2, 2, |i, j| sq.get(i, 6 - j).clone()))
}

fn det2<T: Ring>(m: &Matrix<T>) -> T {
    m.get(0, 0).mul(m.get(1, 1)).sub(&m.get(0, 1).mul(m.get(1, 0)))
}

/// `det(λI + x)` for a 7×7 polynomial matrix.
fn det_lambda_plus(x: &Matrix<MultiPoly>) -> Result<MultiPoly> {
    // det(λI + X) = -χ_X(-λ) for odd size
    let coeffs = x.charpoly_coeffs()?;
    let lambda = MultiPoly::var(LAMBDA);
    let mut out = MultiPoly::zero();
    for (k, ck) in coeffs.iter().enumerate() {
        let sign = if k % 2 == 0 { c(-1) } else { c(1) };
        out = out.add(&sign.mul(ck).mul(&Ring::pow(&lambda, k as u32)));
    }
    Ok(out)
}

/// The printed characteristic polynomial `det(λI + X)` of the family.
pub fn printed_charpoly() -> MultiPoly {
    let l2 = Ring::pow(&MultiPoly::var(LAMBDA), 2);
    let s = b(1).add(&b(6));
    let c4 = c(-2).mul(&s);
    let c2 = s.mul(&s).sub(&c(4).mul(&b(2)).mul(&b(5))).sub(&c(4).mul(&b(3)).mul(&b(4)));
    let c0 = c(4).mul(
        &s.mul(&b(3))
            .mul(&b(4))
            .sub(&b(5).mul(&Ring::pow(&b(4), 2)))
            .sub(&b(2).mul(&Ring::pow(&b(3), 2))),
    );
    let inner = Ring::pow(&l2, 3)
        .add(&c4.mul(&Ring::pow(&l2, 2)))
        .add(&c2.mul(&l2))
        .add(&c0);
    MultiPoly::var(LAMBDA).mul(&inner)
}

fn bilinear_parts() -> (MultiPoly, MultiPoly, MultiPoly, MultiPoly) {
    let p = b(1).mul(&b(5)).add(&Ring::pow(&b(3), 2));
    let qq = b(2).mul(&b(6)).add(&Ring::pow(&b(4), 2));
    let r = b(1).mul(&b(6)).add(&c(2).mul(&b(3)).mul(&b(4))).add(&b(2).mul(&b(5)));
    let d = b(1).sub(&b(6));
    (p, qq, r, d)
}

/// The printed 2×2 matrix `q(p(Ad_{exp(aE_γ)}X)²)`.
pub fn printed_block() -> Matrix<MultiPoly> {
    let a = MultiPoly::var(A);
    let a2 = Ring::pow(&a, 2);
    let (p, qq, r, d) = bilinear_parts();
    let m00 = c(2).mul(&a).mul(&b(5)).add(&c(2).mul(&a2).mul(&p));
    let off = c(1).add(&a.mul(&d)).sub(&a2.mul(&r));
    let m11 = c(-2).mul(&a).mul(&b(2)).add(&c(2).mul(&a2).mul(&qq));
    Matrix::from_rows(vec![vec![m00, off.clone()], vec![off, m11]])
}

/// The printed expansion of the determinant, with the `a⁴` bracket either as
/// displayed (`squared = false`) or with its last term squared.
pub fn printed_det_expansion(squared: bool) -> MultiPoly {
    let a = MultiPoly::var(A);
    let (p, qq, r, d) = bilinear_parts();
    let r4 = if squared { r.mul(&r) } else { r.clone() };
    let c4 = c(4).mul(&p).mul(&qq).sub(&r4);
    let c3 = c(4)
        .mul(&b(5).mul(&qq).sub(&b(2).mul(&p)))
        .add(&c(2).mul(&d).mul(&r));
    let c2 = c(2).mul(&r).sub(&c(4).mul(&b(2)).mul(&b(5))).sub(&d.mul(&d));
    let c1 = c(-2).mul(&d);
    [c(-1), c1, c2, c3, c4]
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (k, ck)| {
            acc.add(&ck.mul(&Ring::pow(&a, k as u32)))
        })
}

#[derive(Clone, Debug)]
pub struct So7SymbolicState {
    pub x: Matrix<MultiPoly>,
    /// `det(λI + X)`.
    pub char_poly: MultiPoly,
    /// `q(p(Ad_{exp(aE_γ)}X)²)`.
    pub block: Matrix<MultiPoly>,
    pub det_block: MultiPoly,
}

/// Compute the symbolic data of the family without comparing to anything.
pub fn so7_symbolic_state() -> Result<So7SymbolicState> {
    let g = so7_grading()?;
    let bs: Vec<MultiPoly> = (1..=6).map(b).collect();
    let x = so7_matrix(&bs);
    if !g.algebra().contains(&x)? {
        return Err(Error::Verification("the family is not in so_7".into()));
    }
    let char_poly = det_lambda_plus(&x)?;
    let block = shifted_block(&g, &x, A)?;
    let det_block = det2(&block);
    Ok(So7SymbolicState {
        x,
        char_poly,
        block,
        det_block,
    })
}

fn negate_b(p: &MultiPoly) -> MultiPoly {
    (0..6).fold(p.clone(), |acc, i| acc.substitute(i, &MultiPoly::var(i).neg()))
}

#[derive(Clone, Debug, Serialize)]
pub struct So7Goldens {
    pub charpoly: String,
    pub charpoly_matches: bool,
    /// Computed minus printed; empty when they agree.
    pub charpoly_discrepancy: String,
    /// The printed polynomial equals the computed one with every `b_i`
    /// replaced by `-b_i`.
    pub charpoly_matches_with_b_negated: bool,
    /// `λ⁵` coefficient of the sextic `det(λI+X)/λ`.
    pub lambda5_coefficient: String,
    pub block_matches: bool,
    /// `ε` with computed block `= ε ·` printed matrix, if any.
    pub block_sign: Option<i64>,
    pub det_block_matches_printed_matrix: bool,
    pub det_constant_term: String,
    pub a4_coefficient: String,
    /// Equality with the displayed expansion, taken literally.
    pub det_matches_displayed: bool,
    /// Computed minus displayed; empty when they agree.
    pub det_discrepancy: String,
    pub det_discrepancy_degrees_in_a: Vec<usize>,
    /// Equality once the last term of the `a⁴` bracket is squared.
    pub det_matches_with_square: bool,
}

fn shown_or_empty(p: &MultiPoly) -> String {
    if p.is_zero() {
        String::new()
    } else {
        show(p)
    }
}

/// Compare the symbolic data with the printed polynomials and report every
/// discrepancy.
pub fn so7_goldens(state: &So7SymbolicState) -> So7Goldens {
    let printed_cp = printed_charpoly();
    let cp_diff = state.char_poly.sub(&printed_cp);
    let printed = printed_block();
    let block_sign = [1, -1].into_iter().find(|&e| {
        (0..2).all(|i| (0..2).all(|j| *state.block.get(i, j) == c(e).mul(printed.get(i, j))))
    });
    let discrepancy = state.det_block.sub(&printed_det_expansion(false));
    let degrees = discrepancy
        .coeffs_in(A)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, _)| k)
        .collect();
    let a_coeffs = state.det_block.coeffs_in(A);
    So7Goldens {
        charpoly: show(&state.char_poly),
        charpoly_matches: cp_diff.is_zero(),
        charpoly_discrepancy: shown_or_empty(&cp_diff),
        charpoly_matches_with_b_negated: negate_b(&state.char_poly) == printed_cp,
        lambda5_coefficient: show(&coeff_or_zero(&state.char_poly.coeffs_in(LAMBDA), 6)),
        block_matches: block_sign == Some(1),
        block_sign,
        det_block_matches_printed_matrix: state.det_block == det2(&printed),
        det_constant_term: show(&coeff_or_zero(&a_coeffs, 0)),
        a4_coefficient: show(&coeff_or_zero(&a_coeffs, 4)),
        det_matches_displayed: discrepancy.is_zero(),
        det_discrepancy: shown_or_empty(&discrepancy),
        det_discrepancy_degrees_in_a: degrees,
        det_matches_with_square: state.det_block == printed_det_expansion(true),
    }
}

/// Build the family and insist that the characteristic polynomial and the
/// determinant of the 2×2 block agree with the printed ones.
pub fn so7_build_symbolic() -> Result<So7SymbolicState> {
    let state = so7_symbolic_state()?;
    let cp_diff = state.char_poly.sub(&printed_charpoly());
    if !cp_diff.is_zero() {
        return Err(mismatch("characteristic polynomial", &cp_diff));
    }
    let det_diff = state.det_block.sub(&det2(&printed_block()));
    if !det_diff.is_zero() {
        return Err(mismatch("determinant of the 2x2 block", &det_diff));
    }
    Ok(state)
}

fn coeff_or_zero(v: &[MultiPoly], k: usize) -> MultiPoly {
    v.get(k).cloned().unwrap_or_else(MultiPoly::zero)
}

/// Evaluate a polynomial at values in any ring.
fn eval_in<R: Ring>(p: &MultiPoly, vals: &[R]) -> R {
    p.terms().fold(R::zero(), |acc, (e, coef)| {
        let mono = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .fold(R::from_rational(coef), |m, (i, &k)| m.mul(&Ring::pow(&vals[i], k)));
        acc.add(&mono)
    })
}

/// The relation system obtained from the vanishing of the `a¹..a⁴`
/// coefficients, each written as `lhs - rhs`.
pub fn relation_system() -> [MultiPoly; 4] {
    [
        b(1).sub(&b(6)),
        b(2).mul(&b(5))
            .sub(&Ring::pow(&b(1), 2))
            .sub(&c(2).mul(&b(3)).mul(&b(4))),
        b(5).mul(&Ring::pow(&b(4), 2)).sub(&b(2).mul(&Ring::pow(&b(3), 2))),
        c(2).mul(&b(1))
            .mul(&b(2))
            .mul(&Ring::pow(&b(3), 2))
            .sub(&c(3).mul(&Ring::pow(&b(3), 2)).mul(&Ring::pow(&b(4), 2)))
            .sub(&c(2).mul(&Ring::pow(&b(1), 2)).mul(&b(3)).mul(&b(4))),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateBranch {
    pub hypothesis: String,
    /// Identity checked on the branch: the `λ¹` coefficient of the
    /// characteristic polynomial is a multiple of the third relation.
    pub identity: String,
    pub holds: bool,
}

/// The characteristic polynomial on the solved family, reduced to a cubic.
#[derive(Clone, Debug, Serialize)]
pub struct CubicReduction {
    /// `printed` or `computed`.
    pub source: String,
    /// `det(λI+X)/λ` on the solved family, in `λ` and `b1`.
    pub reduced_charpoly: String,
    pub reduced_charpoly_matches: bool,
    pub substitution: String,
    pub homogeneous_in_b1: bool,
    pub cubic: String,
    pub cubic_matches: bool,
    pub discriminant: String,
    /// Multiplicity of `t = 4` as a root of the cubic.
    pub multiplicity_at_4: usize,
    pub factored: String,
    pub branches: Vec<DegenerateBranch>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationReport {
    /// The relation system follows from the vanishing `a`-coefficients.
    pub system_from_coefficients: bool,
    /// The solved relations satisfy the system.
    pub solution_satisfies_system: bool,
    /// The solved relations kill the four `a`-coefficients of the determinant.
    pub coefficients_vanish: bool,
    /// Reductions of the printed and of the computed characteristic
    /// polynomial; the two differ by `b ↦ -b`, which fixes the system.
    pub reductions: Vec<CubicReduction>,
    /// A solution of the system on the `b4 = 0` branch with `b1 b2 b5 ≠ 0`;
    /// it still has zero as a repeated eigenvalue.
    pub b4_zero_witness: Vec<String>,
    pub b4_zero_witness_charpoly: String,
    pub passed: bool,
}

/// The solved family: free parameters `b1` and `b4`, with
/// `b3 = -4 b1² / (9 b4)` so that `b1² = -(9/4) b3 b4`.
fn solved_family() -> Vec<RationalFunction> {
    let poly = RationalFunction::poly;
    let b1 = poly(b(1));
    let b4 = poly(b(4));
    let b3 = RationalFunction::new(c(-4).mul(&Ring::pow(&b(1), 2)), c(9).mul(&b(4)));
    let b2 = RationalFunction::new(c(-3).mul(&Ring::pow(&b(4), 2)), c(4).mul(&b(1)));
    let b5 = poly(c(-3))
        .mul(&b3.mul(&b3))
        .mul(&RationalFunction::new(c(1), c(4).mul(&b(1))));
    let mut vals = vec![b1.clone(), b2, b3, b4, b5, b1];
    vals.extend((6..9).map(|i| poly(MultiPoly::var(i))));
    vals
}

fn zero_on(p: &MultiPoly, vals: &[RationalFunction]) -> bool {
    eval_in(p, vals).is_zero()
}

/// Mechanize the elimination: if the determinant of the 2×2 block is the
/// constant `-1`, the characteristic polynomial has a repeated root.
pub fn so7_elimination_check() -> Result<EliminationReport> {
    let state = so7_symbolic_state()?;
    let coeffs = state.det_block.coeffs_in(A);
    let co = |k: usize| coeff_or_zero(&coeffs, k);
    if co(0) != c(-1) {
        return Err(mismatch("constant term in a", &co(0).add(&c(1))));
    }
    let rel = relation_system();

    // The system is what the coefficients say: a¹ = -2 E1, and on b6 = b1
    // a² = -2 E2, a³ = 4 E3, a⁴ = 4 E4 - E2 (8 b3 b4 + E2) + 4 b1 E3.
    let on_b6 = |p: &MultiPoly| p.substitute(5, &b(1));
    let e: Vec<MultiPoly> = rel.iter().map(on_b6).collect();
    let a4_rhs = c(4)
        .mul(&e[3])
        .sub(&e[1].mul(&c(8).mul(&b(3)).mul(&b(4)).add(&e[1])))
        .add(&c(4).mul(&b(1)).mul(&e[2]));
    let system_from_coefficients = co(1).add(&c(2).mul(&rel[0])).is_zero()
        && on_b6(&co(2)).add(&c(2).mul(&e[1])).is_zero()
        && on_b6(&co(3)).sub(&c(4).mul(&e[2])).is_zero()
        && on_b6(&co(4)).sub(&a4_rhs).is_zero();

    let sol = solved_family();
    let solution_satisfies_system = rel.iter().all(|r| zero_on(r, &sol));
    let coefficients_vanish = (1..=4).all(|k| zero_on(&co(k), &sol));

    let reductions = vec![
        reduce_to_cubic("printed", &printed_charpoly(), 1, &sol)?,
        reduce_to_cubic("computed", &state.char_poly, -1, &sol)?,
    ];

    let witness = [1, 1, 0, 0, 1, 1].map(int);
    let wvals: Vec<MultiPoly> = witness.iter().map(|v| MultiPoly::constant(v.clone())).collect();
    if !rel.iter().all(|r| eval_in(r, &wvals).is_zero()) {
        return Err(Error::Verification("the b4 = 0 witness violates the system".into()));
    }
    let wcp = crate::stablevec::charpoly(&so7_matrix(&witness))?;

    let passed = system_from_coefficients
        && solution_satisfies_system
        && coefficients_vanish
        && reductions.iter().all(|r| r.passed)
        && wcp.zero_root_multiplicity() >= 3;
    Ok(EliminationReport {
        system_from_coefficients,
        solution_satisfies_system,
        coefficients_vanish,
        reductions,
        b4_zero_witness: witness.iter().map(|v| v.to_string()).collect(),
        b4_zero_witness_charpoly: wcp.display_in("λ"),
        passed,
    })
}

/// Substitute the solved family into `char_poly` (a polynomial in `λ` and
/// the `b_i`), then `λ² = eps · b1 t / 3`, and compare with `(t - 4)³`.
/// `eps = 1` matches the printed sign convention, `-1` the computed one.
fn reduce_to_cubic(
    source: &str,
    char_poly: &MultiPoly,
    eps: i64,
    sol: &[RationalFunction],
) -> Result<CubicReduction> {
    let reduced = eval_in(char_poly, sol).as_poly().ok_or_else(|| {
        Error::Verification(format!("{source}: reduced characteristic polynomial has a denominator"))
    })?;
    let reduced = divide_by_lambda(&reduced)?;
    let mu = Ring::pow(&MultiPoly::var(LAMBDA), 2);
    let b1 = c(eps).mul(&b(1));
    let expected = Ring::pow(&mu, 3)
        .sub(&c(4).mul(&b1).mul(&Ring::pow(&mu, 2)))
        .add(&q(16, 3).mul(&Ring::pow(&b1, 2)).mul(&mu))
        .sub(&q(64, 27).mul(&Ring::pow(&b1, 3)));

    let sub = q(eps, 3).mul(&b(1)).mul(&MultiPoly::var(T));
    let mut in_t = MultiPoly::zero();
    for (k, ck) in reduced.coeffs_in(LAMBDA).iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        if k % 2 == 1 {
            return Err(mismatch(&format!("{source}: odd power of λ"), ck));
        }
        in_t = in_t.add(&ck.mul(&Ring::pow(&sub, (k / 2) as u32)));
    }
    let homogeneous_in_b1 =
        in_t.terms().all(|(e, _)| e.first().copied().unwrap_or(0) == 3) && in_t.degree_in(3).unwrap_or(0) == 0;
    // divide by (eps b1)³ / 27
    let cubic = in_t
        .specialize(0, &Rational::one())
        .mul(&c(27 * eps))
        .to_unipoly(T)
        .ok_or_else(|| Error::Verification(format!("{source}: reduced cubic still depends on b")))?;
    let cubic_matches = cubic == UniPoly::from_ints(&[-64, 48, -12, 1]);
    let disc = cubic.cubic_discriminant()?;
    let mut rest = cubic.clone();
    let mut multiplicity_at_4 = 0;
    let lin = UniPoly::from_ints(&[-4, 1]);
    while rest.degree().unwrap_or(0) > 0 {
        let (qt, r) = rest.div_rem(&lin)?;
        if !r.is_zero() {
            break;
        }
        multiplicity_at_4 += 1;
        rest = qt;
    }
    let factored = if rest == UniPoly::from_ints(&[1]) {
        format!("(t - 4)^{multiplicity_at_4}")
    } else {
        format!("(t - 4)^{multiplicity_at_4} * ({})", rest.display_in("t"))
    };
    let branches = degenerate_branches(char_poly, eps);
    let passed = reduced == expected
        && homogeneous_in_b1
        && cubic_matches
        && disc.is_zero()
        && multiplicity_at_4 == 3
        && branches.iter().all(|b| b.holds);
    Ok(CubicReduction {
        source: source.into(),
        reduced_charpoly: show(&reduced),
        reduced_charpoly_matches: reduced == expected,
        substitution: format!("λ^2 = {}b1*t/3", if eps < 0 { "-" } else { "" }),
        homogeneous_in_b1,
        cubic: cubic.display_in("t"),
        cubic_matches,
        discriminant: disc.to_string(),
        multiplicity_at_4,
        factored,
        branches,
        passed,
    })
}

fn divide_by_lambda(p: &MultiPoly) -> Result<MultiPoly> {
    let cs = p.coeffs_in(LAMBDA);
    if !cs.first().is_none_or(MultiPoly::is_zero) {
        return Err(Error::Verification("det(λI+X) is not divisible by λ".into()));
    }
    let l = MultiPoly::var(LAMBDA);
    Ok(cs
        .iter()
        .enumerate()
        .skip(1)
        .fold(MultiPoly::zero(), |acc, (k, ck)| {
            acc.add(&ck.mul(&Ring::pow(&l, k as u32 - 1)))
        }))
}

/// On each degenerate branch the `λ¹` coefficient is a multiple of the third
/// relation, so it vanishes and zero is an eigenvalue of multiplicity at
/// least three. The multipliers are for the printed sign convention and flip
/// with `eps`.
fn degenerate_branches(char_poly: &MultiPoly, eps: i64) -> Vec<DegenerateBranch> {
    let c1 = coeff_or_zero(&char_poly.coeffs_in(LAMBDA), 1);
    let e3 = relation_system()[2].clone();
    let cases: [(&str, &[(usize, i64)], i64); 3] = [
        ("b4 = 0", &[(3, 0)], 4),
        ("b1 = b6 = 0, b3 = 0", &[(0, 0), (5, 0), (2, 0)], -4),
        ("b1 = b6 = 0, b4 = 0", &[(0, 0), (5, 0), (3, 0)], 4),
    ];
    cases
        .iter()
        .map(|(hyp, subs, mult)| {
            let mult = mult * eps;
            let sp = |p: &MultiPoly| {
                subs.iter()
                    .fold(p.clone(), |acc, (v, x)| acc.specialize(*v, &int(*x)))
            };
            DegenerateBranch {
                hypothesis: hyp.to_string(),
                identity: format!("[λ^1] = {mult} * ({})", show(&e3)),
                holds: sp(&c1) == c(mult).mul(&sp(&e3)),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum So7Orbit {
    /// `X₁²` has rank two.
    OTheta,
    /// `X₁²` has rank one.
    OP,
    NotStable,
}

/// Classify a rational element of `g₁` of the order-two `so_7` grading by
/// the rank of `X₁²`.
pub fn so7_orbit_of(x: &Matrix<Rational>) -> Result<So7Orbit> {
    let g = so7_grading()?;
    let v = g.split_components(x)?;
    let (v, _) = certify(&g, v)?;
    if v.stability != Stability::Stable {
        return Ok(So7Orbit::NotStable);
    }
    let x1 = &v.component_1;
    let r = x1.rank();
    if r != 4 {
        return Err(Error::Consistency(format!(
            "stable vector with rank(X1) = {r}, expected 4"
        )));
    }
    match x1.mul(x1).rank() {
        2 => Ok(So7Orbit::OTheta),
        1 => Ok(So7Orbit::OP),
        k => Err(Error::Consistency(format!(
            "stable vector with rank(X1^2) = {k}, expected 1 or 2"
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftCertificate {
    pub orbit: So7Orbit,
    /// `det(q(p(Ad_{exp(aE_γ)}X)²))` as a polynomial in `a`.
    pub quartic: String,
    pub degree: Option<usize>,
    /// `a = 0` already lands in the small orbit.
    pub a_zero_works: bool,
    /// A root exists over the algebraic closure.
    pub solvable: bool,
}

/// The polynomial in `a` whose roots move `X₁` into the small orbit.
pub fn shift_polynomial(x: &Matrix<Rational>) -> Result<UniPoly> {
    let g = so7_grading()?;
    let xp = x.map(|v| MultiPoly::constant(v.clone()));
    let d = det2(&shifted_block(&g, &xp, 0)?);
    d.to_unipoly(0)
        .ok_or_else(|| Error::Consistency("shift polynomial is not univariate".into()))
}

/// Certify that some `a` moves a stable `X` into the small orbit. Roots are
/// never computed; a nonconstant polynomial has one.
pub fn so7_shift_to_small_orbit(x: &Matrix<Rational>) -> Result<ShiftCertificate> {
    let orbit = so7_orbit_of(x)?;
    if orbit == So7Orbit::NotStable {
        return Err(Error::Precondition("the vector is not stable".into()));
    }
    let poly = shift_polynomial(x)?;
    let a_zero_works = poly.eval(&Rational::zero()).is_zero();
    if (orbit == So7Orbit::OP) != a_zero_works {
        return Err(Error::Consistency(format!(
            "orbit {orbit:?} but the shift polynomial at a = 0 is {}",
            poly.eval(&Rational::zero())
        )));
    }
    let degree = poly.degree();
    if degree == Some(0) {
        return Err(Error::Contradiction(format!(
            "shift polynomial is the nonzero constant {}; no a reaches the small orbit",
            poly
        )));
    }
    Ok(ShiftCertificate {
        orbit,
        quartic: poly.display_in("a"),
        degree,
        a_zero_works,
        solvable: a_zero_works || degree.is_some_and(|d| d > 0),
    })
}

/// Worker pool honouring `THETA_FORGE_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("THETA_FORGE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Domain(format!("THETA_FORGE_THREADS={v:?} is not a count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub grading: String,
    pub samples: usize,
    pub seed: u64,
    pub height_bound: i64,
    pub types: BTreeMap<Partition, usize>,
    pub minimal: Vec<Partition>,
    pub maximal: Vec<Partition>,
    /// Type predicted for the small orbit (see [`orbit_census`]).
    pub richardson: Option<Partition>,
    /// `sampled` or `centralizer-dimension`.
    pub richardson_method: String,
    /// Output of the sampled parabolic oracle.
    pub richardson_sampled: Partition,
    /// Valid types whose centralizer dimension equals `dim g_0`.
    pub dimension_candidates: Vec<Partition>,
    pub richardson_observed: bool,
    pub richardson_is_minimal: bool,
    pub richardson_is_maximal: bool,
    /// Observed types strictly above the predicted one.
    pub above_richardson: Vec<Partition>,
}

const CENSUS_TRIES: usize = 500;
const RICHARDSON_TRIALS: usize = 40;

/// Sample `samples` stable vectors (sample `i` uses seed `seed + i`) and
/// tabulate the Jordan types of `X₁`.
///
/// The predicted type comes from the sampled parabolic oracle, except for
/// types A and D with `s_0 = 0`: there the parahoric's reductive quotient
/// involves the affine node and no finite parabolic models it, so the
/// prediction is the unique valid type whose centralizer has dimension
/// `dim g_0`.
pub fn orbit_census(g: &Grading, samples: usize, seed: u64, height_bound: i64) -> Result<OrbitCensus> {
    let found: Vec<Partition> = thread_pool()?.install(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_from_seed(seed.wrapping_add(i as u64));
                let s = sample_stable_from(g, &mut rng, height_bound, CENSUS_TRIES)?;
                jordan_type(&s.vector.component_1)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut types: BTreeMap<Partition, usize> = BTreeMap::new();
    for p in found {
        *types.entry(p).or_default() += 1;
    }
    let minimal = minimal_types(types.keys());
    let maximal = maximal_types(types.keys());
    let t = g.algebra().lie_type();
    let sampled = richardson_partition(g, seed, RICHARDSON_TRIALS, 10)?.partition;
    let candidates = types_with_centralizer_dim(t, g.zm_piece(0).len());
    let by_dimension = g.kac().s0() == 0 && matches!(t.family, Family::A | Family::D);
    let (rich, method) = if by_dimension {
        let unique = (candidates.len() == 1).then(|| candidates[0].clone());
        (unique, "centralizer-dimension")
    } else {
        (Some(sampled.clone()), "sampled")
    };
    let mut above = Vec::new();
    if let Some(r) = &rich {
        for p in types.keys() {
            if dominance_cmp(r, p)? == Some(std::cmp::Ordering::Less) {
                above.push(p.clone());
            }
        }
    }
    let has = |v: &[Partition]| rich.as_ref().is_some_and(|r| v.contains(r));
    Ok(OrbitCensus {
        grading: format!("{t} {}", g.kac()),
        samples,
        seed,
        height_bound,
        richardson_observed: rich.as_ref().is_some_and(|r| types.contains_key(r)),
        richardson_is_minimal: has(&minimal),
        richardson_is_maximal: has(&maximal),
        above_richardson: above,
        richardson: rich,
        richardson_method: method.into(),
        richardson_sampled: sampled,
        dimension_candidates: candidates,
        minimal,
        maximal,
        types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::KacCoords;

    #[test]
    fn goldens() {
        let s = so7_symbolic_state().unwrap();
        let g = so7_goldens(&s);
        // the printed characteristic polynomial is the computed one at -b
        assert!(!g.charpoly_matches && g.charpoly_matches_with_b_negated);
        assert_eq!(g.lambda5_coefficient, "0");
        assert_eq!(g.block_sign, Some(-1));
        assert!(g.det_block_matches_printed_matrix);
        assert_eq!(g.det_constant_term, "-1");
        assert!(!g.det_matches_displayed);
        assert_eq!(g.det_discrepancy_degrees_in_a, vec![4]);
        assert!(g.det_matches_with_square);
        assert_eq!(s.det_block.degree_in(A), Some(4));
        assert!(matches!(so7_build_symbolic(), Err(Error::Verification(_))));
    }

    #[test]
    fn elimination() {
        let r = so7_elimination_check().unwrap();
        assert!(r.passed, "{r:#?}");
        for red in &r.reductions {
            assert_eq!(red.cubic, "t^3 - 12*t^2 + 48*t - 64");
            assert_eq!(red.discriminant, "0");
            assert_eq!(red.factored, "(t - 4)^3");
        }
    }

    #[test]
    fn solved_point_is_not_stable() {
        // b1 = 3, b4 = 1 on the solved family
        let bs = [int(3), rat(-1, 4), int(-4), int(1), int(-4), int(3)];
        assert_eq!(so7_orbit_of(&so7_matrix(&bs)).unwrap(), So7Orbit::NotStable);
    }

    #[test]
    fn family_orbit_and_shift() {
        let x = so7_matrix(&[1, 1, 1, 1, 2, 3].map(int));
        assert_eq!(so7_orbit_of(&x).unwrap(), So7Orbit::OTheta);
        let cert = so7_shift_to_small_orbit(&x).unwrap();
        assert!(cert.solvable && !cert.a_zero_works);
        // b1 ≠ b6: linear term -2(b1 - b6) = 4
        let p = shift_polynomial(&x).unwrap();
        assert_eq!(p.coeff(1), int(4));
        assert_eq!(p.coeff(0), int(-1));
    }

    #[test]
    fn census_so7() {
        let g = so7_grading().unwrap();
        let c = orbit_census(&g, 200, 3, 2).unwrap();
        assert_eq!(c.types.values().sum::<usize>(), 200);
        let small = Partition::new(vec![3, 2, 2]);
        assert_eq!(c.richardson, Some(small.clone()));
        assert_eq!(c.dimension_candidates, vec![small]);
        assert_eq!(c.types.len(), 2, "{:?}", c.types);
        assert!(c.richardson_observed && !c.richardson_is_maximal);
        assert_eq!(c.above_richardson, vec![Partition::new(vec![3, 3, 1])]);
        let again = orbit_census(&g, 200, 3, 2).unwrap();
        assert_eq!(again.types, c.types);
    }

    #[test]
    fn census_labels_agree_with_orbit_rule() {
        let g = so7_grading().unwrap();
        let mut rng = rng_from_seed(11);
        let mut seen = BTreeMap::new();
        for _ in 0..40 {
            let s = sample_stable_from(&g, &mut rng, 4, 500).unwrap();
            let x = s.vector.component_1.add(&s.vector.component_1m);
            let o = so7_orbit_of(&x).unwrap();
            let jt = jordan_type(&s.vector.component_1).unwrap();
            let expect = if o == So7Orbit::OP { vec![3, 2, 2] } else { vec![3, 3, 1] };
            assert_eq!(jt, Partition::new(expect));
            *seen.entry(format!("{o:?}")).or_insert(0) += 1;
            so7_shift_to_small_orbit(&x).unwrap();
        }
    }

    #[test]
    fn census_sp4_single_type() {
        let t = LieType::new(Family::C, 2).unwrap();
        let g = kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, 2).unwrap()).unwrap();
        let c = orbit_census(&g, 30, 1, 5).unwrap();
        assert_eq!(c.types.keys().cloned().collect::<Vec<_>>(), vec![Partition::new(vec![2, 2])]);
    }

    #[test]
    fn census_type_d() {
        let t = LieType::new(Family::D, 4).unwrap();
        let g = kac_grading(&build_algebra(t).unwrap(), &KacCoords::new(vec![0, 0, 1, 0, 0])).unwrap();
        assert_eq!(g.order(), 2);
        let c = orbit_census(&g, 40, 5, 5).unwrap();
        assert!(c.types.len() >= 2, "{:?}", c.types);
        assert!(c.richardson_is_minimal, "{c:#?}");
    }
}
