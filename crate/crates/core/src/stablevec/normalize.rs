//! Conjugation of stable vectors into the canonical degree-one forms.
//!
//! The conjugating element lives in the Levi `G(0)` and is built block by
//! block. Square roots are unavoidable (a symmetric form must become the
//! identity, an isotropic line must be found), so the work happens in a
//! multiquadratic extension of the rationals.

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Rational, Ring, Surd, SurdField, UniPoly};
use crate::grading::{stable_kac_coords, GradedVector, Grading, Stability};
use crate::liealg::Family;

use super::{charpoly, is_stable};

/// A stable vector after conjugation by `g ∈ G(0)`.
#[derive(Clone, Debug)]
pub struct NormalizedVector {
    pub field: SurdField,
    /// The conjugating element.
    pub g: Matrix<Surd>,
    /// `g X g⁻¹`.
    pub x: Matrix<Surd>,
    /// Its degree-one part, equal to the canonical form.
    pub x1: Matrix<Rational>,
    /// Its degree `1 − m` part.
    pub x1m: Matrix<Surd>,
}

fn to_surd(m: &Matrix<Rational>) -> Matrix<Surd> {
    m.map(Surd::from_rational)
}

fn anti_identity<T: Ring>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { T::one() } else { T::zero() })
}

/// `P` invertible and `d` with `P S Pᵀ = diag(d)` for symmetric `S`.
pub fn congruence_diagonalize(s: &Matrix<Rational>) -> Result<(Matrix<Rational>, Vec<Rational>)> {
    let n = s.rows();
    let mut a = s.clone();
    let mut p: Matrix<Rational> = Matrix::identity(n);
    // apply the row operation E on the left of P and as E·A·Eᵀ on A
    let add_row = |m: &mut Matrix<Rational>, dst: usize, src: usize, f: &Rational| {
        for j in 0..m.cols() {
            let v = m.get(dst, j).add(&f.mul(m.get(src, j)));
            m.set(dst, j, v);
        }
    };
    let add_col = |m: &mut Matrix<Rational>, dst: usize, src: usize, f: &Rational| {
        for i in 0..m.rows() {
            let v = m.get(i, dst).add(&f.mul(m.get(i, src)));
            m.set(i, dst, v);
        }
    };
    for i in 0..n {
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                let one = Rational::one();
                add_row(&mut a, i, j, &one);
                add_col(&mut a, i, j, &one);
                add_row(&mut p, i, j, &one);
            }
        }
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a.get(i, j).is_zero()) {
                let one = Rational::one();
                add_row(&mut a, i, j, &one);
                add_col(&mut a, i, j, &one);
                add_row(&mut p, i, j, &one);
            }
        }
        let piv = a.get(i, i).clone();
        if piv.is_zero() {
            return Err(Error::Contradiction(
                "symmetric block is singular; the vector cannot be stable".into(),
            ));
        }
        for j in i + 1..n {
            let f = a.get(j, i).div(&piv).expect("nonzero pivot").neg();
            if f.is_zero() {
                continue;
            }
            add_row(&mut a, j, i, &f);
            add_col(&mut a, j, i, &f);
            add_row(&mut p, j, i, &f);
        }
    }
    let d = (0..n).map(|i| a.get(i, i).clone()).collect();
    Ok((p, d))
}

/// Block-diagonal `diag(M_1, …, M_h, [N], s M^{-T} s)` for the weight blocks.
fn assemble(
    n: usize,
    blocks: &[std::ops::Range<usize>],
    outer: &[Matrix<Surd>],
    middle: Option<&Matrix<Surd>>,
) -> Result<Matrix<Surd>> {
    let h: usize = outer.iter().map(Matrix::rows).sum();
    let mut big = Matrix::zeros(h, h);
    for (b, m) in outer.iter().enumerate() {
        big.set_block(blocks[b].start, blocks[b].start, m);
    }
    let s: Matrix<Surd> = anti_identity(h);
    let mirror = s.mul(&big.inverse()?.transpose()).mul(&s);
    let mut g = Matrix::zeros(n, n);
    g.set_block(0, 0, &big);
    if let Some(nm) = middle {
        g.set_block(h, h, nm);
    }
    g.set_block(n - h, n - h, &mirror);
    Ok(g)
}

fn block(x: &Matrix<Rational>, r: &std::ops::Range<usize>, c: &std::ops::Range<usize>) -> Matrix<Rational> {
    x.block(r.start, c.start, r.len(), c.len())
}

fn entries_of_block(
    r: &std::ops::Range<usize>,
    c: &std::ops::Range<usize>,
    m: &Matrix<Rational>,
) -> Vec<((usize, usize), Rational)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(((r.start + i, c.start + j), m.get(i, j).clone()));
        }
    }
    out
}

/// The literal canonical degree-one component for the supported gradings.
pub fn canonical_x1(g: &Grading) -> Result<Matrix<Rational>> {
    let blocks: Vec<_> = g.weight_blocks().into_iter().map(|(_, r)| r).collect();
    let m = g.order();
    let h = m / 2;
    let mut entries = Vec::new();
    match supported_kind(g)? {
        Kind::C => {
            for i in 1..h {
                let k = blocks[i].len();
                entries.extend(entries_of_block(&blocks[i - 1], &blocks[i], &Matrix::identity(k)));
            }
            let k = blocks[h].len();
            entries.extend(entries_of_block(&blocks[h - 1], &blocks[h], &anti_identity(k)));
        }
        Kind::B => {
            let ones = Matrix::from_rows(vec![vec![Rational::one(), Rational::one()]]);
            entries.extend(entries_of_block(&blocks[0], &blocks[1], &ones));
            for i in 2..h {
                entries.extend(entries_of_block(&blocks[i - 1], &blocks[i], &Matrix::identity(2)));
            }
            let i23 = Matrix::from_ints(&[&[1, 0, 0], &[0, 0, 1]]);
            entries.extend(entries_of_block(&blocks[h - 1], &blocks[h], &i23));
        }
    }
    g.algebra().element_from_entries(&entries)
}

enum Kind {
    C,
    B,
}

fn supported_kind(g: &Grading) -> Result<Kind> {
    let t = g.algebra().lie_type();
    let m = g.order();
    let tabulated = stable_kac_coords(t, m).ok();
    match t.family {
        Family::C if tabulated.as_ref() == Some(g.kac()) => Ok(Kind::C),
        Family::B if m == t.rank && m.is_multiple_of(2) && m >= 4 && tabulated.as_ref() == Some(g.kac()) => {
            Ok(Kind::B)
        }
        _ => Err(Error::Unsupported(format!(
            "normal form is implemented for the tabulated type C gradings and for type B with \
             m = n even, n >= 4; got {t} with Kac coordinates {}",
            g.kac()
        ))),
    }
}

/// Conjugate a stable vector into its canonical form and certify the result.
pub fn normalize(g: &Grading, v: &GradedVector) -> Result<NormalizedVector> {
    let kind = supported_kind(g)?;
    match v.stability {
        Stability::Stable => {}
        Stability::Unstable => {
            return Err(Error::Precondition("normalize needs a stable vector".into()))
        }
        Stability::Unchecked => {
            if !is_stable(g, v)?.stable {
                return Err(Error::Precondition("normalize needs a stable vector".into()));
            }
        }
    }
    let x = &v.matrix;
    let blocks: Vec<_> = g.weight_blocks().into_iter().map(|(_, r)| r).collect();
    let (field, gm) = match kind {
        Kind::C => conjugator_c(g, x, &blocks)?,
        Kind::B => conjugator_b(g, x, &blocks)?,
    };
    let l = g.algebra();
    if !l.group_contains(&gm)? || !g.preserves_weights(&gm) {
        return Err(Error::Verification(
            "conjugating element is not in the degree-zero group".into(),
        ));
    }
    let xs = to_surd(x);
    let conj = gm.mul(&xs).mul(&gm.inverse()?);
    let x1 = g.project(&conj, |d| d == 1);
    let x1m = g.project(&conj, |d| d == 1 - g.order() as i64);
    let canon = canonical_x1(g)?;
    if x1 != to_surd(&canon) {
        return Err(Error::Verification(format!(
            "conjugated degree-one part differs from the canonical form: {x1:?}"
        )));
    }
    let before: Vec<Surd> = charpoly(x)?.coeffs().iter().map(Surd::from_rational).collect();
    let after = conj.charpoly_coeffs()?;
    if before != after {
        return Err(Error::Verification(
            "characteristic polynomial changed under conjugation".into(),
        ));
    }
    Ok(NormalizedVector {
        field,
        g: gm,
        x: conj,
        x1: canon,
        x1m,
    })
}

/// Type C: `A_{m/2}s` is symmetric; make it the identity by congruence and
/// propagate with `M_i = M_{i+1} A_i⁻¹`.
fn conjugator_c(
    g: &Grading,
    x: &Matrix<Rational>,
    blocks: &[std::ops::Range<usize>],
) -> Result<(SurdField, Matrix<Surd>)> {
    let h = g.order() / 2;
    let k = blocks[0].len();
    let a_mid = block(x, &blocks[h - 1], &blocks[h]);
    let sym = a_mid.mul(&anti_identity(k));
    let (p, d) = congruence_diagonalize(&sym)?;
    let mut field = SurdField::rationals();
    let mut inv_roots = Vec::with_capacity(k);
    for di in &d {
        let (f, r) = field.adjoin_sqrt(di);
        field = f;
        inv_roots.push(r.inv().expect("nonzero diagonal"));
    }
    let mut ms: Vec<Matrix<Surd>> = vec![Matrix::zeros(k, k); h];
    ms[h - 1] = Matrix::diagonal(&inv_roots).mul(&to_surd(&p));
    for i in (1..h).rev() {
        let a = block(x, &blocks[i - 1], &blocks[i]);
        let ainv = a.inverse().map_err(|_| {
            Error::Contradiction(format!("block A_{i} is singular; the vector cannot be stable"))
        })?;
        ms[i - 1] = ms[i].mul(&to_surd(&ainv));
    }
    let gm = assemble(x.rows(), blocks, &ms, None)?;
    Ok((field, gm))
}

fn form3(a: &[Surd], b: &[Surd]) -> Surd {
    // J' = [[0,0,1],[0,2,0],[1,0,0]]
    a[0].mul(&b[2])
        .add(&a[2].mul(&b[0]))
        .add(&Surd::from_int(2).mul(&a[1]).mul(&b[1]))
}

/// Type B, `m = n` even: send the row space of `A_{m/2}` to `⟨e_1, e_3⟩` by a
/// hyperbolic basis, chain the middle blocks to `I`, then rescale `A_1`.
fn conjugator_b(
    g: &Grading,
    x: &Matrix<Rational>,
    blocks: &[std::ops::Range<usize>],
) -> Result<(SurdField, Matrix<Surd>)> {
    let h = g.order() / 2;
    let a_mid = block(x, &blocks[h - 1], &blocks[h]);
    let r1: Vec<Surd> = a_mid.row(0).iter().map(Surd::from_rational).collect();
    let r2: Vec<Surd> = a_mid.row(1).iter().map(Surd::from_rational).collect();
    let q1 = form3(&r1, &r1).as_rational().expect("rational");
    let q2 = form3(&r2, &r2).as_rational().expect("rational");
    let b = form3(&r1, &r2).as_rational().expect("rational");
    let delta = b.mul(&b).sub(&q1.mul(&q2));
    if delta.is_zero() {
        return Err(Error::Contradiction(
            "row space of the middle block is degenerate; the vector cannot be stable".into(),
        ));
    }
    let (mut field, root) = SurdField::rationals().adjoin_sqrt(&delta);
    let bs = Surd::from_rational(&b);
    // coefficient rows (on r1, r2) of the two isotropic lines
    let (cu, cu2): ([Surd; 2], [Surd; 2]) = if !q2.is_zero() {
        let q2i = Surd::from_rational(&q2.inv().expect("nonzero"));
        let t1 = bs.neg().add(&root).mul(&q2i);
        let t2 = bs.neg().sub(&root).mul(&q2i);
        ([Surd::one(), t1], [Surd::one(), t2])
    } else if !q1.is_zero() {
        let t = Surd::from_rational(&Rational::from_int(-2).mul(&b).div(&q1).expect("nonzero"));
        ([Surd::zero(), Surd::one()], [t, Surd::one()])
    } else {
        ([Surd::one(), Surd::zero()], [Surd::zero(), Surd::one()])
    };
    let comb = |c: &[Surd; 2]| -> Vec<Surd> {
        (0..3).map(|j| c[0].mul(&r1[j]).add(&c[1].mul(&r2[j]))).collect()
    };
    let u = comb(&cu);
    let u2 = comb(&cu2);
    let beta = form3(&u, &u2);
    let beta_inv = beta
        .inv()
        .ok_or_else(|| Error::Contradiction("isotropic lines are orthogonal".into()))?;
    let v: Vec<Surd> = u2.iter().map(|e| e.mul(&beta_inv)).collect();
    let c_mat = Matrix::from_rows(vec![
        cu.to_vec(),
        cu2.iter().map(|e| e.mul(&beta_inv)).collect(),
    ]);
    // w spans the orthogonal complement of ⟨u, v⟩
    let jp: Matrix<Surd> = Matrix::from_ints(&[&[0, 0, 1], &[0, 2, 0], &[1, 0, 0]]).map(Surd::from_rational);
    let uv = Matrix::from_rows(vec![u.clone(), v.clone()]).mul(&jp);
    let kernel = uv.nullspace();
    if kernel.len() != 1 {
        return Err(Error::Contradiction("middle block does not have rank two".into()));
    }
    let w0 = kernel[0].clone();
    let det = Matrix::from_rows(vec![u.clone(), w0.clone(), v.clone()]).det()?;
    let det_inv = det
        .inv()
        .ok_or_else(|| Error::Contradiction("degenerate hyperbolic frame".into()))?;
    let w: Vec<Surd> = w0.iter().map(|e| e.mul(&det_inv)).collect();
    let mut nmat = Matrix::from_rows(vec![u, w, v]);
    // chain the 2x2 blocks
    let mut ms: Vec<Matrix<Surd>> = vec![Matrix::zeros(2, 2); h];
    ms[h - 1] = c_mat;
    for i in (2..h).rev() {
        let a = block(x, &blocks[i - 1], &blocks[i]);
        let ainv = a.inverse().map_err(|_| {
            Error::Contradiction(format!("block A_{i} is singular; the vector cannot be stable"))
        })?;
        ms[i - 1] = ms[i].mul(&to_surd(&ainv));
    }
    let a1 = to_surd(&block(x, &blocks[0], &blocks[1]));
    let a1p = a1.mul(&ms[1].inverse().map_err(|_| {
        Error::Contradiction("singular block in the chain".into())
    })?);
    let (x1, x2) = (a1p.get(0, 0).clone(), a1p.get(0, 1).clone());
    let prod = x1.mul(&x2).as_rational().ok_or_else(|| {
        Error::Unsupported("rescaling factor needs a square root of an irrational number".into())
    })?;
    if prod.is_zero() {
        return Err(Error::Contradiction(
            "a coordinate of A_1 vanishes; the vector cannot be stable".into(),
        ));
    }
    let (f2, sq) = field.adjoin_sqrt(&prod);
    field = f2;
    let c = sq.inv().expect("nonzero");
    let a = c.mul(&x1);
    let ainv = a.inv().expect("nonzero");
    let d2 = Matrix::diagonal(&[a.clone(), ainv.clone()]);
    for m in ms.iter_mut().skip(1) {
        *m = d2.mul(m);
    }
    ms[0] = Matrix::diagonal(&[c]);
    nmat = Matrix::diagonal(&[a, Surd::one(), ainv]).mul(&nmat);
    let gm = assemble(x.rows(), blocks, &ms, Some(&nmat))?;
    Ok((field, gm))
}

/// Characteristic polynomial of the canonical representative, for reports.
pub fn canonical_charpoly(n: &NormalizedVector) -> Option<UniPoly> {
    let coeffs: Option<Vec<Rational>> = n
        .x
        .charpoly_coeffs()
        .ok()?
        .iter()
        .map(Surd::as_rational)
        .collect();
    coeffs.map(UniPoly::new)
}
