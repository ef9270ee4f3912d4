//! Theta-connections `d + (X₁ + X_{1−m} t) dt/t` and their local data.
//!
//! At `∞` the form is written in `s = 1/t`, pulled back along `s = u^m` and
//! gauged by `λ̌(u⁻¹)`. All of this is weight bookkeeping: conjugation by
//! `λ̌(u⁻¹)` moves entry `(i, j)` by `u^{w_j − w_i}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::ring::rational_to_string;
use crate::exactalg::{int, Matrix, MultiPoly, Rational, Ring};
use crate::grading::{kac_grading, stable_kac_coords, GradedVector, Grading, Stability};
use crate::liealg::{build_algebra, Family};
use crate::nilorbit::{jordan_type, Partition};
use crate::stablevec::charpoly;

#[derive(Clone, Debug)]
pub struct ThetaConnection {
    grading: Grading,
    vector: GradedVector,
}

/// A matrix-valued one-form `Σ_e C_e u^e du` with finitely many exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentForm {
    pub terms: BTreeMap<i64, Matrix<Rational>>,
}

impl LaurentForm {
    fn add_term(&mut self, e: i64, c: Matrix<Rational>) {
        let slot = self
            .terms
            .entry(e)
            .or_insert_with(|| Matrix::zeros(c.rows(), c.cols()));
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64, n: usize) -> Matrix<Rational> {
        self.terms.get(&e).cloned().unwrap_or_else(|| Matrix::zeros(n, n))
    }
}

/// Gauge by `diag(u^{-sign·w_i})`: entry `(i, j)` moves by
/// `sign·(w_j − w_i)` and the logarithmic term `−sign·λ̌ u⁻¹` is added.
fn gauge(form: &LaurentForm, weights: &[Rational], sign: i64) -> Result<LaurentForm> {
    let n = weights.len();
    let mut out = LaurentForm {
        terms: BTreeMap::new(),
    };
    for (&e, c) in &form.terms {
        for i in 0..n {
            for j in 0..n {
                if c.get(i, j).is_zero() {
                    continue;
                }
                let d = weights[j].sub(&weights[i]);
                if !d.is_integer() {
                    return Err(Error::Consistency(format!(
                        "entry ({i},{j}) has non-integral weight difference {d}"
                    )));
                }
                let shift: i64 = d.to_integer().try_into().expect("small");
                let mut single = Matrix::zeros(n, n);
                single.set(i, j, c.get(i, j).clone());
                out.add_term(e + sign * shift, single);
            }
        }
    }
    let lam = Matrix::diagonal(weights);
    out.add_term(-1, lam.scale(&int(-sign)));
    Ok(out)
}

impl ThetaConnection {
    /// Attach the connection to a certified-stable vector.
    pub fn build(g: &Grading, v: &GradedVector) -> Result<Self> {
        if v.stability != Stability::Stable {
            return Err(Error::Precondition(
                "theta-connections are built from certified-stable vectors".into(),
            ));
        }
        Ok(Self::build_unchecked(g, v))
    }

    /// No stability requirement; for probing degenerate inputs.
    pub fn build_unchecked(g: &Grading, v: &GradedVector) -> Self {
        Self {
            grading: g.clone(),
            vector: v.clone(),
        }
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn vector(&self) -> &GradedVector {
        &self.vector
    }

    /// Constant and linear coefficients `(X₁, X_{1−m})` in `t`.
    pub fn coefficient(&self) -> (&Matrix<Rational>, &Matrix<Rational>) {
        (&self.vector.component_1, &self.vector.component_1m)
    }

    fn m(&self) -> i64 {
        self.grading.order() as i64
    }

    /// The form at `∞` in `s = 1/t`, as `Σ C_e s^e ds`:
    /// `−X₁ s⁻¹ − X_{1−m} s⁻²`.
    pub fn form_at_infty(&self) -> LaurentForm {
        let mut f = LaurentForm {
            terms: BTreeMap::new(),
        };
        f.add_term(-1, self.vector.component_1.neg());
        f.add_term(-2, self.vector.component_1m.neg());
        f
    }

    /// Pull back along `s = u^m` and gauge by `λ̌(u⁻¹)`.
    pub fn gauged_form(&self) -> Result<LaurentForm> {
        let m = self.m();
        let mut pulled = LaurentForm {
            terms: BTreeMap::new(),
        };
        // s^e ds = m u^{m e + m − 1} du
        for (&e, c) in &self.form_at_infty().terms {
            pulled.add_term(m * e + m - 1, c.scale(&int(m)));
        }
        gauge(&pulled, self.grading.weights(), 1)
    }

    /// Coefficients of `du/u²` and `du/u` after the gauge; errors if any
    /// other power survives.
    pub fn leading_term_at_infty(&self) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
        let f = self.gauged_form()?;
        let n = self.vector.matrix.rows();
        if let Some(e) = f.terms.keys().find(|&&e| e != -2 && e != -1) {
            return Err(Error::Consistency(format!(
                "gauged form has a u^{e} du term"
            )));
        }
        Ok((f.coeff(-2, n), f.coeff(-1, n)))
    }

    /// Undo the gauge with `λ̌(u)` and push forward along `u ↦ u^m`; must
    /// give back [`ThetaConnection::form_at_infty`].
    pub fn gauge_round_trip(&self) -> Result<bool> {
        let m = self.m();
        let back = gauge(&self.gauged_form()?, self.grading.weights(), -1)?;
        let mut pushed = LaurentForm {
            terms: BTreeMap::new(),
        };
        for (&e, c) in &back.terms {
            // u^e du = (1/m) s^{(e + 1)/m − 1} ds
            if (e + 1).rem_euclid(m) != 0 {
                return Ok(false);
            }
            pushed.add_term((e + 1) / m - 1, c.scale(&Rational::new(1.into(), m.into())));
        }
        Ok(pushed == self.form_at_infty())
    }

    /// Slope at `∞` from the leading coefficient: `1/m` when `−mX` is not
    /// nilpotent, `None` when the criterion does not apply.
    pub fn slope_by_criterion(&self) -> Result<Option<Rational>> {
        let (lead, _) = self.leading_term_at_infty()?;
        let nilpotent = lead.pow(lead.rows() as u32).is_zero();
        Ok((!nilpotent).then(|| Rational::new(1.into(), self.m().into())))
    }

    /// Slope from the Newton polygon of `det(λ − B(s))`,
    /// `B(s) = −(X₁ + X_{1−m}s⁻¹)/s`, computed without any gauge.
    pub fn slope_by_newton_polygon(&self) -> Result<Rational> {
        // B in the variable τ = s⁻¹: −(X₁ τ + X_{1−m} τ²)
        let tau = MultiPoly::var(0);
        let tau2 = tau.mul(&tau);
        let lift = |x: &Matrix<Rational>, p: &MultiPoly| x.map(|q| p.mul(&MultiPoly::constant(q.clone())));
        let b = lift(&self.vector.component_1, &tau)
            .add(&lift(&self.vector.component_1m, &tau2))
            .neg();
        let coeffs = b.charpoly_coeffs()?;
        // valuation in s of a polynomial in τ is −deg_τ
        let points: Vec<(i64, i64)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, -(c.degree_in(0).unwrap_or(0) as i64)))
            .collect();
        let mut best = Rational::zero();
        for (a, &(k1, v1)) in points.iter().enumerate() {
            for &(k2, v2) in &points[a + 1..] {
                // segment of the lower hull: all points on or above the line
                let on_hull = points.iter().all(|&(k, v)| {
                    (v - v1) * (k2 - k1) >= (v2 - v1) * (k - k1)
                });
                if !on_hull {
                    continue;
                }
                // roots of valuation ν = −(v2 − v1)/(k2 − k1); slope −ν − 1
                let nu = Rational::new((v1 - v2).into(), (k2 - k1).into());
                let slope = nu.neg().sub(&Rational::one());
                if slope > best {
                    best = slope;
                }
            }
        }
        Ok(best)
    }

    /// Both slope computations; errors when they disagree.
    pub fn slope(&self) -> Result<Rational> {
        let oracle = self.slope_by_newton_polygon()?;
        match self.slope_by_criterion()? {
            Some(s) if s == oracle => Ok(s),
            Some(s) => Err(Error::Consistency(format!(
                "slope criterion gives {s}, Newton polygon gives {oracle}"
            ))),
            None => Err(Error::Precondition(format!(
                "leading coefficient is nilpotent; the criterion does not apply \
                 (Newton polygon gives {oracle})"
            ))),
        }
    }

    /// `(dim g − dim ker ad X)/m`.
    pub fn adjoint_irregularity(&self) -> Result<Rational> {
        let l = self.grading.algebra();
        let nullity = l.ad_matrix(&self.vector.matrix)?.nullity();
        Ok(Rational::new(
            ((l.dim() - nullity) as i64).into(),
            self.m().into(),
        ))
    }

    /// Number of nonzero eigenvalues of `X` on the standard representation,
    /// over `m`.
    pub fn std_irregularity(&self) -> Result<Rational> {
        let p = charpoly(&self.vector.matrix)?;
        let nonzero = self.vector.matrix.rows() - p.zero_root_multiplicity();
        Ok(Rational::new((nonzero as i64).into(), self.m().into()))
    }

    pub fn residue_partition(&self) -> Result<Partition> {
        jordan_type(&self.vector.component_1)
    }

    /// `dim C(X₁)` against `dim g₀` of the dual-type stable grading of the
    /// same order and `|Φ|/m`.
    pub fn centralizer_identity(&self) -> Result<CentralizerReport> {
        let l = self.grading.algebra();
        let x1 = &self.vector.component_1;
        jordan_type(x1).map_err(|_| Error::Precondition("X1 is not nilpotent".into()))?;
        let centralizer_dim = l.ad_matrix(x1)?.nullity();
        let t = l.lie_type();
        let m = self.grading.order();
        let g0_dim = match t.family {
            Family::B | Family::C => {
                let d = t.dual();
                let dg = kac_grading(&build_algebra(d)?, &stable_kac_coords(d, m)?)?;
                dg.zm_piece(0).len()
            }
            _ => self.grading.zm_piece(0).len(),
        };
        let phi_over_m = Rational::new((l.root_count() as i64).into(), (m as i64).into());
        let agree =
            Rational::from_int(centralizer_dim as i64) == phi_over_m && centralizer_dim == g0_dim;
        Ok(CentralizerReport {
            centralizer_dim,
            g0_dim,
            phi_over_m: rational_to_string(&phi_over_m),
            agree,
        })
    }

    /// Every local invariant, with the two slope methods cross-checked.
    pub fn local_invariants(&self) -> Result<LocalInvariants> {
        let (lead, log) = self.leading_term_at_infty()?;
        let m = int(self.m());
        let x = &self.vector.matrix;
        let lam = Matrix::diagonal(self.grading.weights());
        let c = self.centralizer_identity()?;
        Ok(LocalInvariants {
            residue_partition: self.residue_partition()?,
            residue_nilpotent: self.vector.component_1.pow(x.rows() as u32).is_zero(),
            slope_at_infty: rational_to_string(&self.slope()?),
            leading_is_minus_m_x: lead == x.scale(&m).neg(),
            log_is_minus_coweight: log == lam.neg(),
            gauge_round_trip: self.gauge_round_trip()?,
            adjoint_irregularity: rational_to_string(&self.adjoint_irregularity()?),
            std_irregularity: rational_to_string(&self.std_irregularity()?),
            centralizer_dim: c.centralizer_dim,
            g0_dim: c.g0_dim,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralizerReport {
    pub centralizer_dim: usize,
    pub g0_dim: usize,
    pub phi_over_m: String,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalInvariants {
    pub residue_partition: Partition,
    pub residue_nilpotent: bool,
    pub slope_at_infty: String,
    pub leading_is_minus_m_x: bool,
    pub log_is_minus_coweight: bool,
    pub gauge_round_trip: bool,
    pub adjoint_irregularity: String,
    pub std_irregularity: String,
    pub centralizer_dim: usize,
    pub g0_dim: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::grading::KacCoords;
    use crate::liealg::LieType;
    use crate::stablevec::{rng_from_seed, sample_stable_from};

    fn stable_grading(f: Family, n: usize, m: usize) -> Grading {
        let t = LieType::new(f, n).unwrap();
        kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, m).unwrap()).unwrap()
    }

    fn sample(g: &Grading, seed: u64) -> GradedVector {
        sample_stable_from(g, &mut rng_from_seed(seed), 5, 500).unwrap().vector
    }

    #[test]
    fn sp4_invariants() {
        let g = stable_grading(Family::C, 2, 2);
        let c = ThetaConnection::build(&g, &sample(&g, 4)).unwrap();
        let inv = c.local_invariants().unwrap();
        assert_eq!(inv.slope_at_infty, "1/2");
        assert_eq!(inv.adjoint_irregularity, "4");
        assert_eq!(inv.std_irregularity, "2");
        assert_eq!((inv.centralizer_dim, inv.g0_dim), (4, 4));
        assert!(inv.leading_is_minus_m_x && inv.log_is_minus_coweight && inv.gauge_round_trip);
        assert_eq!(inv.residue_partition, Partition::new(vec![2, 2]));
    }

    #[test]
    fn so9_order_four() {
        let g = stable_grading(Family::B, 4, 4);
        let c = ThetaConnection::build(&g, &sample(&g, 2)).unwrap();
        assert_eq!(c.slope().unwrap(), rat(1, 4));
        assert_eq!(c.adjoint_irregularity().unwrap(), int(8));
        let r = c.centralizer_identity().unwrap();
        assert_eq!((r.centralizer_dim, r.g0_dim, r.phi_over_m.as_str()), (8, 8, "8"));
        assert!(r.agree);
    }

    #[test]
    fn zero_vector_leading_term() {
        let g = stable_grading(Family::C, 2, 2);
        let z = g.split_components(&Matrix::zeros(4, 4)).unwrap();
        let c = ThetaConnection::build_unchecked(&g, &z);
        let (lead, log) = c.leading_term_at_infty().unwrap();
        assert!(lead.is_zero());
        assert_eq!(log, Matrix::diagonal(g.weights()).neg());
        assert!(ThetaConnection::build(&g, &z).is_err());
    }

    #[test]
    fn nilpotent_vector_has_smaller_slope() {
        let g = stable_grading(Family::C, 2, 2);
        let x1 = g.project(&sample(&g, 1).matrix, |d| d == 1);
        let c = ThetaConnection::build_unchecked(&g, &g.split_components(&x1).unwrap());
        assert!(c.slope_by_criterion().unwrap().is_none());
        assert!(c.slope_by_newton_polygon().unwrap() < rat(1, 2));
        assert!(c.slope().is_err());
    }

    #[test]
    fn coxeter_a2() {
        let l = build_algebra(LieType::new(Family::A, 2).unwrap()).unwrap();
        let g = kac_grading(&l, &KacCoords::new(vec![1, 1, 1])).unwrap();
        let c = ThetaConnection::build(&g, &sample(&g, 9)).unwrap();
        let r = c.centralizer_identity().unwrap();
        assert_eq!((r.centralizer_dim, r.g0_dim), (2, 2));
        assert!(r.agree);
        assert_eq!(c.slope().unwrap(), rat(1, 3));
        assert!(c.gauge_round_trip().unwrap());
    }
}
