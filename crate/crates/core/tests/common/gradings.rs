//! The tabulated stable gradings of types A, B, C.

use theta_forge::grading::{kac_grading, stable_kac_coords, supported_orders, Grading};
use theta_forge::liealg::{build_algebra, Family, LieType};

pub fn lie_type(f: Family, n: usize) -> LieType {
    LieType::new(f, n).unwrap()
}

pub fn stable_grading(f: Family, n: usize, m: usize) -> Grading {
    let t = lie_type(f, n);
    kac_grading(&build_algebra(t).unwrap(), &stable_kac_coords(t, m).unwrap()).unwrap()
}

/// Every tabulated stable grading of rank `2..=max_rank`.
pub fn supported_gradings(max_rank: usize) -> Vec<Grading> {
    let mut out = Vec::new();
    for f in [Family::A, Family::B, Family::C] {
        for n in 2..=max_rank {
            let t = lie_type(f, n);
            for m in supported_orders(t) {
                out.push(stable_grading(f, n, m));
            }
        }
    }
    out
}

pub fn label(g: &Grading) -> String {
    format!("{} m={} kac={}", g.algebra().lie_type(), g.order(), g.kac())
}
