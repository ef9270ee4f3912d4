mod common;

use common::kernel::*;
use proptest::prelude::*;
use theta_forge::exactalg::{rat, Matrix, Rational, Ring};
use theta_forge::nilorbit::{jordan_type, rank_sequence, Partition};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(KERNEL_CASES))]

    #[test]
    fn prop_cayley_hamilton(m in square(4)) {
        cayley_hamilton(m)?;
    }

    #[test]
    fn prop_rank_nullity(m in rectangular()) {
        rank_nullity(m)?;
    }

    #[test]
    fn prop_squarefree_coherence(p in split_poly(), d in 1i64..=4) {
        squarefree_coherence(p, d)?;
    }

    #[test]
    fn prop_specialization_commutes(
        entries in prop::collection::vec(poly2(), 9),
        x in small_rational(),
        y in small_rational(),
    ) {
        specialization_commutes(entries, x, y)?;
    }
}

fn nilpotent_upper(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(prop_oneof![Just(0i64), -2i64..=2], n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| if j > i { rat(v[i * n + j], 1) } else { Rational::zero() })
    })
}

fn unit_lower(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => Rational::one(),
            std::cmp::Ordering::Greater => rat(v[i * n + j], 1),
            std::cmp::Ordering::Less => Rational::zero(),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jordan_type_is_conjugation_invariant(n in nilpotent_upper(5), g in unit_lower(5)) {
        let conj = g.mul(&n).mul(&g.inverse().unwrap());
        prop_assert_eq!(jordan_type(&conj).unwrap(), jordan_type(&n).unwrap());
    }

    #[test]
    fn rank_sequence_recovers_transpose(n in nilpotent_upper(6)) {
        let r = rank_sequence(&n).unwrap();
        prop_assert!(r.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(r.last(), Some(&0));
        let p = jordan_type(&n).unwrap();
        prop_assert_eq!(p.size(), 6);
        // column lengths of the diagram are the rank drops
        let drops: Vec<usize> = r.windows(2).map(|w| w[0] - w[1]).filter(|&d| d > 0).collect();
        prop_assert_eq!(p.transpose(), Partition::new(drops));
    }
}
