use proptest::prelude::*;
use tilecount::arith::{rat, Cyclo, Rational};
use tilecount::hurwitz::{brute_force_monodromy, hurwitz_number};
use tilecount::partitions::{combine, Partition};
use tilecount::qseries::QSeries;
use tilecount::weights::w_n;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..8, 0..8).prop_map(Partition::from_multiset)
}

fn cyclo(order: u32) -> impl Strategy<Value = Cyclo> {
    prop::collection::vec(-6i64..7, 1..6).prop_map(move |v| {
        v.iter().enumerate().fold(Cyclo::zero(order), |acc, (e, &c)| acc + Cyclo::zeta(order, e as i64).scale(&rat(c, 1)))
    })
}

fn profile(d: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=d as u32, 0..3).prop_filter("fits", move |v| v.iter().sum::<u32>() as usize <= d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn core_quotient_round_trip(l in partition(), t in prop::sample::select(vec![2u32, 3, 4, 6])) {
        let cq = l.core_and_quotients(t);
        prop_assert!(cq.core.is_core(t));
        prop_assert_eq!(combine(&cq.core, &cq.quotients).unwrap(), l);
    }

    #[test]
    fn conjugation_is_an_involution(l in partition()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.conjugate().size(), l.size());
    }

    #[test]
    fn weights_are_bounded(l in partition(), n in prop::sample::select(vec![2u32, 3, 4, 6])) {
        let w = w_n(&l, n);
        prop_assert!(w.numer().magnitude() <= w.denom().magnitude());
    }

    #[test]
    fn cyclotomic_division(a in cyclo(12), b in cyclo(12)) {
        prop_assume!(!b.is_zero());
        let q = &a * &b.inv().unwrap();
        prop_assert_eq!(&q * &b, a);
    }

    #[test]
    fn series_inverse(c in prop::collection::vec(-5i64..6, 1..12)) {
        let mut c = c;
        c[0] = 1;
        let s = QSeries::from_ints(&c);
        let one = s.mul(&s.inverse().unwrap()).unwrap();
        prop_assert_eq!(one, QSeries::one(1, c.len()));
    }

    #[test]
    fn hurwitz_numbers_match_monodromy(d in 1usize..5, a in profile(4), b in profile(4), c in profile(4)) {
        let profiles: Vec<Vec<u32>> = [a, b, c].into_iter().filter(|p| !p.is_empty()).collect();
        let exact = hurwitz_number(d, &profiles);
        let brute = brute_force_monodromy(d, &profiles, false, 1_000_000).unwrap();
        prop_assert_eq!(exact, brute);
    }

    #[test]
    fn hurwitz_numbers_ignore_order(a in profile(5), b in profile(5)) {
        let x = hurwitz_number(5, &[a.clone(), b.clone()]);
        let y = hurwitz_number(5, &[b, a]);
        prop_assert_eq!(x, y);
        prop_assert!(hurwitz_number(5, &[]) == Rational::new(1.into(), 120.into()));
    }
}
