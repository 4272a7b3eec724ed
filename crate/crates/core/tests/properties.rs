use num_bigint::BigInt;
use proptest::prelude::*;

use etacheck::arith::{binom_exact, binom_mod2, binom_shifted_mod_l, omega, residue};
use etacheck::partitions::{enum_partitions, FrequencyConstraint};
use etacheck::series::{eta_factor, eta_product, eta_product_mod, EtaProductSpec, IntSeries};

fn series(order: usize) -> impl Strategy<Value = IntSeries> {
    prop::collection::vec(-1_000_000i64..1_000_000, order + 1)
        .prop_map(move |c| IntSeries::from_i64s(&c, order).unwrap())
}

fn unit_series(order: usize) -> impl Strategy<Value = IntSeries> {
    (series(order), any::<bool>()).prop_map(move |(s, neg)| {
        let mut c = s.into_coeffs();
        c[0] = BigInt::from(if neg { -1 } else { 1 });
        IntSeries::new(c, order).unwrap()
    })
}

fn spec() -> impl Strategy<Value = EtaProductSpec> {
    (0usize..3, prop::collection::vec((1u64..6, -4i64..5), 0..4))
        .prop_map(|(d, f)| EtaProductSpec::new(d, f).unwrap())
}

proptest! {
    #[test]
    fn ring_laws(a in series(12), b in series(12), c in series(12)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series(15)) {
        let g = a.invert().unwrap();
        prop_assert_eq!(&a * &g, IntSeries::one(15));
        prop_assert_eq!(&g * &a, IntSeries::one(15));
        prop_assert_eq!(a.pow(-2).unwrap(), &g * &g);
    }

    #[test]
    fn sparse_kernels_match_dense(a in series(40), c in 1u64..8) {
        let mut x = a.clone();
        x.mul_eta_factor(c);
        prop_assert_eq!(&x, &(&a * &eta_factor(c, 40)));
        x.div_eta_factor(c);
        prop_assert_eq!(x, a);
    }

    #[test]
    fn spec_exponents_add(s in spec(), t in spec()) {
        let merged = EtaProductSpec::new(
            s.delta() + t.delta(),
            s.factors().iter().chain(t.factors()).map(|f| (f.scale, f.exponent)),
        ).unwrap();
        prop_assert_eq!(eta_product(&merged, 30), &eta_product(&s, 30) * &eta_product(&t, 30));
    }

    #[test]
    fn modular_expansion_commutes_with_reduction(s in spec(), m in 2u64..200) {
        prop_assert_eq!(eta_product_mod(&s, 40, m).unwrap(), eta_product(&s, 40).reduce_mod(m).unwrap());
    }

    #[test]
    fn spec_display_round_trips(s in spec()) {
        prop_assert_eq!(s.to_string().parse::<EtaProductSpec>().unwrap(), s);
    }

    #[test]
    fn lucas_parity(n in 0u64..2000, k in 0u64..2000) {
        prop_assert_eq!(binom_mod2(n, k) as u64, residue(&binom_exact(n, k as i64), 2));
    }

    #[test]
    fn shifted_binomial(n in 0u64..3000, l in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23]), k in 1u64..23) {
        prop_assume!(k < l);
        prop_assert_eq!(binom_shifted_mod_l(n, k, l).unwrap(), residue(&binom_exact(n + k, k as i64), l));
    }

    #[test]
    fn omega_values(n in 0u64..100_000) {
        prop_assert!((-1..=1).contains(&omega(n)));
    }

    #[test]
    fn enumerated_partitions_respect_constraints(n in 0u64..25, t in 2u64..6) {
        for shape in enum_partitions(n, FrequencyConstraint::NoPartDivisibleBy(t)).unwrap() {
            prop_assert_eq!(shape.total(), n);
            prop_assert!(shape.parts().iter().all(|p| p % t != 0));
        }
        for shape in enum_partitions(n, FrequencyConstraint::MaxFrequency(t)).unwrap() {
            prop_assert!(shape.frequencies().all(|f| f <= t));
        }
    }
}
