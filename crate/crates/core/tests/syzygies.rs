use proptest::prelude::*;
use ruppert_core::fixtures;
use ruppert_core::flattening::{flattening_rank, ternary_reducibility_test, RankOptions, VerdictKind};
use ruppert_core::linalg::Field;
use ruppert_core::poly::{random_form, HomogeneousPoly};
use ruppert_core::syzygy::{delta, flattening_kernel, in_span, koszul_span, StrengthDecomposition};

const Q: Field = Field::Rational;

#[test]
fn delta_of_a_product_lies_in_the_ternary_kernel() {
    for s in 0..20u64 {
        let d = 3 + (s % 3) as u32;
        let k = 1 + (s as u32) % (d - 1);
        let (f, g, h) = fixtures::random_product(3, k, d, 100 + s);
        let dec = StrengthDecomposition::new(vec![g], vec![h]).unwrap();
        let t = delta(&dec).unwrap();
        assert!(!t.is_zero(), "product #{s}");
        let ker = flattening_kernel(&f, d - 2).unwrap();
        assert!(!ker.is_empty());
        assert!(in_span(&t, &ker).unwrap(), "product #{s}: Δ outside the kernel");
    }
}

#[test]
fn generic_kernel_is_exactly_koszul() {
    for s in 0..3 {
        let f = random_form(5, 3, Q, 40 + s);
        let (kos, dim) = koszul_span(&f).unwrap();
        let ker = flattening_kernel(&f, 2).unwrap();
        assert_eq!((dim, ker.len()), (10, 10));
        for t in &ker {
            assert!(in_span(t, &kos).unwrap());
        }
    }
}

#[test]
fn slice_rank_two_kernel_has_room_for_delta() {
    for s in 0..3 {
        let dec = fixtures::random_slice_rank(5, 2, 60 + s);
        let f = dec.form();
        let (kos, _) = koszul_span(&f).unwrap();
        let t = delta(&dec).unwrap();
        assert!(!in_span(&t, &kos).unwrap(), "Δ should be new for random ℓq forms");
        assert!(in_span(&t, &flattening_kernel(&f, 2).unwrap()).unwrap());
    }
}

#[test]
fn reducible_quadrics_and_quartics() {
    let v = ternary_reducibility_test(&fixtures::random_product(3, 1, 2, 3).0, &RankOptions::exact()).unwrap();
    assert_eq!((v.kind, v.threshold), (VerdictKind::ReducibleConsistent, 3));
    let v = ternary_reducibility_test(&random_form(3, 4, Q, 8), &RankOptions::exact()).unwrap();
    assert_eq!((v.kind, v.evidence.rank), (VerdictKind::IrreducibleCertified, 15));
}

fn small_decomposition() -> impl Strategy<Value = (StrengthDecomposition, HomogeneousPoly)> {
    (1usize..=2, 2u32..=4, any::<u64>())
        .prop_filter("r = 2 only up to quartics", |(r, d, _)| *r == 1 || *d <= 3)
        .prop_map(|(r, d, seed)| {
            let dec = fixtures::random_decomposition(2 * r + 1, r, d, Q, seed);
            let f = dec.form();
            (dec, f)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_is_a_syzygy((dec, f) in small_decomposition()) {
        let t = delta(&dec).unwrap();
        prop_assert!(t.contraction().is_zero());
        prop_assert!(ruppert_core::prolongation::contract_against(&t, &f).unwrap().is_zero());
    }

    #[test]
    fn products_never_certify(nv in 3usize..=5, d in 3u32..=4, seed in any::<u64>()) {
        let (f, _, _) = fixtures::random_product(nv, 1, d, seed);
        // in 5 variables the rank-60 bound of ℓq cubics also covers products
        if nv == 5 && d == 3 {
            let ev = flattening_rank(&f, 2, &RankOptions::modular(1_000_000_007)).unwrap();
            prop_assert!(ev.rank <= 59);
        }
        if nv == 3 {
            let v = ternary_reducibility_test(&f, &RankOptions::modular(1_000_000_007)).unwrap();
            prop_assert_eq!(v.kind, VerdictKind::ReducibleConsistent);
        }
    }
}
