mod common;

use common::{bar_squares_to_zero, BarOracle};
use proptest::prelude::*;
use quadkoszul::algebra::QuadraticPresentation;
use quadkoszul::constructors::{demuskin_algebra, free_group_algebra, free_product, DemuskinForm};
use quadkoszul::koszul::{betti_table, class_representative, projective_class_count, ModuleDescriptor};
use quadkoszul::Prime;

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("g{i}")).collect()
}

fn assert_agrees(a: &QuadraticPresentation, h: usize, d: usize) {
    let oracle = BarOracle::from_presentation(a, None, d);
    let table = betti_table(a, &ModuleDescriptor::Trivial, h, d).unwrap();
    assert_eq!(table.entries, oracle.table(h, d), "trivial module of {a:?}");
    let p = a.prime();
    for idx in 0..projective_class_count(p, a.rank()).unwrap() {
        let v = class_representative(p, a.rank(), idx);
        let oracle = BarOracle::from_presentation(a, Some(&v), d);
        let module = ModuleDescriptor::quotient(a, v.clone()).unwrap();
        let table = betti_table(a, &module, h, d).unwrap();
        assert_eq!(table.entries, oracle.table(h, d), "A/Aa, a = {v:?}, {a:?}");
    }
}

#[test]
fn oracle_is_a_complex() {
    let a = demuskin_algebra(&DemuskinForm::hyperbolic(Prime::TWO, 2).unwrap());
    let o = BarOracle::from_presentation(&a, None, 4);
    for i in 1..4 {
        for j in 0..=4 {
            assert!(bar_squares_to_zero(&o, i, j));
        }
    }
    let o = BarOracle::from_presentation(&a, Some(&[1, 1]), 4);
    assert!(bar_squares_to_zero(&o, 1, 3));
    assert_eq!(o.algebra_dims(), vec![1, 2, 1, 0, 0]);
}

#[test]
fn truncated_polynomial_by_hand() {
    let a = QuadraticPresentation::new(Prime::TWO, labels(1), &[[1u8]]).unwrap();
    let o = BarOracle::from_presentation(&a, None, 4);
    for i in 0..=4 {
        for j in 0..=4 {
            assert_eq!(o.tor(i, j), usize::from(i == j));
        }
    }
}

#[test]
fn named_algebras_agree() {
    let p = Prime::TWO;
    let d = demuskin_algebra(&DemuskinForm::hyperbolic(p, 2).unwrap());
    assert_agrees(&d, 4, 4);
    assert_agrees(&free_group_algebra(p, 2), 4, 4);
    assert_agrees(&free_product(&d, &free_group_algebra(p, 1)).unwrap(), 3, 3);
    let p3 = Prime::new(3).unwrap();
    assert_agrees(&demuskin_algebra(&DemuskinForm::hyperbolic(p3, 2).unwrap()), 4, 4);
    let comm = QuadraticPresentation::new(p3, labels(2), &[[0u8, 1, 2, 0]]).unwrap();
    assert_agrees(&comm, 3, 3);
}

fn presentation_strategy() -> impl Strategy<Value = QuadraticPresentation> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=3).prop_flat_map(|(p, n)| {
        let nn = n * n;
        proptest::collection::vec(proptest::collection::vec(0u8..p as u8, nn), 0..=nn).prop_map(move |rows| {
            QuadraticPresentation::new(Prime::new(p).unwrap(), labels(n), &rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_presentations_agree(a in presentation_strategy()) {
        let d = if a.rank() == 3 { 3 } else { 4 };
        assert_agrees(&a, d, d);
    }
}
