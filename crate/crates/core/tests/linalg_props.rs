mod common;

use proptest::prelude::*;
use quadkoszul::{FpMatrix, Prime, Subspace};

fn matrix(max: usize) -> impl Strategy<Value = FpMatrix> {
    (prop_oneof![Just(2u32), Just(3u32), Just(5u32)], 0..=max, 0..=max).prop_flat_map(|(p, r, c)| {
        proptest::collection::vec(proptest::collection::vec(0u8..p as u8, c), r)
            .prop_map(move |rows| FpMatrix::from_rows(Prime::new(p).unwrap(), c, &rows).unwrap())
    })
}

fn pair_same_cols(max: usize) -> impl Strategy<Value = (FpMatrix, FpMatrix)> {
    (prop_oneof![Just(2u32), Just(3u32), Just(5u32)], 1..=max, 0..=max, 0..=max).prop_flat_map(|(p, c, r1, r2)| {
        (
            proptest::collection::vec(proptest::collection::vec(0u8..p as u8, c), r1),
            proptest::collection::vec(proptest::collection::vec(0u8..p as u8, c), r2),
        )
            .prop_map(move |(a, b)| {
                let p = Prime::new(p).unwrap();
                (FpMatrix::from_rows(p, c, &a).unwrap(), FpMatrix::from_rows(p, c, &b).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity(m in matrix(12)) {
        prop_assert_eq!(m.kernel().dim() + m.image().dim(), m.ncols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let rows: Vec<Vec<u32>> = m.to_rows().into_iter().map(|r| r.into_iter().map(u32::from).collect()).collect();
        prop_assert_eq!(m.rank(), common::rank(u32::from(m.prime().get()), &rows));
    }

    #[test]
    fn rref_is_idempotent(m in matrix(12)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.rank, once.matrix.nrows());
        prop_assert!(once.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn kernel_is_annihilated(m in matrix(10)) {
        for v in m.kernel().vectors() {
            prop_assert!(m.apply(&v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn preimage_of_image_is_everything(m in matrix(10)) {
        let pre = m.preimage(&m.image()).unwrap();
        prop_assert!(pre.is_full());
    }

    #[test]
    fn kron_rank_multiplies((a, b) in pair_same_cols(4)) {
        let k = a.kron(&b).unwrap();
        prop_assert_eq!(k.rank(), a.rank() * b.rank());
        prop_assert_eq!(k.nrows(), a.nrows() * b.nrows());
    }

    #[test]
    fn kron_is_associative((a, b) in pair_same_cols(3), c in 1usize..3) {
        let p = a.prime();
        let id = FpMatrix::identity(p, c);
        let left = a.kron(&b).unwrap().kron(&id).unwrap();
        let right = a.kron(&b.kron(&id).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn intersection_dimension_formula((a, b) in pair_same_cols(8)) {
        let (u, w) = (Subspace::from_rows(a), Subspace::from_rows(b));
        let sum = u.sum(&w).unwrap();
        let cap = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + w.dim());
        prop_assert!(u.contains_subspace(&cap) && w.contains_subspace(&cap));
        prop_assert!(sum.contains_subspace(&u) && sum.contains_subspace(&w));
    }

    #[test]
    fn subspace_equality_is_canonical((a, b) in pair_same_cols(6)) {
        let u = Subspace::from_rows(a.clone());
        let shuffled = Subspace::from_rows(a.vstack(&u.basis().clone()).unwrap());
        prop_assert_eq!(&u, &shuffled);
        let w = Subspace::from_rows(b);
        prop_assert_eq!(u == w, u.contains_subspace(&w) && w.contains_subspace(&u));
    }

    #[test]
    fn annihilator_complements((a, _b) in pair_same_cols(9)) {
        let u = Subspace::from_rows(a);
        let ann = u.annihilator();
        prop_assert_eq!(u.dim() + ann.dim(), u.ambient_dim());
        prop_assert_eq!(ann.annihilator(), u);
    }

    #[test]
    fn complement_extends_to_superspace((a, b) in pair_same_cols(8)) {
        let u = Subspace::from_rows(a);
        let sup = u.sum(&Subspace::from_rows(b)).unwrap();
        let comp = u.complement_in(&sup).unwrap();
        prop_assert_eq!(comp.nrows() + u.dim(), sup.dim());
        let rebuilt = Subspace::from_rows(u.basis().vstack(&comp).unwrap());
        prop_assert_eq!(rebuilt, sup);
    }
}
