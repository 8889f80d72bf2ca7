use std::collections::HashSet;

use proptest::prelude::*;
use strata_glue::lambda::brute;
use strata_glue::lambda::{find_isomorphism, BoundedComplex, FgModule, LambdaMatrix, ModuleMap};

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = LambdaMatrix> {
    (2u64..=9, 0..=max_rows, 1..=max_cols).prop_flat_map(|(n, r, c)| {
        proptest::collection::vec(0..n, r * c).prop_map(move |d| LambdaMatrix::new(n, r, c, d).unwrap())
    })
}

fn pair_strategy() -> impl Strategy<Value = (LambdaMatrix, LambdaMatrix)> {
    (2u64..=8, 1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(n, a, b, c)| {
        (proptest::collection::vec(0..n, a * b), proptest::collection::vec(0..n, b * c)).prop_map(move |(x, y)| {
            (LambdaMatrix::new(n, a, b, x).unwrap(), LambdaMatrix::new(n, b, c, y).unwrap())
        })
    })
}

/// A complex Λ^a → Λ^b → Λ^c with B built so that A·B = 0.
fn complex_from(a: &LambdaMatrix, raw_b: &LambdaMatrix) -> LambdaMatrix {
    // project raw_b's columns onto vectors killed by A: B = K^T-style composition
    let ker_of_a_cols = a.transpose().left_kernel(); // rows y with A·y^T = 0
    let n = a.modulus();
    let b = a.ncols();
    let c = raw_b.ncols();
    let mut out = LambdaMatrix::zeros(n, b, c);
    for j in 0..c {
        let mut col = vec![0u64; b];
        for (t, k) in (0..ker_of_a_cols.nrows()).enumerate() {
            let coeff = raw_b.get(t % b, j);
            for i in 0..b {
                col[i] = (col[i] + coeff * ker_of_a_cols.get(k, i)) % n;
            }
        }
        for i in 0..b {
            out.set(i, j, col[i]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn howell_is_idempotent_and_span_preserving(m in matrix_strategy(4, 3)) {
        let h = m.howell_form();
        prop_assert_eq!(h.howell_form(), h.clone());
        prop_assert_eq!(brute::span(&m), brute::span(&h));
        prop_assert_eq!(h.span_size(), brute::span(&m).len() as u128);
    }

    #[test]
    fn howell_is_canonical(m in matrix_strategy(3, 3), seed in 0u64..1000) {
        // a unimodular recombination of the rows has the same Howell form
        let n = m.modulus();
        let r = m.nrows();
        if r >= 2 {
            let mut rows = m.row_vecs();
            let c = seed % n;
            let src = rows[1].clone();
            for (x, y) in rows[0].iter_mut().zip(src) {
                *x = (*x + c * y) % n;
            }
            rows.swap(0, r - 1);
            let m2 = LambdaMatrix::from_u64_rows(n, m.ncols(), &rows);
            prop_assert_eq!(m.howell_form(), m2.howell_form());
        }
    }

    #[test]
    fn membership_matches_enumeration(m in matrix_strategy(3, 3)) {
        let s = brute::span(&m);
        for v in brute::all_vectors(m.modulus(), m.ncols()) {
            prop_assert_eq!(m.span_contains(&v), s.contains(&v));
        }
    }

    #[test]
    fn left_kernel_matches_enumeration(m in matrix_strategy(3, 3)) {
        let k = m.left_kernel();
        prop_assert_eq!(brute::span(&k), brute::left_kernel(&m));
    }

    #[test]
    fn kernel_times_image_is_source((a, _b) in pair_strategy()) {
        let n = a.modulus();
        let src = FgModule::free(n, a.nrows());
        let tgt = FgModule::free(n, a.ncols());
        let f = ModuleMap::from_ambient(src.clone(), tgt, &a).unwrap();
        prop_assert_eq!(f.kernel().order() * f.image().order(), src.order());
        let ker: HashSet<Vec<u64>> = brute::span(f.kernel().generators());
        prop_assert_eq!(ker, brute::left_kernel(&a));
    }

    #[test]
    fn homology_matches_enumeration((a, raw) in pair_strategy()) {
        let b = complex_from(&a, &raw);
        prop_assert!(a.mul(&b).unwrap().is_zero());
        let n = a.modulus();
        let c0 = FgModule::free(n, a.nrows());
        let c1 = FgModule::free(n, a.ncols());
        let c2 = FgModule::free(n, b.ncols());
        let d0 = ModuleMap::from_ambient(c0.clone(), c1.clone(), &a).unwrap();
        let d1 = ModuleMap::from_ambient(c1.clone(), c2.clone(), &b).unwrap();
        let cx = BoundedComplex::new(0, vec![c0, c1, c2], vec![d0, d1]).unwrap();
        let h = cx.homology(1).unwrap();
        prop_assert_eq!(brute::torsion_profile_of(n, &h.iso_class()), brute::middle_homology_profile(&a, &b));
    }

    #[test]
    fn contractible_summand_leaves_homology_unchanged((a, raw) in pair_strategy()) {
        let b = complex_from(&a, &raw);
        let n = a.modulus();
        let c0 = FgModule::free(n, a.nrows());
        let c1 = FgModule::free(n, a.ncols());
        let c2 = FgModule::free(n, b.ncols());
        let d0 = ModuleMap::from_ambient(c0.clone(), c1.clone(), &a).unwrap();
        let d1 = ModuleMap::from_ambient(c1.clone(), c2.clone(), &b).unwrap();
        let cx = BoundedComplex::new(0, vec![c0, c1, c2], vec![d0, d1]).unwrap();
        let l = FgModule::free(n, 1);
        let z = FgModule::zero(n, 0);
        let cone = BoundedComplex::new(
            0,
            vec![l.clone(), l.clone(), z.clone()],
            vec![ModuleMap::identity(&l), ModuleMap::zero(l.clone(), z)],
        ).unwrap();
        let sum = cx.direct_sum(&cone).unwrap();
        for k in 0..=2 {
            prop_assert_eq!(sum.homology(k).unwrap().iso_class(), cx.homology(k).unwrap().iso_class());
        }
    }

    #[test]
    fn equal_iso_class_gives_isomorphism(m1 in matrix_strategy(3, 3), seed in 0u64..10_000) {
        let n = m1.modulus();
        let q1 = FgModule::quotient(n, m1.ncols(), &m1).unwrap();
        // a presentation change: conjugate relations by a random unimodular matrix
        let k = m1.ncols();
        let mut g = LambdaMatrix::identity(n, k);
        if k >= 2 {
            g.set(0, 1, seed % n);
            g.set(k - 1, 0, (seed / 7) % n);
        }
        if g.is_invertible() {
            let m2 = m1.mul(&g).unwrap();
            let q2 = FgModule::quotient(n, k, &m2).unwrap();
            prop_assert_eq!(q1.iso_class(), q2.iso_class());
            let f = find_isomorphism(&q1, &q2).unwrap().expect("classes agree");
            prop_assert!(f.is_isomorphism());
        }
        let sub = FgModule::submodule(&m1);
        if let Some(f) = find_isomorphism(&sub, &q1).unwrap() {
            prop_assert!(f.is_isomorphism());
        } else {
            prop_assert_ne!(sub.iso_class(), q1.iso_class());
        }
    }

    #[test]
    fn iso_class_order_matches(m in matrix_strategy(3, 3)) {
        let q = FgModule::quotient(m.modulus(), m.ncols(), &m).unwrap();
        let prod: u128 = q.iso_class().iter().map(|&d| d as u128).product();
        prop_assert_eq!(prod, q.order());
        let all: HashSet<Vec<u64>> = brute::all_vectors(m.modulus(), m.ncols()).into_iter().collect();
        prop_assert_eq!(
            brute::torsion_profile_of(m.modulus(), &q.iso_class()),
            brute::torsion_profile(m.modulus(), &all, &brute::span(&m))
        );
    }
}
