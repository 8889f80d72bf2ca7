use std::collections::HashSet;
use std::sync::Arc;

use num_rational::Rational64;
use proptest::prelude::*;
use strata_glue::chars::jacquet::jacquet_of_induced;
use strata_glue::chars::{CharPair, UnramChar};
use strata_glue::lambda::{brute, make_ring, CoeffRing};
use strata_glue::padic::{closure, subgroup_generators, LaurentMatrix, SubgroupName, SubgroupSpec, TruncRing};
use strata_glue::rep::{cuspidal_witnesses, jacquet_oracle, CuspTable, CuspTableJson, FiniteRep};
use strata_glue::Error;

fn models(ring: &CoeffRing, m: u32) -> Vec<FiniteRep> {
    let r = |a, b| Rational64::new(a, b);
    vec![
        FiniteRep::trivial(ring),
        FiniteRep::steinberg(ring, m).unwrap(),
        FiniteRep::induced(ring, CharPair::trivial(ring), m).unwrap(),
        FiniteRep::induced(ring, CharPair::abs_pair(ring, r(1, 1), r(0, 1)).unwrap(), m).unwrap(),
        FiniteRep::induced(ring, CharPair::delta_t(ring), m).unwrap(),
        FiniteRep::steinberg(ring, m).unwrap().twist(UnramChar::abs_int(ring, 1)),
        FiniteRep::trivial(ring).direct_sum(&FiniteRep::steinberg(ring, m).unwrap()).unwrap(),
    ]
}

/// σ^H by testing every vector against every element of the finite image.
fn brute_fixed(sigma: &FiniteRep, h: &SubgroupSpec) -> HashSet<Vec<u64>> {
    let r = h.ring().unwrap();
    let mats: Vec<_> = closure(h).unwrap().iter().map(|g| sigma.action_matrix(&g.to_laurent(&r)).unwrap().transpose()).collect();
    brute::all_vectors(sigma.n(), sigma.rank)
        .into_iter()
        .filter(|v| mats.iter().all(|a| a.apply_row(v) == *v))
        .collect()
}

#[test]
fn fixed_points_match_enumeration() {
    for (p, n, m) in [(2u64, 5u64, 1u32), (3, 5, 1), (2, 7, 2)] {
        let ring = make_ring(n, p, None).unwrap();
        for sigma in models(&ring, m) {
            for name in [SubgroupName::U, SubgroupName::Gamma0] {
                let h = SubgroupSpec::new(name, p, sigma.working_level());
                let fast = brute::span(sigma.fixed_points(&h).unwrap().generators());
                assert_eq!(fast, brute_fixed(&sigma, &h), "{} under {h}", sigma.describe());
            }
        }
    }
}

#[test]
fn uprime_fixed_vectors_are_fixed() {
    let ring = make_ring(5, 2, None).unwrap();
    for sigma in models(&ring, 2) {
        let h = SubgroupSpec::uprime(2, sigma.working_level());
        let fixed = sigma.fixed_points(&h).unwrap();
        let gens = subgroup_generators(&h).unwrap();
        for v in fixed.generators().row_vecs() {
            for g in &gens {
                assert_eq!(sigma.act_vector(g, &v).unwrap(), v, "{}", sigma.describe());
            }
        }
        let u = sigma.fixed_points_named(SubgroupName::U).unwrap();
        assert_eq!(fixed.order(), u.order());
    }
}

#[test]
fn invariants_and_coinvariants_agree() {
    let ring = make_ring(7, 3, None).unwrap();
    for sigma in models(&ring, 1) {
        for name in [SubgroupName::U, SubgroupName::Gamma0] {
            let h = SubgroupSpec::new(name, 3, sigma.working_level());
            assert_eq!(
                sigma.fixed_points(&h).unwrap().iso_class(),
                sigma.coinvariants(&h).unwrap().iso_class(),
                "{}",
                sigma.describe()
            );
        }
    }
}

#[test]
fn averaging_projector_is_idempotent_onto_invariants() {
    let ring = make_ring(5, 2, None).unwrap();
    for sigma in models(&ring, 2) {
        let h = SubgroupSpec::gamma0(2, sigma.working_level());
        let e = sigma.averaging_projector(&h).unwrap();
        assert_eq!(e.then(&e).unwrap().matrix(), e.matrix());
        let fixed = sigma.fixed_points(&h).unwrap();
        assert_eq!(brute::span(e.image().generators()), brute::span(fixed.generators()));
    }
}

#[test]
fn cuspidal_tables() {
    cuspidal_witnesses(&Arc::new(CuspTable::gl2f2_sign(7))).unwrap();
    let trivial = CuspTableJson {
        group: "GL2(F2)".into(),
        generators: CuspTable::gl2f2_sign_json().generators,
        matrices: vec![vec![vec![1]], vec![vec![1]]],
    };
    let t = CuspTable::from_json_value(7, &trivial).unwrap();
    assert!(matches!(cuspidal_witnesses(&Arc::new(t)), Err(Error::CuspidalWitnessFailed(_))));
    let inconsistent = CuspTableJson { matrices: vec![vec![vec![2]], vec![vec![1]]], ..CuspTable::gl2f2_sign_json() };
    assert!(CuspTable::from_json_value(7, &inconsistent).is_err());
}

#[test]
fn jacquet_oracle_matches_symbol_at_p2() {
    let ring = make_ring(7, 2, Some(3)).unwrap();
    for (c1, c2) in [(1u64, 1u64), (2, 1), (1, 2), (3, 5), (4, 4), (6, 3)] {
        let chi = CharPair::new(UnramChar::from_value(&ring, c1).unwrap(), UnramChar::from_value(&ring, c2).unwrap());
        let res = jacquet_oracle(&FiniteRep::induced(&ring, chi, 1).unwrap(), None).unwrap();
        let sym = jacquet_of_induced(&ring, &chi);
        assert_eq!(res.stabilized_rank, 2);
        assert_eq!(res.filtration, sym.pieces, "χ = ({c1}, {c2})");
        assert_eq!(res.split, sym.split, "χ = ({c1}, {c2})");
    }
}

fn word_strategy() -> impl Strategy<Value = Vec<(u8, i64)>> {
    proptest::collection::vec((0u8..4, -4i64..5), 1..5)
}

fn word_matrix(r: &TruncRing, w: &[(u8, i64)]) -> LaurentMatrix {
    w.iter().fold(LaurentMatrix::identity(r), |acc, &(kind, x)| {
        let g = match kind {
            0 => LaurentMatrix::upper(r, x, 0),
            1 => LaurentMatrix::lower(r, x, 0),
            2 => LaurentMatrix::lower(r, x, 1),
            _ => LaurentMatrix::from_ints(r, [[1 + 2 * x, 2], [2 * x, 1 + 2 * x + 2 * x * x / (1 + 2 * x)]]),
        };
        if g.det().valuation() == Some(0) { acc.mul(&g) } else { acc }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn action_is_multiplicative(a in word_strategy(), b in word_strategy()) {
        let ring = make_ring(5, 2, None).unwrap();
        let r = TruncRing::new(2, 8).unwrap();
        let (g, h) = (word_matrix(&r, &a), word_matrix(&r, &b));
        for sigma in models(&ring, 2) {
            prop_assert!(sigma.respects_product(&g, &h).unwrap(), "{}", sigma.describe());
        }
    }
}

#[test]
fn small_model_examples() {
    let ring = make_ring(11, 3, Some(5)).unwrap();
    let ind = FiniteRep::induced(&ring, CharPair::trivial(&ring), 2).unwrap();
    let rank = |m: strata_glue::lambda::FgModule| m.iso_class().len();
    assert_eq!(rank(ind.fixed_points_named(SubgroupName::U).unwrap()), 1);
    assert_eq!(rank(ind.fixed_points_named(SubgroupName::Uprime).unwrap()), 1);
    assert_eq!(rank(ind.fixed_points_named(SubgroupName::Gamma0).unwrap()), 2);
    let e = ind.averaging_projector(&SubgroupSpec::gamma0(3, 2)).unwrap();
    assert_eq!(rank(e.image()), 2);
    let st = FiniteRep::steinberg(&ring, 2).unwrap();
    assert_eq!(st.rank, 11);
    assert!(st.fixed_points_named(SubgroupName::U).unwrap().is_zero());
    assert_eq!(rank(st.fixed_points_named(SubgroupName::Gamma0).unwrap()), 1);
    let ps1 = FiniteRep::induced(&ring, CharPair::delta_t_pow(&ring, Rational64::new(-1, 2)).unwrap(), 2).unwrap();
    assert_eq!(rank(ps1.fixed_points_named(SubgroupName::U).unwrap()), 1);
    let res = jacquet_oracle(&ps1, None).unwrap();
    assert_eq!(res.stabilized_rank, 2);
    assert!(!res.split);
    let triv = jacquet_oracle(&ind, None).unwrap();
    assert_eq!((triv.torus_matrix.get(0, 0), triv.torus_matrix.get(1, 1)), (ring.inv(3).unwrap(), 1));
    let st_res = jacquet_oracle(&st, None).unwrap();
    assert_eq!(st_res.torus_matrix.get(0, 0), ring.inv(3).unwrap());
}
