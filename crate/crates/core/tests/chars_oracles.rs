use num_rational::Rational64;
use proptest::prelude::*;
use strata_glue::chars::jacquet::{jacquet_of_induced, ts_homology, JacquetSymbol};
use strata_glue::chars::{
    compact_generator_ranks, glue, hc_tilde, is_generic, jacquet_symbolic, verdier_dualize, CharPair,
    GradedCharModule, Slope, UnramChar,
};
use strata_glue::lambda::{make_ring, CoeffRing};
use strata_glue::rep::{jacquet_oracle, FiniteRep};
use strata_glue::repspec::RepSpec;

fn ring() -> CoeffRing {
    make_ring(11, 3, Some(5)).unwrap()
}

fn half(k: i64) -> Rational64 {
    Rational64::new(k, 2)
}

fn table(g: &GradedCharModule) -> Vec<(i32, Vec<(u64, u64)>)> {
    g.support().into_iter().map(|d| (d, g.get(d).iter().map(|c| (c.z1.value, c.z2.value)).collect())).collect()
}

#[test]
fn purity_and_its_dual() {
    let r = ring();
    let h = hc_tilde(&r, Slope::Integral, &RepSpec::Triv).unwrap();
    let g = verdier_dualize(&r, &h, 2).unwrap();
    let dt = CharPair::delta_t(&r);
    assert_eq!(table(&g), vec![(0, vec![(1, 1)]), (3, vec![(dt.z1.value, dt.z2.value)])]);
    assert!(verdier_dualize(&r, &GradedCharModule::zero(), 2).unwrap().is_zero());
    assert!(verdier_dualize(&r, &h, 1).is_err());
}

#[test]
fn compactly_supported_examples() {
    let r = ring();
    for a in [0i64, 1, -1] {
        let c = CharPair::diagonal(UnramChar::abs_int(&r, a)).mul(&CharPair::delta_t_pow(&r, half(1)).unwrap());
        let h = hc_tilde(&r, Slope::Integral, &RepSpec::Ps(half(2 * a), half(2 * a))).unwrap();
        assert_eq!(table(&h), vec![(2, vec![(c.z1.value, c.z2.value)]), (3, vec![(c.z1.value, c.z2.value)])]);
    }
    let h = hc_tilde(&r, Slope::Half, &RepSpec::Nrd(half(2))).unwrap();
    let a = UnramChar::abs_int(&r, 1);
    let top = CharPair::diagonal(a).mul(&CharPair::delta_t(&r));
    assert_eq!(table(&h), vec![(1, vec![(a.value, a.value)]), (2, vec![(top.z1.value, top.z2.value)])]);
}

#[test]
fn half_slope_examples() {
    let r = ring();
    for k in [-1i64, 0, 1, 2] {
        let g = glue(&r, Slope::Half, &RepSpec::Nrd(Rational64::from_integer(k))).unwrap();
        let a = UnramChar::abs_int(&r, k);
        let top = CharPair::diagonal(a).mul(&CharPair::delta_t(&r));
        assert_eq!(table(&g), vec![(0, vec![(a.value, a.value)]), (1, vec![(top.z1.value, top.z2.value)])], "k = {k}");
    }
}

#[test]
fn corollary_cases_with_det_twists() {
    let r = ring();
    for m2 in -3i64..=3 {
        let m = half(m2);
        let base = CharPair::diagonal(UnramChar::abs_pow(&r, m).unwrap());
        let cases = [
            (half(1), [0, 1], base),
            (half(0), [1, 2], base.mul(&CharPair::delta_t_pow(&r, half(1)).unwrap())),
            (half(-1), [2, 3], base.mul(&CharPair::delta_t(&r))),
        ];
        for (n, degrees, c) in cases {
            let g = glue(&r, Slope::Integral, &RepSpec::Ps(m - n, m + n)).unwrap();
            let want: Vec<_> = degrees.iter().map(|&d| (d, vec![(c.z1.value, c.z2.value)])).collect();
            assert_eq!(table(&g), want, "m = {m}, n = {n}");
        }
    }
}

#[test]
fn spec_forms_agree() {
    let r = ring();
    let ps = glue(&r, Slope::Integral, &RepSpec::parse("ps(1/2,-1/2)").unwrap()).unwrap();
    let ind = glue(&r, Slope::Integral, &RepSpec::parse("ind(1,-1)").unwrap()).unwrap();
    assert!(ps.same_characters(&ind));
    let chi = CharPair::abs_pair(&r, half(1), half(-1)).unwrap();
    let ch = glue(&r, Slope::Integral, &RepSpec::Char(chi.z1.value, chi.z2.value)).unwrap();
    assert!(ch.same_characters(&ps));
}

#[test]
fn compact_generator_examples() {
    let c = compact_generator_ranks(1, 3, 11, 1).unwrap();
    assert_eq!((c.ranks[&3], c.ranks[&4]), (8, 2));
    let c = compact_generator_ranks(1, 2, 7, 2).unwrap();
    assert_eq!(c.ranks[&2], 4);
    let c = compact_generator_ranks(2, 2, 7, 1).unwrap();
    assert_eq!(c.orbit_count, 6);
    assert_eq!(c.ranks[&4], 2);
}

#[test]
fn symbol_matches_oracle_for_specs() {
    let r = make_ring(7, 2, Some(3)).unwrap();
    for s in ["st", "triv", "ind(0,0)", "ind(1,0)", "ps(0,0)", "ps(1/2,-1/2)", "char(2,3)"] {
        let spec = RepSpec::parse(s).unwrap();
        let sym = jacquet_symbolic(&r, &spec).unwrap();
        let res = jacquet_oracle(&FiniteRep::from_spec(&r, &spec, 1).unwrap(), None).unwrap();
        assert_eq!(res.filtration, sym.pieces, "{s}");
        assert_eq!(res.split, sym.split, "{s}");
    }
}

fn exp() -> impl Strategy<Value = Rational64> {
    (-8i64..=8).prop_map(half)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn absdet_purity(k in exp()) {
        let r = ring();
        let g = glue(&r, Slope::Integral, &RepSpec::AbsDet(k)).unwrap();
        let a = CharPair::diagonal(UnramChar::abs_pow(&r, k).unwrap());
        let top = a.mul(&CharPair::delta_t(&r));
        prop_assert_eq!(table(&g), vec![(0, vec![(a.z1.value, a.z2.value)]), (3, vec![(top.z1.value, top.z2.value)])]);
    }

    #[test]
    fn generic_characters_glue_to_zero(a in exp(), b in exp()) {
        let r = ring();
        let spec = RepSpec::Ps(a, b);
        let chi = CharPair::abs_pair(&r, a, b).unwrap();
        prop_assume!(is_generic(&r, &chi));
        prop_assert!(hc_tilde(&r, Slope::Integral, &spec).unwrap().is_zero());
        prop_assert!(glue(&r, Slope::Integral, &spec).unwrap().is_zero());
    }

    #[test]
    fn support_follows_the_trichotomy(a in exp(), b in exp()) {
        let r = ring();
        let g = glue(&r, Slope::Integral, &RepSpec::Ps(a, b)).unwrap();
        let s = g.support();
        prop_assert!([vec![], vec![0, 1], vec![1, 2], vec![2, 3]].contains(&s), "support {:?}", s);
    }

    #[test]
    fn json_round_trip(a in exp(), b in exp()) {
        let r = ring();
        let g = glue(&r, Slope::Integral, &RepSpec::Ps(a, b)).unwrap();
        let back = GradedCharModule::from_json(11, &g.to_json()).unwrap();
        prop_assert!(back.same_characters(&g));
    }

    #[test]
    fn split_homology_is_additive(c in 1u64..11, d in 1u64..11, e in 1u64..11, f in 1u64..11, t in 1u64..11) {
        let r = ring();
        let ch = |x, y| CharPair::new(UnramChar::from_value(&r, x).unwrap(), UnramChar::from_value(&r, y).unwrap());
        let (x, y) = (ch(c, d), ch(e, f));
        let tw = UnramChar::from_value(&r, t).unwrap();
        let sym = JacquetSymbol { pieces: vec![x, y], split: true, unit_witness: None };
        let sum = ts_homology(&JacquetSymbol::single(x), &tw, 11).unwrap();
        let other = ts_homology(&JacquetSymbol::single(y), &tw, 11).unwrap();
        prop_assert_eq!(ts_homology(&sym, &tw, 11).unwrap(), (sum.0 + other.0, sum.1 + other.1));
    }

    #[test]
    fn induced_symbol_shape(c in 1u64..11, d in 1u64..11) {
        let r = ring();
        let chi = CharPair::new(UnramChar::from_value(&r, c).unwrap(), UnramChar::from_value(&r, d).unwrap());
        let sym = jacquet_of_induced(&r, &chi);
        prop_assert_eq!(sym.pieces[1], chi);
        prop_assert_eq!(sym.pieces[0], chi.weyl().mul(&CharPair::delta_t(&r).inv()));
        prop_assert_eq!(sym.split, sym.pieces[0] != sym.pieces[1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn oracle_agrees_on_random_characters(c in 1u64..7, d in 1u64..7) {
        let r = make_ring(7, 2, Some(3)).unwrap();
        let chi = CharPair::new(UnramChar::from_value(&r, c).unwrap(), UnramChar::from_value(&r, d).unwrap());
        let res = jacquet_oracle(&FiniteRep::induced(&r, chi, 1).unwrap(), None).unwrap();
        let sym = jacquet_of_induced(&r, &chi);
        prop_assert_eq!(res.filtration, sym.pieces);
        prop_assert_eq!(res.split, sym.split);
    }
}
