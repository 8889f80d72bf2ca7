//! The acceptance suite: nine self-contained checks at desk scale, shared by
//! the `verify-all` command and the `acceptance` test target.

use std::sync::Arc;
use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chars::jacquet::jacquet_of_induced;
use crate::chars::{
    compact_generator_ranks, glue, is_generic, jacquet_symbolic, CharPair, GradedCharModule, Slope, UnramChar,
};
use crate::error::{Error, Result};
use crate::lambda::{brute, make_ring, BoundedComplex, CoeffRing, FgModule, LambdaMatrix, ModuleMap};
use crate::padic::{orbit_classification_check, orbit_count_formula};
use crate::rep::cusp::{CuspTable, CuspTableJson};
use crate::rep::jacquet::jacquet_oracle;
use crate::rep::{cuspidal_witnesses, FiniteRep};
use crate::repspec::RepSpec;
use crate::sl2::{bt_ball, ps1_acyclicity_check, sl2_cohomology};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!("[{}] {} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }

    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail, "ms": self.millis })
    }
}

/// A failed check carries a message; a computation error is reported as is.
enum Check {
    Fail(String),
    Err(Error),
}

impl From<Error> for Check {
    fn from(e: Error) -> Self {
        Self::Err(e)
    }
}

type Outcome = std::result::Result<String, Check>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Check> {
    if cond {
        Ok(())
    } else {
        Err(Check::Fail(msg()))
    }
}

fn run(id: u32, name: &'static str, f: impl FnOnce() -> Outcome) -> CriterionOutcome {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(Check::Fail(d)) => (false, d),
        Err(Check::Err(e)) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, passed, detail, millis: t.elapsed().as_millis() }
}

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

pub fn orbit_formula() -> CriterionOutcome {
    run(1, "orbit formula", || {
        let mut seen = Vec::new();
        for (p, k) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
            let rep = orbit_classification_check(k, p)?;
            let counts: Vec<usize> = rep.levels.iter().map(|l| l.orbit_count).collect();
            let want = orbit_count_formula(p, k);
            ensure(counts.iter().all(|&c| c as u128 == want), || format!("p={p} k={k}: counts {counts:?}, formula {want}"))?;
            seen.push(format!("(p={p},k={k}):{want}"));
        }
        Ok(seen.join(" "))
    })
}

pub fn sl2_cohomology_table() -> CriterionOutcome {
    run(2, "SL2 cohomology table", || {
        for p in [2u64, 3] {
            for n in [5u64, 7] {
                let ring = make_ring(n, p, None)?;
                let cases = [
                    ("triv", FiniteRep::trivial(&ring), (vec![n], vec![])),
                    ("ind", FiniteRep::induced(&ring, CharPair::trivial(&ring), 2)?, (vec![n], vec![n])),
                    ("st", FiniteRep::steinberg(&ring, 2)?, (vec![], vec![n])),
                ];
                for (name, sigma, want) in cases {
                    let c = sl2_cohomology(&sigma)?;
                    let got = (c.h0.iso_class(), c.h1.iso_class());
                    ensure(got == want, || format!("p={p} n={n} {name}: got {got:?}, want {want:?}"))?;
                }
            }
        }
        Ok("triv = Λ[0], Ind Λ = Λ[0] ⊕ Λ[-1], St = Λ[-1] for p ∈ {2,3}, n ∈ {5,7}".into())
    })
}

pub fn ps1_acyclicity() -> CriterionOutcome {
    run(3, "PS(1) acyclicity", || {
        let mut dets = Vec::new();
        for (p, n, s) in [(3u64, 11u64, 5u64), (2, 7, 3)] {
            let rep = ps1_acyclicity_check(p, n, s)?;
            ensure(rep.matrix.nrows() == 2 && rep.matrix.ncols() == 2, || {
                format!("p={p}: difference matrix has shape {}x{}", rep.matrix.nrows(), rep.matrix.ncols())
            })?;
            dets.push(format!("p={p} n={n} det={}", rep.determinant));
        }
        Ok(dets.join(", "))
    })
}

fn jacquet_cross_check(ring: &CoeffRing) -> std::result::Result<(), Check> {
    let chis = [
        ("triv", CharPair::trivial(ring)),
        ("(0,1)", CharPair::abs_pair(ring, r(0, 1), r(1, 1))?),
        ("(1,0)", CharPair::abs_pair(ring, r(1, 1), r(0, 1))?),
        ("δ_T^-1/2", CharPair::delta_t_pow(ring, r(-1, 2))?),
    ];
    for (name, chi) in chis {
        let oracle = jacquet_oracle(&FiniteRep::induced(ring, chi, 2)?, None)?;
        let sym = jacquet_of_induced(ring, &chi);
        ensure(oracle.stabilized_rank == 2, || format!("{name}: rank {}", oracle.stabilized_rank))?;
        ensure(oracle.filtration == sym.pieces, || {
            format!("{name}: oracle pieces {:?}, symbol {:?}", oracle.filtration, sym.pieces)
        })?;
        let differ = chi.weyl().mul(&CharPair::delta_t(ring).inv()) != chi;
        ensure(oracle.split == sym.split && oracle.split == differ, || {
            format!("{name}: oracle split {}, symbol split {}", oracle.split, sym.split)
        })?;
    }
    let st = jacquet_oracle(&FiniteRep::steinberg(ring, 2)?, None)?;
    let sym = jacquet_symbolic(ring, &RepSpec::St)?;
    ensure(st.stabilized_rank == 1 && st.filtration == sym.pieces, || {
        format!("St: rank {}, pieces {:?}", st.stabilized_rank, st.filtration)
    })?;
    ensure(st.filtration[0] == CharPair::delta_t(ring).inv(), || "St: piece is not δ_T^-1".into())?;
    Ok(())
}

pub fn jacquet_agreement() -> CriterionOutcome {
    run(4, "Jacquet oracle vs geometric lemma", || {
        jacquet_cross_check(&make_ring(11, 3, Some(5))?)?;
        Ok("4 characters and St agree at (p,n) = (3,11)".into())
    })
}

fn expect_table(
    label: &str,
    got: &GradedCharModule,
    want: &[(i32, CharPair)],
) -> std::result::Result<(), Check> {
    let mut w = GradedCharModule::zero();
    for (d, c) in want {
        w.push(*d, *c);
    }
    ensure(got.same_characters(&w), || format!("{label}: got {}, want {}", got.to_json(), w.to_json()))
}

pub fn gluing_tables() -> CriterionOutcome {
    run(5, "gluing tables", || {
        let ring = make_ring(11, 3, Some(5))?;
        let dt = CharPair::delta_t(&ring);
        let one = CharPair::trivial(&ring);
        let abs = |k: Rational64| -> Result<CharPair> { Ok(CharPair::diagonal(UnramChar::abs_pow(&ring, k)?)) };
        let mut checked = 0;

        expect_table("triv", &glue(&ring, Slope::Integral, &RepSpec::Triv)?, &[(0, one), (3, dt)])?;
        checked += 1;
        for k in [r(1, 1), r(-1, 1), r(1, 2), r(-1, 2)] {
            let g = glue(&ring, Slope::Integral, &RepSpec::AbsDet(k))?;
            expect_table(&format!("absdet^{k}"), &g, &[(0, abs(k)?), (3, abs(k)?.mul(&dt))])?;
            checked += 1;
        }
        for m in [r(0, 1), r(1, 1), r(-1, 2)] {
            let h = r(1, 2);
            let ps = |n: Rational64| RepSpec::Ps(m - n, m + n);
            let cases = [
                (h, vec![(0, abs(m)?), (1, abs(m)?)]),
                (r(0, 1), vec![(1, abs(m)?.mul(&CharPair::delta_t_pow(&ring, h)?)), (2, abs(m)?.mul(&CharPair::delta_t_pow(&ring, h)?))]),
                (-h, vec![(2, abs(m)?.mul(&dt)), (3, abs(m)?.mul(&dt))]),
            ];
            for (n, want) in cases {
                let spec = ps(n);
                expect_table(&spec.to_string(), &glue(&ring, Slope::Integral, &spec)?, &want)?;
                checked += 1;
            }
        }
        for (a, b) in [(r(0, 1), r(2, 1)), (r(2, 1), r(0, 1)), (r(0, 1), r(1, 2)), (r(1, 2), r(0, 1)), (r(3, 1), r(0, 1))] {
            let spec = RepSpec::Ps(a, b);
            let chi = CharPair::abs_pair(&ring, a, b)?;
            ensure(is_generic(&ring, &chi), || format!("{spec} is not generic in Z/11"))?;
            let g = glue(&ring, Slope::Integral, &spec)?;
            ensure(g.is_zero(), || format!("{spec}: expected 0, got {}", g.to_json()))?;
            checked += 1;
        }
        for k in [r(0, 1), r(1, 1)] {
            let g = glue(&ring, Slope::Half, &RepSpec::Nrd(k))?;
            expect_table(&format!("nrd^{k}"), &g, &[(0, abs(k)?), (1, abs(k)?.mul(&dt))])?;
            checked += 1;
        }
        Ok(format!("{checked} tables match"))
    })
}

fn corrupted_table(n: u64) -> Result<CuspTable> {
    let raw = CuspTableJson {
        group: "GL2(F2)".into(),
        generators: CuspTable::gl2f2_sign_json().generators,
        matrices: vec![vec![vec![1]], vec![vec![1]]],
    };
    CuspTable::from_json_value(n, &raw)
}

pub fn cuspidal_vanishing() -> CriterionOutcome {
    run(6, "cuspidal vanishing", || {
        let ring = make_ring(11, 3, Some(5))?;
        cuspidal_witnesses(&Arc::new(CuspTable::gl2f2_sign(11)))?;
        let g = glue(&ring, Slope::Integral, &RepSpec::parse("cusp:gl2f2-sign")?)?;
        ensure(g.is_zero(), || format!("glue of the sign inflation is {}", g.to_json()))?;
        match cuspidal_witnesses(&Arc::new(corrupted_table(11)?)) {
            Err(Error::CuspidalWitnessFailed(_)) => Ok("sign table passes, trivial table rejected".into()),
            other => Err(Check::Fail(format!("corrupted table gave {other:?}"))),
        }
    })
}

pub fn compact_generators() -> CriterionOutcome {
    run(7, "compact-generator ranks", || {
        let c = compact_generator_ranks(1, 3, 11, 1)?;
        let ranks: Vec<(i32, u128)> = c.ranks.iter().map(|(d, r)| (*d, *r)).collect();
        ensure(ranks == [(2, 6), (3, 8), (4, 2)], || format!("ranks {ranks:?}"))?;
        let count = orbit_classification_check(1, 3)?.levels[1].orbit_count;
        ensure(count == c.orbit_count && count == 4, || format!("orbit count {count} vs {}", c.orbit_count))?;
        Ok("(6, 8, 2) in degrees (2, 3, 4)".into())
    })
}

pub fn tree_homology() -> CriterionOutcome {
    run(8, "tree-ball homology", || {
        for p in [2u64, 3] {
            for radius in 1..=3u32 {
                let ball = bt_ball(p, radius, 2 * radius + 6)?;
                ensure(ball.is_tree() && ball.is_regular(), || format!("p={p} r={radius}: not a regular tree"))?;
                let (h0, h1) = ball.cellular_homology(11)?;
                ensure(h0.iso_class() == [11] && h1.is_zero(), || {
                    format!("p={p} r={radius}: H0 {:?}, H1 {:?}", h0.iso_class(), h1.iso_class())
                })?;
                ensure(ball.colouring_check()?, || format!("p={p} r={radius}: η does not swap colours"))?;
            }
            let ball = bt_ball(p, 1, 8)?;
            ensure(ball.base_edge_stabilizer_is_iwahori(2)?, || format!("p={p}: base-edge stabilizer is not Γ0"))?;
        }
        Ok("H0 = Λ, H1 = 0 for p ∈ {2,3}, r ≤ 3".into())
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, n: u64, rows: usize, cols: usize) -> LambdaMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..n)).collect();
    LambdaMatrix::new(n, rows, cols, data).expect("shape")
}

fn one_linear_case(rng: &mut ChaCha8Rng) -> std::result::Result<(), Check> {
    let n = rng.gen_range(2..=9u64);
    let (a, b, c) = (rng.gen_range(1..=3usize), rng.gen_range(1..=3usize), rng.gen_range(1..=3usize));
    let m = random_matrix(rng, n, a, b);
    ensure(brute::span(&m.howell_form()) == brute::span(&m), || format!("Howell span differs for {m:?}"))?;
    ensure(m.howell_form().span_size() == brute::span(&m).len() as u128, || format!("span size for {m:?}"))?;
    ensure(brute::span(&m.left_kernel()) == brute::left_kernel(&m), || format!("kernel differs for {m:?}"))?;

    let ker = m.transpose().left_kernel();
    let raw = random_matrix(rng, n, ker.nrows(), c);
    let second = ker.transpose().mul(&raw)?;
    let (c0, c1, c2) = (FgModule::free(n, a), FgModule::free(n, b), FgModule::free(n, c));
    let d0 = ModuleMap::from_ambient(c0.clone(), c1.clone(), &m)?;
    let d1 = ModuleMap::from_ambient(c1.clone(), c2.clone(), &second)?;
    let h = BoundedComplex::new(0, vec![c0, c1, c2], vec![d0, d1])?.homology(1)?;
    ensure(
        brute::torsion_profile_of(n, &h.iso_class()) == brute::middle_homology_profile(&m, &second),
        || format!("homology differs for {m:?}, {second:?}"),
    )
}

pub fn linear_algebra_oracles(seed: u64) -> CriterionOutcome {
    run(9, "linear-algebra oracle equivalence", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            one_linear_case(&mut rng)?;
        }
        Ok(format!("200 random cases agree (seed {seed})"))
    })
}

/// Every criterion, in order.
pub fn verify_all(seed: u64) -> Vec<CriterionOutcome> {
    vec![
        orbit_formula(),
        sl2_cohomology_table(),
        ps1_acyclicity(),
        jacquet_agreement(),
        gluing_tables(),
        cuspidal_vanishing(),
        compact_generators(),
        tree_homology(),
        linear_algebra_oracles(seed),
    ]
}
