//! The Jacquet module through averaging projectors e_j over
//! N_j = {[[1, x], [0, 1]] : x ∈ π^{-j}O}.

use serde_json::{json, Value};

use super::induced::{act_function, cocycle_value, delta};
use super::{FiniteRep, RepKind};
use crate::chars::{CharPair, UnramChar};
use crate::error::{Error, Result};
use crate::lambda::{CoeffRing, FgModule, LambdaMatrix};
use crate::padic::{enumerate_p1, p1_size, ppow, unit_group_generators, LaurentMatrix, ProjPoint, TruncRing};

const MAX_EXTRA: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacquetResult {
    pub stabilized_rank: usize,
    /// diag(π,1) in the basis (sub, top); column convention.
    pub torus_matrix: LambdaMatrix,
    /// diag(u,1) and diag(1,u) for the unit generators.
    pub unit_torus: Vec<LambdaMatrix>,
    /// Graded pieces, sub first.
    pub filtration: Vec<CharPair>,
    pub split: bool,
    pub stabilization_level: u32,
    pub rank_history: Vec<usize>,
}

impl JacquetResult {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.stabilized_rank,
            "torus_matrix": self.torus_matrix.row_vecs(),
            "filtration": self.filtration.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "split": self.split,
            "j": self.stabilization_level,
            "rank_history": self.rank_history,
        })
    }
}

/// K[y][z] = (e_j δ_z)(y) for z at level m_in and y at level out.
fn kernel(ring: &CoeffRing, chi: &CharPair, p: u64, j: u32, m_in: u32, out: u32) -> Result<Vec<Vec<u64>>> {
    let count = ppow(p, j + m_in) as u64;
    let inv = ring
        .inv(count % ring.n)
        .ok_or(Error::NonInvertibleOrder { order: count, n: ring.n })?;
    let width = p1_size(p, m_in);
    let base_extra = (m_in + j).saturating_sub(out);
    let mut rows = Vec::with_capacity(p1_size(p, out));
    for y in enumerate_p1(p, out) {
        let mut found = None;
        for extra in base_extra..=base_extra + MAX_EXTRA {
            let r = TruncRing::new(p, out + extra + 2 * j + 4)?;
            let ns: Vec<LaurentMatrix> = (0..count).map(|a| LaurentMatrix::upper(&r, a as i64, -(j as i32))).collect();
            let attempt: Result<Vec<Vec<u64>>> = y
                .lifts(extra)
                .iter()
                .map(|yl| {
                    let mut row = vec![0u64; width];
                    for n in &ns {
                        let (z, c) = yl.act(n, m_in)?;
                        row[z.index()] = ring.add(row[z.index()], cocycle_value(ring, chi, &c));
                    }
                    Ok(row)
                })
                .collect();
            match attempt {
                Ok(rs) => {
                    if rs.iter().any(|r| *r != rs[0]) {
                        return Err(Error::PrecisionExhausted(format!(
                            "e_{j} of a level-{m_in} function is not of level {out} at {y}"
                        )));
                    }
                    found = Some(rs[0].iter().map(|&v| ring.mul(v, inv)).collect());
                    break;
                }
                Err(Error::PrecisionExhausted(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        rows.push(found.ok_or_else(|| Error::PrecisionExhausted(format!("no lift of {y} resolves e_{j}")))?);
    }
    Ok(rows)
}

fn apply(k: &[Vec<u64>], f: &[u64], ring: &CoeffRing) -> Vec<u64> {
    k.iter().map(|row| row.iter().zip(f).fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))).collect()
}

fn column(k: &[Vec<u64>], z: usize) -> Vec<u64> {
    k.iter().map(|row| row[z]).collect()
}

struct Level {
    rank: usize,
    torus: Option<LambdaMatrix>,
    basis: LambdaMatrix,
    out: u32,
}

/// One step of the oracle for Ind_B χ at level m.
fn level_data(ring: &CoeffRing, chi: &CharPair, m: u32, j: u32) -> Result<Level> {
    let p = ring.p;
    let out = m.max(j) + 1;
    let k = kernel(ring, chi, p, j, m, out)?;
    let width = p1_size(p, out);
    let cols: Vec<Vec<u64>> = (0..p1_size(p, m)).map(|z| column(&k, z)).collect();
    let rank = FgModule::submodule(&LambdaMatrix::from_u64_rows(ring.n, width, &cols)).iso_class().len();
    let sub = ProjPoint::zero(p, m);
    let top = ProjPoint::infinity(p, m);
    let basis = LambdaMatrix::from_u64_rows(ring.n, width, &[cols[sub.index()].clone(), cols[top.index()].clone()]);
    if rank != 2 {
        return Ok(Level { rank, torus: None, basis, out });
    }
    let k_up = kernel(ring, chi, p, j, m + 1, out)?;
    let r = TruncRing::new(p, m + 6)?;
    let t = LaurentMatrix::diag_pi(&r, 1, 0);
    let mut torus = LambdaMatrix::zeros(ring.n, 2, 2);
    for (col, b) in [sub, top].iter().enumerate() {
        let tf = act_function(ring, chi, &t, &delta(p, m, b), m, m + 1)?;
        let Some(c) = basis.solve_left(&apply(&k_up, &tf, ring)) else {
            return Ok(Level { rank, torus: None, basis, out });
        };
        torus.set(0, col, c[0]);
        torus.set(1, col, c[1]);
    }
    Ok(Level { rank, torus: Some(torus), basis, out })
}

fn check_unit_torus(ring: &CoeffRing, chi: &CharPair, lvl: &Level) -> Result<Vec<LambdaMatrix>> {
    let p = ring.p;
    let r = TruncRing::new(p, lvl.out + 4)?;
    let mut mats = Vec::new();
    for u in unit_group_generators(p) {
        for g in [LaurentMatrix::from_ints(&r, [[u, 0], [0, 1]]), LaurentMatrix::from_ints(&r, [[1, 0], [0, u]])] {
            for w in lvl.basis.row_vecs() {
                if act_function(ring, chi, &g, &w, lvl.out, lvl.out)? != w {
                    return Err(Error::ClassificationMismatch(format!("unit torus element {g} moves the Jacquet basis")));
                }
            }
            mats.push(LambdaMatrix::identity(ring.n, 2));
        }
    }
    Ok(mats)
}

fn induced_oracle(ring: &CoeffRing, chi: &CharPair, m: u32, j_max: u32) -> Result<(JacquetResult, LambdaMatrix)> {
    let mut history = Vec::new();
    let mut prev: Option<Level> = None;
    for j in 0..=j_max {
        let cur = level_data(ring, chi, m, j)?;
        history.push(cur.rank);
        if let Some(pr) = &prev {
            if pr.rank == cur.rank && cur.torus.is_some() && pr.torus == cur.torus {
                let t = cur.torus.clone().expect("checked");
                if t.get(1, 0) != 0 {
                    return Err(Error::ClassificationMismatch(format!("torus matrix {:?} is not upper triangular", t.row_vecs())));
                }
                let (alpha, beta, gamma) = (t.get(0, 0), t.get(0, 1), t.get(1, 1));
                let z = ring.mul(chi.z1.value, chi.z2.value);
                let piece = |a: u64| -> Result<CharPair> {
                    let inv = ring.inv(a).ok_or(Error::NonUnitWitness(a))?;
                    Ok(CharPair::new(UnramChar::from_value(ring, a)?, UnramChar::from_value(ring, ring.mul(z, inv))?))
                };
                let g = num_integer::Integer::gcd(&ring.sub(alpha, gamma), &ring.n);
                let split = beta % g == 0;
                let unit_torus = check_unit_torus(ring, chi, &cur)?;
                let res = JacquetResult {
                    stabilized_rank: 2,
                    torus_matrix: t,
                    unit_torus,
                    filtration: vec![piece(alpha)?, piece(gamma)?],
                    split,
                    stabilization_level: j - 1,
                    rank_history: history,
                };
                return Ok((res, cur.basis));
            }
        }
        prev = Some(cur);
    }
    Err(Error::NotStabilized(j_max))
}

fn scale_result(res: &mut JacquetResult, chi: &UnramChar) {
    let c = chi.value;
    res.torus_matrix = res.torus_matrix.scale(c);
    let d = CharPair::diagonal(*chi);
    res.filtration = res.filtration.iter().map(|f| f.mul(&d)).collect();
}

/// Compute the Jacquet module of σ by stabilizing e_j-images for
/// j = 0..=j_max (default level + 2).
pub fn jacquet_oracle(sigma: &FiniteRep, j_max: Option<u32>) -> Result<JacquetResult> {
    let ring = sigma.ring;
    let m = sigma.working_level();
    let j_max = j_max.unwrap_or(m + 2);
    match &sigma.kind {
        RepKind::Trivial => {
            let triv = CharPair::trivial(&ring);
            Ok(JacquetResult {
                stabilized_rank: 1,
                torus_matrix: LambdaMatrix::identity(ring.n, 1),
                unit_torus: vec![],
                filtration: vec![triv],
                split: true,
                stabilization_level: 0,
                rank_history: vec![1],
            })
        }
        RepKind::Induced { chi } => Ok(induced_oracle(&ring, chi, m, j_max)?.0),
        RepKind::Steinberg => {
            let triv = CharPair::trivial(&ring);
            let (res, basis) = induced_oracle(&ring, &triv, m, j_max)?;
            let ones = vec![1 % ring.n; basis.ncols()];
            let c = basis
                .solve_left(&ones)
                .ok_or_else(|| Error::ClassificationMismatch("constants missing from the Jacquet image".into()))?;
            if c[1] != 1 % ring.n {
                return Err(Error::ClassificationMismatch(format!("constant has top coefficient {}", c[1])));
            }
            let t = &res.torus_matrix;
            let t1 = [ring.add(ring.mul(t.get(0, 0), c[0]), t.get(0, 1)), t.get(1, 1)];
            if t1 != [c[0], 1 % ring.n] {
                return Err(Error::ClassificationMismatch("torus does not fix the constants".into()));
            }
            let alpha = t.get(0, 0);
            Ok(JacquetResult {
                stabilized_rank: 1,
                torus_matrix: LambdaMatrix::from_u64_rows(ring.n, 1, &[vec![alpha]]),
                unit_torus: res.unit_torus.iter().map(|_| LambdaMatrix::identity(ring.n, 1)).collect(),
                filtration: vec![res.filtration[0]],
                split: true,
                stabilization_level: res.stabilization_level,
                rank_history: res.rank_history.iter().map(|r| r - 1).collect(),
            })
        }
        RepKind::Twist { base, chi } => {
            let mut res = jacquet_oracle(base, Some(j_max))?;
            scale_result(&mut res, chi);
            Ok(res)
        }
        _ => Err(Error::UnsupportedSpec(format!("no Jacquet oracle for {}", sigma.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::make_ring;

    #[test]
    fn trivial_induction_has_two_pieces() {
        let ring = make_ring(11, 3, Some(5)).unwrap();
        let ind = FiniteRep::induced(&ring, CharPair::trivial(&ring), 2).unwrap();
        let res = jacquet_oracle(&ind, None).unwrap();
        assert_eq!(res.stabilized_rank, 2);
        assert_eq!(res.torus_matrix.get(0, 0), 4);
        assert_eq!(res.torus_matrix.get(1, 1), 1);
        assert!(res.split);
    }
}
