use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::mat::LaurentMatrix;
use super::p1::{enumerate_p1, p1_size, PointKind, ProjPoint};
use super::subgroup::{subgroup_generators, SubgroupName, SubgroupSpec};
use super::trunc::ppow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub rep: ProjPoint,
    pub points: Vec<ProjPoint>,
}

/// Orbit partition of P¹(O/π^m) under a list of matrices, smallest point first.
pub fn orbits_of(gens: &[LaurentMatrix], p: u64, m: u32) -> Result<Vec<Orbit>> {
    let pts = enumerate_p1(p, m);
    let mut moves = vec![Vec::with_capacity(gens.len()); pts.len()];
    for x in &pts {
        for g in gens {
            moves[x.index()].push(x.act(g, m)?.0.index());
        }
    }
    let mut label = vec![usize::MAX; pts.len()];
    let mut out = Vec::new();
    for start in 0..pts.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in &moves[i] {
                if label[j] == usize::MAX {
                    label[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        out.push(Orbit { rep: pts[members[0]], points: members.into_iter().map(|i| pts[i]).collect() });
    }
    Ok(out)
}

/// Orbits of the named subgroup on P¹ at level m.
pub fn orbits(spec: &SubgroupSpec, m: u32) -> Result<Vec<Orbit>> {
    if spec.name == SubgroupName::Uprime {
        return Err(Error::UnsupportedSubgroup(
            "U' is handled through conjugation by eta, not by direct enumeration".into(),
        ));
    }
    let spec = SubgroupSpec { m: m.max(spec.m), ..*spec };
    orbits_of(&subgroup_generators(&spec)?, spec.p, m)
}

/// 2 + Σ_{i=-k+1}^{k-1} (q-1)·q^{min(k+i,k-i)-1}.
pub fn orbit_count_formula(q: u64, k: u32) -> u128 {
    let k = k as i64;
    let mut total = 2u128;
    for i in (-k + 1)..k {
        let e = (k + i).min(k - i) - 1;
        total += (q as u128 - 1) * ppow(q, e as u32);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub rep: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub k: u32,
    pub m: u32,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub p: u64,
    pub k: u32,
    pub formula: u128,
    pub closed_form: u128,
    pub levels: Vec<LevelReport>,
}

fn is_infinity_ball(pt: &ProjPoint, k: u32) -> bool {
    matches!(pt.kind, PointKind::AtInf(s) if s % ppow(pt.p, k) as u64 == 0)
}

fn is_zero_ball(pt: &ProjPoint, k: u32) -> bool {
    matches!(pt.kind, PointKind::Affine(t) if t % ppow(pt.p, k) as u64 == 0)
}

/// Γ_k orbits at levels 2k−1 and 2k against the closed formula and the two ball orbits.
pub fn orbit_classification_check(k: u32, p: u64) -> Result<OrbitReport> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let formula = orbit_count_formula(p, k);
    let closed_form = ppow(p, k) + ppow(p, k - 1);
    if formula != closed_form {
        return Err(Error::ClassificationMismatch(format!(
            "(b) formula gives {formula}, closed form p^k + p^(k-1) gives {closed_form}"
        )));
    }
    let mut levels = Vec::new();
    for m in [2 * k - 1, 2 * k] {
        let spec = SubgroupSpec::gamma_k(p, k, m);
        let orbs = orbits(&spec, m)?;
        if orbs.len() as u128 != formula {
            return Err(Error::ClassificationMismatch(format!(
                "(b) level {m}: {} orbits, formula gives {formula}",
                orbs.len()
            )));
        }
        let inf = ProjPoint::infinity(p, m);
        let inf_orbit = orbs.iter().find(|o| o.points.contains(&inf)).expect("partition");
        let expected_inf = enumerate_p1(p, m).into_iter().filter(|x| is_infinity_ball(x, k)).count();
        if inf_orbit.points.len() != expected_inf || !inf_orbit.points.iter().all(|x| is_infinity_ball(x, k)) {
            return Err(Error::ClassificationMismatch(format!(
                "(c) level {m}: orbit of infinity is not the valuation <= -{k} locus"
            )));
        }
        let zero = ProjPoint::zero(p, m);
        let zero_orbit = orbs.iter().find(|o| o.points.contains(&zero)).expect("partition");
        let expected_zero = enumerate_p1(p, m).into_iter().filter(|x| is_zero_ball(x, k)).count();
        if zero_orbit.points.len() != expected_zero || !zero_orbit.points.iter().all(|x| is_zero_ball(x, k)) {
            return Err(Error::ClassificationMismatch(format!("(d) level {m}: orbit of 0 is not the π^{k}O ball")));
        }
        debug_assert_eq!(orbs.iter().map(|o| o.points.len()).sum::<usize>(), p1_size(p, m));
        levels.push(LevelReport {
            k,
            m,
            orbit_count: orbs.len(),
            orbits: orbs.iter().map(|o| OrbitSummary { rep: o.rep.to_string(), size: o.points.len() }).collect(),
        });
    }
    if levels[0].orbit_count != levels[1].orbit_count {
        return Err(Error::ClassificationMismatch(format!(
            "(a) counts differ between levels {} and {}",
            levels[0].m, levels[1].m
        )));
    }
    Ok(OrbitReport { p, k, formula, closed_form, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(orbit_count_formula(3, 1), 4);
        assert_eq!(orbit_count_formula(2, 2), 6);
        assert_eq!(orbit_count_formula(3, 2), 12);
    }

    #[test]
    fn iwahori_has_two_orbits() {
        let orbs = orbits(&SubgroupSpec::gamma0(3, 2), 2).unwrap();
        let mut sizes: Vec<usize> = orbs.iter().map(|o| o.points.len()).collect();
        sizes.sort();
        assert_eq!(sizes, [3, 9]);
    }

    #[test]
    fn sl2_is_transitive() {
        for (p, m) in [(2, 1), (2, 3), (3, 2)] {
            assert_eq!(orbits(&SubgroupSpec::u(p, m), m).unwrap().len(), 1);
        }
    }

    #[test]
    fn classification_small_cases() {
        assert_eq!(orbit_classification_check(1, 3).unwrap().levels[1].orbit_count, 4);
        assert_eq!(orbit_classification_check(2, 2).unwrap().levels[0].orbit_count, 6);
    }
}
