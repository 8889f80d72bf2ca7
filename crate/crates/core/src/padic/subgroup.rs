use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mat::{IntMat, LaurentMatrix};
use super::trunc::{ppow, TruncRing};
use crate::error::{Error, Result};
use crate::lambda::pow_mod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupName {
    /// SL₂(O).
    U,
    /// diag(1,π)·SL₂(O)·diag(1,π⁻¹).
    Uprime,
    /// Iwahori: upper triangular mod π.
    Gamma0,
    /// Kernel of SL₂(O) → SL₂(O/π^k).
    GammaK,
    /// Principal congruence subgroup of level k in SL₂.
    KM,
    /// [[1, x], [0, 1]], x ∈ π^{-j}O.
    NJ,
    /// Diagonal torus of GL₂(E).
    T,
    /// Diagonal torus of SL₂(E).
    Ts,
    Eta,
    /// Upper-triangular Borel of GL₂(E).
    B,
}

impl FromStr for SubgroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "U" => Self::U,
            "Uprime" | "U'" => Self::Uprime,
            "Gamma0" => Self::Gamma0,
            "Gamma_k" | "GammaK" => Self::GammaK,
            "K_m" | "KM" => Self::KM,
            "N_j" | "NJ" => Self::NJ,
            "T" => Self::T,
            "Ts" => Self::Ts,
            "eta" => Self::Eta,
            "B" => Self::B,
            _ => return Err(Error::UnsupportedSubgroup(s.to_string())),
        })
    }
}

/// A named subgroup together with its parameters and working level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub name: SubgroupName,
    pub p: u64,
    pub k: u32,
    pub j: u32,
    pub m: u32,
}

impl SubgroupSpec {
    pub fn new(name: SubgroupName, p: u64, m: u32) -> Self {
        Self { name, p, k: 0, j: 0, m }
    }

    pub fn u(p: u64, m: u32) -> Self {
        Self::new(SubgroupName::U, p, m)
    }

    pub fn uprime(p: u64, m: u32) -> Self {
        Self::new(SubgroupName::Uprime, p, m)
    }

    pub fn gamma0(p: u64, m: u32) -> Self {
        Self::new(SubgroupName::Gamma0, p, m)
    }

    pub fn gamma_k(p: u64, k: u32, m: u32) -> Self {
        Self { k, ..Self::new(SubgroupName::GammaK, p, m) }
    }

    pub fn n_j(p: u64, j: u32, m: u32) -> Self {
        Self { j, ..Self::new(SubgroupName::NJ, p, m) }
    }

    /// Default working precision for this subgroup's generators.
    pub fn precision(&self) -> u32 {
        let neg = match self.name {
            SubgroupName::Uprime | SubgroupName::Ts => 1,
            SubgroupName::NJ => self.j,
            _ => 0,
        };
        self.m + 2 * neg + 2
    }

    pub fn ring(&self) -> Result<TruncRing> {
        TruncRing::new(self.p, self.precision())
    }

    /// Whether the image in SL₂(O/π^m) is a finite group we can enumerate.
    pub fn is_compact_integral(&self) -> bool {
        matches!(self.name, SubgroupName::U | SubgroupName::Gamma0 | SubgroupName::GammaK | SubgroupName::KM)
    }

    /// Order of the image in SL₂(O/π^m), from the standard index formulas.
    pub fn expected_order(&self) -> Result<u128> {
        let (p, m) = (self.p as u128, self.m);
        let sl2 = |m: u32| if m == 0 { 1 } else { ppow(self.p, 3 * m - 2) * (p * p - 1) };
        Ok(match self.name {
            SubgroupName::U => sl2(m),
            SubgroupName::Gamma0 => sl2(m) / (p + 1),
            SubgroupName::GammaK | SubgroupName::KM => {
                let k = self.level_k();
                if m <= k {
                    1
                } else {
                    ppow(self.p, 3 * (m - k))
                }
            }
            _ => return Err(Error::UnsupportedSubgroup(format!("{self} has no finite image formula"))),
        })
    }

    fn level_k(&self) -> u32 {
        if self.name == SubgroupName::KM {
            self.k.max(1)
        } else {
            self.k
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            SubgroupName::GammaK => write!(f, "Gamma_{} (p={}, m={})", self.k, self.p, self.m),
            SubgroupName::KM => write!(f, "K_{} (p={}, m={})", self.level_k(), self.p, self.m),
            SubgroupName::NJ => write!(f, "N_{} (p={}, m={})", self.j, self.p, self.m),
            n => write!(f, "{n:?} (p={}, m={})", self.p, self.m),
        }
    }
}

/// Generators of (Z/p^m)^×, as integers.
pub fn unit_group_generators(p: u64) -> Vec<i64> {
    if p == 2 {
        return vec![-1, 5];
    }
    let p2 = p * p;
    let order = p * (p - 1);
    let is_prim = |g: u64| {
        let mut d = 2;
        let mut rest = order;
        let mut primes = Vec::new();
        while rest > 1 {
            if rest.is_multiple_of(d) {
                primes.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        primes.iter().all(|&r| pow_mod(g, order / r, p2) != 1)
    };
    let g = (2..p2).find(|&g| g % p != 0 && is_prim(g)).expect("primitive roots exist");
    vec![g as i64]
}

fn inverse_mod_pm(u: i64, p: u64, m: u32) -> i64 {
    let md = ppow(p, m) as u64;
    crate::lambda::inv_mod(u.rem_euclid(md as i64) as u64, md).expect("unit") as i64
}

/// Generators of the named subgroup, at the spec's working precision.
pub fn subgroup_generators(spec: &SubgroupSpec) -> Result<Vec<LaurentMatrix>> {
    let r = spec.ring()?;
    let p = spec.p as i64;
    let prec = r.prec;
    let units = unit_group_generators(spec.p);
    let diag_unit = |u: i64| LaurentMatrix::from_ints(&r, [[u, 0], [0, inverse_mod_pm(u, spec.p, prec)]]);
    let gens = match spec.name {
        SubgroupName::U => vec![LaurentMatrix::upper(&r, 1, 0), LaurentMatrix::lower(&r, 1, 0)],
        SubgroupName::Uprime => vec![LaurentMatrix::upper(&r, 1, -1), LaurentMatrix::lower(&r, 1, 1)],
        SubgroupName::Gamma0 => {
            let mut g = vec![LaurentMatrix::upper(&r, 1, 0), LaurentMatrix::lower(&r, 1, 1)];
            g.extend(units.iter().map(|&u| diag_unit(u)));
            g
        }
        SubgroupName::GammaK | SubgroupName::KM => {
            let k = spec.level_k();
            if k == 0 {
                return Err(Error::UnsupportedSubgroup("Gamma_0 here means the Iwahori; use Gamma0".into()));
            }
            let pk = p.pow(k);
            vec![
                LaurentMatrix::upper(&r, 1, k as i32),
                LaurentMatrix::lower(&r, 1, k as i32),
                diag_unit(1 + pk),
                LaurentMatrix::from_ints(&r, [[1 + pk, pk], [-pk, 1 - pk]]),
            ]
        }
        SubgroupName::NJ => vec![LaurentMatrix::upper(&r, 1, -(spec.j as i32))],
        SubgroupName::Eta => vec![LaurentMatrix::eta(&r)],
        SubgroupName::T => {
            let mut g = vec![LaurentMatrix::diag_pi(&r, 1, 0), LaurentMatrix::diag_pi(&r, 0, 1)];
            g.extend(units.iter().map(|&u| LaurentMatrix::from_ints(&r, [[u, 0], [0, 1]])));
            g.extend(units.iter().map(|&u| LaurentMatrix::from_ints(&r, [[1, 0], [0, u]])));
            g
        }
        SubgroupName::Ts => {
            let mut g = vec![LaurentMatrix::diag_pi(&r, 1, -1)];
            g.extend(units.iter().map(|&u| diag_unit(u)));
            g
        }
        SubgroupName::B => {
            let mut g = subgroup_generators(&SubgroupSpec { name: SubgroupName::T, ..*spec })?;
            g.push(LaurentMatrix::upper(&r, 1, 0));
            g
        }
    };
    for g in &gens {
        check_membership(spec, g)?;
    }
    Ok(gens)
}

fn check_membership(spec: &SubgroupSpec, g: &LaurentMatrix) -> Result<()> {
    let bad = |why: &str| Err(Error::UnsupportedSubgroup(format!("generator {g} not in {spec}: {why}")));
    let sl2 = |g: &LaurentMatrix| g.det().residue(spec.m.max(1)).ok() == Some(1);
    match spec.name {
        SubgroupName::U | SubgroupName::Gamma0 | SubgroupName::GammaK | SubgroupName::KM => {
            if !g.is_integral() || !sl2(g) {
                return bad("not in SL2(O)");
            }
            if spec.name == SubgroupName::Gamma0 && g.e[1][0].residue(1)? != 0 {
                return bad("lower-left entry is a unit");
            }
            if matches!(spec.name, SubgroupName::GammaK | SubgroupName::KM) && !g.is_congruent_identity(spec.level_k()) {
                return bad("not congruent to the identity");
            }
        }
        SubgroupName::NJ
            if (g.e[1][0].valuation().is_some() || g.e[0][0].residue(2)? != 1 || g.e[1][1].residue(2)? != 1) => {
                return bad("not upper unipotent");
            }
        _ => {}
    }
    Ok(())
}

/// The image of the generated group in SL₂(O/π^m) by breadth-first closure.
pub fn closure(spec: &SubgroupSpec) -> Result<HashSet<IntMat>> {
    if !spec.is_compact_integral() {
        return Err(Error::UnsupportedSubgroup(format!("{spec} has no finite integral image")));
    }
    if spec.m == 0 {
        return Err(Error::UnsupportedSubgroup("level must be at least 1".into()));
    }
    let gens: Vec<IntMat> = subgroup_generators(spec)?.iter().map(|g| g.reduce(spec.m)).collect::<Result<_>>()?;
    let id = IntMat::identity(spec.p, spec.m);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// Compare the closure size against the group-order formula.
pub fn verify_closure(spec: &SubgroupSpec) -> Result<u128> {
    let size = closure(spec)?.len() as u128;
    let expected = spec.expected_order()?;
    if size != expected {
        return Err(Error::ClassificationMismatch(format!("{spec}: closure has {size} elements, expected {expected}")));
    }
    Ok(size)
}
