//! Level-one inflations of GL₂(F_p)-representations, given by action tables.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::LambdaMatrix;
use crate::padic::IntMat;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CuspTableJson {
    pub group: String,
    pub generators: Vec<[[i64; 2]; 2]>,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

/// A representation of GL₂(F_p) over Λ, closed from generator matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspTable {
    pub p: u64,
    pub n: u64,
    pub rank: usize,
    pub group: String,
    elements: HashMap<IntMat, LambdaMatrix>,
}

fn parse_group(s: &str) -> Result<u64> {
    let inner = s
        .strip_prefix("GL2(F")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { input: s.into(), reason: "expected GL2(Fp)".into() })?;
    let p: u64 = inner.parse().map_err(|_| Error::Parse { input: s.into(), reason: "bad prime".into() })?;
    if !crate::lambda::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p)
}

impl CuspTable {
    pub fn from_json_value(n: u64, raw: &CuspTableJson) -> Result<Self> {
        let p = parse_group(&raw.group)?;
        if raw.generators.len() != raw.matrices.len() || raw.generators.is_empty() {
            return Err(Error::Invalid("need one matrix per generator".into()));
        }
        let rank = raw.matrices[0].len();
        let mut gens = Vec::new();
        for (g, m) in raw.generators.iter().zip(&raw.matrices) {
            let g = IntMat::new(p, 1, *g);
            if g.det() == 0 {
                return Err(Error::Invalid(format!("generator {:?} is singular mod {p}", g.a)));
            }
            let a = LambdaMatrix::from_rows(n, rank, m)?;
            if a.nrows() != rank || !a.is_invertible() {
                return Err(Error::Invalid("generator matrices must be invertible and square".into()));
            }
            gens.push((g, a));
        }
        let id = IntMat::identity(p, 1);
        let mut elements = HashMap::from([(id, LambdaMatrix::identity(n, rank))]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let ax = elements[&x].clone();
            for (s, a_s) in &gens {
                let y = x.mul(s);
                let ay = ax.mul(a_s)?;
                match elements.get(&y) {
                    Some(prev) if *prev != ay => {
                        return Err(Error::Invalid(format!("table is not a representation: conflict at {:?}", y.a)));
                    }
                    Some(_) => {}
                    None => {
                        elements.insert(y, ay);
                        queue.push_back(y);
                    }
                }
            }
        }
        let order = (p * p - 1) * (p * p - p);
        if elements.len() as u64 != order {
            return Err(Error::Invalid(format!("generators reach {} of {order} elements", elements.len())));
        }
        Ok(Self { p, n, rank, group: raw.group.clone(), elements })
    }

    pub fn from_json_str(n: u64, s: &str) -> Result<Self> {
        let raw: CuspTableJson =
            serde_json::from_str(s).map_err(|e| Error::Parse { input: "cuspidal table".into(), reason: e.to_string() })?;
        Self::from_json_value(n, &raw)
    }

    pub fn load(n: u64, path: &str) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Parse { input: path.into(), reason: e.to_string() })?;
        Self::from_json_str(n, &s)
    }

    /// The sign character of GL₂(F₂) ≅ S₃.
    pub fn gl2f2_sign(n: u64) -> Self {
        Self::from_json_value(n, &Self::gl2f2_sign_json()).expect("built-in table is valid")
    }

    pub fn gl2f2_sign_json() -> CuspTableJson {
        CuspTableJson {
            group: "GL2(F2)".into(),
            generators: vec![[[1, 1], [0, 1]], [[0, 1], [1, 1]]],
            matrices: vec![vec![vec![-1]], vec![vec![1]]],
        }
    }

    /// Action of a matrix of GL₂(F_p).
    pub fn matrix(&self, g: &IntMat) -> Result<&LambdaMatrix> {
        self.elements
            .get(g)
            .ok_or_else(|| Error::Invalid(format!("{:?} is not in GL2(F{})", g.a, self.p)))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_table_closes() {
        let t = CuspTable::gl2f2_sign(5);
        assert_eq!(t.order(), 6);
        let swap = IntMat::new(2, 1, [[0, 1], [1, 0]]);
        assert_eq!(t.matrix(&swap).unwrap().get(0, 0), 4);
    }

    #[test]
    fn inconsistent_table_rejected() {
        let mut raw = CuspTable::gl2f2_sign_json();
        raw.generators.push([[1, 1], [0, 1]]);
        raw.matrices.push(vec![vec![1]]);
        assert!(CuspTable::from_json_value(5, &raw).is_err());
    }
}
