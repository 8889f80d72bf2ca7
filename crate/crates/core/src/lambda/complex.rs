use super::module::{subquotient_homology, FgModule, ModuleMap};
use crate::error::{Error, Result};

/// A bounded cochain complex C^lo → … → C^hi with d_k : C^k → C^{k+1}.
#[derive(Debug, Clone)]
pub struct BoundedComplex {
    lo: i32,
    modules: Vec<FgModule>,
    differentials: Vec<ModuleMap>,
}

impl BoundedComplex {
    /// `differentials[i]` goes from `modules[i]` to `modules[i+1]`.
    pub fn new(lo: i32, modules: Vec<FgModule>, differentials: Vec<ModuleMap>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::Invalid("a complex needs at least one term".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::Shape(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.source() != &modules[i] || d.target() != &modules[i + 1] {
                return Err(Error::Shape(format!("differential {} does not match its terms", lo + i as i32)));
            }
        }
        for w in differentials.windows(2) {
            if !w[0].then(&w[1])?.is_zero() {
                return Err(Error::Invalid("consecutive differentials do not compose to zero".into()));
            }
        }
        Ok(Self { lo, modules, differentials })
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.modules.len() as i32 - 1
    }

    pub fn term(&self, k: i32) -> Option<&FgModule> {
        if k < self.lo || k > self.hi() {
            None
        } else {
            Some(&self.modules[(k - self.lo) as usize])
        }
    }

    /// ker(d_k) / im(d_{k-1}).
    pub fn homology(&self, k: i32) -> Result<FgModule> {
        let Some(c) = self.term(k) else {
            return Err(Error::DegreeOutOfRange { degree: k, lo: self.lo, hi: self.hi() });
        };
        let n = c.modulus();
        let idx = (k - self.lo) as usize;
        let outgoing = if idx < self.differentials.len() {
            self.differentials[idx].clone()
        } else {
            ModuleMap::zero(c.clone(), FgModule::zero(n, 0))
        };
        let incoming = if idx > 0 {
            self.differentials[idx - 1].clone()
        } else {
            ModuleMap::zero(FgModule::zero(n, 0), c.clone())
        };
        subquotient_homology(&incoming, &outgoing)
    }

    /// Iso classes of all homology groups, lowest degree first.
    pub fn homology_table(&self) -> Result<Vec<(i32, Vec<u64>)>> {
        (self.lo..=self.hi()).map(|k| Ok((k, self.homology(k)?.iso_class()))).collect()
    }

    /// Termwise direct sum of two complexes on the same degree range.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.lo != other.lo || self.modules.len() != other.modules.len() {
            return Err(Error::Shape("direct sum of complexes on different degree ranges".into()));
        }
        let modules: Vec<FgModule> = self.modules.iter().zip(&other.modules).map(|(a, b)| a.direct_sum(b)).collect();
        let mut diffs = Vec::new();
        for (i, (d, e)) in self.differentials.iter().zip(&other.differentials).enumerate() {
            let src = &modules[i];
            let tgt = &modules[i + 1];
            let rows: Result<Vec<Vec<u64>>> = (0..src.generators().nrows())
                .map(|r| {
                    let v = src.generators().row(r);
                    let (va, vb) = v.split_at(d.source().ambient());
                    let mut out = d.apply(va)?;
                    out.extend(e.apply(vb)?);
                    Ok(out)
                })
                .collect();
            let mat = super::matrix::LambdaMatrix::from_u64_rows(src.modulus(), tgt.ambient(), &rows?);
            diffs.push(ModuleMap::new(src.clone(), tgt.clone(), mat)?);
        }
        Self::new(self.lo, modules, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::LambdaMatrix;

    #[test]
    fn single_term() {
        let c = BoundedComplex::new(0, vec![FgModule::free(7, 1)], vec![]).unwrap();
        assert_eq!(c.homology(0).unwrap().iso_class(), vec![7]);
        assert!(matches!(c.homology(1), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn steinberg_shaped_square() {
        let v = FgModule::free(5, 2);
        let a = LambdaMatrix::from_rows(5, 2, &[vec![1, -1], vec![1, -1]]).unwrap();
        let d = ModuleMap::from_ambient(v.clone(), v.clone(), &a).unwrap();
        let c = BoundedComplex::new(0, vec![v.clone(), v], vec![d]).unwrap();
        assert_eq!(c.homology(0).unwrap().iso_class(), vec![5]);
        assert_eq!(c.homology(1).unwrap().iso_class(), vec![5]);
    }

    #[test]
    fn identity_is_exact() {
        let v = FgModule::free(9, 1);
        let c = BoundedComplex::new(0, vec![v.clone(), v.clone()], vec![ModuleMap::identity(&v)]).unwrap();
        assert!(c.homology(0).unwrap().is_zero());
        assert!(c.homology(1).unwrap().is_zero());
    }

    #[test]
    fn non_complex_rejected() {
        let v = FgModule::free(5, 1);
        let id = ModuleMap::identity(&v);
        assert!(BoundedComplex::new(0, vec![v.clone(), v.clone(), v], vec![id.clone(), id]).is_err());
    }
}
