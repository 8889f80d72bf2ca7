//! Smooth SL₂(E)-cohomology from the two-term fixed-point complex
//! 0 → σ^U ⊕ σ^{U′} → σ^{Γ₀} → 0.

use serde_json::{json, Value};

use crate::chars::CharPair;
use crate::error::{Error, Result};
use crate::lambda::{make_ring, BoundedComplex, FgModule, LambdaMatrix, ModuleMap};
use crate::padic::SubgroupName;
use crate::rep::FiniteRep;

#[derive(Debug, Clone)]
pub struct SsComplex {
    pub fixed_u: FgModule,
    pub fixed_uprime: FgModule,
    pub fixed_gamma0: FgModule,
    /// δ(v, w) = v − w.
    pub difference: ModuleMap,
}

impl SsComplex {
    pub fn as_complex(&self) -> Result<BoundedComplex> {
        BoundedComplex::new(
            0,
            vec![self.difference.source().clone(), self.difference.target().clone()],
            vec![self.difference.clone()],
        )
    }

    /// δ on the generators of σ^U ⊕ σ^{U′}, in coordinates of the generators of σ^{Γ₀}.
    pub fn difference_matrix(&self) -> Result<LambdaMatrix> {
        let basis = self.fixed_gamma0.generators();
        let n = basis.modulus();
        let rows: Vec<Vec<u64>> = self
            .difference
            .matrix()
            .row_vecs()
            .iter()
            .map(|v| basis.solve_left(v).ok_or_else(|| Error::IllDefinedMap("image outside σ^Γ₀".into())))
            .collect::<Result<_>>()?;
        Ok(LambdaMatrix::from_u64_rows(n, basis.nrows(), &rows))
    }
}

pub fn ss_complex(sigma: &FiniteRep) -> Result<SsComplex> {
    let n = sigma.n();
    let r = sigma.rank;
    let fixed_gamma0 = sigma.fixed_points_named(SubgroupName::Gamma0)?;
    let (fixed_u, fixed_uprime) = if fixed_gamma0.is_zero() {
        (FgModule::zero(n, r), FgModule::zero(n, r))
    } else {
        (sigma.fixed_points_named(SubgroupName::U)?, sigma.fixed_points_named(SubgroupName::Uprime)?)
    };
    let source = fixed_u.direct_sum(&fixed_uprime);
    let id = LambdaMatrix::identity(n, r);
    let amb = id.vstack(&id.scale(n - 1))?;
    let difference = ModuleMap::from_ambient(source, fixed_gamma0.clone(), &amb)?;
    Ok(SsComplex { fixed_u, fixed_uprime, fixed_gamma0, difference })
}

#[derive(Debug, Clone)]
pub struct Sl2Cohomology {
    pub h0: FgModule,
    pub h1: FgModule,
}

impl Sl2Cohomology {
    pub fn to_json(&self) -> Value {
        json!({ "H0": self.h0.iso_class(), "H1": self.h1.iso_class() })
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h1.is_zero()
    }
}

/// H⁰ = ker δ, H¹ = coker δ; higher degrees vanish in the banal case.
pub fn sl2_cohomology(sigma: &FiniteRep) -> Result<Sl2Cohomology> {
    let c = ss_complex(sigma)?;
    Ok(Sl2Cohomology { h0: c.difference.kernel(), h1: c.difference.cokernel() })
}

/// Homology in degrees 0 and −1.
#[derive(Debug, Clone)]
pub struct Sl2Homology {
    pub h0: FgModule,
    pub h_minus1: FgModule,
}

impl Sl2Homology {
    pub fn to_json(&self) -> Value {
        json!({ "H_0": self.h0.iso_class(), "H_-1": self.h_minus1.iso_class() })
    }
}

/// H_i(SL₂, σ) as the Λ-dual of H^i(SL₂, σ^∨). Finite Z/n-modules are
/// isomorphic to their duals, so the cohomology modules are returned.
pub fn sl2_homology(sigma: &FiniteRep) -> Result<Sl2Homology> {
    let coh = sl2_cohomology(&sigma.dual()?)?;
    Ok(Sl2Homology { h0: coh.h0, h_minus1: coh.h1 })
}

#[derive(Debug, Clone)]
pub struct Ps1Report {
    pub p: u64,
    pub n: u64,
    pub sqrt_q: u64,
    pub level: u32,
    pub matrix: LambdaMatrix,
    pub determinant: u64,
    pub cohomology: Sl2Cohomology,
}

impl Ps1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p, "n": self.n, "sqrt_q": self.sqrt_q, "level": self.level,
            "matrix": self.matrix.row_vecs(),
            "determinant": self.determinant,
            "cohomology": self.cohomology.to_json(),
        })
    }
}

/// Ind_B δ_T^{-1/2} is SL₂-acyclic: the difference matrix is invertible.
pub fn ps1_acyclicity_check(p: u64, n: u64, sqrt_q: u64) -> Result<Ps1Report> {
    let ring = make_ring(n, p, Some(sqrt_q))?;
    let level = 2;
    let chi = CharPair::delta_t_pow(&ring, num_rational::Rational64::new(-1, 2))?;
    let sigma = FiniteRep::induced(&ring, chi, level)?;
    let c = ss_complex(&sigma)?;
    let matrix = c.difference_matrix()?;
    let cohomology = Sl2Cohomology { h0: c.difference.kernel(), h1: c.difference.cokernel() };
    let determinant = if matrix.is_square() { matrix.determinant().unwrap_or(0) } else { 0 };
    if !matrix.is_invertible() || !cohomology.is_zero() {
        return Err(Error::AcyclicityFailed(format!("{:?}", matrix.row_vecs())));
    }
    Ok(Ps1Report { p, n, sqrt_q, level, matrix, determinant, cohomology })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_rep_cohomology() {
        let ring = make_ring(5, 2, None).unwrap();
        let c = sl2_cohomology(&FiniteRep::trivial(&ring)).unwrap();
        assert_eq!(c.h0.iso_class(), vec![5]);
        assert!(c.h1.is_zero());
    }

    #[test]
    fn trivial_rep_complex_shape() {
        let ring = make_ring(5, 2, None).unwrap();
        let c = ss_complex(&FiniteRep::trivial(&ring)).unwrap();
        assert_eq!(c.difference_matrix().unwrap().row_vecs(), vec![vec![1], vec![4]]);
    }

    #[test]
    fn ps1_vanishes() {
        let r = ps1_acyclicity_check(3, 11, 5).unwrap();
        assert_eq!(r.matrix.nrows(), 2);
        assert!(r.cohomology.is_zero());
    }
}
