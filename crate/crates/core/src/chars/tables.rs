//! Constant geometric inputs: the compactly supported cohomology of the
//! double cover, and the per-degree Tate exponents of the z₁, z₂ actions.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repspec::RepSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slope {
    Integral,
    Half,
}

impl Slope {
    /// Dimension of the cover, used by Verdier duality.
    pub fn dim(&self) -> i32 {
        match self {
            Self::Integral => 2,
            Self::Half => 1,
        }
    }

    /// Tate exponent of Λ(1) on the z₁ slot.
    pub fn tate_unit(&self) -> i64 {
        match self {
            Self::Integral => 1,
            Self::Half => 2,
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" | "integral" => Ok(Self::Integral),
            "half" => Ok(Self::Half),
            _ => Err(Error::Parse { input: s.into(), reason: "slope must be int or half".into() }),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Integral => "int",
            Self::Half => "half",
        })
    }
}

/// One degree of H_c^• of the double cover, as X ⊗ cInd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputEntry {
    pub degree: i32,
    /// X, as a rep-spec for GL₂ or D^×.
    pub module: RepSpec,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputCohomologyTable {
    pub slope: Slope,
    pub entries: Vec<InputEntry>,
}

impl InputCohomologyTable {
    pub fn for_slope(slope: Slope) -> Self {
        let r = Rational64::from_integer;
        let entries = match slope {
            Slope::Integral => vec![
                InputEntry { degree: 2, module: RepSpec::St, description: "St ⊗ cInd" },
                InputEntry { degree: 3, module: RepSpec::Ind(r(1), r(0)), description: "Ind_B(|·|⊗1) ⊗ cInd" },
                InputEntry { degree: 4, module: RepSpec::AbsDet(r(1)), description: "|det| ⊗ cInd" },
            ],
            Slope::Half => vec![
                InputEntry { degree: 1, module: RepSpec::Nrd(r(0)), description: "Λ ⊗ cInd" },
                InputEntry { degree: 2, module: RepSpec::Nrd(r(1)), description: "|Nrd| ⊗ cInd" },
            ],
        };
        Self { slope, entries }
    }
}

/// Per degree, exponents (a, b) with z₁ acting by χ_det·|·|^a and z₂ by χ_det·|·|^b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateRuleTable {
    pub slope: Slope,
    pub rules: Vec<(i32, Rational64, Rational64)>,
    /// The Tate twist Λ(e) already folded in.
    pub twist: i64,
}

impl TateRuleTable {
    pub fn for_slope(slope: Slope) -> Self {
        let r = Rational64::from_integer;
        let rules = match slope {
            Slope::Integral => vec![(2, r(0), r(0)), (3, r(-1), r(0)), (4, r(-2), r(0))],
            Slope::Half => vec![(1, r(0), r(0)), (2, r(-2), r(0))],
        };
        Self { slope, rules, twist: 0 }
    }

    /// Fold in Λ(e): the z₁ Tate exponent moves by u·e and the determinant
    /// by −u·e/2, so z₁ gains u·e/2 and z₂ loses u·e/2.
    pub fn with_twist(&self, e: i64) -> Self {
        let h = Rational64::new(self.slope.tate_unit() * e, 2);
        Self {
            slope: self.slope,
            rules: self.rules.iter().map(|&(d, a, b)| (d, a + h, b - h)).collect(),
            twist: self.twist + e,
        }
    }

    pub fn exponents(&self, degree: i32) -> Result<(Rational64, Rational64)> {
        self.rules
            .iter()
            .find(|r| r.0 == degree)
            .map(|&(_, a, b)| (a, b))
            .ok_or(Error::DegreeNotInTable(degree))
    }

    /// The determinant exponent carried by the input module in this degree.
    pub fn intrinsic_det(&self, degree: i32) -> Result<Rational64> {
        let base = Self::for_slope(self.slope);
        let (a, _) = base.exponents(degree)?;
        Ok(-a / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_shifts_symmetrically() {
        let t = TateRuleTable::for_slope(Slope::Integral).with_twist(2);
        assert_eq!(t.exponents(4).unwrap(), (Rational64::from_integer(-1), Rational64::from_integer(-1)));
        assert_eq!(t.exponents(5), Err(Error::DegreeNotInTable(5)));
        let h = TateRuleTable::for_slope(Slope::Half);
        assert_eq!(h.intrinsic_det(2).unwrap(), Rational64::from_integer(1));
    }

    #[test]
    fn input_tables() {
        assert_eq!(InputCohomologyTable::for_slope(Slope::Integral).entries.len(), 3);
        assert_eq!(InputCohomologyTable::for_slope(Slope::Half).entries[0].degree, 1);
        assert_eq!("half".parse::<Slope>().unwrap(), Slope::Half);
    }
}
