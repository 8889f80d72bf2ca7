//! Symbolic Jacquet modules of the building blocks, and torus homology.

use num_rational::Rational64;
use serde_json::{json, Value};

use super::unram::{CharPair, TorusChar, UnramChar};
use crate::error::{Error, Result};
use crate::lambda::CoeffRing;
use crate::repspec::RepSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacquetSymbol {
    /// Graded pieces, sub first.
    pub pieces: Vec<TorusChar>,
    pub split: bool,
    /// The intertwining unit when the extension is nonsplit.
    pub unit_witness: Option<u64>,
}

impl JacquetSymbol {
    pub fn single(c: TorusChar) -> Self {
        Self { pieces: vec![c], split: true, unit_witness: None }
    }

    pub fn rank(&self) -> usize {
        self.pieces.len()
    }

    /// Every piece multiplied by c.
    pub fn twist(&self, c: &TorusChar) -> Self {
        Self { pieces: self.pieces.iter().map(|p| p.mul(c)).collect(), ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pieces": self.pieces.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "split": self.split,
            "unit_witness": self.unit_witness,
        })
    }
}

/// χ₁χ₂⁻¹ avoids {1, q, q⁻¹}.
pub fn is_generic(ring: &CoeffRing, chi: &TorusChar) -> bool {
    let r = chi.ratio().value;
    let q = ring.q % ring.n;
    let qi = ring.inv(q).expect("q is a unit");
    r != 1 % ring.n && r != q && r != qi
}

/// 2(1 − q⁻¹).
pub fn intertwining_unit(ring: &CoeffRing) -> u64 {
    let qi = ring.inv(ring.q % ring.n).expect("q is a unit");
    ring.mul(2, ring.sub(1, qi))
}

/// The geometric lemma for non-normalized Ind_B χ: 0 → χ^w·δ_T⁻¹ → (Ind χ)_N → χ → 0.
pub fn jacquet_of_induced(ring: &CoeffRing, chi: &TorusChar) -> JacquetSymbol {
    let sub = chi.weyl().mul(&CharPair::delta_t(ring).inv());
    let split = sub != *chi;
    JacquetSymbol { pieces: vec![sub, *chi], split, unit_witness: (!split).then(|| intertwining_unit(ring)) }
}

pub fn jacquet_symbolic(ring: &CoeffRing, spec: &RepSpec) -> Result<JacquetSymbol> {
    match spec {
        RepSpec::Ind(a, b) => Ok(jacquet_of_induced(ring, &CharPair::abs_pair(ring, *a, *b)?)),
        RepSpec::Ps(..) => jacquet_symbolic(ring, &spec.unnormalized()),
        RepSpec::Char(c1, c2) => {
            let z1 = UnramChar::from_value(ring, ring.mul(*c1 % ring.n, ring.q_half_pow(-1)?))?;
            let z2 = UnramChar::from_value(ring, ring.mul(*c2 % ring.n, ring.q_half_pow(1)?))?;
            Ok(jacquet_of_induced(ring, &CharPair::new(z1, z2)))
        }
        RepSpec::St => Ok(JacquetSymbol::single(CharPair::delta_t(ring).inv())),
        RepSpec::Triv => Ok(JacquetSymbol::single(CharPair::trivial(ring))),
        RepSpec::AbsDet(k) => Ok(JacquetSymbol::single(CharPair::diagonal(UnramChar::abs_pow(ring, *k)?))),
        _ => Err(Error::UnsupportedSpec(format!("no Jacquet symbol for {spec}"))),
    }
}

/// Ranks in degrees (0, −1) of π^Z-homology of one character restricted to T_s.
pub fn ts_char_homology(piece: &TorusChar, twist: &UnramChar) -> (usize, usize) {
    if piece.ratio().mul(twist).is_trivial() {
        (1, 1)
    } else {
        (0, 0)
    }
}

/// Ranks in degrees (0, −1) of T_s-homology of the symbol, each piece's
/// T_s-character multiplied by `twist`.
pub fn ts_homology(sym: &JacquetSymbol, twist: &UnramChar, n: u64) -> Result<(usize, usize)> {
    let per: Vec<(usize, usize)> = sym.pieces.iter().map(|p| ts_char_homology(p, twist)).collect();
    if sym.split || sym.pieces.len() < 2 {
        return Ok(per.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)));
    }
    if per.iter().all(|&r| r == (1, 1)) {
        let u = sym.unit_witness.ok_or_else(|| Error::Invalid("nonsplit symbol without a witness".into()))?;
        if num_integer::Integer::gcd(&u, &n) != 1 {
            return Err(Error::NonUnitWitness(u));
        }
        return Ok((1, 1));
    }
    Ok(per.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)))
}

/// The characters surviving T_s-homology, each with its ranks in degrees (0, −1).
pub fn ts_survivors(sym: &JacquetSymbol, twist: &TorusChar, n: u64) -> Result<Vec<(TorusChar, usize, usize)>> {
    let t = sym.twist(twist);
    let one = UnramChar { n, value: 1 % n, exp: Some(Rational64::from_integer(0)) };
    let total = ts_homology(&t, &one, n)?;
    if total == (0, 0) {
        return Ok(vec![]);
    }
    if !t.split && t.pieces.len() == 2 {
        return Ok(vec![(t.pieces[1], total.0, total.1)]);
    }
    Ok(t
        .pieces
        .iter()
        .filter(|p| p.ratio().is_trivial())
        .map(|p| (*p, 1, 1))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::make_ring;

    fn ring() -> CoeffRing {
        make_ring(11, 3, Some(5)).unwrap()
    }

    #[test]
    fn steinberg_symbol() {
        let r = ring();
        let s = jacquet_symbolic(&r, &RepSpec::St).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.pieces[0].at_t(), 4);
    }

    #[test]
    fn split_for_trivial_character() {
        let r = ring();
        let s = jacquet_symbolic(&r, &RepSpec::parse("ind(0,0)").unwrap()).unwrap();
        assert!(s.split);
        assert_eq!(s.pieces[0], CharPair::delta_t(&r).inv());
        assert!(s.pieces[1].z1.is_trivial() && s.pieces[1].z2.is_trivial());
    }

    #[test]
    fn nonsplit_for_weyl_fixed() {
        let r = ring();
        let s = jacquet_symbolic(&r, &RepSpec::parse("ps(1/2,1/2)").unwrap()).unwrap();
        assert!(!s.split);
        assert_eq!(s.pieces[0], s.pieces[1]);
        assert_eq!(s.unit_witness, Some(intertwining_unit(&r)));
    }

    #[test]
    fn torus_homology_cases() {
        let r = ring();
        let one = UnramChar::trivial(&r);
        assert_eq!(ts_homology(&JacquetSymbol::single(CharPair::trivial(&r)), &one, 11).unwrap(), (1, 1));
        assert_eq!(ts_homology(&JacquetSymbol::single(CharPair::delta_t(&r)), &one, 11).unwrap(), (0, 0));
        let ps1 = jacquet_symbolic(&r, &RepSpec::parse("ind(1,0)").unwrap()).unwrap();
        assert_eq!(ts_homology(&ps1, &one, 11).unwrap(), (0, 0));
        let back = ps1.pieces[1].ratio().inv();
        assert_eq!(ts_homology(&ps1, &back, 11).unwrap(), (1, 1));
    }

    #[test]
    fn genericity() {
        let r = ring();
        assert!(!is_generic(&r, &CharPair::trivial(&r)));
        let a = CharPair::abs_pair(&r, Rational64::from_integer(2), Rational64::from_integer(3)).unwrap();
        assert!(!is_generic(&r, &a));
        let c = CharPair::new(UnramChar::from_value(&r, 2).unwrap(), UnramChar::trivial(&r));
        assert!(is_generic(&r, &c));
    }
}
