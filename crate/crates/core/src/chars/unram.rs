use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lambda::CoeffRing;

/// Formal exponents live in ½Z.
pub fn check_half_integer(s: Rational64) -> Result<()> {
    if *s.denom() == 1 || *s.denom() == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedSpec(format!("exponent {s} is not a half-integer")))
    }
}

pub fn format_exp(s: Rational64) -> String {
    if *s.denom() == 1 {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// An unramified character of E^×, determined by its value at π. When the
/// character is |·|^s the formal exponent s is kept as a label.
#[derive(Debug, Clone, Copy, Eq)]
pub struct UnramChar {
    pub n: u64,
    pub value: u64,
    pub exp: Option<Rational64>,
}

impl PartialEq for UnramChar {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.value == other.value
    }
}

impl Hash for UnramChar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.value.hash(state);
    }
}

impl UnramChar {
    pub fn trivial(ring: &CoeffRing) -> Self {
        Self { n: ring.n, value: 1 % ring.n, exp: Some(Rational64::from_integer(0)) }
    }

    /// |·|^s, with |π| = q^{-1}.
    pub fn abs_pow(ring: &CoeffRing, s: Rational64) -> Result<Self> {
        check_half_integer(s)?;
        let twice = (s * 2).to_integer();
        Ok(Self { n: ring.n, value: ring.q_half_pow(-twice)?, exp: Some(s) })
    }

    pub fn abs_int(ring: &CoeffRing, s: i64) -> Self {
        Self::abs_pow(ring, Rational64::from_integer(s)).expect("integer exponents need no square root")
    }

    /// A character given only by its value at π.
    pub fn from_value(ring: &CoeffRing, v: u64) -> Result<Self> {
        let v = v % ring.n;
        if !ring.is_unit(v) {
            return Err(Error::Invalid(format!("{v} is not a unit modulo {}", ring.n)));
        }
        Ok(Self { n: ring.n, value: v, exp: None })
    }

    fn ring(&self) -> CoeffRing {
        CoeffRing { n: self.n, p: 0, q: 0, sqrt_q: None }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let exp = match (self.exp, o.exp) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Self { n: self.n, value: self.ring().mul(self.value, o.value), exp }
    }

    pub fn inv(&self) -> Self {
        Self { n: self.n, value: self.ring().inv(self.value).expect("character values are units"), exp: self.exp.map(|e| -e) }
    }

    pub fn pow(&self, k: i64) -> Self {
        Self {
            n: self.n,
            value: self.ring().pow_signed(self.value, k).expect("character values are units"),
            exp: self.exp.map(|e| e * k),
        }
    }

    /// χ(π^k).
    pub fn eval_pi_pow(&self, k: i64) -> u64 {
        self.pow(k).value
    }

    pub fn is_trivial(&self) -> bool {
        self.value == 1 % self.n
    }

    pub fn to_json(&self) -> Value {
        json!({ "exp": self.exp.map(format_exp), "val": self.value })
    }
}

impl fmt::Display for UnramChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            Some(e) if *e.numer() == 0 => write!(f, "1"),
            Some(e) if e == Rational64::from_integer(1) => write!(f, "|·|"),
            Some(e) => write!(f, "|·|^{}", format_exp(e)),
            None => write!(f, "χ[{}]", self.value),
        }
    }
}

/// A pair of unramified characters, used both for the torus T = E^× × E^× and
/// for G_{b₂}(E) = E₁^× × E₂^×.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharPair {
    pub z1: UnramChar,
    pub z2: UnramChar,
}

pub type TorusChar = CharPair;
pub type Gb2Character = CharPair;

impl CharPair {
    pub fn new(z1: UnramChar, z2: UnramChar) -> Self {
        Self { z1, z2 }
    }

    pub fn trivial(ring: &CoeffRing) -> Self {
        Self::new(UnramChar::trivial(ring), UnramChar::trivial(ring))
    }

    /// (|·|^a, |·|^b).
    pub fn abs_pair(ring: &CoeffRing, a: Rational64, b: Rational64) -> Result<Self> {
        Ok(Self::new(UnramChar::abs_pow(ring, a)?, UnramChar::abs_pow(ring, b)?))
    }

    /// δ_T(e₁, e₂) = |e₂/e₁|.
    pub fn delta_t(ring: &CoeffRing) -> Self {
        Self::new(UnramChar::abs_int(ring, -1), UnramChar::abs_int(ring, 1))
    }

    /// δ_T^{s}.
    pub fn delta_t_pow(ring: &CoeffRing, s: Rational64) -> Result<Self> {
        Self::abs_pair(ring, -s, s)
    }

    /// χ∘det restricted to the torus, i.e. (χ, χ).
    pub fn diagonal(c: UnramChar) -> Self {
        Self::new(c, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.z1.mul(&o.z1), self.z2.mul(&o.z2))
    }

    pub fn inv(&self) -> Self {
        Self::new(self.z1.inv(), self.z2.inv())
    }

    pub fn weyl(&self) -> Self {
        Self::new(self.z2, self.z1)
    }

    /// Value at diag(π, 1).
    pub fn at_t(&self) -> u64 {
        self.z1.value
    }

    /// χ₁·χ₂^{-1}, the restriction to the SL₂ torus.
    pub fn ratio(&self) -> UnramChar {
        self.z1.mul(&self.z2.inv())
    }

    pub fn exps(&self) -> Option<(Rational64, Rational64)> {
        Some((self.z1.exp?, self.z2.exp?))
    }

    pub fn to_json(&self) -> Value {
        json!({ "z1": self.z1.to_json(), "z2": self.z2.to_json() })
    }
}

impl fmt::Display for CharPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((e1, e2)) = self.exps() else {
            return write!(f, "{}⊗{}", self.z1, self.z2);
        };
        let m = (e1 + e2) / 2;
        let t = (e2 - e1) / 2;
        let mut parts = Vec::new();
        if *m.numer() != 0 {
            parts.push(if m == Rational64::from_integer(1) { "|·|".to_string() } else { format!("|·|^{}", format_exp(m)) });
        }
        if *t.numer() != 0 {
            parts.push(if t == Rational64::from_integer(1) { "δ_T".to_string() } else { format!("δ_T^{}", format_exp(t)) });
        }
        if parts.is_empty() {
            write!(f, "1⊗1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::make_ring;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn abs_values() {
        let ring = make_ring(11, 3, Some(5)).unwrap();
        assert_eq!(UnramChar::abs_int(&ring, 1).value, 4);
        assert_eq!(UnramChar::abs_pow(&ring, r(-1, 2)).unwrap().value, 5);
        assert_eq!(UnramChar::abs_pow(&ring, r(1, 2)).unwrap().value, 9);
        assert!(UnramChar::abs_pow(&ring, r(1, 3)).is_err());
        let no_root = make_ring(11, 3, None).unwrap();
        assert_eq!(UnramChar::abs_pow(&no_root, r(1, 2)), Err(Error::MissingSqrtQ));
    }

    #[test]
    fn delta_t_convention() {
        let ring = make_ring(11, 3, Some(5)).unwrap();
        let d = CharPair::delta_t(&ring);
        assert_eq!(d.z1.value, 3);
        assert_eq!(d.z2.value, 4);
        assert_eq!(d.to_string(), "δ_T");
        let half = CharPair::delta_t_pow(&ring, r(1, 2)).unwrap();
        assert_eq!(half.mul(&half), d);
    }

    #[test]
    fn pretty_print() {
        let ring = make_ring(11, 3, Some(5)).unwrap();
        let c = CharPair::abs_pair(&ring, r(3, 2), r(5, 2)).unwrap();
        assert_eq!(c.to_string(), "|·|^2·δ_T^1/2");
        assert_eq!(CharPair::trivial(&ring).to_string(), "1⊗1");
        let v = UnramChar::from_value(&ring, 7).unwrap();
        assert_eq!(CharPair::diagonal(v).to_string(), "χ[7]⊗χ[7]");
    }

    #[test]
    fn equality_is_value_based() {
        let ring = make_ring(5, 2, None).unwrap();
        let a = UnramChar::abs_int(&ring, 4);
        assert_eq!(a, UnramChar::trivial(&ring));
    }
}
