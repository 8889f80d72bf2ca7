use std::fmt;

use super::trunc::{ppow, PAdic, TruncRing};
use crate::error::{Error, Result};

/// A 2×2 matrix over E with precision-tracked entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    pub e: [[PAdic; 2]; 2],
}

impl LaurentMatrix {
    pub fn new(e: [[PAdic; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn from_ints(r: &TruncRing, m: [[i64; 2]; 2]) -> Self {
        Self::from_scaled(r, m, [[0; 2]; 2])
    }

    /// Entry (i,j) is π^shift[i][j] · m[i][j].
    pub fn from_scaled(r: &TruncRing, m: [[i64; 2]; 2], shift: [[i32; 2]; 2]) -> Self {
        let f = |i: usize, j: usize| r.scaled(m[i][j], shift[i][j]);
        Self { e: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]] }
    }

    pub fn identity(r: &TruncRing) -> Self {
        Self::from_ints(r, [[1, 0], [0, 1]])
    }

    /// diag(π^a, π^b).
    pub fn diag_pi(r: &TruncRing, a: i32, b: i32) -> Self {
        Self::from_scaled(r, [[1, 0], [0, 1]], [[a, 0], [0, b]])
    }

    /// diag(1, π).
    pub fn eta(r: &TruncRing) -> Self {
        Self::diag_pi(r, 0, 1)
    }

    /// [[1, π^shift·x], [0, 1]].
    pub fn upper(r: &TruncRing, x: i64, shift: i32) -> Self {
        Self::from_scaled(r, [[1, x], [0, 1]], [[0, shift], [0, 0]])
    }

    /// [[1, 0], [π^shift·x, 1]].
    pub fn lower(r: &TruncRing, x: i64, shift: i32) -> Self {
        Self::from_scaled(r, [[1, 0], [x, 1]], [[0, 0], [shift, 0]])
    }

    pub fn p(&self) -> u64 {
        self.e[0][0].p()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Self { e: [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]] }
    }

    pub fn det(&self) -> PAdic {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det().inv()?;
        let [[a, b], [c, dd]] = self.e;
        Ok(Self { e: [[dd.mul(&d), b.neg().mul(&d)], [c.neg().mul(&d), a.mul(&d)]] })
    }

    /// Largest negative entry valuation, as a non-negative number.
    pub fn max_neg_val(&self) -> u32 {
        self.e.iter().flatten().map(|x| (-x.val_floor()).max(0) as u32).max().unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.max_neg_val() == 0
    }

    /// Exact valuation of the determinant.
    pub fn det_val(&self) -> Result<i32> {
        self.det()
            .valuation()
            .ok_or_else(|| Error::PrecisionExhausted("determinant indistinguishable from zero".into()))
    }

    /// Reduction of an integral matrix modulo π^m.
    pub fn reduce(&self, m: u32) -> Result<IntMat> {
        let p = self.p();
        let r = |i: usize, j: usize| self.e[i][j].residue(m);
        Ok(IntMat { p, m, a: [[r(0, 0)?, r(0, 1)?], [r(1, 0)?, r(1, 1)?]] })
    }

    /// Entrywise congruence to the identity modulo π^k, at available precision.
    pub fn is_congruent_identity(&self, k: u32) -> bool {
        match self.reduce(k) {
            Ok(m) => m.a == [[1 % m.modulus(), 0], [0, 1 % m.modulus()]],
            Err(_) => false,
        }
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

/// An element of M₂(Z/p^m), used for closure computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    pub p: u64,
    pub m: u32,
    pub a: [[u64; 2]; 2],
}

impl IntMat {
    pub fn new(p: u64, m: u32, a: [[i64; 2]; 2]) -> Self {
        let md = ppow(p, m) as i64;
        let r = |x: i64| x.rem_euclid(md) as u64;
        Self { p, m, a: [[r(a[0][0]), r(a[0][1])], [r(a[1][0]), r(a[1][1])]] }
    }

    pub fn identity(p: u64, m: u32) -> Self {
        Self::new(p, m, [[1, 0], [0, 1]])
    }

    pub fn modulus(&self) -> u64 {
        ppow(self.p, self.m) as u64
    }

    pub fn mul(&self, o: &Self) -> Self {
        let md = self.modulus() as u128;
        let c = |i: usize, j: usize| {
            ((self.a[i][0] as u128 * o.a[0][j] as u128 + self.a[i][1] as u128 * o.a[1][j] as u128) % md) as u64
        };
        Self { a: [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]], ..*self }
    }

    pub fn det(&self) -> u64 {
        let md = self.modulus() as u128;
        let ad = self.a[0][0] as u128 * self.a[1][1] as u128 % md;
        let bc = self.a[0][1] as u128 * self.a[1][0] as u128 % md;
        ((ad + md - bc) % md) as u64
    }

    pub fn to_laurent(&self, r: &TruncRing) -> LaurentMatrix {
        let e = |i: usize, j: usize| r.elem(self.a[i][j] as i64);
        LaurentMatrix::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_conjugates_upper_unipotent() {
        let r = TruncRing::new(3, 6).unwrap();
        let eta = LaurentMatrix::eta(&r);
        let n = LaurentMatrix::upper(&r, 1, 0);
        let c = eta.mul(&n).mul(&eta.inverse().unwrap());
        assert_eq!(c.e[0][1].valuation(), Some(-1));
        assert_eq!(c.e[0][1].unit_part().unwrap().0 % 3, 1);
        assert!(c.e[1][0].is_indeterminate_zero());
        assert_eq!(c.e[0][0].residue(4).unwrap(), 1);
        assert_eq!(eta.det_val().unwrap(), 1);
        assert_eq!(eta.inverse().unwrap().max_neg_val(), 1);
    }

    #[test]
    fn int_mat_det() {
        let g = IntMat::new(3, 2, [[1, 3], [-3, -8]]);
        assert_eq!(g.det(), 1);
        assert_eq!(g.mul(&IntMat::identity(3, 2)), g);
    }

    #[test]
    fn congruence_level() {
        let r = TruncRing::new(2, 6).unwrap();
        let g = LaurentMatrix::lower(&r, 1, 2);
        assert!(g.is_congruent_identity(2));
        assert!(!g.is_congruent_identity(3));
    }
}
