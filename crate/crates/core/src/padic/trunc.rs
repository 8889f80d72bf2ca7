use std::fmt;

use crate::error::{Error, Result};
use crate::lambda::{inv_mod, is_prime};

/// p^k as u128.
pub fn ppow(p: u64, k: u32) -> u128 {
    (p as u128).pow(k)
}

/// v_p(x) for x > 0.
fn vp(p: u64, mut x: u128) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p as u128) {
        x /= p as u128;
        v += 1;
    }
    v
}

/// O_E/π^prec for E/Q_p unramified of degree one, so π = p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncRing {
    pub p: u64,
    pub prec: u32,
}

impl TruncRing {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 || ppow(p, 2 * prec) >= 1u128 << 126 || ppow(p, prec) >= 1u128 << 62 {
            return Err(Error::Invalid(format!("precision {prec} unsupported for p = {p}")));
        }
        Ok(Self { p, prec })
    }

    pub fn modulus(&self) -> u64 {
        ppow(self.p, self.prec) as u64
    }

    /// Valuation of a residue, with 0 reporting prec.
    pub fn valuation(&self, x: u64) -> u32 {
        let x = x % self.modulus();
        if x == 0 {
            self.prec
        } else {
            vp(self.p, x as u128)
        }
    }

    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    /// An integer, known modulo π^prec.
    pub fn elem(&self, x: i64) -> PAdic {
        PAdic::from_int(self.p, x as i128, 0, self.prec)
    }

    /// π^shift · x, known to absolute precision prec + shift.
    pub fn scaled(&self, x: i64, shift: i32) -> PAdic {
        PAdic::from_int(self.p, x as i128, shift, self.prec)
    }

    pub fn pi(&self) -> PAdic {
        self.scaled(1, 1)
    }
}

/// An element π^val · unit of E known modulo π^(val + rel). When rel = 0 the
/// element is only known to lie in π^val·O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
    val: i32,
    unit: u64,
    rel: u32,
}

impl PAdic {
    /// π^shift · x where x is known modulo π^prec.
    pub fn from_int(p: u64, x: i128, shift: i32, prec: u32) -> Self {
        let m = ppow(p, prec) as i128;
        let r = x.rem_euclid(m) as u128;
        if r == 0 {
            return Self::zero(p, shift + prec as i32);
        }
        let w = vp(p, r);
        let unit = (r / ppow(p, w)) as u64;
        Self { p, val: shift + w as i32, unit, rel: prec - w }
    }

    /// Known only to be divisible by π^abs.
    pub fn zero(p: u64, abs: i32) -> Self {
        Self { p, val: abs, unit: 0, rel: 0 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn abs_prec(&self) -> i32 {
        self.val + self.rel as i32
    }

    pub fn is_indeterminate_zero(&self) -> bool {
        self.rel == 0
    }

    /// Exact valuation, or None for an element indistinguishable from 0.
    pub fn valuation(&self) -> Option<i32> {
        (self.rel > 0).then_some(self.val)
    }

    /// Lower bound on the valuation.
    pub fn val_floor(&self) -> i32 {
        self.val
    }

    pub fn unit_part(&self) -> Option<(u64, u32)> {
        (self.rel > 0).then_some((self.unit, self.rel))
    }

    fn scaled_residue(&self, v: i32, width: u32) -> u128 {
        if self.rel == 0 || width == 0 {
            return 0;
        }
        let shift = (self.val - v) as u32;
        if shift >= width {
            return 0;
        }
        let m = ppow(self.p, width);
        (self.unit as u128 % m) * ppow(self.p, shift) % m
    }

    fn normalize(p: u64, v: i32, x: u128, width: u32) -> Self {
        let abs = v + width as i32;
        let x = x % ppow(p, width);
        if x == 0 {
            return Self::zero(p, abs);
        }
        let w = vp(p, x);
        Self { p, val: v + w as i32, unit: (x / ppow(p, w)) as u64, rel: width - w }
    }

    pub fn add(&self, other: &Self) -> Self {
        let a = self.abs_prec().min(other.abs_prec());
        let v = self.val.min(other.val);
        if v >= a {
            return Self::zero(self.p, a);
        }
        let width = (a - v) as u32;
        let m = ppow(self.p, width);
        let x = (self.scaled_residue(v, width) + other.scaled_residue(v, width)) % m;
        Self::normalize(self.p, v, x, width)
    }

    pub fn neg(&self) -> Self {
        if self.rel == 0 {
            return *self;
        }
        let m = ppow(self.p, self.rel);
        Self { unit: ((m - self.unit as u128 % m) % m) as u64, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.rel == 0 || other.rel == 0 {
            let abs = (self.abs_prec() + other.val).min(other.abs_prec() + self.val);
            return Self::zero(self.p, abs);
        }
        let rel = self.rel.min(other.rel);
        let m = ppow(self.p, rel);
        let u = (self.unit as u128 % m) * (other.unit as u128 % m) % m;
        Self { p: self.p, val: self.val + other.val, unit: u as u64, rel }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::PrecisionExhausted(format!("cannot invert an element known only mod π^{}", self.val)));
        }
        let m = ppow(self.p, self.rel) as u64;
        let u = inv_mod(self.unit % m, m).expect("unit part is a unit");
        Ok(Self { p: self.p, val: -self.val, unit: u, rel: self.rel })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// The residue modulo π^m of an integral element.
    pub fn residue(&self, m: u32) -> Result<u64> {
        if self.abs_prec() < m as i32 {
            return Err(Error::PrecisionExhausted(format!(
                "residue mod π^{m} requested of an element known mod π^{}",
                self.abs_prec()
            )));
        }
        if self.rel > 0 && self.val < 0 {
            return Err(Error::PrecisionExhausted(format!("element of valuation {} is not integral", self.val)));
        }
        let mm = ppow(self.p, m);
        if self.rel == 0 || self.val >= m as i32 {
            return Ok(0);
        }
        Ok(((self.unit as u128 % mm) * ppow(self.p, self.val as u32) % mm) as u64)
    }

    /// Forget precision beyond π^abs.
    pub fn truncate(&self, abs: i32) -> Self {
        if abs >= self.abs_prec() {
            return *self;
        }
        if self.rel == 0 || abs <= self.val {
            return Self::zero(self.p, abs.min(self.abs_prec()));
        }
        let rel = (abs - self.val) as u32;
        Self { unit: (self.unit as u128 % ppow(self.p, rel)) as u64, rel, ..*self }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O(π^{})", self.val)
        } else {
            write!(f, "π^{}·{} + O(π^{})", self.val, self.unit, self.abs_prec())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations_of_residues() {
        let r = TruncRing::new(3, 4).unwrap();
        assert_eq!(r.valuation(0), 4);
        assert_eq!(r.valuation(9), 2);
        assert_eq!(r.valuation(10), 0);
        assert!(r.is_unit(10) && !r.is_unit(9));
    }

    #[test]
    fn arithmetic_matches_integers() {
        let r = TruncRing::new(2, 8).unwrap();
        let a = r.elem(12);
        let b = r.elem(-20);
        assert_eq!(a.add(&b).residue(8).unwrap(), 248);
        assert_eq!(a.mul(&b).residue(8).unwrap(), (12 * -20i64).rem_euclid(256) as u64);
        assert_eq!(a.valuation(), Some(2));
    }

    #[test]
    fn cancellation_loses_precision() {
        let r = TruncRing::new(3, 3).unwrap();
        let a = r.elem(5);
        let z = a.sub(&a);
        assert!(z.is_indeterminate_zero());
        assert_eq!(z.abs_prec(), 3);
        assert!(z.inv().is_err());
    }

    #[test]
    fn division_by_pi_shifts_precision() {
        let r = TruncRing::new(3, 3).unwrap();
        let s = r.elem(6);
        let q = s.div(&r.pi()).unwrap();
        assert_eq!(q.valuation(), Some(0));
        assert_eq!(q.abs_prec(), 2);
        assert_eq!(q.residue(2).unwrap(), 2);
        assert!(q.residue(3).is_err());
    }

    #[test]
    fn inverse_of_unit() {
        let r = TruncRing::new(5, 3).unwrap();
        let a = r.elem(7);
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b).residue(3).unwrap(), 1);
    }
}
