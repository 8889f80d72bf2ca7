use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient ring Λ = Z/n together with the residue characteristic p of E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffRing {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub sqrt_q: Option<u64>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validate (n, p, sqrt_q) and build the ring.
pub fn make_ring(n: u64, p: u64, sqrt_q: Option<u64>) -> Result<CoeffRing> {
    if n < 2 {
        return Err(Error::BadModulus(n));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let g = n.gcd(&p);
    if g != 1 {
        return Err(Error::BanalityViolation { n, what: format!("p = {p}"), gcd: g });
    }
    let bad = (p - 1) * (p - 1) * (p + 1);
    let g = n.gcd(&bad);
    if g != 1 {
        return Err(Error::BanalityViolation {
            n,
            what: format!("(q-1)^2(q+1) = {bad}"),
            gcd: g,
        });
    }
    let ring = CoeffRing { n, p, q: p, sqrt_q: None };
    if let Some(r) = sqrt_q {
        let r = r % n;
        if ring.mul(r, r) != ring.reduce(p as i64) || !ring.is_unit(r) {
            return Err(Error::BadSqrt { root: r, q: p, n });
        }
        return Ok(CoeffRing { sqrt_q: Some(r), ..ring });
    }
    Ok(ring)
}

/// Like [`make_ring`], but picks the smallest square root of q when none is given.
pub fn make_ring_auto(n: u64, p: u64, sqrt_q: Option<u64>) -> Result<CoeffRing> {
    let ring = make_ring(n, p, sqrt_q)?;
    if ring.sqrt_q.is_some() {
        return Ok(ring);
    }
    Ok(CoeffRing { sqrt_q: ring.find_sqrt_q(), ..ring })
}

impl CoeffRing {
    pub fn find_sqrt_q(&self) -> Option<u64> {
        (1..self.n).find(|&r| self.is_unit(r) && self.mul(r, r) == self.q % self.n)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.n as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.n as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u64) -> u64 {
        let a = a % self.n;
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }

    pub fn is_unit(&self, a: u64) -> bool {
        (a % self.n).gcd(&self.n) == 1
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.n)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.n)
    }

    /// a^e for signed e; None if e < 0 and a is not a unit.
    pub fn pow_signed(&self, a: u64, e: i64) -> Option<u64> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|b| self.pow(b, e.unsigned_abs()))
        }
    }

    /// q^(k/2).
    pub fn q_half_pow(&self, k: i64) -> Result<u64> {
        if k % 2 == 0 {
            Ok(self.pow_signed(self.q % self.n, k / 2).expect("q is a unit"))
        } else {
            let r = self.sqrt_q.ok_or(Error::MissingSqrtQ)?;
            Ok(self.pow_signed(r, k).expect("sqrt q is a unit"))
        }
    }

    /// The ideal generator gcd(a, n), with 0 mapped to n.
    pub fn ideal(&self, a: u64) -> u64 {
        (a % self.n).gcd(&self.n)
    }
}

pub fn pow_mod(a: u64, mut e: u64, n: u64) -> u64 {
    let n128 = n as u128;
    let mut base = a as u128 % n128;
    let mut acc = 1u128 % n128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % n128;
        }
        base = base * base % n128;
        e >>= 1;
    }
    acc as u64
}

pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i128 % n as i128).extended_gcd(&(n as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i128) as u64)
}

/// Extended gcd on nonnegative representatives: (g, s, t) with s·a + t·b = g.
pub fn xgcd(a: u64, b: u64) -> (u64, i128, i128) {
    let e = (a as i128).extended_gcd(&(b as i128));
    (e.gcd as u64, e.x, e.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banality_examples() {
        assert!(make_ring(5, 2, None).is_ok());
        assert_eq!(make_ring(11, 3, Some(5)).unwrap().sqrt_q, Some(5));
        assert!(matches!(make_ring(3, 2, None), Err(Error::BanalityViolation { .. })));
        assert!(matches!(make_ring(9, 3, None), Err(Error::BanalityViolation { .. })));
        assert!(matches!(make_ring(11, 3, Some(4)), Err(Error::BadSqrt { .. })));
        assert!(matches!(make_ring(11, 4, None), Err(Error::NotPrime(4))));
        assert!(matches!(make_ring(1, 3, None), Err(Error::BadModulus(1))));
    }

    #[test]
    fn auto_sqrt() {
        assert_eq!(make_ring_auto(11, 3, None).unwrap().sqrt_q, Some(5));
        assert_eq!(make_ring_auto(7, 2, None).unwrap().sqrt_q, Some(3));
        assert_eq!(make_ring_auto(5, 3, None).unwrap().sqrt_q, None);
    }

    #[test]
    fn half_powers() {
        let r = make_ring(11, 3, Some(5)).unwrap();
        assert_eq!(r.q_half_pow(2).unwrap(), 3);
        assert_eq!(r.q_half_pow(1).unwrap(), 5);
        assert_eq!(r.mul(r.q_half_pow(-1).unwrap(), 5), 1);
        let r = make_ring(5, 3, None).unwrap();
        assert_eq!(r.q_half_pow(1), Err(Error::MissingSqrtQ));
    }
}
