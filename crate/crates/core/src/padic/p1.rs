use std::fmt;

use serde::{Deserialize, Serialize};

use super::mat::LaurentMatrix;
use super::trunc::{ppow, PAdic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    /// [1 : t], t mod p^level.
    Affine(u64),
    /// [s : 1], s ∈ pO mod p^level.
    AtInf(u64),
}

/// A point of P¹(O/p^level) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    pub p: u64,
    pub level: u32,
    pub kind: PointKind,
}

/// Valuation data of the Borel factor b in k_x·g = b·k_{x·g}: b₂₂ = λ is the
/// renormalizing scalar and v(b₁₁) = v(det g) − v(λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Cocycle {
    pub scalar_val: i32,
    pub det_val: i32,
}

impl Cocycle {
    pub fn v11(&self) -> i32 {
        self.det_val - self.scalar_val
    }

    pub fn v22(&self) -> i32 {
        self.scalar_val
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self { scalar_val: self.scalar_val + o.scalar_val, det_val: self.det_val + o.det_val }
    }

    pub fn is_trivial(&self) -> bool {
        self.scalar_val == 0 && self.det_val == 0
    }
}

pub fn p1_size(p: u64, m: u32) -> usize {
    (ppow(p, m) + ppow(p, m - 1)) as usize
}

/// All points of P¹(O/p^m), affine points first.
pub fn enumerate_p1(p: u64, m: u32) -> Vec<ProjPoint> {
    (0..p1_size(p, m)).map(|i| ProjPoint::from_index(p, m, i)).collect()
}

impl ProjPoint {
    pub fn affine(p: u64, level: u32, t: u64) -> Self {
        Self { p, level, kind: PointKind::Affine(t % ppow(p, level) as u64) }
    }

    pub fn at_inf(p: u64, level: u32, s: u64) -> Self {
        debug_assert!(s.is_multiple_of(p));
        Self { p, level, kind: PointKind::AtInf(s % ppow(p, level) as u64) }
    }

    /// The point [0 : 1].
    pub fn infinity(p: u64, level: u32) -> Self {
        Self::at_inf(p, level, 0)
    }

    pub fn zero(p: u64, level: u32) -> Self {
        Self::affine(p, level, 0)
    }

    pub fn index(&self) -> usize {
        match self.kind {
            PointKind::Affine(t) => t as usize,
            PointKind::AtInf(s) => (ppow(self.p, self.level) as u64 + s / self.p) as usize,
        }
    }

    pub fn from_index(p: u64, level: u32, i: usize) -> Self {
        let q = ppow(p, level) as usize;
        if i < q {
            Self::affine(p, level, i as u64)
        } else {
            Self::at_inf(p, level, (i - q) as u64 * p)
        }
    }

    pub fn reduce(&self, level: u32) -> Self {
        assert!(level <= self.level && level >= 1);
        match self.kind {
            PointKind::Affine(t) => Self::affine(self.p, level, t),
            PointKind::AtInf(s) => Self::at_inf(self.p, level, s),
        }
    }

    /// Canonical coordinates known modulo p^level.
    pub fn coords(&self) -> (PAdic, PAdic) {
        self.coords_at(self.level)
    }

    /// Coordinates of the canonical integer lift, declared known modulo p^prec.
    pub fn coords_at(&self, prec: u32) -> (PAdic, PAdic) {
        let one = PAdic::from_int(self.p, 1, 0, prec);
        match self.kind {
            PointKind::Affine(t) => (one, PAdic::from_int(self.p, t as i128, 0, prec)),
            PointKind::AtInf(s) => (PAdic::from_int(self.p, s as i128, 0, prec), one),
        }
    }

    /// Every lift to level + extra.
    pub fn lifts(&self, extra: u32) -> Vec<ProjPoint> {
        let step = ppow(self.p, self.level) as u64;
        let lvl = self.level + extra;
        (0..ppow(self.p, extra) as u64)
            .map(|k| match self.kind {
                PointKind::Affine(t) => Self::affine(self.p, lvl, t + k * step),
                PointKind::AtInf(s) => Self::at_inf(self.p, lvl, s + k * step),
            })
            .collect()
    }

    /// x·g reduced to `target`, with the cocycle.
    pub fn act(&self, g: &LaurentMatrix, target: u32) -> Result<(ProjPoint, Cocycle)> {
        let (x1, x2) = self.coords();
        act_coords(x1, x2, g, target)
    }

    /// The finest level to which x·g is determined, capped at `cap`.
    pub fn act_best(&self, g: &LaurentMatrix, cap: u32) -> Result<(ProjPoint, Cocycle)> {
        let mut err = None;
        for lvl in (1..=cap).rev() {
            match self.act(g, lvl) {
                Ok(r) => return Ok(r),
                Err(e) => err = Some(e),
            }
        }
        Err(err.unwrap_or_else(|| Error::PrecisionExhausted("empty level range".into())))
    }
}

/// Right action on a row vector (x1, x2), renormalized to a canonical point at `target`.
pub fn act_coords(x1: PAdic, x2: PAdic, g: &LaurentMatrix, target: u32) -> Result<(ProjPoint, Cocycle)> {
    let p = x1.p();
    let y1 = x1.mul(&g.e[0][0]).add(&x2.mul(&g.e[1][0]));
    let y2 = x1.mul(&g.e[0][1]).add(&x2.mul(&g.e[1][1]));
    let affine = match (y1.valuation(), y2.valuation()) {
        (Some(v1), Some(v2)) => v1 <= v2,
        (Some(v1), None) if v1 <= y2.abs_prec() => true,
        (None, Some(v2)) if v2 < y1.abs_prec() => false,
        _ => {
            return Err(Error::PrecisionExhausted(format!("cannot decide the chart of ({y1}, {y2})")));
        }
    };
    let det_val = g.det_val()?;
    let (pt, lam) = if affine {
        let t = y2.div(&y1)?.residue(target)?;
        (ProjPoint::affine(p, target, t), y1)
    } else {
        let s = y1.div(&y2)?.residue(target)?;
        (ProjPoint::at_inf(p, target, s), y2)
    };
    let scalar_val = lam.valuation().expect("pivot coordinate is nonzero");
    Ok((pt, Cocycle { scalar_val, det_val }))
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PointKind::Affine(t) => write!(f, "[1:{t}]"),
            PointKind::AtInf(s) => write!(f, "[{s}:1]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::TruncRing;

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_p1(2, 2).len(), 6);
        assert_eq!(enumerate_p1(3, 2).len(), 12);
        let pts: Vec<String> = enumerate_p1(2, 1).iter().map(|x| x.to_string()).collect();
        assert_eq!(pts, ["[1:0]", "[1:1]", "[0:1]"]);
    }

    #[test]
    fn index_round_trip() {
        for x in enumerate_p1(3, 3) {
            assert_eq!(ProjPoint::from_index(3, 3, x.index()), x);
        }
    }

    #[test]
    fn weyl_element() {
        let r = TruncRing::new(3, 6).unwrap();
        let w = LaurentMatrix::from_ints(&r, [[0, -1], [1, 0]]);
        let (y, c) = ProjPoint::affine(3, 2, 1).act(&w, 2).unwrap();
        assert_eq!(y, ProjPoint::affine(3, 2, 8));
        assert!(c.is_trivial());
    }

    #[test]
    fn eta_on_points_near_infinity() {
        let r = TruncRing::new(3, 6).unwrap();
        let eta = LaurentMatrix::eta(&r);
        let x = ProjPoint::at_inf(3, 3, 6);
        assert!(matches!(x.act(&eta, 3), Err(Error::PrecisionExhausted(_))));
        let (y, c) = x.act(&eta, 2).unwrap();
        assert_eq!(y, ProjPoint::affine(3, 2, 5));
        assert_eq!((c.scalar_val, c.det_val), (1, 1));
        let (y, c) = ProjPoint::at_inf(3, 3, 9).act(&eta, 2).unwrap();
        assert_eq!(y, ProjPoint::at_inf(3, 2, 3));
        assert_eq!((c.scalar_val, c.det_val), (1, 1));
    }

    #[test]
    fn identity_fixes_everything() {
        let r = TruncRing::new(2, 6).unwrap();
        let id = LaurentMatrix::identity(&r);
        for x in enumerate_p1(2, 3) {
            let (y, c) = x.act(&id, 3).unwrap();
            assert_eq!(y, x);
            assert!(c.is_trivial());
        }
    }
}
