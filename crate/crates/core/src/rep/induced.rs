//! Functions on P¹ at finite level with the twisted right-translation action of
//! Ind_B χ: (g·f)(x) = χ(b(x,g))·f(x·g).

use crate::chars::CharPair;
use crate::error::{Error, Result};
use crate::lambda::CoeffRing;
use crate::padic::{enumerate_p1, p1_size, Cocycle, LaurentMatrix, ProjPoint};

/// Lifting beyond this many extra levels is refused.
const MAX_EXTRA: u32 = 12;

/// χ(b) for the Borel factor with the given valuations.
pub fn cocycle_value(ring: &CoeffRing, chi: &CharPair, c: &Cocycle) -> u64 {
    ring.mul(chi.z1.eval_pi_pow(c.v11() as i64), chi.z2.eval_pi_pow(c.v22() as i64))
}

/// For every lift of x to the first sufficient level, the image of the lift
/// under g at level `inp` with its cocycle value.
pub fn lift_images(
    ring: &CoeffRing,
    chi: &CharPair,
    x: &ProjPoint,
    g: &LaurentMatrix,
    inp: u32,
) -> Result<Vec<(usize, u64)>> {
    let mut last = None;
    for extra in 0..=MAX_EXTRA {
        let lifts = x.lifts(extra);
        let attempt: Result<Vec<(usize, u64)>> = lifts
            .iter()
            .map(|y| y.act(g, inp).map(|(z, c)| (z.index(), cocycle_value(ring, chi, &c))))
            .collect();
        match attempt {
            Ok(v) => return Ok(v),
            Err(e @ Error::PrecisionExhausted(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::PrecisionExhausted("no lift level tried".into())))
}

/// The action as a monomial map: for each x at level `out`, the single point
/// at level `inp` it reads from and the scalar.
pub fn point_map(
    ring: &CoeffRing,
    chi: &CharPair,
    g: &LaurentMatrix,
    inp: u32,
    out: u32,
) -> Result<Vec<(usize, u64)>> {
    enumerate_p1(g.p(), out)
        .iter()
        .map(|x| {
            let imgs = lift_images(ring, chi, x, g, inp)?;
            let first = imgs[0];
            if imgs.iter().any(|&i| i != first) {
                return Err(Error::PrecisionExhausted(format!(
                    "{x}·g is not determined at level {out} from level {inp}"
                )));
            }
            Ok(first)
        })
        .collect()
}

/// g·f for f a function at level `inp`, returned at level `out`.
pub fn act_function(
    ring: &CoeffRing,
    chi: &CharPair,
    g: &LaurentMatrix,
    f: &[u64],
    inp: u32,
    out: u32,
) -> Result<Vec<u64>> {
    let p = g.p();
    if f.len() != p1_size(p, inp) {
        return Err(Error::Shape(format!("function has {} values, level {inp} has {}", f.len(), p1_size(p, inp))));
    }
    enumerate_p1(p, out)
        .iter()
        .map(|x| {
            let vals: Vec<u64> =
                lift_images(ring, chi, x, g, inp)?.into_iter().map(|(i, c)| ring.mul(c, f[i])).collect();
            if vals.iter().any(|&v| v != vals[0]) {
                return Err(Error::PrecisionExhausted(format!("g·f is not a level-{out} function near {x}")));
            }
            Ok(vals[0])
        })
        .collect()
}

/// Pull a level-`inp` function back to level `out` ≥ `inp`.
pub fn pullback(p: u64, f: &[u64], inp: u32, out: u32) -> Vec<u64> {
    enumerate_p1(p, out).iter().map(|x| f[x.reduce(inp).index()]).collect()
}

/// Indicator of a point.
pub fn delta(p: u64, level: u32, x: &ProjPoint) -> Vec<u64> {
    let mut v = vec![0; p1_size(p, level)];
    v[x.index()] = 1;
    v
}
