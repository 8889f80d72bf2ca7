//! Hochschild–Serre assembly, Verdier duality and the gluing functor outputs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde_json::{json, Map, Value};

use super::jacquet::{jacquet_symbolic, ts_survivors};
use super::tables::{InputCohomologyTable, Slope, TateRuleTable};
use super::unram::{format_exp, CharPair, Gb2Character, TorusChar, UnramChar};
use crate::error::{Error, Result};
use crate::lambda::{CoeffRing, FgModule};
use crate::padic::{orbits, SubgroupSpec};
use crate::rep::{cuspidal_witnesses, load_cusp, FiniteRep};
use crate::repspec::RepSpec;
use crate::sl2::sl2_homology;

/// Level of the finite models used for SL₂-homology of the input modules.
const MODEL_LEVEL: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub slope: Slope,
    pub sheaf: RepSpec,
    pub twist: i64,
    pub dualized: bool,
}

/// A complex of G_{b₂}(E)-representations, one character per copy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedCharModule {
    pub degrees: BTreeMap<i32, Vec<Gb2Character>>,
    pub provenance: Option<Provenance>,
    pub warnings: Vec<String>,
}

fn char_key(c: &Gb2Character) -> (u64, u64) {
    (c.z1.value, c.z2.value)
}

impl GradedCharModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.values().all(Vec::is_empty)
    }

    pub fn push(&mut self, degree: i32, c: Gb2Character) {
        let v = self.degrees.entry(degree).or_default();
        v.push(c);
        v.sort_by_key(char_key);
    }

    pub fn support(&self) -> Vec<i32> {
        self.degrees.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d).collect()
    }

    pub fn get(&self, degree: i32) -> &[Gb2Character] {
        self.degrees.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Λ-valued equality of the character tables.
    pub fn same_characters(&self, other: &Self) -> bool {
        self.support() == other.support() && self.support().iter().all(|d| self.get(*d) == other.get(*d))
    }

    pub fn to_json(&self) -> Value {
        let mut degrees = Map::new();
        for (d, cs) in &self.degrees {
            if !cs.is_empty() {
                degrees.insert(d.to_string(), Value::Array(cs.iter().map(CharPair::to_json).collect()));
            }
        }
        let mut out = json!({ "degrees": degrees });
        if !self.warnings.is_empty() {
            out["warnings"] = json!(self.warnings);
        }
        out
    }

    pub fn from_json(n: u64, v: &Value) -> Result<Self> {
        let bad = |why: &str| Error::Parse { input: v.to_string(), reason: why.into() };
        let degrees = v.get("degrees").and_then(Value::as_object).ok_or_else(|| bad("missing degrees"))?;
        let parse_char = |c: &Value| -> Result<UnramChar> {
            let value = c.get("val").and_then(Value::as_u64).ok_or_else(|| bad("missing val"))?;
            let exp = match c.get("exp") {
                Some(Value::String(s)) => Some(parse_rational(s).ok_or_else(|| bad("bad exponent"))?),
                _ => None,
            };
            Ok(UnramChar { n, value: value % n, exp })
        };
        let mut out = Self::zero();
        for (d, cs) in degrees {
            let d: i32 = d.parse().map_err(|_| bad("bad degree"))?;
            for c in cs.as_array().ok_or_else(|| bad("degree entry is not a list"))? {
                let z1 = parse_char(c.get("z1").ok_or_else(|| bad("missing z1"))?)?;
                let z2 = parse_char(c.get("z2").ok_or_else(|| bad("missing z2"))?)?;
                out.push(d, CharPair::new(z1, z2));
            }
        }
        if let Some(ws) = v.get("warnings").and_then(Value::as_array) {
            out.warnings = ws.iter().filter_map(|w| w.as_str().map(String::from)).collect();
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((a, b)) => Some(Rational64::new(a.parse().ok()?, b.parse().ok()?)),
        None => Some(Rational64::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for GradedCharModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for (d, cs) in &self.degrees {
            if cs.is_empty() {
                continue;
            }
            let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
            writeln!(f, "degree {d}: {}", names.join(" ⊕ "))?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// z₁ ↦ sheaf·det·|·|^a, z₂ ↦ sheaf·det·|·|^b with (a, b) from the rules.
pub fn assemble_characters(
    ring: &CoeffRing,
    degree: i32,
    sheaf_char: &UnramChar,
    module_det_char: &UnramChar,
    rules: &TateRuleTable,
) -> Result<Gb2Character> {
    let (a, b) = rules.exponents(degree)?;
    let base = sheaf_char.mul(module_det_char);
    Ok(CharPair::new(base.mul(&UnramChar::abs_pow(ring, a)?), base.mul(&UnramChar::abs_pow(ring, b)?)))
}

enum Sheaf {
    /// χ∘det (or χ∘Nrd on the half-slope side).
    Det(UnramChar),
    /// Normalized parabolic induction of χ.
    Ps(TorusChar),
    Cusp,
}

fn classify(ring: &CoeffRing, slope: Slope, spec: &RepSpec) -> Result<Sheaf> {
    let half = Rational64::new(1, 2);
    let zero = Rational64::from_integer(0);
    let unsupported = || Error::UnsupportedSpec(format!("{spec} is not a sheaf on the {slope} stratum"));
    Ok(match (slope, spec) {
        (_, RepSpec::Triv) => Sheaf::Det(UnramChar::abs_pow(ring, zero)?),
        (_, RepSpec::AbsDet(k)) => Sheaf::Det(UnramChar::abs_pow(ring, *k)?),
        (Slope::Half, RepSpec::Nrd(k)) => Sheaf::Det(UnramChar::abs_pow(ring, *k)?),
        (Slope::Integral, RepSpec::Ps(a, b)) => Sheaf::Ps(CharPair::abs_pair(ring, *a, *b)?),
        (Slope::Integral, RepSpec::Ind(a, b)) => Sheaf::Ps(CharPair::abs_pair(ring, a - half, b + half)?),
        (Slope::Integral, RepSpec::Char(c1, c2)) => {
            Sheaf::Ps(CharPair::new(UnramChar::from_value(ring, *c1)?, UnramChar::from_value(ring, *c2)?))
        }
        (_, RepSpec::Cusp(_)) => Sheaf::Cusp,
        _ => return Err(unsupported()),
    })
}

fn dual_sheaf(ring: &CoeffRing, spec: &RepSpec) -> Result<RepSpec> {
    match spec {
        RepSpec::Char(c1, c2) => {
            let inv = |c: u64| ring.inv(c % ring.n).ok_or_else(|| Error::Invalid(format!("{c} is not a unit")));
            Ok(RepSpec::Char(inv(*c1)?, inv(*c2)?))
        }
        RepSpec::Cusp(_) => Ok(spec.clone()),
        other => other.dual(),
    }
}

/// Ranks of H_0 and H_1 (degree −1) of SL₂ acting on the input module.
fn sl2_homology_ranks(ring: &CoeffRing, module: &RepSpec) -> Result<(usize, usize)> {
    let sigma = FiniteRep::from_spec(ring, module, MODEL_LEVEL)?;
    let h = sl2_homology(&sigma)?;
    Ok((h.h0.iso_class().len(), h.h_minus1.iso_class().len()))
}

fn check_degeneration(terms: &[(i32, i32)]) -> Result<()> {
    for &(j1, h1) in terms {
        for &(j2, h2) in terms {
            if j2 - j1 >= 2 && ((j2 + h2) - (j1 + h1)).abs() == 1 {
                return Err(Error::Invalid(format!(
                    "Hochschild–Serre terms ({j1},{h1}) and ({j2},{h2}) could support a differential"
                )));
            }
        }
    }
    Ok(())
}

fn value_exponent_warning(c: &UnramChar, ring: &CoeffRing, out: &mut Vec<String>) {
    let Some(s) = c.exp else { return };
    for e in [-1i64, 0, 1] {
        let target = UnramChar::abs_int(ring, e);
        if c.value == target.value && s != Rational64::from_integer(e) {
            out.push(format!(
                "character with exponent {} equals |·|^{e} in Z/{}; the genericity cases overlap",
                format_exp(s),
                ring.n
            ));
        }
    }
}

/// H_c^• of the cover with coefficients in the sheaf, with Λ(twist) folded in.
fn hc_twisted(ring: &CoeffRing, slope: Slope, sheaf: &RepSpec, twist: i64) -> Result<GradedCharModule> {
    let rules = TateRuleTable::for_slope(slope).with_twist(twist);
    let mut out = GradedCharModule {
        provenance: Some(Provenance { slope, sheaf: sheaf.clone(), twist, dualized: false }),
        ..Default::default()
    };
    let table = InputCohomologyTable::for_slope(slope);
    let mut terms = Vec::new();
    match classify(ring, slope, sheaf)? {
        Sheaf::Cusp => {
            let RepSpec::Cusp(src) = sheaf else { unreachable!() };
            cuspidal_witnesses(&Arc::new(load_cusp(ring.n, src)?))?;
        }
        Sheaf::Det(chi) => {
            for entry in &table.entries {
                let (h0, h1) = match slope {
                    Slope::Integral => sl2_homology_ranks(ring, &entry.module)?,
                    Slope::Half => (1, 0),
                };
                if h0 + h1 == 0 {
                    continue;
                }
                let det = UnramChar::abs_pow(ring, rules.intrinsic_det(entry.degree)?)?;
                let c = assemble_characters(ring, entry.degree, &chi, &det, &rules)?;
                for (rank, deg, h) in [(h0, entry.degree, 0), (h1, entry.degree - 1, -1)] {
                    if rank > 0 {
                        terms.push((entry.degree, h));
                    }
                    for _ in 0..rank {
                        out.push(deg, c);
                    }
                }
            }
        }
        Sheaf::Ps(chi) => {
            let twist_char = CharPair::delta_t_pow(ring, Rational64::new(1, 2))?.mul(&chi);
            value_exponent_warning(&chi.ratio(), ring, &mut out.warnings);
            let one = UnramChar::trivial(ring);
            for entry in &table.entries {
                let sym = jacquet_symbolic(ring, &entry.module)?;
                for (piece, r0, r1) in ts_survivors(&sym, &twist_char, ring.n)? {
                    let c = assemble_characters(ring, entry.degree, &one, &piece.z1, &rules)?;
                    for (rank, deg, h) in [(r0, entry.degree, 0), (r1, entry.degree - 1, -1)] {
                        if rank > 0 {
                            terms.push((entry.degree, h));
                        }
                        for _ in 0..rank {
                            out.push(deg, c);
                        }
                    }
                }
            }
        }
    }
    check_degeneration(&terms)?;
    Ok(out)
}

/// H_c^•(M̃, sheaf) as a graded G_{b₂}(E)-module.
pub fn hc_tilde(ring: &CoeffRing, slope: Slope, sheaf: &RepSpec) -> Result<GradedCharModule> {
    hc_twisted(ring, slope, sheaf, 0)
}

/// Re-run the assembly on the dual sheaf with the dualizing twist Λ(d),
/// invert every character and send degree k to 2d − k.
pub fn verdier_dualize(ring: &CoeffRing, g: &GradedCharModule, d: i32) -> Result<GradedCharModule> {
    let Some(prov) = &g.provenance else {
        if g.is_zero() {
            return Ok(GradedCharModule::zero());
        }
        return Err(Error::MissingProvenance);
    };
    if d != prov.slope.dim() {
        return Err(Error::Invalid(format!("the {} cover has dimension {}, not {d}", prov.slope, prov.slope.dim())));
    }
    let dual = dual_sheaf(ring, &prov.sheaf)?;
    let h = hc_twisted(ring, prov.slope, &dual, prov.twist + d as i64)?;
    let mut out = GradedCharModule {
        provenance: Some(Provenance { dualized: !prov.dualized, ..prov.clone() }),
        warnings: h.warnings.clone(),
        ..Default::default()
    };
    for (k, cs) in &h.degrees {
        for c in cs {
            out.push(2 * d - k, c.inv());
        }
    }
    Ok(out)
}

/// i_{b₂}^* R i_{b₁,*} of the sheaf.
pub fn glue(ring: &CoeffRing, slope: Slope, sheaf: &RepSpec) -> Result<GradedCharModule> {
    let h = hc_tilde(ring, slope, sheaf)?;
    verdier_dualize(ring, &h, slope.dim())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactGeneratorRanks {
    pub k: u32,
    pub p: u64,
    pub window: u32,
    /// |O^×/(1 + π^k O)|.
    pub units: u128,
    pub orbit_count: usize,
    pub ranks: BTreeMap<i32, u128>,
}

impl CompactGeneratorRanks {
    pub fn to_json(&self) -> Value {
        let ranks: Map<String, Value> = self.ranks.iter().map(|(d, r)| (d.to_string(), json!(r))).collect();
        json!({ "k": self.k, "p": self.p, "window": self.window, "units": self.units,
                "orbit_count": self.orbit_count, "ranks": ranks })
    }
}

/// Ranks of the gluing functor on the compact generator cInd_K Λ, K = K_k.
pub fn compact_generator_ranks(k: u32, p: u64, n: u64, window: u32) -> Result<CompactGeneratorRanks> {
    crate::lambda::make_ring(n, p, None)?;
    if k == 0 {
        return Err(Error::Invalid("congruence level must be at least 1".into()));
    }
    let units = (p as u128 - 1) * crate::padic::ppow(p, k - 1);
    let orbit_count = orbits(&SubgroupSpec::gamma_k(p, k, 2 * k), 2 * k)?.len();
    let w = window as u128;
    let o = orbit_count as u128;
    let ranks = BTreeMap::from([(2, w * units * (o - 1)), (3, w * units * o), (4, w * units)]);
    Ok(CompactGeneratorRanks { k, p, window, units, orbit_count, ranks })
}

/// The Λ-module underlying a graded character module, degree by degree.
pub fn underlying_modules(g: &GradedCharModule, n: u64) -> BTreeMap<i32, FgModule> {
    g.degrees.iter().map(|(d, cs)| (*d, FgModule::free(n, cs.len()))).collect()
}
