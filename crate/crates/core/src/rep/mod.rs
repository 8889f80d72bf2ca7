//! Finite-level models of smooth representations of GL₂(E).
//!
//! Vectors are columns: g acts on Λ^rank by its action matrix A_g, and
//! A_g·A_h = A_{gh}.

pub mod cusp;
pub mod induced;
pub mod jacquet;

use std::sync::Arc;

use num_rational::Rational64;

pub use cusp::{CuspTable, CuspTableJson};
pub use jacquet::{jacquet_oracle, JacquetResult};

use crate::chars::{CharPair, TorusChar, UnramChar};
use crate::error::{Error, Result};
use crate::lambda::{CoeffRing, FgModule, LambdaMatrix, ModuleMap};
use crate::padic::{closure, enumerate_p1, p1_size, subgroup_generators, LaurentMatrix, SubgroupName, SubgroupSpec, TruncRing};
use crate::repspec::{CuspSource, RepSpec, BUILTIN_SIGN};

#[derive(Debug, Clone)]
pub enum RepKind {
    Trivial,
    /// Non-normalized Ind_B χ on functions on P¹(O/p^m).
    Induced { chi: TorusChar },
    /// Functions on P¹ modulo constants, realized on functions vanishing at ∞.
    Steinberg,
    /// GL₂(O) acting through GL₂(F_p).
    Inflated { table: Arc<CuspTable> },
    Tensor(Box<FiniteRep>, Box<FiniteRep>),
    /// base ⊗ (χ∘det).
    Twist { base: Box<FiniteRep>, chi: UnramChar },
    DirectSum(Box<FiniteRep>, Box<FiniteRep>),
}

#[derive(Debug, Clone)]
pub struct FiniteRep {
    pub ring: CoeffRing,
    pub level: Option<u32>,
    pub kind: RepKind,
    pub rank: usize,
    pub labels: Vec<String>,
}

fn merge_levels(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::LevelMismatch(x, y)),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        _ => Ok(None),
    }
}

fn check_level(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Invalid("level must be at least 1".into()));
    }
    Ok(())
}

/// χ(π)^{v(det g)}.
fn det_scalar(chi: &UnramChar, g: &LaurentMatrix) -> Result<u64> {
    Ok(chi.eval_pi_pow(g.det_val()? as i64))
}

impl FiniteRep {
    pub fn trivial(ring: &CoeffRing) -> Self {
        Self { ring: *ring, level: None, kind: RepKind::Trivial, rank: 1, labels: vec!["1".into()] }
    }

    pub fn induced(ring: &CoeffRing, chi: TorusChar, m: u32) -> Result<Self> {
        check_level(m)?;
        let labels = enumerate_p1(ring.p, m).iter().map(|x| x.to_string()).collect();
        Ok(Self { ring: *ring, level: Some(m), kind: RepKind::Induced { chi }, rank: p1_size(ring.p, m), labels })
    }

    pub fn steinberg(ring: &CoeffRing, m: u32) -> Result<Self> {
        check_level(m)?;
        let labels = enumerate_p1(ring.p, m)
            .iter()
            .filter(|x| x.index() != Self::inf_index(ring.p, m))
            .map(|x| x.to_string())
            .collect();
        Ok(Self { ring: *ring, level: Some(m), kind: RepKind::Steinberg, rank: p1_size(ring.p, m) - 1, labels })
    }

    pub fn inflate(ring: &CoeffRing, table: Arc<CuspTable>) -> Result<Self> {
        if table.p != ring.p || table.n != ring.n {
            return Err(Error::Invalid(format!(
                "table over GL2(F{}) with n = {} does not match p = {}, n = {}",
                table.p, table.n, ring.p, ring.n
            )));
        }
        let labels = (0..table.rank).map(|i| format!("e{i}")).collect();
        Ok(Self { ring: *ring, level: None, rank: table.rank, kind: RepKind::Inflated { table }, labels })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let level = merge_levels(self.level, other.level)?;
        let labels =
            self.labels.iter().flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}"))).collect();
        Ok(Self {
            ring: self.ring,
            level,
            rank: self.rank * other.rank,
            kind: RepKind::Tensor(Box::new(self.clone()), Box::new(other.clone())),
            labels,
        })
    }

    pub fn twist(&self, chi: UnramChar) -> Self {
        Self {
            ring: self.ring,
            level: self.level,
            rank: self.rank,
            kind: RepKind::Twist { base: Box::new(self.clone()), chi },
            labels: self.labels.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let level = merge_levels(self.level, other.level)?;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(Self {
            ring: self.ring,
            level,
            rank: self.rank + other.rank,
            kind: RepKind::DirectSum(Box::new(self.clone()), Box::new(other.clone())),
            labels,
        })
    }

    /// Build a model from a rep-spec at level m. Cuspidal tables are loaded
    /// over their own residue field.
    pub fn from_spec(ring: &CoeffRing, spec: &RepSpec, m: u32) -> Result<Self> {
        let half = Rational64::new(1, 2);
        match spec {
            RepSpec::Triv => Ok(Self::trivial(ring)),
            RepSpec::St => Self::steinberg(ring, m),
            RepSpec::Ind(a, b) => Self::induced(ring, CharPair::abs_pair(ring, *a, *b)?, m),
            RepSpec::Ps(a, b) => Self::induced(ring, CharPair::abs_pair(ring, a + half, b - half)?, m),
            RepSpec::Char(c1, c2) => {
                let c1 = ring.mul(*c1 % ring.n, ring.q_half_pow(-1)?);
                let c2 = ring.mul(*c2 % ring.n, ring.q_half_pow(1)?);
                let chi = CharPair::new(UnramChar::from_value(ring, c1)?, UnramChar::from_value(ring, c2)?);
                Self::induced(ring, chi, m)
            }
            RepSpec::AbsDet(k) => Ok(Self::trivial(ring).twist(UnramChar::abs_pow(ring, *k)?)),
            RepSpec::Nrd(_) => Err(Error::UnsupportedSpec(format!("{spec} has no GL2 model"))),
            RepSpec::Cusp(src) => {
                let table = load_cusp(ring.n, src)?;
                let r = crate::lambda::make_ring(ring.n, table.p, None)?;
                Self::inflate(&r, Arc::new(table))
            }
        }
    }

    fn inf_index(p: u64, m: u32) -> usize {
        crate::padic::ppow(p, m) as usize
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    pub fn n(&self) -> u64 {
        self.ring.n
    }

    /// The level at which subgroup images are taken; 1 when the model does not care.
    pub fn working_level(&self) -> u32 {
        self.level.unwrap_or(1)
    }

    /// The matrix of g. Fails for elements that do not preserve the level.
    pub fn action_matrix(&self, g: &LaurentMatrix) -> Result<LambdaMatrix> {
        let n = self.n();
        match &self.kind {
            RepKind::Trivial => Ok(LambdaMatrix::identity(n, 1)),
            RepKind::Induced { chi } => {
                let m = self.level.expect("induced models have a level");
                let map = induced::point_map(&self.ring, chi, g, m, m)?;
                let mut a = LambdaMatrix::zeros(n, self.rank, self.rank);
                for (x, &(y, c)) in map.iter().enumerate() {
                    a.set(x, y, c);
                }
                Ok(a)
            }
            RepKind::Steinberg => {
                let m = self.level.expect("Steinberg models have a level");
                let triv = CharPair::trivial(&self.ring);
                let map = induced::point_map(&self.ring, &triv, g, m, m)?;
                let inf = Self::inf_index(self.p(), m);
                let full = map.len();
                let mut big = vec![vec![0u64; full]; full];
                for (x, &(y, c)) in map.iter().enumerate() {
                    big[x][y] = c;
                }
                let keep: Vec<usize> = (0..full).filter(|&i| i != inf).collect();
                let mut a = LambdaMatrix::zeros(n, self.rank, self.rank);
                for (i, &x) in keep.iter().enumerate() {
                    for (j, &y) in keep.iter().enumerate() {
                        a.set(i, j, self.ring.sub(big[x][y], big[inf][y]));
                    }
                }
                Ok(a)
            }
            RepKind::Inflated { table } => {
                if !g.is_integral() || g.det_val()? != 0 {
                    return Err(Error::UnsupportedSubgroup(format!("{g} is not in GL2(O)")));
                }
                Ok(table.matrix(&g.reduce(1)?)?.clone())
            }
            RepKind::Tensor(a, b) => Ok(a.action_matrix(g)?.kron(&b.action_matrix(g)?)),
            RepKind::Twist { base, chi } => Ok(base.action_matrix(g)?.scale(det_scalar(chi, g)?)),
            RepKind::DirectSum(a, b) => Ok(a.action_matrix(g)?.block_diag(&b.action_matrix(g)?)),
        }
    }

    /// g·v. Works for elements such as η that move the level, provided the
    /// result is again a vector of the model.
    pub fn act_vector(&self, g: &LaurentMatrix, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rank {
            return Err(Error::Shape(format!("vector of length {} for rank {}", v.len(), self.rank)));
        }
        match &self.kind {
            RepKind::Induced { chi } => {
                let m = self.level.expect("induced models have a level");
                induced::act_function(&self.ring, chi, g, v, m, m)
            }
            RepKind::Steinberg => {
                let m = self.level.expect("Steinberg models have a level");
                let inf = Self::inf_index(self.p(), m);
                let mut f = v.to_vec();
                f.insert(inf, 0);
                let triv = CharPair::trivial(&self.ring);
                let mut out = induced::act_function(&self.ring, &triv, g, &f, m, m)?;
                let at_inf = out.remove(inf);
                Ok(out.into_iter().map(|x| self.ring.sub(x, at_inf)).collect())
            }
            RepKind::Twist { base, chi } => {
                let c = det_scalar(chi, g)?;
                Ok(base.act_vector(g, v)?.into_iter().map(|x| self.ring.mul(x, c)).collect())
            }
            RepKind::DirectSum(a, b) => {
                let mut out = a.act_vector(g, &v[..a.rank])?;
                out.extend(b.act_vector(g, &v[a.rank..])?);
                Ok(out)
            }
            RepKind::Trivial | RepKind::Inflated { .. } | RepKind::Tensor(..) => {
                let a = self.action_matrix(g)?;
                Ok(a.transpose().apply_row(v))
            }
        }
    }

    fn subgroup(&self, name: SubgroupName) -> SubgroupSpec {
        SubgroupSpec::new(name, self.p(), self.working_level())
    }

    fn generator_matrices(&self, h: &SubgroupSpec) -> Result<Vec<LambdaMatrix>> {
        if h.p != self.p() {
            return Err(Error::Invalid(format!("subgroup over p = {} acting on a p = {} model", h.p, self.p())));
        }
        subgroup_generators(h)?.iter().map(|g| self.action_matrix(g)).collect()
    }

    /// σ^H as a submodule of Λ^rank. U′ is handled as η·σ^U.
    pub fn fixed_points(&self, h: &SubgroupSpec) -> Result<FgModule> {
        if h.name == SubgroupName::Uprime {
            let fu = self.fixed_points(&SubgroupSpec { name: SubgroupName::U, ..*h })?;
            let eta = LaurentMatrix::eta(&TruncRing::new(self.p(), h.precision())?);
            let rows: Vec<Vec<u64>> =
                fu.generators().row_vecs().iter().map(|v| self.act_vector(&eta, v)).collect::<Result<_>>()?;
            return Ok(FgModule::submodule(&LambdaMatrix::from_u64_rows(self.n(), self.rank, &rows)));
        }
        let mut stacked = LambdaMatrix::zeros(self.n(), self.rank, 0);
        for a in self.generator_matrices(h)? {
            let d = a.add(&LambdaMatrix::identity(self.n(), self.rank).scale(self.n() - 1))?;
            stacked = stacked.hstack(&d.transpose())?;
        }
        Ok(FgModule::submodule(&stacked.left_kernel()))
    }

    pub fn fixed_points_named(&self, name: SubgroupName) -> Result<FgModule> {
        self.fixed_points(&self.subgroup(name))
    }

    /// σ_H = Λ^rank / Σ_g (g − 1)Λ^rank.
    pub fn coinvariants(&self, h: &SubgroupSpec) -> Result<FgModule> {
        let mut stacked = LambdaMatrix::zeros(self.n(), 0, self.rank);
        for a in self.generator_matrices(h)? {
            let d = a.add(&LambdaMatrix::identity(self.n(), self.rank).scale(self.n() - 1))?;
            stacked = stacked.vstack(&d.transpose())?;
        }
        FgModule::quotient(self.n(), self.rank, &stacked)
    }

    /// Coinvariants under explicitly given elements.
    pub fn coinvariants_of(&self, gens: &[LaurentMatrix]) -> Result<FgModule> {
        let mut stacked = LambdaMatrix::zeros(self.n(), 0, self.rank);
        for g in gens {
            let d = self.action_matrix(g)?.add(&LambdaMatrix::identity(self.n(), self.rank).scale(self.n() - 1))?;
            stacked = stacked.vstack(&d.transpose())?;
        }
        FgModule::quotient(self.n(), self.rank, &stacked)
    }

    /// e_H = |H|⁻¹ Σ_h A_h over the finite image of H, as a map on row vectors.
    pub fn averaging_projector(&self, h: &SubgroupSpec) -> Result<ModuleMap> {
        let elems = closure(h)?;
        let order = elems.len() as u64;
        let inv = self
            .ring
            .inv(order % self.n())
            .ok_or(Error::NonInvertibleOrder { order, n: self.n() })?;
        let r = h.ring()?;
        let mut sum = LambdaMatrix::zeros(self.n(), self.rank, self.rank);
        for x in &elems {
            sum = sum.add(&self.action_matrix(&x.to_laurent(&r))?)?;
        }
        let e = sum.scale(inv).transpose();
        let free = FgModule::free(self.n(), self.rank);
        ModuleMap::new(free.clone(), free, e)
    }

    /// Spot check A_g·A_h = A_{gh}.
    pub fn respects_product(&self, g: &LaurentMatrix, h: &LaurentMatrix) -> Result<bool> {
        Ok(self.action_matrix(g)?.mul(&self.action_matrix(h)?)? == self.action_matrix(&g.mul(h))?)
    }

    /// The contragredient model.
    pub fn dual(&self) -> Result<Self> {
        let r = &self.ring;
        match &self.kind {
            RepKind::Trivial | RepKind::Steinberg => Ok(self.clone()),
            RepKind::Induced { chi } => {
                let q = UnramChar::abs_int(r, 1);
                let d = CharPair::new(chi.z1.inv().mul(&q), chi.z2.inv().mul(&q.inv()));
                Self::induced(r, d, self.level.expect("induced models have a level"))
            }
            RepKind::Twist { base, chi } => Ok(base.dual()?.twist(chi.inv())),
            RepKind::DirectSum(a, b) => a.dual()?.direct_sum(&b.dual()?),
            RepKind::Inflated { .. } | RepKind::Tensor(..) => Err(Error::DualNotAvailable(self.describe())),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RepKind::Trivial => "triv".into(),
            RepKind::Induced { chi } => format!("Ind_B({chi})"),
            RepKind::Steinberg => "st".into(),
            RepKind::Inflated { table } => format!("inflation from {}", table.group),
            RepKind::Tensor(a, b) => format!("({})⊗({})", a.describe(), b.describe()),
            RepKind::Twist { base, chi } => format!("({})⊗{chi}∘det", base.describe()),
            RepKind::DirectSum(a, b) => format!("({})⊕({})", a.describe(), b.describe()),
        }
    }
}

pub fn load_cusp(n: u64, src: &CuspSource) -> Result<CuspTable> {
    match src {
        CuspSource::Builtin(name) if name == BUILTIN_SIGN => Ok(CuspTable::gl2f2_sign(n)),
        CuspSource::Builtin(name) => Err(Error::UnsupportedSpec(format!("no built-in table {name}"))),
        CuspSource::Path(p) => CuspTable::load(n, p),
    }
}

/// The two vanishing witnesses for a depth-zero cuspidal inflation: no
/// Iwahori-fixed vectors at level one, and no N(F_p)-coinvariants.
pub fn cuspidal_witnesses(table: &Arc<CuspTable>) -> Result<()> {
    let ring = crate::lambda::make_ring(table.n, table.p, None)?;
    let rep = FiniteRep::inflate(&ring, table.clone())?;
    let fixed = rep.fixed_points(&SubgroupSpec::gamma0(table.p, 1))?;
    if !fixed.is_zero() {
        return Err(Error::CuspidalWitnessFailed(format!(
            "Iwahori-fixed vectors {:?}",
            fixed.iso_class()
        )));
    }
    let r = TruncRing::new(table.p, 3)?;
    let coinv = rep.coinvariants_of(&[LaurentMatrix::upper(&r, 1, 0)])?;
    if !coinv.is_zero() {
        return Err(Error::CuspidalWitnessFailed(format!("N-coinvariants {:?}", coinv.iso_class())));
    }
    Ok(())
}
