use serde::{Deserialize, Serialize};

use super::matrix::LambdaMatrix;
use super::snf::smith_form;
use crate::error::{Error, Result};

/// A finitely generated Λ-module presented as a subquotient S/R of Λ^ambient,
/// with R ⊆ S and both stored in Howell form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgModule {
    ambient: usize,
    generators: LambdaMatrix,
    relations: LambdaMatrix,
}

#[derive(Serialize, Deserialize)]
struct FgModuleJson {
    ambient: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Vec<u64>>>,
    relations: Vec<Vec<u64>>,
}

impl FgModule {
    /// S/R; R is enlarged to R ∩ S implicitly by requiring R ⊆ S.
    pub fn subquotient(generators: &LambdaMatrix, relations: &LambdaMatrix) -> Result<Self> {
        if generators.ncols() != relations.ncols() {
            return Err(Error::Shape("generators and relations live in different ambients".into()));
        }
        if !generators.span_includes(relations) {
            return Err(Error::Invalid("relations are not contained in the generated submodule".into()));
        }
        Ok(Self {
            ambient: generators.ncols(),
            generators: generators.howell_form(),
            relations: relations.howell_form(),
        })
    }

    /// Λ^r / rowspan(relations).
    pub fn quotient(n: u64, ambient: usize, relations: &LambdaMatrix) -> Result<Self> {
        if relations.ncols() != ambient {
            return Err(Error::Shape(format!("relations have {} columns, ambient is {ambient}", relations.ncols())));
        }
        Ok(Self {
            ambient,
            generators: LambdaMatrix::identity(n, ambient).howell_form(),
            relations: relations.howell_form(),
        })
    }

    pub fn free(n: u64, rank: usize) -> Self {
        Self::quotient(n, rank, &LambdaMatrix::zeros(n, 0, rank)).expect("shapes agree")
    }

    /// The submodule generated by the rows of `gens`.
    pub fn submodule(gens: &LambdaMatrix) -> Self {
        Self {
            ambient: gens.ncols(),
            generators: gens.howell_form(),
            relations: LambdaMatrix::zeros(gens.modulus(), 0, gens.ncols()),
        }
    }

    pub fn zero(n: u64, ambient: usize) -> Self {
        Self::submodule(&LambdaMatrix::zeros(n, 0, ambient))
    }

    pub fn modulus(&self) -> u64 {
        self.generators.modulus()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &LambdaMatrix {
        &self.generators
    }

    pub fn relations(&self) -> &LambdaMatrix {
        &self.relations
    }

    /// Panics when the order does not fit in a u128.
    pub fn order(&self) -> u128 {
        self.generators.span_size() / self.relations.span_size()
    }

    pub fn is_zero(&self) -> bool {
        self.relations.span_includes(&self.generators)
    }

    /// Is the ambient vector v an element of S?
    pub fn contains(&self, v: &[u64]) -> bool {
        self.generators.span_contains(v)
    }

    /// Is v an element of S that is zero in S/R?
    pub fn is_zero_element(&self, v: &[u64]) -> bool {
        self.relations.span_contains(v)
    }

    /// Coefficient vectors c with c·S ∈ R: the relation module of the generator rows.
    pub fn generator_relations(&self) -> LambdaMatrix {
        let k = self.generators.nrows();
        let stacked = self.generators.vstack(&self.relations).expect("same ambient");
        let ker = stacked.left_kernel();
        ker.select_cols(0..k).howell_form()
    }

    /// Invariant factors d_i | n with M ≅ ⊕ Z/d_i, sorted ascending, trivial factors dropped.
    pub fn iso_class(&self) -> Vec<u64> {
        let k = self.generators.nrows();
        if k == 0 {
            return Vec::new();
        }
        let snf = smith_form(&self.generator_relations(), k);
        snf.invariant_factors().into_iter().filter(|&d| d != 1).collect()
    }

    /// Direct sum inside Λ^(a+b).
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            ambient: self.ambient + other.ambient,
            generators: self.generators.block_diag(&other.generators).howell_form(),
            relations: self.relations.block_diag(&other.relations).howell_form(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.modulus();
        let gens = if self.generators == LambdaMatrix::identity(n, self.ambient) {
            None
        } else {
            Some(self.generators.row_vecs())
        };
        serde_json::to_value(FgModuleJson { ambient: self.ambient, generators: gens, relations: self.relations.row_vecs() })
            .expect("plain data")
    }

    pub fn from_json(n: u64, value: &serde_json::Value) -> Result<Self> {
        let j: FgModuleJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Invalid(format!("bad module JSON: {e}")))?;
        let rel = LambdaMatrix::from_u64_rows(n, j.ambient, &check_rows(&j.relations, j.ambient)?);
        match j.generators {
            None => Self::quotient(n, j.ambient, &rel),
            Some(g) => Self::subquotient(&LambdaMatrix::from_u64_rows(n, j.ambient, &check_rows(&g, j.ambient)?), &rel),
        }
    }
}

fn check_rows(rows: &[Vec<u64>], cols: usize) -> Result<Vec<Vec<u64>>> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("row length differs from ambient {cols}")));
    }
    Ok(rows.to_vec())
}

/// A Λ-linear map between subquotients. Row i of `matrix` is the image, in the
/// target ambient, of the i-th generator row of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: FgModule,
    target: FgModule,
    matrix: LambdaMatrix,
}

impl ModuleMap {
    pub fn new(source: FgModule, target: FgModule, matrix: LambdaMatrix) -> Result<Self> {
        if matrix.nrows() != source.generators.nrows() || matrix.ncols() != target.ambient {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                source.generators.nrows(),
                target.ambient
            )));
        }
        if !target.generators.span_includes(&matrix) {
            return Err(Error::IllDefinedMap("image leaves the target submodule".into()));
        }
        let rel = source.generator_relations();
        let pushed = rel.mul(&matrix)?;
        if !target.relations.span_includes(&pushed) {
            return Err(Error::IllDefinedMap("source relations do not map into target relations".into()));
        }
        Ok(Self { source, target, matrix })
    }

    /// A map given by an ambient matrix A (source ambient × target ambient), restricted to S.
    pub fn from_ambient(source: FgModule, target: FgModule, ambient_matrix: &LambdaMatrix) -> Result<Self> {
        let m = source.generators.mul(ambient_matrix)?;
        Self::new(source, target, m)
    }

    pub fn identity(m: &FgModule) -> Self {
        let mat = m.generators.clone();
        Self { source: m.clone(), target: m.clone(), matrix: mat }
    }

    pub fn zero(source: FgModule, target: FgModule) -> Self {
        let mat = LambdaMatrix::zeros(source.modulus(), source.generators.nrows(), target.ambient);
        Self { source, target, matrix: mat }
    }

    pub fn source(&self) -> &FgModule {
        &self.source
    }

    pub fn target(&self) -> &FgModule {
        &self.target
    }

    pub fn matrix(&self) -> &LambdaMatrix {
        &self.matrix
    }

    /// Image of an element of the source submodule S.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        let c = self
            .source
            .generators
            .solve_left(v)
            .ok_or_else(|| Error::Invalid("vector is not in the source module".into()))?;
        Ok(self.matrix.apply_row(&c))
    }

    /// self followed by other.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let rows: Result<Vec<Vec<u64>>> = (0..self.matrix.nrows()).map(|i| other.apply(self.matrix.row(i))).collect();
        let m = LambdaMatrix::from_u64_rows(self.source.modulus(), other.target.ambient, &rows?);
        ModuleMap::new(self.source.clone(), other.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.target.relations.span_includes(&self.matrix)
    }

    /// Kernel as a subquotient of the source ambient.
    pub fn kernel(&self) -> FgModule {
        let k = self.matrix.nrows();
        let stacked = self.matrix.vstack(&self.target.relations).expect("same ambient");
        let coeffs = stacked.left_kernel().select_cols(0..k);
        let elems = coeffs.mul(&self.source.generators).expect("shapes agree");
        let gens = elems.vstack(&self.source.relations).expect("same ambient");
        FgModule {
            ambient: self.source.ambient,
            generators: gens.howell_form(),
            relations: self.source.relations.clone(),
        }
    }

    /// Image as a subquotient of the target ambient.
    pub fn image(&self) -> FgModule {
        let gens = self.matrix.vstack(&self.target.relations).expect("same ambient");
        FgModule {
            ambient: self.target.ambient,
            generators: gens.howell_form(),
            relations: self.target.relations.clone(),
        }
    }

    pub fn cokernel(&self) -> FgModule {
        let rels = self.matrix.vstack(&self.target.relations).expect("same ambient");
        FgModule {
            ambient: self.target.ambient,
            generators: self.target.generators.clone(),
            relations: rels.howell_form(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Homology of S_mid with respect to incoming image and outgoing kernel.
pub fn subquotient_homology(incoming: &ModuleMap, outgoing: &ModuleMap) -> Result<FgModule> {
    let ker = outgoing.kernel();
    let im = incoming.image();
    if !ker.generators.span_includes(&im.generators) {
        return Err(Error::Invalid("composite of consecutive maps is not zero".into()));
    }
    Ok(FgModule { ambient: ker.ambient, generators: ker.generators, relations: im.generators })
}

/// An explicit isomorphism a → b when the invariant factors agree.
pub fn find_isomorphism(a: &FgModule, b: &FgModule) -> Result<Option<ModuleMap>> {
    if a.modulus() != b.modulus() {
        return Err(Error::Shape("modules over different rings".into()));
    }
    if a.iso_class() != b.iso_class() {
        return Ok(None);
    }
    let n = a.modulus();
    let ka = a.generators.nrows();
    let kb = b.generators.nrows();
    if ka == 0 || kb == 0 {
        return Ok(Some(ModuleMap::zero(a.clone(), b.clone())));
    }
    let sa = smith_form(&a.generator_relations(), ka);
    let sb = smith_form(&b.generator_relations(), kb);
    let fa = sa.invariant_factors();
    let fb = sb.invariant_factors();
    let basis_b = sb.v.mul(&b.generators)?;
    let mut used = vec![false; kb];
    let mut assign: Vec<Option<usize>> = vec![None; ka];
    for (i, &d) in fa.iter().enumerate() {
        if d == 1 {
            continue;
        }
        let j = (0..kb).find(|&j| !used[j] && fb[j] == d).ok_or_else(|| Error::Invalid("invariant factor matching failed".into()))?;
        used[j] = true;
        assign[i] = Some(j);
    }
    let mut p = LambdaMatrix::zeros(n, ka, b.ambient);
    for (i, a_i) in assign.iter().enumerate() {
        if let Some(j) = a_i {
            for c in 0..b.ambient {
                p.set(i, c, basis_b.get(*j, c));
            }
        }
    }
    let m = sa.v_inv.mul(&p)?;
    let map = ModuleMap::new(a.clone(), b.clone(), m)?;
    if !map.is_isomorphism() {
        return Err(Error::Invalid("constructed map is not an isomorphism".into()));
    }
    Ok(Some(map))
}
