//! Balls in the Bruhat–Tits tree of SL₂(E).
//!
//! The vertex (d, x), x ∈ P¹(O/p^d), is the lattice class of O·x̃ + π^d O².
//! The root is O², and g acts on lattices by L ↦ L·gᵀ.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lambda::{BoundedComplex, FgModule, LambdaMatrix, ModuleMap};
use crate::padic::{act_coords, closure, enumerate_p1, ppow, IntMat, LaurentMatrix, PAdic, PointKind, ProjPoint, SubgroupSpec, TruncRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub depth: u32,
    pub point: Option<ProjPoint>,
}

impl TreeVertex {
    pub fn root() -> Self {
        Self { depth: 0, point: None }
    }

    /// 0 for the U-type class, 1 for the U′-type class.
    pub fn colour(&self) -> u32 {
        self.depth % 2
    }

    pub fn parent(&self) -> Option<Self> {
        let pt = self.point?;
        Some(if self.depth == 1 {
            Self::root()
        } else {
            Self { depth: self.depth - 1, point: Some(pt.reduce(self.depth - 1)) }
        })
    }

    pub fn label(&self) -> String {
        match self.point {
            None => "O²".into(),
            Some(x) => format!("{}:{x}", self.depth),
        }
    }

    /// A lattice basis, one row per generator.
    pub fn basis(&self, r: &TruncRing) -> LaurentMatrix {
        match self.point.map(|x| x.kind) {
            None => LaurentMatrix::identity(r),
            Some(PointKind::Affine(t)) => {
                LaurentMatrix::from_scaled(r, [[1, t as i64], [0, 1]], [[0, 0], [0, self.depth as i32]])
            }
            Some(PointKind::AtInf(s)) => {
                LaurentMatrix::from_scaled(r, [[s as i64, 1], [1, 0]], [[0, 0], [self.depth as i32, 0]])
            }
        }
    }

    /// The Howell form of the lattice modulo π^{r+1}.
    pub fn hermite_label(&self, p: u64, radius: u32) -> LambdaMatrix {
        let md = ppow(p, radius + 1) as u64;
        let pd = ppow(p, self.depth) as i64;
        let rows: Vec<Vec<i64>> = match self.point.map(|x| x.kind) {
            None => vec![vec![1, 0], vec![0, 1]],
            Some(PointKind::Affine(t)) => vec![vec![1, t as i64], vec![pd, 0], vec![0, pd]],
            Some(PointKind::AtInf(s)) => vec![vec![s as i64, 1], vec![pd, 0], vec![0, pd]],
        };
        LambdaMatrix::from_rows(md, 2, &rows).expect("two columns").howell_form()
    }
}

fn transpose(g: &LaurentMatrix) -> LaurentMatrix {
    LaurentMatrix::new([[g.e[0][0], g.e[1][0]], [g.e[0][1], g.e[1][1]]])
}

/// The vertex of the lattice spanned by the rows of `b`.
pub fn vertex_of_lattice(b: &LaurentMatrix) -> Result<TreeVertex> {
    let vals: Vec<i32> = b
        .e
        .iter()
        .flatten()
        .filter_map(PAdic::valuation)
        .collect();
    let content = *vals.iter().min().ok_or_else(|| Error::PrecisionExhausted("lattice basis is indeterminate".into()))?;
    let p = b.p();
    let scale = PAdic::from_int(p, 1, -content, 30);
    let s = |x: &PAdic| x.mul(&scale);
    let e = [[s(&b.e[0][0]), s(&b.e[0][1])], [s(&b.e[1][0]), s(&b.e[1][1])]];
    let m = LaurentMatrix::new(e);
    let d = m.det_val()?;
    if d < 0 {
        return Err(Error::Invalid("lattice basis after scaling is not integral".into()));
    }
    if d == 0 {
        return Ok(TreeVertex::root());
    }
    let row = (0..2)
        .find(|&i| e[i].iter().any(|x| x.valuation() == Some(0)))
        .ok_or_else(|| Error::PrecisionExhausted("no primitive row found".into()))?;
    let id = LaurentMatrix::new([[PAdic::from_int(p, 1, 0, 30), PAdic::zero(p, 30)], [PAdic::zero(p, 30), PAdic::from_int(p, 1, 0, 30)]]);
    let (pt, _) = act_coords(e[row][0], e[row][1], &id, d as u32)?;
    Ok(TreeVertex { depth: d as u32, point: Some(pt) })
}

/// g·v, i.e. the class of L_v·gᵀ.
pub fn act_on_vertex(v: &TreeVertex, g: &LaurentMatrix, r: &TruncRing) -> Result<TreeVertex> {
    vertex_of_lattice(&v.basis(r).mul(&transpose(g)))
}

#[derive(Debug, Clone)]
pub struct TreeBall {
    pub p: u64,
    pub radius: u32,
    pub vertices: Vec<TreeVertex>,
    /// (child, parent) index pairs.
    pub edges: Vec<(usize, usize)>,
    index: HashMap<TreeVertex, usize>,
    ring: TruncRing,
}

/// The ball of radius r about the root vertex; its first edge is the base
/// chamber between O² and O ⊕ πO.
pub fn bt_ball(p: u64, r: u32, precision: u32) -> Result<TreeBall> {
    if r == 0 {
        return Err(Error::Invalid("radius must be at least 1".into()));
    }
    if precision < r + 2 {
        return Err(Error::PrecisionExhausted(format!("radius {r} needs precision at least {}", r + 2)));
    }
    let mut vertices = vec![TreeVertex::root()];
    for d in 1..=r {
        vertices.extend(enumerate_p1(p, d).into_iter().map(|x| TreeVertex { depth: d, point: Some(x) }));
    }
    let index: HashMap<TreeVertex, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let edges = vertices
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.parent().map(|pv| (i, index[&pv])))
        .collect();
    Ok(TreeBall { p, radius: r, vertices, edges, index, ring: TruncRing::new(p, precision)? })
}

impl TreeBall {
    pub fn index_of(&self, v: &TreeVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn base_vertex(&self) -> TreeVertex {
        TreeVertex { depth: 1, point: Some(ProjPoint::zero(self.p, 1)) }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = HashSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Interior vertices have p+1 neighbours; boundary vertices are leaves.
    pub fn is_regular(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, v)| {
            let want = if v.depth == self.radius { 1 } else { self.p as usize + 1 };
            self.degree(i) == want
        })
    }

    /// Distinct vertices have distinct Hermite labels.
    pub fn labels_distinct(&self) -> bool {
        let labels: HashSet<LambdaMatrix> =
            self.vertices.iter().map(|v| v.hermite_label(self.p, self.radius)).collect();
        labels.len() == self.vertices.len()
    }

    pub fn act(&self, v: &TreeVertex, g: &LaurentMatrix) -> Result<TreeVertex> {
        act_on_vertex(v, g, &self.ring)
    }

    /// Stabilizer subgroups of the root, the base vertex and the base edge.
    pub fn facet_stabilizers(&self) -> Vec<(String, SubgroupSpec)> {
        vec![
            (TreeVertex::root().label(), SubgroupSpec::u(self.p, 1)),
            (self.base_vertex().label(), SubgroupSpec::uprime(self.p, 1)),
            (format!("{}--{}", TreeVertex::root().label(), self.base_vertex().label()), SubgroupSpec::gamma0(self.p, 1)),
        ]
    }

    /// The elements of SL₂(O/π^level) fixing the base edge.
    pub fn base_edge_stabilizer(&self, level: u32) -> Result<HashSet<IntMat>> {
        let r = TruncRing::new(self.p, level + 4)?;
        let root = TreeVertex::root();
        let base = self.base_vertex();
        let mut out = HashSet::new();
        for g in closure(&SubgroupSpec::u(self.p, level))? {
            let gl = g.to_laurent(&r);
            if act_on_vertex(&root, &gl, &r)? == root && act_on_vertex(&base, &gl, &r)? == base {
                out.insert(g);
            }
        }
        Ok(out)
    }

    pub fn base_edge_stabilizer_is_iwahori(&self, level: u32) -> Result<bool> {
        Ok(self.base_edge_stabilizer(level)? == closure(&SubgroupSpec::gamma0(self.p, level))?)
    }

    /// η swaps the two colour classes and SL₂(O) preserves them.
    pub fn colouring_check(&self) -> Result<bool> {
        let eta = LaurentMatrix::eta(&self.ring);
        let u = crate::padic::subgroup_generators(&SubgroupSpec::u(self.p, self.radius))?;
        for v in &self.vertices {
            if self.act(v, &eta)?.colour() == v.colour() {
                return Ok(false);
            }
            for g in &u {
                if self.act(v, g)?.colour() != v.colour() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn boundary(&self, n: u64) -> LambdaMatrix {
        let mut d = LambdaMatrix::zeros(n, self.edges.len(), self.vertices.len());
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            let (even, odd) = if self.vertices[a].colour() == 0 { (a, b) } else { (b, a) };
            d.set(k, even, 1 % n);
            d.set(k, odd, n - 1);
        }
        d
    }

    /// Edges in degree −1, vertices in degree 0, ∂e = even end − odd end.
    pub fn chain_complex(&self, n: u64) -> Result<BoundedComplex> {
        let (ce, cv) = (FgModule::free(n, self.edges.len()), FgModule::free(n, self.vertices.len()));
        let d = ModuleMap::new(ce.clone(), cv.clone(), self.boundary(n))?;
        BoundedComplex::new(-1, vec![ce, cv], vec![d])
    }

    /// The chain complex followed by the augmentation to Λ.
    pub fn augmented_complex(&self, n: u64) -> Result<BoundedComplex> {
        let (ce, cv) = (FgModule::free(n, self.edges.len()), FgModule::free(n, self.vertices.len()));
        let lam = FgModule::free(n, 1);
        let d = ModuleMap::new(ce.clone(), cv.clone(), self.boundary(n))?;
        let ones = vec![vec![1 % n]; self.vertices.len()];
        let aug = ModuleMap::new(cv.clone(), lam.clone(), LambdaMatrix::from_u64_rows(n, 1, &ones))?;
        BoundedComplex::new(-1, vec![ce, cv, lam], vec![d, aug])
    }

    /// (H₀, H₁) of the cellular chain complex.
    pub fn cellular_homology(&self, n: u64) -> Result<(FgModule, FgModule)> {
        let c = self.chain_complex(n)?;
        Ok((c.homology(0)?, c.homology(-1)?))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ball {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let colour = if v.colour() == 0 { "black" } else { "red" };
            let _ = writeln!(s, "  v{i} [label=\"{}\", color={colour}];", v.label());
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  v{b} -- v{a};");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ball_shape() {
        let b = bt_ball(2, 1, 6).unwrap();
        assert_eq!(b.vertices.len(), 4);
        assert_eq!(b.edges.len(), 3);
        assert!(b.is_tree() && b.is_regular() && b.labels_distinct());
    }

    #[test]
    fn eta_moves_root_to_base_vertex() {
        let b = bt_ball(3, 2, 8).unwrap();
        let eta = LaurentMatrix::eta(&b.ring);
        assert_eq!(b.act(&TreeVertex::root(), &eta).unwrap(), b.base_vertex());
        assert!(b.colouring_check().unwrap());
    }

    #[test]
    fn iwahori_stabilizes_base_edge() {
        let b = bt_ball(3, 1, 6).unwrap();
        assert!(b.base_edge_stabilizer_is_iwahori(2).unwrap());
        assert_eq!(b.base_edge_stabilizer(1).unwrap().len(), 6);
    }

    #[test]
    fn dot_export() {
        let dot = bt_ball(2, 1, 6).unwrap().to_dot();
        assert!(dot.starts_with("graph ball {"));
        assert_eq!(dot.matches("--").count(), 3);
    }
}
