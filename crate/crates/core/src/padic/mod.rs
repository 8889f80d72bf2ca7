//! Truncated O_E arithmetic, the finite-level projective line and subgroup orbits.

mod mat;
mod orbits;
mod p1;
mod subgroup;
mod trunc;

pub use mat::{IntMat, LaurentMatrix};
pub use orbits::{
    orbit_classification_check, orbit_count_formula, orbits, orbits_of, LevelReport, Orbit, OrbitReport, OrbitSummary,
};
pub use p1::{act_coords, enumerate_p1, p1_size, Cocycle, PointKind, ProjPoint};
pub use subgroup::{
    closure, subgroup_generators, unit_group_generators, verify_closure, SubgroupName, SubgroupSpec,
};
pub use trunc::{ppow, PAdic, TruncRing};
