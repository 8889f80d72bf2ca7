//! The Bruhat–Tits tree of SL₂(E) and smooth SL₂(E)-(co)homology.

pub mod ss;
pub mod tree;

pub use ss::{ps1_acyclicity_check, sl2_cohomology, sl2_homology, ss_complex, Ps1Report, Sl2Cohomology, Sl2Homology, SsComplex};
pub use tree::{act_on_vertex, bt_ball, vertex_of_lattice, TreeBall, TreeVertex};
