//! Exact linear algebra over Λ = Z/n.

pub mod brute;
mod complex;
mod matrix;
mod module;
mod ring;
mod snf;

pub use complex::BoundedComplex;
pub use matrix::{unit_normalizer, LambdaMatrix};
pub use module::{find_isomorphism, subquotient_homology, FgModule, ModuleMap};
pub use ring::{inv_mod, is_prime, make_ring, make_ring_auto, pow_mod, xgcd, CoeffRing};
pub use snf::{smith_form, Snf};

/// Howell canonical form of the row span.
pub fn howell_form(m: &LambdaMatrix) -> LambdaMatrix {
    m.howell_form()
}

/// Kernel of a well-defined map.
pub fn kernel(f: &ModuleMap) -> FgModule {
    f.kernel()
}

/// Homology of a complex at degree k.
pub fn homology(c: &BoundedComplex, k: i32) -> crate::Result<FgModule> {
    c.homology(k)
}

/// Invariant factors of a module.
pub fn iso_class(m: &FgModule) -> Vec<u64> {
    m.iso_class()
}
