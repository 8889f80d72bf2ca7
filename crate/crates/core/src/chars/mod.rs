//! Unramified characters and the symbolic gluing calculus.

pub mod engine;
pub mod jacquet;
pub mod tables;
pub mod unram;

pub use engine::*;
pub use jacquet::{is_generic, jacquet_symbolic, ts_homology, JacquetSymbol};
pub use tables::{InputCohomologyTable, Slope, TateRuleTable};
pub use unram::{CharPair, Gb2Character, TorusChar, UnramChar};
