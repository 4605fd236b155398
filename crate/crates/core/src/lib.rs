//! Exact solvers, gadget builders and online engines for dynamic tree edit
//! distance, RNA folding and Dyck edit distance experiments.
//!
//! Everything is built for desk-scale verification: the lower-bound instance
//! families are constructed exactly, their claimed identities are checked with
//! exact integer arithmetic, and each solver is certified against an
//! independent brute-force oracle.

pub mod alignment;
pub mod cliques;
pub mod cost;
pub mod engine;
pub mod ext_int;
pub mod folding;
pub mod gadgets;
pub mod graph;
pub mod label;
pub mod parsing;
pub mod string_ed;
pub mod ted;
pub mod tree;
pub mod uted;
pub mod wted;

pub use alignment::{alignment_cost, validate_alignment, AlignmentViolation, TreeAlignment};
pub use cost::CostTable;
pub use ext_int::{ExtInt, Fin, Top};
pub use graph::Graph;
pub use label::{LabelId, LabelRegistry};
pub use tree::{path_gadget, NodeId, Tree, UpdateOp};
