//! Scored context-free parsing: static closure, per-segment query engines,
//! and the online orchestrator with its folding adapters.

pub mod closure;
pub mod grammar;
pub mod online;
pub mod segment;
pub mod semiring;

pub use closure::{static_scored_parse, ClosureMatrix};
pub use grammar::{dyck_edit_grammar, rna_unpaired_grammar, GrammarError, ScoredGrammar};
pub use online::{online_dyck, online_parse, online_rna, partition_sizes, OnlineParser};
pub use segment::{SegmentEngine, SegmentError};
pub use semiring::{FunctionMap, MinPlusOmvBackend, NaiveOmvBackend};
