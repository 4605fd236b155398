//! Cost tables for string and tree edit distance.

use std::collections::HashMap;

use crate::ext_int::{ExtInt, Fin, Top};
use crate::label::LabelId;

/// Either a concrete label or the gap symbol ε.
pub type Slot = Option<LabelId>;

/// A cost function `δ : (Σ ∪ {ε}) × (Σ ∪ {ε}) → ℤ ∪ {⊤}`.
///
/// The first coordinate is the left-hand (source) label, the second the
/// right-hand (target) label; `(ℓ, ε)` prices a deletion, `(ε, ℓ)` an
/// insertion. Explicit entries override the per-kind defaults. When
/// `equal_labels_free` is set, aligning two equal labels costs nothing
/// regardless of any entry.
#[derive(Clone, Debug)]
pub struct CostTable {
    entries: HashMap<(Slot, Slot), ExtInt>,
    substitution_default: ExtInt,
    deletion_default: ExtInt,
    insertion_default: ExtInt,
    equal_labels_free: bool,
}

impl CostTable {
    /// Unit costs: every substitution of distinct labels, insertion and
    /// deletion costs 1, equal labels align for free.
    pub fn unit() -> Self {
        CostTable {
            entries: HashMap::new(),
            substitution_default: Fin(1),
            deletion_default: Fin(1),
            insertion_default: Fin(1),
            equal_labels_free: true,
        }
    }

    /// All costs forbidden unless an entry says otherwise; gaps are free.
    ///
    /// This is the regime of the weighted lower-bound instances: the cost of
    /// an alignment is carried entirely by the aligned pairs.
    pub fn forbidden_with_free_gaps() -> Self {
        CostTable {
            entries: HashMap::new(),
            substitution_default: Top,
            deletion_default: ExtInt::ZERO,
            insertion_default: ExtInt::ZERO,
            equal_labels_free: true,
        }
    }

    pub fn with_defaults(substitution: ExtInt, deletion: ExtInt, insertion: ExtInt) -> Self {
        CostTable {
            entries: HashMap::new(),
            substitution_default: substitution,
            deletion_default: deletion,
            insertion_default: insertion,
            equal_labels_free: true,
        }
    }

    pub fn set_equal_labels_free(&mut self, free: bool) {
        self.equal_labels_free = free;
    }

    pub fn equal_labels_free(&self) -> bool {
        self.equal_labels_free
    }

    /// Sets `δ(a, b)` for a pair of labels.
    pub fn set(&mut self, a: LabelId, b: LabelId, cost: ExtInt) {
        self.entries.insert((Some(a), Some(b)), cost);
    }

    /// Sets the deletion cost `δ(a, ε)`.
    pub fn set_deletion(&mut self, a: LabelId, cost: ExtInt) {
        self.entries.insert((Some(a), None), cost);
    }

    /// Sets the insertion cost `δ(ε, b)`.
    pub fn set_insertion(&mut self, b: LabelId, cost: ExtInt) {
        self.entries.insert((None, Some(b)), cost);
    }

    /// Cost of aligning label `a` with label `b`.
    pub fn substitution(&self, a: LabelId, b: LabelId) -> ExtInt {
        if self.equal_labels_free && a == b {
            return ExtInt::ZERO;
        }
        self.lookup(Some(a), Some(b), self.substitution_default)
    }

    /// Cost of leaving label `a` unaligned on the left side.
    pub fn deletion(&self, a: LabelId) -> ExtInt {
        self.lookup(Some(a), None, self.deletion_default)
    }

    /// Cost of leaving label `b` unaligned on the right side.
    pub fn insertion(&self, b: LabelId) -> ExtInt {
        self.lookup(None, Some(b), self.insertion_default)
    }

    fn lookup(&self, a: Slot, b: Slot, default: ExtInt) -> ExtInt {
        self.entries.get(&(a, b)).copied().unwrap_or(default)
    }

    /// Iterates over the explicit entries (unordered).
    pub fn entries(&self) -> impl Iterator<Item = (&(Slot, Slot), &ExtInt)> {
        self.entries.iter()
    }

    /// Number of explicit entries.
    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }
}
