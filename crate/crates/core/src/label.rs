//! Interned node labels.
//!
//! The instance alphabets are parameterized families (`a_17`, `b'_3`, …), so
//! trees and gadget strings carry small integer ids and a registry maps them
//! back to symbolic names for serialization and debugging.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// An interned label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelId(pub u32);

/// Bidirectional map between symbolic label names and [`LabelId`]s.
#[derive(Clone, Debug, Default)]
pub struct LabelRegistry {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl LabelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`, returning the existing id if already present.
    pub fn intern(&mut self, name: &str) -> LabelId {
        if let Some(&id) = self.index.get(name) {
            return LabelId(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        LabelId(id)
    }

    /// Looks up an already-interned name.
    pub fn get(&self, name: &str) -> Option<LabelId> {
        self.index.get(name).copied().map(LabelId)
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
