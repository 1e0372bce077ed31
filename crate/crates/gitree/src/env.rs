//! Interpretation environments: finite maps from names to trees.

use std::collections::{BTreeSet, HashMap};

use crate::tree::ITree;

/// Environment threaded through the denotation functions. Cloned on
/// extension; environments stay small.
#[derive(Clone, Default)]
pub struct Env {
    map: HashMap<String, ITree>,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn lookup(&self, name: &str) -> Option<ITree> {
        self.map.get(name).cloned()
    }

    pub fn extend(&self, name: impl Into<String>, tree: ITree) -> Env {
        let mut map = self.map.clone();
        map.insert(name.into(), tree);
        Env { map }
    }

    /// Keeps only the given names; used to split environments at binary
    /// nodes the way the typing derivation dictates.
    pub fn restrict(&self, names: &BTreeSet<String>) -> Env {
        Env {
            map: self
                .map
                .iter()
                .filter(|(k, _)| names.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }
}
