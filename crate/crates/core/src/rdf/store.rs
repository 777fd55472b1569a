use std::sync::{Arc, RwLock};

use super::{parse_turtle, Graph, ParseError};

/// Single-writer, many-reader holder of an asserted graph.
///
/// Readers take an `Arc` snapshot and never observe a partially applied write: imports are
/// parsed into a scratch graph before the write lock is taken, and writers mutate a private
/// copy whenever a snapshot is still shared.
#[derive(Debug, Default)]
pub struct SharedStore {
    current: RwLock<Arc<Graph>>,
}

impl SharedStore {
    pub fn new(graph: Graph) -> Self {
        SharedStore { current: RwLock::new(Arc::new(graph)) }
    }

    pub fn snapshot(&self) -> Arc<Graph> {
        self.current.read().expect("store lock poisoned").clone()
    }

    pub fn replace(&self, graph: Graph) {
        *self.current.write().expect("store lock poisoned") = Arc::new(graph);
    }

    /// Parses Turtle and merges it; returns the number of new triples.
    pub fn import_turtle(&self, text: &str) -> Result<usize, ParseError> {
        let parsed = parse_turtle(text)?;
        Ok(self.write(|g| g.merge(&parsed)))
    }

    pub fn write<R>(&self, f: impl FnOnce(&mut Graph) -> R) -> R {
        let mut guard = self.current.write().expect("store lock poisoned");
        f(Arc::make_mut(&mut guard))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshots_are_isolated_from_later_writes() {
        let store = SharedStore::default();
        store.import_turtle("plod:a plod:b plod:c .").unwrap();
        let before = store.snapshot();
        store.import_turtle("plod:a plod:b plod:d .").unwrap();
        assert_eq!(before.len(), 1);
        assert_eq!(store.snapshot().len(), 2);
    }

    #[test]
    fn failed_import_leaves_store_untouched() {
        let store = SharedStore::default();
        store.import_turtle("plod:a plod:b plod:c .").unwrap();
        assert!(store.import_turtle("plod:x plod:y plod:z .\nplod:broken").is_err());
        assert_eq!(store.snapshot().len(), 1);
    }
}
