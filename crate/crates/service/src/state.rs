use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use ciro_core::rdf::{Graph, Layers};
use ciro_core::reasoner::{classify_all, Classification};
use ciro_core::vocab::Vocabulary;

use crate::error::ApiError;

/// What a reader sees: the asserted graph and, if `/reason` ran since the last write, the
/// inference layer computed from exactly that graph.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub asserted: Arc<Graph>,
    pub classification: Option<Arc<Classification>>,
}

impl Snapshot {
    pub fn layers(&self) -> Layers<'_> {
        Layers::new(&self.asserted, self.classification.as_ref().map(|c| &c.inferred))
    }

    pub fn require_classification(&self) -> Result<&Classification, ApiError> {
        self.classification
            .as_deref()
            .ok_or_else(|| ApiError::conflict("not-reasoned", "no inference layer; POST /reason first"))
    }
}

#[derive(Debug)]
pub struct AppState {
    current: RwLock<Snapshot>,
    pub vocab: Arc<Vocabulary>,
    /// Where `POST /save` writes the asserted graph.
    pub store_path: Option<PathBuf>,
    /// Built explorer bundle served for unmatched GET paths.
    pub ui_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(graph: Graph, vocab: Vocabulary) -> Self {
        AppState {
            current: RwLock::new(Snapshot { asserted: Arc::new(graph), classification: None }),
            vocab: Arc::new(vocab),
            store_path: None,
            ui_dir: None,
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        self.current.read().expect("state lock poisoned").clone()
    }

    /// Applies a write to the asserted graph and drops the inference layer.
    pub fn write<R>(&self, f: impl FnOnce(&mut Graph) -> R) -> R {
        let mut guard = self.current.write().expect("state lock poisoned");
        guard.classification = None;
        f(Arc::make_mut(&mut guard.asserted))
    }

    /// Classifies a snapshot outside the lock and installs the result only if no write landed
    /// meanwhile; otherwise classifies the newer graph.
    pub fn reason(&self) -> Result<Arc<Classification>, ApiError> {
        loop {
            let snap = self.snapshot();
            if snap.asserted.is_empty() {
                return Err(ApiError::conflict("empty-store", "nothing to reason over; import data first"));
            }
            let c = Arc::new(classify_all(&snap.asserted, &self.vocab));
            let mut guard = self.current.write().expect("state lock poisoned");
            if Arc::ptr_eq(&guard.asserted, &snap.asserted) {
                guard.classification = Some(c.clone());
                return Ok(c);
            }
        }
    }
}
