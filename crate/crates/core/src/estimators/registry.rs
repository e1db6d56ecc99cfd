use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BwEstimator, ConcertoEstimator, EfEstimator, Estimator};
use crate::error::{Error, Result};

/// Name → estimator map. Build it once at startup and share it read-only.
#[derive(Clone, Default)]
pub struct EstimatorRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Estimator>>,
}

impl EstimatorRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `concerto`, `bw` and `ef`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        for est in [
            Arc::new(ConcertoEstimator) as Arc<dyn Estimator>,
            Arc::new(BwEstimator),
            Arc::new(EfEstimator),
        ] {
            reg.register(est).expect("builtin names are distinct");
        }
        reg
    }

    pub fn register(&mut self, estimator: Arc<dyn Estimator>) -> Result<()> {
        let name = estimator.name();
        if self.entries.contains_key(name) {
            return Err(Error::Configuration(format!("estimator `{name}` is already registered")));
        }
        self.entries.insert(name, estimator);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<Arc<dyn Estimator>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownEstimator(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl std::fmt::Debug for EstimatorRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}
