use std::collections::BTreeSet;

use m0n_core::{Budget, ChowRing, OrderConvention, ReductionTable};

use crate::cache::{relation_hash, CacheKey, TableCache};

/// A ring for one `n`, with tables drawn from the cache when possible.
pub struct Session {
    pub n: usize,
    pub conv: OrderConvention,
    pub ring: ChowRing,
    pub budget: Budget,
    cache: TableCache,
    relations: Option<String>,
    ready: BTreeSet<usize>,
}

impl Session {
    pub fn new(n: usize, conv: OrderConvention, cache: TableCache, budget: Budget) -> anyhow::Result<Self> {
        let ring = ChowRing::new(n, conv)?;
        let relations = if cache.is_enabled() { Some(relation_hash(n)?) } else { None };
        Ok(Session { n, conv, ring, budget, cache, relations, ready: BTreeSet::new() })
    }

    pub fn top(&self) -> usize {
        self.n - 3
    }

    pub fn table(&mut self, d: usize) -> anyhow::Result<&ReductionTable> {
        if !self.ready.contains(&d) {
            self.budget.check("building reduction tables")?;
            let key = self.relations.clone().map(|relations| CacheKey { n: self.n, d, conv: self.conv, relations });
            let cached = key.as_ref().and_then(|k| self.cache.load(k));
            match cached {
                Some(t) => self.ring.install(t)?,
                None => {
                    let t = self.ring.table_within(d, &self.budget)?;
                    if let Some(k) = &key {
                        self.cache.store(k, t);
                    }
                }
            }
            self.ready.insert(d);
        }
        Ok(self.ring.table(d)?)
    }

    pub fn prepare(&mut self, degrees: impl IntoIterator<Item = usize>) -> anyhow::Result<()> {
        for d in degrees {
            self.table(d)?;
        }
        Ok(())
    }
}
