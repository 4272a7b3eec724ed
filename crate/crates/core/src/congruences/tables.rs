use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::series::{eta_product, eta_product_mod, EtaProductSpec, IntSeries, ModSeries};

/// Default hard ceiling on the truncation order of any table.
pub const DEFAULT_ORDER_CEILING: usize = 20_000;

type Slot<V> = Arc<Mutex<Option<Arc<V>>>>;

/// One lock per key, so distinct tables build in parallel while each key is
/// built at most once per requested order.
struct Slots<K, V>(Mutex<HashMap<K, Slot<V>>>);

impl<K: Hash + Eq + Clone, V> Slots<K, V> {
    fn new() -> Self {
        Slots(Mutex::new(HashMap::new()))
    }

    fn get_or_build(
        &self,
        key: &K,
        order: usize,
        order_of: impl Fn(&V) -> usize,
        build: impl FnOnce() -> Result<V>,
    ) -> Result<Arc<V>> {
        let slot = self.0.lock().unwrap().entry(key.clone()).or_default().clone();
        let mut guard = slot.lock().unwrap();
        if let Some(v) = guard.as_ref() {
            if order_of(v) >= order {
                return Ok(v.clone());
            }
        }
        let v = Arc::new(build()?);
        *guard = Some(v.clone());
        Ok(v)
    }
}

/// Shared cache of exact and modular eta expansions used by the checks.
///
/// Returned series may be longer than requested.
pub struct Tables {
    ceiling: usize,
    powers: Mutex<BTreeMap<i64, Arc<IntSeries>>>,
    exact: Slots<EtaProductSpec, IntSeries>,
    modular: Slots<(EtaProductSpec, u64), ModSeries>,
}

impl Default for Tables {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER_CEILING)
    }
}

impl Tables {
    pub fn new(ceiling: usize) -> Self {
        Tables {
            ceiling,
            powers: Mutex::new(BTreeMap::new()),
            exact: Slots::new(),
            modular: Slots::new(),
        }
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    pub fn check_order(&self, order: usize) -> Result<()> {
        if order > self.ceiling {
            Err(Error::OrderCeiling { order, ceiling: self.ceiling })
        } else {
            Ok(())
        }
    }

    /// `∏(1 − q^m)^k`, so index `n` holds `τ_k(n+1)`.
    ///
    /// Powers are built as a chain of single sparse passes from the nearest
    /// cached power of the same sign, and every intermediate power is kept.
    pub fn eta_power(&self, k: i64, order: usize) -> Result<Arc<IntSeries>> {
        self.check_order(order)?;
        if k == 0 {
            return Ok(Arc::new(IntSeries::one(order)));
        }
        let mut cache = self.powers.lock().unwrap();
        let usable = |s: &Arc<IntSeries>| s.order() >= order;
        if let Some(s) = cache.get(&k).filter(|s| usable(s)) {
            return Ok(s.clone());
        }
        let step = k.signum();
        let mut start = 0;
        let mut series = IntSeries::one(order);
        let mut j = k - step;
        while j != 0 {
            if let Some(s) = cache.get(&j).filter(|s| usable(s)) {
                start = j;
                series = s.truncate(order);
                break;
            }
            j -= step;
        }
        let mut j = start;
        while j != k {
            j += step;
            if step > 0 {
                series.mul_eta_factor(1);
            } else {
                series.div_eta_factor(1);
            }
            let better = cache.get(&j).is_none_or(|s| s.order() < order);
            if better {
                cache.insert(j, Arc::new(series.clone()));
            }
        }
        Ok(cache[&k].clone())
    }

    pub fn exact(&self, spec: &EtaProductSpec, order: usize) -> Result<Arc<IntSeries>> {
        self.check_order(order)?;
        self.exact.get_or_build(spec, order, IntSeries::order, || Ok(eta_product(spec, order)))
    }

    pub fn modular(&self, spec: &EtaProductSpec, order: usize, m: u64) -> Result<Arc<ModSeries>> {
        self.check_order(order)?;
        self.modular
            .get_or_build(&(spec.clone(), m), order, ModSeries::order, || eta_product_mod(spec, order, m))
    }

    /// `R_t(0), …` to at least the given order.
    pub fn regular(&self, t: u64, order: usize) -> Result<Arc<IntSeries>> {
        if t < 2 {
            return Err(Error::invalid("t-regular partitions need t >= 2"));
        }
        self.exact(&EtaProductSpec::regular(t)?, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn power_chain_matches_direct_expansion() {
        let tables = Tables::new(1000);
        let t5 = tables.eta_power(5, 60).unwrap();
        let t9 = tables.eta_power(9, 80).unwrap();
        assert_eq!(*t5, eta_product(&EtaProductSpec::eta_power(5), 60));
        assert_eq!(*t9, eta_product(&EtaProductSpec::eta_power(9), 80));
        let p = tables.eta_power(-3, 50).unwrap();
        assert_eq!(*p, eta_product(&EtaProductSpec::eta_power(-3), 50));
        // cached lower powers were rebuilt at the larger order
        assert!(tables.eta_power(5, 80).unwrap().order() >= 80);
        assert_eq!(tables.eta_power(24, 5).unwrap()[1], BigInt::from(-24));
    }

    #[test]
    fn ceiling_is_enforced() {
        let tables = Tables::new(100);
        assert_eq!(
            tables.eta_power(24, 101).unwrap_err(),
            Error::OrderCeiling { order: 101, ceiling: 100 }
        );
        assert!(tables.regular(9, 100).is_ok());
        assert!(tables.modular(&EtaProductSpec::eta_power(7), 500, 7).is_err());
    }
}
