//! Runtime guards for the exhaustive scans.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier accepted for verification and analysis.
    pub max_carrier: usize,
    /// Largest arity accepted for either operation.
    pub max_arity: usize,
    /// Carriers larger than this switch hyperideal enumeration from the raw
    /// subset scan to generator closures.
    pub raw_subset_scan_max: usize,
    /// Cap on the raw tuple space scanned by the (k,n)-absorbing predicate.
    pub tuple_cap: u128,
    /// Cap on `|target|^|source|` when enumerating maps between structures.
    pub map_cap: u128,
    /// Cap on table candidates visited by structure enumeration.
    pub enum_candidate_cap: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 8,
            max_arity: 4,
            raw_subset_scan_max: 12,
            tuple_cap: 10_000_000,
            map_cap: 1_000_000,
            enum_candidate_cap: 50_000_000,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `KMN_MAX_CARRIER`, `KMN_MAX_ARITY`,
    /// `KMN_TUPLE_CAP`, `KMN_MAP_CAP` and `KMN_ENUM_CAP` when set.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<u128>().ok());
        if let Some(v) = read("KMN_MAX_CARRIER") {
            l.max_carrier = v as usize;
        }
        if let Some(v) = read("KMN_MAX_ARITY") {
            l.max_arity = v as usize;
        }
        if let Some(v) = read("KMN_TUPLE_CAP") {
            l.tuple_cap = v;
        }
        if let Some(v) = read("KMN_MAP_CAP") {
            l.map_cap = v;
        }
        if let Some(v) = read("KMN_ENUM_CAP") {
            l.enum_candidate_cap = v;
        }
        l
    }

    /// No guards at all.
    pub fn unlimited() -> Self {
        Limits {
            max_carrier: crate::elem::MAX_CARRIER,
            max_arity: usize::MAX,
            raw_subset_scan_max: 12,
            tuple_cap: u128::MAX,
            map_cap: u128::MAX,
            enum_candidate_cap: u128::MAX,
        }
    }

    pub fn check_shape(&self, size: usize, m: usize, n: usize) -> Result<()> {
        if size > self.max_carrier {
            return Err(Error::CapExceeded {
                what: "carrier size",
                size: size as u128,
                cap: self.max_carrier as u128,
            });
        }
        let arity = m.max(n);
        if arity > self.max_arity {
            return Err(Error::CapExceeded {
                what: "arity",
                size: arity as u128,
                cap: self.max_arity as u128,
            });
        }
        Ok(())
    }
}

/// `base^exp`, saturating.
pub fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
