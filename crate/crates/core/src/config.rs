//! Partitioner configuration and named presets.
//!
//! Presets follow a small naming algebra: a base (`fast`, or `fastv` for
//! three V-cycles) followed by any combination of the suffixes `-b`
//! (additional imbalance on coarse levels), `-e` (ensemble clusterings),
//! `-a` (active nodes during coarsening) and `-r` (random node ordering),
//! e.g. `fastv-b-e`. `eco-equivalent-off` switches every extension off.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lpa::{NodeOrdering, TieBreaking};

/// Default allowed imbalance.
pub const DEFAULT_EPSILON: f64 = 0.03;
/// Additional coarse-level imbalance used by the `-b` presets.
pub const DEFAULT_DELTA: f64 = 0.12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub k: usize,
    pub epsilon: f64,
    /// Label propagation rounds during uncoarsening.
    pub lpa_rounds: usize,
    /// Label propagation rounds per clustering during coarsening.
    pub coarsen_rounds: usize,
    /// Cluster size bound is `l_max / cluster_factor`.
    pub cluster_factor: u64,
    /// Extra imbalance budget on coarse levels of the first cycle; 0 disables.
    pub delta: f64,
    pub vcycles: usize,
    pub ensemble: bool,
    pub active_coarsening: bool,
    pub active_refinement: bool,
    pub ordering: NodeOrdering,
    pub tie_breaking: TieBreaking,
    pub convergence_fraction: f64,
    /// Region-growing restarts per bisection of the coarsest graph.
    pub initial_restarts: usize,
    pub seed: u64,
    pub preset: String,
}

impl PartitionConfig {
    /// The `fast` preset for `k` blocks.
    pub fn new(k: usize) -> Self {
        Self {
            k,
            epsilon: DEFAULT_EPSILON,
            lpa_rounds: 10,
            coarsen_rounds: 10,
            cluster_factor: 18,
            delta: 0.0,
            vcycles: 1,
            ensemble: false,
            active_coarsening: false,
            active_refinement: true,
            ordering: NodeOrdering::DegreeIncreasing,
            tie_breaking: TieBreaking::Random,
            convergence_fraction: 0.05,
            initial_restarts: 4,
            seed: 0,
            preset: "fast".into(),
        }
    }

    pub fn from_preset(name: &str, k: usize) -> Result<Self> {
        let mut cfg = Self::new(k);
        cfg.preset = name.to_string();
        if name == "eco-equivalent-off" {
            cfg.ordering = NodeOrdering::Random;
            cfg.active_refinement = false;
            return Ok(cfg);
        }
        let mut parts = name.split('-');
        match parts.next() {
            Some("fast") => {}
            Some("fastv") => cfg.vcycles = 3,
            _ => return Err(Error::InvalidConfig(format!("unknown preset '{name}'"))),
        }
        for flag in parts {
            match flag {
                "b" => cfg.delta = DEFAULT_DELTA,
                "e" => cfg.ensemble = true,
                "a" => cfg.active_coarsening = true,
                "r" => cfg.ordering = NodeOrdering::Random,
                _ => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown preset suffix '-{flag}' in '{name}'"
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.k < 2 {
            return fail("k must be at least 2");
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return fail("imbalance must be a finite value >= 0");
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return fail("delta must be a finite value >= 0");
        }
        if self.cluster_factor == 0 {
            return fail("cluster factor must be at least 1");
        }
        if self.vcycles == 0 {
            return fail("at least one V-cycle is required");
        }
        if self.initial_restarts == 0 {
            return fail("at least one initial partitioning attempt is required");
        }
        if !(0.0..=1.0).contains(&self.convergence_fraction) {
            return fail("convergence fraction must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Names accepted by [`PartitionConfig::from_preset`] without suffix combinations.
pub const PRESETS: &[&str] = &["fast", "fastv", "fast-b", "fast-e", "fast-a", "eco-equivalent-off"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_preset_is_valid() {
        for name in PRESETS {
            let cfg = PartitionConfig::from_preset(name, 4).unwrap();
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn suffix_algebra() {
        let cfg = PartitionConfig::from_preset("fastv-b-e-a-r", 8).unwrap();
        assert_eq!(cfg.vcycles, 3);
        assert_eq!(cfg.delta, DEFAULT_DELTA);
        assert!(cfg.ensemble && cfg.active_coarsening && cfg.active_refinement);
        assert_eq!(cfg.ordering, NodeOrdering::Random);

        let fast = PartitionConfig::from_preset("fast", 2).unwrap();
        assert_eq!(fast.vcycles, 1);
        assert_eq!(fast.lpa_rounds, 10);
        assert_eq!(fast.cluster_factor, 18);
        assert!(!fast.ensemble && !fast.active_coarsening);
        assert_eq!(fast.ordering, NodeOrdering::DegreeIncreasing);

        assert!(PartitionConfig::from_preset("strong", 2).is_err());
        assert!(PartitionConfig::from_preset("fast-x", 2).is_err());
    }

    #[test]
    fn validation() {
        assert!(PartitionConfig::new(1).validate().is_err());
        let mut cfg = PartitionConfig::new(2);
        cfg.epsilon = -0.1;
        assert!(cfg.validate().is_err());
        cfg.epsilon = 0.0;
        cfg.vcycles = 0;
        assert!(cfg.validate().is_err());
    }
}
