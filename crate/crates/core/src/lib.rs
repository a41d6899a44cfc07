//! Multilevel k-way graph partitioning for large, irregular networks.
//!
//! The graph hierarchy is built by contracting size-constrained label
//! propagation clusterings instead of matchings, which shrinks scale-free
//! graphs far more aggressively. Label propagation also serves as the local
//! search during uncoarsening. Optional extensions: degree-based node
//! ordering, ensemble (overlay) clusterings, iterated V-cycles, additional
//! imbalance on coarse levels and active-node rounds.
//!
//! ```
//! use clusterpart::{partition, PartitionConfig};
//! use clusterpart::testkit::{generate, GenSpec};
//!
//! let g = generate(&GenSpec::PreferentialAttachment { n: 2000, degree: 3, seed: 1 }).unwrap();
//! let cfg = PartitionConfig::new(4);
//! let (p, report) = partition(&g, &cfg).unwrap();
//! assert!(p.is_feasible());
//! assert_eq!(report.cut, clusterpart::graph::edge_cut(&g, p.labels()));
//! ```

pub mod config;
pub mod ensemble;
pub mod error;
pub mod graph;
pub mod initpart;
pub mod lpa;
pub mod multilevel;
pub mod report;
pub mod seed;
pub mod testkit;

pub use config::PartitionConfig;
pub use error::{Error, Result};
pub use graph::{BlockId, Clustering, Graph, NodeId, Partition, Weight};
pub use multilevel::{partition, Hierarchy};
pub use report::PartitionReport;
