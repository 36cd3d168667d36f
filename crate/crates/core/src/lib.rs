//! Approximation algorithms for the Steiner multicycle problem.
//!
//! Given a complete (di)graph with metric weights and a partition of the
//! vertices into terminal groups, the goal is a minimum-cost set of
//! vertex-disjoint cycles such that every group lies inside one cycle.
//!
//! The crate provides three approximation pipelines
//!
//! * [`metric::approx_metric`]: survivable network design + minimum T-join,
//!   factor 3 on metric instances;
//! * [`onetwo::approx_onetwo`]: special 2-factor + cycle joining, factor
//!   11/9 on {1,2} instances (7/6 when every group has at least 4 vertices);
//! * [`asymmetric::approx_asymmetric`]: repeated directed 2-factors on
//!   representatives, factor O(log n) on asymmetric metric instances;
//!
//! together with the matching/2-factor/LP machinery they need and exact
//! desk-scale oracles in [`oracle`].
//!
//! The crate is `no_std` (it needs `alloc`). All costs are exact rationals.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymmetric;
pub mod cover;
pub mod error;
pub mod factor;
pub mod forest;
pub mod format;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod metric;
pub mod onetwo;
pub mod oracle;
pub mod snd;

pub use cover::{Cycle, CycleCover, FeasibilityReport, Violation};
pub use error::{Error, Result};
pub use instance::{Instance, RawInstance, Rational, WeightClass};
