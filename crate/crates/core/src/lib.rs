//! How much the interaction graph of a Boolean network can change when the
//! network is relabeled.
//!
//! A network is a function `f: {0,1}^n -> {0,1}^n`; its interaction graph
//! has an arc `j -> i` whenever output component `i` depends on input
//! component `j`. Relabeling the configuration space by a permutation `pi`
//! replaces `f` with `pi . f . pi^-1` and usually changes the graph. This
//! crate works with the family of graphs reachable that way:
//!
//! - [`witness`] builds, for any network other than a constant or the
//!   identity with at least 5 components, a relabeling whose graph is the
//!   complete digraph with all `n^2` arcs, and verifies it.
//! - [`nice`] decides when some relabeling can drop an arc between two
//!   distinct vertices, through parity certificates (nice sets), in both
//!   directions.
//! - [`sparse`] exhibits networks whose every relabeling keeps at least
//!   `n^2 / 9` arcs, backed by the edge-isoperimetric inequality on the
//!   hypercube.
//! - [`enumerate`] computes the exact family for up to 3 components,
//!   hosts the exhaustively verified two-component catalog, and samples
//!   beyond that.
//! - [`checks`] bundles the verification sweeps behind pass/fail reports.
//!
//! Configurations pack into integers with component `i + 1` at bit `i`;
//! all public Rust APIs are 0-based, while the text, JSON and DOT formats
//! label components `1..n`.

pub mod checks;
pub mod config;
pub mod digraph;
pub mod dynamics;
pub mod enumerate;
pub mod error;
pub mod network;
pub mod nice;
pub mod perm;
pub mod rng;
pub mod sparse;
pub mod subset;
pub mod witness;

pub use config::{configs, Config, MAX_COMPONENTS};
pub use digraph::Digraph;
pub use dynamics::{is_independent_set, CycleDecomposition};
pub use error::{Error, Result};
pub use network::Network;
pub use nice::{
    find_nice_set, is_closed_by, is_nice, missing_arc_network, nice_from_missing_arc,
    AbcSignature, NiceSetReport,
};
pub use perm::{conjugate, find_isomorphism, PartialPerm, Perm};
pub use subset::CubeSubset;
pub use witness::{
    build_x_sets, complete_witness, complete_witness_best_effort, witness_from_fixed_points,
    witness_from_independent_set, witness_from_limit_cycles, Route, WitnessResult,
};
