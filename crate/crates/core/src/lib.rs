//! Decremental reachability and approximate shortest paths on directed graphs.
//!
//! The crate maintains answers under edge deletions and weight increases:
//! Even-Shiloach trees, path unions, hub-and-center hierarchies for s-t
//! reachability and (1+eps)-approximate s-t distances, single-source and
//! strongly-connected-component reductions, and a dense single-source
//! variant built on approximate path unions. [`oracle`] holds independent
//! static recomputations, and [`harness`] replays traces and checks answers.

pub mod approx_path_union;
pub mod approx_sp;
pub mod dense_ssr;
pub mod error;
pub mod es_tree;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod path_union;
pub mod reductions;
pub mod sampling;
pub mod scale;
pub mod schedule;
pub mod st_reach;

pub use error::{Error, GraphError, Result};
pub use graph::{DecrementalGraph, EdgeId, GraphView, NodeId, NodeSet, Update, UpdateKind, INF};
