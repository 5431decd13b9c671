//! Neighborhood information entropy of social ties.
//!
//! A node's information sequence lists its friends and its friends' friends;
//! the entropy of that sequence measures how diverse its sources are. This
//! crate computes how much entropy a single tie adds or removes, sweeps that
//! quantity over whole networks, and relates it to common-friend counts,
//! clustering and tie strength on synthetic and real edge lists.

pub mod entropy;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod io;
pub mod plot;

pub use entropy::{
    delta_on_add_exact, delta_on_add_incremental, delta_on_remove, delta_taylor_approx,
    entropy, info_sequence, monotonicity_family, EntropyDelta, FamilyMember, InfoSequence,
};
pub use error::{Error, Result};
pub use experiments::{
    aggregate_sweep, edge_sweep, edge_sweep_sampled, positiveness, strength_cdf,
    tau_vs_clustering_curve, CurvePoint, CurveSpec, PositivenessReport, StrengthCdf,
    SweepAggregate, SweepRecord,
};
pub use generators::{
    gen_ba, gen_cnnr, gen_sw, generate, tune_clustering, GenParams, Model, TuneOutcome,
    TuneParams,
};
pub use graph::{EdgeRef, Graph, NodeId};
