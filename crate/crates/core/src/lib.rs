//! Edgewise Balanced Forman (BF) and Ollivier–Ricci (OR) curvature on simple
//! graphs, together with closed-form bounds that transfer information from
//! one curvature to the other without solving a transport problem.
//!
//! * [`graph`]: immutable CSR graphs and edge-list I/O.
//! * [`generators`]: seeded synthetic graph families.
//! * [`local`]: two-hop statistics, laziness parameters, comparison moduli.
//! * [`matching`]: Hopcroft–Karp bipartite matching.
//! * [`transport`]: exact W1 and OR curvature, used as the ground truth.
//! * [`bounds`]: BF curvature and OR envelopes.
//! * [`transfer`]: the four transfer moduli.
//! * [`analysis`]: per-edge reports, summaries, audit, emission.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod generators;
pub mod graph;
pub mod local;
pub mod matching;
pub mod transfer;
pub mod transport;

pub use error::{Error, Result};
pub use graph::{EdgeKey, Graph, Vertex};
pub use local::AlphaProfile;
