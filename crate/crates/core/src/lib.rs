//! Macroscopic one-shot coordination of first-mode (feed-in) and last-mode
//! (feed-out) feeder services around a single interchange node.
//!
//! The crate is organised bottom-up:
//!
//! * [`network`] and [`instance`]: the directed road graph and the instance
//!   document it is loaded from;
//! * [`routes`]: exhaustive time-window route (walk) enumeration, leg
//!   decomposition, pickup / drop-off times and the graph-reversal mapping;
//! * [`pricing`]: best-alternate-transport model, maximum viable prices and
//!   the viability thresholds on the cost factor;
//! * [`reduction`]: offline, demand-independent route elimination;
//! * [`lp`]: a two-phase primal simplex (floating point) plus an exact
//!   rational reference solver;
//! * [`problems`]: the feed-in, supply-optimization and feed-out linear
//!   programs, closed-form maximum profits and optimality diagnostics;
//! * [`oracle`]: seeded instance generation and brute-force reference solves;
//! * [`cli`]: the batch front end behind the `feeder` binary.

pub mod cli;
pub mod error;
pub mod instance;
pub mod lp;
pub mod network;
pub mod oracle;
pub mod output;
pub mod pricing;
pub mod problems;
pub mod reduction;
pub mod routes;

pub use error::{FeederError, Result};
pub use instance::{load_instance, load_network, Instance, InstanceDocument, PriceModel};
pub use network::{Edge, Network, NodeId};
pub use pricing::{AltEntry, AltTransport, PriceTable, TuplePrice};
pub use problems::{FeedInScenario, FeedOutScenario, FlowSolution, Form, ProblemKind};
pub use routes::{Direction, Leg, Route, RouteSet};

/// Slack applied when comparing accumulated travel times against a time
/// window, so that sums of decimal edge times do not drop borderline walks.
pub const TIME_EPS: f64 = 1e-9;
