//! Time-window route enumeration and leg structure.
//!
//! A route is a walk in the network. Feed-in routes end at the interchange,
//! feed-out routes start there. A route is cut into legs at every arrival at
//! the interchange; a trailing segment that does not end at the interchange
//! (feed-out only) forms the final leg.
//!
//! Service tuples are the `(leg, node)` pairs at which demand can be picked
//! up (feed-in) or dropped off (feed-out). A feed-in leg serves every node of
//! the leg except its terminal interchange arrival; a feed-out leg serves
//! every node except its initial interchange departure. Under reversal these
//! two conventions are mirror images of each other.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{FeederError, Result};
use crate::network::{Network, NodeId};
use crate::TIME_EPS;

/// Default cap on the number of enumerated routes.
pub const DEFAULT_ROUTE_CEILING: usize = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    FeedIn,
    FeedOut,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::FeedIn => Direction::FeedOut,
            Direction::FeedOut => Direction::FeedIn,
        }
    }
}

/// A leg, expressed as an inclusive range of node positions on its route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leg {
    pub start: usize,
    pub end: usize,
    pub cost: f64,
    pub time: f64,
}

/// A pickup (feed-in) or drop-off (feed-out) opportunity on a route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceTuple {
    /// Zero-based leg index.
    pub leg: usize,
    pub node: NodeId,
    /// Pickup time for feed-in routes (departure scheduled so that the
    /// route ends exactly at the time window), drop-off time for feed-out
    /// routes (departure at time zero).
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    direction: Direction,
    interchange: NodeId,
    nodes: Vec<NodeId>,
    edge_costs: Vec<f64>,
    edge_times: Vec<f64>,
    // arrival[j]: travel time from the route origin to position j
    arrival: Vec<f64>,
    legs: Vec<Leg>,
    cost: f64,
    time: f64,
}

impl Route {
    /// Build a route from a node sequence, checking that consecutive nodes
    /// are joined by edges and that the walk is anchored at the interchange.
    pub fn new(net: &Network, nodes: Vec<NodeId>, direction: Direction) -> Result<Route> {
        if nodes.len() < 2 {
            return Err(FeederError::InvalidRoute("a route needs at least two nodes".into()));
        }
        let interchange = net.interchange();
        match direction {
            Direction::FeedIn if *nodes.last().unwrap() != interchange => {
                return Err(FeederError::InvalidRoute("feed-in route must end at the interchange".into()))
            }
            Direction::FeedOut if nodes[0] != interchange => {
                return Err(FeederError::InvalidRoute("feed-out route must start at the interchange".into()))
            }
            _ => {}
        }
        let mut costs = Vec::with_capacity(nodes.len() - 1);
        let mut times = Vec::with_capacity(nodes.len() - 1);
        for pair in nodes.windows(2) {
            let e = net.edge(pair[0], pair[1]).ok_or_else(|| {
                FeederError::InvalidRoute(format!("no edge {} -> {}", net.name(pair[0]), net.name(pair[1])))
            })?;
            costs.push(e.cost);
            times.push(e.time);
        }
        Ok(Route::from_parts(direction, interchange, nodes, costs, times))
    }

    fn from_parts(
        direction: Direction,
        interchange: NodeId,
        nodes: Vec<NodeId>,
        edge_costs: Vec<f64>,
        edge_times: Vec<f64>,
    ) -> Route {
        let mut arrival = Vec::with_capacity(nodes.len());
        arrival.push(0.0);
        for &t in &edge_times {
            arrival.push(arrival.last().unwrap() + t);
        }
        let mut legs = Vec::new();
        let mut start = 0;
        for j in 1..nodes.len() {
            if nodes[j] == interchange {
                legs.push(Leg {
                    start,
                    end: j,
                    cost: edge_costs[start..j].iter().sum(),
                    time: edge_times[start..j].iter().sum(),
                });
                start = j;
            }
        }
        if start < nodes.len() - 1 {
            let end = nodes.len() - 1;
            legs.push(Leg {
                start,
                end,
                cost: edge_costs[start..end].iter().sum(),
                time: edge_times[start..end].iter().sum(),
            });
        }
        let cost = edge_costs.iter().sum();
        let time = *arrival.last().unwrap();
        Route { direction, interchange, nodes, edge_costs, edge_times, arrival, legs, cost, time }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn origin(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    /// Total travel time.
    pub fn time(&self) -> f64 {
        self.time
    }

    /// Total per-unit traversal cost.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn edge_costs(&self) -> &[f64] {
        &self.edge_costs
    }

    pub fn edge_times(&self) -> &[f64] {
        &self.edge_times
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    pub fn is_simple(&self) -> bool {
        self.legs.len() == 1
    }

    pub fn leg_nodes(&self, leg: usize) -> &[NodeId] {
        let l = &self.legs[leg];
        &self.nodes[l.start..=l.end]
    }

    /// Node positions on `leg` that offer service.
    fn service_positions(&self, leg: usize) -> std::ops::Range<usize> {
        let l = &self.legs[leg];
        match self.direction {
            Direction::FeedIn => {
                if self.nodes[l.end] == self.interchange {
                    l.start..l.end
                } else {
                    l.start..l.end + 1
                }
            }
            Direction::FeedOut => l.start + 1..l.end + 1,
        }
    }

    /// Distinct served nodes of `leg`, in order of first appearance.
    pub fn service_nodes(&self, leg: usize) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = Vec::new();
        for p in self.service_positions(leg) {
            if !out.contains(&self.nodes[p]) {
                out.push(self.nodes[p]);
            }
        }
        out
    }

    /// All service tuples, ordered by leg then by first appearance.
    pub fn service_tuples(&self, time_window: f64) -> Vec<ServiceTuple> {
        let mut out = Vec::new();
        for leg in 0..self.legs.len() {
            for node in self.service_nodes(leg) {
                let time = match self.direction {
                    Direction::FeedIn => self.pickup_time(leg, node, time_window),
                    Direction::FeedOut => self.dropoff_time(leg, node),
                }
                .expect("served node lies on its leg");
                out.push(ServiceTuple { leg, node, time });
            }
        }
        out
    }

    /// Latest pickup time at `node` on `leg` of a feed-in route whose
    /// vehicles depart at `time_window - t_r`: the arrival time at the last
    /// occurrence of `node` within the leg.
    pub fn pickup_time(&self, leg: usize, node: NodeId, time_window: f64) -> Result<f64> {
        if self.direction != Direction::FeedIn {
            return Err(FeederError::InvalidRoute("pickup times are defined on feed-in routes".into()));
        }
        let l = self.legs.get(leg).ok_or(FeederError::NodeNotOnLeg { leg, node: node.0 })?;
        let depart = time_window - self.time;
        let pos = self
            .service_positions(leg)
            .rev()
            .find(|&p| self.nodes[p] == node)
            .or_else(|| (self.nodes[l.end] == node).then_some(l.end))
            .ok_or(FeederError::NodeNotOnLeg { leg, node: node.0 })?;
        Ok(depart + self.arrival[pos])
    }

    /// Earliest drop-off time at `node` on `leg` of a feed-out route that
    /// departs the interchange at time zero: the arrival time at the first
    /// occurrence of `node` within the leg.
    pub fn dropoff_time(&self, leg: usize, node: NodeId) -> Result<f64> {
        if self.direction != Direction::FeedOut {
            return Err(FeederError::InvalidRoute("drop-off times are defined on feed-out routes".into()));
        }
        let l = self.legs.get(leg).ok_or(FeederError::NodeNotOnLeg { leg, node: node.0 })?;
        let pos = self
            .service_positions(leg)
            .find(|&p| self.nodes[p] == node)
            .or_else(|| (self.nodes[l.start] == node).then_some(l.start))
            .ok_or(FeederError::NodeNotOnLeg { leg, node: node.0 })?;
        Ok(self.arrival[pos])
    }

    /// Whether a node other than the interchange repeats within `leg`.
    pub fn has_cycle_in_leg(&self, leg: usize) -> bool {
        let seq: Vec<NodeId> = self.leg_nodes(leg).iter().copied().filter(|&v| v != self.interchange).collect();
        seq.iter().enumerate().any(|(k, v)| seq[k + 1..].contains(v))
    }

    /// The mirror route on the reversed network: node order reversed, same
    /// cost and time, leg `i` becoming leg `legs - 1 - i`.
    pub fn reversed(&self) -> Route {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        let mut costs = self.edge_costs.clone();
        costs.reverse();
        let mut times = self.edge_times.clone();
        times.reverse();
        Route::from_parts(self.direction.flipped(), self.interchange, nodes, costs, times)
    }

    pub fn label(&self, net: &Network) -> String {
        self.nodes.iter().map(|&v| net.name(v)).collect::<Vec<_>>().join(">")
    }
}

/// Map a route onto the reversed network (see [`Route::reversed`]).
pub fn map_route_reverse(route: &Route) -> Route {
    route.reversed()
}

/// Leg index of a service tuple after mapping its route through the
/// reversal.
pub fn mirrored_leg(leg_count: usize, leg: usize) -> usize {
    leg_count - 1 - leg
}

/// An indexed, immutable collection of routes of one direction.
#[derive(Debug, Clone)]
pub struct RouteSet {
    direction: Direction,
    time_window: f64,
    routes: Vec<Route>,
    index: HashMap<Vec<NodeId>, usize>,
}

impl RouteSet {
    pub fn from_routes(direction: Direction, time_window: f64, routes: Vec<Route>) -> Result<RouteSet> {
        let mut index = HashMap::with_capacity(routes.len());
        for (k, r) in routes.iter().enumerate() {
            if r.direction() != direction {
                return Err(FeederError::InvalidRoute("mixed route directions".into()));
            }
            if index.insert(r.nodes().to_vec(), k).is_some() {
                return Err(FeederError::InvalidRoute("duplicate route".into()));
            }
        }
        Ok(RouteSet { direction, time_window, routes, index })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn time_window(&self) -> f64 {
        self.time_window
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn get(&self, id: usize) -> &Route {
        &self.routes[id]
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Route)> + '_ {
        self.routes.iter().enumerate()
    }

    pub fn find(&self, nodes: &[NodeId]) -> Option<usize> {
        self.index.get(nodes).copied()
    }

    /// Single-leg feed-in routes originating at `node`.
    pub fn simple_routes_from(&self, node: NodeId) -> impl Iterator<Item = usize> + '_ {
        self.iter().filter(move |(_, r)| r.origin() == node && r.is_simple()).map(|(k, _)| k)
    }

    /// Number of allocation variables plus route-flow variables of the
    /// unreduced feed-in model over this set.
    pub fn variable_count(&self) -> usize {
        self.routes
            .iter()
            .map(|r| 1 + (0..r.leg_count()).map(|i| r.service_nodes(i).len()).sum::<usize>())
            .sum()
    }

    /// For each route of `self`, the index of its mirror in `other`.
    pub fn mirror_map(&self, other: &RouteSet) -> Vec<Option<usize>> {
        self.routes
            .iter()
            .map(|r| {
                let mut rev = r.nodes().to_vec();
                rev.reverse();
                other.find(&rev)
            })
            .collect()
    }
}

struct Enumerator<'a> {
    net: &'a Network,
    time_window: f64,
    direction: Direction,
    ceiling: usize,
    // fastest time to the interchange (feed-in pruning only)
    fastest_to_i: Vec<Option<f64>>,
    path: Vec<NodeId>,
    costs: Vec<f64>,
    times: Vec<f64>,
    out: Vec<Route>,
}

impl Enumerator<'_> {
    fn extend(&mut self, node: NodeId, elapsed: f64) -> Result<()> {
        let interchange = self.net.interchange();
        for e in self.net.out_edges(node) {
            let t = elapsed + e.time;
            if t > self.time_window + TIME_EPS {
                continue;
            }
            if self.direction == Direction::FeedIn {
                match self.fastest_to_i[e.to.0] {
                    Some(rest) if t + rest <= self.time_window + TIME_EPS => {}
                    _ => continue,
                }
            }
            self.path.push(e.to);
            self.costs.push(e.cost);
            self.times.push(e.time);
            let record = match self.direction {
                Direction::FeedIn => e.to == interchange,
                Direction::FeedOut => true,
            };
            if record {
                if self.out.len() >= self.ceiling {
                    return Err(FeederError::RouteCeilingExceeded { ceiling: self.ceiling });
                }
                self.out.push(Route::from_parts(
                    self.direction,
                    interchange,
                    self.path.clone(),
                    self.costs.clone(),
                    self.times.clone(),
                ));
            }
            self.extend(e.to, t)?;
            self.path.pop();
            self.costs.pop();
            self.times.pop();
        }
        Ok(())
    }
}

fn enumerate(net: &Network, time_window: f64, direction: Direction, ceiling: usize) -> Result<RouteSet> {
    if !(time_window.is_finite() && time_window > 0.0) {
        return Err(FeederError::InvalidParameter("time window must be positive".into()));
    }
    let mut en = Enumerator {
        net,
        time_window,
        direction,
        ceiling,
        fastest_to_i: net.fastest_times_to(net.interchange()),
        path: Vec::new(),
        costs: Vec::new(),
        times: Vec::new(),
        out: Vec::new(),
    };
    let origins: Vec<NodeId> = match direction {
        Direction::FeedIn => net.nodes().collect(),
        Direction::FeedOut => vec![net.interchange()],
    };
    for origin in origins {
        en.path.clear();
        en.path.push(origin);
        en.extend(origin, 0.0)?;
    }
    RouteSet::from_routes(direction, time_window, en.out)
}

/// All walks ending at the interchange with at least two nodes and total
/// time within `time_window`.
///
/// Depth-first extension of partial walks; a partial walk is abandoned once
/// even the fastest continuation to the interchange would exceed the window.
pub fn enumerate_feedin_routes(net: &Network, time_window: f64, ceiling: usize) -> Result<RouteSet> {
    enumerate(net, time_window, Direction::FeedIn, ceiling)
}

/// All walks starting at the interchange with at least two nodes and total
/// time within `time_window`.
pub fn enumerate_feedout_routes(net: &Network, time_window: f64, ceiling: usize) -> Result<RouteSet> {
    enumerate(net, time_window, Direction::FeedOut, ceiling)
}
