//! Perceived-cost pricing.
//!
//! Passengers compare the feeder with their best alternate transport, whose
//! perceived cost is `g_l = alpha * eta_l + zeta_l`. The feeder can charge at
//! most what leaves the passenger no worse off; the operator keeps that price
//! minus a fixed operational cost per passenger.
//!
//! In the cost-factor model the alternate transport from `l` is the simple
//! route (single leg, origin `l`) minimising `alpha * t_r + b * c_r`.

use std::cmp::Ordering;

use crate::error::{FeederError, Result};
use crate::network::{Network, NodeId};
use crate::routes::{Direction, Route, RouteSet};

/// Operational cost per allocated passenger.
pub const OPERATIONAL_COST: f64 = 1.0;

/// Tolerance used when comparing prices in viability checks.
pub const PRICE_EPS: f64 = 1e-9;

/// Maximum price a passenger picked up at `pickup` accepts, given that
/// arrival at the interchange is at `time_window`. May be negative.
pub fn max_viable_price(g: f64, alpha: f64, time_window: f64, pickup: f64) -> f64 {
    g - alpha * (time_window - pickup)
}

/// Maximum price a passenger dropped off at `dropoff` accepts, leaving the
/// interchange at time zero.
pub fn feedout_price(eta: f64, zeta: f64, alpha: f64, dropoff: f64) -> f64 {
    alpha * (eta - dropoff) + zeta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltEntry {
    /// Travel time (minutes).
    pub eta: f64,
    /// Monetary cost.
    pub zeta: f64,
}

impl AltEntry {
    pub fn perceived_cost(&self, alpha: f64) -> f64 {
        alpha * self.eta + self.zeta
    }
}

/// Best alternate transport per node.
#[derive(Debug, Clone, PartialEq)]
pub struct AltTransport {
    alpha: f64,
    interchange: NodeId,
    entries: Vec<Option<AltEntry>>,
    cost_factor: Option<f64>,
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Simple route from `node` minimising `alpha * t + b * c`; ties go to the
/// lower cost, then the shorter time, then the smaller node sequence.
pub fn best_simple_route(routes: &RouteSet, node: NodeId, alpha: f64, b: f64) -> Option<usize> {
    let key = |r: &Route| alpha * r.time() + b * r.cost();
    routes.simple_routes_from(node).min_by(|&x, &y| {
        let (rx, ry) = (routes.get(x), routes.get(y));
        cmp_f64(key(rx), key(ry))
            .then(cmp_f64(rx.cost(), ry.cost()))
            .then(cmp_f64(rx.time(), ry.time()))
            .then(rx.nodes().cmp(ry.nodes()))
    })
}

/// Limit of [`best_simple_route`] as `b` grows: the cheapest simple route,
/// ties going to the shorter time.
pub fn cheapest_simple_route(routes: &RouteSet, node: NodeId) -> Option<usize> {
    routes.simple_routes_from(node).min_by(|&x, &y| {
        let (rx, ry) = (routes.get(x), routes.get(y));
        cmp_f64(rx.cost(), ry.cost())
            .then(cmp_f64(rx.time(), ry.time()))
            .then(rx.nodes().cmp(ry.nodes()))
    })
}

/// `g_l(b)`: perceived cost of the best alternate transport from `node`
/// under the cost-factor model. Zero at the interchange.
pub fn perceived_cost_at(routes: &RouteSet, node: NodeId, alpha: f64, b: f64, interchange: NodeId) -> Option<f64> {
    if node == interchange {
        return Some(0.0);
    }
    best_simple_route(routes, node, alpha, b).map(|k| {
        let r = routes.get(k);
        alpha * r.time() + b * r.cost()
    })
}

impl AltTransport {
    /// Explicit table; `entries[I]` is ignored.
    pub fn from_table(net: &Network, alpha: f64, entries: Vec<Option<AltEntry>>) -> Result<AltTransport> {
        if entries.len() != net.node_count() {
            return Err(FeederError::InvalidParameter("alternate-transport table has the wrong length".into()));
        }
        let mut entries = entries;
        entries[net.interchange().0] = None;
        Ok(AltTransport { alpha, interchange: net.interchange(), entries, cost_factor: None })
    }

    /// Cost-factor model over the simple routes of a feed-in route set.
    pub fn from_cost_factor(net: &Network, routes: &RouteSet, alpha: f64, b: f64) -> Result<AltTransport> {
        if routes.direction() != Direction::FeedIn {
            return Err(FeederError::InvalidParameter("alternate transport needs feed-in routes".into()));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(FeederError::InvalidParameter("cost factor must be non-negative".into()));
        }
        let entries = net
            .nodes()
            .map(|l| {
                if l == net.interchange() {
                    return None;
                }
                best_simple_route(routes, l, alpha, b).map(|k| {
                    let r = routes.get(k);
                    AltEntry { eta: r.time(), zeta: b * r.cost() }
                })
            })
            .collect();
        Ok(AltTransport { alpha, interchange: net.interchange(), entries, cost_factor: Some(b) })
    }

    pub fn value_of_time(&self) -> f64 {
        self.alpha
    }

    pub fn cost_factor(&self) -> Option<f64> {
        self.cost_factor
    }

    /// `(eta, zeta)` at `node`; the interchange has the null trip.
    pub fn entry(&self, node: NodeId) -> Option<AltEntry> {
        if node == self.interchange {
            Some(AltEntry { eta: 0.0, zeta: 0.0 })
        } else {
            self.entries[node.0]
        }
    }

    /// Perceived cost `g_l`, or `None` when the node has no alternate.
    pub fn perceived_cost(&self, node: NodeId) -> Option<f64> {
        self.entry(node).map(|e| e.perceived_cost(self.alpha))
    }

    /// Non-interchange nodes without an alternate transport.
    pub fn unreachable(&self) -> Vec<NodeId> {
        (0..self.entries.len())
            .map(NodeId)
            .filter(|&l| l != self.interchange && self.entries[l.0].is_none())
            .collect()
    }
}

/// Price data of one service tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuplePrice {
    pub route: usize,
    /// Zero-based leg index.
    pub leg: usize,
    pub node: NodeId,
    /// Pickup (feed-in) or drop-off (feed-out) time.
    pub time: f64,
    pub price: f64,
    /// Operator revenue: price minus the operational cost.
    pub revenue: f64,
}

/// Prices of every service tuple of a route set.
#[derive(Debug, Clone)]
pub struct PriceTable {
    direction: Direction,
    tuples: Vec<TuplePrice>,
    offsets: Vec<usize>,
}

impl PriceTable {
    pub fn build(routes: &RouteSet, alt: &AltTransport) -> Result<PriceTable> {
        let alpha = alt.value_of_time();
        let window = routes.time_window();
        let mut tuples = Vec::new();
        let mut offsets = Vec::with_capacity(routes.len() + 1);
        for (id, r) in routes.iter() {
            offsets.push(tuples.len());
            for t in r.service_tuples(window) {
                let e = alt.entry(t.node).ok_or_else(|| FeederError::MissingAltTransport(t.node.to_string()))?;
                let price = match routes.direction() {
                    Direction::FeedIn => max_viable_price(e.perceived_cost(alpha), alpha, window, t.time),
                    Direction::FeedOut => feedout_price(e.eta, e.zeta, alpha, t.time),
                };
                tuples.push(TuplePrice {
                    route: id,
                    leg: t.leg,
                    node: t.node,
                    time: t.time,
                    price,
                    revenue: price - OPERATIONAL_COST,
                });
            }
        }
        offsets.push(tuples.len());
        Ok(PriceTable { direction: routes.direction(), tuples, offsets })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[TuplePrice] {
        &self.tuples
    }

    /// Tuples of route `route`, ordered by leg.
    pub fn for_route(&self, route: usize) -> &[TuplePrice] {
        &self.tuples[self.offsets[route]..self.offsets[route + 1]]
    }

    /// Index of the first tuple of `route` in [`PriceTable::tuples`].
    pub fn offset(&self, route: usize) -> usize {
        self.offsets[route]
    }

    pub fn for_leg(&self, route: usize, leg: usize) -> impl Iterator<Item = &TuplePrice> + '_ {
        self.for_route(route).iter().filter(move |t| t.leg == leg)
    }

    pub fn revenue(&self, route: usize, leg: usize, node: NodeId) -> Option<f64> {
        self.for_leg(route, leg).find(|t| t.node == node).map(|t| t.revenue)
    }
}

/// Cost factor above which node `node` can be served viably from the
/// interchange, given feed-in routes. `None` when the node has no simple
/// route or cannot be reached from the interchange.
pub fn viability_threshold(net: &Network, routes: &RouteSet, alpha: f64, node: NodeId) -> Option<f64> {
    if node == net.interchange() {
        return None;
    }
    let r1 = routes.get(best_simple_route(routes, node, alpha, 1.0)?);
    let rinf = routes.get(cheapest_simple_route(routes, node)?);
    let cstar = net.cheapest_cost(net.interchange(), node)?;
    Some(1.0 + (1.0 + cstar + alpha * (r1.time() - rinf.time())) / r1.cost())
}

/// Per-node part of [`MultiLegReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct NodeConditions {
    pub node: NodeId,
    pub perceived_cost: f64,
    pub perceived_cost_at_one: f64,
    pub cheapest_from_interchange: f64,
    pub threshold: f64,
    /// `g_l(b) >= g_l(1) + c*(I,l) + 1`
    pub price_gap: bool,
    /// `b >= b_l*`
    pub above_threshold: bool,
}

/// Conditions explaining when multi-leg routes survive route reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLegReport {
    pub cost_factor: f64,
    /// Some reduced route has more than one leg.
    pub multi_leg_kept: bool,
    /// Some reduced simple route starts at the interchange.
    pub interchange_start_kept: bool,
    /// Nodes with a simple route that are reachable from the interchange.
    pub nodes: Vec<NodeConditions>,
}

impl MultiLegReport {
    pub fn price_gap(&self) -> bool {
        self.nodes.iter().any(|n| n.price_gap)
    }

    pub fn above_threshold(&self) -> bool {
        self.nodes.iter().any(|n| n.above_threshold)
    }

    /// Each condition implies the next: multi_leg_kept, interchange_start_kept, price_gap, above_threshold.
    pub fn implications_hold(&self) -> bool {
        (!self.multi_leg_kept || self.interchange_start_kept) && (!self.interchange_start_kept || self.price_gap()) && (!self.price_gap() || self.above_threshold())
    }
}

/// Evaluate the multi-leg viability conditions for cost factor `b` over the
/// feed-in routes `routes`.
pub fn check_multileg_conditions(net: &Network, routes: &RouteSet, alpha: f64, b: f64) -> Result<MultiLegReport> {
    let alt = AltTransport::from_cost_factor(net, routes, alpha, b)?;
    let prices = PriceTable::build(routes, &alt)?;
    let reduced = crate::reduction::reduce_feedin(routes, &prices);
    let interchange = net.interchange();
    let multi_leg_kept = reduced.iter().any(|&k| !routes.get(k).is_simple());
    let interchange_start_kept = reduced.iter().any(|&k| {
        let r = routes.get(k);
        r.is_simple() && r.origin() == interchange
    });
    let cheapest = net.cheapest_costs_from(interchange);
    let mut nodes = Vec::new();
    for l in net.nodes().filter(|&l| l != interchange) {
        let (Some(g_b), Some(g_1), Some(cstar), Some(threshold)) = (
            perceived_cost_at(routes, l, alpha, b, interchange),
            perceived_cost_at(routes, l, alpha, 1.0, interchange),
            cheapest[l.0],
            viability_threshold(net, routes, alpha, l),
        ) else {
            continue;
        };
        let rhs = g_1 + cstar + 1.0;
        nodes.push(NodeConditions {
            node: l,
            perceived_cost: g_b,
            perceived_cost_at_one: g_1,
            cheapest_from_interchange: cstar,
            threshold,
            price_gap: g_b >= rhs - PRICE_EPS * (1.0 + rhs.abs()),
            above_threshold: b >= threshold - 10.0 * PRICE_EPS * (1.0 + threshold.abs()),
        });
    }
    Ok(MultiLegReport { cost_factor: b, multi_leg_kept, interchange_start_kept, nodes })
}
