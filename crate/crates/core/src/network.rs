//! Directed road network with a designated interchange node.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FeederError, Result};
use crate::TIME_EPS;

/// Index of a node inside a [`Network`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A directed link with a per-unit-flow traversal cost and a travel time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub cost: f64,
    pub time: f64,
}

impl Edge {
    pub fn new(from: NodeId, to: NodeId, cost: f64, time: f64) -> Self {
        Edge { from, to, cost, time }
    }
}

/// Immutable, validated network.
///
/// Every edge has strictly positive cost and time, there are no self loops
/// and at most one edge per ordered node pair. The interchange carries no
/// demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    interchange: NodeId,
    edges: Vec<Edge>,
    // edge indices, sorted by head node
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    demand: Vec<f64>,
    supply: Vec<f64>,
}

impl Network {
    pub fn new(
        names: Vec<String>,
        interchange: NodeId,
        edges: Vec<Edge>,
        demand: Vec<f64>,
        supply: Vec<f64>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(FeederError::InvalidNetwork("network has no nodes".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), NodeId(i)).is_some() {
                return Err(FeederError::InvalidNetwork(format!("duplicate node `{name}`")));
            }
        }
        if interchange.0 >= n {
            return Err(FeederError::InvalidNetwork("missing interchange".into()));
        }
        if demand.len() != n || supply.len() != n {
            return Err(FeederError::InvalidNetwork(
                "demand and supply must have one entry per node".into(),
            ));
        }

        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.from.0 >= n || e.to.0 >= n {
                return Err(FeederError::InvalidNetwork(format!("edge {k} references an unknown node")));
            }
            if e.from == e.to {
                return Err(FeederError::InvalidNetwork(format!(
                    "self-loop edge at `{}`",
                    names[e.from.0]
                )));
            }
            if !(e.time.is_finite() && e.time > 0.0) {
                return Err(FeederError::InvalidNetwork(format!(
                    "non-positive edge time on {} -> {}",
                    names[e.from.0], names[e.to.0]
                )));
            }
            if !(e.cost.is_finite() && e.cost > 0.0) {
                return Err(FeederError::InvalidNetwork(format!(
                    "non-positive edge cost on {} -> {}",
                    names[e.from.0], names[e.to.0]
                )));
            }
            if out_edges[e.from.0].iter().any(|&j: &usize| edges[j].to == e.to) {
                return Err(FeederError::InvalidNetwork(format!(
                    "parallel edges {} -> {}",
                    names[e.from.0], names[e.to.0]
                )));
            }
            out_edges[e.from.0].push(k);
            in_edges[e.to.0].push(k);
        }
        for list in &mut out_edges {
            list.sort_by_key(|&k| edges[k].to);
        }
        for list in &mut in_edges {
            list.sort_by_key(|&k| edges[k].from);
        }

        for (i, (&d, &s)) in demand.iter().zip(&supply).enumerate() {
            if !(d.is_finite() && d >= 0.0) {
                return Err(FeederError::InvalidNetwork(format!("negative demand at `{}`", names[i])));
            }
            if !(s.is_finite() && s >= 0.0) {
                return Err(FeederError::InvalidNetwork(format!("negative supply at `{}`", names[i])));
            }
        }
        if demand[interchange.0] != 0.0 {
            return Err(FeederError::InvalidNetwork("interchange demand must be zero".into()));
        }

        Ok(Network { names, index, interchange, edges, out_edges, in_edges, demand, supply })
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId)
    }

    pub fn interchange(&self) -> NodeId {
        self.interchange
    }

    pub fn name(&self, node: NodeId) -> &str {
        &self.names[node.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        self.index.get(name).copied().ok_or_else(|| FeederError::UnknownNode(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `node`, ordered by head node.
    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.out_edges[node.0].iter().map(move |&k| &self.edges[k])
    }

    pub fn in_edges(&self, node: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edges[node.0].iter().map(move |&k| &self.edges[k])
    }

    pub fn edge(&self, from: NodeId, to: NodeId) -> Option<&Edge> {
        self.out_edges(from).find(|e| e.to == to)
    }

    pub fn demand(&self) -> &[f64] {
        &self.demand
    }

    pub fn supply(&self) -> &[f64] {
        &self.supply
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().sum()
    }

    pub fn with_demand(mut self, demand: Vec<f64>) -> Result<Self> {
        if demand.len() != self.node_count() {
            return Err(FeederError::InvalidNetwork("demand length mismatch".into()));
        }
        self.demand = demand;
        Network::new(self.names, self.interchange, self.edges, self.demand, self.supply)
    }

    pub fn with_supply(mut self, supply: Vec<f64>) -> Result<Self> {
        if supply.len() != self.node_count() {
            return Err(FeederError::InvalidNetwork("supply length mismatch".into()));
        }
        self.supply = supply;
        Network::new(self.names, self.interchange, self.edges, self.demand, self.supply)
    }

    /// Smallest summed edge cost over all paths `from -> to`; `None` when
    /// `to` is unreachable. `cheapest_cost(l, l)` is zero.
    pub fn cheapest_cost(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.dijkstra(from, false, |e| e.cost)[to.0]
    }

    /// Cheapest cost from `from` to every node.
    pub fn cheapest_costs_from(&self, from: NodeId) -> Vec<Option<f64>> {
        self.dijkstra(from, false, |e| e.cost)
    }

    /// Fastest travel time from every node to `target`.
    pub fn fastest_times_to(&self, target: NodeId) -> Vec<Option<f64>> {
        self.dijkstra(target, true, |e| e.time)
    }

    /// Fastest travel time from `source` to every node.
    pub fn fastest_times_from(&self, source: NodeId) -> Vec<Option<f64>> {
        self.dijkstra(source, false, |e| e.time)
    }

    // O(V^2) label setting; the networks handled here have at most a few
    // dozen nodes.
    fn dijkstra(&self, root: NodeId, backward: bool, weight: impl Fn(&Edge) -> f64) -> Vec<Option<f64>> {
        let n = self.node_count();
        let mut dist: Vec<Option<f64>> = vec![None; n];
        let mut done = vec![false; n];
        dist[root.0] = Some(0.0);
        loop {
            let mut best: Option<(usize, f64)> = None;
            for v in 0..n {
                if done[v] {
                    continue;
                }
                if let Some(d) = dist[v] {
                    if best.map_or(true, |(_, bd)| d < bd) {
                        best = Some((v, d));
                    }
                }
            }
            let Some((v, d)) = best else { break };
            done[v] = true;
            let adjacent: Box<dyn Iterator<Item = &Edge>> = if backward {
                Box::new(self.in_edges(NodeId(v)))
            } else {
                Box::new(self.out_edges(NodeId(v)))
            };
            for e in adjacent {
                let w = if backward { e.from } else { e.to };
                let nd = d + weight(e);
                if !done[w.0] && dist[w.0].map_or(true, |old| nd < old) {
                    dist[w.0] = Some(nd);
                }
            }
        }
        dist
    }

    /// Graph with every edge `(l, k, cost, time)` replaced by
    /// `(k, l, cost, time)`. Node set, demand and supply are unchanged.
    pub fn reverse(&self) -> Network {
        let edges = self.edges.iter().map(|e| Edge::new(e.to, e.from, e.cost, e.time)).collect();
        Network::new(
            self.names.clone(),
            self.interchange,
            edges,
            self.demand.clone(),
            self.supply.clone(),
        )
        .expect("reversal preserves validity")
    }

    /// Nodes other than the interchange from which no walk reaches the
    /// interchange within `time_window`. Such nodes never appear on a
    /// feasible feed-in route.
    pub fn unreachable_within(&self, time_window: f64) -> Vec<NodeId> {
        let fastest = self.fastest_times_to(self.interchange);
        self.nodes()
            .filter(|&l| l != self.interchange)
            .filter(|l| fastest[l.0].map_or(true, |t| t > time_window + TIME_EPS))
            .collect()
    }

    pub fn min_edge_time(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.time).fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.min(t))))
    }

    pub fn max_edge_time(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.time).fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.max(t))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g1, triangle};

    #[test]
    fn g1_cheapest_cost() {
        let net = g1();
        let a = net.node("A").unwrap();
        let i = net.interchange();
        assert_eq!(net.cheapest_cost(i, a), Some(2.0));
        assert_eq!(net.cheapest_cost(a, a), Some(0.0));
    }

    #[test]
    fn unreachable_node_has_no_cost() {
        let net = Network::new(
            vec!["A".into(), "I".into()],
            NodeId(1),
            vec![Edge::new(NodeId(0), NodeId(1), 1.0, 1.0)],
            vec![1.0, 0.0],
            vec![0.0, 0.0],
        )
        .unwrap();
        assert_eq!(net.cheapest_cost(NodeId(1), NodeId(0)), None);
        assert!(net.unreachable_within(0.5).contains(&NodeId(0)));
        assert!(net.unreachable_within(1.0).is_empty());
    }

    #[test]
    fn cheapest_cost_prefers_detour() {
        let net = triangle();
        let (a, _b, i) = (NodeId(0), NodeId(1), NodeId(2));
        // A->B->I costs 2, A->I costs 3.
        assert_eq!(net.cheapest_cost(a, i), Some(2.0));
        assert_eq!(net.cheapest_cost(i, a), Some(2.0));
    }

    #[test]
    fn reverse_single_edge() {
        let net = Network::new(
            vec!["A".into(), "I".into()],
            NodeId(1),
            vec![Edge::new(NodeId(0), NodeId(1), 2.0, 3.0)],
            vec![1.0, 0.0],
            vec![0.0, 0.0],
        )
        .unwrap();
        let rev = net.reverse();
        assert_eq!(rev.edges(), &[Edge::new(NodeId(1), NodeId(0), 2.0, 3.0)]);
        assert_eq!(rev.reverse(), net);
    }

    #[test]
    fn symmetric_graph_is_self_reverse() {
        let net = g1();
        let rev = net.reverse();
        let mut a: Vec<_> = net.edges().iter().map(|e| (e.from, e.to)).collect();
        let mut b: Vec<_> = rev.edges().iter().map(|e| (e.from, e.to)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_edges() {
        let mk = |edges| {
            Network::new(vec!["A".into(), "I".into()], NodeId(1), edges, vec![0.0; 2], vec![0.0; 2])
        };
        let err = mk(vec![Edge::new(NodeId(0), NodeId(1), 1.0, 0.0)]).unwrap_err();
        assert!(err.to_string().contains("non-positive edge time"));
        let err = mk(vec![Edge::new(NodeId(0), NodeId(1), 0.0, 1.0)]).unwrap_err();
        assert!(err.to_string().contains("non-positive edge cost"));
        assert!(mk(vec![Edge::new(NodeId(0), NodeId(0), 1.0, 1.0)]).is_err());
        assert!(mk(vec![
            Edge::new(NodeId(0), NodeId(1), 1.0, 1.0),
            Edge::new(NodeId(0), NodeId(1), 2.0, 1.0)
        ])
        .is_err());
    }

    #[test]
    fn rejects_interchange_demand() {
        let err = Network::new(vec!["A".into(), "I".into()], NodeId(1), vec![], vec![0.0, 3.0], vec![0.0; 2])
            .unwrap_err();
        assert!(err.to_string().contains("interchange demand must be zero"));
    }
}
