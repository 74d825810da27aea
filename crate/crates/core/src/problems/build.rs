//! Linear-program builders for the three problems.

use crate::lp::{LinearProgram, Relation};
use crate::network::{Network, NodeId};
use crate::pricing::PriceTable;
use crate::routes::RouteSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Var {
    Flow(usize),
    Alloc(usize),
    Supply(NodeId),
}

/// Supply handling of a feed-in model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupplySpec<'a> {
    /// Per-node supplies are data.
    Given(&'a [f64]),
    /// Per-node supplies are variables summing to at most `total`;
    /// `interchange` optionally pins the interchange supply.
    Optimized { total: f64, interchange: Option<f64> },
}

/// A built model together with the meaning of each variable.
#[derive(Debug, Clone)]
pub struct BuiltLp {
    pub lp: LinearProgram,
    pub(crate) vars: Vec<Var>,
    /// Route flows that are represented by an allocation variable
    /// (reduced forms): `(route, variable)`.
    pub(crate) anchors: Vec<(usize, usize)>,
    pub(crate) subset: Vec<usize>,
}

impl BuiltLp {
    fn new() -> Self {
        BuiltLp { lp: LinearProgram::new(), vars: Vec::new(), anchors: Vec::new(), subset: Vec::new() }
    }

    fn var(&mut self, name: String, objective: f64, meaning: Var) -> usize {
        self.vars.push(meaning);
        self.lp.add_var(name, objective)
    }

    pub fn routes(&self) -> &[usize] {
        &self.subset
    }

    /// Route flows, allocations and supplies read off a primal vector.
    pub(crate) fn extract(&self, x: &[f64], n_routes: usize, n_tuples: usize, n_nodes: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let mut flows = vec![0.0; n_routes];
        let mut allocs = vec![0.0; n_tuples];
        let mut supply = vec![0.0; n_nodes];
        for (j, v) in self.vars.iter().enumerate() {
            match *v {
                Var::Flow(r) => flows[r] = x[j],
                Var::Alloc(t) => allocs[t] = x[j],
                Var::Supply(l) => supply[l.0] = x[j],
            }
        }
        for &(r, j) in &self.anchors {
            flows[r] = x[j];
        }
        (flows, allocs, supply)
    }
}

fn alloc_vars(
    b: &mut BuiltLp,
    net: &Network,
    routes: &RouteSet,
    prices: &PriceTable,
    route: usize,
    net_of_leg_cost: bool,
) -> Vec<usize> {
    let r = routes.get(route);
    let base = prices.offset(route);
    prices
        .for_route(route)
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let obj = if net_of_leg_cost { t.revenue - r.legs()[t.leg].cost } else { t.revenue };
            b.var(format!("a_{route}_{}_{}", t.leg, net.name(t.node)), obj, Var::Alloc(base + k))
        })
        .collect()
}

fn demand_rows(b: &mut BuiltLp, net: &Network, prices: &PriceTable, per_tuple_var: &[(usize, usize)]) {
    let mut by_node: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.node_count()];
    for &(t, j) in per_tuple_var {
        by_node[prices.tuples()[t].node.0].push((j, 1.0));
    }
    for l in net.nodes() {
        let coeffs = std::mem::take(&mut by_node[l.0]);
        if l == net.interchange() || coeffs.is_empty() {
            continue;
        }
        b.lp.add_row(format!("demand_{}", net.name(l)), coeffs, Relation::Le, net.demand()[l.0]);
    }
}

fn tuple_vars(b: &BuiltLp) -> Vec<(usize, usize)> {
    b.vars
        .iter()
        .enumerate()
        .filter_map(|(j, v)| match v {
            Var::Alloc(t) => Some((*t, j)),
            _ => None,
        })
        .collect()
}

/// Feed-in model with explicit route flows over `subset`.
pub fn feedin_lp(net: &Network, routes: &RouteSet, prices: &PriceTable, subset: &[usize], supply: SupplySpec) -> BuiltLp {
    let mut b = BuiltLp::new();
    b.subset = subset.to_vec();
    let mut origin_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.node_count()];
    for &id in subset {
        let r = routes.get(id);
        let f = b.var(format!("f_{id}"), -r.cost(), Var::Flow(id));
        let allocs = alloc_vars(&mut b, net, routes, prices, id, false);
        let tuples = prices.for_route(id);
        for leg in 0..r.leg_count() {
            let mut coeffs: Vec<(usize, f64)> =
                tuples.iter().zip(&allocs).filter(|(t, _)| t.leg == leg).map(|(_, &j)| (j, 1.0)).collect();
            coeffs.push((f, -1.0));
            b.lp.add_row(format!("leg_{id}_{leg}"), coeffs, Relation::Le, 0.0);
        }
        origin_rows[r.origin().0].push((f, 1.0));
    }
    match supply {
        SupplySpec::Given(s) => {
            for l in net.nodes() {
                let coeffs = std::mem::take(&mut origin_rows[l.0]);
                if !coeffs.is_empty() {
                    b.lp.add_row(format!("supply_{}", net.name(l)), coeffs, Relation::Le, s[l.0]);
                }
            }
        }
        SupplySpec::Optimized { total, interchange } => {
            let svars: Vec<usize> =
                net.nodes().map(|l| b.var(format!("S_{}", net.name(l)), 0.0, Var::Supply(l))).collect();
            for l in net.nodes() {
                let mut coeffs = std::mem::take(&mut origin_rows[l.0]);
                if !coeffs.is_empty() {
                    coeffs.push((svars[l.0], -1.0));
                    b.lp.add_row(format!("supply_{}", net.name(l)), coeffs, Relation::Le, 0.0);
                }
            }
            b.lp.add_row("total_supply", svars.iter().map(|&j| (j, 1.0)).collect(), Relation::Le, total);
            if let Some(v) = interchange {
                b.lp.add_row("interchange_supply", vec![(svars[net.interchange().0], 1.0)], Relation::Eq, v);
            }
        }
    }
    let tv = tuple_vars(&b);
    demand_rows(&mut b, net, prices, &tv);
    b
}

/// Supply optimization without route-flow variables: each route's flow is
/// its first-leg allocation at the origin, every leg allocates exactly that
/// flow and every non-interchange supply equals the flow leaving it.
pub fn supplyopt_reduced_lp(
    net: &Network,
    routes: &RouteSet,
    prices: &PriceTable,
    subset: &[usize],
    total: f64,
    interchange_supply: Option<f64>,
) -> BuiltLp {
    let mut b = BuiltLp::new();
    b.subset = subset.to_vec();
    let mut origin_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); net.node_count()];
    for &id in subset {
        let r = routes.get(id);
        let allocs = alloc_vars(&mut b, net, routes, prices, id, true);
        let tuples = prices.for_route(id);
        let anchor = tuples
            .iter()
            .zip(&allocs)
            .find(|(t, _)| t.leg == 0 && t.node == r.origin())
            .map(|(_, &j)| j)
            .expect("origin is served on the first leg");
        b.anchors.push((id, anchor));
        for leg in 0..r.leg_count() {
            let mut coeffs: Vec<(usize, f64)> =
                tuples.iter().zip(&allocs).filter(|(t, _)| t.leg == leg).map(|(_, &j)| (j, 1.0)).collect();
            coeffs.push((anchor, -1.0));
            if coeffs.iter().any(|&(j, _)| j != anchor) {
                b.lp.add_row(format!("leg_{id}_{leg}"), coeffs, Relation::Eq, 0.0);
            }
        }
        origin_rows[r.origin().0].push((anchor, 1.0));
    }
    let svars: Vec<usize> = net.nodes().map(|l| b.var(format!("S_{}", net.name(l)), 0.0, Var::Supply(l))).collect();
    for l in net.nodes() {
        let mut coeffs = std::mem::take(&mut origin_rows[l.0]);
        coeffs.push((svars[l.0], -1.0));
        let rel = if l == net.interchange() { Relation::Le } else { Relation::Eq };
        if rel == Relation::Le && coeffs.len() == 1 {
            continue;
        }
        b.lp.add_row(format!("supply_{}", net.name(l)), coeffs, rel, 0.0);
    }
    b.lp.add_row("total_supply", svars.iter().map(|&j| (j, 1.0)).collect(), Relation::Le, total);
    if let Some(v) = interchange_supply {
        b.lp.add_row("interchange_supply", vec![(svars[net.interchange().0], 1.0)], Relation::Eq, v);
    }
    let tv = tuple_vars(&b);
    demand_rows(&mut b, net, prices, &tv);
    b
}

/// Feed-out model with explicit route flows over `subset`; all supply
/// starts at the interchange.
pub fn feedout_lp(net: &Network, routes: &RouteSet, prices: &PriceTable, subset: &[usize], total: f64) -> BuiltLp {
    let mut b = BuiltLp::new();
    b.subset = subset.to_vec();
    let mut flows = Vec::with_capacity(subset.len());
    for &id in subset {
        let r = routes.get(id);
        let f = b.var(format!("f_{id}"), -r.cost(), Var::Flow(id));
        flows.push((f, 1.0));
        let allocs = alloc_vars(&mut b, net, routes, prices, id, false);
        let tuples = prices.for_route(id);
        for leg in 0..r.leg_count() {
            let mut coeffs: Vec<(usize, f64)> =
                tuples.iter().zip(&allocs).filter(|(t, _)| t.leg == leg).map(|(_, &j)| (j, 1.0)).collect();
            coeffs.push((f, -1.0));
            b.lp.add_row(format!("leg_{id}_{leg}"), coeffs, Relation::Le, 0.0);
        }
    }
    if !flows.is_empty() {
        b.lp.add_row("total_supply", flows, Relation::Le, total);
    }
    let tv = tuple_vars(&b);
    demand_rows(&mut b, net, prices, &tv);
    b
}

/// Feed-out model without route-flow variables: each route's flow is its
/// final-leg allocation at the destination.
pub fn feedout_reduced_lp(net: &Network, routes: &RouteSet, prices: &PriceTable, subset: &[usize], total: f64) -> BuiltLp {
    let mut b = BuiltLp::new();
    b.subset = subset.to_vec();
    let mut anchors = Vec::with_capacity(subset.len());
    for &id in subset {
        let r = routes.get(id);
        let last = r.leg_count() - 1;
        let allocs = alloc_vars(&mut b, net, routes, prices, id, true);
        let tuples = prices.for_route(id);
        let anchor = tuples
            .iter()
            .zip(&allocs)
            .find(|(t, _)| t.leg == last && t.node == r.destination())
            .map(|(_, &j)| j)
            .expect("destination is served on the final leg");
        b.anchors.push((id, anchor));
        anchors.push((anchor, 1.0));
        for leg in 0..r.leg_count() {
            let mut coeffs: Vec<(usize, f64)> =
                tuples.iter().zip(&allocs).filter(|(t, _)| t.leg == leg).map(|(_, &j)| (j, 1.0)).collect();
            coeffs.push((anchor, -1.0));
            if coeffs.iter().any(|&(j, _)| j != anchor) {
                b.lp.add_row(format!("leg_{id}_{leg}"), coeffs, Relation::Eq, 0.0);
            }
        }
    }
    if !anchors.is_empty() {
        b.lp.add_row("total_supply", anchors, Relation::Le, total);
    }
    let tv = tuple_vars(&b);
    demand_rows(&mut b, net, prices, &tv);
    b
}
