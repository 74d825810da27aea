//! Structural properties every optimal solution must have.
//!
//! Each check lists the routes or nodes that break it. Checks run only on
//! solutions the solver certified optimal.

use serde::Serialize;

use super::{FeedInScenario, FeedOutScenario, FlowSolution, ProblemKind};
use crate::error::{FeederError, Result};
use crate::network::Network;
use crate::pricing::PriceTable;
use crate::routes::RouteSet;

/// Relative tolerance of volume and money comparisons.
pub const PROPERTY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub offenders: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<PropertyCheck>,
}

impl Diagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyCheck> + '_ {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, offenders: Vec<String>) {
        self.checks.push(PropertyCheck { name, passed: offenders.is_empty(), offenders });
    }

    /// Record a check that was not applicable as passed.
    fn skip(&mut self, name: &'static str) {
        self.push(name, Vec::new());
    }
}

struct View<'a> {
    net: &'a Network,
    routes: &'a RouteSet,
    prices: &'a PriceTable,
    sol: &'a FlowSolution,
    vol: f64,
    money: f64,
}

impl<'a> View<'a> {
    fn new(net: &'a Network, routes: &'a RouteSet, prices: &'a PriceTable, sol: &'a FlowSolution) -> Result<Self> {
        if !sol.lp.is_optimal() {
            return Err(FeederError::NotOptimal(sol.lp.status.to_string()));
        }
        if sol.flows.len() != routes.len() || sol.allocations.len() != prices.len() {
            return Err(FeederError::InvalidParameter("solution does not match the scenario".into()));
        }
        let scale = net
            .demand()
            .iter()
            .chain(&sol.supply)
            .copied()
            .chain(sol.total_supply)
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(View {
            net,
            routes,
            prices,
            sol,
            vol: PROPERTY_TOL * (1.0 + scale),
            money: PROPERTY_TOL * (1.0 + sol.objective.abs()),
        })
    }

    fn label(&self, id: usize) -> String {
        self.routes.get(id).label(self.net)
    }

    fn used(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.routes.len()).filter(|&id| self.sol.flows[id] > self.vol)
    }

    fn leg_sum(&self, id: usize, leg: usize) -> f64 {
        let base = self.prices.offset(id);
        self.prices
            .for_route(id)
            .iter()
            .enumerate()
            .filter(|(_, t)| t.leg == leg)
            .map(|(k, _)| self.sol.allocations[base + k])
            .sum()
    }

    fn alloc_at(&self, id: usize, leg: usize, node: crate::NodeId) -> f64 {
        let base = self.prices.offset(id);
        self.prices
            .for_route(id)
            .iter()
            .position(|t| t.leg == leg && t.node == node)
            .map_or(0.0, |k| self.sol.allocations[base + k])
    }

    fn route_revenue(&self, id: usize) -> f64 {
        let base = self.prices.offset(id);
        self.prices.for_route(id).iter().enumerate().map(|(k, t)| t.revenue * self.sol.allocations[base + k]).sum()
    }

    fn common(&self, d: &mut Diagnostics) {
        let sol = self.sol;
        let cert = sol.lp.certificate;
        d.push(
            "solver-certificate",
            match cert {
                Some(c) if c.passes(1e-8) => Vec::new(),
                Some(c) => vec![format!("worst residual {:.3e}", c.worst())],
                None => vec!["no certificate".into()],
            },
        );

        let mut neg = Vec::new();
        for id in 0..self.routes.len() {
            if sol.flows[id] < -self.vol {
                neg.push(self.label(id));
            }
        }
        for (t, &a) in self.prices.tuples().iter().zip(&sol.allocations) {
            if a < -self.vol {
                neg.push(format!("{}@{}", self.label(t.route), self.net.name(t.node)));
            }
        }
        for l in self.net.nodes() {
            if sol.supply[l.0] < -self.vol {
                neg.push(self.net.name(l).to_string());
            }
        }
        d.push("nonnegative", neg);

        let mut totals = vec![0.0; self.net.node_count()];
        for (t, &a) in self.prices.tuples().iter().zip(&sol.allocations) {
            totals[t.node.0] += a;
        }
        d.push(
            "node-totals",
            self.net
                .nodes()
                .filter(|l| (totals[l.0] - sol.node_totals[l.0]).abs() > self.vol)
                .map(|l| self.net.name(l).to_string())
                .collect(),
        );
        d.push(
            "demand",
            self.net
                .nodes()
                .filter(|l| totals[l.0] > self.net.demand()[l.0] + self.vol)
                .map(|l| self.net.name(l).to_string())
                .collect(),
        );

        let mut over = Vec::new();
        for (id, r) in self.routes.iter() {
            for leg in 0..r.leg_count() {
                if self.leg_sum(id, leg) > sol.flows[id] + self.vol {
                    over.push(format!("{} leg {}", self.label(id), leg + 1));
                }
            }
        }
        d.push("leg-capacity", over);

        let cost: f64 = self.routes.iter().map(|(id, r)| r.cost() * sol.flows[id]).sum();
        let revenue: f64 = self.prices.tuples().iter().zip(&sol.allocations).map(|(t, a)| t.revenue * a).sum();
        let recomputed = revenue - cost;
        d.push(
            "objective",
            if (recomputed - sol.objective).abs() <= self.money {
                Vec::new()
            } else {
                vec![format!("reported {} recomputed {}", sol.objective, recomputed)]
            },
        );

        d.push(
            "nonnegative-revenue",
            self.prices
                .tuples()
                .iter()
                .zip(&sol.allocations)
                .filter(|(t, &a)| a > self.vol && t.revenue < -self.money)
                .map(|(t, _)| format!("{}@{}", self.label(t.route), self.net.name(t.node)))
                .collect(),
        );
        d.push(
            "route-covers-cost",
            self.used()
                .filter(|&id| self.route_revenue(id) < self.routes.get(id).cost() * self.sol.flows[id] - self.money)
                .map(|id| self.label(id))
                .collect(),
        );
    }

    /// Positive allocations on the given legs earn at least the leg cost.
    fn profitable_legs(&self, first_leg: usize) -> Vec<String> {
        self.prices
            .tuples()
            .iter()
            .zip(&self.sol.allocations)
            .filter(|(t, &a)| {
                t.leg >= first_leg
                    && a > self.vol
                    && t.revenue < self.routes.get(t.route).legs()[t.leg].cost - self.money
            })
            .map(|(t, _)| format!("{} leg {} @{}", self.label(t.route), t.leg + 1, self.net.name(t.node)))
            .collect()
    }

    fn legs_full(&self, from: usize, to_excl: impl Fn(usize) -> usize) -> Vec<String> {
        let mut out = Vec::new();
        for id in self.used() {
            let r = self.routes.get(id);
            for leg in from..to_excl(r.leg_count()) {
                if (self.leg_sum(id, leg) - self.sol.flows[id]).abs() > self.vol {
                    out.push(format!("{} leg {}", self.label(id), leg + 1));
                }
            }
        }
        out
    }

    fn outside(&self, keep: &[usize]) -> Vec<String> {
        let mut member = vec![false; self.routes.len()];
        for &k in keep {
            member[k] = true;
        }
        self.used().filter(|&id| !member[id]).map(|id| self.label(id)).collect()
    }
}

impl FeedInScenario {
    /// Check the optimality properties of a feed-in or supply-optimization
    /// solution of this scenario.
    pub fn verify(&self, sol: &FlowSolution) -> Result<Diagnostics> {
        if !matches!(sol.kind, ProblemKind::FeedIn | ProblemKind::SupplyOpt) {
            return Err(FeederError::InvalidParameter(format!("{} solution passed to a feed-in scenario", sol.kind)));
        }
        let net = self.network();
        let v = View::new(net, &self.routes, &self.prices, sol)?;
        let mut d = Diagnostics::default();
        v.common(&mut d);

        let mut short = Vec::new();
        let mut origin = vec![0.0; net.node_count()];
        for (id, r) in self.routes.iter() {
            origin[r.origin().0] += sol.flows[id];
        }
        for l in net.nodes() {
            if origin[l.0] > sol.supply[l.0] + v.vol {
                short.push(net.name(l).to_string());
            }
        }
        d.push("origin-supply", short);

        d.push("secondary-legs-full", v.legs_full(1, |n| n));
        d.push(
            "route-allocates",
            v.used()
                .filter(|&id| (0..self.routes.get(id).leg_count()).all(|leg| v.leg_sum(id, leg) <= v.vol))
                .map(|id| v.label(id))
                .collect(),
        );
        d.push("secondary-legs-profitable", v.profitable_legs(1));
        d.push("used-routes-pruned", v.outside(&self.reduced));

        if sol.kind != ProblemKind::SupplyOpt {
            return Ok(d);
        }
        let s = sol.total_supply.unwrap_or(0.0);
        let total: f64 = sol.supply.iter().sum();
        d.push(
            "total-supply",
            if total <= s + v.vol { Vec::new() } else { vec![format!("{total} > {s}")] },
        );
        d.push("supply-opt-pruned", v.outside(&self.reduced));

        let mut first = v.legs_full(0, |n| n);
        for id in v.used() {
            let r = self.routes.get(id);
            if (v.alloc_at(id, 0, r.origin()) - sol.flows[id]).abs() > v.vol {
                first.push(format!("{} origin", v.label(id)));
            }
            if r.origin() == net.interchange() {
                first.push(format!("{} starts at the interchange", v.label(id)));
            }
        }
        d.push("origin-anchored", first);

        let mut origin_loss = v.profitable_legs(0);
        for id in v.used() {
            let r = self.routes.get(id);
            let beta = self.prices.revenue(id, 0, r.origin()).unwrap_or(f64::NEG_INFINITY);
            if beta < r.legs()[0].cost - v.money {
                origin_loss.push(format!("{} origin", v.label(id)));
            }
        }
        d.push("legs-profitable", origin_loss);

        d.push(
            "unprofitable-nodes-unserved",
            self.unprofitable_nodes()
                .into_iter()
                .filter(|l| sol.node_totals[l.0] > v.vol)
                .map(|l| net.name(l).to_string())
                .collect(),
        );
        d.push(
            "first-leg-acyclic",
            v.used().filter(|&id| self.routes.get(id).has_cycle_in_leg(0)).map(|id| v.label(id)).collect(),
        );

        if s <= net.total_demand() && self.all_demand_profitable() {
            let mut off = Vec::new();
            let flow: f64 = sol.flows.iter().sum();
            if flow < s - v.vol {
                off.push(format!("flow {flow} < supply {s}"));
            }
            for l in net.nodes().filter(|&l| l != net.interchange()) {
                if (origin[l.0] - sol.supply[l.0]).abs() > v.vol || sol.supply[l.0] > net.demand()[l.0] + v.vol {
                    off.push(net.name(l).to_string());
                }
            }
            d.push("supply-saturated", off);
        } else {
            d.skip("supply-saturated");
        }
        Ok(d)
    }
}

impl FeedOutScenario {
    /// Check the optimality properties of a feed-out solution of this
    /// scenario, whether solved directly or through the equivalence.
    pub fn verify(&self, sol: &FlowSolution) -> Result<Diagnostics> {
        if !matches!(sol.kind, ProblemKind::FeedOut | ProblemKind::FeedOutViaEquivalence) {
            return Err(FeederError::InvalidParameter(format!("{} solution passed to a feed-out scenario", sol.kind)));
        }
        let net = self.network();
        let v = View::new(net, &self.routes, &self.prices, sol)?;
        let mut d = Diagnostics::default();
        v.common(&mut d);

        let s = sol.total_supply.unwrap_or(0.0);
        let flow: f64 = sol.flows.iter().sum();
        d.push("total-supply", if flow <= s + v.vol { Vec::new() } else { vec![format!("{flow} > {s}")] });
        d.push("legs-full", v.legs_full(0, |n| n));
        d.push("legs-profitable", v.profitable_legs(0));

        let mut dest = Vec::new();
        for id in v.used() {
            let r = self.routes.get(id);
            let last = r.leg_count() - 1;
            if (v.alloc_at(id, last, r.destination()) - sol.flows[id]).abs() > v.vol {
                dest.push(format!("{} destination", v.label(id)));
            }
            let beta = self.prices.revenue(id, last, r.destination()).unwrap_or(f64::NEG_INFINITY);
            if beta < r.legs()[last].cost - v.money {
                dest.push(format!("{} unprofitable destination", v.label(id)));
            }
        }
        d.push("destination-anchored", dest);
        d.push(
            "final-leg-acyclic",
            v.used()
                .filter(|&id| {
                    let r = self.routes.get(id);
                    r.has_cycle_in_leg(r.leg_count() - 1) || r.destination() == net.interchange()
                })
                .map(|id| v.label(id))
                .collect(),
        );
        d.push("used-routes-pruned", v.outside(&self.reduced));

        let gated = self.all_demand_profitable();
        if gated && s <= net.total_demand() {
            d.push(
                "supply-exhausted",
                if flow >= s - v.vol { Vec::new() } else { vec![format!("flow {flow} < supply {s}")] },
            );
        } else {
            d.skip("supply-exhausted");
        }
        if gated && s >= net.total_demand() && self.instance.value_of_time > 0.0 {
            let rates = self.best_rates();
            let mut off = Vec::new();
            let mut served = vec![0.0; net.node_count()];
            for id in v.used() {
                let r = self.routes.get(id);
                let best = rates[r.destination().0];
                let rate = self.prices.revenue(id, 0, r.destination()).map(|b| b - r.cost());
                let is_best = r.is_simple()
                    && matches!((rate, best), (Some(x), Some(b)) if x >= b - PROPERTY_TOL * (1.0 + b.abs()));
                if is_best {
                    served[r.destination().0] += sol.flows[id];
                } else {
                    off.push(v.label(id));
                }
            }
            for l in net.nodes().filter(|&l| l != net.interchange()) {
                if (served[l.0] - net.demand()[l.0]).abs() > v.vol {
                    off.push(net.name(l).to_string());
                }
            }
            d.push("best-routes-only", off);
        } else {
            d.skip("best-routes-only");
        }
        Ok(d)
    }
}
