//! The feed-in, supply-optimization and feed-out problems.
//!
//! A scenario bundles an instance with its enumerated routes, prices and
//! reduced route sets; solving it builds the corresponding linear program,
//! runs the floating-point simplex and reads back a [`FlowSolution`].

pub mod build;
mod diagnostics;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{FeederError, Result};
use crate::instance::{Instance, PriceModel};
use crate::lp::{self, LpSolution, LpStatus, Tolerances};
use crate::network::{Network, NodeId};
use crate::pricing::{AltTransport, PriceTable};
use crate::reduction::{self, PruningStats};
use crate::routes::{enumerate_feedin_routes, enumerate_feedout_routes, mirrored_leg, Direction, RouteSet};

pub use build::{BuiltLp, SupplySpec};
pub use diagnostics::{Diagnostics, PropertyCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    FeedIn,
    SupplyOpt,
    FeedOut,
    FeedOutViaEquivalence,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::FeedIn => "feed-in",
            ProblemKind::SupplyOpt => "supply-opt",
            ProblemKind::FeedOut => "feed-out",
            ProblemKind::FeedOutViaEquivalence => "feed-out-via-equivalence",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = FeederError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "feed-in" => Ok(ProblemKind::FeedIn),
            "supply-opt" => Ok(ProblemKind::SupplyOpt),
            "feed-out" => Ok(ProblemKind::FeedOut),
            "feed-out-via-equivalence" => Ok(ProblemKind::FeedOutViaEquivalence),
            other => Err(FeederError::InvalidParameter(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// `Full`: explicit route flows over the unpruned route set.
/// `Reduced`: the pruned route set, with route flows eliminated where the
/// problem allows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    Full,
    Reduced,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Full => "full",
            Form::Reduced => "reduced",
        })
    }
}

impl FromStr for Form {
    type Err = FeederError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Form::Full),
            "reduced" => Ok(Form::Reduced),
            other => Err(FeederError::InvalidParameter(format!("unknown form `{other}`"))),
        }
    }
}

/// A certified-optimal solution in scenario coordinates: `flows` is indexed
/// by route id, `allocations` by tuple index of the scenario price table.
#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub kind: ProblemKind,
    pub form: Form,
    pub direction: Direction,
    pub objective: f64,
    pub flows: Vec<f64>,
    pub allocations: Vec<f64>,
    pub node_totals: Vec<f64>,
    /// Feed-in: origin supplies (data or optimized). Feed-out: final
    /// vehicle positions, i.e. flow terminating at each node.
    pub supply: Vec<f64>,
    pub total_supply: Option<f64>,
    /// Route ids present in the solved model.
    pub routes_in_model: Vec<usize>,
    pub lp: LpSolution,
}

impl FlowSolution {
    /// Routes with flow above `tol`.
    pub fn routes_used(&self, tol: f64) -> usize {
        self.flows.iter().filter(|&&f| f > tol).count()
    }
}

fn node_totals(net: &Network, prices: &PriceTable, allocations: &[f64]) -> Vec<f64> {
    let mut totals = vec![0.0; net.node_count()];
    for (t, a) in prices.tuples().iter().zip(allocations) {
        totals[t.node.0] += a;
    }
    totals
}

fn alt_transport(instance: &Instance, routes: &RouteSet) -> Result<AltTransport> {
    let net = &instance.network;
    match &instance.price_model {
        PriceModel::CostFactor(b) => AltTransport::from_cost_factor(net, routes, instance.value_of_time, *b),
        PriceModel::Explicit(entries) => AltTransport::from_table(net, instance.value_of_time, entries.clone()),
    }
}

fn run_lp(built: &BuiltLp, tol: &Tolerances) -> Result<LpSolution> {
    Ok(lp::solve(&built.lp, tol)?)
}

fn require_optimal(sol: &LpSolution, what: &str) -> Result<()> {
    if sol.is_optimal() {
        Ok(())
    } else {
        Err(FeederError::NotOptimal(format!("{what}: {}", sol.status)))
    }
}

fn check_supply(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(FeederError::InvalidParameter("total supply must be non-negative".into()))
    }
}

/// Feed-in problem data on a network.
#[derive(Debug, Clone)]
pub struct FeedInScenario {
    pub instance: Instance,
    /// Every feed-in route within the time window.
    pub routes: RouteSet,
    pub alt: AltTransport,
    pub prices: PriceTable,
    /// Pruned route ids for the feed-in problem.
    pub reduced: Vec<usize>,
    /// Pruned route ids for supply optimization.
    pub supply_opt: Vec<usize>,
    pub tolerances: Tolerances,
}

impl FeedInScenario {
    pub fn new(instance: &Instance, ceiling: usize) -> Result<FeedInScenario> {
        let routes = enumerate_feedin_routes(&instance.network, instance.time_window, ceiling)?;
        let alt = alt_transport(instance, &routes)?;
        let prices = PriceTable::build(&routes, &alt)?;
        let reduced = reduction::reduce_feedin(&routes, &prices);
        let supply_opt = reduction::reduce_supplyopt(&routes, &prices, &reduced);
        Ok(FeedInScenario {
            instance: instance.clone(),
            routes,
            alt,
            prices,
            reduced,
            supply_opt,
            tolerances: Tolerances::default(),
        })
    }

    pub fn network(&self) -> &Network {
        &self.instance.network
    }

    pub fn pruning_stats(&self) -> PruningStats {
        reduction::pruning_stats(&self.routes, &self.prices)
    }

    fn subset(&self, form: Form) -> Vec<usize> {
        match form {
            Form::Full => (0..self.routes.len()).collect(),
            Form::Reduced => self.reduced.clone(),
        }
    }

    /// Model of the feed-in problem with the instance's supplies.
    pub fn feedin_model(&self, form: Form) -> BuiltLp {
        let net = self.network();
        build::feedin_lp(net, &self.routes, &self.prices, &self.subset(form), SupplySpec::Given(net.supply()))
    }

    /// Interchange supply used when it is pinned: whatever exceeds total
    /// demand.
    pub fn interchange_supply(&self, s: f64) -> f64 {
        (s - self.network().total_demand()).max(0.0)
    }

    /// Model of supply optimization with total supply `s`.
    pub fn supply_opt_model(&self, s: f64, form: Form, pin_interchange: bool) -> BuiltLp {
        let net = self.network();
        let pinned = pin_interchange.then(|| self.interchange_supply(s));
        match form {
            Form::Full => build::feedin_lp(
                net,
                &self.routes,
                &self.prices,
                &self.subset(Form::Full),
                SupplySpec::Optimized { total: s, interchange: pinned },
            ),
            Form::Reduced => build::supplyopt_reduced_lp(net, &self.routes, &self.prices, &self.supply_opt, s, pinned),
        }
    }

    fn finish(&self, built: &BuiltLp, sol: LpSolution, kind: ProblemKind, form: Form, total: Option<f64>) -> FlowSolution {
        let net = self.network();
        let (flows, allocations, mut supply) =
            built.extract(&sol.x, self.routes.len(), self.prices.len(), net.node_count());
        if kind == ProblemKind::FeedIn {
            supply = net.supply().to_vec();
        }
        FlowSolution {
            kind,
            form,
            direction: Direction::FeedIn,
            objective: sol.objective,
            node_totals: node_totals(net, &self.prices, &allocations),
            flows,
            allocations,
            supply,
            total_supply: total,
            routes_in_model: built.routes().to_vec(),
            lp: sol,
        }
    }

    pub fn solve_feedin(&self, form: Form) -> Result<FlowSolution> {
        let built = self.feedin_model(form);
        let sol = run_lp(&built, &self.tolerances)?;
        require_optimal(&sol, "feed-in")?;
        Ok(self.finish(&built, sol, ProblemKind::FeedIn, form, None))
    }

    /// Supply optimization with total supply `s`. The reduced form falls
    /// back to the full form if it turns out infeasible.
    pub fn solve_supply_opt(&self, s: f64, form: Form, pin_interchange: bool) -> Result<FlowSolution> {
        check_supply(s)?;
        let built = self.supply_opt_model(s, form, pin_interchange);
        let sol = run_lp(&built, &self.tolerances)?;
        if form == Form::Reduced && sol.status == LpStatus::Infeasible {
            log::warn!("reduced supply optimization infeasible at s = {s}; solving the full form instead");
            return self.solve_supply_opt(s, Form::Full, pin_interchange);
        }
        require_optimal(&sol, "supply optimization")?;
        Ok(self.finish(&built, sol, ProblemKind::SupplyOpt, form, Some(s)))
    }

    /// Best per-unit profit `beta - c` over the pruned simple routes from
    /// each node; `None` where there is none (and always at the
    /// interchange).
    pub fn best_rates(&self) -> Vec<Option<f64>> {
        let net = self.network();
        let mut best: Vec<Option<f64>> = vec![None; net.node_count()];
        for &id in &self.supply_opt {
            let r = self.routes.get(id);
            if !r.is_simple() {
                continue;
            }
            let o = r.origin();
            if let Some(beta) = self.prices.revenue(id, 0, o) {
                let rate = beta - r.cost();
                best[o.0] = Some(best[o.0].map_or(rate, |b: f64| b.max(rate)));
            }
        }
        best
    }

    /// Non-interchange nodes without a profitable simple route.
    pub fn unprofitable_nodes(&self) -> Vec<NodeId> {
        let rates = self.best_rates();
        let net = self.network();
        net.nodes().filter(|&l| l != net.interchange() && rates[l.0].is_none()).collect()
    }

    /// Maximum profit over all supply distributions for the instance's
    /// demand.
    pub fn absolute_max_profit(&self) -> f64 {
        let net = self.network();
        self.best_rates()
            .iter()
            .zip(net.demand())
            .map(|(rate, d)| rate.map_or(0.0, |r| d * r))
            .sum()
    }

    /// Whether every demanded node has a strictly positive best rate.
    pub fn all_demand_profitable(&self) -> bool {
        let net = self.network();
        let rates = self.best_rates();
        net.nodes()
            .filter(|&l| l != net.interchange() && net.demand()[l.0] > 0.0)
            .all(|l| rates[l.0].is_some_and(|r| r > 0.0))
    }
}

/// Feed-out problem data, together with the feed-in problem on the
/// reversed network that it is equivalent to.
#[derive(Debug, Clone)]
pub struct FeedOutScenario {
    pub instance: Instance,
    /// Feed-in scenario on the reversed network with the same demand,
    /// time window and alternate transport.
    pub equivalent: FeedInScenario,
    /// Every feed-out route within the time window.
    pub routes: RouteSet,
    pub prices: PriceTable,
    /// For each feed-out route, its mirror among `equivalent.routes`.
    pub mirror: Vec<Option<usize>>,
    /// Pruned feed-out route ids.
    pub reduced: Vec<usize>,
    pub tolerances: Tolerances,
}

impl FeedOutScenario {
    pub fn new(instance: &Instance, ceiling: usize) -> Result<FeedOutScenario> {
        let reversed = Instance { network: instance.network.reverse(), ..instance.clone() };
        let equivalent = FeedInScenario::new(&reversed, ceiling)?;
        let routes = enumerate_feedout_routes(&instance.network, instance.time_window, ceiling)?;
        let prices = PriceTable::build(&routes, &equivalent.alt)?;
        let mirror = routes.mirror_map(&equivalent.routes);
        let reduced = reduction::reduce_feedout(&routes, &equivalent.routes, &equivalent.supply_opt);
        Ok(FeedOutScenario {
            instance: instance.clone(),
            equivalent,
            routes,
            prices,
            mirror,
            reduced,
            tolerances: Tolerances::default(),
        })
    }

    pub fn network(&self) -> &Network {
        &self.instance.network
    }

    pub fn model(&self, s: f64, form: Form) -> BuiltLp {
        let net = self.network();
        match form {
            Form::Full => {
                let all: Vec<usize> = (0..self.routes.len()).collect();
                build::feedout_lp(net, &self.routes, &self.prices, &all, s)
            }
            Form::Reduced => build::feedout_reduced_lp(net, &self.routes, &self.prices, &self.reduced, s),
        }
    }

    fn final_positions(&self, flows: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.network().node_count()];
        for (id, r) in self.routes.iter() {
            out[r.destination().0] += flows[id];
        }
        out
    }

    pub fn solve(&self, s: f64, form: Form) -> Result<FlowSolution> {
        check_supply(s)?;
        let built = self.model(s, form);
        let sol = run_lp(&built, &self.tolerances)?;
        require_optimal(&sol, "feed-out")?;
        let net = self.network();
        let (flows, allocations, _) = built.extract(&sol.x, self.routes.len(), self.prices.len(), net.node_count());
        Ok(FlowSolution {
            kind: ProblemKind::FeedOut,
            form,
            direction: Direction::FeedOut,
            objective: sol.objective,
            node_totals: node_totals(net, &self.prices, &allocations),
            supply: self.final_positions(&flows),
            flows,
            allocations,
            total_supply: Some(s),
            routes_in_model: built.routes().to_vec(),
            lp: sol,
        })
    }

    /// Solve the equivalent reduced supply optimization on the reversed
    /// network and map its flows back onto feed-out routes.
    pub fn solve_via_equivalence(&self, s: f64) -> Result<FlowSolution> {
        let eq = self.equivalent.solve_supply_opt(s, Form::Reduced, true)?;
        let back = self.equivalent.routes.mirror_map(&self.routes);
        let mut flows = vec![0.0; self.routes.len()];
        let mut allocations = vec![0.0; self.prices.len()];
        let mut in_model = Vec::new();
        for &k in &eq.routes_in_model {
            let id = back[k].ok_or_else(|| FeederError::InvalidRoute("feed-in route without a feed-out mirror".into()))?;
            in_model.push(id);
            flows[id] = eq.flows[k];
            let legs = self.routes.get(id).leg_count();
            let base = self.equivalent.prices.offset(k);
            let target = self.prices.offset(id);
            for (j, t) in self.equivalent.prices.for_route(k).iter().enumerate() {
                let leg = mirrored_leg(legs, t.leg);
                let pos = self
                    .prices
                    .for_route(id)
                    .iter()
                    .position(|u| u.leg == leg && u.node == t.node)
                    .ok_or(FeederError::NodeNotOnLeg { leg, node: t.node.0 })?;
                allocations[target + pos] = eq.allocations[base + j];
            }
        }
        in_model.sort_unstable();
        let net = self.network();
        Ok(FlowSolution {
            kind: ProblemKind::FeedOutViaEquivalence,
            form: Form::Reduced,
            direction: Direction::FeedOut,
            objective: eq.objective,
            node_totals: node_totals(net, &self.prices, &allocations),
            supply: self.final_positions(&flows),
            flows,
            allocations,
            total_supply: Some(s),
            routes_in_model: in_model,
            lp: eq.lp,
        })
    }

    /// Best per-unit profit over pruned simple routes ending at each node.
    pub fn best_rates(&self) -> Vec<Option<f64>> {
        let mut best: Vec<Option<f64>> = vec![None; self.network().node_count()];
        for &id in &self.reduced {
            let r = self.routes.get(id);
            if !r.is_simple() {
                continue;
            }
            let d = r.destination();
            if let Some(beta) = self.prices.revenue(id, 0, d) {
                let rate = beta - r.cost();
                best[d.0] = Some(best[d.0].map_or(rate, |b: f64| b.max(rate)));
            }
        }
        best
    }

    /// Maximum profit over all total supplies.
    pub fn absolute_max_profit(&self) -> f64 {
        self.best_rates()
            .iter()
            .zip(self.network().demand())
            .map(|(rate, d)| rate.map_or(0.0, |r| d * r))
            .sum()
    }

    pub fn all_demand_profitable(&self) -> bool {
        let net = self.network();
        let rates = self.best_rates();
        net.nodes()
            .filter(|&l| l != net.interchange() && net.demand()[l.0] > 0.0)
            .all(|l| rates[l.0].is_some_and(|r| r > 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g1, triangle};
    use crate::routes::DEFAULT_ROUTE_CEILING;

    fn g1_instance(b: f64) -> Instance {
        Instance { network: g1(), time_window: 10.0, value_of_time: 1.0, price_model: PriceModel::CostFactor(b) }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn kind_and_form_parse() {
        for k in [ProblemKind::FeedIn, ProblemKind::SupplyOpt, ProblemKind::FeedOut, ProblemKind::FeedOutViaEquivalence] {
            assert_eq!(k.as_str().parse::<ProblemKind>().unwrap(), k);
        }
        assert_eq!("reduced".parse::<Form>().unwrap(), Form::Reduced);
        assert!("partial".parse::<Form>().is_err());
    }

    #[test]
    fn g1_feedin_model_shape() {
        let sc = FeedInScenario::new(&g1_instance(2.5), DEFAULT_ROUTE_CEILING).unwrap();
        assert_eq!(sc.reduced.len(), 2);
        let built = sc.feedin_model(Form::Reduced);
        assert_eq!(built.lp.num_vars(), 5);
        let names: Vec<&str> = built.lp.rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names.iter().filter(|n| n.starts_with("leg_")).count(), 2);
        assert_eq!(names.iter().filter(|n| n.starts_with("supply_")).count(), 2);
        assert_eq!(names.iter().filter(|n| n.starts_with("demand_")).count(), 1);
    }

    #[test]
    fn g1_feedin_optimum() {
        let sc = FeedInScenario::new(&g1_instance(2.5), DEFAULT_ROUTE_CEILING).unwrap();
        for form in [Form::Full, Form::Reduced] {
            let sol = sc.solve_feedin(form).unwrap();
            assert!(close(sol.objective, 20.0), "{form}: {}", sol.objective);
            assert!(close(sol.node_totals[0], 10.0));
        }
    }

    #[test]
    fn zero_demand_gives_zero() {
        let mut inst = g1_instance(2.5);
        inst.network = inst.network.with_demand(vec![0.0, 0.0]).unwrap();
        let sc = FeedInScenario::new(&inst, DEFAULT_ROUTE_CEILING).unwrap();
        let sol = sc.solve_feedin(Form::Full).unwrap();
        assert!(close(sol.objective, 0.0));
        assert!(sol.flows.iter().all(|&f| f.abs() < 1e-9));
        assert_eq!(sc.absolute_max_profit(), 0.0);
    }

    #[test]
    fn g1_supply_sweep() {
        let sc = FeedInScenario::new(&g1_instance(2.5), DEFAULT_ROUTE_CEILING).unwrap();
        for (s, want) in [(0.0, 0.0), (5.0, 10.0), (10.0, 20.0), (20.0, 20.0)] {
            for form in [Form::Full, Form::Reduced] {
                for pin in [false, true] {
                    let sol = sc.solve_supply_opt(s, form, pin).unwrap();
                    assert!(close(sol.objective, want), "s={s} {form} pin={pin}: {}", sol.objective);
                }
            }
        }
        assert!(close(sc.absolute_max_profit(), 20.0));
        assert!(sc.solve_supply_opt(-1.0, Form::Full, false).is_err());
    }

    #[test]
    fn reduced_supply_opt_drops_flow_variables() {
        let net = triangle();
        let inst = Instance { network: net, time_window: 12.0, value_of_time: 0.5, price_model: PriceModel::CostFactor(3.0) };
        let sc = FeedInScenario::new(&inst, DEFAULT_ROUTE_CEILING).unwrap();
        assert!(!sc.supply_opt.is_empty());
        let reduced = sc.supply_opt_model(4.0, Form::Reduced, false);
        let full = build::feedin_lp(
            sc.network(),
            &sc.routes,
            &sc.prices,
            &sc.supply_opt,
            SupplySpec::Optimized { total: 4.0, interchange: None },
        );
        let tuples: usize = sc.supply_opt.iter().map(|&id| sc.prices.for_route(id).len()).sum();
        assert_eq!(reduced.lp.num_vars(), tuples + sc.network().node_count());
        assert_eq!(full.lp.num_vars(), reduced.lp.num_vars() + sc.supply_opt.len());
    }

    #[test]
    fn triangle_three_way_agreement() {
        let inst = Instance {
            network: triangle(),
            time_window: 12.0,
            value_of_time: 0.5,
            price_model: PriceModel::CostFactor(3.0),
        };
        let sc = FeedInScenario::new(&inst, DEFAULT_ROUTE_CEILING).unwrap();
        let full = sc.solve_feedin(Form::Full).unwrap();
        let red = sc.solve_feedin(Form::Reduced).unwrap();
        assert!(close(full.objective, red.objective));
        for s in [0.0, 3.0, 6.0, 12.0, 24.0] {
            let a = sc.solve_supply_opt(s, Form::Full, true).unwrap();
            let b = sc.solve_supply_opt(s, Form::Reduced, true).unwrap();
            assert!(close(a.objective, b.objective), "s={s}: {} vs {}", a.objective, b.objective);
        }
        let jmax = sc.absolute_max_profit();
        let sat = sc.solve_supply_opt(sc.network().total_demand(), Form::Reduced, true).unwrap();
        assert!(close(sat.objective, jmax), "{} vs {}", sat.objective, jmax);
    }

    #[test]
    fn g1_feedout_matches_supply_opt() {
        let fo = FeedOutScenario::new(&g1_instance(2.5), DEFAULT_ROUTE_CEILING).unwrap();
        for (s, want) in [(0.0, 0.0), (5.0, 10.0), (10.0, 20.0), (20.0, 20.0)] {
            let direct = fo.solve(s, Form::Full).unwrap();
            let reduced = fo.solve(s, Form::Reduced).unwrap();
            let eq = fo.solve_via_equivalence(s).unwrap();
            assert!(close(direct.objective, want), "s={s}: {}", direct.objective);
            assert!(close(reduced.objective, want));
            assert!(close(eq.objective, want));
        }
        assert!(close(fo.absolute_max_profit(), 20.0));
    }

    #[test]
    fn mapped_allocations_are_feedout_feasible() {
        let inst = Instance {
            network: triangle(),
            time_window: 12.0,
            value_of_time: 0.5,
            price_model: PriceModel::CostFactor(3.0),
        };
        let fo = FeedOutScenario::new(&inst, DEFAULT_ROUTE_CEILING).unwrap();
        for s in [2.0, 6.0, 20.0] {
            let eq = fo.solve_via_equivalence(s).unwrap();
            let direct = fo.solve(s, Form::Full).unwrap();
            assert!(close(eq.objective, direct.objective), "s={s}: {} vs {}", eq.objective, direct.objective);
            let all: Vec<usize> = (0..fo.routes.len()).collect();
            let built = build::feedout_lp(fo.network(), &fo.routes, &fo.prices, &all, s);
            let mut x = vec![0.0; built.lp.num_vars()];
            for (j, v) in built.vars.iter().enumerate() {
                x[j] = match *v {
                    build::Var::Flow(r) => eq.flows[r],
                    build::Var::Alloc(t) => eq.allocations[t],
                    build::Var::Supply(_) => 0.0,
                };
            }
            for (k, row) in built.lp.rows.iter().enumerate() {
                let act = built.lp.row_activity(k, &x);
                let ok = match row.relation {
                    lp::Relation::Le => act <= row.rhs + 1e-7,
                    lp::Relation::Ge => act >= row.rhs - 1e-7,
                    lp::Relation::Eq => (act - row.rhs).abs() <= 1e-7,
                };
                assert!(ok, "row {} violated: {act} vs {}", row.name, row.rhs);
            }
            assert!(close(built.lp.objective_value(&x), eq.objective));
        }
    }
}
