//! Independent verification: seeded random instances, a naive walk
//! enumerator and exact reference solves.
//!
//! The reference path never touches the route reduction or the
//! floating-point simplex. It enumerates walks by brute force, assembles the
//! full (unreduced) formulation itself and solves it in rational arithmetic.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FeederError, Result};
use crate::instance::{Instance, PriceModel};
use crate::lp::{solve_exact, ExactLimits, LinearProgram, LpStatus, Relation};
use crate::network::{Edge, Network, NodeId};
use crate::pricing::{AltEntry, AltTransport, PriceTable};
use crate::problems::ProblemKind;
use crate::routes::{Direction, Route, RouteSet};
use crate::TIME_EPS;

/// Attempts made before a recipe is reported as unusable.
pub const MAX_ATTEMPTS: usize = 100;

/// Cap on walks explored by the naive enumerator.
pub const NAIVE_WALK_LIMIT: usize = 2_000_000;

/// How generated instances price the alternate transport.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum RecipePricing {
    /// Cost-factor model with a fixed `b`.
    CostFactor { b: f64 },
    /// Per-node tables: `eta` is the fastest time to the interchange times
    /// a factor in `eta_factor`, `zeta` an integer in `zeta`.
    Explicit { eta_factor: (f64, f64), zeta: (u32, u32) },
}

/// Parameters of a random instance. Integer ranges are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceRecipe {
    pub seed: u64,
    /// Node count including the interchange.
    pub nodes: usize,
    /// Probability that an ordered node pair is joined by an edge.
    pub edge_density: f64,
    pub cost: (u32, u32),
    pub time: (u32, u32),
    pub demand: (u32, u32),
    pub supply: (u32, u32),
    /// Time window as a multiple of the largest edge time.
    pub window: (f64, f64),
    pub value_of_time: f64,
    pub pricing: RecipePricing,
    /// Instances with more feed-in or feed-out routes are redrawn.
    pub max_routes: usize,
}

impl Default for InstanceRecipe {
    fn default() -> Self {
        InstanceRecipe {
            seed: 1,
            nodes: 4,
            edge_density: 0.6,
            cost: (1, 4),
            time: (1, 5),
            demand: (0, 250),
            supply: (0, 50),
            window: (1.0, 2.5),
            value_of_time: 0.5,
            pricing: RecipePricing::CostFactor { b: 2.5 },
            max_routes: 5000,
        }
    }
}

impl InstanceRecipe {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FeederError::InvalidParameter(format!("recipe: {m}")));
        if !(2..=6).contains(&self.nodes) {
            return bad("node count must be between 2 and 6");
        }
        if !(self.edge_density > 0.0 && self.edge_density <= 1.0) {
            return bad("edge density must lie in (0, 1]");
        }
        for (name, (lo, hi)) in [("cost", self.cost), ("time", self.time), ("demand", self.demand), ("supply", self.supply)] {
            if lo > hi {
                return bad(&format!("{name} range is empty"));
            }
        }
        if self.cost.0 == 0 || self.time.0 == 0 {
            return bad("edge costs and times must be positive");
        }
        let (wlo, whi) = self.window;
        if !(wlo > 0.0 && wlo <= whi && whi <= 4.0) {
            return bad("window multiples must satisfy 0 < lo <= hi <= 4");
        }
        if !(self.value_of_time >= 0.0 && self.value_of_time.is_finite()) {
            return bad("value of time must be non-negative");
        }
        match self.pricing {
            RecipePricing::CostFactor { b } if !(b >= 0.0 && b.is_finite()) => bad("cost factor must be non-negative"),
            RecipePricing::Explicit { eta_factor: (lo, hi), zeta: (zlo, zhi) } if !(lo > 0.0 && lo <= hi) || zlo > zhi => {
                bad("explicit pricing ranges are invalid")
            }
            _ => Ok(()),
        }
    }
}

/// Round to a multiple of 1/4 so that generated values stay dyadic.
fn quarter(v: f64) -> f64 {
    (v * 4.0).round() / 4.0
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (u32, u32)) -> f64 {
    rng.gen_range(lo..=hi) as f64
}

fn attempt(recipe: &InstanceRecipe, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let n = recipe.nodes;
    let interchange = NodeId(n - 1);
    let mut names: Vec<String> = (0..n - 1).map(|k| format!("N{k}")).collect();
    names.push("I".into());
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(recipe.edge_density) {
                edges.push(Edge::new(NodeId(u), NodeId(v), draw(rng, recipe.cost), draw(rng, recipe.time)));
            }
        }
    }
    let demand: Vec<f64> = (0..n).map(|k| if k == interchange.0 { 0.0 } else { draw(rng, recipe.demand) }).collect();
    let supply: Vec<f64> = (0..n).map(|_| draw(rng, recipe.supply)).collect();
    let max_t = edges.iter().map(|e| e.time).fold(0.0, f64::max);
    let factor = rng.gen_range(recipe.window.0..=recipe.window.1);
    let window = quarter(factor * max_t).max(0.25);
    let net = Network::new(names, interchange, edges, demand, supply).ok()?;
    let fastest = net.fastest_times_to(interchange);
    if !net.nodes().any(|l| l != interchange && fastest[l.0].is_some_and(|t| t <= window + TIME_EPS)) {
        return None;
    }
    let price_model = match recipe.pricing {
        RecipePricing::CostFactor { b } => PriceModel::CostFactor(b),
        RecipePricing::Explicit { eta_factor, zeta } => PriceModel::Explicit(
            net.nodes()
                .map(|l| {
                    let base = fastest[l.0].unwrap_or(max_t);
                    let f = rng.gen_range(eta_factor.0..=eta_factor.1);
                    let entry = AltEntry { eta: quarter(base * f), zeta: draw(rng, zeta) };
                    (l != interchange).then_some(entry)
                })
                .collect(),
        ),
    };
    let inst = Instance { network: net, time_window: window, value_of_time: recipe.value_of_time, price_model };
    let fits = |dir| naive_routes(&inst.network, window, dir).is_ok_and(|r| !r.is_empty() && r.len() <= recipe.max_routes);
    (fits(Direction::FeedIn) && fits(Direction::FeedOut)).then_some(inst)
}

/// Deterministic instance for `recipe`; redraws up to [`MAX_ATTEMPTS`] times
/// until the interchange is reachable within the time window and the route
/// counts fit the recipe.
pub fn generate(recipe: &InstanceRecipe) -> Result<Instance> {
    recipe.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(inst) = attempt(recipe, &mut rng) {
            return Ok(inst);
        }
    }
    Err(FeederError::Generation(format!(
        "no feasible routes after {MAX_ATTEMPTS} attempts (seed {})",
        recipe.seed
    )))
}

/// Every walk of at least one edge within `time_window`, ending at the
/// interchange (feed-in) or starting there (feed-out), in lexicographic
/// order of node sequences. Explores all walks breadth first without any
/// look-ahead pruning.
pub fn naive_routes(net: &Network, time_window: f64, direction: Direction) -> Result<Vec<Vec<NodeId>>> {
    let interchange = net.interchange();
    let mut frontier: Vec<(Vec<NodeId>, f64)> = match direction {
        Direction::FeedIn => net.nodes().map(|l| (vec![l], 0.0)).collect(),
        Direction::FeedOut => vec![(vec![interchange], 0.0)],
    };
    let mut out = Vec::new();
    let mut explored = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (walk, elapsed) in frontier {
            let last = *walk.last().unwrap();
            for e in net.edges().iter().filter(|e| e.from == last) {
                let t = elapsed + e.time;
                if t > time_window + TIME_EPS {
                    continue;
                }
                explored += 1;
                if explored > NAIVE_WALK_LIMIT {
                    return Err(FeederError::Generation("naive enumeration exceeded its walk limit".into()));
                }
                let mut w = walk.clone();
                w.push(e.to);
                if direction == Direction::FeedOut || e.to == interchange {
                    out.push(w.clone());
                }
                next.push((w, t));
            }
        }
        frontier = next;
    }
    out.sort();
    Ok(out)
}

fn route_set(net: &Network, time_window: f64, direction: Direction) -> Result<RouteSet> {
    let routes = naive_routes(net, time_window, direction)?
        .into_iter()
        .map(|w| Route::new(net, w, direction))
        .collect::<Result<Vec<_>>>()?;
    RouteSet::from_routes(direction, time_window, routes)
}

/// Best alternate transport by direct minimisation over single-leg routes:
/// for feed-in the routes leaving `l`, for feed-out the routes reaching `l`.
fn alt_entries(net: &Network, routes: &RouteSet, alpha: f64, b: f64) -> Vec<Option<AltEntry>> {
    let interchange = net.interchange();
    let mut best: Vec<Option<(f64, f64, f64)>> = vec![None; net.node_count()];
    for (_, r) in routes.iter() {
        if r.leg_count() != 1 {
            continue;
        }
        let l = match routes.direction() {
            Direction::FeedIn => r.origin(),
            Direction::FeedOut => r.destination(),
        };
        if l == interchange {
            continue;
        }
        let key = (alpha * r.time() + b * r.cost(), r.cost(), r.time());
        if best[l.0].map_or(true, |cur| key < cur) {
            best[l.0] = Some(key);
        }
    }
    best.into_iter().map(|k| k.map(|(_, c, t)| AltEntry { eta: t, zeta: b * c })).collect()
}

/// An instance's routes and prices as seen by the oracle.
#[derive(Debug, Clone)]
pub struct ReferenceModel {
    pub routes: RouteSet,
    pub prices: PriceTable,
    pub lp: LinearProgram,
}

/// Assemble the full formulation over the naive route set.
pub fn reference_model(instance: &Instance, kind: ProblemKind, total_supply: Option<f64>) -> Result<ReferenceModel> {
    let net = &instance.network;
    let direction = match kind {
        ProblemKind::FeedIn | ProblemKind::SupplyOpt => Direction::FeedIn,
        ProblemKind::FeedOut | ProblemKind::FeedOutViaEquivalence => Direction::FeedOut,
    };
    let routes = route_set(net, instance.time_window, direction)?;
    let alpha = instance.value_of_time;
    let entries = match &instance.price_model {
        PriceModel::Explicit(e) => e.clone(),
        PriceModel::CostFactor(b) => alt_entries(net, &routes, alpha, *b),
    };
    let alt = AltTransport::from_table(net, alpha, entries)?;
    let prices = PriceTable::build(&routes, &alt)?;
    let s = match (kind, total_supply) {
        (ProblemKind::FeedIn, _) => None,
        (_, Some(s)) if s >= 0.0 => Some(s),
        (_, Some(_)) => return Err(FeederError::InvalidParameter("total supply must be non-negative".into())),
        (_, None) => Some(instance.total_supply()),
    };

    let mut lp = LinearProgram::new();
    let mut origin: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    let mut flows = Vec::new();
    let mut by_node: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
    for (id, r) in routes.iter() {
        let f = lp.add_var(format!("f{id}"), -r.cost());
        flows.push((f, 1.0));
        origin.entry(r.origin().0).or_default().push((f, 1.0));
        let mut legs: Vec<Vec<(usize, f64)>> = vec![vec![(f, -1.0)]; r.leg_count()];
        for (k, t) in prices.for_route(id).iter().enumerate() {
            let a = lp.add_var(format!("a{id}_{k}"), t.revenue);
            legs[t.leg].push((a, 1.0));
            by_node.entry(t.node.0).or_default().push((a, 1.0));
        }
        for (i, coeffs) in legs.into_iter().enumerate() {
            lp.add_row(format!("leg{id}_{i}"), coeffs, Relation::Le, 0.0);
        }
    }
    match (direction, s) {
        (Direction::FeedIn, None) => {
            for (l, coeffs) in origin {
                lp.add_row(format!("supply{l}"), coeffs, Relation::Le, net.supply()[l]);
            }
        }
        (Direction::FeedIn, Some(s)) => {
            let vars: Vec<usize> = net.nodes().map(|l| lp.add_var(format!("S{}", l.0), 0.0)).collect();
            for (l, mut coeffs) in origin {
                coeffs.push((vars[l], -1.0));
                lp.add_row(format!("supply{l}"), coeffs, Relation::Le, 0.0);
            }
            lp.add_row("total", vars.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, s);
        }
        (Direction::FeedOut, s) => {
            if !flows.is_empty() {
                lp.add_row("total", flows, Relation::Le, s.unwrap_or(0.0));
            }
        }
    }
    for (l, coeffs) in by_node {
        if l != net.interchange().0 {
            lp.add_row(format!("demand{l}"), coeffs, Relation::Le, net.demand()[l]);
        }
    }
    Ok(ReferenceModel { routes, prices, lp })
}

/// Exact optimum of the full formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub objective: BigRational,
    pub vars: usize,
    pub rows: usize,
    pub routes: usize,
}

impl ReferenceSolution {
    pub fn objective_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.objective).unwrap_or(f64::NAN)
    }
}

/// Exact optimum of `kind` over the unreduced route set. `total_supply`
/// applies to supply optimization and feed-out and defaults to the sum of
/// the instance supplies.
pub fn reference_solve(instance: &Instance, kind: ProblemKind, total_supply: Option<f64>) -> Result<ReferenceSolution> {
    reference_solve_with(instance, kind, total_supply, &ExactLimits::default())
}

pub fn reference_solve_with(
    instance: &Instance,
    kind: ProblemKind,
    total_supply: Option<f64>,
    limits: &ExactLimits,
) -> Result<ReferenceSolution> {
    let model = reference_model(instance, kind, total_supply)?;
    let sol = solve_exact(&model.lp, limits)?;
    if sol.status != LpStatus::Optimal {
        return Err(FeederError::NotOptimal(format!("reference {kind}: {}", sol.status)));
    }
    Ok(ReferenceSolution {
        objective: sol.objective,
        vars: model.lp.num_vars(),
        rows: model.lp.num_rows(),
        routes: model.routes.len(),
    })
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g1, triangle};
    use crate::routes::{enumerate_feedin_routes, enumerate_feedout_routes, DEFAULT_ROUTE_CEILING};
    use num_traits::{Signed, Zero};

    fn g1_instance() -> Instance {
        Instance { network: g1(), time_window: 10.0, value_of_time: 1.0, price_model: PriceModel::CostFactor(2.5) }
    }

    #[test]
    fn generation_is_deterministic() {
        let recipe = InstanceRecipe { seed: 1, nodes: 4, ..Default::default() };
        let a = generate(&recipe).unwrap();
        let b = generate(&recipe).unwrap();
        assert_eq!(a, b);
        let other = generate(&InstanceRecipe { seed: 2, ..recipe }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn window_below_edge_times_is_reported() {
        let recipe = InstanceRecipe { window: (0.01, 0.01), time: (5, 5), ..Default::default() };
        assert!(matches!(generate(&recipe), Err(FeederError::Generation(_))));
    }

    #[test]
    fn invalid_recipe_is_rejected() {
        assert!(generate(&InstanceRecipe { nodes: 9, ..Default::default() }).is_err());
        assert!(generate(&InstanceRecipe { demand: (5, 1), ..Default::default() }).is_err());
    }

    #[test]
    fn naive_matches_enumerator() {
        for (net, t) in [(g1(), 10.0), (g1(), 23.0), (triangle(), 12.0), (triangle(), 4.0)] {
            let fi = enumerate_feedin_routes(&net, t, DEFAULT_ROUTE_CEILING).unwrap();
            let mut got: Vec<Vec<NodeId>> = fi.iter().map(|(_, r)| r.nodes().to_vec()).collect();
            got.sort();
            assert_eq!(got, naive_routes(&net, t, Direction::FeedIn).unwrap());
            let fo = enumerate_feedout_routes(&net, t, DEFAULT_ROUTE_CEILING).unwrap();
            let mut got: Vec<Vec<NodeId>> = fo.iter().map(|(_, r)| r.nodes().to_vec()).collect();
            got.sort();
            assert_eq!(got, naive_routes(&net, t, Direction::FeedOut).unwrap());
        }
    }

    #[test]
    fn g1_reference_values() {
        let inst = g1_instance();
        let fi = reference_solve(&inst, ProblemKind::FeedIn, None).unwrap();
        assert_eq!(fi.objective, BigRational::from_integer(20.into()));
        for (s, want) in [(0, 0), (5, 10), (10, 20), (20, 20)] {
            let so = reference_solve(&inst, ProblemKind::SupplyOpt, Some(s as f64)).unwrap();
            assert_eq!(so.objective, BigRational::from_integer(want.into()));
            let fo = reference_solve(&inst, ProblemKind::FeedOut, Some(s as f64)).unwrap();
            assert_eq!(fo.objective, BigRational::from_integer(want.into()));
        }
    }

    #[test]
    fn reference_is_nonnegative() {
        for seed in 0..5 {
            let inst = generate(&InstanceRecipe { seed, nodes: 4, max_routes: 60, ..Default::default() }).unwrap();
            let r = reference_solve(&inst, ProblemKind::FeedIn, None).unwrap();
            assert!(!r.objective.is_negative() || r.objective.is_zero());
        }
    }

    #[test]
    fn explicit_pricing_recipe() {
        let recipe = InstanceRecipe {
            pricing: RecipePricing::Explicit { eta_factor: (1.0, 2.0), zeta: (0, 10) },
            ..Default::default()
        };
        let inst = generate(&recipe).unwrap();
        assert!(matches!(inst.price_model, PriceModel::Explicit(_)));
        let doc = inst.to_document();
        assert_eq!(Instance::from_document(&doc).unwrap(), inst);
    }

    #[test]
    fn deviation_is_relative() {
        assert_eq!(relative_deviation(0.0, 0.5), 0.5);
        assert!((relative_deviation(100.0, 101.0) - 1.0 / 101.0).abs() < 1e-15);
    }
}
