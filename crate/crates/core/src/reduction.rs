//! Offline route elimination.
//!
//! The rules only look at per-leg costs and tuple revenues, never at demand
//! or supply, so a reduced set can be reused across demand scenarios.
//! Borderline scores are kept: dropping a route that an optimum might use is
//! unsound, keeping an unused one is harmless.

use serde::Serialize;

use crate::pricing::PriceTable;
use crate::routes::{Direction, RouteSet};

/// Relative slack applied in favour of keeping a route.
pub const INCLUSION_TOL: f64 = 1e-12;

fn at_least(value: f64, bound: f64) -> bool {
    value - bound >= -INCLUSION_TOL * bound.abs().max(value.abs()).max(1.0)
}

/// Leg score: best non-negative revenue on the leg minus the leg cost.
pub fn leg_score(routes: &RouteSet, prices: &PriceTable, route: usize, leg: usize) -> f64 {
    let best = prices.for_leg(route, leg).map(|t| t.revenue).fold(0.0_f64, f64::max);
    best - routes.get(route).legs()[leg].cost
}

pub fn leg_scores(routes: &RouteSet, prices: &PriceTable, route: usize) -> Vec<f64> {
    (0..routes.get(route).leg_count()).map(|i| leg_score(routes, prices, route, i)).collect()
}

fn keeps_simple(scores: &[f64]) -> bool {
    scores.len() == 1 && at_least(scores[0], 0.0)
}

fn keeps_multi(scores: &[f64]) -> bool {
    scores.len() > 1 && at_least(scores.iter().sum(), 0.0) && scores[1..].iter().all(|&w| at_least(w, 0.0))
}

/// Simple routes (`R1`) and multi-leg routes (`R2`) surviving reduction.
pub fn split_feedin(routes: &RouteSet, prices: &PriceTable) -> (Vec<usize>, Vec<usize>) {
    let mut simple = Vec::new();
    let mut multi = Vec::new();
    for (id, _) in routes.iter() {
        let w = leg_scores(routes, prices, id);
        if keeps_simple(&w) {
            simple.push(id);
        } else if keeps_multi(&w) {
            multi.push(id);
        }
    }
    (simple, multi)
}

/// Reduced feed-in route set `R1 ∪ R2`, in route-id order.
pub fn reduce_feedin(routes: &RouteSet, prices: &PriceTable) -> Vec<usize> {
    debug_assert_eq!(routes.direction(), Direction::FeedIn);
    routes
        .iter()
        .filter(|&(id, _)| {
            let w = leg_scores(routes, prices, id);
            keeps_simple(&w) || keeps_multi(&w)
        })
        .map(|(id, _)| id)
        .collect()
}

/// Routes of `reduced` usable in supply optimization: not starting at the
/// interchange, first-leg revenue at the origin covering the first-leg cost,
/// and no repeated node on the first leg.
pub fn reduce_supplyopt(routes: &RouteSet, prices: &PriceTable, reduced: &[usize]) -> Vec<usize> {
    reduced
        .iter()
        .copied()
        .filter(|&id| {
            let r = routes.get(id);
            // feed-in routes end at the interchange
            if r.origin() == r.destination() || r.has_cycle_in_leg(0) {
                return false;
            }
            match prices.revenue(id, 0, r.origin()) {
                Some(beta) => at_least(beta, r.legs()[0].cost),
                None => false,
            }
        })
        .collect()
}

/// Feed-out routes whose mirror on the reversed network lies in `mirror_reduced`.
pub fn reduce_feedout(feedout: &RouteSet, reversed_feedin: &RouteSet, mirror_reduced: &[usize]) -> Vec<usize> {
    let mut keep = vec![false; reversed_feedin.len()];
    for &k in mirror_reduced {
        keep[k] = true;
    }
    feedout
        .mirror_map(reversed_feedin)
        .into_iter()
        .enumerate()
        .filter(|(_, m)| m.is_some_and(|k| keep[k]))
        .map(|(id, _)| id)
        .collect()
}

/// Sizes of the route sets before and after reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PruningStats {
    pub total: usize,
    pub reduced: usize,
    pub simple: usize,
    pub multi_leg: usize,
    pub supply_opt: usize,
}

pub fn pruning_stats(routes: &RouteSet, prices: &PriceTable) -> PruningStats {
    let (simple, multi) = split_feedin(routes, prices);
    let reduced = reduce_feedin(routes, prices);
    PruningStats {
        total: routes.len(),
        reduced: reduced.len(),
        simple: simple.len(),
        multi_leg: multi.len(),
        supply_opt: reduce_supplyopt(routes, prices, &reduced).len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g1, triangle};
    use crate::network::NodeId;
    use crate::pricing::AltTransport;
    use crate::routes::{enumerate_feedin_routes, enumerate_feedout_routes, DEFAULT_ROUTE_CEILING};

    fn g1_priced(b: f64) -> (RouteSet, PriceTable) {
        let net = g1();
        let routes = enumerate_feedin_routes(&net, 10.0, DEFAULT_ROUTE_CEILING).unwrap();
        let alt = AltTransport::from_cost_factor(&net, &routes, 1.0, b).unwrap();
        let prices = PriceTable::build(&routes, &alt).unwrap();
        (routes, prices)
    }

    fn id_of(routes: &RouteSet, nodes: &[usize]) -> usize {
        routes.find(&nodes.iter().map(|&k| NodeId(k)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn g1_scores_and_sets() {
        let (routes, prices) = g1_priced(2.5);
        let direct = id_of(&routes, &[0, 1]);
        let round = id_of(&routes, &[1, 0, 1]);
        assert_eq!(leg_score(&routes, &prices, direct, 0), 2.0);
        assert_eq!(leg_score(&routes, &prices, round, 0), 0.0);
        let mut reduced = reduce_feedin(&routes, &prices);
        reduced.sort();
        let mut both = vec![direct, round];
        both.sort();
        assert_eq!(reduced, both);
        assert_eq!(reduce_supplyopt(&routes, &prices, &reduced), vec![direct]);
        let stats = pruning_stats(&routes, &prices);
        assert_eq!((stats.total, stats.reduced, stats.simple, stats.multi_leg, stats.supply_opt), (2, 2, 2, 0, 1));
    }

    #[test]
    fn g1_below_threshold_drops_round_trip() {
        let (routes, prices) = g1_priced(2.4);
        let reduced = reduce_feedin(&routes, &prices);
        assert_eq!(reduced, vec![id_of(&routes, &[0, 1])]);
    }

    #[test]
    fn nothing_survives_without_markup() {
        for b in [0.0, 0.5, 1.0] {
            let (routes, prices) = g1_priced(b);
            assert!(reduce_feedin(&routes, &prices).is_empty());
        }
    }

    #[test]
    fn unprofitable_leg_scores_minus_cost() {
        let (routes, prices) = g1_priced(0.5);
        for (id, r) in routes.iter() {
            for (i, leg) in r.legs().iter().enumerate() {
                assert_eq!(leg_score(&routes, &prices, id, i), -leg.cost);
            }
        }
    }

    #[test]
    fn first_leg_cycle_excluded() {
        let net = triangle();
        let routes = enumerate_feedin_routes(&net, 12.0, DEFAULT_ROUTE_CEILING).unwrap();
        let alt = AltTransport::from_cost_factor(&net, &routes, 0.0, 20.0).unwrap();
        let prices = PriceTable::build(&routes, &alt).unwrap();
        let reduced = reduce_feedin(&routes, &prices);
        let cyc = routes.find(&[NodeId(0), NodeId(1), NodeId(0), NodeId(2)]).unwrap();
        assert!(reduced.contains(&cyc));
        let minus = reduce_supplyopt(&routes, &prices, &reduced);
        assert!(!minus.contains(&cyc));
        assert!(minus.iter().all(|&k| reduced.contains(&k)));
    }

    #[test]
    fn feedout_reduction_is_a_bijection() {
        let net = g1();
        let back = net.reverse();
        let fin = enumerate_feedin_routes(&back, 10.0, DEFAULT_ROUTE_CEILING).unwrap();
        let alt = AltTransport::from_cost_factor(&back, &fin, 1.0, 2.5).unwrap();
        let prices = PriceTable::build(&fin, &alt).unwrap();
        let minus = reduce_supplyopt(&fin, &prices, &reduce_feedin(&fin, &prices));
        let fout = enumerate_feedout_routes(&net, 10.0, DEFAULT_ROUTE_CEILING).unwrap();
        let kept = reduce_feedout(&fout, &fin, &minus);
        assert_eq!(kept.len(), minus.len());
        let labels: Vec<String> = kept.iter().map(|&k| fout.get(k).label(&net)).collect();
        assert_eq!(labels, vec!["I>A"]);
    }
}
