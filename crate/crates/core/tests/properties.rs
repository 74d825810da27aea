use proptest::prelude::*;

use feeder_core::instance::Instance;
use feeder_core::network::NodeId;
use feeder_core::oracle::{generate, naive_routes, InstanceRecipe};
use feeder_core::pricing::perceived_cost_at;
use feeder_core::problems::{FeedInScenario, Form};
use feeder_core::routes::{enumerate_feedin_routes, enumerate_feedout_routes, Direction, DEFAULT_ROUTE_CEILING};

fn instance(seed: u64, nodes: usize) -> Instance {
    generate(&InstanceRecipe { seed, nodes, max_routes: 300, ..InstanceRecipe::default() }).unwrap()
}

fn sorted(set: &feeder_core::RouteSet) -> Vec<Vec<NodeId>> {
    let mut v: Vec<Vec<NodeId>> = set.iter().map(|(_, r)| r.nodes().to_vec()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversal_is_an_involution(seed in 0u64..10_000, nodes in 2usize..=6) {
        let inst = instance(seed, nodes);
        let net = &inst.network;
        prop_assert_eq!(&net.reverse().reverse(), net);
        let fi = enumerate_feedin_routes(net, inst.time_window, DEFAULT_ROUTE_CEILING).unwrap();
        let fo_rev = enumerate_feedout_routes(&net.reverse(), inst.time_window, DEFAULT_ROUTE_CEILING).unwrap();
        prop_assert_eq!(fi.len(), fo_rev.len());
        for (_, r) in fi.iter() {
            let m = r.reversed();
            prop_assert_eq!(m.direction(), Direction::FeedOut);
            prop_assert_eq!(&m.reversed(), r);
            prop_assert!(fo_rev.find(m.nodes()).is_some());
            prop_assert_eq!(m.leg_count(), r.leg_count());
            for i in 0..r.leg_count() {
                let j = r.leg_count() - 1 - i;
                prop_assert!((m.legs()[j].cost - r.legs()[i].cost).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn enumeration_matches_naive_walks(seed in 0u64..10_000, nodes in 2usize..=6) {
        let inst = instance(seed, nodes);
        let net = &inst.network;
        let t = inst.time_window;
        prop_assert_eq!(
            sorted(&enumerate_feedin_routes(net, t, DEFAULT_ROUTE_CEILING).unwrap()),
            naive_routes(net, t, Direction::FeedIn).unwrap()
        );
        prop_assert_eq!(
            sorted(&enumerate_feedout_routes(net, t, DEFAULT_ROUTE_CEILING).unwrap()),
            naive_routes(net, t, Direction::FeedOut).unwrap()
        );
    }

    #[test]
    fn enumeration_is_monotone_in_window(seed in 0u64..10_000, nodes in 2usize..=5, shrink in 0.3f64..1.0) {
        let inst = instance(seed, nodes);
        let net = &inst.network;
        let big = sorted(&enumerate_feedin_routes(net, inst.time_window, DEFAULT_ROUTE_CEILING).unwrap());
        let small = sorted(&enumerate_feedin_routes(net, inst.time_window * shrink, DEFAULT_ROUTE_CEILING).unwrap());
        prop_assert!(small.iter().all(|r| big.binary_search(r).is_ok()));
    }

    #[test]
    fn legs_rebuild_the_route(seed in 0u64..10_000, nodes in 2usize..=6) {
        let inst = instance(seed, nodes);
        let net = &inst.network;
        for set in [
            enumerate_feedin_routes(net, inst.time_window, DEFAULT_ROUTE_CEILING).unwrap(),
            enumerate_feedout_routes(net, inst.time_window, DEFAULT_ROUTE_CEILING).unwrap(),
        ] {
            for (_, r) in set.iter() {
                let mut rebuilt: Vec<NodeId> = r.leg_nodes(0).to_vec();
                for i in 1..r.leg_count() {
                    prop_assert_eq!(r.leg_nodes(i)[0], net.interchange());
                    rebuilt.extend_from_slice(&r.leg_nodes(i)[1..]);
                }
                prop_assert_eq!(rebuilt.as_slice(), r.nodes());
                let c: f64 = r.legs().iter().map(|l| l.cost).sum();
                prop_assert!((c - r.cost()).abs() < 1e-9);
                for (k, &v) in r.nodes().iter().enumerate() {
                    let inner = k > 0 && k + 1 < r.nodes().len();
                    if inner && v == net.interchange() {
                        prop_assert!(r.legs().iter().any(|l| l.end == k));
                    }
                }
            }
        }
    }

    #[test]
    fn perceived_cost_is_monotone_and_concave(seed in 0u64..10_000, nodes in 2usize..=6, step in 0.05f64..1.0) {
        let inst = instance(seed, nodes);
        let net = &inst.network;
        let routes = enumerate_feedin_routes(net, inst.time_window, DEFAULT_ROUTE_CEILING).unwrap();
        for l in net.nodes() {
            let g: Vec<f64> = (0..12)
                .filter_map(|k| perceived_cost_at(&routes, l, inst.value_of_time, k as f64 * step, net.interchange()))
                .collect();
            for k in 1..g.len() {
                prop_assert!(g[k] >= g[k - 1] - 1e-9);
                if k + 1 < g.len() {
                    prop_assert!(g[k] >= 0.5 * (g[k - 1] + g[k + 1]) - 1e-9);
                }
            }
        }
    }

    #[test]
    fn pruned_and_full_feedin_agree(seed in 0u64..10_000, nodes in 2usize..=5, b in 1.0f64..4.0) {
        let inst = instance(seed, nodes).with_cost_factor(b);
        let sc = FeedInScenario::new(&inst, DEFAULT_ROUTE_CEILING).unwrap();
        let full = sc.solve_feedin(Form::Full).unwrap().objective;
        let red = sc.solve_feedin(Form::Reduced).unwrap().objective;
        prop_assert!((full - red).abs() <= 1e-8 * (1.0 + full.abs()));
    }
}
