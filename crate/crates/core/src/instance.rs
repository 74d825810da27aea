//! Instance documents (JSON) and their validated in-memory form.
//!
//! ```json
//! {
//!   "nodes": ["A", "I"],
//!   "interchange": "I",
//!   "edges": [{"from": "A", "to": "I", "rho": 2, "time": 5},
//!             {"from": "I", "to": "A", "rho": 2, "time": 5}],
//!   "demand": {"A": 10},
//!   "supply": {"A": 10},
//!   "time_window": 10,
//!   "value_of_time": 1,
//!   "cost_factor": 2.5
//! }
//! ```
//!
//! Exactly one of `cost_factor` and `alt_transport` must be present.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{FeederError, Result};
use crate::network::{Edge, Network, NodeId};
use crate::pricing::AltEntry;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub rho: f64,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AltRecord {
    pub eta: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub nodes: Vec<String>,
    pub interchange: String,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub demand: BTreeMap<String, f64>,
    #[serde(default)]
    pub supply: BTreeMap<String, f64>,
    pub time_window: f64,
    pub value_of_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_transport: Option<BTreeMap<String, AltRecord>>,
}

/// How the perceived cost of the best alternate transport is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum PriceModel {
    /// Alternate transport derived from the graph with cost factor `b`.
    CostFactor(f64),
    /// Per-node `(eta, zeta)` table; the interchange entry is always null.
    Explicit(Vec<Option<AltEntry>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub network: Network,
    pub time_window: f64,
    pub value_of_time: f64,
    pub price_model: PriceModel,
}

impl Instance {
    pub fn total_supply(&self) -> f64 {
        self.network.supply().iter().sum()
    }

    pub fn cost_factor(&self) -> Option<f64> {
        match self.price_model {
            PriceModel::CostFactor(b) => Some(b),
            PriceModel::Explicit(_) => None,
        }
    }

    pub fn with_cost_factor(&self, b: f64) -> Instance {
        Instance { price_model: PriceModel::CostFactor(b), ..self.clone() }
    }

    pub fn from_document(doc: &InstanceDocument) -> Result<Instance> {
        let network = network_from_document(doc)?;
        if !(doc.time_window.is_finite() && doc.time_window > 0.0) {
            return Err(FeederError::InvalidParameter("time_window must be positive".into()));
        }
        if !(doc.value_of_time.is_finite() && doc.value_of_time >= 0.0) {
            return Err(FeederError::InvalidParameter("value_of_time must be non-negative".into()));
        }
        let price_model = match (&doc.cost_factor, &doc.alt_transport) {
            (Some(b), None) => {
                if !(b.is_finite() && *b >= 0.0) {
                    return Err(FeederError::InvalidParameter("cost_factor must be non-negative".into()));
                }
                PriceModel::CostFactor(*b)
            }
            (None, Some(table)) => {
                PriceModel::Explicit(alt_table(&network, table, doc.value_of_time)?)
            }
            (Some(_), Some(_)) => {
                return Err(FeederError::Schema(
                    "cost_factor and alt_transport are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(FeederError::Schema("one of cost_factor or alt_transport is required".into()))
            }
        };
        Ok(Instance {
            network,
            time_window: doc.time_window,
            value_of_time: doc.value_of_time,
            price_model,
        })
    }

    pub fn to_document(&self) -> InstanceDocument {
        let net = &self.network;
        let named = |values: &[f64]| -> BTreeMap<String, f64> {
            net.nodes()
                .filter(|l| values[l.0] != 0.0)
                .map(|l| (net.name(l).to_string(), values[l.0]))
                .collect()
        };
        let (cost_factor, alt_transport) = match &self.price_model {
            PriceModel::CostFactor(b) => (Some(*b), None),
            PriceModel::Explicit(entries) => (
                None,
                Some(
                    net.nodes()
                        .filter_map(|l| {
                            entries[l.0].map(|e| (net.name(l).to_string(), AltRecord { eta: e.eta, zeta: e.zeta }))
                        })
                        .collect(),
                ),
            ),
        };
        InstanceDocument {
            nodes: net.names().to_vec(),
            interchange: net.name(net.interchange()).to_string(),
            edges: net
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    from: net.name(e.from).to_string(),
                    to: net.name(e.to).to_string(),
                    rho: e.cost,
                    time: e.time,
                })
                .collect(),
            demand: named(net.demand()),
            supply: named(net.supply()),
            time_window: self.time_window,
            value_of_time: self.value_of_time,
            cost_factor,
            alt_transport,
        }
    }
}

fn network_from_document(doc: &InstanceDocument) -> Result<Network> {
    let lookup = |name: &str| -> Result<NodeId> {
        doc.nodes
            .iter()
            .position(|n| n == name)
            .map(NodeId)
            .ok_or_else(|| FeederError::UnknownNode(name.to_string()))
    };
    let interchange = doc
        .nodes
        .iter()
        .position(|n| *n == doc.interchange)
        .map(NodeId)
        .ok_or_else(|| FeederError::InvalidNetwork(format!("missing interchange `{}`", doc.interchange)))?;
    let edges = doc
        .edges
        .iter()
        .map(|e| Ok(Edge::new(lookup(&e.from)?, lookup(&e.to)?, e.rho, e.time)))
        .collect::<Result<Vec<_>>>()?;
    let per_node = |map: &BTreeMap<String, f64>| -> Result<Vec<f64>> {
        let mut values = vec![0.0; doc.nodes.len()];
        for (name, &v) in map {
            values[lookup(name)?.0] = v;
        }
        Ok(values)
    };
    Network::new(doc.nodes.clone(), interchange, edges, per_node(&doc.demand)?, per_node(&doc.supply)?)
}

fn alt_table(net: &Network, table: &BTreeMap<String, AltRecord>, alpha: f64) -> Result<Vec<Option<AltEntry>>> {
    let mut entries = vec![None; net.node_count()];
    for (name, rec) in table {
        let l = net.node(name)?;
        if !(rec.eta.is_finite() && rec.zeta.is_finite() && rec.eta >= 0.0) {
            return Err(FeederError::InvalidParameter(format!("bad alt_transport entry for `{name}`")));
        }
        if l == net.interchange() {
            if rec.eta != 0.0 || rec.zeta != 0.0 {
                return Err(FeederError::InvalidParameter(
                    "alternate transport at the interchange must be the null trip".into(),
                ));
            }
            continue;
        }
        if alpha * rec.eta + rec.zeta < 0.0 {
            return Err(FeederError::InvalidParameter(format!("negative perceived cost at `{name}`")));
        }
        entries[l.0] = Some(AltEntry { eta: rec.eta, zeta: rec.zeta });
    }
    for l in net.nodes() {
        if l != net.interchange() && entries[l.0].is_none() {
            return Err(FeederError::MissingAltTransport(net.name(l).to_string()));
        }
    }
    Ok(entries)
}

/// Parse and validate an instance document, returning only its network.
pub fn load_network(document: &str) -> Result<Network> {
    let doc: InstanceDocument = serde_json::from_str(document)?;
    network_from_document(&doc)
}

/// Parse and validate a full instance document.
pub fn load_instance(document: &str) -> Result<Instance> {
    let doc: InstanceDocument = serde_json::from_str(document)?;
    Instance::from_document(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const G1_JSON: &str = r#"{
        "nodes": ["A", "I"],
        "interchange": "I",
        "edges": [{"from": "A", "to": "I", "rho": 2, "time": 5},
                  {"from": "I", "to": "A", "rho": 2, "time": 5}],
        "demand": {"A": 10},
        "supply": {"A": 10},
        "time_window": 10,
        "value_of_time": 1,
        "cost_factor": 2.5
    }"#;

    #[test]
    fn loads_g1() {
        let net = load_network(G1_JSON).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.edges().len(), 2);
        let inst = load_instance(G1_JSON).unwrap();
        assert_eq!(inst.cost_factor(), Some(2.5));
        assert_eq!(inst.network.demand(), &[10.0, 0.0]);
    }

    #[test]
    fn document_round_trip() {
        let inst = load_instance(G1_JSON).unwrap();
        let doc = inst.to_document();
        assert_eq!(Instance::from_document(&doc).unwrap(), inst);
    }

    #[test]
    fn zero_time_rejected() {
        let text = G1_JSON.replacen("\"time\": 5", "\"time\": 0", 1);
        let err = load_network(&text).unwrap_err();
        assert!(err.to_string().contains("non-positive edge time"), "{err}");
    }

    #[test]
    fn interchange_demand_rejected() {
        let text = G1_JSON.replace("\"demand\": {\"A\": 10}", "\"demand\": {\"A\": 10, \"I\": 3}");
        let err = load_network(&text).unwrap_err();
        assert!(err.to_string().contains("interchange demand must be zero"), "{err}");
    }

    #[test]
    fn missing_interchange_rejected() {
        let text = G1_JSON.replace("\"interchange\": \"I\"", "\"interchange\": \"Z\"");
        assert!(load_network(&text).unwrap_err().to_string().contains("missing interchange"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = G1_JSON.replace("\"value_of_time\"", "\"bogus\": 1, \"value_of_time\"");
        assert!(matches!(load_instance(&text), Err(FeederError::Schema(_))));
    }

    #[test]
    fn price_modes_are_exclusive() {
        let both = G1_JSON.replace(
            "\"cost_factor\": 2.5",
            "\"cost_factor\": 2.5, \"alt_transport\": {\"A\": {\"eta\": 5, \"zeta\": 5}}",
        );
        assert!(load_instance(&both).is_err());
        let explicit = G1_JSON.replace("\"cost_factor\": 2.5", "\"alt_transport\": {\"A\": {\"eta\": 5, \"zeta\": 5}}");
        let inst = load_instance(&explicit).unwrap();
        match inst.price_model {
            PriceModel::Explicit(entries) => {
                assert_eq!(entries[0], Some(AltEntry { eta: 5.0, zeta: 5.0 }));
                assert_eq!(entries[1], None);
            }
            _ => panic!("expected explicit table"),
        }
    }
}
