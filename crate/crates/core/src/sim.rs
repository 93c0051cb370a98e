//! Replays a conversion plan against a stripe-to-node layout.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convert::{execute, AccessReport, ConvertError, ConvertibleCode};
use crate::field::FieldElem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("layout: {0}")]
    Layout(String),
    #[error(transparent)]
    Convert(#[from] ConvertError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stripe {
    /// Initial stripe, zero-based.
    Initial(usize),
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub stripe: Stripe,
    pub label: String,
    pub node: String,
}

/// Where every stored symbol lives. Unchanged final symbols may be omitted;
/// they stay on the node of their initial symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterLayout {
    pub nodes: Vec<String>,
    pub placement: Vec<Placement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NodeIo {
    pub reads: usize,
    pub writes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub nodes: BTreeMap<String, NodeIo>,
    pub total_reads: usize,
    pub total_writes: usize,
    /// Unchanged symbols, all left on their original node.
    pub unchanged_in_place: usize,
    pub access: AccessReport,
}

/// All `(stripe, label)` slots that need a node.
fn slots(cc: &ConvertibleCode) -> Vec<(Stripe, String)> {
    let mut out = Vec::new();
    for (i, c) in cc.initial.iter().enumerate() {
        out.extend(c.code.labels().iter().map(|l| (Stripe::Initial(i), l.clone())));
    }
    let labels = cc.final_code.code.labels();
    out.extend(cc.plan.written.iter().map(|w| (Stripe::Final, labels[w.final_coord].clone())));
    out
}

impl ClusterLayout {
    pub fn single_node(cc: &ConvertibleCode, node: &str) -> Self {
        let placement =
            slots(cc).into_iter().map(|(stripe, label)| Placement { stripe, label, node: node.to_string() }).collect();
        ClusterLayout { nodes: vec![node.to_string()], placement }
    }

    /// One node per stored symbol, named after the symbol's label.
    pub fn per_symbol(cc: &ConvertibleCode) -> Self {
        let placement: Vec<Placement> =
            slots(cc).into_iter().map(|(stripe, label)| Placement { stripe, node: label.clone(), label }).collect();
        ClusterLayout { nodes: placement.iter().map(|p| p.node.clone()).collect(), placement }
    }

    pub fn round_robin(cc: &ConvertibleCode, count: usize) -> Self {
        let nodes: Vec<String> = (0..count.max(1)).map(|i| format!("node{i}")).collect();
        let placement = slots(cc)
            .into_iter()
            .enumerate()
            .map(|(i, (stripe, label))| Placement { stripe, label, node: nodes[i % nodes.len()].clone() })
            .collect();
        ClusterLayout { nodes, placement }
    }

    fn index(&self, cc: &ConvertibleCode) -> Result<HashMap<(Stripe, String), String>, SimError> {
        let bad = |m: String| Err(SimError::Layout(m));
        let mut map = HashMap::new();
        for p in &self.placement {
            if !self.nodes.contains(&p.node) {
                return bad(format!("unknown node {}", p.node));
            }
            if map.insert((p.stripe, p.label.clone()), p.node.clone()).is_some() {
                return bad(format!("{:?}/{} placed twice", p.stripe, p.label));
            }
        }
        for (stripe, label) in slots(cc) {
            if !map.contains_key(&(stripe, label.clone())) {
                return bad(format!("{stripe:?}/{label} is not placed"));
            }
        }
        let final_labels = cc.final_code.code.labels();
        for (i, pairs) in cc.plan.unchanged.iter().enumerate() {
            for p in pairs {
                let label = &final_labels[p.final_coord];
                let home = map[&(Stripe::Initial(i), cc.initial[i].code.labels()[p.initial_coord].clone())].clone();
                match map.get(&(Stripe::Final, label.clone())) {
                    Some(node) if *node != home => return bad(format!("unchanged symbol {label} would move")),
                    _ => {}
                }
            }
        }
        Ok(map)
    }
}

/// Runs the conversion and charges every read and write to its node.
pub fn simulate(cc: &ConvertibleCode, layout: &ClusterLayout, codewords: &[Vec<FieldElem>]) -> Result<SimReport, SimError> {
    let map = layout.index(cc)?;
    let (_, access) = execute(cc, codewords)?;
    let mut nodes: BTreeMap<String, NodeIo> = layout.nodes.iter().map(|n| (n.clone(), NodeIo::default())).collect();
    for &(i, c) in &access.trace.reads {
        let node = &map[&(Stripe::Initial(i), cc.initial[i].code.labels()[c].clone())];
        nodes.get_mut(node).unwrap().reads += 1;
    }
    let labels = cc.final_code.code.labels();
    for &c in &access.trace.writes {
        nodes.get_mut(&map[&(Stripe::Final, labels[c].clone())]).unwrap().writes += 1;
    }
    Ok(SimReport {
        total_reads: nodes.values().map(|n| n.reads).sum(),
        total_writes: nodes.values().map(|n| n.writes).sum(),
        unchanged_in_place: access.unchanged.iter().sum(),
        nodes,
        access,
    })
}
