//! Gate census and depth accounting.
//!
//! Inverters and constants add no depth: `levels` is the largest number of
//! majority nodes on any output-to-input path. Shared nodes are counted
//! once.

use serde::Serialize;

use crate::network::{Network, Node, NodeId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CostReport {
    pub maj3_count: usize,
    pub maj5_count: usize,
    pub inverter_count: usize,
    pub gate_count: usize,
    pub levels: usize,
}

impl CostReport {
    pub fn majority_count(&self) -> usize {
        self.maj3_count + self.maj5_count
    }

    /// Lexicographic synthesis objective: gates, then levels, then inverters.
    pub fn objective(&self) -> (usize, usize, usize) {
        (self.gate_count, self.levels, self.inverter_count)
    }
}

pub fn cost(net: &Network) -> CostReport {
    cost_of_roots(net.nodes(), &[net.output()])
}

/// Combined census of everything reachable from any of `roots`.
pub fn cost_of_roots(nodes: &[Node], roots: &[NodeId]) -> CostReport {
    let live = Network::reachable_from(nodes, roots);
    let mut depth = vec![0usize; nodes.len()];
    let mut report = CostReport::default();
    for (i, node) in nodes.iter().enumerate() {
        let child_depth = node.children().iter().map(|c| depth[c.0]).max().unwrap_or(0);
        depth[i] = match node {
            Node::Maj3(_) | Node::Maj5(_) => child_depth + 1,
            _ => child_depth,
        };
        if !live[i] {
            continue;
        }
        match node {
            Node::Maj3(_) => report.maj3_count += 1,
            Node::Maj5(_) => report.maj5_count += 1,
            Node::Not(_) => report.inverter_count += 1,
            Node::Input(_) | Node::Const(_) => {}
        }
    }
    report.gate_count = report.maj3_count + report.maj5_count + report.inverter_count;
    report.levels = roots.iter().map(|r| depth[r.0]).max().unwrap_or(0);
    report
}
