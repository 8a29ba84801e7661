//! Shared-node majority/inverter networks.
//!
//! A [`Network`] is a topologically ordered node list: every child
//! reference points at an earlier node, so acyclicity holds by
//! construction. Negation is a node of its own rather than an edge flag,
//! which keeps the inverter census a plain node count.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::truth_table::{assignment_of, TruthTable, TruthTableError, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Input(usize),
    Const(bool),
    Not(NodeId),
    Maj3([NodeId; 3]),
    Maj5([NodeId; 5]),
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::Input(_) | Node::Const(_) => &[],
            Node::Not(c) => std::slice::from_ref(c),
            Node::Maj3(cs) => cs,
            Node::Maj5(cs) => cs,
        }
    }

    pub fn is_majority(&self) -> bool {
        matches!(self, Node::Maj3(_) | Node::Maj5(_))
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Node::Input(_) => "input",
            Node::Const(_) => "const",
            Node::Not(_) => "not",
            Node::Maj3(_) => "maj3",
            Node::Maj5(_) => "maj5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("network has no nodes")]
    Empty,
    #[error("node {node} references child {child} which is not an earlier node")]
    BadChild { node: usize, child: usize },
    #[error("node {node} reads input {var} but the network has {n_vars} inputs")]
    BadInput { node: usize, var: usize, n_vars: usize },
    #[error("output {0} is not a node of the network")]
    BadOutput(usize),
    #[error("network needs at least one input variable")]
    NoInputs,
    #[error("assignment has {got} bits, network has {expected} inputs")]
    Arity { expected: usize, got: usize },
    #[error("truth-table extraction supports at most {MAX_VARS} inputs, network has {0}")]
    Capacity(usize),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    TruthTable(#[from] TruthTableError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Network {
    n_vars: usize,
    nodes: Vec<Node>,
    output: NodeId,
}

impl Network {
    pub fn new(n_vars: usize, nodes: Vec<Node>, output: NodeId) -> Result<Self, NetworkError> {
        if n_vars == 0 {
            return Err(NetworkError::NoInputs);
        }
        if nodes.is_empty() {
            return Err(NetworkError::Empty);
        }
        for (i, node) in nodes.iter().enumerate() {
            if let Node::Input(var) = *node {
                if var >= n_vars {
                    return Err(NetworkError::BadInput { node: i, var, n_vars });
                }
            }
            if let Some(c) = node.children().iter().find(|c| c.0 >= i) {
                return Err(NetworkError::BadChild { node: i, child: c.0 });
            }
        }
        if output.0 >= nodes.len() {
            return Err(NetworkError::BadOutput(output.0));
        }
        Ok(Self { n_vars, nodes, output })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    /// Same node pool, different output node.
    pub fn with_output(&self, output: NodeId) -> Result<Self, NetworkError> {
        if output.0 >= self.nodes.len() {
            return Err(NetworkError::BadOutput(output.0));
        }
        Ok(Self { output, ..self.clone() })
    }

    /// Flags for every node reachable from `roots`.
    pub fn reachable_from(nodes: &[Node], roots: &[NodeId]) -> Vec<bool> {
        let mut seen = vec![false; nodes.len()];
        let mut stack: Vec<NodeId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id.0], true) {
                continue;
            }
            stack.extend_from_slice(nodes[id.0].children());
        }
        seen
    }

    /// Drops nodes outside the output cone and renumbers the rest,
    /// preserving relative order.
    pub fn pruned(&self) -> Network {
        let keep = Self::reachable_from(&self.nodes, &[self.output]);
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let map = |remap: &[usize], c: NodeId| NodeId(remap[c.0]);
        for (i, node) in self.nodes.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            remap[i] = nodes.len();
            nodes.push(match *node {
                Node::Not(c) => Node::Not(map(&remap, c)),
                Node::Maj3(cs) => Node::Maj3(cs.map(|c| map(&remap, c))),
                Node::Maj5(cs) => Node::Maj5(cs.map(|c| map(&remap, c))),
                other => other,
            });
        }
        Network { n_vars: self.n_vars, nodes, output: NodeId(remap[self.output.0]) }
    }

    /// Values of every node under one assignment.
    pub fn node_values(&self, assignment: &[bool]) -> Result<Vec<bool>, NetworkError> {
        if assignment.len() != self.n_vars {
            return Err(NetworkError::Arity { expected: self.n_vars, got: assignment.len() });
        }
        let mut vals: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Input(i) => assignment[i],
                Node::Const(b) => b,
                Node::Not(c) => !vals[c.0],
                Node::Maj3(cs) => majority(cs.iter().map(|c| vals[c.0])),
                Node::Maj5(cs) => majority(cs.iter().map(|c| vals[c.0])),
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, NetworkError> {
        Ok(self.node_values(assignment)?[self.output.0])
    }

    /// Exhaustive evaluation over all `2^n_vars` assignments in minterm order.
    pub fn truth_table(&self) -> Result<TruthTable, NetworkError> {
        if self.n_vars > MAX_VARS {
            return Err(NetworkError::Capacity(self.n_vars));
        }
        let bits = (0..1usize << self.n_vars)
            .map(|k| self.evaluate(&assignment_of(k, self.n_vars)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruthTable::from_bits(self.n_vars, bits)?)
    }

    /// Node-per-line text form; see [`Network::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("network v1\ninputs {}\n", self.n_vars);
        for (i, node) in self.nodes.iter().enumerate() {
            out.push_str(&format!("{i} {}", node.kind_name()));
            match *node {
                Node::Input(v) => out.push_str(&format!(" {v}")),
                Node::Const(b) => out.push_str(if b { " 1" } else { " 0" }),
                _ => {
                    for c in node.children() {
                        out.push_str(&format!(" {c}"));
                    }
                }
            }
            out.push('\n');
        }
        out.push_str(&format!("output {}\n", self.output));
        out
    }

    /// Parses the format written by [`Network::to_text`]:
    ///
    /// ```text
    /// network v1
    /// inputs 3
    /// 0 input 0
    /// 1 input 1
    /// 2 const 0
    /// 3 maj3 0 1 2
    /// output 3
    /// ```
    ///
    /// Blank lines and `#` comments are ignored. Node ids must be dense
    /// and in order.
    pub fn from_text(text: &str) -> Result<Network, NetworkError> {
        let err = |line: usize, msg: &str| NetworkError::Format { line, msg: msg.into() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        match lines.next() {
            Some((_, "network v1")) => {}
            Some((n, _)) => return Err(err(n, "expected header `network v1`")),
            None => return Err(err(0, "empty document")),
        }
        let n_vars = match lines.next() {
            Some((n, l)) => l
                .strip_prefix("inputs ")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| err(n, "expected `inputs <count>`"))?,
            None => return Err(err(0, "missing `inputs` line")),
        };

        let mut nodes = Vec::new();
        let mut output = None;
        for (n, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "output" {
                let id = fields
                    .get(1)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err(n, "expected `output <id>`"))?;
                output = Some(NodeId(id));
                continue;
            }
            if output.is_some() {
                return Err(err(n, "node after `output` line"));
            }
            let id: usize = fields[0].parse().map_err(|_| err(n, "expected node id"))?;
            if id != nodes.len() {
                return Err(err(n, "node ids must be dense and increasing"));
            }
            let kind = *fields.get(1).ok_or_else(|| err(n, "missing node kind"))?;
            let args = fields[2..]
                .iter()
                .map(|a| a.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err(n, "node arguments must be integers"))?;
            let ids = |k: usize| -> Result<Vec<NodeId>, NetworkError> {
                if args.len() != k {
                    return Err(err(n, &format!("{kind} takes {k} arguments, got {}", args.len())));
                }
                Ok(args.iter().map(|&a| NodeId(a)).collect())
            };
            let node = match kind {
                "input" => Node::Input(ids(1)?[0].0),
                "const" => match ids(1)?[0].0 {
                    0 => Node::Const(false),
                    1 => Node::Const(true),
                    _ => return Err(err(n, "const value must be 0 or 1")),
                },
                "not" => Node::Not(ids(1)?[0]),
                "maj3" => Node::Maj3(ids(3)?.try_into().unwrap()),
                "maj5" => Node::Maj5(ids(5)?.try_into().unwrap()),
                other => return Err(err(n, &format!("unknown node kind `{other}`"))),
            };
            nodes.push(node);
        }
        let output = output.ok_or_else(|| err(0, "missing `output` line"))?;
        Network::new(n_vars, nodes, output)
    }
}

pub fn majority<I: IntoIterator<Item = bool>>(values: I) -> bool {
    let (mut ones, mut total) = (0usize, 0usize);
    for v in values {
        ones += v as usize;
        total += 1;
    }
    2 * ones > total
}

/// Incremental, hash-consed network construction. Structurally identical
/// nodes are created once and shared.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    n_vars: usize,
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl NetworkBuilder {
    pub fn new(n_vars: usize) -> Self {
        Self { n_vars, nodes: Vec::new(), index: HashMap::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Adds `node`, or returns the existing id of an identical node.
    /// Children must already exist.
    pub fn add(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        debug_assert!(node.children().iter().all(|c| c.0 < self.nodes.len()));
        let id = NodeId(self.nodes.len());
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    pub fn input(&mut self, var: usize) -> NodeId {
        self.add(Node::Input(var))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.add(Node::Const(value))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        self.add(Node::Not(a))
    }

    pub fn maj3(&mut self, a: NodeId, b: NodeId, c: NodeId) -> NodeId {
        self.add(Node::Maj3([a, b, c]))
    }

    pub fn maj5(&mut self, children: [NodeId; 5]) -> NodeId {
        self.add(Node::Maj5(children))
    }

    pub fn build(&self, output: NodeId) -> Result<Network, NetworkError> {
        Network::new(self.n_vars, self.nodes.clone(), output)
    }
}
