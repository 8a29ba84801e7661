//! Text syntax for majority expressions.
//!
//! ```text
//! expr := term "'"*
//! term := variable | "0" | "1"
//!       | "M(" expr "," expr "," expr ")"
//!       | "M5(" expr "," expr "," expr "," expr "," expr ")"
//! ```
//!
//! A trailing apostrophe negates. Whitespace is ignored. Identical
//! subexpressions become one shared node.

use std::collections::HashMap;

use thiserror::Error;

use crate::network::{Network, NetworkBuilder, NetworkError, Node, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at offset {pos}: {gate} takes {expected} operands, got {got}")]
    Arity { pos: usize, gate: &'static str, expected: usize, got: usize },
    #[error("at offset {pos}: unknown variable `{name}`")]
    UnknownVariable { pos: usize, name: String },
    #[error("no variables declared")]
    NoVariables,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::Arity { pos, .. }
            | ParseError::UnknownVariable { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

/// Parses `text` with `variable_names[i]` bound to input `i`.
pub fn parse_expr<S: AsRef<str>>(text: &str, variable_names: &[S]) -> Result<Network, ParseError> {
    if variable_names.is_empty() {
        return Err(ParseError::NoVariables);
    }
    let vars = variable_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_ref().to_string(), i))
        .collect();
    let mut p = Parser {
        src: text,
        pos: 0,
        vars,
        builder: NetworkBuilder::new(variable_names.len()),
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(p.builder.build(out)?.pruned())
}

/// Parses several expressions into one shared node pool; returns the pool
/// (output set to the first root) and the root of each expression.
pub fn parse_shared<S: AsRef<str>>(
    texts: &[&str],
    variable_names: &[S],
) -> Result<(Network, Vec<NodeId>), ParseError> {
    if variable_names.is_empty() {
        return Err(ParseError::NoVariables);
    }
    let vars: HashMap<String, usize> = variable_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_ref().to_string(), i))
        .collect();
    let mut builder = NetworkBuilder::new(variable_names.len());
    let mut roots = Vec::new();
    for text in texts {
        let mut p = Parser { src: text, pos: 0, vars: vars.clone(), builder };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        builder = p.builder;
        roots.push(r);
    }
    let first = *roots.first().ok_or_else(|| ParseError::Syntax { pos: 0, msg: "no expressions".into() })?;
    Ok((builder.build(first)?, roots))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: HashMap<String, usize>,
    builder: NetworkBuilder,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NodeId, ParseError> {
        let mut id = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c @ ('\'' | '’' | '′')) => {
                    self.pos += c.len_utf8();
                    id = self.builder.not(id);
                }
                _ => return Ok(id),
            }
        }
    }

    fn term(&mut self) -> Result<NodeId, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        if c.is_ascii_digit() {
            let len = self.src[start..].find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(self.src.len() - start);
            let lit = &self.src[start..start + len];
            return match lit {
                "0" | "1" => {
                    self.pos += 1;
                    Ok(self.builder.constant(lit == "1"))
                }
                _ => Err(self.syntax("constants are `0` or `1`")),
            };
        }
        if !(c.is_alphabetic() || c == '_') {
            return Err(self.syntax(&format!("unexpected `{c}`")));
        }
        let len = self.src[start..]
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        let name = &self.src[start..start + len];
        self.pos += len;

        let gate = match name {
            "M" => Some(("M", 3)),
            "M5" => Some(("M5", 5)),
            _ => None,
        };
        if let Some((gate, expected)) = gate {
            let save = self.pos;
            if self.eat('(') {
                let args = self.args()?;
                if args.len() != expected {
                    return Err(ParseError::Arity { pos: start, gate, expected, got: args.len() });
                }
                let node = if expected == 3 {
                    Node::Maj3(args.try_into().unwrap())
                } else {
                    Node::Maj5(args.try_into().unwrap())
                };
                return Ok(self.builder.add(node));
            }
            self.pos = save;
        }
        match self.vars.get(name) {
            Some(&v) => Ok(self.builder.input(v)),
            None => Err(ParseError::UnknownVariable { pos: start, name: name.to_string() }),
        }
    }

    /// Operand list after an opening parenthesis, through the closing one.
    fn args(&mut self) -> Result<Vec<NodeId>, ParseError> {
        let mut args = vec![self.expr()?];
        loop {
            if self.eat(',') {
                args.push(self.expr()?);
            } else if self.eat(')') {
                return Ok(args);
            } else {
                self.skip_ws();
                return Err(self.syntax("expected `,` or `)`"));
            }
        }
    }
}

/// Prints the output cone of `net` in the same syntax. Shared nodes are
/// written out at each use, so the result re-parses to the same network.
pub fn to_expr<S: AsRef<str>>(net: &Network, variable_names: &[S]) -> String {
    let live = Network::reachable_from(net.nodes(), &[net.output()]);
    let mut memo: Vec<Option<String>> = vec![None; net.nodes().len()];
    for (i, node) in net.nodes().iter().enumerate() {
        if !live[i] {
            continue;
        }
        let child = |memo: &[Option<String>], c: &NodeId| memo[c.0].clone().unwrap_or_default();
        let text = match node {
            Node::Input(v) => variable_names
                .get(*v)
                .map_or_else(|| format!("x{v}"), |n| n.as_ref().to_string()),
            Node::Const(b) => (if *b { "1" } else { "0" }).to_string(),
            Node::Not(c) => format!("{}'", child(&memo, c)),
            Node::Maj3(cs) => format!(
                "M({})",
                cs.iter().map(|c| child(&memo, c)).collect::<Vec<_>>().join(",")
            ),
            Node::Maj5(cs) => format!(
                "M5({})",
                cs.iter().map(|c| child(&memo, c)).collect::<Vec<_>>().join(",")
            ),
        };
        memo[i] = Some(text);
    }
    memo[net.output().0].take().unwrap_or_default()
}

/// Default variable names `A, B, C, …` for `n` inputs.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}
