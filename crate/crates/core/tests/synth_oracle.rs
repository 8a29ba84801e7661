//! Brute-force check of synthesis minimality. Every network of up to a few
//! nodes is enumerated structurally; each node's cone is costed from
//! scratch and the cheapest cone per function is compared to the atlas.

use std::collections::HashMap;

use majqca::parse::parse_expr;
use majqca::synth::{synthesize_all_3var, SearchBudget};

#[derive(Clone, Copy)]
enum Op {
    Not(usize),
    Maj3([usize; 3]),
    Maj5([usize; 5]),
}

/// Signals 0..5 are the constants and the inputs; later ones are nodes.
const BASE: usize = 5;

fn base_value(sig: usize, row: usize) -> bool {
    // A is the most significant bit of the row index.
    match sig {
        0 => false,
        1 => true,
        v => row >> (4 - v) & 1 == 1,
    }
}

struct Enum {
    allow_maj5: bool,
    max_nodes: usize,
    ops: Vec<Op>,
    /// Per signal, its value on each of the 8 rows.
    values: Vec<[bool; 8]>,
    best: HashMap<[bool; 8], (usize, usize, usize)>,
}

impl Enum {
    fn new(allow_maj5: bool, max_nodes: usize) -> Self {
        let values = (0..BASE).map(|s| std::array::from_fn(|r| base_value(s, r))).collect();
        let mut e = Enum { allow_maj5, max_nodes, ops: Vec::new(), values, best: HashMap::new() };
        for s in 0..BASE {
            let v = e.values[s];
            e.offer(v, (0, 0, 0));
        }
        e
    }

    fn offer(&mut self, f: [bool; 8], c: (usize, usize, usize)) {
        let slot = self.best.entry(f).or_insert(c);
        if c < *slot {
            *slot = c;
        }
    }

    /// (gates, levels, inverters) of the cone rooted at node `k`.
    fn cone_cost(&self, k: usize) -> (usize, usize, usize) {
        let mut seen = vec![false; self.ops.len()];
        let mut stack = vec![k];
        let (mut gates, mut inv) = (0, 0);
        while let Some(n) = stack.pop() {
            if seen[n] {
                continue;
            }
            seen[n] = true;
            gates += 1;
            let kids: Vec<usize> = match self.ops[n] {
                Op::Not(a) => {
                    inv += 1;
                    vec![a]
                }
                Op::Maj3(c) => c.to_vec(),
                Op::Maj5(c) => c.to_vec(),
            };
            stack.extend(kids.into_iter().filter(|&s| s >= BASE).map(|s| s - BASE));
        }
        (gates, self.depth(k + BASE), inv)
    }

    fn depth(&self, sig: usize) -> usize {
        if sig < BASE {
            return 0;
        }
        match self.ops[sig - BASE] {
            Op::Not(a) => self.depth(a),
            Op::Maj3(c) => 1 + c.iter().map(|&s| self.depth(s)).max().unwrap(),
            Op::Maj5(c) => 1 + c.iter().map(|&s| self.depth(s)).max().unwrap(),
        }
    }

    fn eval(&self, op: Op) -> [bool; 8] {
        std::array::from_fn(|r| {
            let ones = |c: &[usize]| c.iter().filter(|&&s| self.values[s][r]).count();
            match op {
                Op::Not(a) => !self.values[a][r],
                Op::Maj3(c) => ones(&c) >= 2,
                Op::Maj5(c) => ones(&c) >= 3,
            }
        })
    }

    fn candidates(&self) -> Vec<Op> {
        let n = self.values.len();
        let mut out: Vec<Op> = (0..n).map(Op::Not).collect();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    out.push(Op::Maj3([a, b, c]));
                    if self.allow_maj5 {
                        for d in c..n {
                            for e in d..n {
                                out.push(Op::Maj5([a, b, c, d, e]));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn run(&mut self) {
        if self.ops.len() == self.max_nodes {
            return;
        }
        for op in self.candidates() {
            let v = self.eval(op);
            self.ops.push(op);
            self.values.push(v);
            let c = self.cone_cost(self.ops.len() - 1);
            self.offer(v, c);
            self.run();
            self.ops.pop();
            self.values.pop();
        }
    }
}

fn mask(f: &[bool; 8]) -> u8 {
    (0..8).filter(|&r| f[r]).fold(0u8, |m, r| m | 1 << r)
}

fn compare(allow_maj5: bool, max_nodes: usize, budget: SearchBudget) {
    let mut e = Enum::new(allow_maj5, max_nodes);
    e.run();
    let by_mask: HashMap<u8, (usize, usize, usize)> = e.best.iter().map(|(f, c)| (mask(f), *c)).collect();
    let atlas = synthesize_all_3var(&budget).unwrap();
    for (&m, entry) in &atlas.entries {
        let s = entry.result.as_ref().unwrap_or_else(|| panic!("{m:#04x} not synthesized"));
        let got = (s.cost.gate_count, s.cost.levels, s.cost.inverter_count);
        match by_mask.get(&m) {
            Some(&want) => assert_eq!(got, want, "{:?}: {}", entry.minterms, s.expression),
            None => assert!(got.0 > max_nodes, "{:?}: {} beats exhaustive search", entry.minterms, s.expression),
        }
        let net = parse_expr(&s.expression, &["A", "B", "C"]).unwrap();
        assert_eq!(net.truth_table().unwrap().to_mask() as u8, m);
    }
}

#[test]
fn atlas_matches_exhaustive_search_up_to_three_nodes() {
    compare(true, 3, SearchBudget::default());
}

#[test]
fn maj3_atlas_matches_exhaustive_search_up_to_four_nodes() {
    let budget = SearchBudget { max_gates: 6, allow_maj5: false, ..SearchBudget::default() };
    compare(false, 4, budget);
}
