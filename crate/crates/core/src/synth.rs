//! Exact synthesis of small majority/inverter networks.
//!
//! Functions of up to three variables are packed into a `u8` (bit `k` is
//! the value on minterm `k`). The search deepens on the total gate count
//! (majority gates plus inverters). At each depth it enumerates sequences
//! of new nodes, where every node computes a function not already
//! available. Two observations keep the space small:
//!
//! * a minimum-gate network never computes the same function twice, so a
//!   node is identified by its function;
//! * any DAG can be listed so that a node either reads its predecessor or
//!   has a larger function value than it. Orders violating that are
//!   skipped.
//!
//! For each candidate function only the shallowest realization is kept,
//! separately for inverter and majority realizations. That choice never
//! loses a solution: for a fixed sequence of functions it yields the
//! minimum depth, and at the first depth where a target appears every
//! node lies in its cone (otherwise a smaller solution would exist).
//!
//! Among networks of equal `(gates, levels, inverters)` the one whose
//! printed expression sorts first wins, which makes the result
//! independent of enumeration order and thread scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::{cost, CostReport};
use crate::network::{Network, NetworkBuilder, NetworkError, NodeId};
use crate::parse::{default_names, to_expr};
use crate::truth_table::TruthTable;

pub const MAX_SYNTH_VARS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SearchBudget {
    /// Majority gates (maj3 + maj5).
    pub max_gates: usize,
    pub max_levels: usize,
    pub allow_maj5: bool,
    /// Inverter cap; `None` means one per input and per majority gate,
    /// which never excludes a minimum-gate network.
    pub max_inverters: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_gates: 4, max_levels: 3, allow_maj5: true, max_inverters: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("synthesis supports at most {MAX_SYNTH_VARS} variables, got {0}")]
    Capacity(usize),
    #[error("invalid budget: {0}")]
    Budget(&'static str),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    #[serde(skip)]
    pub network: Network,
    pub expression: String,
    pub cost: CostReport,
}

impl SearchBudget {
    fn validate(&self) -> Result<(), SynthError> {
        if self.max_gates < 1 {
            return Err(SynthError::Budget("max_gates must be at least 1"));
        }
        if self.max_levels < 1 {
            return Err(SynthError::Budget("max_levels must be at least 1"));
        }
        Ok(())
    }
}

/// Minimum-cost network for `spec`, or `None` if nothing fits the budget.
pub fn synthesize(spec: &TruthTable, budget: &SearchBudget) -> Result<Option<Synthesis>, SynthError> {
    let n = spec.n_vars();
    if n > MAX_SYNTH_VARS {
        return Err(SynthError::Capacity(n));
    }
    budget.validate()?;
    let target = spec.to_mask() as u8;
    let found = Search::new(n, *budget).run(&[target]);
    found.into_iter().next().unwrap().1.map(|s| s.finish(n)).transpose()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasEntry {
    pub minterms: Vec<usize>,
    pub result: Option<Synthesis>,
}

/// Synthesis results for all 256 three-variable functions, keyed by the
/// packed truth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atlas {
    pub budget: SearchBudget,
    pub entries: BTreeMap<u8, AtlasEntry>,
}

impl Atlas {
    pub fn get(&self, spec: &TruthTable) -> Option<&AtlasEntry> {
        if spec.n_vars() != 3 {
            return None;
        }
        self.entries.get(&(spec.to_mask() as u8))
    }

    /// One record per function: minterms, expression, cost fields.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# minterms\texpression\tmaj3\tmaj5\tinverters\tgates\tlevels\n");
        for entry in self.entries.values() {
            let sum = format!(
                "sum({})",
                entry.minterms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
            );
            match &entry.result {
                Some(s) => out.push_str(&format!(
                    "{sum}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    s.expression,
                    s.cost.maj3_count,
                    s.cost.maj5_count,
                    s.cost.inverter_count,
                    s.cost.gate_count,
                    s.cost.levels
                )),
                None => out.push_str(&format!("{sum}\tnot-found\t-\t-\t-\t-\t-\n")),
            }
        }
        out
    }
}

pub fn synthesize_all_3var(budget: &SearchBudget) -> Result<Atlas, SynthError> {
    budget.validate()?;
    let targets: Vec<u8> = (0..=255u8).collect();
    let found = Search::new(3, *budget).run(&targets);
    let entries = found
        .into_iter()
        .map(|(f, sol)| {
            let minterms = (0..8).filter(|k| f >> k & 1 == 1).collect();
            Ok((f, AtlasEntry { minterms, result: sol.map(|s| s.finish(3)).transpose()? }))
        })
        .collect::<Result<_, SynthError>>()?;
    Ok(Atlas { budget: *budget, entries })
}

// ---------------------------------------------------------------------------

const NO_LEVEL: u8 = u8::MAX;
const KIND_NOT: usize = 0;
const KIND_MAJ: usize = 1;

/// One node: arity 1 is an inverter, 3 or 5 a majority gate. Children
/// index into the signal list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Real {
    arity: u8,
    ch: [u8; 5],
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    level: u8,
    real: Real,
}

const EMPTY: Cand = Cand { level: NO_LEVEL, real: Real { arity: 0, ch: [0; 5] } };

type Table = [[Cand; 2]; 256];
type Flags = [[bool; 2]; 256];

#[derive(Debug, Clone, Copy)]
struct Sig {
    func: u8,
    level: u8,
}

#[derive(Clone)]
struct State {
    sigs: Vec<Sig>,
    steps: Vec<Real>,
    avail: [bool; 256],
    maj: usize,
    inv: usize,
    /// Per signal, how many later nodes read it.
    readers: Vec<u8>,
    /// Gate nodes nobody reads yet.
    dangling: usize,
    /// Of those, how many sit at the level cap.
    dangling_capped: usize,
}

#[derive(Debug, Clone)]
struct Found {
    levels: usize,
    inverters: usize,
    steps: Vec<Real>,
    /// Signal index of the output.
    root: usize,
    expr: Option<String>,
}

impl Found {
    fn network(&self, n_vars: usize) -> Result<Network, NetworkError> {
        let mut b = NetworkBuilder::new(n_vars);
        let mut ids: Vec<NodeId> = vec![b.constant(false), b.constant(true)];
        for v in 0..n_vars {
            ids.push(b.input(v));
        }
        for step in &self.steps {
            let c = |i: usize| ids[step.ch[i] as usize];
            let id = match step.arity {
                1 => b.not(c(0)),
                3 => b.maj3(c(0), c(1), c(2)),
                _ => b.maj5([c(0), c(1), c(2), c(3), c(4)]),
            };
            ids.push(id);
        }
        Ok(b.build(ids[self.root])?.pruned())
    }

    fn expr(&mut self, n_vars: usize) -> &str {
        if self.expr.is_none() {
            let net = self.network(n_vars).expect("search builds well-formed networks");
            self.expr = Some(to_expr(&net, &default_names(n_vars)));
        }
        self.expr.as_deref().unwrap()
    }

    fn finish(mut self, n_vars: usize) -> Result<Synthesis, SynthError> {
        let network = self.network(n_vars)?;
        let expression = self.expr(n_vars).to_string();
        let cost = cost(&network);
        Ok(Synthesis { network, expression, cost })
    }

    /// `true` if `self` beats `other` under (levels, inverters, expression).
    fn better_than(&mut self, other: &mut Found, n_vars: usize) -> bool {
        let a = (self.levels, self.inverters);
        let b = (other.levels, other.inverters);
        if a != b {
            return a < b;
        }
        self.expr(n_vars) < other.expr(n_vars)
    }
}

struct Search {
    n_vars: usize,
    mask: u8,
    budget: SearchBudget,
    max_inverters: usize,
}

fn maj3(a: u8, b: u8, c: u8) -> u8 {
    (a & b) | (a & c) | (b & c)
}

fn maj5(a: u8, b: u8, c: u8, d: u8, e: u8) -> u8 {
    let (s0, c0) = (a ^ b ^ c, maj3(a, b, c));
    let (s1, c1) = (s0 ^ d ^ e, maj3(s0, d, e));
    (c0 & c1) | ((c0 | c1) & s1)
}

impl Search {
    fn new(n_vars: usize, budget: SearchBudget) -> Self {
        let mask = if n_vars == 3 { 0xFF } else { ((1u16 << (1 << n_vars)) - 1) as u8 };
        let max_inverters = budget.max_inverters.unwrap_or(n_vars + budget.max_gates);
        Self { n_vars, mask, budget, max_inverters }
    }

    fn base_state(&self) -> (State, Box<Table>) {
        let mut sigs = vec![Sig { func: 0, level: 0 }, Sig { func: self.mask, level: 0 }];
        for v in 0..self.n_vars {
            let f = TruthTable::variable(self.n_vars, v).unwrap().to_mask() as u8;
            sigs.push(Sig { func: f, level: 0 });
        }
        let mut avail = [false; 256];
        for s in &sigs {
            avail[s.func as usize] = true;
        }
        let mut table = Box::new([[EMPTY; 2]; 256]);
        let mut flags = Box::new([[false; 2]; 256]);
        for s in 0..sigs.len() {
            self.extend(&sigs[..=s], &mut table, &mut flags);
        }
        let readers = vec![0; sigs.len()];
        let state = State {
            sigs,
            steps: Vec::new(),
            avail,
            maj: 0,
            inv: 0,
            readers,
            dangling: 0,
            dangling_capped: 0,
        };
        (state, table)
    }

    /// Adds every realization that reads the last signal of `sigs` to
    /// `table`, marking the functions it can produce in `flags`.
    #[allow(clippy::needless_range_loop)]
    fn extend(&self, sigs: &[Sig], table: &mut Table, flags: &mut Flags) {
        let s = sigs.len() - 1;
        let new = sigs[s];
        let max_level = self.budget.max_levels as u8;
        let mut offer = |f: u8, kind: usize, level: u8, real: Real| {
            flags[f as usize][kind] = true;
            let slot = &mut table[f as usize][kind];
            if level < slot.level {
                *slot = Cand { level, real };
            }
        };
        // inverters on constants are never useful: both constants are free
        if s >= 2 {
            let real = Real { arity: 1, ch: [s as u8, 0, 0, 0, 0] };
            offer(!new.func & self.mask, KIND_NOT, new.level, real);
        }
        for i in 0..=s {
            for j in i..=s {
                let level = 1 + new.level.max(sigs[i].level).max(sigs[j].level);
                if level > max_level {
                    continue;
                }
                let f = maj3(sigs[i].func, sigs[j].func, new.func);
                offer(f, KIND_MAJ, level, Real { arity: 3, ch: [i as u8, j as u8, s as u8, 0, 0] });
            }
        }
        if !self.budget.allow_maj5 {
            return;
        }
        for i in 0..=s {
            for j in i..=s {
                for k in j..=s {
                    let lk = sigs[i].level.max(sigs[j].level).max(sigs[k].level).max(new.level);
                    let fijk = (sigs[i].func, sigs[j].func, sigs[k].func);
                    for l in k..=s {
                        let level = 1 + lk.max(sigs[l].level);
                        if level > max_level {
                            continue;
                        }
                        let f = maj5(fijk.0, fijk.1, fijk.2, sigs[l].func, new.func);
                        let real = Real { arity: 5, ch: [i as u8, j as u8, k as u8, l as u8, s as u8] };
                        offer(f, KIND_MAJ, level, real);
                    }
                }
            }
        }
    }

    /// Best solution for each requested target; `None` where the budget is
    /// exhausted first.
    fn run(&self, targets: &[u8]) -> BTreeMap<u8, Option<Found>> {
        let (root, table) = self.base_state();
        let mut solved: BTreeMap<u8, Option<Found>> = BTreeMap::new();
        let mut open: Vec<u8> = Vec::new();
        for &t in targets {
            let t = t & self.mask;
            if let Some(sig) = root.sigs.iter().position(|s| s.func == t) {
                // a constant or an input: no gates at all
                let found = Found { levels: 0, inverters: 0, steps: Vec::new(), root: sig, expr: None };
                solved.insert(t, Some(found));
            } else if !open.contains(&t) {
                open.push(t);
            }
        }

        let max_total = self.budget.max_gates + self.max_inverters;
        for depth in 1..=max_total {
            if open.is_empty() {
                break;
            }
            let mut wanted = [false; 256];
            for &t in &open {
                wanted[t as usize] = true;
            }
            for (t, found) in self.search_depth(&root, &table, depth, &wanted) {
                solved.insert(t, Some(found));
            }
            open.retain(|t| !solved.contains_key(t));
        }
        for t in open {
            solved.insert(t, None);
        }
        solved
    }

    fn search_depth(&self, root: &State, table: &Table, depth: usize, wanted: &[bool; 256]) -> BTreeMap<u8, Found> {
        let flags = [[false; 2]; 256];
        let firsts = self.moves(root, table, &flags, None);
        if depth == 1 {
            let mut sink = Sink::default();
            for (f, kind) in firsts {
                self.record(root, table, f, kind, wanted, &mut sink);
            }
            return sink.best;
        }
        firsts
            .into_par_iter()
            .map(|(f, kind)| {
                let mut sink = Sink::default();
                let mut st = root.clone();
                let mut child = Box::new(*table);
                let mut child_flags = Box::new([[false; 2]; 256]);
                self.push(&mut st, table, &mut child, &mut child_flags, f, kind);
                if self.can_close(&st, depth - 1) {
                    self.dfs(&mut st, &child, &child_flags, f, depth - 1, wanted, &mut sink);
                }
                sink.best
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (t, fb) in b {
                    offer_best(&mut a, t, fb, self.n_vars);
                }
                a
            })
    }

    /// Admissible next nodes from `st`, in ascending (function, kind) order.
    fn moves(&self, st: &State, table: &Table, flags: &Flags, prev: Option<u8>) -> Vec<(u8, usize)> {
        let mut out = Vec::new();
        for f in 0..=self.mask {
            if st.avail[f as usize] {
                continue;
            }
            for kind in [KIND_NOT, KIND_MAJ] {
                if !self.admissible(st, table, flags, prev, f, kind) {
                    continue;
                }
                out.push((f, kind));
            }
        }
        out
    }

    fn admissible(&self, st: &State, table: &Table, flags: &Flags, prev: Option<u8>, f: u8, kind: usize) -> bool {
        if table[f as usize][kind].level == NO_LEVEL || st.avail[f as usize] {
            return false;
        }
        let within = match kind {
            KIND_NOT => st.inv < self.max_inverters,
            _ => st.maj < self.budget.max_gates,
        };
        if !within {
            return false;
        }
        match prev {
            Some(p) => f > p || flags[f as usize][kind],
            None => true,
        }
    }

    fn push(&self, st: &mut State, parent: &Table, child: &mut Table, flags: &mut Flags, f: u8, kind: usize) {
        let cand = parent[f as usize][kind];
        for c in distinct_children(&cand.real) {
            self.read(st, c, true);
        }
        st.sigs.push(Sig { func: f, level: cand.level });
        st.readers.push(0);
        st.dangling += 1;
        if cand.level as usize == self.budget.max_levels {
            st.dangling_capped += 1;
        }
        st.steps.push(cand.real);
        st.avail[f as usize] = true;
        if kind == KIND_NOT {
            st.inv += 1;
        } else {
            st.maj += 1;
        }
        *child = *parent;
        *flags = [[false; 2]; 256];
        self.extend(&st.sigs, child, flags);
    }

    fn pop(&self, st: &mut State, f: u8, kind: usize) {
        let sig = st.sigs.pop().unwrap();
        st.readers.pop();
        st.dangling -= 1;
        if sig.level as usize == self.budget.max_levels {
            st.dangling_capped -= 1;
        }
        let real = st.steps.pop().unwrap();
        for c in distinct_children(&real) {
            self.read(st, c, false);
        }
        st.avail[f as usize] = false;
        if kind == KIND_NOT {
            st.inv -= 1;
        } else {
            st.maj -= 1;
        }
    }

    /// Adjusts reader counts of signal `c` when a node reading it is
    /// added (`add`) or removed.
    fn read(&self, st: &mut State, c: usize, add: bool) {
        let base = 2 + self.n_vars;
        let capped = st.sigs[c].level as usize == self.budget.max_levels;
        if add {
            if st.readers[c] == 0 && c >= base {
                st.dangling -= 1;
                st.dangling_capped -= capped as usize;
            }
            st.readers[c] += 1;
        } else {
            st.readers[c] -= 1;
            if st.readers[c] == 0 && c >= base {
                st.dangling += 1;
                st.dangling_capped += capped as usize;
            }
        }
    }

    /// Whether the unread nodes of `st` can still all end up in the cone of
    /// an output built in `remaining` more steps.
    fn can_close(&self, st: &State, remaining: usize) -> bool {
        // a node at the level cap can only feed an inverter, which in turn
        // can only be the output
        if st.dangling_capped > 1 {
            return false;
        }
        let per_gate = if self.budget.allow_maj5 { 4 } else { 2 };
        let gates_left = (self.budget.max_gates - st.maj).min(remaining);
        st.dangling <= 1 + per_gate * gates_left
    }

    fn record(&self, st: &State, table: &Table, f: u8, kind: usize, wanted: &[bool; 256], sink: &mut Sink) {
        if !wanted[f as usize] {
            return;
        }
        let cand = table[f as usize][kind];
        let mut steps = st.steps.clone();
        steps.push(cand.real);
        let found = Found {
            levels: cand.level as usize,
            inverters: st.inv + (kind == KIND_NOT) as usize,
            steps,
            root: st.sigs.len(),
            expr: None,
        };
        offer_best(&mut sink.best, f, found, self.n_vars);
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(&self, st: &mut State, table: &Table, flags: &Flags, prev: u8, remaining: usize, wanted: &[bool; 256], sink: &mut Sink) {
        if remaining == 1 {
            for f in 0..=self.mask {
                if !wanted[f as usize] {
                    continue;
                }
                for kind in [KIND_NOT, KIND_MAJ] {
                    if self.admissible(st, table, flags, Some(prev), f, kind) {
                        self.record(st, table, f, kind, wanted, sink);
                    }
                }
            }
            return;
        }
        let moves = self.moves(st, table, flags, Some(prev));
        let mut child = Box::new([[EMPTY; 2]; 256]);
        let mut child_flags = Box::new([[false; 2]; 256]);
        for (f, kind) in moves {
            self.push(st, table, &mut child, &mut child_flags, f, kind);
            if self.can_close(st, remaining - 1) {
                self.dfs(st, &child, &child_flags, f, remaining - 1, wanted, sink);
            }
            self.pop(st, f, kind);
        }
    }
}

fn distinct_children(real: &Real) -> impl Iterator<Item = usize> + '_ {
    let ch = &real.ch[..real.arity as usize];
    ch.iter()
        .enumerate()
        .filter(move |(i, c)| !ch[..*i].contains(c))
        .map(|(_, &c)| c as usize)
}

fn offer_best(best: &mut BTreeMap<u8, Found>, t: u8, mut found: Found, n_vars: usize) {
    if let Some(cur) = best.get_mut(&t) {
        if !found.better_than(cur, n_vars) {
            return;
        }
    }
    best.insert(t, found);
}

#[derive(Default)]
struct Sink {
    best: BTreeMap<u8, Found>,
}
