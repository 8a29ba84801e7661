//! `majqca`: verify, synthesize and cost majority expressions, compare
//! full-adder designs, and relax cell layouts.
//!
//! Exit status: 0 success or equivalent, 1 not equivalent (or nothing
//! found within the synthesis budget), 2 usage or parse error, 3
//! simulation failure.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use majqca::cellsim::{self, LayoutRegistry, Polarity, Role, SimError};
use majqca::cost::{cost, CostReport};
use majqca::designs::{audit_table2, compare_adders, AdderRegistry, ExprAudit};
use majqca::parse::{parse_expr, to_expr, ParseError};
use majqca::synth::{synthesize, synthesize_all_3var, SearchBudget};
use majqca::truth_table::{MintermSet, MAX_VARS};
use majqca::verify::{order_note, verify_with_order, VerifyReport};

#[derive(Parser)]
#[command(name = "majqca", version, about = "Majority-logic synthesis, verification and cell simulation")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON carrying the same data as the text output.
    Records,
}

#[derive(Args, Clone)]
struct OrderArg {
    /// Variable names, most significant minterm bit first.
    #[arg(long, value_delimiter = ',', default_value = "A,B,C")]
    order: Vec<String>,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Maximum majority gates.
    #[arg(long, default_value_t = SearchBudget::default().max_gates)]
    max_gates: usize,
    /// Maximum majority levels.
    #[arg(long, default_value_t = SearchBudget::default().max_levels)]
    max_levels: usize,
    /// Maximum inverters (default: one per input and per majority gate).
    #[arg(long)]
    max_inverters: Option<usize>,
    /// Restrict the search to three-input majority gates.
    #[arg(long)]
    no_maj5: bool,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_gates: self.max_gates,
            max_levels: self.max_levels,
            allow_maj5: !self.no_maj5,
            max_inverters: self.max_inverters,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an expression against a minterm list, e.g. `verify "M5(0,0,A,B,C)" "sum(7)"`.
    Verify {
        expr: String,
        minterms: String,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Find a minimum-gate network for a minterm list.
    Synth {
        minterms: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        order: OrderArg,
    },
    /// Synthesize all 256 three-variable functions.
    Atlas {
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Verify and cost the built-in three-variable expression library.
    AuditTables {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Compare the built-in full-adder designs.
    Adders,
    /// Relax a cell layout with the given driver bits, e.g. `sim maj3 110`.
    Sim {
        /// Layout name: wire, inv, maj3 or maj5.
        gate: String,
        /// One bit per driver, first driver first.
        inputs: String,
        #[arg(long, default_value_t = cellsim::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = cellsim::DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value_t = cellsim::DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Wire length in cells.
        #[arg(long, default_value_t = cellsim::DEFAULT_WIRE_LENGTH)]
        length: usize,
        /// Include the per-sweep residuals.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Sim(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Sim(_) => 3,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(format!("parse error: {e}"))
    }
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    version: &'static str,
    variable_order: Option<String>,
    inputs: Value,
    results: Value,
}

/// A finished command: the report, its text rendering and the exit code.
/// A failure after the report was built still prints the report.
struct Outcome {
    report: RunReport,
    text: String,
    code: u8,
    diagnostic: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match run(&cli.command, argv) {
        Ok(out) => {
            match cli.format {
                Format::Text => {
                    print!("{}", header(&out.report));
                    print!("{}", out.text);
                }
                Format::Records => {
                    println!("{}", serde_json::to_string_pretty(&out.report).expect("report serializes"))
                }
            }
            if let Some(d) = out.diagnostic {
                eprintln!("majqca: {d}");
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Sim(m) => eprintln!("majqca: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn header(r: &RunReport) -> String {
    let mut s = format!("majqca {}: {}\n", r.version, r.command.join(" "));
    if let Some(note) = &r.variable_order {
        let _ = writeln!(s, "{note}");
    }
    if let Value::Object(m) = &r.inputs {
        for (k, v) in m {
            let _ = writeln!(s, "{k}: {}", plain(v));
        }
    }
    s.push('\n');
    s
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn report(argv: Vec<String>, order: Option<&[String]>, inputs: Value, results: Value) -> RunReport {
    RunReport {
        command: argv,
        version: env!("CARGO_PKG_VERSION"),
        variable_order: order.map(order_note),
        inputs,
        results,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn checked_order(order: &[String]) -> Result<&[String], Failure> {
    if order.is_empty() || order.len() > MAX_VARS {
        return Err(Failure::Usage(format!("--order needs 1 to {MAX_VARS} names")));
    }
    for (i, n) in order.iter().enumerate() {
        let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || n == "M" || n == "M5" {
            return Err(Failure::Usage(format!("--order: `{n}` is not a usable variable name")));
        }
        if order[..i].contains(n) {
            return Err(Failure::Usage(format!("--order: `{n}` listed twice")));
        }
    }
    Ok(order)
}

fn table(minterms: &str, n_vars: usize) -> Result<majqca::truth_table::TruthTable, Failure> {
    let set: MintermSet = minterms.parse().map_err(|e| Failure::Usage(format!("minterm list: {e}")))?;
    set.to_table(n_vars).map_err(|e| Failure::Usage(format!("minterm list: {e}")))
}

fn run(cmd: &Command, argv: Vec<String>) -> Result<Outcome, Failure> {
    match cmd {
        Command::Verify { expr, minterms, order } => cmd_verify(argv, expr, minterms, &order.order),
        Command::Synth { minterms, budget, order } => cmd_synth(argv, minterms, &budget.budget(), &order.order),
        Command::Atlas { budget } => cmd_atlas(argv, &budget.budget()),
        Command::AuditTables { order } => cmd_audit(argv, &order.order),
        Command::Adders => Ok(cmd_adders(argv)),
        Command::Sim { gate, inputs, tol, max_iter, threshold, length, trace } => {
            cmd_sim(argv, gate, inputs, SimArgs { tol: *tol, max_iter: *max_iter, threshold: *threshold, length: *length, trace: *trace })
        }
    }
}

fn verdict_text(r: &VerifyReport) -> String {
    let list = |s: &std::collections::BTreeSet<usize>| {
        format!("sum({})", s.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
    };
    let mut s = String::new();
    let _ = writeln!(s, "equivalent: {}", if r.equivalent { "yes" } else { "no" });
    let _ = writeln!(s, "computed: {}", list(&r.computed_minterms));
    let _ = writeln!(s, "expected: {}", list(&r.expected_minterms));
    let _ = writeln!(s, "differing: {}", list(&r.differing_minterms));
    let _ = writeln!(s, "{}", r.variable_order_note);
    s
}

fn cost_text(c: &CostReport) -> String {
    format!(
        "maj3 {}  maj5 {}  inverters {}  gates {}  levels {}",
        c.maj3_count, c.maj5_count, c.inverter_count, c.gate_count, c.levels
    )
}

fn cmd_verify(argv: Vec<String>, expr: &str, minterms: &str, order: &[String]) -> Result<Outcome, Failure> {
    let order = checked_order(order)?;
    let net = parse_expr(expr, order)?;
    let spec = table(minterms, order.len())?;
    let r = verify_with_order(&net, &spec, order).map_err(|e| Failure::Usage(e.to_string()))?;
    let c = cost(&net);
    let text = format!("{}cost: {}\n", verdict_text(&r), cost_text(&c));
    let code = if r.equivalent { 0 } else { 1 };
    Ok(Outcome {
        report: report(
            argv,
            Some(order),
            json!({ "expression": expr, "minterms": minterms }),
            json!({ "verify": to_value(&r), "cost": to_value(&c) }),
        ),
        text,
        code,
        diagnostic: None,
    })
}

fn cmd_synth(argv: Vec<String>, minterms: &str, budget: &SearchBudget, order: &[String]) -> Result<Outcome, Failure> {
    let order = checked_order(order)?;
    let spec = table(minterms, order.len())?;
    let found = synthesize(&spec, budget).map_err(|e| Failure::Usage(e.to_string()))?;
    let inputs = json!({ "minterms": minterms, "budget": to_value(budget) });
    let (results, text, code) = match found {
        Some(s) => {
            let expression = to_expr(&s.network, order);
            let text = format!("expression: {expression}\ncost: {}\n", cost_text(&s.cost));
            (json!({ "found": true, "expression": expression, "cost": to_value(&s.cost) }), text, 0)
        }
        None => (json!({ "found": false }), "no network within budget\n".to_string(), 1),
    };
    Ok(Outcome { report: report(argv, Some(order), inputs, results), text, code, diagnostic: None })
}

fn cmd_atlas(argv: Vec<String>, budget: &SearchBudget) -> Result<Outcome, Failure> {
    let atlas = synthesize_all_3var(budget).map_err(|e| Failure::Usage(e.to_string()))?;
    let names = ["A", "B", "C"].map(String::from);
    let entries: Vec<Value> = atlas.entries.values().map(to_value).collect();
    let missing = atlas.entries.values().filter(|e| e.result.is_none()).count();
    Ok(Outcome {
        report: report(
            argv,
            Some(&names),
            json!({ "budget": to_value(budget) }),
            json!({ "entries": entries, "not_found": missing }),
        ),
        text: format!("{}not found: {missing}\n", atlas.to_text()),
        code: 0,
        diagnostic: None,
    })
}

fn cmd_audit(argv: Vec<String>, order: &[String]) -> Result<Outcome, Failure> {
    let order = checked_order(order)?;
    let rows = audit_table2(order).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut text = String::new();
    let side = |text: &mut String, label: &str, a: &ExprAudit| {
        let _ = writeln!(
            text,
            "  {label:<9} {:<36} equivalent: {:<3}  {}",
            a.expression,
            if a.verdict.equivalent { "yes" } else { "no" },
            cost_text(&a.cost)
        );
        if !a.verdict.equivalent {
            let ms: Vec<String> = a.verdict.computed_minterms.iter().map(|m| m.to_string()).collect();
            let _ = writeln!(text, "            computes sum({})", ms.join(","));
        }
    };
    for row in &rows {
        let ms: Vec<String> = row.minterms.iter().map(|m| m.to_string()).collect();
        let mark = if row.in_table3 { "  [level/inverter/gate comparison row]" } else { "" };
        let _ = writeln!(text, "sum({}){mark}", ms.join(","));
        side(&mut text, "previous", &row.previous);
        side(&mut text, "proposed", &row.proposed);
    }
    Ok(Outcome {
        report: report(argv, Some(order), json!({}), json!({ "rows": to_value(&rows) })),
        text,
        code: 0,
        diagnostic: None,
    })
}

fn cmd_adders(argv: Vec<String>) -> Outcome {
    let rows = compare_adders(&AdderRegistry::builtin());
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<19} {:>4} {:>4} {:>4} {:>6}  {:<8} {:<11} complexity",
        "design", "maj", "maj5", "inv", "levels", "clocking", "verified"
    );
    for r in &rows {
        let ok = r.sum_verdict.equivalent && r.carry_verdict.equivalent && r.arithmetic_ok;
        let _ = writeln!(
            text,
            "{:<19} {:>4} {:>4} {:>4} {:>6}  {:<8} {:<11} {}",
            r.name,
            r.cost.majority_count(),
            r.cost.maj5_count,
            r.cost.inverter_count,
            r.cost.levels,
            r.clocking,
            if ok { "yes" } else { "NO" },
            r.complexity
        );
    }
    text.push('\n');
    for r in &rows {
        let _ = writeln!(text, "{}: Sum = {}; Cout = {}", r.name, r.sum_expression, r.carry_expression);
    }
    let names = ["A", "B", "Cin"].map(String::from);
    Outcome {
        report: report(argv, Some(&names), json!({}), json!({ "designs": to_value(&rows) })),
        text,
        code: 0,
        diagnostic: None,
    }
}

struct SimArgs {
    tol: f64,
    max_iter: usize,
    threshold: f64,
    length: usize,
    trace: bool,
}

fn cmd_sim(argv: Vec<String>, gate: &str, bits: &str, a: SimArgs) -> Result<Outcome, Failure> {
    let registry = LayoutRegistry::builtin(a.length);
    let layout = registry.get(gate).ok_or_else(|| {
        Failure::Usage(format!("unknown gate `{gate}` (one of {})", registry.names().join(", ")))
    })?;
    let drivers: Vec<Polarity> = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(Polarity::Minus),
            '1' => Ok(Polarity::Plus),
            _ => Err(Failure::Usage(format!("inputs must be 0/1 characters, got `{c}`"))),
        })
        .collect::<Result<_, _>>()?;
    let usage = |e: SimError| Failure::Usage(e.to_string());
    let mut grid = layout.build(&drivers).map_err(usage)?;
    if !(a.threshold >= 0.0 && a.threshold < 1.0) {
        return Err(Failure::Usage("--threshold must be in [0, 1)".into()));
    }
    let relaxed = match cellsim::relax(&mut grid, a.tol, a.max_iter) {
        Ok(r) => r,
        Err(e @ SimError::NoConvergence { .. }) => return Err(Failure::Sim(e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let readout = cellsim::read_logic(&grid, a.threshold);
    let expected = layout
        .reference()
        .evaluate(&drivers.iter().map(|p| p.bit()).collect::<Vec<_>>())
        .expect("reference arity matches layout");

    let mut text = String::new();
    let _ = writeln!(text, "{:<4} {:<12} {:<8} polarization", "cell", "position", "role");
    let mut cells = Vec::new();
    for (i, c) in grid.cells().iter().enumerate() {
        let role = match c.role {
            Role::Driver(_) => "driver",
            Role::Free => "free",
            Role::Output => "output",
        };
        let pos = format!("{:?}", c.position);
        let _ = writeln!(text, "{i:<4} {pos:<12} {role:<8} {:+.6}", c.polarization);
        cells.push(json!({ "position": c.position, "role": role, "polarization": c.polarization }));
    }
    let _ = writeln!(text, "sweeps: {}", relaxed.sweeps);
    let _ = writeln!(text, "output polarization: {:+.6}", grid.output_polarization());
    let bit = readout.as_ref().ok().map(|&b| b as u8);
    match bit {
        Some(b) => {
            let _ = writeln!(text, "readout: {b}");
        }
        None => text.push_str("readout: undecided\n"),
    }
    let _ = writeln!(text, "reference gate: {}", expected as u8);
    let mut results = json!({
        "cells": cells,
        "sweeps": relaxed.sweeps,
        "output_polarization": grid.output_polarization(),
        "readout": bit,
        "reference": expected as u8,
    });
    if a.trace {
        text.push_str("residuals:\n");
        for (k, r) in relaxed.residuals.iter().enumerate() {
            let _ = writeln!(text, "{} {r:e}", k + 1);
        }
        results["residuals"] = to_value(&relaxed.residuals);
    }
    let mut inputs = json!({
        "gate": gate,
        "inputs": bits,
        "tol": a.tol,
        "max_iter": a.max_iter,
        "threshold": a.threshold,
    });
    if gate == "wire" {
        inputs["length"] = json!(a.length);
    }
    let (code, diagnostic) = match readout {
        Ok(_) => (0, None),
        Err(e) => (3, Some(e.to_string())),
    };
    Ok(Outcome { report: report(argv, None, inputs, results), text, code, diagnostic })
}
