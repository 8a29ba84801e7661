//! Built-in full-adder designs and the three-variable expression library.
//!
//! Each adder is a strategy behind [`AdderDesign`]; [`AdderRegistry`]
//! looks them up by name. Sum and carry share one node pool so a reused
//! carry node is counted once in the combined census.

use serde::Serialize;

use crate::cost::{cost, cost_of_roots, CostReport};
use crate::network::{Network, NetworkError, NodeId};
use crate::parse::{parse_expr, parse_shared, ParseError};
use crate::truth_table::TruthTable;
use crate::verify::{verify_with_order, VerifyReport};

pub const ADDER_INPUTS: [&str; 3] = ["A", "B", "Cin"];

/// Carry-out: two or more of three inputs.
pub const CARRY_MINTERMS: [usize; 4] = [3, 5, 6, 7];
/// Sum: odd parity.
pub const SUM_MINTERMS: [usize; 4] = [1, 2, 4, 7];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adder {
    pub name: &'static str,
    pool: Network,
    sum: NodeId,
    carry: NodeId,
}

impl Adder {
    fn from_exprs(name: &'static str, sum: &str, carry: &str) -> Adder {
        let (pool, roots) = parse_shared(&[sum, carry], &ADDER_INPUTS)
            .expect("built-in adder expressions parse");
        Adder { name, pool, sum: roots[0], carry: roots[1] }
    }

    pub fn sum_net(&self) -> Network {
        self.pool.with_output(self.sum).expect("sum node is in the pool").pruned()
    }

    pub fn carry_net(&self) -> Network {
        self.pool.with_output(self.carry).expect("carry node is in the pool").pruned()
    }

    /// Census over both outputs, shared nodes counted once.
    pub fn cost(&self) -> CostReport {
        cost_of_roots(self.pool.nodes(), &[self.sum, self.carry])
    }

    /// `(sum, carry)` for one input row.
    pub fn eval(&self, a: bool, b: bool, cin: bool) -> (bool, bool) {
        let vals = self.pool.node_values(&[a, b, cin]).expect("adder has three inputs");
        (vals[self.sum.0], vals[self.carry.0])
    }

    /// `2*carry + sum == a + b + cin` on all eight rows.
    pub fn adds_correctly(&self) -> bool {
        (0..8u8).all(|row| {
            let (a, b, c) = (row & 4 != 0, row & 2 != 0, row & 1 != 0);
            let (s, co) = self.eval(a, b, c);
            2 * co as u8 + s as u8 == a as u8 + b as u8 + c as u8
        })
    }
}

pub trait AdderDesign: Send + Sync {
    fn name(&self) -> &'static str;
    /// Gate complexity as stated for the design.
    fn complexity(&self) -> &'static str;
    fn build(&self) -> Adder;
}

struct Classic;
struct ClassicSimplified;
struct Zhang;
struct Proposed;

impl AdderDesign for Classic {
    fn name(&self) -> &'static str {
        "classic"
    }
    fn complexity(&self) -> &'static str {
        "Five majority gates and three inverters"
    }
    fn build(&self) -> Adder {
        adder_classic()
    }
}

impl AdderDesign for ClassicSimplified {
    fn name(&self) -> &'static str {
        "classic-simplified"
    }
    fn complexity(&self) -> &'static str {
        "Four majority gates and three inverters"
    }
    fn build(&self) -> Adder {
        adder_classic_simplified()
    }
}

impl AdderDesign for Zhang {
    fn name(&self) -> &'static str {
        "zhang"
    }
    fn complexity(&self) -> &'static str {
        "Three majority gates and two inverters"
    }
    fn build(&self) -> Adder {
        adder_zhang()
    }
}

impl AdderDesign for Proposed {
    fn name(&self) -> &'static str {
        "proposed"
    }
    fn complexity(&self) -> &'static str {
        "Two majority gates and one Inverter"
    }
    fn build(&self) -> Adder {
        adder_proposed()
    }
}

/// Cout = M(A,B,Cin); Sum = M(M(A',B,Cin), M(A,B',Cin), M(A,B,Cin')).
pub fn adder_classic() -> Adder {
    Adder::from_exprs("classic", "M(M(A',B,Cin),M(A,B',Cin),M(A,B,Cin'))", "M(A,B,Cin)")
}

/// The classic adder with M(A,B,Cin') replaced by Cin'.
pub fn adder_classic_simplified() -> Adder {
    Adder::from_exprs("classic-simplified", "M(M(A',B,Cin),M(A,B',Cin),Cin')", "M(A,B,Cin)")
}

/// Cout = M(A,B,Cin); Sum = M(Cout', Cin, M(A,B,Cin')).
pub fn adder_zhang() -> Adder {
    Adder::from_exprs("zhang", "M(M(A,B,Cin)',Cin,M(A,B,Cin'))", "M(A,B,Cin)")
}

/// Cout = M(A,B,Cin); Sum = M5(A, B, Cin, Cout', Cout') with one shared
/// inverter feeding two inputs.
pub fn adder_proposed() -> Adder {
    Adder::from_exprs("proposed", "M5(A,B,Cin,M(A,B,Cin)',M(A,B,Cin)')", "M(A,B,Cin)")
}

/// Name-indexed adder designs, in comparison-table order.
pub struct AdderRegistry {
    designs: Vec<Box<dyn AdderDesign>>,
}

impl AdderRegistry {
    pub fn empty() -> Self {
        Self { designs: Vec::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Proposed));
        r.register(Box::new(Zhang));
        r.register(Box::new(Classic));
        r.register(Box::new(ClassicSimplified));
        r
    }

    /// Adds a design; a design with the same name is replaced in place.
    pub fn register(&mut self, design: Box<dyn AdderDesign>) {
        match self.designs.iter().position(|d| d.name() == design.name()) {
            Some(i) => self.designs[i] = design,
            None => self.designs.push(design),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn AdderDesign> {
        self.designs.iter().find(|d| d.name() == name).map(|d| d.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.designs.iter().map(|d| d.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn AdderDesign> {
        self.designs.iter().map(|d| d.as_ref())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdderRow {
    pub name: &'static str,
    pub complexity: &'static str,
    pub clocking: &'static str,
    pub cost: CostReport,
    pub sum_expression: String,
    pub carry_expression: String,
    pub sum_verdict: VerifyReport,
    pub carry_verdict: VerifyReport,
    pub arithmetic_ok: bool,
}

/// One row per registered design, with census and oracle verdicts.
pub fn compare_adders(registry: &AdderRegistry) -> Vec<AdderRow> {
    let sum_tt = TruthTable::from_minterms(3, SUM_MINTERMS).unwrap();
    let carry_tt = TruthTable::from_minterms(3, CARRY_MINTERMS).unwrap();
    registry
        .iter()
        .map(|d| {
            let adder = d.build();
            let (sum, carry) = (adder.sum_net(), adder.carry_net());
            AdderRow {
                name: d.name(),
                complexity: d.complexity(),
                clocking: "simple",
                cost: adder.cost(),
                sum_expression: crate::parse::to_expr(&sum, &ADDER_INPUTS),
                carry_expression: crate::parse::to_expr(&carry, &ADDER_INPUTS),
                sum_verdict: verify_with_order(&sum, &sum_tt, &ADDER_INPUTS).unwrap(),
                carry_verdict: verify_with_order(&carry, &carry_tt, &ADDER_INPUTS).unwrap(),
                arithmetic_ok: adder.adds_correctly(),
            }
        })
        .collect()
}

/// A row of the three-variable expression comparison: the target minterm
/// set and the two published majority expressions, verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub minterms: &'static [usize],
    pub previous: &'static str,
    pub proposed: &'static str,
}

pub fn table2_entries() -> Vec<Table2Row> {
    const ROWS: [Table2Row; 6] = [
        Table2Row { minterms: &[7], previous: "M(M(A,B,0),C,0)", proposed: "M5(0,0,A,B,C)" },
        Table2Row { minterms: &[3, 4, 5, 6, 7], previous: "M(M(B,C,0),A,1)", proposed: "M5(A,A,B,C,1)" },
        Table2Row { minterms: &[3, 6, 7], previous: "M(0,B,M(A,C,1))", proposed: "M5(A,B,B,C,0)" },
        Table2Row {
            minterms: &[1, 2, 3, 4, 5, 6, 7],
            previous: "M(M(A,B,1),C,1)",
            proposed: "M5(A,B,C,1,1)",
        },
        Table2Row {
            minterms: &[1, 2, 7],
            previous: "M(M(A,B,C'),M(A,B',C),M(A',B,0))",
            proposed: "M5(M(A,B,C)',M5(A,A,B,C,1),A,B,C)",
        },
        Table2Row {
            minterms: &[0, 3, 5, 6, 7],
            previous: "M(M(A,B,0),M(A',B',C),M(A,C',1))",
            proposed: "M(M5(A,B,B,C,C),1,M5(A,B,C,1,1)')",
        },
    ];
    ROWS.to_vec()
}

/// Minterm sets whose level/inverter/gate comparison is tabulated.
pub const TABLE3_MINTERMS: [&[usize]; 2] = [&[3, 4, 5, 6, 7], &[0, 3, 5, 6, 7]];

#[derive(Debug, Clone, Serialize)]
pub struct ExprAudit {
    pub expression: &'static str,
    pub cost: CostReport,
    pub verdict: VerifyReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Audit {
    pub minterms: Vec<usize>,
    pub in_table3: bool,
    pub previous: ExprAudit,
    pub proposed: ExprAudit,
}

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    #[error("variable order must name exactly 3 variables, got {0}")]
    Order(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Verifies and costs every library expression. `order` lists the
/// variable names most-significant first (normally `A, B, C`).
pub fn audit_table2<S: AsRef<str>>(order: &[S]) -> Result<Vec<Table2Audit>, AuditError> {
    if order.len() != 3 {
        return Err(AuditError::Order(order.len()));
    }
    let audit = |expression: &'static str, spec: &TruthTable| -> Result<ExprAudit, AuditError> {
        let net = parse_expr(expression, order)?;
        Ok(ExprAudit { expression, cost: cost(&net), verdict: verify_with_order(&net, spec, order)? })
    };
    table2_entries()
        .into_iter()
        .map(|row| {
            let spec = TruthTable::from_minterms(3, row.minterms.iter().copied()).unwrap();
            Ok(Table2Audit {
                minterms: row.minterms.to_vec(),
                in_table3: TABLE3_MINTERMS.contains(&row.minterms),
                previous: audit(row.previous, &spec)?,
                proposed: audit(row.proposed, &spec)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census(a: &Adder) -> (usize, usize) {
        let c = a.cost();
        (c.majority_count(), c.inverter_count)
    }

    #[test]
    fn adder_census() {
        assert_eq!(census(&adder_classic()), (5, 3));
        assert_eq!(census(&adder_classic_simplified()), (4, 3));
        assert_eq!(census(&adder_zhang()), (3, 2));
        assert_eq!(census(&adder_proposed()), (2, 1));
        let p = adder_proposed().cost();
        assert_eq!((p.maj3_count, p.maj5_count), (1, 1));
    }

    #[test]
    fn adder_rows() {
        assert_eq!(adder_classic().eval(true, true, false), (false, true));
        assert!(adder_classic_simplified().eval(false, false, true).0);
        assert_eq!(adder_zhang().eval(true, false, true), (false, true));
        assert_eq!(adder_proposed().eval(true, true, true), (true, true));
    }

    #[test]
    fn all_adders_add() {
        for d in AdderRegistry::builtin().iter() {
            assert!(d.build().adds_correctly(), "{}", d.name());
        }
    }

    #[test]
    fn proposed_inverter_feeds_two_slots() {
        let a = adder_proposed();
        let sum = a.sum_net();
        let crate::network::Node::Maj5(ch) = *sum.node(sum.output()) else { panic!() };
        assert_eq!(ch[3], ch[4]);
    }

    #[test]
    fn registry_lookup_and_replace() {
        let mut r = AdderRegistry::builtin();
        assert_eq!(r.names(), vec!["proposed", "zhang", "classic", "classic-simplified"]);
        assert!(r.get("zhang").is_some());
        assert!(r.get("ripple").is_none());
        r.register(Box::new(Proposed));
        assert_eq!(r.names().len(), 4);
    }

    #[test]
    fn table2_rows_verbatim() {
        let rows = table2_entries();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], Table2Row { minterms: &[7], previous: "M(M(A,B,0),C,0)", proposed: "M5(0,0,A,B,C)" });
        assert_eq!(rows[3].previous, "M(M(A,B,1),C,1)");
        assert_eq!(rows[3].proposed, "M5(A,B,C,1,1)");
        assert_eq!(rows[5].proposed, "M(M5(A,B,B,C,C),1,M5(A,B,C,1,1)')");
    }

    #[test]
    fn audit_rejects_bad_order() {
        assert!(matches!(audit_table2(&["A", "B"]), Err(AuditError::Order(2))));
    }
}
