//! Exhaustive equivalence checking against a truth-table specification.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::network::{Network, NetworkError};
use crate::truth_table::TruthTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub equivalent: bool,
    pub differing_minterms: BTreeSet<usize>,
    pub computed_minterms: BTreeSet<usize>,
    pub expected_minterms: BTreeSet<usize>,
    pub variable_order_note: String,
}

/// Describes how `names` map onto minterm bits.
pub fn order_note<S: AsRef<str>>(names: &[S]) -> String {
    let list: Vec<&str> = names.iter().map(|n| n.as_ref()).collect();
    match list.first() {
        Some(msb) => format!(
            "variable order {} ({msb} is the most significant minterm bit)",
            list.join(",")
        ),
        None => "no variables".to_string(),
    }
}

pub fn verify(net: &Network, spec: &TruthTable) -> Result<VerifyReport, NetworkError> {
    let names = crate::parse::default_names(net.n_vars());
    verify_with_order(net, spec, &names)
}

/// Same as [`verify`], with the report naming the given variable order.
pub fn verify_with_order<S: AsRef<str>>(
    net: &Network,
    spec: &TruthTable,
    names: &[S],
) -> Result<VerifyReport, NetworkError> {
    if net.n_vars() != spec.n_vars() {
        return Err(NetworkError::Arity { expected: spec.n_vars(), got: net.n_vars() });
    }
    let computed = net.truth_table()?;
    let differing = computed.difference(spec);
    Ok(VerifyReport {
        equivalent: differing.is_empty(),
        differing_minterms: differing,
        computed_minterms: computed.minterms(),
        expected_minterms: spec.minterms(),
        variable_order_note: order_note(names),
    })
}
