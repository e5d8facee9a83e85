//! Signatures, formulas, schemata, and the concrete text grammar.

mod enumerate;
mod formula;
mod instances;
mod parse;
mod print;
mod schema;
mod signature;

pub use enumerate::{enumerate_formulas, enumerate_layers, leaves, predicted_totals, Layers, DEFAULT_MAX_FORMULAS};
pub use formula::{Connective, Formula, Name, PropVar, Quantifier, Var};
pub use instances::BindingSpace;
pub use parse::{parse, parse_schema, parse_template, ParseError, ParseErrorKind};
pub use schema::{Binding, Schema, SideCondition, Template, VarTerm};
pub use signature::{Primitive, Signature, VarFamily};

/// Free individual variables of `f`.
pub fn free_vars(f: &Formula) -> std::collections::BTreeSet<Var> {
    f.free_vars()
}
