//! The shipped fixture files, embedded at compile time.

use crate::calculus::Calculus;
use crate::semantics::GeneralizedModel;
use crate::syntax::{parse, Formula};
use crate::translation::Translation;

macro_rules! fixture_text {
    ($($name:ident => $file:literal),* $(,)?) => {
        pub mod text {
            $(pub const $name: &str = include_str!(concat!("../fixtures/", $file));)*
        }

        /// `(file name, contents)` for every shipped fixture.
        pub const ALL: &[(&str, &str)] = &[$(($file, text::$name)),*];
    };
}

fixture_text! {
    BS_FORALL => "bs_forall.calc",
    BS_SYSTEM => "bs_system.calc",
    PROP_A1A3 => "prop_a1a3.calc",
    TOP_ONLY_CALC => "top_only.calc",
    HILBERT_ACKERMANN => "hilbert_ackermann.calc",
    HALMOS => "halmos.trans",
    FORALL_AS_NOT_EXISTS_NOT => "forall_as_not_exists_not.trans",
    IDENTITY_BOT => "identity_bot.trans",
    TOP_ONLY_TRANS => "top_only.trans",
    MERGE_CONSTANTS => "merge_constants.trans",
    CROSSLEY_IMP => "crossley_imp.trans",
    TARGET => "target.fml",
    PROP1_MODEL => "prop1_model.gmodel",
    STANDARD_2ELT => "standard_2elt.gmodel",
    IDENTITY_PROOF => "identity.proof",
}

/// Looks a fixture up by file name.
pub fn by_name(file: &str) -> Option<&'static str> {
    ALL.iter().find(|(f, _)| *f == file).map(|(_, t)| *t)
}

fn calc(file: &str, text: &str) -> Calculus {
    Calculus::from_text(file, text).unwrap_or_else(|e| panic!("shipped fixture {file}: {e}"))
}

fn trans(file: &str, text: &str) -> Translation {
    Translation::from_text(file, text).unwrap_or_else(|e| panic!("shipped fixture {file}: {e}"))
}

/// A1-A5, MP, Gen with `forall` primitive.
pub fn bs_forall() -> Calculus {
    calc("bs_forall.calc", text::BS_FORALL)
}

/// A1-A5, MP, Gen over `not`, `imp`, `exists`, with `forall` defined.
pub fn bs_system() -> Calculus {
    calc("bs_system.calc", text::BS_SYSTEM)
}

pub fn prop_a1a3() -> Calculus {
    calc("prop_a1a3.calc", text::PROP_A1A3)
}

pub fn top_only_calculus() -> Calculus {
    calc("top_only.calc", text::TOP_ONLY_CALC)
}

pub fn hilbert_ackermann() -> Calculus {
    calc("hilbert_ackermann.calc", text::HILBERT_ACKERMANN)
}

pub fn halmos() -> Translation {
    trans("halmos.trans", text::HALMOS)
}

pub fn forall_as_not_exists_not() -> Translation {
    trans("forall_as_not_exists_not.trans", text::FORALL_AS_NOT_EXISTS_NOT)
}

pub fn identity_bot() -> Translation {
    trans("identity_bot.trans", text::IDENTITY_BOT)
}

pub fn top_only() -> Translation {
    trans("top_only.trans", text::TOP_ONLY_TRANS)
}

pub fn merge_constants() -> Translation {
    trans("merge_constants.trans", text::MERGE_CONSTANTS)
}

pub fn crossley_imp() -> Translation {
    trans("crossley_imp.trans", text::CROSSLEY_IMP)
}

/// `exists x1. P(x1) -> exists x1. ~~P(x1)`.
pub fn target() -> Formula {
    parse(text::TARGET.trim(), &bs_system().sig).expect("shipped target formula parses")
}

fn model(file: &str, text: &str) -> GeneralizedModel {
    GeneralizedModel::from_text(file, text).unwrap_or_else(|e| panic!("shipped fixture {file}: {e}"))
}

/// Domain `{u, v}`, `P = {v}`, designated `{A, {u}}`: validates the axioms
/// but not the target.
pub fn prop1_model() -> GeneralizedModel {
    model("prop1_model.gmodel", text::PROP1_MODEL)
}

pub fn standard_2elt() -> GeneralizedModel {
    model("standard_2elt.gmodel", text::STANDARD_2ELT)
}

/// Reference renderings of the prop1 model's value tables and target chain.
pub mod golden {
    pub const A4_TABLE: &str = include_str!("../fixtures/golden/a4_table.golden");
    pub const A5_TABLES: &str = include_str!("../fixtures/golden/a5_tables.golden");
    pub const PROP1_CHAIN: &str = include_str!("../fixtures/golden/prop1_chain.golden");
}
