//! Formulas, signatures and theories over relational languages.

mod enumerate;
mod formula;
mod parser;
mod printer;
mod signature;

pub use enumerate::{count_closed_formulas, enumerate_closed_formulas, variable_name};
pub(crate) use formula::cmp_names;
pub use formula::{Formula, Term};
pub use parser::{parse_formula, parse_formula_inferred};
pub use printer::print;
pub use signature::{language_of, language_of_all, Signature, Theory};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("undeclared relation symbol `{name}` at column {column}")]
    UndeclaredSymbol { name: String, column: usize },
    #[error("relation `{name}` has arity {expected} but is applied to {found} terms at column {column}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
        column: usize,
    },
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
    #[error("bad signature line {line}: `{text}`")]
    BadSignatureLine { line: usize, text: String },
    #[error("theory member `{formula}` has free variable `{variable}`")]
    OpenFormula { formula: String, variable: String },
}
