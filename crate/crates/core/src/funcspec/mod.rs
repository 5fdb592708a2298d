//! Test functions: an expression parser and a small built-in corpus.

mod corpus;
mod expr;

pub use corpus::{builtin_corpus, lookup, CorpusEntry};
pub use expr::{Expr, Expression, Func, ParseError, ParseErrorKind};
