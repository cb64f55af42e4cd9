//! The `.nd` source language.
//!
//! ```text
//! values Order { None, Charge [fillcolor="palegreen"], Retreat }
//!
//! graph trumpG over Order {
//!   Gen  : input;
//!   Maj  : input;
//!   MajE : stim(Maj) inhib(Gen);
//!   Pvt  : stim(Gen, MajE);
//!   outputs: Pvt;
//! }
//!
//! diagram trumpOrder = trumpG(Charge, Retreat);
//! ```
//!
//! Builder calls such as `stim(..)` or `thick(2; ..)` are looked up in a
//! [`Registry`]; `input`, the `inhib`/`unless` and `kind` modifiers, `&&`
//! and `||` are part of the grammar.

use std::fmt;

pub mod ast;
mod lexer;
mod lower;
mod parser;
mod pretty;

pub use ast::{SourceFile, Span};
pub use lower::{lower, Lowered};
pub use parser::{parse, RESERVED};
pub use pretty::pretty;

use crate::desc::Registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `3:14: error: expected ...`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{}: {sev}: {}", self.span, self.message)
    }
}

/// Parse and lower with the standard registry. Parse errors come back as
/// `Err`; lowering problems are in [`Lowered::diagnostics`].
pub fn load(text: &str) -> Result<Lowered, Vec<Diagnostic>> {
    load_with(text, &Registry::standard())
}

pub fn load_with(text: &str, registry: &Registry) -> Result<Lowered, Vec<Diagnostic>> {
    Ok(lower(&parse(text)?, registry))
}

/// The example files shipped with the library, as (file name, text).
pub fn corpus() -> &'static [(&'static str, &'static str)] {
    &[
        ("orders.nd", include_str!("../../corpus/orders.nd")),
        ("trump.nd", include_str!("../../corpus/trump.nd")),
        ("boulder.nd", include_str!("../../corpus/boulder.nd")),
        ("order.nd", include_str!("../../corpus/order.nd")),
        ("party.nd", include_str!("../../corpus/party.nd")),
        ("garfield.nd", include_str!("../../corpus/garfield.nd")),
        ("wake.nd", include_str!("../../corpus/wake.nd")),
        ("gallery.nd", include_str!("../../corpus/gallery.nd")),
    ]
}

/// Text of one corpus file.
pub fn corpus_file(name: &str) -> Option<&'static str> {
    corpus().iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
