//! Shared fixtures for the integration suites: a corpus of omega-regular
//! expressions covering finite, infinite, and mixed languages, and the
//! pipeline from expression text to a recognized language.

use omega_frag::algebra::{syntactic_quotient, RecognizedLanguage};
use omega_frag::buchi::{compile, Buchi};

/// Every corpus entry keeps its raw transition monoid within 100
/// elements, so recognition never spills over the cap.
pub const MONOID_CAP: usize = 100;

pub const CORPUS: [&str; 29] = [
    "([ab]*aa[ab]*)^w",
    "([ab]*bb[ab]*)^w",
    "([ab]*aba[ab]*)^w",
    "([ab]*aa)^w",
    "((aa|bb)[ab]*)^w",
    "(aa|ab|ba)^w",
    "[ab]*a[b]^w",
    "[ab]^inf",
    "[ab]*",
    "1",
    "a",
    "[ab]*a[b]^inf",
    "[b]*a[ab]^inf",
    "[a]^w",
    "(ab)^w",
    "[ab]*a[ab]^w",
    "[ab]*a[ab]^inf",
    "(aa)*",
    "([ab][ab])^w",
    "[a]*[b]^w",
    "([ab]*b)^w",
    "[ab]*aa[ab]^inf",
    "[a]^inf|[b]^inf",
    "(a|b[a]*b)^w",
    "[ab]*b[a]^w",
    "a[ab]^inf|b[a]^w",
    "(ba)^w|(ab)^w",
    "[abc]*a[bc]^inf",
    "(aa)*|[a]^w",
];

pub fn automaton(expr: &str) -> Buchi {
    compile(expr).unwrap_or_else(|e| panic!("{expr}: {e}"))
}

pub fn language(expr: &str) -> RecognizedLanguage {
    automaton(expr)
        .recognize(MONOID_CAP)
        .unwrap_or_else(|e| panic!("{expr}: {e}"))
}

pub fn quotiented(expr: &str) -> RecognizedLanguage {
    syntactic_quotient(&language(expr)).language
}
