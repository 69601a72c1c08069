//! Expressions over `Γ^∞` and their automata: parsing, compilation to
//! automata without epsilon transitions, exact membership for lasso
//! words, and recognition by the transition monoid.
//!
//! An automaton carries two acceptance sets. A finite word is accepted
//! when it can reach a finite-accepting state from an initial state;
//! an infinite word when some run visits a loop-accepting state
//! infinitely often. Concatenation absorbs on the left: an infinite
//! word of `A` belongs to `A·B` regardless of `B`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{generate, AlgebraError, RecognizedLanguage};
use crate::words::{Letter, LetterSet, UpWord, Word};
use crate::BudgetError;

/// Hard cap on automaton states; state sets are machine words.
pub const MAX_STATES: usize = 128;

/// Errors for expression parsing, compilation and automaton files.
#[derive(Debug, Error)]
pub enum BuchiError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("omega applied to an expression containing the empty word")]
    NullableOmega,
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("malformed automaton file: {0}")]
    Json(#[from] serde_json::Error),
}

/// An expression denoting a language of finite and infinite words.
///
/// Concrete syntax: `|` for union, juxtaposition for concatenation,
/// `1` for the empty word, `[abc]` for one letter out of a set, `*`
/// for iteration, `^w` for infinite iteration, and `^inf` for `A* |
/// A^w`. Postfix operators bind to the preceding atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaRegex {
    Epsilon,
    Letter(Letter),
    Class(LetterSet),
    Concat(Vec<OmegaRegex>),
    Union(Vec<OmegaRegex>),
    Star(Box<OmegaRegex>),
    Omega(Box<OmegaRegex>),
}

impl OmegaRegex {
    /// Whether the empty word belongs to the denoted language.
    pub fn nullable(&self) -> bool {
        match self {
            OmegaRegex::Epsilon | OmegaRegex::Star(_) => true,
            OmegaRegex::Letter(_) | OmegaRegex::Class(_) | OmegaRegex::Omega(_) => false,
            OmegaRegex::Concat(parts) => parts.iter().all(|p| p.nullable()),
            OmegaRegex::Union(parts) => parts.iter().any(|p| p.nullable()),
        }
    }

    /// The letters mentioned by the expression.
    pub fn alphabet(&self) -> LetterSet {
        match self {
            OmegaRegex::Epsilon => LetterSet::EMPTY,
            OmegaRegex::Letter(c) => LetterSet::singleton(*c),
            OmegaRegex::Class(set) => *set,
            OmegaRegex::Concat(parts) | OmegaRegex::Union(parts) => parts
                .iter()
                .fold(LetterSet::EMPTY, |acc, p| acc.union(p.alphabet())),
            OmegaRegex::Star(inner) | OmegaRegex::Omega(inner) => inner.alphabet(),
        }
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, msg: impl Into<String>) -> Result<T, BuchiError> {
        Err(BuchiError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<OmegaRegex, BuchiError> {
        let mut parts = vec![self.concat()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            parts.push(self.concat()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            OmegaRegex::Union(parts)
        })
    }

    fn concat(&mut self) -> Result<OmegaRegex, BuchiError> {
        let mut parts = vec![self.power()?];
        while matches!(self.peek(), Some(c) if c.is_ascii_lowercase() || c == b'1' || c == b'[' || c == b'(')
        {
            parts.push(self.power()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            OmegaRegex::Concat(parts)
        })
    }

    fn power(&mut self) -> Result<OmegaRegex, BuchiError> {
        let atom = self.atom()?;
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(OmegaRegex::Star(Box::new(atom)))
            }
            Some(b'^') => {
                self.pos += 1;
                let omega = |atom: OmegaRegex| {
                    if atom.nullable() {
                        Err(BuchiError::NullableOmega)
                    } else {
                        Ok(OmegaRegex::Omega(Box::new(atom)))
                    }
                };
                if self.input[self.pos..].starts_with(b"inf") {
                    self.pos += 3;
                    Ok(OmegaRegex::Union(vec![
                        OmegaRegex::Star(Box::new(atom.clone())),
                        omega(atom)?,
                    ]))
                } else if self.peek() == Some(b'w') {
                    self.pos += 1;
                    omega(atom)
                } else {
                    self.error("expected w or inf after ^")
                }
            }
            _ => Ok(atom),
        }
    }

    fn atom(&mut self) -> Result<OmegaRegex, BuchiError> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(OmegaRegex::Epsilon)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(OmegaRegex::Letter(c as char))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut set = LetterSet::EMPTY;
                while let Some(c) = self.peek() {
                    if c == b']' {
                        self.pos += 1;
                        return Ok(OmegaRegex::Class(set));
                    }
                    if !c.is_ascii_lowercase() {
                        return self.error(format!("bad class letter {:?}", c as char));
                    }
                    set.insert(c as char);
                    self.pos += 1;
                }
                self.error("unterminated class")
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    self.error("unterminated group")
                }
            }
            Some(c) => self.error(format!("unexpected {:?}", c as char)),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses the concrete expression syntax. The whole input must be one
/// expression; whitespace is not allowed.
pub fn parse_regex(input: &str) -> Result<OmegaRegex, BuchiError> {
    if !input.is_ascii() {
        return Err(BuchiError::Syntax {
            pos: 0,
            msg: "input is not ascii".to_string(),
        });
    }
    let mut parser = Parser {
        input: input.as_bytes(),
        pos: 0,
    };
    let expr = parser.union()?;
    if parser.pos != input.len() {
        return parser.error(format!(
            "unexpected {:?}",
            input.as_bytes()[parser.pos] as char
        ));
    }
    Ok(expr)
}

/// An automaton over finite and infinite words, without epsilon
/// transitions. State sets are bit masks, so at most [`MAX_STATES`]
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Buchi {
    states: usize,
    alphabet: LetterSet,
    delta: BTreeMap<Letter, Vec<u128>>,
    initial: u128,
    finite_accepting: u128,
    buchi_accepting: u128,
}

fn mask_from(states: &[usize], count: usize) -> Result<u128, BuchiError> {
    let mut mask = 0u128;
    for &s in states {
        if s >= count {
            return Err(BuchiError::Invalid(format!("state {s} out of range")));
        }
        mask |= 1 << s;
    }
    Ok(mask)
}

impl Buchi {
    /// Validates and builds an automaton from explicit transitions.
    pub fn new(
        states: usize,
        alphabet: LetterSet,
        transitions: &[(usize, Letter, usize)],
        initial: &[usize],
        finite_accepting: &[usize],
        buchi_accepting: &[usize],
    ) -> Result<Buchi, BuchiError> {
        if states > MAX_STATES {
            return Err(BudgetError {
                what: "automaton states",
                requested: states,
                limit: MAX_STATES,
            }
            .into());
        }
        let mut delta: BTreeMap<Letter, Vec<u128>> =
            alphabet.iter().map(|c| (c, vec![0u128; states])).collect();
        for &(from, c, to) in transitions {
            if from >= states || to >= states {
                return Err(BuchiError::Invalid(format!(
                    "transition ({from}, {c}, {to}) out of range"
                )));
            }
            let row = delta
                .get_mut(&c)
                .ok_or_else(|| BuchiError::Invalid(format!("letter {c} not in the alphabet")))?;
            row[from] |= 1 << to;
        }
        Ok(Buchi {
            states,
            alphabet,
            delta,
            initial: mask_from(initial, states)?,
            finite_accepting: mask_from(finite_accepting, states)?,
            buchi_accepting: mask_from(buchi_accepting, states)?,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> LetterSet {
        self.alphabet
    }

    pub fn transitions(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for (&c, rows) in &self.delta {
            for (from, &mask) in rows.iter().enumerate() {
                for to in iter_bits(mask) {
                    out.push((from, c, to));
                }
            }
        }
        out.sort();
        out
    }

    pub fn initial_states(&self) -> Vec<usize> {
        iter_bits(self.initial).collect()
    }

    pub fn finite_accepting_states(&self) -> Vec<usize> {
        iter_bits(self.finite_accepting).collect()
    }

    pub fn buchi_accepting_states(&self) -> Vec<usize> {
        iter_bits(self.buchi_accepting).collect()
    }

    fn step(&self, set: u128, c: Letter) -> u128 {
        let rows = match self.delta.get(&c) {
            Some(rows) => rows,
            None => return 0,
        };
        iter_bits(set).fold(0, |acc, p| acc | rows[p])
    }

    fn step_word(&self, set: u128, w: &Word) -> u128 {
        w.letters().iter().fold(set, |s, &c| self.step(s, c))
    }

    /// Acceptance of a finite word: reachability of a finite-accepting
    /// state.
    pub fn accepts_finite(&self, w: &Word) -> bool {
        self.step_word(self.initial, w) & self.finite_accepting != 0
    }

    fn letter_matrix(&self, c: Letter) -> TMat {
        let zero = vec![0u128; self.states];
        let rows = self.delta.get(&c).unwrap_or(&zero);
        TMat {
            reach: rows.clone(),
            visit: rows.iter().map(|&m| m & self.buchi_accepting).collect(),
        }
    }

    fn word_matrix(&self, w: &Word) -> TMat {
        w.letters()
            .iter()
            .fold(TMat::identity(self.states), |m, &c| {
                m.mul(&self.letter_matrix(c))
            })
    }

    /// Exact membership of a finite or ultimately periodic word.
    ///
    /// For `u(v)^w`: a run accepts iff some state q reachable after
    /// `u v^i` loops back to itself over `v^k` while visiting a
    /// loop-accepting state. All reachable state sets after `u v^i`
    /// and all powers of the single-iteration relation are finitely
    /// many, so both are enumerated exhaustively.
    pub fn lasso_accepts(&self, alpha: &UpWord) -> bool {
        if let Some(u) = alpha.as_finite() {
            return self.accepts_finite(u);
        }
        let mut sets = vec![self.step_word(self.initial, alpha.prefix())];
        let mut seen: HashSet<u128> = sets.iter().copied().collect();
        loop {
            let next = self.step_word(*sets.last().unwrap(), alpha.cycle());
            if !seen.insert(next) {
                break;
            }
            sets.push(next);
        }
        let rel = self.word_matrix(alpha.cycle());
        let mut powers = vec![rel.clone()];
        let mut seen_powers: HashSet<TMat> = powers.iter().cloned().collect();
        loop {
            let next = powers.last().unwrap().mul(&rel);
            if !seen_powers.insert(next.clone()) {
                break;
            }
            powers.push(next);
        }
        sets.iter().any(|&set| {
            powers
                .iter()
                .any(|p| iter_bits(set).any(|q| p.visit[q] >> q & 1 == 1))
        })
    }

    /// The language of the automaton, recognized by its transition
    /// monoid. Matrix entries record reachability and whether some
    /// path passes a loop-accepting state; the flag per element
    /// separates the image of the empty word from letter products
    /// that happen to act identically.
    pub fn recognize(&self, cap: usize) -> Result<RecognizedLanguage, BuchiError> {
        let generators: Vec<(Letter, (TMat, bool))> = self
            .alphabet
            .iter()
            .map(|c| (c, (self.letter_matrix(c), true)))
            .collect();
        let generated = generate(
            (TMat::identity(self.states), false),
            &generators,
            |a, b| (a.0.mul(&b.0), a.1 || b.1),
            cap,
        )
        .map_err(algebra_error)?;
        let mut accepted = BTreeSet::new();
        for (s, e) in generated.hom.monoid().linked_pairs() {
            let (ms, _) = &generated.values[s];
            let (me, nonempty) = &generated.values[e];
            let ok = if *nonempty {
                let loops: u128 = (0..self.states)
                    .filter(|&q| me.visit[q] >> q & 1 == 1)
                    .fold(0, |m, q| m | 1 << q);
                iter_bits(self.initial).any(|p| ms.reach[p] & loops != 0)
            } else {
                iter_bits(self.initial).any(|p| ms.reach[p] & self.finite_accepting != 0)
            };
            if ok {
                accepted.insert((s, e));
            }
        }
        RecognizedLanguage::new(generated.hom, accepted).map_err(algebra_error)
    }

    /// Serializes to the automaton file format.
    pub fn to_json(&self) -> String {
        let file = AutomatonFile {
            states: self.states,
            alphabet: self.alphabet.letters(),
            transitions: self
                .transitions()
                .into_iter()
                .map(|(p, c, q)| (p, c.to_string(), q))
                .collect(),
            initial: self.initial_states(),
            buchi_accepting: self.buchi_accepting_states(),
            finite_accepting: self.finite_accepting_states(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Parses and validates the automaton file format.
    pub fn from_json(text: &str) -> Result<Buchi, BuchiError> {
        let file: AutomatonFile = serde_json::from_str(text)?;
        let alphabet = LetterSet::parse(&file.alphabet)
            .map_err(|e| BuchiError::Invalid(format!("bad alphabet: {e}")))?;
        let mut transitions = Vec::with_capacity(file.transitions.len());
        for (from, letter, to) in &file.transitions {
            let mut chars = letter.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => transitions.push((*from, c, *to)),
                _ => {
                    return Err(BuchiError::Invalid(format!(
                        "bad transition letter {letter:?}"
                    )))
                }
            }
        }
        Buchi::new(
            file.states,
            alphabet,
            &transitions,
            &file.initial,
            &file.finite_accepting,
            &file.buchi_accepting,
        )
    }
}

fn algebra_error(e: AlgebraError) -> BuchiError {
    match e {
        AlgebraError::Budget(b) => BuchiError::Budget(b),
        other => BuchiError::Invalid(other.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
struct AutomatonFile {
    states: usize,
    alphabet: String,
    transitions: Vec<(usize, String, usize)>,
    initial: Vec<usize>,
    buchi_accepting: Vec<usize>,
    finite_accepting: Vec<usize>,
}

fn iter_bits(mask: u128) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

/// A transition relation: `reach[p]` holds the states reachable from
/// `p`, `visit[p]` those reachable while passing a loop-accepting
/// state (the endpoint counts, the start does not).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct TMat {
    reach: Vec<u128>,
    visit: Vec<u128>,
}

impl TMat {
    fn identity(n: usize) -> TMat {
        TMat {
            reach: (0..n).map(|p| 1 << p).collect(),
            visit: vec![0; n],
        }
    }

    fn mul(&self, other: &TMat) -> TMat {
        let n = self.reach.len();
        let mut reach = vec![0u128; n];
        let mut visit = vec![0u128; n];
        for p in 0..n {
            for q in iter_bits(self.reach[p]) {
                reach[p] |= other.reach[q];
                visit[p] |= other.visit[q];
            }
            for q in iter_bits(self.visit[p]) {
                visit[p] |= other.reach[q];
            }
        }
        TMat { reach, visit }
    }
}

/// Compiles an expression to an automaton of at most [`MAX_STATES`]
/// states.
pub fn to_automaton(expr: &OmegaRegex) -> Result<Buchi, BuchiError> {
    let built = build(expr)?;
    debug_assert!(
        no_loop_state_reaches_a_finite_state(&built),
        "loop-accepting states must not reach finite-accepting states"
    );
    Ok(built)
}

fn build(expr: &OmegaRegex) -> Result<Buchi, BuchiError> {
    match expr {
        OmegaRegex::Epsilon => Buchi::new(1, LetterSet::EMPTY, &[], &[0], &[0], &[]),
        OmegaRegex::Letter(c) => {
            Buchi::new(2, LetterSet::singleton(*c), &[(0, *c, 1)], &[0], &[1], &[])
        }
        OmegaRegex::Class(set) => {
            let transitions: Vec<(usize, Letter, usize)> = set.iter().map(|c| (0, c, 1)).collect();
            Buchi::new(2, *set, &transitions, &[0], &[1], &[])
        }
        OmegaRegex::Union(parts) => {
            let mut acc = build(&parts[0])?;
            for part in &parts[1..] {
                acc = union_automata(&acc, &build(part)?)?;
            }
            Ok(acc)
        }
        OmegaRegex::Concat(parts) => {
            let mut acc = build(&parts[0])?;
            for part in &parts[1..] {
                acc = concat_automata(&acc, &build(part)?)?;
            }
            Ok(acc)
        }
        OmegaRegex::Star(inner) => star_automaton(&build(inner)?),
        OmegaRegex::Omega(inner) => omega_automaton(&build(inner)?),
    }
}

fn grown(a: &Buchi, extra: usize, alphabet: LetterSet) -> Result<Buchi, BuchiError> {
    let states = a.states + extra;
    if states > MAX_STATES {
        return Err(BudgetError {
            what: "automaton states",
            requested: states,
            limit: MAX_STATES,
        }
        .into());
    }
    let mut delta: BTreeMap<Letter, Vec<u128>> =
        alphabet.iter().map(|c| (c, vec![0u128; states])).collect();
    for (c, rows) in &a.delta {
        delta.get_mut(c).expect("alphabet grows")[..a.states].copy_from_slice(rows);
    }
    Ok(Buchi {
        states,
        alphabet,
        delta,
        initial: a.initial,
        finite_accepting: a.finite_accepting,
        buchi_accepting: a.buchi_accepting,
    })
}

fn union_automata(a: &Buchi, b: &Buchi) -> Result<Buchi, BuchiError> {
    let mut out = grown(a, b.states, a.alphabet.union(b.alphabet))?;
    let shift = a.states;
    for (c, rows) in &b.delta {
        let target = out.delta.get_mut(c).expect("alphabet grows");
        for (p, &mask) in rows.iter().enumerate() {
            target[shift + p] = mask << shift;
        }
    }
    out.initial |= b.initial << shift;
    out.finite_accepting |= b.finite_accepting << shift;
    out.buchi_accepting |= b.buchi_accepting << shift;
    Ok(out)
}

fn concat_automata(a: &Buchi, b: &Buchi) -> Result<Buchi, BuchiError> {
    let mut out = union_automata(a, b)?;
    let shift = a.states;
    let bridge = b.initial << shift;
    for rows in out.delta.values_mut() {
        for row in rows.iter_mut().take(a.states) {
            if *row & a.finite_accepting != 0 {
                *row |= bridge;
            }
        }
    }
    let a_nullable = a.initial & a.finite_accepting != 0;
    let b_nullable = b.initial & b.finite_accepting != 0;
    out.initial = a.initial | if a_nullable { b.initial << shift } else { 0 };
    out.finite_accepting =
        (b.finite_accepting << shift) | if b_nullable { a.finite_accepting } else { 0 };
    Ok(out)
}

fn star_automaton(a: &Buchi) -> Result<Buchi, BuchiError> {
    let mut out = grown(a, 1, a.alphabet)?;
    let start = a.states;
    for rows in out.delta.values_mut() {
        for row in rows.iter_mut().take(a.states) {
            if *row & a.finite_accepting != 0 {
                *row |= a.initial;
            }
        }
        let mirrored = iter_bits(a.initial).fold(0, |acc, i| acc | rows[i]);
        rows[start] = mirrored;
    }
    out.initial = 1 << start;
    out.finite_accepting |= 1 << start;
    Ok(out)
}

fn omega_automaton(a: &Buchi) -> Result<Buchi, BuchiError> {
    let mut out = grown(a, 1, a.alphabet)?;
    let restart = a.states;
    for rows in out.delta.values_mut() {
        for row in rows.iter_mut().take(a.states) {
            if *row & a.finite_accepting != 0 {
                *row |= 1 << restart;
            }
        }
        let mirrored = iter_bits(a.initial).fold(0, |acc, i| acc | rows[i]);
        rows[restart] = mirrored;
    }
    out.finite_accepting = 0;
    out.buchi_accepting |= 1 << restart;
    Ok(out)
}

fn no_loop_state_reaches_a_finite_state(a: &Buchi) -> bool {
    let mut reach = a.buchi_accepting;
    loop {
        let next = a
            .alphabet
            .iter()
            .fold(reach, |acc, c| acc | a.step(reach, c));
        if next == reach {
            break;
        }
        reach = next;
    }
    reach & a.finite_accepting == 0
}

/// Parses an expression and compiles it.
pub fn compile(input: &str) -> Result<Buchi, BuchiError> {
    to_automaton(&parse_regex(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(s: &str) -> UpWord {
        s.parse().expect("up word")
    }

    fn word(s: &str) -> Word {
        s.parse().expect("word")
    }

    #[test]
    fn parser_builds_the_expected_shapes() {
        assert_eq!(parse_regex("1").unwrap(), OmegaRegex::Epsilon);
        assert_eq!(parse_regex("a").unwrap(), OmegaRegex::Letter('a'));
        let ab = LetterSet::parse("ab").unwrap();
        assert_eq!(parse_regex("[ab]").unwrap(), OmegaRegex::Class(ab));
        assert_eq!(
            parse_regex("a|b").unwrap(),
            OmegaRegex::Union(vec![OmegaRegex::Letter('a'), OmegaRegex::Letter('b')])
        );
        assert_eq!(
            parse_regex("ab*").unwrap(),
            OmegaRegex::Concat(vec![
                OmegaRegex::Letter('a'),
                OmegaRegex::Star(Box::new(OmegaRegex::Letter('b'))),
            ])
        );
        assert_eq!(
            parse_regex("[ab]^w").unwrap(),
            OmegaRegex::Omega(Box::new(OmegaRegex::Class(ab)))
        );
        assert_eq!(
            parse_regex("[a]^inf").unwrap(),
            OmegaRegex::Union(vec![
                OmegaRegex::Star(Box::new(OmegaRegex::Class(LetterSet::parse("a").unwrap()))),
                OmegaRegex::Omega(Box::new(OmegaRegex::Class(LetterSet::parse("a").unwrap()))),
            ])
        );
    }

    #[test]
    fn parser_rejects_bad_syntax_with_positions() {
        let pos = |input: &str| match parse_regex(input) {
            Err(BuchiError::Syntax { pos, .. }) => pos,
            other => panic!("expected syntax error for {input:?}, got {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("a|"), 2);
        assert_eq!(pos("(a"), 2);
        assert_eq!(pos("a)"), 1);
        assert_eq!(pos("a^"), 2);
        assert_eq!(pos("a^q"), 2);
        assert_eq!(pos("[ab"), 3);
        assert_eq!(pos("a*b)"), 3);
    }

    #[test]
    fn omega_requires_a_nonempty_operand() {
        for input in ["(1)^w", "([a]*)^w", "(a|1)^w", "1^inf"] {
            assert!(
                matches!(parse_regex(input), Err(BuchiError::NullableOmega)),
                "input {input:?}"
            );
        }
        assert!(parse_regex("([a]^w)*").is_ok());
    }

    #[test]
    fn infinitely_many_aa_factors() {
        let aut = compile("([ab]*aa[ab]*)^w").unwrap();
        assert!(aut.lasso_accepts(&up("(aa)^w")));
        assert!(aut.lasso_accepts(&up("(aab)^w")));
        assert!(aut.lasso_accepts(&up("ab(abba)^w")));
        assert!(!aut.lasso_accepts(&up("aa(ab)^w")));
        assert!(!aut.lasso_accepts(&up("(ab)^w")));
        assert!(!aut.lasso_accepts(&up("(bab)^w")));
        assert!(!aut.lasso_accepts(&up("aa")));
        assert!(!aut.lasso_accepts(&up("1")));
    }

    #[test]
    fn finite_words_with_an_aa_factor() {
        let aut = compile("[ab]*aa[ab]*").unwrap();
        assert!(aut.lasso_accepts(&up("aa")));
        assert!(aut.lasso_accepts(&up("baab")));
        assert!(!aut.lasso_accepts(&up("ab")));
        assert!(!aut.lasso_accepts(&up("1")));
        assert!(!aut.lasso_accepts(&up("(aa)^w")));
        assert!(aut.accepts_finite(&word("babaab")));
        assert!(!aut.accepts_finite(&word("bab")));
    }

    #[test]
    fn eventually_constant_b_tail() {
        let aut = compile("[ab]*a[b]^w").unwrap();
        assert!(aut.lasso_accepts(&up("a(b)^w")));
        assert!(aut.lasso_accepts(&up("bba(b)^w")));
        assert!(!aut.lasso_accepts(&up("(b)^w")));
        assert!(!aut.lasso_accepts(&up("(ab)^w")));
        assert!(!aut.lasso_accepts(&up("ab")));
    }

    #[test]
    fn star_keeps_the_infinite_part_of_its_operand() {
        let aut = compile("([a]^w)*").unwrap();
        assert!(aut.lasso_accepts(&up("1")));
        assert!(aut.lasso_accepts(&up("(a)^w")));
        assert!(!aut.lasso_accepts(&up("a")));
    }

    #[test]
    fn empty_class_denotes_nothing() {
        let aut = compile("[]").unwrap();
        assert!(!aut.lasso_accepts(&up("1")));
        let eps = compile("[]^inf").unwrap();
        assert!(eps.lasso_accepts(&up("1")));
        assert!(!eps.lasso_accepts(&up("a")));
        let absorbed = compile("[a]^w[]").unwrap();
        assert!(absorbed.lasso_accepts(&up("(a)^w")));
        assert!(!absorbed.lasso_accepts(&up("a")));
    }

    #[test]
    fn recognition_separates_the_empty_word_from_identity_actions() {
        // Every letter of [a]* acts like the identity on the automaton
        // states, so only the explicit flag keeps the empty word and
        // the infinite repetition apart.
        let l = compile("[a]*").unwrap().recognize(5000).unwrap();
        assert!(l.up_membership(&up("1")));
        assert!(l.up_membership(&up("a")));
        assert!(l.up_membership(&up("aaa")));
        assert!(!l.up_membership(&up("(a)^w")));
        assert_eq!(l.monoid().size(), 2);
    }

    #[test]
    fn recognition_agrees_with_direct_acceptance() {
        let samples = [
            "1", "a", "b", "ab", "aab", "(a)^w", "(b)^w", "(ab)^w", "(aab)^w", "a(b)^w",
            "aa(ab)^w", "b(ab)^w", "(abba)^w", "bb", "(ba)^w",
        ];
        for expr in [
            "([ab]*aa[ab]*)^w",
            "[ab]*a[b]^w",
            "[ab]*aa[ab]*",
            "[ab]^inf",
            "(a|b[a]*b)^w",
            "a[ab]^inf|b[a]^w",
        ] {
            let aut = compile(expr).unwrap();
            let l = aut.recognize(5000).unwrap();
            for s in samples {
                let alpha = up(s);
                assert_eq!(
                    aut.lasso_accepts(&alpha),
                    l.up_membership(&alpha),
                    "expression {expr:?}, word {s}"
                );
            }
        }
    }

    #[test]
    fn state_and_element_budgets_are_enforced() {
        let long = "a".repeat(70);
        assert!(matches!(compile(&long), Err(BuchiError::Budget(_))));
        let aut = compile("([ab]*aa[ab]*)^w").unwrap();
        assert!(matches!(aut.recognize(3), Err(BuchiError::Budget(_))));
    }

    #[test]
    fn json_round_trip() {
        let aut = compile("[ab]*a[b]^w").unwrap();
        let text = aut.to_json();
        let back = Buchi::from_json(&text).unwrap();
        assert_eq!(back, aut);
        assert!(Buchi::from_json("{}").is_err());
        let bad = r#"{"states": 1, "alphabet": "a", "transitions": [[0, "a", 5]],
                      "initial": [0], "buchi_accepting": [], "finite_accepting": [0]}"#;
        assert!(matches!(Buchi::from_json(bad), Err(BuchiError::Invalid(_))));
    }
}
