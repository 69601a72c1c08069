//! Monomials `A0* a1 A1* ... an An^inf` (or `An*` for a finite tail)
//! over finite and infinite words, together with the degree-`k`
//! monomial equivalences and their first-order counterpart.
//!
//! A monomial of degree `n` has `n` marker letters and `n + 1` gap
//! alphabets. Text form: `[ab]* a [b]* b [ab]^inf` with bracketed gap
//! classes, bare marker letters and a `^inf` or `*` tail.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::words::{Letter, LetterSet, UpWord, Word};
use crate::{Budget, BudgetError};

/// Whether the last gap admits only finite remainders (`An*`) or also
/// infinite ones (`An^inf`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Finite,
    Infinite,
}

/// Errors for monomial membership and refinement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("finite-tail monomial cannot be tested against an infinite word")]
    TailKindMismatch,
    #[error("word {word} is not a member of {monomial}")]
    NotMember { word: String, monomial: String },
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("malformed monomial notation {0:?}")]
    Malformed(String),
}

/// A monomial `A0* a1 A1* ... an An^inf` or `A0* a1 A1* ... an An*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    blocks: Vec<LetterSet>,
    marks: Vec<Letter>,
    tail: Tail,
}

impl Monomial {
    /// Builds a monomial from gap alphabets `A0..An` and markers
    /// `a1..an`. There is always exactly one more gap than markers.
    pub fn new(blocks: Vec<LetterSet>, marks: Vec<Letter>, tail: Tail) -> Monomial {
        assert_eq!(
            blocks.len(),
            marks.len() + 1,
            "one gap alphabet per marker plus one"
        );
        Monomial {
            blocks,
            marks,
            tail,
        }
    }

    pub fn degree(&self) -> usize {
        self.marks.len()
    }

    pub fn blocks(&self) -> &[LetterSet] {
        &self.blocks
    }

    pub fn marks(&self) -> &[Letter] {
        &self.marks
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// One step of the block automaton: from the set of reachable gap
    /// indices (as a bitmask), consume letter `c`.
    fn step(&self, state: u64, c: Letter) -> u64 {
        let n = self.degree();
        let mut next = 0u64;
        for j in 0..=n {
            if state & (1 << j) == 0 {
                continue;
            }
            if self.blocks[j].contains(c) {
                next |= 1 << j;
            }
            if j < n && self.marks[j] == c {
                next |= 1 << (j + 1);
            }
        }
        next
    }

    fn run(&self, state: u64, w: &Word) -> u64 {
        let mut state = state;
        for &c in w.letters() {
            if state == 0 {
                break;
            }
            state = self.step(state, c);
        }
        state
    }

    /// Membership of a finite word. A finite remainder is in `An^inf`
    /// exactly when it is in `An*`, so the tail kind does not matter
    /// here.
    pub fn contains_finite(&self, w: &Word) -> bool {
        self.run(1, w) & (1 << self.degree()) != 0
    }

    /// Membership of a finite or ultimately periodic word. Infinite
    /// words require an `Infinite` tail.
    pub fn contains_up(&self, word: &UpWord) -> Result<bool, MonomialError> {
        if let Some(w) = word.as_finite() {
            return Ok(self.contains_finite(w));
        }
        if self.tail == Tail::Finite {
            return Err(MonomialError::TailKindMismatch);
        }
        let n = self.degree();
        // Every letter after the last marker must lie in An; for the
        // loop part that means alph(v) as a whole.
        if !word.cycle().alph().is_subset_of(self.blocks[n]) {
            return Ok(false);
        }
        // Reaching gap n after some unrolling u v^j certifies that all
        // markers are placed and the letters read since the last one
        // are in An; the loop alphabet covers the rest. The state-set
        // sequence over unrollings is eventually periodic, so scan it
        // until it repeats.
        let mut state = self.run(1, word.prefix());
        let mut seen = Vec::new();
        loop {
            if state & (1 << n) != 0 {
                return Ok(true);
            }
            if state == 0 || seen.contains(&state) {
                return Ok(false);
            }
            seen.push(state);
            state = self.run(state, word.cycle());
        }
    }

    /// Leftmost witnessing factorization: the positions of the markers,
    /// each placed at the earliest position from which the rest of the
    /// word can still complete the match.
    fn leftmost_marks(&self, w: &Word) -> Option<Vec<usize>> {
        let n = self.degree();
        let len = w.len();
        // can_reach[pos][j]: reading w[pos..] from gap j can end in gap n.
        let mut can_reach = vec![vec![false; n + 1]; len + 1];
        can_reach[len][n] = true;
        for pos in (0..len).rev() {
            let c = w.letters()[pos];
            for j in 0..=n {
                can_reach[pos][j] = (self.blocks[j].contains(c) && can_reach[pos + 1][j])
                    || (j < n && self.marks[j] == c && can_reach[pos + 1][j + 1]);
            }
        }
        if !can_reach[0][0] {
            return None;
        }
        let mut positions = Vec::with_capacity(n);
        let (mut pos, mut j) = (0, 0);
        while j < n {
            let c = w.letters()[pos];
            if self.marks[j] == c && can_reach[pos + 1][j + 1] {
                positions.push(pos);
                j += 1;
            } else {
                debug_assert!(self.blocks[j].contains(c) && can_reach[pos + 1][j]);
            }
            pos += 1;
        }
        Some(positions)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        for j in 0..=n {
            if j > 0 {
                write!(f, " ")?;
            }
            let suffix = if j < n {
                "*"
            } else {
                match self.tail {
                    Tail::Finite => "*",
                    Tail::Infinite => "^inf",
                }
            };
            write!(f, "[{}]{}", self.blocks[j].letters(), suffix)?;
            if j < n {
                write!(f, " {}", self.marks[j])?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Monomial, MonomialError> {
        let malformed = || MonomialError::Malformed(s.to_string());
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() || tokens.len().is_multiple_of(2) {
            return Err(malformed());
        }
        let mut blocks = Vec::new();
        let mut marks = Vec::new();
        let mut tail = Tail::Finite;
        for (i, tok) in tokens.iter().enumerate() {
            if i % 2 == 0 {
                let rest = tok.strip_prefix('[').ok_or_else(malformed)?;
                let (class, suffix) = rest.split_once(']').ok_or_else(malformed)?;
                let set = LetterSet::parse(class).map_err(|_| malformed())?;
                let last = i + 1 == tokens.len();
                match (suffix, last) {
                    ("*", _) => {
                        if last {
                            tail = Tail::Finite;
                        }
                    }
                    ("^inf", true) => tail = Tail::Infinite,
                    _ => return Err(malformed()),
                }
                blocks.push(set);
            } else {
                let mut chars = tok.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => marks.push(c),
                    _ => return Err(malformed()),
                }
            }
        }
        Ok(Monomial::new(blocks, marks, tail))
    }
}

/// All monomials of degree at most `k` over `gamma`, in a fixed order:
/// ascending degree, then markers lexicographically, then gap alphabets
/// by ascending bitmask tuples. The count is
/// `sum over n <= k of |gamma|^n * 2^(|gamma| * (n + 1))`.
pub fn enumerate_k_monomials(
    gamma: LetterSet,
    k: usize,
    tail: Tail,
    budget: &Budget,
) -> Result<Vec<Monomial>, MonomialError> {
    if k > budget.max_k {
        return Err(BudgetError {
            what: "monomial degree",
            requested: k,
            limit: budget.max_k,
        }
        .into());
    }
    if gamma.len() > budget.max_alphabet {
        return Err(BudgetError {
            what: "alphabet size",
            requested: gamma.len(),
            limit: budget.max_alphabet,
        }
        .into());
    }
    let letters: Vec<Letter> = gamma.iter().collect();
    let subsets: Vec<LetterSet> = gamma.subsets().collect();
    let mut out = Vec::new();
    for n in 0..=k {
        for marks in tuples(&letters, n) {
            for blocks in tuples(&subsets, n + 1) {
                out.push(Monomial::new(blocks, marks.clone(), tail));
            }
        }
    }
    Ok(out)
}

/// All length-`len` tuples over `items`, lexicographic in item index.
fn tuples<T: Copy>(items: &[T], len: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Merges finite-tail monomials containing `w` into one finite-tail
/// monomial that still contains `w` and is included in every input.
///
/// The merge of two monomials takes the union of their leftmost marker
/// positions on `w`; each gap alphabet is the intersection of the two
/// gap alphabets covering that stretch of `w`, except that gaps of
/// width zero before a marker are set to the empty alphabet. The last
/// gap is always the intersection of the two tail alphabets. A single
/// input is merged with itself.
pub fn refine(w: &Word, monomials: &[Monomial]) -> Result<Monomial, MonomialError> {
    assert!(!monomials.is_empty(), "refine needs at least one monomial");
    for m in monomials {
        if m.tail != Tail::Finite {
            return Err(MonomialError::TailKindMismatch);
        }
        if !m.contains_finite(w) {
            return Err(MonomialError::NotMember {
                word: w.to_string(),
                monomial: m.to_string(),
            });
        }
    }
    let mut acc = if monomials.len() == 1 {
        merge(w, &monomials[0], &monomials[0])
    } else {
        merge(w, &monomials[0], &monomials[1])
    };
    for m in monomials.iter().skip(2) {
        acc = merge(w, &acc, m);
    }
    Ok(acc)
}

fn merge(w: &Word, m1: &Monomial, m2: &Monomial) -> Monomial {
    let f1 = m1.leftmost_marks(w).expect("membership checked");
    let f2 = m2.leftmost_marks(w).expect("membership checked");
    let mut positions: Vec<usize> = f1.iter().chain(f2.iter()).copied().collect();
    positions.sort_unstable();
    positions.dedup();

    // Gap index of a monomial in force over positions just after `end`
    // of the previous marker (markers at or before `end` are consumed).
    let gap_after = |f: &[usize], end: usize| f.iter().filter(|&&p| p <= end).count();

    let len = positions.len();
    let mut blocks = Vec::with_capacity(len + 1);
    let mut marks = Vec::with_capacity(len);
    for (g, &r) in positions.iter().enumerate() {
        let start = if g == 0 { 0 } else { positions[g - 1] + 1 };
        if start == r {
            // Zero-width gap before a marker.
            blocks.push(LetterSet::EMPTY);
        } else {
            let j1 = if g == 0 {
                0
            } else {
                gap_after(&f1, positions[g - 1])
            };
            let j2 = if g == 0 {
                0
            } else {
                gap_after(&f2, positions[g - 1])
            };
            blocks.push(m1.blocks[j1].intersect(m2.blocks[j2]));
        }
        marks.push(w.letters()[r]);
    }
    // The trailing gap always intersects the two tail alphabets.
    blocks.push(m1.blocks[m1.degree()].intersect(m2.blocks[m2.degree()]));
    let merged = Monomial::new(blocks, marks, Tail::Finite);
    debug_assert!(merged.contains_finite(w));
    merged
}

/// Monomial equivalence on finite words: `u` and `v` agree on every
/// finite-tail monomial of degree at most `k` over `gamma`.
pub fn equiv_k(
    gamma: LetterSet,
    u: &Word,
    v: &Word,
    k: usize,
    budget: &Budget,
) -> Result<bool, MonomialError> {
    let monomials = enumerate_k_monomials(gamma, k, Tail::Finite, budget)?;
    Ok(monomials
        .iter()
        .all(|m| m.contains_finite(u) == m.contains_finite(v)))
}

/// Monomial equivalence on finite and infinite words: agreement on
/// every infinite-tail monomial of degree at most `k` over `gamma`.
pub fn equiv_k_inf(
    gamma: LetterSet,
    alpha: &UpWord,
    beta: &UpWord,
    k: usize,
    budget: &Budget,
) -> Result<bool, MonomialError> {
    let monomials = enumerate_k_monomials(gamma, k, Tail::Infinite, budget)?;
    for m in &monomials {
        if m.contains_up(alpha)? != m.contains_up(beta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A prenex sentence with a block of existential variables followed by
/// a block of universal variables over word positions.
///
/// Variable indices number the existential variables first, then the
/// universal ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma2Formula {
    exists: usize,
    forall: usize,
    matrix: Formula,
}

/// Quantifier-free part, over position order and letter tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Less(usize, usize),
    LetterIs(usize, Letter),
    LetterIn(usize, LetterSet),
    And(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Sigma2Formula {
    pub fn quantifier_depth(&self) -> usize {
        self.exists + self.forall
    }

    pub fn exists(&self) -> usize {
        self.exists
    }

    pub fn forall(&self) -> usize {
        self.forall
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }
}

impl fmt::Display for Sigma2Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.exists {
            write!(f, "Ex{}", i + 1)?;
        }
        for i in 0..self.forall {
            if self.forall == 1 {
                write!(f, "Ay")?;
            } else {
                write!(f, "Ay{}", i + 1)?;
            }
        }
        write!(f, ": ")?;
        self.matrix.fmt_with(f, self.exists, self.forall)
    }
}

impl Formula {
    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, exists: usize, forall: usize) -> fmt::Result {
        let var = |i: usize| {
            if i < exists {
                format!("x{}", i + 1)
            } else if forall == 1 {
                "y".to_string()
            } else {
                format!("y{}", i - exists + 1)
            }
        };
        match self {
            Formula::Less(i, j) => write!(f, "{}<{}", var(*i), var(*j)),
            Formula::LetterIs(i, c) => write!(f, "l({})={}", var(*i), c),
            Formula::LetterIn(i, set) => write!(f, "l({}) in {}", var(*i), set),
            Formula::And(parts) => {
                for (idx, p) in parts.iter().enumerate() {
                    if idx > 0 {
                        write!(f, " & ")?;
                    }
                    let bracket = matches!(p, Formula::Implies(..));
                    if bracket {
                        write!(f, "(")?;
                    }
                    p.fmt_with(f, exists, forall)?;
                    if bracket {
                        write!(f, ")")?;
                    }
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                a.fmt_with(f, exists, forall)?;
                write!(f, " -> ")?;
                b.fmt_with(f, exists, forall)
            }
        }
    }

    fn eval(&self, w: &Word, assignment: &[usize]) -> bool {
        match self {
            Formula::Less(i, j) => assignment[*i] < assignment[*j],
            Formula::LetterIs(i, c) => w.letters()[assignment[*i]] == *c,
            Formula::LetterIn(i, set) => set.contains(w.letters()[assignment[*i]]),
            Formula::And(parts) => parts.iter().all(|p| p.eval(w, assignment)),
            Formula::Implies(a, b) => !a.eval(w, assignment) || b.eval(w, assignment),
        }
    }
}

/// The sentence `Ex1..Exn Ay: /\ l(xi)=ai /\ xi<xi+1
/// /\ (xi<y<xi+1 -> l(y) in Ai) /\ (y>xn -> l(y) in An)
/// /\ (y<x1 -> l(y) in A0)` describing membership in the monomial.
/// Degree 0 yields `Ay: l(y) in A0`. Quantifier depth is degree + 1.
pub fn to_sigma2_formula(m: &Monomial) -> Sigma2Formula {
    let n = m.degree();
    let y = n;
    let mut parts = Vec::new();
    for i in 0..n {
        parts.push(Formula::LetterIs(i, m.marks[i]));
    }
    for i in 0..n.saturating_sub(1) {
        parts.push(Formula::Less(i, i + 1));
    }
    for i in 0..n.saturating_sub(1) {
        parts.push(Formula::Implies(
            Box::new(Formula::And(vec![
                Formula::Less(i, y),
                Formula::Less(y, i + 1),
            ])),
            Box::new(Formula::LetterIn(y, m.blocks[i + 1])),
        ));
    }
    if n > 0 {
        parts.push(Formula::Implies(
            Box::new(Formula::Less(n - 1, y)),
            Box::new(Formula::LetterIn(y, m.blocks[n])),
        ));
        parts.push(Formula::Implies(
            Box::new(Formula::Less(y, 0)),
            Box::new(Formula::LetterIn(y, m.blocks[0])),
        ));
    } else {
        parts.push(Formula::LetterIn(y, m.blocks[0]));
    }
    let matrix = if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Formula::And(parts)
    };
    Sigma2Formula {
        exists: n,
        forall: 1,
        matrix,
    }
}

/// Evaluates the sentence over the positions of a finite word.
pub fn eval_fo_finite(formula: &Sigma2Formula, w: &Word) -> bool {
    let len = w.len();
    let vars = formula.exists + formula.forall;
    let mut assignment = vec![0usize; vars];
    eval_quantifiers(formula, w, len, &mut assignment, 0)
}

fn eval_quantifiers(
    formula: &Sigma2Formula,
    w: &Word,
    len: usize,
    assignment: &mut [usize],
    var: usize,
) -> bool {
    if var == formula.exists + formula.forall {
        return formula.matrix.eval(w, assignment);
    }
    let existential = var < formula.exists;
    for pos in 0..len {
        assignment[var] = pos;
        let inner = eval_quantifiers(formula, w, len, assignment, var + 1);
        if existential && inner {
            return true;
        }
        if !existential && !inner {
            return false;
        }
    }
    // Empty range: existential blocks fail, universal blocks hold.
    !existential
}
