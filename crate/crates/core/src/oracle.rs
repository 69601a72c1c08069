//! Independent reference implementations used to cross-check the main
//! pipeline: lasso enumeration, expression membership evaluated
//! directly on the word structure, monomial membership by
//! backtracking, and exact inclusion between monomial languages.
//!
//! Nothing here shares code with the automaton constructions or the
//! monomial block automaton, so agreement between the two sides is
//! meaningful evidence.

use std::collections::HashSet;

use crate::buchi::OmegaRegex;
use crate::monomials::{enumerate_k_monomials, Monomial, MonomialError, Tail};
use crate::words::{words_up_to, Letter, LetterSet, UpWord, Word};
use crate::{Budget, BudgetError};

/// Largest prefix and cycle bound accepted by [`enumerate_lassos`].
pub const MAX_LASSO_BOUND: usize = 8;

/// All canonical finite and ultimately periodic words `u(v)^w` with
/// `|u| <= max_prefix` and `|v| <= max_cycle`, ordered by total
/// length, then prefix, then cycle. Non-canonical spellings denote
/// words already listed, so they are skipped.
pub fn enumerate_lassos(
    gamma: LetterSet,
    max_prefix: usize,
    max_cycle: usize,
) -> Result<Vec<UpWord>, BudgetError> {
    for (what, bound) in [
        ("lasso prefix bound", max_prefix),
        ("lasso cycle bound", max_cycle),
    ] {
        if bound > MAX_LASSO_BOUND {
            return Err(BudgetError {
                what,
                requested: bound,
                limit: MAX_LASSO_BOUND,
            });
        }
    }
    let prefixes = words_up_to(gamma, max_prefix);
    let cycles = words_up_to(gamma, max_cycle);
    let mut out = Vec::new();
    for u in &prefixes {
        for v in &cycles {
            let alpha = UpWord::new(u.clone(), v.clone());
            if alpha.prefix() == u && alpha.cycle() == v {
                out.push(alpha);
            }
        }
    }
    out.sort_by(|x, y| {
        let len = |w: &UpWord| w.prefix().len() + w.cycle().len();
        len(x)
            .cmp(&len(y))
            .then_with(|| x.is_finite().cmp(&y.is_finite()).reverse())
            .then_with(|| x.prefix().shortlex_cmp(y.prefix()))
            .then_with(|| x.cycle().shortlex_cmp(y.cycle()))
    });
    Ok(out)
}

/// Binary relations over ring positions, one bit row per position.
type Rel = Vec<u32>;

fn rel_identity(n: usize) -> Rel {
    (0..n).map(|i| 1 << i).collect()
}

fn rel_empty(n: usize) -> Rel {
    vec![0; n]
}

fn rel_union(a: &Rel, b: &Rel) -> Rel {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn rel_compose(a: &Rel, b: &Rel) -> Rel {
    a.iter()
        .map(|&row| {
            let mut out = 0;
            let mut bits = row;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out |= b[q];
            }
            out
        })
        .collect()
}

fn rel_closure(a: &Rel) -> Rel {
    let n = a.len();
    let mut out = rel_union(a, &rel_identity(n));
    loop {
        let next = rel_union(&out, &rel_compose(&out, &out));
        if next == out {
            return out;
        }
        out = next;
    }
}

/// Positions `0..P` spell the prefix, positions `P..P+Q` the cycle;
/// the successor of the last cycle position wraps to `P`. Suffixes of
/// the word starting at the same ring position are identical, so
/// membership questions about suffixes only depend on the ring.
struct Ring<'a> {
    alpha: &'a UpWord,
    prefix_len: usize,
    size: usize,
}

impl<'a> Ring<'a> {
    fn new(alpha: &'a UpWord) -> Ring<'a> {
        Ring {
            alpha,
            prefix_len: alpha.prefix().len(),
            size: alpha.prefix().len() + alpha.cycle().len(),
        }
    }

    fn letter(&self, pos: usize) -> Letter {
        if pos < self.prefix_len {
            self.alpha.prefix().letters()[pos]
        } else {
            self.alpha.cycle().letters()[pos - self.prefix_len]
        }
    }

    fn next(&self, pos: usize) -> usize {
        if pos + 1 == self.size {
            self.prefix_len
        } else {
            pos + 1
        }
    }

    /// The relation: reading one finite word of the expression moves
    /// the ring position from p to q.
    fn spans(&self, expr: &OmegaRegex) -> Rel {
        let n = self.size;
        match expr {
            OmegaRegex::Epsilon => rel_identity(n),
            OmegaRegex::Letter(c) => (0..n)
                .map(|p| {
                    if self.letter(p) == *c {
                        1 << self.next(p)
                    } else {
                        0
                    }
                })
                .collect(),
            OmegaRegex::Class(set) => (0..n)
                .map(|p| {
                    if set.contains(self.letter(p)) {
                        1 << self.next(p)
                    } else {
                        0
                    }
                })
                .collect(),
            OmegaRegex::Union(parts) => parts
                .iter()
                .map(|part| self.spans(part))
                .fold(rel_empty(n), |acc, r| rel_union(&acc, &r)),
            OmegaRegex::Concat(parts) => parts
                .iter()
                .map(|part| self.spans(part))
                .fold(rel_identity(n), |acc, r| rel_compose(&acc, &r)),
            OmegaRegex::Star(inner) => rel_closure(&self.spans(inner)),
            OmegaRegex::Omega(_) => rel_empty(n),
        }
    }

    /// The set of ring positions whose infinite suffix belongs to the
    /// expression.
    fn tails(&self, expr: &OmegaRegex) -> u32 {
        match expr {
            OmegaRegex::Epsilon | OmegaRegex::Letter(_) | OmegaRegex::Class(_) => 0,
            OmegaRegex::Union(parts) => parts.iter().fold(0, |acc, part| acc | self.tails(part)),
            OmegaRegex::Concat(parts) => {
                // An infinite suffix matches x1 x2 ... xn when some
                // finite span of x1 ... x_{i-1} lands on a position
                // whose suffix matches x_i infinitely.
                let mut acc = 0;
                let mut prefix_spans = rel_identity(self.size);
                for part in parts {
                    acc |= apply_to_set(&prefix_spans, self.tails(part));
                    prefix_spans = rel_compose(&prefix_spans, &self.spans(part));
                }
                acc
            }
            OmegaRegex::Star(inner) => {
                apply_to_set(&rel_closure(&self.spans(inner)), self.tails(inner))
            }
            OmegaRegex::Omega(inner) => {
                let step = self.spans(inner);
                let reach = rel_closure(&step);
                let plus = rel_compose(&step, &reach);
                let cyclic: u32 = (0..self.size)
                    .filter(|&p| plus[p] >> p & 1 == 1)
                    .fold(0, |m, p| m | 1 << p);
                apply_to_set(&reach, cyclic) | apply_to_set(&reach, self.tails(inner))
            }
        }
    }
}

fn apply_to_set(rel: &Rel, targets: u32) -> u32 {
    (0..rel.len())
        .filter(|&p| rel[p] & targets != 0)
        .fold(0, |m, p| m | 1 << p)
}

/// The set of end positions reachable from `starts` by matching the
/// expression against `w` once, as a finite word.
fn finite_ends(expr: &OmegaRegex, w: &Word, starts: &HashSet<usize>) -> HashSet<usize> {
    match expr {
        OmegaRegex::Epsilon => starts.clone(),
        OmegaRegex::Letter(c) => starts
            .iter()
            .filter(|&&i| w.letters().get(i) == Some(c))
            .map(|&i| i + 1)
            .collect(),
        OmegaRegex::Class(set) => starts
            .iter()
            .filter(|&&i| w.letters().get(i).is_some_and(|&c| set.contains(c)))
            .map(|&i| i + 1)
            .collect(),
        OmegaRegex::Union(parts) => parts
            .iter()
            .flat_map(|part| finite_ends(part, w, starts))
            .collect(),
        OmegaRegex::Concat(parts) => parts
            .iter()
            .fold(starts.clone(), |acc, part| finite_ends(part, w, &acc)),
        OmegaRegex::Star(inner) => {
            let mut acc = starts.clone();
            loop {
                let grown: HashSet<usize> =
                    acc.union(&finite_ends(inner, w, &acc)).copied().collect();
                if grown.len() == acc.len() {
                    return acc;
                }
                acc = grown;
            }
        }
        OmegaRegex::Omega(_) => HashSet::new(),
    }
}

/// Membership of a finite or ultimately periodic word in the language
/// of an expression, evaluated directly on the word.
///
/// Finite words use position set propagation. Infinite words `u(v)^w`
/// use relations over the ring of prefix and cycle positions: two
/// suffixes starting at the same ring position are equal, so finite
/// subexpression matches are position relations and infinite matches
/// are position sets.
pub fn naive_regex_membership(expr: &OmegaRegex, alpha: &UpWord) -> bool {
    match alpha.as_finite() {
        Some(w) => finite_ends(expr, w, &HashSet::from([0])).contains(&w.len()),
        None => {
            let ring = Ring::new(alpha);
            ring.tails(expr) & 1 != 0
        }
    }
}

fn block_runs(blocks: &[LetterSet], marks: &[Letter], w: &[Letter], pos: usize, bi: usize) -> bool {
    if bi == marks.len() {
        return w[pos..].iter().all(|&c| blocks[bi].contains(c));
    }
    let mut p = pos;
    loop {
        if p < w.len() && w[p] == marks[bi] && block_runs(blocks, marks, w, p + 1, bi + 1) {
            return true;
        }
        if p < w.len() && blocks[bi].contains(w[p]) {
            p += 1;
        } else {
            return false;
        }
    }
}

/// Membership of a finite word in a monomial, by backtracking over
/// marker placements.
pub fn naive_monomial_membership(m: &Monomial, w: &Word) -> bool {
    block_runs(m.blocks(), m.marks(), w.letters(), 0, 0)
}

/// The membership vector of `w` over all monomials of degree at most
/// `k` with finite tails, computed by backtracking. Two words are
/// equivalent at degree `k` exactly when their vectors are equal.
pub fn naive_equiv_class(
    gamma: LetterSet,
    k: usize,
    w: &Word,
    budget: &Budget,
) -> Result<Vec<bool>, BudgetError> {
    let monomials = match enumerate_k_monomials(gamma, k, Tail::Finite, budget) {
        Ok(monomials) => monomials,
        Err(MonomialError::Budget(e)) => return Err(e),
        Err(other) => unreachable!("enumeration only fails on budgets: {other}"),
    };
    Ok(monomials
        .iter()
        .map(|m| naive_monomial_membership(m, w))
        .collect())
}

/// Exact inclusion between the finite-word languages of two monomials,
/// by the product of the left automaton with the subsets of the right
/// one.
pub fn monomial_included(a: &Monomial, b: &Monomial) -> bool {
    assert!(b.degree() <= 24, "right monomial too wide for subset masks");
    let alphabet = monomial_alphabet(a).union(monomial_alphabet(b));
    let db = b.degree();
    let accept_b = |set: u32| set >> db & 1 == 1;
    let step_b = |set: u32, c: Letter| {
        let mut out = 0;
        for i in 0..=db {
            if set >> i & 1 == 0 {
                continue;
            }
            if b.blocks()[i].contains(c) {
                out |= 1 << i;
            }
            if i < db && b.marks()[i] == c {
                out |= 1 << (i + 1);
            }
        }
        out
    };
    let da = a.degree();
    let mut visited = vec![false; (da + 1) << (db + 1)];
    let mut queue = vec![(0usize, 1u32)];
    visited[1] = true;
    while let Some((qa, sb)) = queue.pop() {
        if qa == da && !accept_b(sb) {
            return false;
        }
        for c in alphabet.iter() {
            let mut targets = Vec::new();
            if a.blocks()[qa].contains(c) {
                targets.push(qa);
            }
            if qa < da && a.marks()[qa] == c {
                targets.push(qa + 1);
            }
            for ta in targets {
                let tb = step_b(sb, c);
                let key = ta << (db + 1) | tb as usize;
                if !visited[key] {
                    visited[key] = true;
                    queue.push((ta, tb));
                }
            }
        }
    }
    true
}

fn monomial_alphabet(m: &Monomial) -> LetterSet {
    let mut set = m
        .blocks()
        .iter()
        .fold(LetterSet::EMPTY, |acc, b| acc.union(*b));
    for &c in m.marks() {
        set.insert(c);
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buchi::parse_regex;

    fn up(s: &str) -> UpWord {
        s.parse().expect("up word")
    }

    fn word(s: &str) -> Word {
        s.parse().expect("word")
    }

    fn monomial(s: &str) -> Monomial {
        s.parse().expect("monomial")
    }

    #[test]
    fn lasso_enumeration_is_canonical_and_ordered() {
        let gamma = LetterSet::parse("a").unwrap();
        let lassos = enumerate_lassos(gamma, 1, 1).unwrap();
        let spelled: Vec<String> = lassos.iter().map(|w| w.to_string()).collect();
        assert_eq!(spelled, ["1", "a", "(a)^w"]);

        let gamma = LetterSet::parse("ab").unwrap();
        let lassos = enumerate_lassos(gamma, 0, 1).unwrap();
        let spelled: Vec<String> = lassos.iter().map(|w| w.to_string()).collect();
        assert_eq!(spelled, ["1", "(a)^w", "(b)^w"]);

        let lassos = enumerate_lassos(gamma, 2, 2).unwrap();
        let mut unique = HashSet::new();
        for alpha in &lassos {
            assert!(unique.insert(alpha.to_string()), "duplicate {alpha}");
            let again = UpWord::new(alpha.prefix().clone(), alpha.cycle().clone());
            assert_eq!(&again, alpha, "canonical form {alpha}");
        }
        assert!(matches!(
            enumerate_lassos(gamma, 9, 1),
            Err(BudgetError { .. })
        ));
    }

    #[test]
    fn ring_membership_on_infinite_words() {
        let cases = [
            ("([ab]*aa[ab]*)^w", "(aa)^w", true),
            ("([ab]*aa[ab]*)^w", "(aab)^w", true),
            ("([ab]*aa[ab]*)^w", "aa(ab)^w", false),
            ("([ab]*aa[ab]*)^w", "(ab)^w", false),
            ("[ab]*a[b]^w", "a(b)^w", true),
            ("[ab]*a[b]^w", "bba(b)^w", true),
            ("[ab]*a[b]^w", "(b)^w", false),
            ("[ab]*a[b]^w", "(ab)^w", false),
            ("[ab]^inf", "(ab)^w", true),
            ("[a]^w|[b]^w", "(b)^w", true),
            ("[a]^w|[b]^w", "(ab)^w", false),
            ("([a]^w)*", "(a)^w", true),
            ("a[ab]^inf|b[a]^w", "b(a)^w", true),
            ("a[ab]^inf|b[a]^w", "b(ab)^w", false),
        ];
        for (expr, alpha, expected) in cases {
            let parsed = parse_regex(expr).unwrap();
            assert_eq!(
                naive_regex_membership(&parsed, &up(alpha)),
                expected,
                "expression {expr:?}, word {alpha}"
            );
        }
    }

    #[test]
    fn position_set_membership_on_finite_words() {
        let cases = [
            ("[ab]*aa[ab]*", "aa", true),
            ("[ab]*aa[ab]*", "baab", true),
            ("[ab]*aa[ab]*", "ab", false),
            ("[ab]*aa[ab]*", "1", false),
            ("(aa)*", "1", true),
            ("(aa)*", "aa", true),
            ("(aa)*", "aaa", false),
            ("[ab]^inf", "ab", true),
            ("a|b[a]*b", "bab", true),
            ("a|b[a]*b", "ba", false),
            ("1", "1", true),
            ("1", "a", false),
        ];
        for (expr, w, expected) in cases {
            let parsed = parse_regex(expr).unwrap();
            assert_eq!(
                naive_regex_membership(&parsed, &up(w)),
                expected,
                "expression {expr:?}, word {w}"
            );
        }
    }

    #[test]
    fn backtracking_membership_matches_the_monomial_semantics() {
        let m = monomial("[ab]* a [b]* b [ab]*");
        assert!(naive_monomial_membership(&m, &word("ab")));
        assert!(naive_monomial_membership(&m, &word("babb")));
        assert!(!naive_monomial_membership(&m, &word("ba")));
        assert!(!naive_monomial_membership(&m, &word("a")));
        let plain = monomial("[]* a []*");
        assert!(naive_monomial_membership(&plain, &word("a")));
        assert!(!naive_monomial_membership(&plain, &word("aa")));
    }

    #[test]
    fn equivalence_vectors_freeze_known_cases() {
        let gamma = LetterSet::parse("a").unwrap();
        let budget = Budget::default();
        let eps = naive_equiv_class(gamma, 1, &word("1"), &budget).unwrap();
        let monomials = enumerate_k_monomials(gamma, 1, Tail::Finite, &budget).unwrap();
        for (m, bit) in monomials.iter().zip(&eps) {
            assert_eq!(*bit, m.degree() == 0, "monomial {m}");
        }
        let aa = naive_equiv_class(gamma, 1, &word("aa"), &budget).unwrap();
        let aaa = naive_equiv_class(gamma, 1, &word("aaa"), &budget).unwrap();
        assert_eq!(aa, aaa);
        let a = naive_equiv_class(gamma, 1, &word("a"), &budget).unwrap();
        let differing: Vec<String> = monomials
            .iter()
            .zip(a.iter().zip(&aa))
            .filter(|(_, (x, y))| x != y)
            .map(|(m, _)| m.to_string())
            .collect();
        assert_eq!(differing, ["[]* a []*"]);
    }

    #[test]
    fn inclusion_between_monomial_languages() {
        let narrow = monomial("[]* a [b]*");
        let wide = monomial("[ab]* a [ab]*");
        assert!(monomial_included(&narrow, &wide));
        assert!(!monomial_included(&wide, &narrow));
        let same = monomial("[a]* b [a]*");
        assert!(monomial_included(&same, &same));
        let zero = monomial("[ab]*");
        assert!(monomial_included(&monomial("[a]*"), &zero));
        assert!(!monomial_included(&zero, &monomial("[a]*")));
    }

    #[test]
    fn oracle_agrees_with_the_automaton_on_small_lassos() {
        let exprs = [
            "([ab]*aa[ab]*)^w",
            "[ab]*a[b]^w",
            "[ab]*aa[ab]*",
            "(a|b[a]*b)^w",
        ];
        let gamma = LetterSet::parse("ab").unwrap();
        for expr in exprs {
            let parsed = parse_regex(expr).unwrap();
            let aut = crate::buchi::to_automaton(&parsed).unwrap();
            for alpha in enumerate_lassos(gamma, 3, 3).unwrap() {
                assert_eq!(
                    naive_regex_membership(&parsed, &alpha),
                    aut.lasso_accepts(&alpha),
                    "expression {expr:?}, word {alpha}"
                );
            }
        }
    }
}
