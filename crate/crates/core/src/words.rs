//! Finite and ultimately periodic words over small alphabets.
//!
//! Letters are lowercase ASCII (`a`..=`z`), so alphabets and alphabet
//! subsets fit into a `u32` bitset. An ultimately periodic word is kept
//! in canonical lasso form: the loop is primitive and is rotated back
//! into the prefix as far as possible. With that invariant, structural
//! equality of [`UpWord`] values coincides with equality of the words
//! they denote.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A letter. Only `a`..=`z` are valid.
pub type Letter = char;

/// Errors for malformed letters and word notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {0:?}, expected a..z")]
    InvalidLetter(char),
    #[error("malformed word notation {0:?}")]
    Malformed(String),
}

fn letter_index(c: char) -> Result<u32, WordError> {
    if c.is_ascii_lowercase() {
        Ok(c as u32 - 'a' as u32)
    } else {
        Err(WordError::InvalidLetter(c))
    }
}

/// A set of letters, stored as a bitset over `a`..=`z`.
///
/// Used both for whole alphabets and for alphabet subsets such as
/// `alph(w)` or the gap alphabets of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LetterSet(u32);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    /// Builds a set from the letters of `s`.
    pub fn parse(s: &str) -> Result<LetterSet, WordError> {
        let mut set = LetterSet::EMPTY;
        for c in s.chars() {
            set.0 |= 1 << letter_index(c)?;
        }
        Ok(set)
    }

    pub fn singleton(c: Letter) -> LetterSet {
        LetterSet(1 << letter_index(c).expect("letter"))
    }

    pub fn insert(&mut self, c: Letter) {
        self.0 |= 1 << letter_index(c).expect("letter");
    }

    pub fn contains(self, c: Letter) -> bool {
        match letter_index(c) {
            Ok(i) => self.0 & (1 << i) != 0,
            Err(_) => false,
        }
    }

    pub fn union(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 | other.0)
    }

    pub fn intersect(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: LetterSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Letters in alphabetical order.
    pub fn iter(self) -> impl Iterator<Item = Letter> {
        (0..26)
            .filter(move |i| self.0 & (1 << i) != 0)
            .map(|i| (b'a' + i as u8) as char)
    }

    /// The letters as a plain string, e.g. `"ab"`.
    pub fn letters(self) -> String {
        self.iter().collect()
    }

    /// All subsets of this set, in ascending bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = LetterSet> {
        let mask = self.0;
        let mut next = Some(LetterSet(0));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur.0 == mask {
                None
            } else {
                Some(LetterSet(cur.0.wrapping_sub(mask) & mask))
            };
            Some(cur)
        })
    }

    /// Raw bitmask, for deterministic ordering of subsets.
    pub fn mask(self) -> u32 {
        self.0
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A finite word. The empty word is written `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Word {
        Word(letters.to_vec())
    }

    pub fn push(&mut self, c: Letter) {
        debug_assert!(c.is_ascii_lowercase());
        self.0.push(c);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// The set of letters occurring in the word.
    pub fn alph(&self) -> LetterSet {
        let mut set = LetterSet::EMPTY;
        for &c in &self.0 {
            set.insert(c);
        }
        set
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Scattered-subword test: every letter of `self` occurs in `w`,
    /// in order. Greedy two-pointer scan.
    pub fn is_subword_of(&self, w: &Word) -> bool {
        let mut it = w.0.iter();
        self.0.iter().all(|c| it.any(|d| d == c))
    }

    /// Shortlex order: by length, then lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "1")
        } else {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        if s == "1" {
            return Ok(Word::new());
        }
        let mut word = Word::new();
        for c in s.chars() {
            letter_index(c)?;
            word.push(c);
        }
        Ok(word)
    }
}

/// All words over `gamma` of length at most `max_len`, in shortlex
/// order.
pub fn words_up_to(gamma: LetterSet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut level: Vec<Word> = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for c in gamma.iter() {
                let mut extended = w.clone();
                extended.push(c);
                next.push(extended);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// An ultimately periodic word `u(v)^w`, i.e. the word `u v v v ...`,
/// or the finite word `u` when the loop `v` is empty.
///
/// Values are always in canonical lasso form: the loop is primitive
/// (not a proper power of a shorter word) and the prefix is as short
/// as possible. Two `UpWord`s denote the same element of the set of
/// finite and infinite words if and only if they are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpWord {
    prefix: Word,
    cycle: Word,
}

impl UpWord {
    /// Builds the word `prefix (cycle)^w` and canonicalizes it.
    pub fn new(prefix: Word, cycle: Word) -> UpWord {
        let (prefix, cycle) = canonical_parts(prefix, cycle);
        UpWord { prefix, cycle }
    }

    /// A finite word, i.e. an empty loop.
    pub fn finite(word: Word) -> UpWord {
        UpWord {
            prefix: word,
            cycle: Word::new(),
        }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn as_finite(&self) -> Option<&Word> {
        if self.is_finite() {
            Some(&self.prefix)
        } else {
            None
        }
    }

    /// The set of letters occurring in the word.
    pub fn alph(&self) -> LetterSet {
        self.prefix.alph().union(self.cycle.alph())
    }

    /// The set of letters occurring infinitely often: `alph` of the
    /// loop, empty for finite words.
    pub fn im(&self) -> LetterSet {
        self.cycle.alph()
    }

    /// The first `n` letters (fewer if the word is finite and shorter).
    pub fn unroll_to(&self, n: usize) -> Word {
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(self.prefix.letters());
        if !self.cycle.is_empty() {
            while letters.len() < n {
                letters.extend_from_slice(self.cycle.letters());
            }
        }
        letters.truncate(n);
        Word(letters)
    }

    /// The letter at position `i` (0-based), `None` past the end of a
    /// finite word.
    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        if i < self.prefix.len() {
            Some(self.prefix.letters()[i])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle.letters()[(i - self.prefix.len()) % self.cycle.len()])
        }
    }
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycle.is_empty() {
            write!(f, "{}", self.prefix)
        } else if self.prefix.is_empty() {
            write!(f, "({})^w", self.cycle)
        } else {
            write!(f, "{}({})^w", self.prefix, self.cycle)
        }
    }
}

impl fmt::Debug for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for UpWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<UpWord, WordError> {
        match s.find('(') {
            None => Ok(UpWord::finite(s.parse()?)),
            Some(open) => {
                let close = s
                    .find(')')
                    .ok_or_else(|| WordError::Malformed(s.to_string()))?;
                if close < open || &s[close + 1..] != "^w" {
                    return Err(WordError::Malformed(s.to_string()));
                }
                let prefix: Word = if open == 0 {
                    Word::new()
                } else {
                    s[..open].parse()?
                };
                let cycle: Word = s[open + 1..close].parse()?;
                if cycle.is_empty() {
                    return Err(WordError::Malformed(s.to_string()));
                }
                Ok(UpWord::new(prefix, cycle))
            }
        }
    }
}

/// Shortest period `d` of `v`, so that `v` is a power of its first `d`
/// letters.
fn primitive_root_len(v: &[Letter]) -> usize {
    let n = v.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && v.iter().enumerate().all(|(i, c)| *c == v[i % d]) {
            return d;
        }
    }
    n
}

fn canonical_parts(prefix: Word, cycle: Word) -> (Word, Word) {
    if cycle.is_empty() {
        return (prefix, cycle);
    }
    let root = primitive_root_len(cycle.letters());
    let mut cycle: Vec<Letter> = cycle.letters()[..root].to_vec();
    let mut prefix: Vec<Letter> = prefix.letters().to_vec();
    // u'c (v'c)^w and u' (cv')^w denote the same word, so the loop
    // boundary moves left while the letters match.
    while let Some(&last) = prefix.last() {
        if last == *cycle.last().expect("nonempty loop") {
            prefix.pop();
            cycle.rotate_right(1);
        } else {
            break;
        }
    }
    (Word(prefix), Word(cycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        s.parse().expect("word")
    }

    fn up(s: &str) -> UpWord {
        s.parse().expect("up word")
    }

    /// Equality of denoted words by unrolling far enough to cover both
    /// preperiods and a full common period.
    fn denote_same(a: &UpWord, b: &UpWord) -> bool {
        if a.is_finite() != b.is_finite() {
            return false;
        }
        if a.is_finite() {
            return a.prefix() == b.prefix();
        }
        let lcm = {
            let (mut x, mut y) = (a.cycle().len(), b.cycle().len());
            let gcd = loop {
                if y == 0 {
                    break x;
                }
                let r = x % y;
                x = y;
                y = r;
            };
            a.cycle().len() / gcd * b.cycle().len()
        };
        let n = a.prefix().len().max(b.prefix().len()) + lcm;
        a.unroll_to(n) == b.unroll_to(n)
    }

    #[test]
    fn canonicalize_reduces_loop_to_primitive_root() {
        // (aa)^w and (a)^w are the same word.
        let w = UpWord::new(word("1"), word("aa"));
        assert_eq!(w, up("(a)^w"));
    }

    #[test]
    fn canonicalize_rotates_loop_back_into_prefix() {
        let raw_prefix = word("a");
        let raw_cycle = word("baba");
        let w = UpWord::new(raw_prefix.clone(), raw_cycle.clone());
        assert_eq!(w, up("(ab)^w"));
        // Unrolling the raw parts gives the same word.
        let raw = UpWord {
            prefix: raw_prefix,
            cycle: word("ba"),
        };
        assert!(denote_same(&raw, &w));
    }

    #[test]
    fn canonicalize_keeps_finite_words() {
        let w = UpWord::new(word("ab"), Word::new());
        assert_eq!(w.as_finite(), Some(&word("ab")));
        assert_eq!(w.to_string(), "ab");
    }

    #[test]
    fn canonical_forms_identify_equal_words() {
        // ab(ab)^w, (ab)^w and a(ba)^w all denote ababab...
        assert_eq!(up("ab(ab)^w"), up("(ab)^w"));
        assert_eq!(up("a(ba)^w"), up("(ab)^w"));
        // (ba)^w starts with b and stays distinct.
        assert_ne!(up("(ba)^w"), up("(ab)^w"));
    }

    #[test]
    fn alph_and_im() {
        assert_eq!(up("a(b)^w").alph(), LetterSet::parse("ab").unwrap());
        assert_eq!(up("a(b)^w").im(), LetterSet::parse("b").unwrap());
        assert_eq!(up("ab").im(), LetterSet::EMPTY);
        assert_eq!(word("1").alph(), LetterSet::EMPTY);
    }

    #[test]
    fn subword_is_greedy_two_pointer() {
        assert!(word("ab").is_subword_of(&word("axxbx")));
        assert!(word("1").is_subword_of(&word("ab")));
        assert!(!word("ba").is_subword_of(&word("ab")));
        assert!(!word("aa").is_subword_of(&word("a")));
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["1", "ab", "(ab)^w", "aa(aab)^w"] {
            assert_eq!(up(s).to_string(), s);
        }
        // Parsing canonicalizes.
        assert_eq!(up("a(baba)^w").to_string(), "(ab)^w");
    }

    #[test]
    fn rejects_bad_notation() {
        assert!("A".parse::<Word>().is_err());
        assert!("a(b".parse::<UpWord>().is_err());
        assert!("a(b)^x".parse::<UpWord>().is_err());
        assert!("a()^w".parse::<UpWord>().is_err());
    }

    #[test]
    fn letter_set_subsets_ascend() {
        let set = LetterSet::parse("ab").unwrap();
        let subs: Vec<String> = set.subsets().map(|s| s.letters()).collect();
        assert_eq!(subs, ["", "a", "b", "ab"]);
    }

    #[test]
    fn letter_at_wraps_the_loop() {
        let w = up("ab(ba)^w");
        let got: String = (0..6).map(|i| w.letter_at(i).unwrap()).collect();
        assert_eq!(got, "abbaba");
        assert_eq!(up("ab").letter_at(2), None);
    }
}
