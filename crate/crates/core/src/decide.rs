//! Decision procedures over recognized languages: the test for being
//! a Boolean combination of open sets of the alphabetic topology,
//! with an explicit block representation and bounded verification;
//! the analogous test for the Cantor topology; and the conditional
//! test for definability by Boolean combinations of two-block
//! quantifier prefixes, which combines the topological condition with
//! a pluggable oracle for the finite-word half.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    alph_image, syntactic_quotient, AlphImage, Elem, FiniteMonoid, Hom, RecognizedLanguage,
    SyntacticQuotient,
};
use crate::monomials::{enumerate_k_monomials, MonomialError, Tail};
use crate::oracle::enumerate_lassos;
use crate::words::{words_up_to, LetterSet, UpWord, Word};
use crate::{Budget, BudgetError};

/// A three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("the representation is only defined after a yes answer to the alphabetic test")]
    PreconditionViolated,
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

/// A violation of the pair-agreement criterion: both pairs are linked,
/// `e` and `f` are images of words over exactly the letters of
/// `alphabet`, and `s`, `t` span the same right coset of the submonoid
/// generated by those letters, yet only `pair1` is accepted. `alpha`
/// and `beta` realize the two pairs as ultimately periodic words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabeticWitness {
    pub pair1: (Elem, Elem),
    pub pair2: (Elem, Elem),
    pub alphabet: LetterSet,
    pub alpha: UpWord,
    pub beta: UpWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabeticResult {
    pub answer: bool,
    pub witness: Option<AlphabeticWitness>,
    /// On a yes answer, blocks whose union denotes the language.
    pub blocks: Vec<Block>,
}

/// One block `L(s, C)` of the representation: the words of `[s]C^inf`
/// whose tail alphabet is exactly `C` and whose achievable prefix
/// values all keep `s` in their coset over `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Block {
    pub value: Elem,
    pub alphabet: LetterSet,
}

/// Elements reachable from the identity by the letter images, i.e.
/// the image of the homomorphism. Pairs outside it describe no words,
/// so their acceptance bits are conventions and are not compared.
fn generated_mask(h: &Hom) -> Vec<bool> {
    let m = h.monoid();
    let mut seen = vec![false; m.size()];
    seen[m.identity()] = true;
    let mut queue = VecDeque::from([m.identity()]);
    while let Some(x) = queue.pop_front() {
        for c in h.alphabet().iter() {
            let y = m.mul(x, h.letter(c));
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

fn coset_masks(h: &Hom, c: LetterSet) -> Vec<Vec<u64>> {
    let m = h.monoid();
    let blocks = m.size().div_ceil(64);
    let sub: Vec<Elem> = h.submonoid_image(c).into_iter().collect();
    (0..m.size())
        .map(|x| {
            let mut mask = vec![0u64; blocks];
            for &y in &sub {
                let z = m.mul(x, y);
                mask[z / 64] |= 1 << (z % 64);
            }
            mask
        })
        .collect()
}

/// Decides whether the language is a finite Boolean combination of
/// open sets of the alphabetic topology, whose basic opens are the
/// sets `W C^inf`.
///
/// The criterion is pair agreement: whenever linked pairs `(s, e)` and
/// `(t, f)` satisfy the hypothesis that `e` and `f` are images of
/// words with alphabet exactly `C` and `s·h(C*) = t·h(C*)`, the two
/// pairs must agree on acceptance. Any recognizing homomorphism gives
/// the same answer as the syntactic one.
///
/// The search iterates accepted pairs in order, then alphabets `C`
/// ascending, then candidate idempotents `f` by shortlex of their
/// witness words, then candidate `t` ascending; the first
/// disagreement found is returned, realized by words: `alpha` spells
/// the accepted pair and lies in the language, `beta` spells the
/// rejected pair and lies outside.
pub fn decide_alphabetic_boolean(l: &RecognizedLanguage) -> AlphabeticResult {
    let h = l.hom();
    let m = h.monoid();
    let ai = alph_image(h);
    let realized = generated_mask(h);
    let idempotents = m.idempotents();
    let mut coset_tables: HashMap<LetterSet, Vec<Vec<u64>>> = HashMap::new();
    for &(s, e) in l.accepted() {
        if !realized[s] || !realized[e] {
            continue;
        }
        for c in h.alphabet().subsets() {
            if !ai.contains(e, c) {
                continue;
            }
            let cosets = coset_tables.entry(c).or_insert_with(|| coset_masks(h, c));
            let mut others: Vec<(&Word, Elem)> = idempotents
                .iter()
                .filter_map(|&f| ai.witness(f, c).map(|w| (w, f)))
                .collect();
            others.sort_by(|x, y| x.0.shortlex_cmp(y.0));
            for (loop_word, f) in others {
                for (t, &t_realized) in realized.iter().enumerate() {
                    if !t_realized || m.mul(t, f) != t || l.is_accepted(t, f) {
                        continue;
                    }
                    if cosets[t] != cosets[s] {
                        continue;
                    }
                    let alpha = UpWord::new(
                        h.shortest_preimage(s).expect("s is realized"),
                        ai.witness(e, c)
                            .expect("hypothesis includes (e, C)")
                            .clone(),
                    );
                    let beta = UpWord::new(
                        h.shortest_preimage(t).expect("t is realized"),
                        loop_word.clone(),
                    );
                    let witness = AlphabeticWitness {
                        pair1: (s, e),
                        pair2: (t, f),
                        alphabet: c,
                        alpha,
                        beta,
                    };
                    return AlphabeticResult {
                        answer: false,
                        witness: Some(witness),
                        blocks: Vec::new(),
                    };
                }
            }
        }
    }
    AlphabeticResult {
        answer: true,
        witness: None,
        blocks: representation_blocks(l, &ai),
    }
}

/// All blocks `(s, C)` such that some accepted pair `(s, e)` has `e`
/// achievable by a word with alphabet exactly `C`. The accepted pairs
/// with the identity contribute the `C = ∅` blocks for the finite
/// words.
pub(crate) fn representation_blocks(l: &RecognizedLanguage, ai: &AlphImage) -> Vec<Block> {
    let mut blocks = BTreeSet::new();
    for &(s, e) in l.accepted() {
        for c in l.hom().alphabet().subsets() {
            if ai.contains(e, c) {
                blocks.insert(Block {
                    value: s,
                    alphabet: c,
                });
            }
        }
    }
    blocks.into_iter().collect()
}

/// The block representation of a language that passed the alphabetic
/// test.
pub fn construct_representation(l: &RecognizedLanguage) -> Result<Vec<Block>, DecideError> {
    let result = decide_alphabetic_boolean(l);
    if result.answer {
        Ok(result.blocks)
    } else {
        Err(DecideError::PreconditionViolated)
    }
}

/// A basic set of the alphabetic topology over a recognizing
/// homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicSet {
    /// `[m]C^inf`: words splitting as `p·beta` with `h(p) = m` and
    /// `beta` a word over `C`.
    ClassTail { value: Elem, alphabet: LetterSet },
    /// `Γ*D^inf`: words whose tail eventually stays inside `D`.
    AnyTail { alphabet: LetterSet },
    /// `L(s, C) = [s]C^inf minus the smaller-tail sets Γ*D^inf for
    /// D ⊊ C and minus the [t]C^inf with s outside t·h(C*)`.
    Block { value: Elem, alphabet: LetterSet },
}

/// The set of values `h(p)` over all splits `alpha = p·beta` with
/// `beta` a word over `alphabet`, as a membership vector.
///
/// For an infinite word only finitely many split points matter: once
/// past the prefix, the running values of ever longer unrollings
/// cycle, so splits up to `|u| + (|M| + 1)·|v|` letters reach every
/// achievable value.
pub fn achievable_values(h: &Hom, alpha: &UpWord, alphabet: LetterSet) -> Vec<bool> {
    let m = h.monoid();
    let mut hit = vec![false; m.size()];
    match alpha.as_finite() {
        Some(w) => {
            let letters = w.letters();
            let n = letters.len();
            let mut tail_ok = vec![true; n + 1];
            for i in (0..n).rev() {
                tail_ok[i] = tail_ok[i + 1] && alphabet.contains(letters[i]);
            }
            let mut value = m.identity();
            for i in 0..=n {
                if tail_ok[i] {
                    hit[value] = true;
                }
                if i < n {
                    value = m.mul(value, h.letter(letters[i]));
                }
            }
        }
        None => {
            if !alpha.im().is_subset_of(alphabet) {
                return hit;
            }
            let prefix = alpha.prefix().letters();
            let mut tail_ok = vec![true; prefix.len() + 1];
            for i in (0..prefix.len()).rev() {
                tail_ok[i] = tail_ok[i + 1] && alphabet.contains(prefix[i]);
            }
            let mut value = m.identity();
            for (&ok, &c) in tail_ok.iter().zip(prefix) {
                if ok {
                    hit[value] = true;
                }
                value = m.mul(value, h.letter(c));
            }
            hit[value] = true;
            for i in 0..(m.size() + 1) * alpha.cycle().len() {
                let c = alpha.letter_at(prefix.len() + i).expect("word is infinite");
                value = m.mul(value, h.letter(c));
                hit[value] = true;
            }
        }
    }
    hit
}

/// Exact membership of a finite or ultimately periodic word in a
/// basic set.
pub fn up_membership_basic(h: &Hom, set: &BasicSet, alpha: &UpWord) -> bool {
    match *set {
        BasicSet::ClassTail { value, alphabet } => achievable_values(h, alpha, alphabet)[value],
        BasicSet::AnyTail { alphabet } => alpha.is_finite() || alpha.im().is_subset_of(alphabet),
        BasicSet::Block { value, alphabet } => {
            let reachable = achievable_values(h, alpha, alphabet);
            if !reachable[value] {
                return false;
            }
            let smaller_tail = if alpha.is_finite() {
                !alphabet.is_empty()
            } else {
                alpha.im() != alphabet
            };
            if smaller_tail {
                return false;
            }
            (0..h.monoid().size())
                .filter(|&t| reachable[t])
                .all(|t| h.coset(t, alphabet).contains(&value))
        }
    }
}

/// Checks that the union of the blocks agrees with the language on
/// every canonical lasso within the bounds, returning the first
/// disagreeing word if any.
pub fn verify_representation(
    l: &RecognizedLanguage,
    blocks: &[Block],
    bounds: (usize, usize),
) -> Result<Option<UpWord>, BudgetError> {
    let h = l.hom();
    for alpha in enumerate_lassos(h.alphabet(), bounds.0, bounds.1)? {
        let direct = l.up_membership(&alpha);
        let by_blocks = blocks.iter().any(|b| {
            up_membership_basic(
                h,
                &BasicSet::Block {
                    value: b.value,
                    alphabet: b.alphabet,
                },
                &alpha,
            )
        });
        if direct != by_blocks {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorWitness {
    pub pair1: (Elem, Elem),
    pub pair2: (Elem, Elem),
    pub alpha: UpWord,
    pub beta: UpWord,
}

pub struct CantorResult {
    pub answer: bool,
    pub witness: Option<CantorWitness>,
    /// The syntactic quotient the criterion was evaluated on.
    pub quotient: SyntacticQuotient,
}

/// Decides whether the language is a finite Boolean combination of
/// open sets of the Cantor topology, whose basic opens are the sets
/// `W Γ^inf`.
///
/// The criterion is stated on the syntactic monoid, so the quotient is
/// taken first: linked pairs `(s, e)` and `(t, f)` with `s` and `t`
/// generating the same right ideal must agree on acceptance.
pub fn decide_cantor_boolean(l: &RecognizedLanguage) -> CantorResult {
    let quotient = syntactic_quotient(l);
    let witness = {
        let ql = &quotient.language;
        let m = ql.monoid();
        let linked = m.linked_pairs();
        let mut found = None;
        'search: for &(s, e) in &linked {
            if !ql.is_accepted(s, e) {
                continue;
            }
            for &(t, f) in &linked {
                if ql.is_accepted(t, f) || !m.green_r_equivalent(s, t) {
                    continue;
                }
                let preimage = |x| {
                    ql.hom()
                        .shortest_preimage(x)
                        .expect("quotient is generated")
                };
                found = Some(CantorWitness {
                    pair1: (s, e),
                    pair2: (t, f),
                    alpha: UpWord::new(preimage(s), preimage(e)),
                    beta: UpWord::new(preimage(t), preimage(f)),
                });
                break 'search;
            }
        }
        found
    };
    CantorResult {
        answer: witness.is_none(),
        witness,
        quotient,
    }
}

/// The outcome of a definability oracle call. A negative outcome
/// carries two words with equal bounded-degree monomial memberships
/// but different images: evidence, not proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Yes,
    No { word1: Word, word2: Word },
    Unknown,
}

/// A pluggable decision for the finite-word condition: is every
/// finite-word language recognized by the homomorphism a union of
/// `equiv_k` classes for some degree k? The real decision procedure is
/// out of scope; the bundled implementations answer honestly unknown,
/// assume yes, or refute from bounded evidence.
pub trait DefinabilityOracle {
    fn assess(&self, h: &Hom, budget: &Budget) -> Result<OracleOutcome, BudgetError>;
}

/// Always answers unknown.
pub struct UnknownOracle;

impl DefinabilityOracle for UnknownOracle {
    fn assess(&self, _h: &Hom, _budget: &Budget) -> Result<OracleOutcome, BudgetError> {
        Ok(OracleOutcome::Unknown)
    }
}

/// Always answers yes; for exercising the surrounding pipeline.
pub struct AssumeYesOracle;

impl DefinabilityOracle for AssumeYesOracle {
    fn assess(&self, _h: &Hom, _budget: &Budget) -> Result<OracleOutcome, BudgetError> {
        Ok(OracleOutcome::Yes)
    }
}

/// Refutes from a found violation at one fixed degree, else answers
/// unknown. A violation certifies that the recognized finite-word
/// languages are not unions of degree-`degree` classes; they could
/// still be unions of classes of a higher degree, so absence of a
/// violation proves nothing.
pub struct EvidenceOracle {
    pub degree: usize,
    pub length_bound: usize,
}

impl DefinabilityOracle for EvidenceOracle {
    fn assess(&self, h: &Hom, budget: &Budget) -> Result<OracleOutcome, BudgetError> {
        Ok(
            match signature_violation(h, self.degree, self.length_bound, budget)? {
                Some((word1, word2)) => OracleOutcome::No { word1, word2 },
                None => OracleOutcome::Unknown,
            },
        )
    }
}

/// Two words up to the length bound with the same degree-bounded
/// monomial memberships but different images, if any; scanned in
/// shortlex order, first collision returned.
fn signature_violation(
    h: &Hom,
    degree: usize,
    length_bound: usize,
    budget: &Budget,
) -> Result<Option<(Word, Word)>, BudgetError> {
    const MAX_SCAN: usize = 16;
    if length_bound > MAX_SCAN {
        return Err(BudgetError {
            what: "saturation scan length",
            requested: length_bound,
            limit: MAX_SCAN,
        });
    }
    let monomials = match enumerate_k_monomials(h.alphabet(), degree, Tail::Finite, budget) {
        Ok(monomials) => monomials,
        Err(MonomialError::Budget(e)) => return Err(e),
        Err(other) => unreachable!("enumeration only fails on budgets: {other}"),
    };
    let mut seen: HashMap<Vec<bool>, (Word, Elem)> = HashMap::new();
    for w in words_up_to(h.alphabet(), length_bound) {
        let value = h.word(&w);
        let signature: Vec<bool> = monomials.iter().map(|m| m.contains_finite(&w)).collect();
        match seen.entry(signature) {
            Entry::Occupied(prev) => {
                if prev.get().1 != value {
                    return Ok(Some((prev.get().0.clone(), w)));
                }
            }
            Entry::Vacant(slot) => {
                slot.insert((w, value));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub degree: usize,
    pub length_bound: usize,
    pub violation: Option<(Word, Word)>,
}

impl fmt::Display for SaturationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            Some((u, v)) => write!(
                f,
                "violation: {u} and {v} lie in the same degree-{} monomials but map to \
                 different syntactic elements",
                self.degree
            ),
            None => write!(
                f,
                "no violation at degree {} up to length {}",
                self.degree, self.length_bound
            ),
        }
    }
}

/// Scans the finite words up to the length bound for a pair that the
/// degree-`degree` monomials cannot separate although the syntactic
/// homomorphism does. A violation is evidence that the finite-word
/// part of the language is not a union of degree-`degree` classes.
pub fn saturation_evidence(
    l: &RecognizedLanguage,
    degree: usize,
    length_bound: usize,
    budget: &Budget,
) -> Result<SaturationReport, BudgetError> {
    let quotient = syntactic_quotient(l);
    let violation = signature_violation(quotient.language.hom(), degree, length_bound, budget)?;
    Ok(SaturationReport {
        degree,
        length_bound,
        violation,
    })
}

pub struct BSigma2Result {
    pub answer: Answer,
    pub quotient: SyntacticQuotient,
    pub alphabetic: AlphabeticResult,
    /// Oracle outcome; absent when the topological condition already
    /// failed.
    pub oracle: Option<OracleOutcome>,
}

/// Decides definability by a Boolean combination of formulas with an
/// exists-forall quantifier prefix over the order, conditional on an
/// oracle for the finite-word half.
///
/// Both conditions are evaluated on the syntactic quotient: the
/// topological pair-agreement condition, and the oracle's verdict on
/// the quotient homomorphism. Yes requires both; a failing condition
/// gives no; an unknown oracle leaves the answer unknown.
pub fn decide_bsigma2(
    l: &RecognizedLanguage,
    oracle: &dyn DefinabilityOracle,
    budget: &Budget,
) -> Result<BSigma2Result, BudgetError> {
    let quotient = syntactic_quotient(l);
    let alphabetic = decide_alphabetic_boolean(&quotient.language);
    if !alphabetic.answer {
        return Ok(BSigma2Result {
            answer: Answer::No,
            quotient,
            alphabetic,
            oracle: None,
        });
    }
    let outcome = oracle.assess(quotient.language.hom(), budget)?;
    let answer = match outcome {
        OracleOutcome::Yes => Answer::Yes,
        OracleOutcome::No { .. } => Answer::No,
        OracleOutcome::Unknown => Answer::Unknown,
    };
    Ok(BSigma2Result {
        answer,
        quotient,
        alphabetic,
        oracle: Some(outcome),
    })
}

/// A printable, serializable verdict with names instead of element
/// indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub question: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<VerdictWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<Vec<VerdictBlock>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<VerdictChecks>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerdictWitness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair1: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair2: Option<[String; 2]>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictBlock {
    pub s: String,
    #[serde(rename = "C")]
    pub alphabet: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictChecks {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified_bound: Option<[usize; 2]>,
}

fn pair_names(m: &FiniteMonoid, (s, e): (Elem, Elem)) -> [String; 2] {
    [m.name(s).to_string(), m.name(e).to_string()]
}

impl Verdict {
    pub fn alphabetic(l: &RecognizedLanguage, result: &AlphabeticResult) -> Verdict {
        let m = l.monoid();
        Verdict {
            question: "alph-bool".to_string(),
            answer: if result.answer { "yes" } else { "no" }.to_string(),
            witness: result.witness.as_ref().map(|w| VerdictWitness {
                pair1: Some(pair_names(m, w.pair1)),
                pair2: Some(pair_names(m, w.pair2)),
                alphabet: Some(w.alphabet.letters()),
                alpha: Some(w.alpha.to_string()),
                beta: Some(w.beta.to_string()),
                ..VerdictWitness::default()
            }),
            representation: result.answer.then(|| {
                result
                    .blocks
                    .iter()
                    .map(|b| VerdictBlock {
                        s: m.name(b.value).to_string(),
                        alphabet: b.alphabet.letters(),
                    })
                    .collect()
            }),
            checks: None,
        }
    }

    pub fn cantor(result: &CantorResult) -> Verdict {
        let m = result.quotient.language.monoid();
        Verdict {
            question: "cantor-bool".to_string(),
            answer: if result.answer { "yes" } else { "no" }.to_string(),
            witness: result.witness.as_ref().map(|w| VerdictWitness {
                pair1: Some(pair_names(m, w.pair1)),
                pair2: Some(pair_names(m, w.pair2)),
                alpha: Some(w.alpha.to_string()),
                beta: Some(w.beta.to_string()),
                ..VerdictWitness::default()
            }),
            representation: None,
            checks: None,
        }
    }

    pub fn bsigma2(result: &BSigma2Result) -> Verdict {
        let inner = Verdict::alphabetic(&result.quotient.language, &result.alphabetic);
        let witness = match &result.oracle {
            None => inner.witness.map(|w| VerdictWitness {
                note: Some("the topological condition fails".to_string()),
                ..w
            }),
            Some(OracleOutcome::No { word1, word2 }) => Some(VerdictWitness {
                word1: Some(word1.to_string()),
                word2: Some(word2.to_string()),
                note: Some(
                    "oracle evidence, not proof: the words lie in the same bounded-degree \
                     monomials but map to different syntactic elements"
                        .to_string(),
                ),
                ..VerdictWitness::default()
            }),
            Some(_) => None,
        };
        Verdict {
            question: "bsigma2".to_string(),
            answer: result.answer.as_str().to_string(),
            witness,
            representation: inner
                .representation
                .filter(|_| result.answer == Answer::Yes),
            checks: None,
        }
    }

    pub fn answer(&self) -> Answer {
        match self.answer.as_str() {
            "yes" => Answer::Yes,
            "no" => Answer::No,
            _ => Answer::Unknown,
        }
    }

    pub fn with_verified_bound(mut self, bounds: (usize, usize)) -> Verdict {
        self.checks = Some(VerdictChecks {
            verified_bound: Some([bounds.0, bounds.1]),
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }

    pub fn from_json(text: &str) -> Result<Verdict, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "question: {}", self.question)?;
        write!(f, "answer: {}", self.answer.to_uppercase())?;
        if let Some(w) = &self.witness {
            if let (Some(p1), Some(p2)) = (&w.pair1, &w.pair2) {
                write!(
                    f,
                    "\nwitness: ({}, {}) accepted, ({}, {}) not",
                    p1[0], p1[1], p2[0], p2[1]
                )?;
            }
            if let Some(c) = &w.alphabet {
                write!(f, "\nC = [{c}]")?;
            }
            match (&w.alpha, &w.beta) {
                (Some(alpha), Some(beta)) => {
                    write!(f, "\nalpha = {alpha} (in L)")?;
                    write!(f, "\nbeta = {beta} (not in L)")?;
                }
                (Some(alpha), None) => write!(f, "\nalpha = {alpha}")?,
                (None, Some(beta)) => write!(f, "\nbeta = {beta}")?,
                (None, None) => {}
            }
            if let (Some(u), Some(v)) = (&w.word1, &w.word2) {
                write!(f, "\nwords: {u} and {v}")?;
            }
            if let Some(note) = &w.note {
                write!(f, "\nnote: {note}")?;
            }
        }
        if let Some(blocks) = &self.representation {
            for b in blocks {
                write!(f, "\nblock: ({}, [{}])", b.s, b.alphabet)?;
            }
        }
        if let Some(VerdictChecks {
            verified_bound: Some([u, v]),
        }) = &self.checks
        {
            write!(f, "\nverified bound: ({u}, {v})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::example_monoid;
    use crate::buchi::compile;

    fn up(s: &str) -> UpWord {
        s.parse().expect("up word")
    }

    fn set(s: &str) -> LetterSet {
        LetterSet::parse(s).expect("letter set")
    }

    fn language(expr: &str) -> RecognizedLanguage {
        compile(expr)
            .expect("compiles")
            .recognize(600)
            .expect("recognizes")
    }

    fn quotiented(expr: &str) -> RecognizedLanguage {
        syntactic_quotient(&language(expr)).language
    }

    fn names(l: &RecognizedLanguage, pair: (Elem, Elem)) -> (String, String) {
        let m = l.monoid();
        (m.name(pair.0).to_string(), m.name(pair.1).to_string())
    }

    #[test]
    fn the_example_fails_the_alphabetic_test_with_the_known_witness() {
        let l = example_monoid();
        let result = decide_alphabetic_boolean(&l);
        assert!(!result.answer);
        let w = result.witness.expect("a witness");
        assert_eq!(names(&l, w.pair1), ("aa".to_string(), "aa".to_string()));
        assert_eq!(names(&l, w.pair2), ("aa".to_string(), "ab".to_string()));
        assert_eq!(w.alphabet, set("ab"));
        assert_eq!(w.alpha, up("aa(aab)^w"));
        assert_eq!(w.beta, up("aa(ab)^w"));
        assert!(l.up_membership(&w.alpha));
        assert!(!l.up_membership(&w.beta));
    }

    #[test]
    fn the_full_language_is_alphabetic_with_all_alphabets_as_blocks() {
        let l = quotiented("[ab]^inf");
        let result = decide_alphabetic_boolean(&l);
        assert!(result.answer);
        let one = l.monoid().identity();
        let expected: Vec<Block> = ["", "a", "b", "ab"]
            .iter()
            .map(|c| Block {
                value: one,
                alphabet: set(c),
            })
            .collect();
        assert_eq!(result.blocks, expected);
        assert_eq!(
            verify_representation(&l, &result.blocks, (3, 3)).unwrap(),
            None
        );
    }

    #[test]
    fn the_example_blocks_fail_bounded_verification() {
        let l = example_monoid();
        let blocks = representation_blocks(&l, &alph_image(l.hom()));
        let aa = l.monoid().index_of("aa").unwrap();
        assert_eq!(
            blocks,
            [
                Block {
                    value: aa,
                    alphabet: set("a")
                },
                Block {
                    value: aa,
                    alphabet: set("ab")
                }
            ]
        );
        assert!(matches!(
            construct_representation(&l),
            Err(DecideError::PreconditionViolated)
        ));
        let counterexample = verify_representation(&l, &blocks, (4, 4)).unwrap();
        assert_eq!(counterexample, Some(up("a(ab)^w")));
    }

    #[test]
    fn the_eventually_b_language_verifies_at_small_bounds() {
        let l = quotiented("[ab]*a[b]^inf");
        let result = decide_alphabetic_boolean(&l);
        assert!(result.answer);
        let m = l.monoid();
        let spelled: Vec<(String, String)> = result
            .blocks
            .iter()
            .map(|b| (m.name(b.value).to_string(), b.alphabet.letters()))
            .collect();
        assert_eq!(
            spelled,
            [
                ("a".to_string(), String::new()),
                ("a".to_string(), "b".to_string())
            ]
        );
        assert_eq!(
            verify_representation(&l, &result.blocks, (4, 4)).unwrap(),
            None
        );
    }

    #[test]
    fn basic_set_membership_matches_the_definitions() {
        let l = example_monoid();
        let h = l.hom();
        let aa = l.monoid().index_of("aa").unwrap();
        assert!(up_membership_basic(
            h,
            &BasicSet::AnyTail { alphabet: set("") },
            &up("ab")
        ));
        assert!(!up_membership_basic(
            h,
            &BasicSet::AnyTail { alphabet: set("b") },
            &up("(ab)^w")
        ));
        assert!(up_membership_basic(
            h,
            &BasicSet::ClassTail {
                value: aa,
                alphabet: set("ab")
            },
            &up("aa(ab)^w")
        ));
        let block = BasicSet::Block {
            value: aa,
            alphabet: set(""),
        };
        assert!(up_membership_basic(h, &block, &up("aab")));
        assert!(!up_membership_basic(h, &block, &up("ab")));
        assert!(!up_membership_basic(h, &block, &up("(a)^w")));
    }

    #[test]
    fn cantor_rejects_languages_with_eventual_commitments() {
        let result = decide_cantor_boolean(&language("[ab]*a[b]^w"));
        assert!(!result.answer);
        let l = &result.quotient.language;
        let w = result.witness.expect("a witness");
        assert_eq!(names(l, w.pair1), ("a".to_string(), "b".to_string()));
        assert_eq!(names(l, w.pair2), ("a".to_string(), "1".to_string()));
        assert_eq!(w.alpha, up("a(b)^w"));
        assert_eq!(w.beta, up("a"));
        assert!(l.up_membership(&w.alpha));
        assert!(!l.up_membership(&w.beta));
    }

    #[test]
    fn cantor_accepts_open_languages() {
        assert!(decide_cantor_boolean(&language("[ab]*aa[ab]^inf")).answer);
        assert!(decide_cantor_boolean(&language("[ab]^inf")).answer);
    }

    #[test]
    fn cantor_rejects_the_example_and_its_finite_variant() {
        let result = decide_cantor_boolean(&example_monoid());
        assert!(!result.answer);
        let l = &result.quotient.language;
        let w = result.witness.expect("a witness");
        assert_eq!(names(l, w.pair1), ("aa".to_string(), "aa".to_string()));
        assert_eq!(names(l, w.pair2), ("aa".to_string(), "1".to_string()));
        assert_eq!(w.alpha, up("(a)^w"));
        assert_eq!(w.beta, up("aa"));
        assert!(!decide_cantor_boolean(&language("[ab]*aa[ab]*")).answer);
    }

    #[test]
    fn answers_agree_between_raw_and_syntactic_homomorphisms() {
        for expr in [
            "([ab]*aa[ab]*)^w",
            "[ab]*a[b]^w",
            "[ab]*a[b]^inf",
            "(aa)*|[a]^w",
        ] {
            let raw = language(expr);
            let quotient = syntactic_quotient(&raw).language;
            assert_eq!(
                decide_alphabetic_boolean(&raw).answer,
                decide_alphabetic_boolean(&quotient).answer,
                "on {expr:?}"
            );
        }
    }

    #[test]
    fn bsigma2_composes_the_topological_condition_with_the_oracle() {
        let budget = Budget::default();
        let example = example_monoid();
        let rejected = decide_bsigma2(&example, &AssumeYesOracle, &budget).unwrap();
        assert_eq!(rejected.answer, Answer::No);
        assert!(rejected.oracle.is_none());
        assert!(rejected.alphabetic.witness.is_some());

        let sigma2 = language("[ab]*a[b]^w");
        let accepted = decide_bsigma2(&sigma2, &AssumeYesOracle, &budget).unwrap();
        assert_eq!(accepted.answer, Answer::Yes);
        let open = decide_bsigma2(&sigma2, &UnknownOracle, &budget).unwrap();
        assert_eq!(open.answer, Answer::Unknown);
        let evidence = EvidenceOracle {
            degree: 1,
            length_bound: 6,
        };
        let unknown = decide_bsigma2(&sigma2, &evidence, &budget).unwrap();
        assert_eq!(unknown.answer, Answer::Unknown);
    }

    #[test]
    fn bsigma2_parity_language_is_refuted_by_evidence() {
        let budget = Budget::default();
        let parity = language("(aa)*|[a]^w");
        let evidence = EvidenceOracle {
            degree: 1,
            length_bound: 6,
        };
        let result = decide_bsigma2(&parity, &evidence, &budget).unwrap();
        assert!(result.alphabetic.answer);
        assert_eq!(result.answer, Answer::No);
        match result.oracle {
            Some(OracleOutcome::No { word1, word2 }) => {
                assert_eq!(word1.to_string(), "aa");
                assert_eq!(word2.to_string(), "aaa");
            }
            other => panic!("expected a refutation, got {other:?}"),
        }
    }

    #[test]
    fn saturation_evidence_finds_the_parity_violation() {
        let budget = Budget::default();
        let parity = language("(aa)*|[a]^w");
        let report = saturation_evidence(&parity, 1, 6, &budget).unwrap();
        let (u, v) = report.violation.as_ref().expect("a violation");
        assert_eq!(
            (u.to_string(), v.to_string()),
            ("aa".to_string(), "aaa".to_string())
        );
        assert!(report.to_string().contains("violation"));

        let trivial = saturation_evidence(&language("[a]^inf"), 1, 6, &budget).unwrap();
        assert_eq!(trivial.violation, None);
        assert!(trivial.to_string().contains("no violation"));

        assert!(saturation_evidence(&parity, 1, 17, &budget).is_err());
    }

    #[test]
    fn verdicts_round_trip_through_json() {
        let l = example_monoid();
        let verdict = Verdict::alphabetic(&l, &decide_alphabetic_boolean(&l));
        assert_eq!(verdict.answer(), Answer::No);
        let back = Verdict::from_json(&verdict.to_json()).unwrap();
        assert_eq!(back, verdict);

        let yes = Verdict::alphabetic(
            &quotiented("[ab]*a[b]^inf"),
            &decide_alphabetic_boolean(&quotiented("[ab]*a[b]^inf")),
        )
        .with_verified_bound((6, 6));
        assert_eq!(yes.answer(), Answer::Yes);
        let back = Verdict::from_json(&yes.to_json()).unwrap();
        assert_eq!(back, yes);
        assert!(yes.to_string().contains("verified bound: (6, 6)"));
    }
}
