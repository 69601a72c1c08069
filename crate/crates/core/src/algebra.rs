//! Finite monoids, homomorphisms from `Γ*`, linked pairs, recognition
//! of languages of finite and infinite words, alphabet-annotated
//! images, and the syntactic quotient with its compatible order.
//!
//! A language is recognized as a union of sets `[s][e]^w` over accepted
//! linked pairs `(s, e)` of a homomorphism into a finite monoid. A
//! finite word `u` belongs to the language exactly when the pair
//! `(h(u), 1)` is accepted: `[1]^w` contains the finite words.

use std::collections::{BTreeMap, BTreeSet};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Letter, LetterSet, UpWord, Word};
use crate::BudgetError;

/// Index of a monoid element.
pub type Elem = usize;

/// Errors for monoid construction, validation and serialization.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("invalid monoid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("malformed monoid file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A finite monoid given by its multiplication table, with display
/// names per element and an optional compatible partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    names: Vec<String>,
    table: Vec<Vec<Elem>>,
    identity: Elem,
    order: Option<Vec<(Elem, Elem)>>,
}

impl FiniteMonoid {
    /// Validates and builds a monoid: unique names, identity laws,
    /// associativity on all triples, and compatibility of the order
    /// with the multiplication if one is given. Order pairs are
    /// `(lesser, greater)` and are closed under transitivity here.
    pub fn from_table(
        names: Vec<String>,
        table: Vec<Vec<Elem>>,
        identity: Elem,
        order: Option<Vec<(Elem, Elem)>>,
    ) -> Result<FiniteMonoid, AlgebraError> {
        let n = names.len();
        let invalid = |msg: String| AlgebraError::Invalid(msg);
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || !seen.insert(name) {
                return Err(invalid(format!("duplicate or empty element name {name:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(invalid(format!("table is not {n}x{n}")));
        }
        if table.iter().flatten().any(|&e| e >= n) {
            return Err(invalid("table entry out of range".to_string()));
        }
        if identity >= n {
            return Err(invalid("identity out of range".to_string()));
        }
        for x in 0..n {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(invalid(format!("identity laws fail at {}", names[x])));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(invalid(format!(
                            "not associative at ({}, {}, {})",
                            names[x], names[y], names[z]
                        )));
                    }
                }
            }
        }
        let order = match order {
            None => None,
            Some(pairs) => {
                let mut le = vec![vec![false; n]; n];
                for (i, row) in le.iter_mut().enumerate() {
                    row[i] = true;
                }
                for &(a, b) in &pairs {
                    if a >= n || b >= n {
                        return Err(invalid("order pair out of range".to_string()));
                    }
                    le[a][b] = true;
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if le[i][k] && le[k][j] {
                                le[i][j] = true;
                            }
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        if le[i][j] && le[j][i] && i != j {
                            return Err(invalid(format!(
                                "order is not antisymmetric: {} and {}",
                                names[i], names[j]
                            )));
                        }
                    }
                }
                for s in 0..n {
                    for t in 0..n {
                        if !le[s][t] {
                            continue;
                        }
                        for s2 in 0..n {
                            for t2 in 0..n {
                                if le[s2][t2] && !le[table[s][s2]][table[t][t2]] {
                                    return Err(invalid(
                                        "order is not compatible with multiplication".to_string(),
                                    ));
                                }
                            }
                        }
                    }
                }
                let mut closed = Vec::new();
                for (i, row) in le.iter().enumerate() {
                    for (j, &b) in row.iter().enumerate() {
                        if b && i != j {
                            closed.push((i, j));
                        }
                    }
                }
                Some(closed)
            }
        };
        Ok(FiniteMonoid {
            names,
            table,
            identity,
            order,
        })
    }

    fn from_parts(names: Vec<String>, table: Vec<Vec<Elem>>, identity: Elem) -> FiniteMonoid {
        FiniteMonoid {
            names,
            table,
            identity,
            order: None,
        }
    }

    /// The one-element monoid.
    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid::from_parts(vec!["1".to_string()], vec![vec![0]], 0)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    /// Pairs `(lesser, greater)` of the compatible partial order, if
    /// one is attached. The diagonal is implicit.
    pub fn order(&self) -> Option<&[(Elem, Elem)]> {
        self.order.as_deref()
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x][y]
    }

    pub fn product(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn is_idempotent(&self, x: Elem) -> bool {
        self.mul(x, x) == x
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        (0..self.size())
            .filter(|&x| self.is_idempotent(x))
            .collect()
    }

    /// The unique idempotent among the powers of `x`.
    pub fn idempotent_power(&self, x: Elem) -> Elem {
        let mut m = x;
        for _ in 0..=2 * self.size() {
            if self.is_idempotent(m) {
                return m;
            }
            m = self.mul(m, x);
        }
        unreachable!("powers of an element of a finite monoid reach an idempotent")
    }

    /// All pairs `(s, e)` with `e` idempotent and `s·e = s`, sorted by
    /// element index.
    pub fn linked_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut pairs = Vec::new();
        for s in 0..self.size() {
            for e in 0..self.size() {
                if self.is_idempotent(e) && self.mul(s, e) == s {
                    pairs.push((s, e));
                }
            }
        }
        pairs
    }

    /// The right ideal `x·M`.
    pub fn right_ideal(&self, x: Elem) -> BTreeSet<Elem> {
        (0..self.size()).map(|m| self.mul(x, m)).collect()
    }

    /// Green's R-relation: `s R t` iff `s·M = t·M`.
    pub fn green_r_equivalent(&self, s: Elem, t: Elem) -> bool {
        self.right_ideal(s) == self.right_ideal(t)
    }
}

/// A homomorphism `Γ* -> M`, given by the images of the letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    monoid: FiniteMonoid,
    images: BTreeMap<Letter, Elem>,
}

impl Hom {
    pub fn new(monoid: FiniteMonoid, images: BTreeMap<Letter, Elem>) -> Result<Hom, AlgebraError> {
        if let Some((&c, &img)) = images.iter().find(|&(_, &img)| img >= monoid.size()) {
            return Err(AlgebraError::Invalid(format!(
                "image {img} of letter {c} out of range"
            )));
        }
        Ok(Hom { monoid, images })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn alphabet(&self) -> LetterSet {
        let mut set = LetterSet::EMPTY;
        for &c in self.images.keys() {
            set.insert(c);
        }
        set
    }

    pub fn letter(&self, c: Letter) -> Elem {
        *self.images.get(&c).expect("letter in the domain alphabet")
    }

    pub fn word(&self, w: &Word) -> Elem {
        self.monoid
            .product(w.letters().iter().map(|&c| self.letter(c)))
    }

    /// The shortlex-least word mapping to `m`, if `m` is in the image.
    pub fn shortest_preimage(&self, m: Elem) -> Option<Word> {
        let mut found = vec![None; self.monoid.size()];
        found[self.monoid.identity()] = Some(Word::new());
        let mut queue = VecDeque::from([self.monoid.identity()]);
        while let Some(x) = queue.pop_front() {
            if x == m {
                return found[x].clone();
            }
            let word = found[x].clone().expect("visited");
            for (&c, &img) in &self.images {
                let y = self.monoid.mul(x, img);
                if found[y].is_none() {
                    let mut w = word.clone();
                    w.push(c);
                    found[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// The submonoid `h(C*)`.
    pub fn submonoid_image(&self, c: LetterSet) -> BTreeSet<Elem> {
        let mut set = BTreeSet::from([self.monoid.identity()]);
        let mut queue = VecDeque::from([self.monoid.identity()]);
        while let Some(x) = queue.pop_front() {
            for ch in c.iter() {
                let y = self.monoid.mul(x, self.letter(ch));
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// The coset `s·h(C*)`.
    pub fn coset(&self, s: Elem, c: LetterSet) -> BTreeSet<Elem> {
        self.submonoid_image(c)
            .into_iter()
            .map(|m| self.monoid.mul(s, m))
            .collect()
    }
}

/// A monoid generated from abstract values: the closure of the
/// generators under the product, with the generating homomorphism.
/// Elements are discovered breadth-first from the identity with
/// generators in alphabet order, so they are named by their
/// shortlex-least preimages.
pub struct Generated<T> {
    pub hom: Hom,
    pub values: Vec<T>,
}

/// Closes `generators` under an associative product, up to `cap`
/// elements.
pub fn generate<T: Clone + Eq + Hash>(
    identity: T,
    generators: &[(Letter, T)],
    product: impl Fn(&T, &T) -> T,
    cap: usize,
) -> Result<Generated<T>, AlgebraError> {
    let mut values = vec![identity.clone()];
    let mut index: HashMap<T, Elem> = HashMap::from([(identity, 0)]);
    let mut words = vec![Word::new()];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for (c, g) in generators {
            let value = product(&values[i], g);
            if !index.contains_key(&value) {
                if values.len() == cap {
                    return Err(BudgetError {
                        what: "monoid closure size",
                        requested: cap + 1,
                        limit: cap,
                    }
                    .into());
                }
                let j = values.len();
                index.insert(value.clone(), j);
                values.push(value);
                let mut w = words[i].clone();
                w.push(*c);
                words.push(w);
                queue.push_back(j);
            }
        }
    }
    let n = values.len();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = index[&product(&values[i], &values[j])];
        }
    }
    let names = words.iter().map(|w| w.to_string()).collect();
    let monoid = FiniteMonoid::from_parts(names, table, 0);
    let images = generators.iter().map(|(c, g)| (*c, index[g])).collect();
    let hom = Hom::new(monoid, images)?;
    Ok(Generated { hom, values })
}

/// Restricts a homomorphism to the submonoid generated by its letter
/// images, renaming elements by shortlex preimages. Returns the
/// restricted homomorphism and the map from old to new indices (`None`
/// for elements outside the generated submonoid).
pub fn restrict_to_generated(h: &Hom) -> (Hom, Vec<Option<Elem>>) {
    let m = h.monoid();
    let generators: Vec<(Letter, Elem)> = h.alphabet().iter().map(|c| (c, h.letter(c))).collect();
    let generated =
        generate(m.identity(), &generators, |&a, &b| m.mul(a, b), m.size()).expect("within cap");
    let mut old_to_new = vec![None; m.size()];
    for (new, &old) in generated.values.iter().enumerate() {
        old_to_new[old] = Some(new);
    }
    (generated.hom, old_to_new)
}

/// The image of the annotated homomorphism `w -> (h(w), alph(w))`,
/// with the shortlex-least witness word per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphImage {
    entries: BTreeMap<(Elem, LetterSet), Word>,
}

impl AlphImage {
    /// Whether some word with alphabet exactly `set` maps to `m`.
    pub fn contains(&self, m: Elem, set: LetterSet) -> bool {
        self.entries.contains_key(&(m, set))
    }

    /// The shortlex-least word with alphabet exactly `set` mapping to
    /// `m`.
    pub fn witness(&self, m: Elem, set: LetterSet) -> Option<&Word> {
        self.entries.get(&(m, set))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, LetterSet, &Word)> {
        self.entries.iter().map(|(&(m, set), w)| (m, set, w))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Closes `{(h(a), {a})} ∪ {(1, ∅)}` under the componentwise product:
/// the pair `(m, A)` is present iff some word with alphabet exactly
/// `A` maps to `m`.
pub fn alph_image(h: &Hom) -> AlphImage {
    let mut entries = BTreeMap::from([((h.monoid().identity(), LetterSet::EMPTY), Word::new())]);
    let mut queue = VecDeque::from([(h.monoid().identity(), LetterSet::EMPTY)]);
    while let Some((m, set)) = queue.pop_front() {
        let word = entries[&(m, set)].clone();
        for c in h.alphabet().iter() {
            let next = (
                h.monoid().mul(m, h.letter(c)),
                set.union(LetterSet::singleton(c)),
            );
            if let std::collections::btree_map::Entry::Vacant(e) = entries.entry(next) {
                let mut w = word.clone();
                w.push(c);
                e.insert(w);
                queue.push_back(next);
            }
        }
    }
    AlphImage { entries }
}

/// A language of finite and infinite words, as a homomorphism plus the
/// set of accepted linked pairs: the language `⋃ [s][e]^w` over the
/// accepted pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedLanguage {
    hom: Hom,
    accepted: BTreeSet<(Elem, Elem)>,
}

impl RecognizedLanguage {
    pub fn new(
        hom: Hom,
        accepted: BTreeSet<(Elem, Elem)>,
    ) -> Result<RecognizedLanguage, AlgebraError> {
        let m = hom.monoid();
        for &(s, e) in &accepted {
            if s >= m.size() || e >= m.size() {
                return Err(AlgebraError::Invalid(format!(
                    "accepted pair ({s}, {e}) out of range"
                )));
            }
            if !m.is_idempotent(e) || m.mul(s, e) != s {
                return Err(AlgebraError::Invalid(format!(
                    "accepted pair ({}, {}) is not a linked pair",
                    m.name(s),
                    m.name(e)
                )));
            }
        }
        Ok(RecognizedLanguage { hom, accepted })
    }

    pub fn hom(&self) -> &Hom {
        &self.hom
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        self.hom.monoid()
    }

    pub fn accepted(&self) -> &BTreeSet<(Elem, Elem)> {
        &self.accepted
    }

    pub fn is_accepted(&self, s: Elem, e: Elem) -> bool {
        self.accepted.contains(&(s, e))
    }

    /// Membership of a finite or ultimately periodic word. A finite
    /// word `u` tests the pair `(h(u), 1)`; an infinite word `u(v)^w`
    /// tests `(h(u)·e, e)` with `e` the idempotent power of `h(v)`.
    pub fn up_membership(&self, alpha: &UpWord) -> bool {
        let m = self.hom.monoid();
        match alpha.as_finite() {
            Some(u) => self.is_accepted(self.hom.word(u), m.identity()),
            None => {
                let e = m.idempotent_power(self.hom.word(alpha.cycle()));
                let s = m.mul(self.hom.word(alpha.prefix()), e);
                self.is_accepted(s, e)
            }
        }
    }

    /// The complement language over the same homomorphism.
    pub fn complement(&self) -> RecognizedLanguage {
        let all: BTreeSet<(Elem, Elem)> = self.monoid().linked_pairs().into_iter().collect();
        let accepted = all.difference(&self.accepted).copied().collect();
        RecognizedLanguage {
            hom: self.hom.clone(),
            accepted,
        }
    }
}

/// The componentwise product of two homomorphisms over the same
/// alphabet, restricted to the generated submonoid. Boolean
/// combinations of languages recognized by `g` and `h` are recognized
/// by it.
pub fn direct_product(
    g: &Hom,
    h: &Hom,
    cap: usize,
) -> Result<Generated<(Elem, Elem)>, AlgebraError> {
    if g.alphabet() != h.alphabet() {
        return Err(AlgebraError::Invalid(format!(
            "alphabets differ: {} vs {}",
            g.alphabet(),
            h.alphabet()
        )));
    }
    let generators: Vec<(Letter, (Elem, Elem))> = g
        .alphabet()
        .iter()
        .map(|c| (c, (g.letter(c), h.letter(c))))
        .collect();
    generate(
        (g.monoid().identity(), h.monoid().identity()),
        &generators,
        |a, b| (g.monoid().mul(a.0, b.0), h.monoid().mul(a.1, b.1)),
        cap,
    )
}

fn combine(
    l: &RecognizedLanguage,
    k: &RecognizedLanguage,
    cap: usize,
    op: impl Fn(bool, bool) -> bool,
) -> Result<RecognizedLanguage, AlgebraError> {
    let product = direct_product(l.hom(), k.hom(), cap)?;
    let mut accepted = BTreeSet::new();
    for (s, e) in product.hom.monoid().linked_pairs() {
        let (s1, s2) = product.values[s];
        let (e1, e2) = product.values[e];
        if op(l.is_accepted(s1, e1), k.is_accepted(s2, e2)) {
            accepted.insert((s, e));
        }
    }
    RecognizedLanguage::new(product.hom, accepted)
}

/// The union of two recognized languages, over the direct product.
pub fn union(
    l: &RecognizedLanguage,
    k: &RecognizedLanguage,
    cap: usize,
) -> Result<RecognizedLanguage, AlgebraError> {
    combine(l, k, cap, |a, b| a || b)
}

/// The intersection of two recognized languages, over the direct
/// product.
pub fn intersection(
    l: &RecognizedLanguage,
    k: &RecognizedLanguage,
    cap: usize,
) -> Result<RecognizedLanguage, AlgebraError> {
    combine(l, k, cap, |a, b| a && b)
}

/// The syntactic quotient of a recognized language: the coarsest
/// congruence on the (generated part of the) recognizing monoid whose
/// classes still recognize the language.
pub struct SyntacticQuotient {
    /// The language over the syntactic homomorphism. The quotient
    /// monoid carries the syntactic order.
    pub language: RecognizedLanguage,
    /// Original element index to quotient class, `None` outside the
    /// generated submonoid.
    pub class_of: Vec<Option<Elem>>,
}

/// Computes the syntactic quotient. Two elements `s, t` are identified
/// when for all contexts `x, y` over the monoid and every idempotent
/// `e`: the pairs `(x·s·y·e, e)` and `(x·t·y·e, e)` agree on
/// acceptance, and the pairs `(x·f, f)` with `f` the idempotent power
/// of `s·y` resp. `t·y` agree on acceptance. The first family covers
/// contexts `x u y z^w` (with `z = 1` the finite words), the second
/// the contexts `x (u y)^w`.
pub fn syntactic_quotient(l: &RecognizedLanguage) -> SyntacticQuotient {
    let (hom, old_to_new) = restrict_to_generated(l.hom());
    let m = hom.monoid().clone();
    let n = m.size();
    let accepted: BTreeSet<(Elem, Elem)> = l
        .accepted()
        .iter()
        .filter_map(|&(s, e)| Some((old_to_new[s]?, old_to_new[e]?)))
        .collect();

    let idempotents = m.idempotents();
    assert!(
        idempotents.len() <= 128,
        "at most 128 idempotents supported"
    );
    let idem_power: Vec<Elem> = (0..n).map(|x| m.idempotent_power(x)).collect();
    // fsig[x] bit i: the pair (x·e_i, e_i) is accepted.
    let fsig: Vec<u128> = (0..n)
        .map(|x| {
            idempotents
                .iter()
                .enumerate()
                .filter(|&(_, &e)| accepted.contains(&(m.mul(x, e), e)))
                .map(|(i, _)| 1u128 << i)
                .sum()
        })
        .collect();
    // wbit[x][y]: the pair (x·f, f) with f the idempotent power of y
    // is accepted.
    let wbit: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| accepted.contains(&(m.mul(x, idem_power[y]), idem_power[y])))
                .collect()
        })
        .collect();

    // Initial partition by context-free behavior, then the coarsest
    // refinement that is a congruence (stable under one-sided products
    // with the letter images).
    let mut class: Vec<usize> = {
        let mut key_to_class: HashMap<(u128, Vec<bool>), usize> = HashMap::new();
        (0..n)
            .map(|x| {
                let key = (fsig[x], (0..n).map(|ctx| wbit[ctx][x]).collect());
                let next = key_to_class.len();
                *key_to_class.entry(key).or_insert(next)
            })
            .collect()
    };
    let letter_images: Vec<Elem> = hom.alphabet().iter().map(|c| hom.letter(c)).collect();
    loop {
        let mut key_to_class: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(n);
        for x in 0..n {
            let mut key = vec![class[x]];
            for &g in &letter_images {
                key.push(class[m.mul(x, g)]);
                key.push(class[m.mul(g, x)]);
            }
            let fresh = key_to_class.len();
            next.push(*key_to_class.entry(key).or_insert(fresh));
        }
        let stable = key_to_class.len() == class.iter().collect::<HashSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }

    // Canonical class order: breadth-first from the identity class by
    // right products with the letters, i.e. shortlex preimage names.
    let class_count = class.iter().collect::<HashSet<_>>().len();
    let mut rep = vec![usize::MAX; class_count];
    let mut canon = vec![usize::MAX; class_count];
    let mut names: Vec<String> = Vec::with_capacity(class_count);
    let mut rep_words: Vec<Word> = Vec::with_capacity(class_count);
    let mut queue = VecDeque::new();
    {
        let c0 = class[m.identity()];
        canon[c0] = 0;
        rep[0] = m.identity();
        names.push(Word::new().to_string());
        rep_words.push(Word::new());
        queue.push_back(0);
    }
    while let Some(q) = queue.pop_front() {
        for c in hom.alphabet().iter() {
            let target = class[m.mul(rep[q], hom.letter(c))];
            if canon[target] == usize::MAX {
                let fresh = names.len();
                canon[target] = fresh;
                rep[fresh] = m.mul(rep[q], hom.letter(c));
                let mut w = rep_words[q].clone();
                w.push(c);
                names.push(w.to_string());
                rep_words.push(w);
                queue.push_back(fresh);
            }
        }
    }
    assert_eq!(names.len(), class_count, "letters generate every class");
    let qclass: Vec<Elem> = (0..n).map(|x| canon[class[x]]).collect();

    let mut table = vec![vec![0; class_count]; class_count];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = qclass[m.mul(rep[i], rep[j])];
        }
    }
    for x in 0..n {
        for y in 0..n {
            assert_eq!(
                qclass[m.mul(x, y)],
                table[qclass[x]][qclass[y]],
                "partition is a congruence"
            );
        }
    }

    let q_accepted: BTreeSet<(Elem, Elem)> = accepted
        .iter()
        .map(|&(s, e)| (qclass[s], qclass[e]))
        .collect();
    for (s, e) in m.linked_pairs() {
        assert_eq!(
            accepted.contains(&(s, e)),
            q_accepted.contains(&(qclass[s], qclass[e])),
            "acceptance is constant on classes"
        );
    }

    let quotient = FiniteMonoid::from_parts(names, table, 0);
    let order = syntactic_order(&quotient, &q_accepted);
    let quotient = FiniteMonoid {
        order: Some(order),
        ..quotient
    };
    let images: BTreeMap<Letter, Elem> = hom
        .alphabet()
        .iter()
        .map(|c| (c, qclass[hom.letter(c)]))
        .collect();
    let q_hom = Hom::new(quotient, images).expect("images in range");
    let language = RecognizedLanguage::new(q_hom, q_accepted).expect("projected pairs are linked");

    let class_of = old_to_new.iter().map(|o| o.map(|x| qclass[x])).collect();
    SyntacticQuotient { language, class_of }
}

/// The syntactic order on the quotient: `s ⪯ t` when every context
/// that takes `s` into the language also takes `t` into it. Pairs are
/// `(lesser, greater)`, diagonal omitted.
fn syntactic_order(m: &FiniteMonoid, accepted: &BTreeSet<(Elem, Elem)>) -> Vec<(Elem, Elem)> {
    let n = m.size();
    let idempotents = m.idempotents();
    let idem_power: Vec<Elem> = (0..n).map(|x| m.idempotent_power(x)).collect();
    let fsig: Vec<u128> = (0..n)
        .map(|x| {
            idempotents
                .iter()
                .enumerate()
                .filter(|&(_, &e)| accepted.contains(&(m.mul(x, e), e)))
                .map(|(i, _)| 1u128 << i)
                .sum()
        })
        .collect();
    let wbit: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| accepted.contains(&(m.mul(x, idem_power[y]), idem_power[y])))
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for s in 0..n {
        'next: for t in 0..n {
            if s == t {
                continue;
            }
            for (x, row) in wbit.iter().enumerate() {
                for y in 0..n {
                    let (cs, ct) = (m.mul(m.mul(x, s), y), m.mul(m.mul(x, t), y));
                    if fsig[cs] & !fsig[ct] != 0 {
                        continue 'next;
                    }
                    if row[m.mul(s, y)] && !row[m.mul(t, y)] {
                        continue 'next;
                    }
                }
            }
            pairs.push((s, t));
        }
    }
    pairs
}

#[derive(Serialize, Deserialize)]
struct LanguageFile {
    elements: Vec<String>,
    identity: String,
    table: Vec<Vec<String>>,
    generators: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accepted: Option<Vec<(String, String)>>,
}

/// Serializes a recognized language: element names, identity, table,
/// generator images, optional order, and the accepted pairs.
pub fn language_to_json(l: &RecognizedLanguage) -> String {
    let m = l.monoid();
    let name = |x: Elem| m.name(x).to_string();
    let file = LanguageFile {
        elements: m.names().to_vec(),
        identity: name(m.identity()),
        table: m
            .table
            .iter()
            .map(|row| row.iter().map(|&x| name(x)).collect())
            .collect(),
        generators: l
            .hom()
            .alphabet()
            .iter()
            .map(|c| (c.to_string(), name(l.hom().letter(c))))
            .collect(),
        order: m
            .order()
            .map(|pairs| pairs.iter().map(|&(a, b)| (name(a), name(b))).collect()),
        accepted: Some(
            l.accepted()
                .iter()
                .map(|&(s, e)| (name(s), name(e)))
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// Parses a recognized language from its JSON form, validating the
/// monoid axioms, the order, and the accepted pairs.
pub fn language_from_json(text: &str) -> Result<RecognizedLanguage, AlgebraError> {
    let file: LanguageFile = serde_json::from_str(text)?;
    let index: HashMap<&str, Elem> = file
        .elements
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let resolve = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::Invalid(format!("unknown element {name:?}")))
    };
    let mut table = Vec::with_capacity(file.table.len());
    for row in &file.table {
        table.push(
            row.iter()
                .map(|n| resolve(n))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let identity = resolve(&file.identity)?;
    let order = match &file.order {
        None => None,
        Some(pairs) => Some(
            pairs
                .iter()
                .map(|(a, b)| Ok((resolve(a)?, resolve(b)?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?,
        ),
    };
    let monoid = FiniteMonoid::from_table(file.elements.clone(), table, identity, order)?;
    let mut images = BTreeMap::new();
    for (letter, name) in &file.generators {
        let mut chars = letter.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => {
                images.insert(c, resolve(name)?);
            }
            _ => {
                return Err(AlgebraError::Invalid(format!(
                    "bad generator letter {letter:?}"
                )))
            }
        }
    }
    let hom = Hom::new(monoid, images)?;
    let accepted = file
        .accepted
        .as_ref()
        .ok_or_else(|| AlgebraError::Invalid("missing accepted pairs".to_string()))?
        .iter()
        .map(|(s, e)| Ok((resolve(s)?, resolve(e)?)))
        .collect::<Result<BTreeSet<_>, AlgebraError>>()?;
    RecognizedLanguage::new(hom, accepted)
}

impl fmt::Display for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.names.iter().map(|n| n.len()).max().unwrap_or(1);
        write!(f, "{:width$} |", "")?;
        for name in &self.names {
            write!(f, " {name:width$}")?;
        }
        writeln!(f)?;
        let dashes = "-".repeat(width);
        write!(f, "{dashes} |")?;
        for _ in &self.names {
            write!(f, " {dashes}")?;
        }
        for (i, row) in self.table.iter().enumerate() {
            writeln!(f)?;
            write!(f, "{:width$} |", self.names[i])?;
            for &x in row {
                write!(f, " {:width$}", self.names[x])?;
            }
        }
        Ok(())
    }
}
