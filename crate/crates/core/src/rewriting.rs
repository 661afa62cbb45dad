//! Noncommutative Gröbner bases for two-sided ideals of path algebras.
//!
//! Central variables are expanded into one degree-0 loop per vertex. The
//! alphabet ranks arrows (in declaration order) below those loops, which are
//! ranked by variable and then vertex; words are compared degree-
//! lexicographically. Commutation rules `x·g → g·x'` and `x_j·x_i → x_i·x_j`
//! (for `x_j` ranked above `x_i`) are seeded, so normal words are an arrow path
//! followed by a sorted run of central loops at its end vertex.
//!
//! Completion resolves overlaps in increasing order of overlap length and
//! stops at a length bound. Afterwards every overlap of the final system is
//! checked regardless of length; if all of them resolve the system is
//! confluent and normal forms are exact for inputs of any length.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Field, Scalar};
use crate::path_algebra::{AlgebraElement, Monomial, Path, Quiver};

pub type Letter = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rewriting needs a field, got {0}")]
    NotAField(Field),
    #[error("generator lives in a different quiver or field")]
    Mismatch,
    #[error("input word of length {len} exceeds truncation bound {bound} of a system not known to be confluent")]
    LengthOverflow { len: usize, bound: usize },
    #[error("rewrite system is incomplete below its bound")]
    Incomplete,
}

/// A word in the expanded alphabet, starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub start: u32,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.start.cmp(&other.start))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub type Poly = BTreeMap<Word, Scalar>;

/// Letter bookkeeping for one quiver.
#[derive(Clone, Debug)]
pub struct Alphabet {
    quiver: Arc<Quiver>,
    src: Vec<u32>,
    dst: Vec<u32>,
    n_arrows: u32,
    n_vertices: u32,
}

impl Alphabet {
    pub fn new(quiver: &Arc<Quiver>) -> Self {
        let n_arrows = quiver.arrows().len() as u32;
        let n_vertices = quiver.num_vertices() as u32;
        let mut src: Vec<u32> = quiver.arrows().iter().map(|a| a.src as u32).collect();
        let mut dst: Vec<u32> = quiver.arrows().iter().map(|a| a.dst as u32).collect();
        for _ in quiver.central_vars() {
            for v in 0..n_vertices {
                src.push(v);
                dst.push(v);
            }
        }
        Alphabet {
            quiver: quiver.clone(),
            src,
            dst,
            n_arrows,
            n_vertices,
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn is_empty(&self) -> bool {
        self.src.is_empty()
    }

    pub fn central_letter(&self, var: usize, vertex: usize) -> Letter {
        self.n_arrows + var as u32 * self.n_vertices + vertex as u32
    }

    pub fn is_central(&self, l: Letter) -> bool {
        l >= self.n_arrows
    }

    /// `(variable, vertex)` of a central letter.
    pub fn central_parts(&self, l: Letter) -> (usize, usize) {
        let r = l - self.n_arrows;
        ((r / self.n_vertices) as usize, (r % self.n_vertices) as usize)
    }

    pub fn src(&self, l: Letter) -> u32 {
        self.src[l as usize]
    }

    pub fn dst(&self, l: Letter) -> u32 {
        self.dst[l as usize]
    }

    pub fn end(&self, w: &Word) -> u32 {
        w.letters.last().map_or(w.start, |&l| self.dst(l))
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if self.is_central(l) {
            let (c, v) = self.central_parts(l);
            format!("{}@{}", self.quiver.central_vars()[c], self.quiver.vertices()[v])
        } else {
            self.quiver.arrow(l as usize).name.clone()
        }
    }

    pub fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            self.quiver.idempotent_name(w.start as usize)
        } else {
            w.letters
                .iter()
                .map(|&l| self.letter_name(l))
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    pub fn poly_string(&self, p: &Poly) -> String {
        if p.is_empty() {
            return "0".into();
        }
        p.iter()
            .rev()
            .map(|(w, c)| format!("{}*{}", c, self.word_string(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn term_to_word(&self, mono: &Monomial, path: &Path) -> Word {
        let mut letters: Vec<Letter> = path.arrows.iter().map(|&a| a as Letter).collect();
        for (c, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                letters.push(self.central_letter(c, path.end));
            }
        }
        Word {
            start: path.start as u32,
            letters,
        }
    }

    /// Interprets a word as a term; central letters commute out to the end.
    pub fn word_to_term(&self, w: &Word) -> (Monomial, Path) {
        let mut mono = Monomial::one(self.quiver.central_vars().len());
        let mut arrows = Vec::new();
        for &l in &w.letters {
            if self.is_central(l) {
                mono.0[self.central_parts(l).0] += 1;
            } else {
                arrows.push(l as usize);
            }
        }
        let path = if arrows.is_empty() {
            Path::trivial(w.start as usize)
        } else {
            Path::from_arrows(&self.quiver, &arrows).expect("composable word")
        };
        (mono, path)
    }

    pub fn element_to_poly(&self, u: &AlgebraElement) -> Poly {
        let mut p = Poly::new();
        for ((m, path), c) in u.terms() {
            add_to(&mut p, self.term_to_word(m, path), c.clone());
        }
        p
    }

    pub fn poly_to_element(&self, p: &Poly, field: Field) -> AlgebraElement {
        AlgebraElement::from_terms(
            &self.quiver,
            field,
            p.iter().map(|(w, c)| (self.word_to_term(w), c.clone())),
        )
    }

    pub fn word_element(&self, w: &Word, field: Field) -> AlgebraElement {
        let (m, p) = self.word_to_term(w);
        AlgebraElement::term(&self.quiver, field, field.one(), m, p)
    }
}

fn add_to(p: &mut Poly, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&w) {
        Some(x) => {
            *x = &*x + &c;
            if x.is_zero() {
                p.remove(&w);
            }
        }
        None => {
            p.insert(w, c);
        }
    }
}

fn splice(w: &Word, pos: usize, len: usize, mid: &Word) -> Word {
    let mut letters = Vec::with_capacity(w.len() - len + mid.len());
    letters.extend_from_slice(&w.letters[..pos]);
    letters.extend_from_slice(&mid.letters);
    letters.extend_from_slice(&w.letters[pos + len..]);
    Word {
        start: w.start,
        letters,
    }
}

fn mul_words(left: &[Letter], p: &Poly, right: &[Letter]) -> Poly {
    let mut out = Poly::new();
    for (w, c) in p {
        let mut letters = left.to_vec();
        letters.extend_from_slice(&w.letters);
        letters.extend_from_slice(right);
        out.insert(
            Word {
                start: w.start,
                letters,
            },
            c.clone(),
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleOrigin {
    Commutation,
    Relation,
}

/// `lhs ≡ rhs` with `rhs` strictly smaller than `lhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Poly,
    pub origin: RuleOrigin,
}

#[derive(Clone, Debug, Default)]
struct RuleIndex {
    by_lhs: HashMap<Vec<Letter>, usize>,
    lengths: BTreeSet<usize>,
    killed: BTreeSet<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    len: usize,
    word: Vec<Letter>,
    i: usize,
    j: usize,
    overlap: usize,
}

/// Reduced, possibly truncated, Gröbner basis of a two-sided ideal.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    field: Field,
    rules: Vec<Rule>,
    index: RuleIndex,
    bound: usize,
    complete_below_bound: bool,
    confluent: bool,
}

/// Result of enumerating irreducible words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientVerdict {
    Finite(Vec<Word>),
    /// Irreducible words of every length up to the bound exist, or the system
    /// is not known to be confluent.
    InconclusiveAtBound { found: usize, longest: usize },
}

pub const DEFAULT_MAX_RULES: usize = 20_000;

struct Completion {
    alphabet: Alphabet,
    field: Field,
    rules: Vec<Option<Rule>>,
    index: RuleIndex,
    pairs: BTreeSet<Pair>,
}

impl Completion {
    fn live(&self) -> impl Iterator<Item = (usize, &Rule)> {
        self.rules
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    fn find_match(&self, w: &Word) -> Option<(usize, usize)> {
        find_match(&self.alphabet, &self.index, w)
    }

    fn reduce(&self, p: Poly) -> Poly {
        reduce_with(&self.alphabet, &self.index, p, |i| {
            self.rules[i].as_ref().expect("indexed rule is live")
        })
    }

    fn unindex(&mut self, id: usize) {
        if let Some(r) = self.rules[id].take() {
            if r.lhs.is_empty() {
                self.index.killed.remove(&r.lhs.start);
            } else {
                self.index.by_lhs.remove(&r.lhs.letters);
            }
            let n = r.lhs.len();
            if !self.live().any(|(_, x)| x.lhs.len() == n && !x.lhs.is_empty()) {
                self.index.lengths.remove(&n);
            }
        }
    }

    fn add_relation(&mut self, p: Poly, origin: RuleOrigin, max_rules: usize) -> bool {
        let mut queue = vec![p];
        while let Some(p) = queue.pop() {
            let mut p = self.reduce(p);
            let Some((lead, c)) = p.pop_last() else {
                continue;
            };
            let inv = c.inv().expect("field coefficient");
            // lead·c + p = 0  ⇒  lead = -p/c
            let rhs: Poly = p.into_iter().map(|(w, x)| (w, -&(&x * &inv))).collect();
            // Interreduce: rules whose lhs contains the new lead are retired.
            let mut retired = Vec::new();
            for (id, r) in self.live() {
                if contains(&self.alphabet, &r.lhs, &lead) {
                    retired.push(id);
                }
            }
            for id in retired {
                let r = self.rules[id].clone().expect("live");
                self.unindex(id);
                let mut back = r.rhs.clone();
                add_to(&mut back, r.lhs.clone(), -&self.field.one());
                queue.push(back);
            }
            let id = self.rules.len();
            if lead.is_empty() {
                self.index.killed.insert(lead.start);
            } else {
                self.index.by_lhs.insert(lead.letters.clone(), id);
                self.index.lengths.insert(lead.len());
            }
            self.rules.push(Some(Rule {
                lhs: lead.clone(),
                rhs,
                origin,
            }));
            // Keep right-hand sides reduced.
            let ids: Vec<usize> = self.live().map(|(i, _)| i).collect();
            for i in ids {
                let rhs = self.rules[i].as_ref().expect("live").rhs.clone();
                if rhs.keys().any(|w| self.find_match(w).is_some()) {
                    let reduced = self.reduce(rhs);
                    self.rules[i].as_mut().expect("live").rhs = reduced;
                }
            }
            if !lead.is_empty() {
                let others: Vec<(usize, Vec<Letter>)> = self
                    .live()
                    .filter(|(_, r)| !r.lhs.is_empty())
                    .map(|(i, r)| (i, r.lhs.letters.clone()))
                    .collect();
                for (j, other) in others {
                    for (a, la, b, lb) in [(id, &lead.letters, j, &other), (j, &other, id, &lead.letters)] {
                        for pair in overlaps(a, la, b, lb) {
                            self.pairs.insert(pair);
                        }
                    }
                }
            }
            if self.live().count() > max_rules {
                return false;
            }
        }
        true
    }

    fn s_poly(&self, pair: &Pair) -> Option<Poly> {
        let ri = self.rules[pair.i].as_ref()?;
        let rj = self.rules[pair.j].as_ref()?;
        Some(s_poly(ri, rj, pair.overlap))
    }
}

fn overlaps(i: usize, li: &[Letter], j: usize, lj: &[Letter]) -> Vec<Pair> {
    let mut out = Vec::new();
    let max = li.len().min(lj.len());
    for ov in 1..max {
        if li[li.len() - ov..] == lj[..ov] {
            let mut word = li.to_vec();
            word.extend_from_slice(&lj[ov..]);
            out.push(Pair {
                len: word.len(),
                word,
                i,
                j,
                overlap: ov,
            });
        }
    }
    out
}

/// `rhs_i · tail − head · rhs_j` for the overlap `head·m·tail` where
/// `lhs_i = head·m` and `lhs_j = m·tail`.
fn s_poly(ri: &Rule, rj: &Rule, ov: usize) -> Poly {
    let tail = &rj.lhs.letters[ov..];
    let head = &ri.lhs.letters[..ri.lhs.len() - ov];
    let mut p = mul_words(&[], &ri.rhs, tail);
    // Words from the rhs keep their own start vertex; after left
    // multiplication by `head` the start is that of lhs_i.
    for (w, c) in mul_words(head, &rj.rhs, &[]) {
        let w = Word {
            start: if head.is_empty() { w.start } else { ri.lhs.start },
            letters: w.letters,
        };
        add_to(&mut p, w, -&c);
    }
    p
}

fn contains(alpha: &Alphabet, hay: &Word, needle: &Word) -> bool {
    if needle.is_empty() {
        return visits(alpha, hay, needle.start);
    }
    hay.letters.windows(needle.len()).any(|w| w == needle.letters.as_slice())
}

fn visits(alpha: &Alphabet, w: &Word, v: u32) -> bool {
    w.start == v || w.letters.iter().any(|&l| alpha.dst(l) == v)
}

fn find_match(alpha: &Alphabet, index: &RuleIndex, w: &Word) -> Option<(usize, usize)> {
    if !index.killed.is_empty() && index.killed.iter().any(|&v| visits(alpha, w, v)) {
        return Some((usize::MAX, 0));
    }
    for &len in &index.lengths {
        if len > w.len() {
            break;
        }
        for pos in 0..=w.len() - len {
            if let Some(&id) = index.by_lhs.get(&w.letters[pos..pos + len]) {
                return Some((id, pos));
            }
        }
    }
    None
}

fn reduce_with<'a>(
    alpha: &Alphabet,
    index: &RuleIndex,
    mut work: Poly,
    rule: impl Fn(usize) -> &'a Rule,
) -> Poly {
    let mut out = Poly::new();
    while let Some((w, c)) = work.pop_last() {
        match find_match(alpha, index, &w) {
            None => {
                out.insert(w, c);
            }
            Some((usize::MAX, _)) => {}
            Some((id, pos)) => {
                let r = rule(id);
                for (rw, rc) in &r.rhs {
                    add_to(&mut work, splice(&w, pos, r.lhs.len(), rw), &c * rc);
                }
            }
        }
    }
    out
}

impl RewriteSystem {
    /// Completes the ideal generated by `gens` (plus the commutation rules of
    /// the central variables), resolving overlaps of length up to `bound`.
    pub fn complete(
        quiver: &Arc<Quiver>,
        field: Field,
        gens: &[AlgebraElement],
        bound: usize,
    ) -> Result<RewriteSystem, RewriteError> {
        Self::complete_with_limit(quiver, field, gens, bound, DEFAULT_MAX_RULES)
    }

    pub fn complete_with_limit(
        quiver: &Arc<Quiver>,
        field: Field,
        gens: &[AlgebraElement],
        bound: usize,
        max_rules: usize,
    ) -> Result<RewriteSystem, RewriteError> {
        if !field.is_field() {
            return Err(RewriteError::NotAField(field));
        }
        let alphabet = Alphabet::new(quiver);
        for g in gens {
            if g.field() != field || (g.quiver() != quiver) {
                return Err(RewriteError::Mismatch);
            }
        }
        let mut c = Completion {
            alphabet: alphabet.clone(),
            field,
            rules: Vec::new(),
            index: RuleIndex::default(),
            pairs: BTreeSet::new(),
        };
        let one = field.one();
        let nc = quiver.central_vars().len();
        let nv = quiver.num_vertices();
        let mut ok = true;
        // Commutation rules.
        for ci in 0..nc {
            for (a, arrow) in quiver.arrows().iter().enumerate() {
                let lhs = Word {
                    start: arrow.src as u32,
                    letters: vec![alphabet.central_letter(ci, arrow.src), a as Letter],
                };
                let rhs = Word {
                    start: arrow.src as u32,
                    letters: vec![a as Letter, alphabet.central_letter(ci, arrow.dst)],
                };
                let p: Poly = [(lhs, one.clone()), (rhs, -&one)].into_iter().collect();
                ok &= c.add_relation(p, RuleOrigin::Commutation, max_rules);
            }
            for cj in 0..ci {
                for v in 0..nv {
                    let hi = alphabet.central_letter(ci, v);
                    let lo = alphabet.central_letter(cj, v);
                    let p: Poly = [
                        (Word { start: v as u32, letters: vec![hi, lo] }, one.clone()),
                        (Word { start: v as u32, letters: vec![lo, hi] }, -&one),
                    ]
                    .into_iter()
                    .collect();
                    ok &= c.add_relation(p, RuleOrigin::Commutation, max_rules);
                }
            }
        }
        // Endpoint components of each generator.
        let mut comps: Vec<Poly> = Vec::new();
        for g in gens {
            for (s, t) in g.endpoints() {
                comps.push(alphabet.element_to_poly(&g.component(s, t)));
            }
        }
        comps.sort_by(|a, b| {
            a.keys()
                .next_back()
                .cmp(&b.keys().next_back())
                .then_with(|| a.keys().cmp(b.keys()))
                .then_with(|| format!("{a:?}").cmp(&format!("{b:?}")))
        });
        for p in comps {
            if !ok {
                break;
            }
            ok &= c.add_relation(p, RuleOrigin::Relation, max_rules);
        }
        while ok {
            let Some(pair) = c.pairs.pop_first() else {
                break;
            };
            if pair.len > bound {
                continue;
            }
            let Some(s) = c.s_poly(&pair) else {
                continue;
            };
            let r = c.reduce(s);
            if !r.is_empty() {
                ok &= c.add_relation(r, RuleOrigin::Relation, max_rules);
            }
        }
        let mut rules: Vec<Rule> = c.rules.into_iter().flatten().collect();
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let mut rs = RewriteSystem {
            alphabet,
            field,
            index: RuleIndex::default(),
            rules,
            bound,
            complete_below_bound: ok,
            confluent: false,
        };
        rs.rebuild_index();
        // Final inter-reduction of right-hand sides against the sorted system.
        for i in 0..rs.rules.len() {
            let rhs = rs.rules[i].rhs.clone();
            rs.rules[i].rhs = rs.reduce_poly(rhs);
        }
        rs.confluent = ok && rs.check_all_overlaps().is_empty();
        Ok(rs)
    }

    fn rebuild_index(&mut self) {
        let mut index = RuleIndex::default();
        for (i, r) in self.rules.iter().enumerate() {
            if r.lhs.is_empty() {
                index.killed.insert(r.lhs.start);
            } else {
                index.by_lhs.insert(r.lhs.letters.clone(), i);
                index.lengths.insert(r.lhs.len());
            }
        }
        self.index = index;
    }

    /// Overlaps (of any length) whose S-polynomial does not reduce to zero.
    pub fn check_all_overlaps(&self) -> Vec<(Word, Poly)> {
        let mut bad = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            if ri.lhs.is_empty() {
                continue;
            }
            for (j, rj) in self.rules.iter().enumerate() {
                if rj.lhs.is_empty() {
                    continue;
                }
                if i != j && contains(&self.alphabet, &ri.lhs, &rj.lhs) {
                    bad.push((ri.lhs.clone(), Poly::new()));
                }
                for pair in overlaps(i, &ri.lhs.letters, j, &rj.lhs.letters) {
                    let s = s_poly(ri, rj, pair.overlap);
                    let r = self.reduce_poly(s);
                    if !r.is_empty() {
                        bad.push((
                            Word {
                                start: ri.lhs.start,
                                letters: pair.word,
                            },
                            r,
                        ));
                    }
                }
            }
        }
        bad
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.alphabet.quiver()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules other than the seeded commutation rules.
    pub fn relation_rules(&self) -> Vec<&Rule> {
        self.rules
            .iter()
            .filter(|r| r.origin == RuleOrigin::Relation)
            .collect()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn complete_below_bound(&self) -> bool {
        self.complete_below_bound
    }

    /// Every overlap of the final system resolves, so normal forms are
    /// unique for words of any length.
    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn max_lhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    pub fn reduce_poly(&self, p: Poly) -> Poly {
        reduce_with(&self.alphabet, &self.index, p, |i| &self.rules[i])
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        find_match(&self.alphabet, &self.index, w).is_none()
    }

    pub fn normal_form(&self, u: &AlgebraElement) -> Result<AlgebraElement, RewriteError> {
        if u.field() != self.field || u.quiver() != self.quiver() {
            return Err(RewriteError::Mismatch);
        }
        let len = u.max_word_len();
        if !self.confluent && len > self.bound {
            return Err(RewriteError::LengthOverflow {
                len,
                bound: self.bound,
            });
        }
        let p = self.reduce_poly(self.alphabet.element_to_poly(u));
        Ok(self.alphabet.poly_to_element(&p, self.field))
    }

    /// Normal form as a polynomial over words, without the length check.
    pub fn normal_poly(&self, u: &AlgebraElement) -> Poly {
        self.reduce_poly(self.alphabet.element_to_poly(u))
    }

    pub fn reduces_to_zero(&self, u: &AlgebraElement) -> Result<bool, RewriteError> {
        Ok(self.normal_form(u)?.is_zero())
    }

    /// Irreducible words of length `< limit`, grouped by length, and whether
    /// enumeration ran dry before the limit.
    pub fn irreducible_words(&self, limit: usize) -> (Vec<Word>, bool) {
        let mut all = Vec::new();
        let mut level: Vec<Word> = (0..self.quiver().num_vertices() as u32)
            .map(|v| Word {
                start: v,
                letters: Vec::new(),
            })
            .filter(|w| self.is_irreducible(w))
            .collect();
        let mut len = 0;
        while !level.is_empty() {
            if len >= limit {
                return (all, false);
            }
            all.extend(level.iter().cloned());
            let mut next = Vec::new();
            for w in &level {
                let end = self.alphabet.end(w);
                for l in 0..self.alphabet.len() as Letter {
                    if self.alphabet.src(l) != end {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    let cand = Word {
                        start: w.start,
                        letters,
                    };
                    if self.suffix_irreducible(&cand) {
                        next.push(cand);
                    }
                }
            }
            level = next;
            len += 1;
        }
        (all, true)
    }

    fn suffix_irreducible(&self, w: &Word) -> bool {
        let n = w.len();
        if self.index.killed.contains(&self.alphabet.end(w)) {
            return false;
        }
        for &len in &self.index.lengths {
            if len > n {
                break;
            }
            if self.index.by_lhs.contains_key(&w.letters[n - len..]) {
                return false;
            }
        }
        true
    }

    /// Basis of the quotient algebra, when it is provably finite.
    pub fn quotient_basis(&self) -> Result<QuotientVerdict, RewriteError> {
        if !self.complete_below_bound {
            return Err(RewriteError::Incomplete);
        }
        let (words, finished) = self.irreducible_words(self.bound + 1);
        let longest = words.iter().map(Word::len).max().unwrap_or(0);
        if finished && self.confluent {
            let mut words = words;
            words.sort();
            Ok(QuotientVerdict::Finite(words))
        } else {
            Ok(QuotientVerdict::InconclusiveAtBound {
                found: words.len(),
                longest,
            })
        }
    }

    /// Canonical listing of the rules, for caching and reports.
    pub fn describe(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|r| {
                format!(
                    "{} -> {}",
                    self.alphabet.word_string(&r.lhs),
                    self.alphabet.poly_string(&r.rhs)
                )
            })
            .collect()
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.describe() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
