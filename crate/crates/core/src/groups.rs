//! Finite groups from permutations or presentations, group algebras over
//! `Z`, `Q` and `F_p`, conjugacy-class sums, central units and
//! abelianizations.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{smith_normal_form, Field, IntMatrix, Scalar};
use crate::expr::{eval_str, Evaluator, ExprError, Pos};
use crate::linalg::solve;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group table is invalid: {0}")]
    InvalidTable(String),
    #[error("permutation `{0}` is not a bijection")]
    NotAPermutation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimit(usize),
    #[error("element is not central")]
    NotCentral,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("enumeration needs {needed} elements, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(Field),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A conjugacy class with its canonical name `C<i>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub name: String,
    pub elements: Vec<usize>,
    pub representative: usize,
    pub element_order: u64,
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    orders: Vec<u64>,
    generators: Vec<(String, usize)>,
    labels: Vec<String>,
    classes: Vec<ConjugacyClass>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity exhaustively.
    pub fn from_table(
        name: &str,
        table: Vec<Vec<usize>>,
        generators: Vec<(String, usize)>,
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        let bad = |m: &str| Err(GroupError::InvalidTable(m.to_string()));
        if n == 0 || labels.len() != n {
            return bad("empty table or label mismatch");
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("not closed");
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return bad("element 0 is not the identity");
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0) {
                Some(h) if table[h][g] == 0 => inverse[g] = h,
                _ => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        if generators.iter().any(|(_, g)| *g >= n) {
            return bad("generator out of range");
        }
        let orders = (0..n)
            .map(|g| {
                let mut x = g;
                let mut k = 1;
                while x != 0 {
                    x = table[x][g];
                    k += 1;
                }
                k
            })
            .collect();
        let mut grp = FiniteGroup {
            name: name.to_string(),
            table,
            inverse,
            orders,
            generators,
            labels,
            classes: Vec::new(),
        };
        grp.classes = grp.compute_classes();
        Ok(grp)
    }

    /// Closure of permutations of `{0, ..., n-1}` given as image lists.
    /// Elements are sorted lexicographically by image list.
    pub fn permutation(name: &str, n: usize, gens: &[(&str, Vec<usize>)]) -> Result<Self, GroupError> {
        for (g, p) in gens {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::NotAPermutation(g.to_string()));
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut seen: std::collections::BTreeSet<Vec<usize>> = [identity.clone()].into();
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (_, g) in gens {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        let generators = gens.iter().map(|(g, p)| (g.to_string(), index[p])).collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        FiniteGroup::from_table(name, table, generators, labels)
    }

    /// Alternating group on `{1, ..., 4}`.
    pub fn a4() -> Self {
        FiniteGroup::permutation("A4", 4, &[("s", cycles(4, &[&[1, 2, 3]])), ("t", cycles(4, &[&[1, 2], &[3, 4]]))])
            .expect("fixed generators")
    }

    pub fn s4() -> Self {
        FiniteGroup::permutation("S4", 4, &[("s", cycles(4, &[&[1, 2, 3, 4]])), ("t", cycles(4, &[&[1, 2]]))])
            .expect("fixed generators")
    }

    pub fn a5() -> Self {
        FiniteGroup::permutation("A5", 5, &[("s", cycles(5, &[&[1, 2, 3, 4, 5]])), ("t", cycles(5, &[&[1, 2, 3]]))])
            .expect("fixed generators")
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table("1", vec![vec![0]], Vec::new(), vec!["()".into()]).expect("trivial")
    }

    /// Groups known by name: `A4`, `S4`, `A5`, `D<2n>`, `Z<n>`, `prism(m,n)`.
    pub fn by_name(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownGroup(name.to_string());
        match name {
            "A4" => Ok(FiniteGroup::a4()),
            "S4" => Ok(FiniteGroup::s4()),
            "A5" => Ok(FiniteGroup::a5()),
            "1" => Ok(FiniteGroup::trivial()),
            _ => {
                if let Some(rest) = name.strip_prefix('D') {
                    let two_n: usize = rest.parse().map_err(|_| unknown())?;
                    if two_n < 2 || two_n % 2 == 1 {
                        return Err(unknown());
                    }
                    return todd_coxeter(&Presentation::dihedral(two_n / 2)?, DEFAULT_COSET_LIMIT);
                }
                if let Some(rest) = name.strip_prefix('Z') {
                    let n: u64 = rest.parse().map_err(|_| unknown())?;
                    return todd_coxeter(&Presentation::cyclic(n)?, DEFAULT_COSET_LIMIT);
                }
                if let Some(args) = name.strip_prefix("prism(").and_then(|s| s.strip_suffix(')')) {
                    let v: Vec<u64> = args
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| unknown()))
                        .collect::<Result<_, _>>()?;
                    if v.len() != 2 {
                        return Err(unknown());
                    }
                    return todd_coxeter(&Presentation::prism(v[0], v[1])?, DEFAULT_COSET_LIMIT);
                }
                Err(unknown())
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&a| (0..self.order()).all(|b| self.table[a][b] == self.table[b][a]))
            .collect()
    }

    /// Order, center size and the number of elements of each order.
    pub fn fingerprint(&self) -> (usize, usize, BTreeMap<u64, usize>) {
        let mut hist = BTreeMap::new();
        for &o in &self.orders {
            *hist.entry(o).or_insert(0) += 1;
        }
        (self.order(), self.center().len(), hist)
    }

    /// Classes named `C0` (identity), then by decreasing element order and
    /// increasing least element index.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.elements.contains(&g))
            .expect("every element lies in a class")
    }

    fn compute_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|h| self.mul(self.mul(self.inv(h), g), h))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                assigned[x] = true;
            }
            raw.push(class);
        }
        raw.sort_by(|a, b| {
            let (oa, ob) = (self.orders[a[0]], self.orders[b[0]]);
            (a[0] != 0)
                .cmp(&(b[0] != 0))
                .then(ob.cmp(&oa))
                .then(a[0].cmp(&b[0]))
        });
        raw.into_iter()
            .enumerate()
            .map(|(i, elements)| ConjugacyClass {
                name: format!("C{i}"),
                representative: elements[0],
                element_order: self.orders[elements[0]],
                elements,
            })
            .collect()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

const DEFAULT_COSET_LIMIT: usize = 1 << 20;

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // Left-to-right: first a, then b.
    a.iter().map(|&x| b[x]).collect()
}

/// Permutation of `{0..n-1}` from 1-based cycles.
pub fn cycles(n: usize, cs: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for c in cs {
        for i in 0..c.len() {
            p[c[i] - 1] = c[(i + 1) % c.len()] - 1;
        }
    }
    p
}

/// 1-based cycle notation, `()` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut c = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            c.push(x + 1);
            x = p[x];
        }
        out.push('(');
        out.push_str(&c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A finite presentation. Letters are `±(generator index + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
}

struct WordEvaluator<'a> {
    gens: &'a [String],
}

impl Evaluator for WordEvaluator<'_> {
    type Value = Vec<i32>;

    fn integer(&self, n: &BigInt, pos: Pos) -> Result<Vec<i32>, ExprError> {
        if n.is_one() {
            Ok(Vec::new())
        } else {
            Err(ExprError::new(pos, "only the literal 1 is a group word"))
        }
    }

    fn rational(&self, _: &BigInt, _: &BigInt, pos: Pos) -> Result<Vec<i32>, ExprError> {
        Err(ExprError::new(pos, "division is not allowed in group words"))
    }

    fn ident(&self, name: &str, pos: Pos) -> Result<Vec<i32>, ExprError> {
        self.gens
            .iter()
            .position(|g| g == name)
            .map(|i| vec![i as i32 + 1])
            .ok_or_else(|| ExprError::new(pos, format!("unknown generator `{name}`")))
    }

    fn add(&self, _: Vec<i32>, _: Vec<i32>, pos: Pos) -> Result<Vec<i32>, ExprError> {
        Err(ExprError::new(pos, "sums are not group words"))
    }

    fn neg(&self, _: Vec<i32>, pos: Pos) -> Result<Vec<i32>, ExprError> {
        Err(ExprError::new(pos, "negation is not a group word"))
    }

    fn mul(&self, a: Vec<i32>, b: Vec<i32>, _: Pos) -> Result<Vec<i32>, ExprError> {
        let mut w = a;
        w.extend(b);
        Ok(free_reduce(&w))
    }

    fn pow(&self, a: Vec<i32>, e: i64, _: Pos) -> Result<Vec<i32>, ExprError> {
        let base = if e < 0 { invert_word(&a) } else { a };
        let w: Vec<i32> = (0..e.unsigned_abs()).flat_map(|_| base.iter().copied()).collect();
        Ok(free_reduce(&w))
    }
}

pub fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

impl Presentation {
    /// Relators may be written `lhs = rhs`, meaning `lhs * rhs^-1`.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let ev = WordEvaluator { gens: &gens };
        let mut rels = Vec::new();
        for r in relators {
            let word = match r.split_once('=') {
                Some((l, rhs)) => {
                    let a = eval_str(l, &ev)?;
                    let b = eval_str(rhs, &ev).map_err(|e| ExprError::new(e.pos + l.len() + 1, e.message))?;
                    free_reduce(&[a, invert_word(&b)].concat())
                }
                None => eval_str(r, &ev)?,
            };
            rels.push(word);
        }
        Ok(Presentation {
            generators: gens,
            relators: rels,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameters("cyclic order must be positive".into()));
        }
        Presentation::parse(&["x"], &[&format!("x^{n}")])
    }

    /// `⟨r, s | r^n, s^2, (rs)^2⟩`, of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidParameters("dihedral n must be positive".into()));
        }
        Presentation::parse(&["r", "s"], &[&format!("r^{n}"), "s^2", "(r*s)^2"])
    }

    /// `⟨x, y | x y x^-1 = y^-1, x^{2m} = y^n⟩`.
    pub fn prism(m: u64, n: u64) -> Result<Self, GroupError> {
        if m == 0 || n == 0 {
            return Err(GroupError::InvalidParameters("prism parameters must be positive".into()));
        }
        Presentation::parse(&["x", "y"], &["x*y*x^-1 = y^-1", &format!("x^{} = y^{n}", 2 * m)])
    }

    /// Rows are relators, columns generators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generators.len()];
                for &l in r {
                    row[l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
                row
            })
            .collect();
        let mut m = IntMatrix::from_rows(&rows);
        if rows.is_empty() {
            m = IntMatrix::zeros(0, self.generators.len());
        }
        m
    }

    pub fn word_string(&self, w: &[i32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.generators[w[i].unsigned_abs() as usize - 1];
            let e = (j - i) as i64 * w[i].signum() as i64;
            parts.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            i = j;
        }
        parts.join("*")
    }
}

/// Invariant factors of the abelianization; `0` stands for a copy of `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub factors: Vec<String>,
    pub cyclic: bool,
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let m = p.exponent_matrix();
    let snf = smith_normal_form(&m);
    let ngens = p.generators.len();
    let diag: Vec<BigInt> = snf.diagonal().into_iter().map(|d| d.abs()).collect();
    let mut factors: Vec<BigInt> = diag.iter().filter(|d| !d.is_one() && !d.is_zero()).cloned().collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    factors.extend(std::iter::repeat_n(BigInt::zero(), ngens - rank));
    Abelianization {
        cyclic: factors.len() <= 1,
        factors: factors.iter().map(|f| f.to_string()).collect(),
    }
}

/// Coset enumeration over the trivial subgroup (HLT with coincidences).
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> Result<FiniteGroup, GroupError> {
    let ngens = p.generators.len();
    let cols = 2 * ngens;
    let col = |l: i32| -> usize {
        let g = l.unsigned_abs() as usize - 1;
        2 * g + usize::from(l < 0)
    };
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.iter().map(|&l| col(l)).collect()).collect();
    let mut tc = CosetTable {
        table: vec![vec![None; cols]],
        parent: vec![0],
        limit: max_cosets,
    };
    let mut c = 0;
    while c < tc.table.len() {
        if tc.live(c) {
            for r in &rels {
                tc.scan_and_fill(c, r)?;
                if !tc.live(c) {
                    break;
                }
            }
            if tc.live(c) {
                for x in 0..cols {
                    if tc.table[c][x].is_none() {
                        tc.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..tc.table.len()).filter(|&i| tc.live(i)).collect();
    let renumber: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let action: Vec<Vec<usize>> = live
        .iter()
        .map(|&c| {
            (0..cols)
                .map(|x| renumber[&tc.table[c][x].expect("complete table")])
                .collect()
        })
        .collect();
    let n = live.len();
    // Shortlex words from the identity coset.
    let mut words: Vec<Option<Vec<i32>>> = vec![None; n];
    words[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..ngens {
            for (x, l) in [(2 * g, g as i32 + 1), (2 * g + 1, -(g as i32) - 1)] {
                let d = action[c][x];
                if words[d].is_none() {
                    let mut w = words[c].clone().expect("visited");
                    w.push(l);
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
    }
    let words: Vec<Vec<i32>> = words.into_iter().map(|w| w.expect("connected")).collect();
    let follow = |start: usize, w: &[i32]| w.iter().fold(start, |c, &l| action[c][col(l)]);
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| follow(a, &words[b])).collect()).collect();
    let generators = p
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), action[0][2 * i]))
        .collect();
    let labels = words.iter().map(|w| p.word_string(w)).collect();
    let name = format!("<{} | {}>", p.generators.join(","), p.relators.iter().map(|r| p.word_string(r)).collect::<Vec<_>>().join(", "));
    FiniteGroup::from_table(&name, table, generators, labels)
}

struct CosetTable {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    limit: usize,
}

impl CosetTable {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        if self.table.len() >= self.limit {
            return Err(GroupError::CosetLimit(self.limit));
        }
        let n = self.table.len();
        self.table.push(vec![None; self.table[0].len()]);
        self.parent.push(n);
        self.table[c][x] = Some(n);
        self.table[n][x ^ 1] = Some(c);
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), GroupError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(t) => {
                        f = t;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(t) => {
                        b = t;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.table[e].len() {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][x ^ 1] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][x ^ 1] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x ^ 1] = Some(e1);
                }
            }
        }
    }
}

/// The group algebra `R[G]` for `R` one of `Z`, `Q`, `F_p`.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub group: Arc<FiniteGroup>,
    pub ring: Field,
}

/// Coefficients indexed by group element.
pub type GroupElement = Vec<Scalar>;

impl GroupAlgebra {
    pub fn new(group: Arc<FiniteGroup>, ring: Field) -> Self {
        GroupAlgebra { group, ring }
    }

    pub fn zero(&self) -> GroupElement {
        vec![self.ring.zero(); self.group.order()]
    }

    pub fn one(&self) -> GroupElement {
        self.basis(0)
    }

    pub fn basis(&self, g: usize) -> GroupElement {
        let mut v = self.zero();
        v[g] = self.ring.one();
        v
    }

    pub fn class_sum(&self, i: usize) -> GroupElement {
        let mut v = self.zero();
        for &g in &self.group.classes[i].elements {
            v[g] = self.ring.one();
        }
        v
    }

    pub fn class_sums(&self) -> Vec<GroupElement> {
        (0..self.group.classes.len()).map(|i| self.class_sum(i)).collect()
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> GroupElement {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(&self, c: &Scalar, a: &[Scalar]) -> GroupElement {
        a.iter().map(|x| c * x).collect()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> GroupElement {
        let mut out = self.zero();
        for (g, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (h, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    let gh = self.group.mul(g, h);
                    out[gh] = &out[gh] + &(x * y);
                }
            }
        }
        out
    }

    pub fn is_central(&self, a: &[Scalar]) -> bool {
        self.group.generators.iter().all(|(_, g)| {
            let b = self.basis(*g);
            self.mul(a, &b) == self.mul(&b, a)
        })
    }

    /// Coordinates with respect to the class sums, for a central element.
    pub fn class_coordinates(&self, a: &[Scalar]) -> Option<Vec<Scalar>> {
        self.group
            .classes
            .iter()
            .map(|c| {
                let x = a[c.elements[0]].clone();
                c.elements.iter().all(|&g| a[g] == x).then_some(x)
            })
            .collect()
    }

    pub fn from_class_coordinates(&self, coords: &[Scalar]) -> GroupElement {
        let mut v = self.zero();
        for (c, x) in self.group.classes.iter().zip(coords) {
            for &g in &c.elements {
                v[g] = x.clone();
            }
        }
        v
    }

    /// Parses an expression in class names `C<i>`, generator names and
    /// integer scalars.
    pub fn parse(&self, src: &str) -> Result<GroupElement, GroupError> {
        Ok(eval_str(src, self)?)
    }

    pub fn reduce_mod_p(&self, a: &[Scalar], p: u64) -> Result<(GroupAlgebra, GroupElement), GroupError> {
        let f = Field::prime(p).map_err(|e| GroupError::InvalidParameters(e.to_string()))?;
        let v = a
            .iter()
            .map(|x| x.reduce_mod_p(p))
            .collect::<Result<_, _>>()
            .map_err(|e| GroupError::InvalidParameters(e.to_string()))?;
        Ok((GroupAlgebra::new(self.group.clone(), f), v))
    }

    pub fn pow(&self, a: &[Scalar], e: u64) -> GroupElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Least `n ≤ max` with `a^n = 1`.
    pub fn multiplicative_order(&self, a: &[Scalar], max: u64) -> Option<u64> {
        let one = self.one();
        let mut x = a.to_vec();
        for n in 1..=max {
            if x == one {
                return Some(n);
            }
            x = self.mul(&x, a);
        }
        None
    }

    /// Multiplication table of the center in the class-sum basis:
    /// `C_i C_j = Σ_k a[i][j][k] C_k`.
    pub fn center_structure(&self) -> Vec<Vec<Vec<i64>>> {
        let cls = &self.group.classes;
        let r = cls.len();
        let mut a = vec![vec![vec![0i64; r]; r]; r];
        for i in 0..r {
            for j in 0..r {
                for (k, ck) in cls.iter().enumerate() {
                    let z = ck.representative;
                    let mut count = 0;
                    for &x in &cls[i].elements {
                        let y = self.group.mul(self.group.inv(x), z);
                        if cls[j].elements.binary_search(&y).is_ok() {
                            count += 1;
                        }
                    }
                    a[i][j][k] = count;
                }
            }
        }
        a
    }

    pub fn format(&self, a: &[Scalar]) -> String {
        let coords = self.class_coordinates(a);
        let (names, vals): (Vec<String>, Vec<Scalar>) = match coords {
            Some(c) => (self.group.classes.iter().map(|c| c.name.clone()).collect(), c),
            None => (self.group.labels.clone(), a.to_vec()),
        };
        let mut out = String::new();
        for (n, v) in names.iter().zip(&vals) {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let mag = if neg { -v } else { v.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if n == "C0" || n == "()" || n == "1" {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(n);
            } else {
                out.push_str(&format!("{mag}*{n}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Evaluator for GroupAlgebra {
    type Value = GroupElement;

    fn integer(&self, n: &BigInt, _: Pos) -> Result<GroupElement, ExprError> {
        Ok(self.scale(&self.ring.from_bigint(n), &self.one()))
    }

    fn rational(&self, num: &BigInt, den: &BigInt, pos: Pos) -> Result<GroupElement, ExprError> {
        let c = self
            .ring
            .from_ratio(num, den)
            .map_err(|e| ExprError::new(pos, e.to_string()))?;
        Ok(self.scale(&c, &self.one()))
    }

    fn ident(&self, name: &str, pos: Pos) -> Result<GroupElement, ExprError> {
        if let Some(i) = self.group.classes.iter().position(|c| c.name == name) {
            return Ok(self.class_sum(i));
        }
        if let Some((_, g)) = self.group.generators.iter().find(|(n, _)| n == name) {
            return Ok(self.basis(*g));
        }
        Err(ExprError::new(pos, format!("unknown class or generator `{name}`")))
    }

    fn add(&self, a: GroupElement, b: GroupElement, _: Pos) -> Result<GroupElement, ExprError> {
        Ok(GroupAlgebra::add(self, &a, &b))
    }

    fn neg(&self, a: GroupElement, _: Pos) -> Result<GroupElement, ExprError> {
        Ok(a.iter().map(|x| -x).collect())
    }

    fn mul(&self, a: GroupElement, b: GroupElement, _: Pos) -> Result<GroupElement, ExprError> {
        Ok(GroupAlgebra::mul(self, &a, &b))
    }

    fn pow(&self, a: GroupElement, e: i64, pos: Pos) -> Result<GroupElement, ExprError> {
        if e < 0 {
            return Err(ExprError::new(pos, "negative exponents are not supported"));
        }
        Ok(GroupAlgebra::pow(self, &a, e as u64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitCertificate {
    pub element: String,
    pub inverse: String,
    /// Inverse in class-sum coordinates `C0, C1, ...`.
    pub inverse_class_coordinates: Vec<String>,
}

/// Inverse of a central element inside the center, checked exactly.
/// Over `Z` the inverse must also be integral.
pub fn verify_central_unit(alg: &GroupAlgebra, u: &[Scalar]) -> Result<(GroupElement, UnitCertificate), GroupError> {
    if !alg.is_central(u) {
        return Err(GroupError::NotCentral);
    }
    let coords = alg.class_coordinates(u).ok_or(GroupError::NotCentral)?;
    let solve_field = if alg.ring == Field::Integers { Field::Rationals } else { alg.ring };
    let conv = |x: &Scalar| x.convert(solve_field).expect("ring embeds");
    let a = alg.center_structure();
    let r = coords.len();
    // (u * w)_k = Σ_i Σ_j u_i w_j a[i][j][k]
    let rows: Vec<Vec<Scalar>> = (0..r)
        .map(|k| {
            (0..r)
                .map(|j| {
                    let mut s = solve_field.zero();
                    for (i, ui) in coords.iter().enumerate() {
                        if a[i][j][k] != 0 {
                            s = &s + &(&conv(ui) * &solve_field.from_i64(a[i][j][k]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut rhs = vec![solve_field.zero(); r];
    rhs[0] = solve_field.one();
    let w = solve(&rows, &rhs, r, solve_field).ok_or(GroupError::NotAUnit)?;
    let w: Vec<Scalar> = w
        .iter()
        .map(|x| x.convert(alg.ring).map_err(|_| GroupError::NotAUnit))
        .collect::<Result<_, _>>()?;
    let inv = alg.from_class_coordinates(&w);
    let one = alg.one();
    if alg.mul(u, &inv) != one || alg.mul(&inv, u) != one {
        return Err(GroupError::NotAUnit);
    }
    Ok((
        inv.clone(),
        UnitCertificate {
            element: alg.format(u),
            inverse: alg.format(&inv),
            inverse_class_coordinates: w.iter().map(|x| x.to_string()).collect(),
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralUnitSurvey {
    pub group: String,
    pub p: u64,
    pub center_dim: usize,
    pub units: u64,
    /// Number of central units of each multiplicative order.
    pub order_counts: BTreeMap<u64, u64>,
    /// Units of the form `λ g` with `g` a central group element.
    pub trivial_units: u64,
}

/// Exhaustive inventory of the units of the center of `F_p[G]`.
pub fn center_unit_survey(group: &Arc<FiniteGroup>, p: u64, budget: u64) -> Result<CentralUnitSurvey, GroupError> {
    let field = Field::prime(p).map_err(|e| GroupError::InvalidParameters(e.to_string()))?;
    let alg = GroupAlgebra::new(group.clone(), field);
    let a = alg.center_structure();
    let r = a.len();
    let total = (p as u128).checked_pow(r as u32).filter(|&t| t <= budget as u128);
    let Some(total) = total else {
        return Err(GroupError::BudgetExceeded {
            needed: format!("{p}^{r}"),
            budget,
        });
    };
    let am: Vec<Vec<Vec<u64>>> = a
        .iter()
        .map(|x| x.iter().map(|y| y.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()).collect())
        .collect();
    let mul = |u: &[u64], w: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; r];
        for i in 0..r {
            if u[i] == 0 {
                continue;
            }
            for j in 0..r {
                if w[j] == 0 {
                    continue;
                }
                let c = u[i] * w[j] % p;
                for k in 0..r {
                    out[k] = (out[k] + c * am[i][j][k]) % p;
                }
            }
        }
        out
    };
    let mut one = vec![0u64; r];
    one[0] = 1;
    let central_singletons: Vec<usize> = group
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.elements.len() == 1)
        .map(|(i, _)| i)
        .collect();
    let mut coeffs = vec![0u64; r];
    let mut units = 0u64;
    let mut order_counts = BTreeMap::new();
    let mut trivial = 0u64;
    for _ in 0..total {
        // u is a unit iff some power returns to 1; the powers stay in a finite set.
        let mut x = coeffs.clone();
        let mut order = None;
        for n in 1..=total as u64 {
            if x == one {
                order = Some(n);
                break;
            }
            if x.iter().all(|&c| c == 0) {
                break;
            }
            x = mul(&x, &coeffs);
        }
        if let Some(o) = order {
            units += 1;
            *order_counts.entry(o).or_insert(0) += 1;
            let support: Vec<usize> = (0..r).filter(|&i| coeffs[i] != 0).collect();
            if support.len() == 1 && central_singletons.contains(&support[0]) {
                trivial += 1;
            }
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    Ok(CentralUnitSurvey {
        group: group.name.clone(),
        p,
        center_dim: r,
        units,
        order_counts,
        trivial_units: trivial,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralUnitScan {
    pub group: String,
    pub coefficient_bound: i64,
    pub candidates: u64,
    pub units_found: Vec<String>,
    /// Units other than `±g` for central `g`.
    pub nontrivial_found: Vec<String>,
    pub exhaustive: bool,
}

/// Sanity scan for central units of `Z[G]` with class-sum coefficients in
/// `[-bound, bound]`. Not exhaustive.
pub fn integral_central_unit_scan(group: &Arc<FiniteGroup>, bound: i64) -> IntegralUnitScan {
    let alg = GroupAlgebra::new(group.clone(), Field::Integers);
    let a = alg.center_structure();
    let r = a.len();
    let side = (2 * bound + 1) as u64;
    let total = side.pow(r as u32);
    let mut coeffs = vec![-bound; r];
    let mut found = Vec::new();
    let mut nontrivial = Vec::new();
    for _ in 0..total {
        let m = IntMatrix::from_rows(
            &(0..r)
                .map(|k| {
                    (0..r)
                        .map(|j| (0..r).map(|i| coeffs[i] * a[i][j][k]).sum::<i64>())
                        .collect::<Vec<i64>>()
                })
                .collect::<Vec<_>>(),
        );
        let det = m.determinant();
        if det.abs().is_one() {
            let u = alg.from_class_coordinates(&coeffs.iter().map(|&c| Field::Integers.from_i64(c)).collect::<Vec<_>>());
            let text = alg.format(&u);
            let support: Vec<usize> = (0..r).filter(|&i| coeffs[i] != 0).collect();
            let trivial = support.len() == 1
                && coeffs[support[0]].abs() == 1
                && group.classes[support[0]].elements.len() == 1;
            if !trivial {
                nontrivial.push(text.clone());
            }
            found.push(text);
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c <= bound {
                break;
            }
            *c = -bound;
        }
    }
    IntegralUnitScan {
        group: group.name.clone(),
        coefficient_bound: bound,
        candidates: total,
        units_found: found,
        nontrivial_found: nontrivial,
        exhaustive: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(g: &FiniteGroup) -> Vec<usize> {
        let mut s: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.elements.len()).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn permutation_groups() {
        assert_eq!(FiniteGroup::a4().order(), 12);
        assert_eq!(FiniteGroup::s4().order(), 24);
        let a5 = FiniteGroup::a5();
        assert_eq!(a5.order(), 60);
        assert_eq!(sizes(&a5), vec![1, 12, 12, 15, 20]);
        assert_eq!(sizes(&FiniteGroup::a4()), vec![1, 3, 4, 4]);
        assert_eq!(FiniteGroup::s4().conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::trivial().conjugacy_classes().len(), 1);
        assert_eq!(a5.label(0), "()");
    }

    #[test]
    fn a5_class_names() {
        let a5 = FiniteGroup::a5();
        let cls = a5.conjugacy_classes();
        let has = |i: usize, label: &str| cls[i].elements.contains(&a5.find_label(label).unwrap());
        assert!(has(1, "(12345)"));
        assert!(has(2, "(13524)"));
        assert!(has(3, "(123)"));
        assert!(has(4, "(12)(34)"));
    }

    #[test]
    fn class_sums_are_central() {
        for g in [FiniteGroup::a4(), FiniteGroup::s4(), FiniteGroup::a5()] {
            let alg = GroupAlgebra::new(Arc::new(g), Field::Integers);
            for c in alg.class_sums() {
                assert!(alg.is_central(&c));
            }
            assert!(!alg.is_central(&alg.basis(1)));
        }
    }

    #[test]
    fn a5_unit() {
        let alg = GroupAlgebra::new(Arc::new(FiniteGroup::a5()), Field::Integers);
        let u = alg.parse("49 + 26*C1 - 10*C2 - 16*C4").unwrap();
        let (inv, cert) = verify_central_unit(&alg, &u).unwrap();
        assert_eq!(alg.mul(&u, &inv), alg.one());
        assert_eq!(cert.inverse_class_coordinates.len(), 5);
        let (f2, u2) = alg.reduce_mod_p(&u, 2).unwrap();
        assert_eq!(u2, f2.one());
        let two = alg.parse("2").unwrap();
        assert_eq!(verify_central_unit(&alg, &two), Err(GroupError::NotAUnit));
        let one = alg.one();
        assert_eq!(verify_central_unit(&alg, &one).unwrap().0, one);
    }

    #[test]
    fn a4_augmented_sum() {
        let f3 = Field::prime(3).unwrap();
        let alg = GroupAlgebra::new(Arc::new(FiniteGroup::a4()), f3);
        let total: Vec<Scalar> = vec![f3.one(); 12];
        let u = alg.add(&alg.one(), &total);
        assert!(verify_central_unit(&alg, &u).is_ok());
        let o = alg.multiplicative_order(&u, 1000).unwrap();
        assert!(o > 1 && 3u64.pow(o.ilog(3)) == o, "order {o}");
    }

    #[test]
    fn todd_coxeter_small() {
        let c3 = todd_coxeter(&Presentation::cyclic(3).unwrap(), 1000).unwrap();
        assert_eq!(c3.order(), 3);
        let d5 = todd_coxeter(&Presentation::dihedral(5).unwrap(), 1000).unwrap();
        assert_eq!(d5.order(), 10);
        let q8 = todd_coxeter(&Presentation::prism(1, 2).unwrap(), 1000).unwrap();
        let (order, center, hist) = q8.fingerprint();
        assert_eq!((order, center), (8, 2));
        assert_eq!(hist, BTreeMap::from([(1, 1), (2, 1), (4, 6)]));
        let free = Presentation::parse(&["x", "y"], &["x*y*x^-1*y^-1"]).unwrap();
        assert_eq!(todd_coxeter(&free, 200), Err(GroupError::CosetLimit(200)));
    }

    #[test]
    fn dihedral_two_ways() {
        let tc = todd_coxeter(&Presentation::dihedral(4).unwrap(), 1000).unwrap();
        let perm = FiniteGroup::permutation("D8", 4, &[("r", cycles(4, &[&[1, 2, 3, 4]])), ("s", cycles(4, &[&[2, 4]]))]).unwrap();
        assert_eq!(tc.fingerprint(), perm.fingerprint());
    }

    #[test]
    fn abelianizations() {
        let p13 = abelianization(&Presentation::prism(1, 3).unwrap());
        assert_eq!(p13.factors, vec!["4"]);
        let p12 = abelianization(&Presentation::prism(1, 2).unwrap());
        assert_eq!(p12.factors, vec!["2", "2"]);
        assert!(!p12.cyclic);
        let ck = abelianization(&Presentation::cyclic(7).unwrap());
        assert_eq!(ck.factors, vec!["7"]);
        let z2 = abelianization(&Presentation::parse(&["x", "y"], &[]).unwrap());
        assert_eq!(z2.factors, vec!["0", "0"]);
    }

    #[test]
    fn word_parsing() {
        let p = Presentation::parse(&["x", "y"], &["x*y*x^-1 = y^-1", "(x*y)^-2"]).unwrap();
        assert_eq!(p.relators[0], vec![1, 2, -1, 2]);
        assert_eq!(p.relators[1], vec![-2, -1, -2, -1]);
        assert!(Presentation::parse(&["x"], &["x + x"]).is_err());
        assert!(Presentation::parse(&["x"], &["z"]).is_err());
    }

    #[test]
    fn surveys() {
        let z2 = Arc::new(todd_coxeter(&Presentation::cyclic(2).unwrap(), 100).unwrap());
        let s = center_unit_survey(&z2, 2, 1 << 20).unwrap();
        assert_eq!((s.units, s.center_dim), (2, 2));
        let scan = integral_central_unit_scan(&Arc::new(FiniteGroup::s4()), 1);
        assert!(scan.nontrivial_found.is_empty());
        assert!(scan.units_found.len() >= 2);
        assert!(center_unit_survey(&Arc::new(FiniteGroup::a5()), 2, 4).is_err());
    }
}
