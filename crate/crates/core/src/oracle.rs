//! Brute-force MSO semantics over finite words.
//!
//! This module deliberately shares no code with the automaton pipeline: it
//! only depends on the formula syntax and the word types.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::word::{Letter, Signature, Word};

/// Longest word the evaluator accepts (sets are 64-bit masks).
pub const MAX_WORD_LEN: usize = 64;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub fo: BTreeMap<Var, usize>,
    pub so: BTreeMap<Var, BTreeSet<usize>>,
}

impl Assignment {
    pub fn positions(vars: &[Var], tuple: &[usize]) -> Self {
        Assignment {
            fo: vars.iter().cloned().zip(tuple.iter().copied()).collect(),
            so: BTreeMap::new(),
        }
    }
}

type Slot = u16;

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Less(Slot, Slot),
    Equal(Slot, Slot),
    Pred(u32, Slot),
    In(Slot, Slot),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    ExistsFo(Slot, Box<Node>),
    ForallFo(Slot, Box<Node>),
    ExistsSo(Slot, Box<Node>),
    ForallSo(Slot, Box<Node>),
    AtLeast(u32, Slot, Box<Node>),
}

/// A formula resolved to slot indices, ready for repeated evaluation.
/// Free first-order variables occupy slots `0..free.len()` in the order
/// given at preparation.
#[derive(Debug, Clone)]
pub struct Prepared {
    root: Node,
    free_fo: Vec<Var>,
    free_so: Vec<Var>,
    fo_slots: usize,
    so_slots: usize,
}

struct Scope {
    fo: Vec<(Var, Slot)>,
    so: Vec<(Var, Slot)>,
    fo_next: Slot,
    so_next: Slot,
}

impl Scope {
    fn lookup(list: &[(Var, Slot)], v: &str) -> Result<Slot> {
        list.iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::Unassigned(v.to_string()))
    }

    fn resolve(&mut self, f: &Formula) -> Result<Node> {
        let b = |n: Node| Box::new(n);
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Less(x, y) => Node::Less(Self::lookup(&self.fo, x)?, Self::lookup(&self.fo, y)?),
            Formula::Equal(x, y) => {
                Node::Equal(Self::lookup(&self.fo, x)?, Self::lookup(&self.fo, y)?)
            }
            Formula::Pred(i, x) => Node::Pred(*i as u32, Self::lookup(&self.fo, x)?),
            Formula::In(s, x) => Node::In(Self::lookup(&self.so, s)?, Self::lookup(&self.fo, x)?),
            Formula::Not(g) => Node::Not(b(self.resolve(g)?)),
            Formula::And(g, h) => Node::And(b(self.resolve(g)?), b(self.resolve(h)?)),
            Formula::Or(g, h) => Node::Or(b(self.resolve(g)?), b(self.resolve(h)?)),
            Formula::Implies(g, h) => Node::Implies(b(self.resolve(g)?), b(self.resolve(h)?)),
            Formula::ExistsFo(v, g) | Formula::ForallFo(v, g) | Formula::AtLeast(_, v, g) => {
                let slot = self.fo_next;
                self.fo_next += 1;
                self.fo.push((v.clone(), slot));
                let body = b(self.resolve(g)?);
                self.fo.pop();
                match f {
                    Formula::ExistsFo(..) => Node::ExistsFo(slot, body),
                    Formula::ForallFo(..) => Node::ForallFo(slot, body),
                    Formula::AtLeast(n, ..) => Node::AtLeast(*n, slot, body),
                    _ => unreachable!(),
                }
            }
            Formula::ExistsSo(v, g) | Formula::ForallSo(v, g) => {
                let slot = self.so_next;
                self.so_next += 1;
                self.so.push((v.clone(), slot));
                let body = b(self.resolve(g)?);
                self.so.pop();
                if matches!(f, Formula::ExistsSo(..)) {
                    Node::ExistsSo(slot, body)
                } else {
                    Node::ForallSo(slot, body)
                }
            }
        })
    }
}

impl Prepared {
    /// Resolves `f` with the free first-order variables in the order of
    /// `fo_order` (variables of `f` missing from it are appended in
    /// first-occurrence order).
    pub fn new(f: &Formula, fo_order: &[Var]) -> Result<Self> {
        let (fo, so) = f.free_variables();
        let mut free_fo = fo_order.to_vec();
        for v in fo {
            if !free_fo.contains(&v) {
                free_fo.push(v);
            }
        }
        let mut scope = Scope {
            fo: free_fo.iter().cloned().zip(0..).collect(),
            so: so.iter().cloned().zip(0..).collect(),
            fo_next: free_fo.len() as Slot,
            so_next: so.len() as Slot,
        };
        let root = scope.resolve(f)?;
        let fo_slots = scope.fo_next as usize;
        let so_slots = scope.so_next as usize;
        Ok(Prepared {
            root,
            free_fo,
            free_so: so,
            fo_slots: fo_slots.max(1),
            so_slots: so_slots.max(1),
        })
    }

    pub fn free_fo(&self) -> &[Var] {
        &self.free_fo
    }

    /// Evaluates with the first `tuple.len()` free first-order variables
    /// bound to `tuple` and free set variables to `sets`.
    pub fn eval_tuple(&self, w: &[u32], tuple: &[usize], sets: &[u64]) -> bool {
        let mut fo = vec![0usize; self.fo_slots];
        fo[..tuple.len()].copy_from_slice(tuple);
        let mut so = vec![0u64; self.so_slots];
        so[..sets.len()].copy_from_slice(sets);
        let mut env = Env { w, fo, so };
        env.eval(&self.root)
    }
}

struct Env<'a> {
    w: &'a [u32],
    fo: Vec<usize>,
    so: Vec<u64>,
}

impl Env<'_> {
    fn eval(&mut self, n: &Node) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::Less(x, y) => self.fo[*x as usize] < self.fo[*y as usize],
            Node::Equal(x, y) => self.fo[*x as usize] == self.fo[*y as usize],
            Node::Pred(i, x) => self.w[self.fo[*x as usize]] >> i & 1 == 1,
            Node::In(s, x) => self.so[*s as usize] >> self.fo[*x as usize] & 1 == 1,
            Node::Not(g) => !self.eval(g),
            Node::And(g, h) => self.eval(g) && self.eval(h),
            Node::Or(g, h) => self.eval(g) || self.eval(h),
            Node::Implies(g, h) => !self.eval(g) || self.eval(h),
            Node::ExistsFo(s, g) => (0..self.w.len()).any(|p| {
                self.fo[*s as usize] = p;
                self.eval(g)
            }),
            Node::ForallFo(s, g) => (0..self.w.len()).all(|p| {
                self.fo[*s as usize] = p;
                self.eval(g)
            }),
            Node::AtLeast(count, s, g) => {
                let mut seen = 0;
                for p in 0..self.w.len() {
                    if seen >= *count {
                        break;
                    }
                    self.fo[*s as usize] = p;
                    if self.eval(g) {
                        seen += 1;
                    }
                }
                seen >= *count
            }
            Node::ExistsSo(s, g) => self.some_subset(*s, g, true),
            Node::ForallSo(s, g) => !self.some_subset(*s, g, false),
        }
    }

    /// Whether some subset makes `g` evaluate to `want`; subsets are tried
    /// in increasing size.
    fn some_subset(&mut self, s: Slot, g: &Node, want: bool) -> bool {
        let n = self.w.len();
        for size in 0..=n {
            let mut found = false;
            for_each_subset(n, size, |mask| {
                self.so[s as usize] = mask;
                if self.eval(g) == want {
                    found = true;
                }
                !found
            });
            if found {
                return true;
            }
        }
        false
    }
}

/// Calls `visit` on every `size`-element subset of `0..n` in increasing
/// numeric order; stops when `visit` returns false.
fn for_each_subset(n: usize, size: usize, mut visit: impl FnMut(u64) -> bool) {
    if size > n {
        return;
    }
    if size == 0 {
        visit(0);
        return;
    }
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut mask: u64 = (1u64 << size) - 1;
    loop {
        if !visit(mask) {
            return;
        }
        // Next mask with the same popcount (Gosper).
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r == 0 {
            return;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask > limit {
            return;
        }
    }
}

fn labels(w: &Word) -> Result<Vec<u32>> {
    if w.len() > MAX_WORD_LEN {
        return Err(Error::Word(format!(
            "the oracle handles words of length at most {MAX_WORD_LEN}"
        )));
    }
    Ok(w.0.iter().map(|l| l.0).collect())
}

/// Truth of `f` on `w` under `a`.
pub fn evaluate(f: &Formula, w: &Word, a: &Assignment) -> Result<bool> {
    let prepared = Prepared::new(f, &a.fo.keys().cloned().collect::<Vec<_>>())?;
    for v in &prepared.free_fo {
        if !a.fo.contains_key(v) {
            return Err(Error::Unassigned(v.clone()));
        }
    }
    let labels = labels(w)?;
    let mut tuple = Vec::new();
    for v in &prepared.free_fo {
        let p = a.fo[v];
        if p >= w.len() {
            return Err(Error::Word(format!("`{v}` assigned to position {p} out of range")));
        }
        tuple.push(p);
    }
    let mut sets = Vec::new();
    for s in &prepared.free_so {
        let set = a.so.get(s).ok_or_else(|| Error::Unassigned(s.clone()))?;
        let mut mask = 0u64;
        for &p in set {
            if p >= w.len() {
                return Err(Error::Word(format!("`{s}` contains position {p} out of range")));
            }
            mask |= 1 << p;
        }
        sets.push(mask);
    }
    Ok(prepared.eval_tuple(&labels, &tuple, &sets))
}

/// Tuples over `vars` (from `restrict` if given, else all positions)
/// satisfying `f`, in lexicographic order. `f` must not have free set
/// variables and its free first-order variables must be among `vars`.
pub fn satisfying_tuples_over(
    f: &Formula,
    vars: &[Var],
    w: &Word,
    restrict: Option<&[usize]>,
) -> Result<Vec<Vec<usize>>> {
    let prepared = prepare_closed(f, vars)?;
    let labels = labels(w)?;
    Ok(tuples_of(&prepared, &labels, vars.len(), restrict))
}

/// [`satisfying_tuples_over`] with the free variables of `f` in
/// first-occurrence order.
pub fn satisfying_tuples(f: &Formula, w: &Word, restrict: Option<&[usize]>) -> Result<Vec<Vec<usize>>> {
    satisfying_tuples_over(f, &f.free_fo(), w, restrict)
}

fn prepare_closed(f: &Formula, vars: &[Var]) -> Result<Prepared> {
    let prepared = Prepared::new(f, vars)?;
    if let Some(s) = prepared.free_so.first() {
        return Err(Error::FreeSecondOrder(s.clone()));
    }
    if let Some(v) = prepared.free_fo.get(vars.len()) {
        return Err(Error::Unassigned(v.clone()));
    }
    Ok(prepared)
}

fn tuples_of(p: &Prepared, w: &[u32], arity: usize, restrict: Option<&[usize]>) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = match restrict {
        Some(r) => {
            let mut r: Vec<usize> = r.iter().copied().filter(|&x| x < w.len()).collect();
            r.sort_unstable();
            r.dedup();
            r
        }
        None => (0..w.len()).collect(),
    };
    let mut out = Vec::new();
    for_each_tuple(&pool, arity, |t| {
        if p.eval_tuple(w, t, &[]) {
            out.push(t.to_vec());
        }
    });
    out
}

fn for_each_tuple(pool: &[usize], arity: usize, mut visit: impl FnMut(&[usize])) {
    if arity == 0 {
        visit(&[]);
        return;
    }
    if pool.is_empty() {
        return;
    }
    let mut idx = vec![0usize; arity];
    let mut tuple: Vec<usize> = vec![pool[0]; arity];
    loop {
        visit(&tuple);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < pool.len() {
                tuple[i] = pool[idx[i]];
                break;
            }
            idx[i] = 0;
            tuple[i] = pool[0];
        }
    }
}

/// Default cap on the number of words a sweep may enumerate.
pub const DEFAULT_WORD_BUDGET: u64 = 20_000_000;

/// All words of length `0..=max_len` in shortlex order.
pub fn enumerate_words(sig: &Signature, max_len: usize) -> Result<WordIter> {
    enumerate_words_with(sig, max_len, DEFAULT_WORD_BUDGET)
}

pub fn enumerate_words_with(sig: &Signature, max_len: usize, budget: u64) -> Result<WordIter> {
    let base = sig.alphabet_size() as u64;
    let mut total: u64 = 0;
    let mut layer: u64 = 1;
    for len in 0..=max_len {
        if len > 0 {
            layer = layer.saturating_mul(base);
        }
        total = total.saturating_add(layer);
    }
    if total > budget || max_len > MAX_WORD_LEN {
        return Err(Error::ResourceLimit {
            what: "words to enumerate",
            limit: budget as usize,
            context: format!("{} letters, length up to {max_len}", base),
        });
    }
    Ok(WordIter {
        base: base as u32,
        max_len,
        current: Some(Vec::new()),
        total,
    })
}

#[derive(Debug, Clone)]
pub struct WordIter {
    base: u32,
    max_len: usize,
    current: Option<Vec<u32>>,
    total: u64,
}

impl WordIter {
    /// Number of words the iterator yields in total.
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let out = Word(cur.iter().map(|&l| Letter(l)).collect());
        let mut nxt = cur;
        let mut i = nxt.len();
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            nxt[i] += 1;
            if nxt[i] < self.base {
                break true;
            }
            nxt[i] = 0;
        };
        if advanced {
            self.current = Some(nxt);
        } else if nxt.len() < self.max_len {
            self.current = Some(vec![0; nxt.len() + 1]);
        }
        Some(out)
    }
}

/// A candidate reparameterization given by plain values.
#[derive(Debug, Clone)]
pub struct RepCandidate<'a> {
    pub source: &'a Formula,
    pub graph: &'a Formula,
    pub domain: &'a [Var],
    pub image: &'a [Var],
    pub bound: &'a BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// Two image tuples for one domain tuple.
    NotFunctional,
    /// The source holds but no image tuple exists.
    MissingImage,
    /// An image exists although the source fails.
    SpuriousImage,
    /// More preimages than the bound.
    PreimageBound,
    /// An image coordinate equals no domain coordinate.
    NotCanonical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub violation: Violation,
    pub word: String,
    pub domain_tuple: Vec<usize>,
    pub image_tuples: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReparamCheck {
    pub ok: bool,
    pub words_checked: u64,
    pub max_len: usize,
    pub observed_max_preimage: u64,
    pub counterexample: Option<Counterexample>,
}

/// Checks functionality, same domain, bounded preimage and canonical form
/// of a candidate on all words up to `max_len`.
pub fn check_reparameterization(
    rep: &RepCandidate<'_>,
    sig: &Signature,
    max_len: usize,
) -> Result<ReparamCheck> {
    let source = prepare_closed(rep.source, rep.domain)?;
    let vars: Vec<Var> = rep.domain.iter().chain(rep.image).cloned().collect();
    let graph = prepare_closed(rep.graph, &vars)?;
    let words: Vec<Word> = enumerate_words(sig, max_len)?.collect();
    let k = rep.domain.len();
    let results: Vec<(u64, Option<Counterexample>)> = words
        .par_iter()
        .map(|w| check_word(&source, &graph, k, rep, sig, w))
        .collect();
    let mut observed = 0;
    let mut counterexample = None;
    for (max_pre, cx) in results {
        observed = observed.max(max_pre);
        if counterexample.is_none() {
            counterexample = cx;
        }
    }
    Ok(ReparamCheck {
        ok: counterexample.is_none(),
        words_checked: words.len() as u64,
        max_len,
        observed_max_preimage: observed,
        counterexample,
    })
}

fn check_word(
    source: &Prepared,
    graph: &Prepared,
    k: usize,
    rep: &RepCandidate<'_>,
    sig: &Signature,
    w: &Word,
) -> (u64, Option<Counterexample>) {
    let labels: Vec<u32> = w.0.iter().map(|l| l.0).collect();
    let n = labels.len();
    let d = rep.image.len();
    let all: Vec<usize> = (0..n).collect();
    let mut images: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut preimages: FxHashMap<Vec<usize>, u64> = FxHashMap::default();
    for_each_tuple(&all, k + d, |t| {
        if graph.eval_tuple(&labels, t, &[]) {
            images.entry(t[..k].to_vec()).or_default().push(t[k..].to_vec());
            *preimages.entry(t[k..].to_vec()).or_default() += 1;
        }
    });
    let observed = preimages.values().copied().max().unwrap_or(0);
    let cx = |violation, domain_tuple: &[usize], image_tuples: Vec<Vec<usize>>| Counterexample {
        violation,
        word: sig.render_word(w),
        domain_tuple: domain_tuple.to_vec(),
        image_tuples,
    };
    let mut found = None;
    for_each_tuple(&all, k, |x| {
        if found.is_some() {
            return;
        }
        let holds = source.eval_tuple(&labels, x, &[]);
        let ys = images.get(x).cloned().unwrap_or_default();
        found = if ys.len() > 1 {
            Some(cx(Violation::NotFunctional, x, ys))
        } else if holds && ys.is_empty() {
            Some(cx(Violation::MissingImage, x, ys))
        } else if !holds && !ys.is_empty() {
            Some(cx(Violation::SpuriousImage, x, ys))
        } else if ys.iter().any(|y| y.iter().any(|c| !x.contains(c))) {
            Some(cx(Violation::NotCanonical, x, ys))
        } else if ys
            .first()
            .is_some_and(|y| BigUint::from(preimages[y]) > *rep.bound)
        {
            Some(cx(Violation::PreimageBound, x, ys))
        } else {
            None
        };
    });
    (observed, found)
}

/// Number of tuples over `vars` satisfying `f` within `restrict^k`.
pub fn count_tuples(f: &Formula, vars: &[Var], w: &Word, restrict: Option<&[usize]>) -> Result<usize> {
    Ok(satisfying_tuples_over(f, vars, w, restrict)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(k: usize) -> Signature {
        Signature::standard(k)
    }

    fn p(text: &str, k: usize) -> Formula {
        Formula::parse(text, &sig(k)).unwrap()
    }

    fn word(text: &str, k: usize) -> Word {
        sig(k).parse_word(text).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let a = Assignment::positions(&["x".into()], &[0]);
        assert!(evaluate(&p("P1(x)", 1), &word("[P1]", 1), &a).unwrap());
        let empty = Assignment::default();
        assert!(evaluate(&p("EX X. all x. X(x)", 1), &word("[., P1, .]", 1), &empty).unwrap());
        assert!(evaluate(&p("atleast 2 x. P1(x)", 1), &word("[P1, ., P1]", 1), &empty).unwrap());
        assert!(!evaluate(&p("atleast 3 x. P1(x)", 1), &word("[P1, ., P1]", 1), &empty).unwrap());
        assert!(matches!(
            evaluate(&p("P1(x)", 1), &word("[P1]", 1), &empty),
            Err(Error::Unassigned(_))
        ));
    }

    #[test]
    fn free_set_variables() {
        let mut a = Assignment::positions(&["x".into()], &[1]);
        a.so.insert("X".into(), [1].into());
        assert!(evaluate(&p("X(x)", 0), &word("[., .]", 0), &a).unwrap());
        a.so.insert("X".into(), [0].into());
        assert!(!evaluate(&p("X(x)", 0), &word("[., .]", 0), &a).unwrap());
    }

    #[test]
    fn tuples() {
        let w = word("[., ., .]", 0);
        let f = p("x<y", 0);
        assert_eq!(
            satisfying_tuples(&f, &w, None).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(satisfying_tuples(&f, &w, Some(&[0, 2])).unwrap(), vec![vec![0, 2]]);
        assert!(satisfying_tuples(&p("x<x", 0), &w, None).unwrap().is_empty());
        assert_eq!(satisfying_tuples(&p("true", 0), &w, None).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(enumerate_words(&sig(0), 2).unwrap().count(), 3);
        let words: Vec<String> = enumerate_words(&sig(1), 1)
            .unwrap()
            .map(|w| sig(1).render_word(&w))
            .collect();
        assert_eq!(words, ["[]", "[.]", "[P1]"]);
        assert_eq!(enumerate_words(&sig(1), 3).unwrap().count(), 15);
        let shortlex: Vec<String> = enumerate_words(&sig(1), 2)
            .unwrap()
            .map(|w| sig(1).render_word(&w))
            .collect();
        assert_eq!(shortlex[3..], ["[., .]", "[., P1]", "[P1, .]", "[P1, P1]"]);
        assert!(enumerate_words_with(&sig(2), 10, 1000).is_err());
    }

    #[test]
    fn subsets_by_size() {
        let mut seen = Vec::new();
        for size in 0..=3 {
            for_each_subset(3, size, |m| {
                seen.push(m);
                true
            });
        }
        assert_eq!(seen, [0, 1, 2, 4, 3, 5, 6, 7]);
    }

    #[test]
    fn reparameterization_checks() {
        let f = p("P1(x)", 1);
        let g = p("P1(x) & y=x", 1);
        let domain = vec!["x".to_string()];
        let image = vec!["y".to_string()];
        let one = BigUint::from(1u32);
        let rep = RepCandidate {
            source: &f,
            graph: &g,
            domain: &domain,
            image: &image,
            bound: &one,
        };
        let r = check_reparameterization(&rep, &sig(1), 4).unwrap();
        assert!(r.ok);
        assert_eq!(r.observed_max_preimage, 1);
        assert_eq!(r.words_checked, 31);

        // Dropped guard: the graph now also holds where P1 fails.
        let broken = p("y=x", 1);
        let bad = RepCandidate {
            graph: &broken,
            ..rep.clone()
        };
        let r = check_reparameterization(&bad, &sig(1), 3).unwrap();
        assert!(!r.ok);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.violation, Violation::SpuriousImage);
        assert_eq!(cx.word, "[.]");

        let zero = BigUint::from(0u32);
        let tight = RepCandidate {
            bound: &zero,
            ..rep.clone()
        };
        let r = check_reparameterization(&tight, &sig(1), 2).unwrap();
        assert_eq!(r.counterexample.unwrap().violation, Violation::PreimageBound);

        // Image pinned to the first position.
        let pinned = p("P1(x) & ~ex z. z<y", 1);
        let moved = RepCandidate {
            graph: &pinned,
            bound: &one,
            ..rep.clone()
        };
        let r = check_reparameterization(&moved, &sig(1), 2).unwrap();
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.violation, Violation::NotCanonical);
        assert_eq!((cx.word.as_str(), cx.domain_tuple), ("[., P1]", vec![1]));
    }
}
