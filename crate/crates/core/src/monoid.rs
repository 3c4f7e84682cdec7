//! Finite type algebras extracted from compiled automata.
//!
//! Two constructions share one representation (elements are maps on a
//! finite point set, multiplied left to right):
//!
//! * [`transition_monoid`]: transformations of the DFA's states induced by
//!   words over its whole marked alphabet.
//! * [`interval_monoid`]: types of unmarked intervals. The point set is the
//!   DFA's states `Q` plus a copy `Q'` meaning "at this state, and the next
//!   letter carries the mark". A letter `a` maps `q` to `δ(q, a)` and `q'`
//!   to `δ(q, a*)`. Hence the type of a nonempty interval records both how
//!   it is read plainly and how it is read when it starts at a marked
//!   position, and only the empty word has the identity type.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::compiler::{Dfa, MarkedAlphabet};
use crate::error::{Error, Result};
use crate::word::MarkedWord;

/// Default cap on the number of monoid elements.
pub const DEFAULT_ELEMENT_BUDGET: usize = 100_000;

const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonoidElement(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidKind {
    Transition,
    Interval,
}

#[derive(Debug, Clone)]
pub struct TypeMonoid {
    kind: MonoidKind,
    alphabet: MarkedAlphabet,
    maps: Vec<Box<[u32]>>,
    index: FxHashMap<Box<[u32]>, u32>,
    witness: Vec<Vec<u32>>,
    unmarked: Vec<bool>,
    nonempty: Vec<bool>,
    letter_image: Vec<Option<MonoidElement>>,
    table: Option<Vec<u32>>,
    /// Source automaton: states, initial state, accepting flags.
    states: usize,
    init: u32,
    accepting: Vec<bool>,
}

/// Breadth-first closure of `generators` (as `(letter, map)`) from the
/// identity. Returns maps, shortest witnesses and whether the identity is
/// hit by a nonempty word.
fn closure(
    points: usize,
    generators: &[(u32, Vec<u32>)],
    budget: usize,
    what: &str,
) -> Result<(Vec<Box<[u32]>>, Vec<Vec<u32>>, bool)> {
    let identity: Box<[u32]> = (0..points as u32).collect();
    let mut index: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
    index.insert(identity.clone(), 0);
    let mut maps = vec![identity];
    let mut witness = vec![Vec::new()];
    let mut identity_nonempty = false;
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (letter, g) in generators {
            let m: Box<[u32]> = maps[e].iter().map(|&p| g[p as usize]).collect();
            match index.get(&m) {
                Some(0) => identity_nonempty = true,
                Some(_) => {}
                None => {
                    let id = maps.len();
                    if id >= budget {
                        return Err(Error::ResourceLimit {
                            what: "monoid elements",
                            limit: budget,
                            context: what.to_string(),
                        });
                    }
                    index.insert(m.clone(), id as u32);
                    maps.push(m);
                    let mut w = witness[e].clone();
                    w.push(*letter);
                    witness.push(w);
                    queue.push_back(id);
                }
            }
        }
    }
    Ok((maps, witness, identity_nonempty))
}

/// Transition monoid of `d` over its full alphabet. Elements generated by
/// unmarked letters come first and carry unmarked witnesses.
pub fn transition_monoid(d: &Dfa) -> Result<TypeMonoid> {
    transition_monoid_with(d, DEFAULT_ELEMENT_BUDGET)
}

pub fn transition_monoid_with(d: &Dfa, budget: usize) -> Result<TypeMonoid> {
    let n = d.states();
    let alphabet = d.alphabet().clone();
    let gen = |a: u32| (a, (0..n as u32).map(|q| d.raw().next(q, a)).collect::<Vec<_>>());
    let unmarked_gens: Vec<_> = alphabet.unmarked_letters().map(gen).collect();
    let all_gens: Vec<_> = (0..alphabet.size()).map(gen).collect();
    let (sub_maps, sub_witness, sub_id_nonempty) =
        closure(n, &unmarked_gens, budget, "unmarked transition monoid")?;
    let (full_maps, full_witness, full_id_nonempty) =
        closure(n, &all_gens, budget, "transition monoid")?;
    let mut maps = sub_maps;
    let mut witness = sub_witness;
    let sub_len = maps.len();
    let mut index: FxHashMap<Box<[u32]>, u32> =
        maps.iter().cloned().zip(0..).collect();
    for (m, w) in full_maps.into_iter().zip(full_witness) {
        if !index.contains_key(&m) {
            index.insert(m.clone(), maps.len() as u32);
            maps.push(m);
            witness.push(w);
        }
    }
    let size = maps.len();
    let unmarked = (0..size).map(|i| i < sub_len).collect();
    let mut nonempty = vec![true; size];
    // The identity is nonempty-realizable in its own sub-alphabet only.
    nonempty[0] = sub_id_nonempty || (sub_len == 0 && full_id_nonempty);
    let letter_image = (0..alphabet.size())
        .map(|a| {
            let m: Box<[u32]> = (0..n as u32).map(|q| d.raw().next(q, a)).collect();
            Some(MonoidElement(index[&m] as usize))
        })
        .collect();
    Ok(TypeMonoid::assemble(
        MonoidKind::Transition,
        d,
        maps,
        index,
        witness,
        unmarked,
        nonempty,
        letter_image,
    ))
}

/// Monoid of interval types of `d` (see the module documentation). The
/// automaton must carry at least one mark.
pub fn interval_monoid(d: &Dfa) -> Result<TypeMonoid> {
    interval_monoid_with(d, DEFAULT_ELEMENT_BUDGET)
}

pub fn interval_monoid_with(d: &Dfa, budget: usize) -> Result<TypeMonoid> {
    let alphabet = d.alphabet().clone();
    if alphabet.marks == 0 {
        return Err(Error::AlphabetMismatch(
            "interval types need an alphabet with marks".into(),
        ));
    }
    let n = d.states();
    let mark = 1u32 << alphabet.base.len();
    let gens: Vec<(u32, Vec<u32>)> = alphabet
        .unmarked_letters()
        .map(|a| {
            let plain = (0..n as u32).map(|q| d.raw().next(q, a));
            let first = (0..n as u32).map(|q| d.raw().next(q, a | mark));
            (a, plain.chain(first).collect())
        })
        .collect();
    let (maps, witness, identity_nonempty) = closure(2 * n, &gens, budget, "interval monoid")?;
    debug_assert!(!identity_nonempty, "only the empty interval has the identity type");
    let size = maps.len();
    let index: FxHashMap<Box<[u32]>, u32> = maps.iter().cloned().zip(0..).collect();
    let mut letter_image = vec![None; alphabet.size() as usize];
    for (a, g) in &gens {
        letter_image[*a as usize] = Some(MonoidElement(index[g.as_slice()] as usize));
    }
    let mut nonempty = vec![true; size];
    nonempty[0] = identity_nonempty;
    Ok(TypeMonoid::assemble(
        MonoidKind::Interval,
        d,
        maps,
        index,
        witness,
        vec![true; size],
        nonempty,
        letter_image,
    ))
}

impl TypeMonoid {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: MonoidKind,
        d: &Dfa,
        maps: Vec<Box<[u32]>>,
        index: FxHashMap<Box<[u32]>, u32>,
        witness: Vec<Vec<u32>>,
        unmarked: Vec<bool>,
        nonempty: Vec<bool>,
        letter_image: Vec<Option<MonoidElement>>,
    ) -> Self {
        let mut m = TypeMonoid {
            kind,
            alphabet: d.alphabet().clone(),
            maps,
            index,
            witness,
            unmarked,
            nonempty,
            letter_image,
            table: None,
            states: d.states(),
            init: d.initial(),
            accepting: (0..d.states() as u32).map(|q| d.is_accepting(q)).collect(),
        };
        let n = m.size();
        if n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(m.compose(a, b) as u32);
                }
            }
            m.table = Some(table);
        }
        m
    }

    fn compose(&self, a: usize, b: usize) -> usize {
        let mb = &self.maps[b];
        let m: Box<[u32]> = self.maps[a].iter().map(|&p| mb[p as usize]).collect();
        self.index[&m] as usize
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    pub fn alphabet(&self) -> &MarkedAlphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.maps.len()
    }

    pub fn identity(&self) -> MonoidElement {
        MonoidElement(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = MonoidElement> {
        (0..self.size()).map(MonoidElement)
    }

    fn check(&self, e: MonoidElement) -> Result<usize> {
        if e.0 < self.size() {
            Ok(e.0)
        } else {
            Err(Error::ForeignElement(e.0))
        }
    }

    pub fn multiply(&self, a: MonoidElement, b: MonoidElement) -> Result<MonoidElement> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(MonoidElement(self.mul(a, b)))
    }

    #[inline]
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.size() + b] as usize,
            None => self.compose(a, b),
        }
    }

    /// Image of a letter of the alphabet (unmarked letters only for
    /// interval monoids).
    pub fn letter_image(&self, letter: u32) -> Result<MonoidElement> {
        self.letter_image
            .get(letter as usize)
            .copied()
            .flatten()
            .ok_or(Error::LetterOutOfRange(letter))
    }

    /// Image of a word given as alphabet letter indices.
    pub fn image(&self, word: &[u32]) -> Result<MonoidElement> {
        let mut e = 0;
        for &a in word {
            e = self.mul(e, self.letter_image(a)?.0);
        }
        Ok(MonoidElement(e))
    }

    /// Shortest (then shortlex-least) word realizing `e`.
    pub fn witness(&self, e: MonoidElement) -> Result<&[u32]> {
        Ok(&self.witness[self.check(e)?])
    }

    pub fn render_witness(&self, e: MonoidElement) -> Result<String> {
        Ok(self.alphabet.render_word(self.witness(e)?))
    }

    /// Whether `e` lies in the submonoid generated by unmarked letters.
    pub fn is_unmarked(&self, e: MonoidElement) -> Result<bool> {
        Ok(self.unmarked[self.check(e)?])
    }

    /// Whether some nonempty word over the generating sub-alphabet maps to
    /// `e`.
    pub fn nonempty_realizable(&self, e: MonoidElement) -> Result<bool> {
        Ok(self.nonempty[self.check(e)?])
    }

    pub fn is_idempotent(&self, e: MonoidElement) -> Result<bool> {
        let i = self.check(e)?;
        Ok(self.mul(i, i) == i)
    }

    /// All idempotents of the unmarked submonoid (all elements for interval
    /// monoids), optionally restricted to nonempty-realizable ones.
    pub fn idempotents(&self, require_nonempty: bool) -> Vec<MonoidElement> {
        (0..self.size())
            .filter(|&i| self.unmarked[i] && self.mul(i, i) == i)
            .filter(|&i| !require_nonempty || self.nonempty[i])
            .map(MonoidElement)
            .collect()
    }

    /// Nonempty idempotents ordered by witness length, then index.
    fn pumping_candidates(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.idempotents(true).into_iter().map(|e| e.0).collect();
        c.sort_by_key(|&i| (self.witness[i].len(), i));
        c
    }

    /// Whether some nonempty idempotent `e` has `tau_b·e = tau_b` and
    /// `e·tau_e = tau_e`; returns the first such `e` by witness length,
    /// then index.
    pub fn is_pumpable(
        &self,
        tau_b: MonoidElement,
        tau_e: MonoidElement,
    ) -> Result<(bool, Option<MonoidElement>)> {
        let (b, e) = (self.check(tau_b)?, self.check(tau_e)?);
        let found = self
            .pumping_candidates()
            .into_iter()
            .find(|&i| self.mul(b, i) == b && self.mul(i, e) == e);
        Ok((found.is_some(), found.map(MonoidElement)))
    }

    /// Precomputed pumpability for all pairs.
    pub fn pumpability(&self) -> Pumpability {
        let candidates = self.pumping_candidates();
        let words = candidates.len().div_ceil(64).max(1);
        let n = self.size();
        let mut right = vec![0u64; n * words];
        let mut left = vec![0u64; n * words];
        for (j, &e) in candidates.iter().enumerate() {
            for a in 0..n {
                if self.mul(a, e) == a {
                    right[a * words + j / 64] |= 1 << (j % 64);
                }
                if self.mul(e, a) == a {
                    left[a * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        Pumpability {
            words,
            right,
            left,
            candidates,
        }
    }

    /// Dump: header, one line per element, then the multiplication table.
    pub fn dump(&self) -> String {
        let n = self.size();
        let mut out = format!("monoid size={n}\n");
        for i in 0..n {
            let _ = writeln!(
                out,
                "{i} witness={} idempotent={} nonempty={}",
                self.alphabet.render_word(&self.witness[i]),
                (self.mul(i, i) == i) as u8,
                self.nonempty[i] as u8
            );
        }
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    // Interval-type evaluation.

    pub(crate) fn dfa_states(&self) -> usize {
        self.states
    }

    pub(crate) fn dfa_init(&self) -> u32 {
        self.init
    }

    pub(crate) fn dfa_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    /// State reached from `q` by reading the interval of type `e` plainly.
    #[inline]
    pub(crate) fn apply_plain(&self, e: usize, q: u32) -> u32 {
        self.maps[e][q as usize]
    }

    /// State reached from `q` by reading a nonempty interval of type `e`
    /// whose first letter is marked; `None` for the empty interval.
    #[inline]
    pub(crate) fn apply_marked(&self, e: usize, q: u32) -> Option<u32> {
        let r = self.maps[e][self.states + q as usize];
        ((r as usize) < self.states).then_some(r)
    }

    /// Whether the source automaton accepts words whose segments have the
    /// given interval types (prefix first, then one per mark).
    pub fn accepts_types(&self, types: &[MonoidElement]) -> Result<bool> {
        if self.kind != MonoidKind::Interval {
            return Err(Error::AlphabetMismatch("segment types need an interval monoid".into()));
        }
        let (first, rest) = types
            .split_first()
            .ok_or_else(|| Error::Arity("empty type tuple".into()))?;
        let mut q = self.apply_plain(self.check(*first)?, self.init);
        for t in rest {
            match self.apply_marked(self.check(*t)?, q) {
                Some(r) => q = r,
                None => return Ok(false),
            }
        }
        Ok(self.accepting[q as usize])
    }

    /// Interval types of the unmarked prefix and of each segment starting at
    /// a mark (inclusive) up to the next mark.
    pub fn segment_types(&self, w: &MarkedWord) -> Result<Vec<MonoidElement>> {
        if self.kind != MonoidKind::Interval {
            return Err(Error::AlphabetMismatch("segment types need an interval monoid".into()));
        }
        let mut types = vec![0usize];
        for (l, &marked) in w.word.0.iter().zip(&w.marks) {
            if marked {
                types.push(0);
            }
            let img = self.letter_image(self.alphabet.encode(*l, false)?)?.0;
            let last = types.last_mut().expect("prefix type present");
            *last = self.mul(*last, img);
        }
        Ok(types.into_iter().map(MonoidElement).collect())
    }
}

/// Pumpability of all pairs, from the stabilizers of each pumping
/// candidate.
#[derive(Debug, Clone)]
pub struct Pumpability {
    words: usize,
    right: Vec<u64>,
    left: Vec<u64>,
    candidates: Vec<usize>,
}

impl Pumpability {
    #[inline]
    pub fn pumpable(&self, tau_b: usize, tau_e: usize) -> bool {
        let r = &self.right[tau_b * self.words..(tau_b + 1) * self.words];
        let l = &self.left[tau_e * self.words..(tau_e + 1) * self.words];
        r.iter().zip(l).any(|(x, y)| x & y != 0)
    }

    /// Right-stabilizer row of `tau_b`: which pumping candidates it absorbs
    /// on the right. Pumpability of `(tau_b, tau_e)` depends on `tau_b`
    /// only through this row.
    pub fn right_row(&self, tau_b: usize) -> &[u64] {
        &self.right[tau_b * self.words..(tau_b + 1) * self.words]
    }

    pub fn pumpable_row(&self, row: &[u64], tau_e: usize) -> bool {
        let l = &self.left[tau_e * self.words..(tau_e + 1) * self.words];
        row.iter().zip(l).any(|(x, y)| x & y != 0)
    }

    /// The preferred pumping idempotent of a pumpable pair.
    pub fn witness(&self, tau_b: usize, tau_e: usize) -> Option<MonoidElement> {
        let r = &self.right[tau_b * self.words..(tau_b + 1) * self.words];
        let l = &self.left[tau_e * self.words..(tau_e + 1) * self.words];
        r.iter().zip(l).enumerate().find_map(|(i, (x, y))| {
            let both = x & y;
            (both != 0).then(|| MonoidElement(self.candidates[i * 64 + both.trailing_zeros() as usize]))
        })
    }
}

/// Upper bound on the two-colour-style triangle Ramsey number for
/// `colors` colours: `B(1) = 3`, `B(c) = c·(B(c−1) − 1) + 2`.
pub fn ramsey_bound(colors: u64) -> Result<u64> {
    if colors == 0 {
        return Err(Error::Arity("at least one colour is required".into()));
    }
    let mut b: u64 = 3;
    for c in 2..=colors {
        b = c
            .checked_mul(b - 1)
            .and_then(|x| x.checked_add(2))
            .ok_or_else(|| Error::Overflow(format!("ramsey bound for {colors} colours")))?;
    }
    Ok(b)
}

/// [`ramsey_bound`] without overflow.
pub fn ramsey_bound_big(colors: u64) -> Result<BigUint> {
    if colors == 0 {
        return Err(Error::Arity("at least one colour is required".into()));
    }
    let mut b = BigUint::from(3u32);
    for c in 2..=colors {
        b = BigUint::from(c) * (b - 1u32) + 2u32;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::formula::Formula;
    use crate::word::{Letter, Signature, Word};

    fn sig(k: usize) -> Signature {
        Signature::standard(k)
    }

    fn dfa(text: &str, vars: &[&str], k: usize) -> Dfa {
        let f = Formula::parse(text, &sig(k)).unwrap();
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        compile(&f, &v, &sig(k)).unwrap()
    }

    const EVEN: &str = "EX X. (all x. (~ex y. y<x) -> X(x)) & (all x. all y. (x<y & ~ex z. (x<z & z<y)) -> ((X(x) & ~X(y)) | (~X(x) & X(y)))) & (all x. (~ex y. x<y) -> ~X(x))";

    #[test]
    fn parity_monoid() {
        let m = transition_monoid(&dfa(EVEN, &[], 0)).unwrap();
        assert_eq!(m.size(), 2);
        let flip = MonoidElement(1);
        assert_eq!(m.multiply(flip, flip).unwrap(), m.identity());
        assert_eq!(m.idempotents(false), vec![m.identity()]);
        // `aa` acts as the identity.
        assert_eq!(m.idempotents(true), vec![m.identity()]);
        assert_eq!(m.witness(flip).unwrap(), &[0]);
    }

    #[test]
    fn trivial_monoid() {
        let m = transition_monoid(&dfa("true", &[], 1)).unwrap();
        assert_eq!(m.size(), 1);
        let (ok, e) = m.is_pumpable(m.identity(), m.identity()).unwrap();
        assert!(ok);
        assert_eq!(e, Some(m.identity()));
    }

    #[test]
    fn first_position_is_not_pumpable() {
        let d = dfa("~ex y. y<x", &["x"], 0);
        let m = interval_monoid(&d).unwrap();
        let w = MarkedWord::new(Word(vec![Letter(0); 3]), &[0]).unwrap();
        let t = m.segment_types(&w).unwrap();
        assert_eq!(t[0], m.identity());
        assert!(m.accepts_types(&t).unwrap());
        assert!(!m.is_pumpable(t[0], t[1]).unwrap().0);
    }

    #[test]
    fn even_prefix_is_pumpable_with_length_two() {
        // X holds exactly at the even positions, so X(x) says the prefix
        // before x has even length.
        let f = "EX X. (all z. (~ex y. y<z) -> X(z)) & (all u. all v. (u<v & ~ex w. (u<w & w<v)) -> ((X(u) & ~X(v)) | (~X(u) & X(v)))) & X(x)";
        let m = interval_monoid(&dfa(f, &["x"], 0)).unwrap();
        let w = MarkedWord::new(Word(vec![Letter(0); 4]), &[2]).unwrap();
        let t = m.segment_types(&w).unwrap();
        assert!(m.accepts_types(&t).unwrap());
        let (ok, e) = m.is_pumpable(t[0], t[1]).unwrap();
        assert!(ok);
        assert_eq!(m.witness(e.unwrap()).unwrap().len(), 2);
        // With an empty prefix nothing can be inserted before x.
        let w0 = MarkedWord::new(Word(vec![Letter(0); 2]), &[0]).unwrap();
        let t0 = m.segment_types(&w0).unwrap();
        assert!(!m.is_pumpable(t0[0], t0[1]).unwrap().0);
        let p = m.pumpability();
        assert!(p.pumpable(t[0].0, t[1].0));
        assert_eq!(p.witness(t[0].0, t[1].0), e);
    }

    #[test]
    fn ramsey_values() {
        assert_eq!(ramsey_bound(1).unwrap(), 3);
        assert_eq!(ramsey_bound(2).unwrap(), 6);
        assert_eq!(ramsey_bound(3).unwrap(), 17);
        assert!(ramsey_bound(40).is_err());
        assert_eq!(ramsey_bound_big(3).unwrap(), BigUint::from(17u32));
        assert!(ramsey_bound_big(40).unwrap() > BigUint::from(u64::MAX));
    }

    #[test]
    fn foreign_elements() {
        let m = transition_monoid(&dfa("true", &[], 0)).unwrap();
        assert!(matches!(
            m.multiply(MonoidElement(5), m.identity()),
            Err(Error::ForeignElement(5))
        ));
    }

    #[test]
    fn dump_format() {
        let m = transition_monoid(&dfa(EVEN, &[], 0)).unwrap();
        assert_eq!(
            m.dump(),
            "monoid size=2\n0 witness=[] idempotent=1 nonempty=1\n1 witness=[.] idempotent=0 nonempty=1\n0 1\n1 0\n"
        );
    }
}
