//! MSO to minimal DFA over the marked alphabet.
//!
//! A marked word carries one shared mark bit per letter; the `i`-th marked
//! position (left to right) stands for the `i`-th designated variable.

mod raw;
mod tracks;

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::Serialize;

pub use raw::Budget;
pub(crate) use raw::RawDfa;
pub(crate) use tracks::{compile_tracks, context_of, singleton};


use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::word::{Letter, MarkedWord, Signature};

/// Letters are the label sets of `base`, each in an unmarked and (when
/// `marks > 0`) a marked version. Letter index: `label | marked << k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedAlphabet {
    pub base: Signature,
    pub marks: usize,
}

impl MarkedAlphabet {
    pub fn new(base: Signature, marks: usize) -> Self {
        MarkedAlphabet { base, marks }
    }

    pub fn size(&self) -> u32 {
        let unmarked = self.base.alphabet_size();
        if self.marks == 0 {
            unmarked
        } else {
            2 * unmarked
        }
    }

    pub fn unmarked_letters(&self) -> impl Iterator<Item = u32> {
        0..self.base.alphabet_size()
    }

    pub fn encode(&self, letter: Letter, marked: bool) -> Result<u32> {
        if letter.0 >= self.base.alphabet_size() {
            return Err(Error::LetterOutOfRange(letter.0));
        }
        if marked && self.marks == 0 {
            return Err(Error::AlphabetMismatch(
                "marked letter over an alphabet without marks".into(),
            ));
        }
        Ok(letter.0 | (marked as u32) << self.base.len())
    }

    pub fn decode(&self, index: u32) -> (Letter, bool) {
        let k = self.base.len();
        (Letter(index & ((1 << k) - 1)), index >> k & 1 == 1)
    }

    pub fn render_letter(&self, index: u32) -> String {
        let (l, m) = self.decode(index);
        self.base.render_marked(l, m)
    }

    pub fn parse_letter(&self, text: &str) -> Result<u32> {
        let text = text.trim();
        let (base, marked) = match text.strip_suffix('*') {
            Some(b) => (b, true),
            None => (text, false),
        };
        self.encode(self.base.parse_letter(base)?, marked)
    }

    pub fn render_word(&self, word: &[u32]) -> String {
        let parts: Vec<String> = word.iter().map(|&a| self.render_letter(a)).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn encode_word(&self, w: &MarkedWord) -> Result<Vec<u32>> {
        w.word
            .0
            .iter()
            .zip(&w.marks)
            .map(|(l, m)| self.encode(*l, *m))
            .collect()
    }

    pub fn decode_word(&self, word: &[u32]) -> MarkedWord {
        let (letters, marks) = word.iter().map(|&a| self.decode(a)).unzip();
        MarkedWord {
            word: crate::word::Word(letters),
            marks,
        }
    }
}

/// Minimal complete DFA over a marked alphabet, states numbered in
/// breadth-first discovery order from the initial state `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: MarkedAlphabet,
    raw: RawDfa,
}

impl Dfa {
    pub(crate) fn from_raw(alphabet: MarkedAlphabet, raw: RawDfa) -> Self {
        debug_assert_eq!(raw.letters, alphabet.size());
        Dfa { alphabet, raw }
    }

    pub(crate) fn raw(&self) -> &RawDfa {
        &self.raw
    }

    pub fn alphabet(&self) -> &MarkedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.raw.states()
    }

    pub fn initial(&self) -> u32 {
        self.raw.init
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.raw.accepting[q as usize]
    }

    pub fn accepting_states(&self) -> Vec<u32> {
        (0..self.states() as u32).filter(|&q| self.is_accepting(q)).collect()
    }

    pub fn next(&self, q: u32, letter: u32) -> Result<u32> {
        if letter >= self.raw.letters {
            return Err(Error::LetterOutOfRange(letter));
        }
        Ok(self.raw.next(q, letter))
    }

    pub fn run(&self, w: &MarkedWord) -> Result<bool> {
        let letters = self.alphabet.encode_word(w)?;
        Ok(self.raw.accepts(letters))
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn shortest_accepted(&self) -> Option<MarkedWord> {
        self.raw
            .shortest_accepted()
            .map(|w| self.alphabet.decode_word(&w))
    }

    pub fn complement(&self) -> Dfa {
        Dfa::from_raw(self.alphabet.clone(), self.raw.complement())
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{} marks over {} vs {} marks over {}",
                self.alphabet.marks, self.alphabet.base, other.alphabet.marks, other.alphabet.base
            )));
        }
        let diff = self.raw.product(
            &other.raw,
            |a, b| a != b,
            &Budget::default(),
            &|| "equivalence check".to_string(),
        )?;
        Ok(diff.is_empty())
    }

    /// Textual exchange format: a header line, then `src letter dst` lines.
    pub fn to_text(&self) -> String {
        let letters: Vec<String> = (0..self.raw.letters)
            .map(|a| self.alphabet.render_letter(a))
            .collect();
        let accepting: Vec<String> = self
            .accepting_states()
            .iter()
            .map(|q| q.to_string())
            .collect();
        let mut out = format!(
            "dfa states={} init={} accepting={} alphabet={}\n",
            self.states(),
            self.initial(),
            accepting.join(","),
            letters.join(",")
        );
        for q in 0..self.states() as u32 {
            for a in 0..self.raw.letters {
                let _ = writeln!(out, "{q} {} {}", letters[a as usize], self.raw.next(q, a));
            }
        }
        out
    }

    /// Parses the format written by [`Dfa::to_text`]. The number of marks is
    /// not recorded in the text; `marks` restores it.
    pub fn from_text(text: &str, sig: &Signature, marks: usize) -> Result<Dfa> {
        let alphabet = MarkedAlphabet::new(sig.clone(), marks);
        let bad = |line: usize, msg: String| Error::SpecFile { line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header".into()))?;
        let mut states = None;
        let mut init = None;
        let mut accepting = Vec::new();
        let mut header_letters = Vec::new();
        for field in header.split_whitespace().skip(1) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(1, format!("malformed field `{field}`")))?;
            let num = |v: &str| v.parse::<u32>().map_err(|_| bad(1, format!("bad number `{v}`")));
            match key {
                "states" => states = Some(num(value)? as usize),
                "init" => init = Some(num(value)?),
                "accepting" => {
                    for q in value.split(',').filter(|s| !s.is_empty()) {
                        accepting.push(num(q)?);
                    }
                }
                "alphabet" => {
                    for l in value.split(',') {
                        header_letters.push(alphabet.parse_letter(l)?);
                    }
                }
                _ => return Err(bad(1, format!("unknown field `{key}`"))),
            }
        }
        let n = states.ok_or_else(|| bad(1, "missing states".into()))?;
        let init = init.ok_or_else(|| bad(1, "missing init".into()))?;
        let size = alphabet.size();
        let mut sorted = header_letters.clone();
        sorted.sort_unstable();
        if sorted != (0..size).collect::<Vec<_>>() {
            return Err(Error::AlphabetMismatch(
                "header alphabet does not match the signature".into(),
            ));
        }
        let mut trans = vec![u32::MAX; n * size as usize];
        for (i, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(i + 1, "expected `src letter dst`".into()));
            }
            let p = |s: &str| {
                s.parse::<u32>()
                    .ok()
                    .filter(|&q| (q as usize) < n)
                    .ok_or_else(|| bad(i + 1, format!("bad state `{s}`")))
            };
            let (src, dst) = (p(parts[0])?, p(parts[2])?);
            let a = alphabet.parse_letter(parts[1])?;
            trans[src as usize * size as usize + a as usize] = dst;
        }
        if trans.contains(&u32::MAX) || init as usize >= n {
            return Err(bad(0, "transition function is not total".into()));
        }
        let mut acc = vec![false; n];
        for q in accepting {
            *acc.get_mut(q as usize).ok_or_else(|| bad(1, format!("bad state {q}")))? = true;
        }
        Ok(Dfa::from_raw(
            alphabet,
            RawDfa {
                letters: size,
                init,
                accepting: acc,
                trans,
            },
        ))
    }
}

/// Compiles `f` with default limits.
pub fn compile(f: &Formula, marked_vars: &[Var], sig: &Signature) -> Result<Dfa> {
    compile_with(f, marked_vars, sig, &Budget::default())
}

pub fn compile_with(
    f: &Formula,
    marked_vars: &[Var],
    sig: &Signature,
    budget: &Budget,
) -> Result<Dfa> {
    f.check(sig)?;
    let (fo, so) = f.free_variables();
    if let Some(s) = so.first() {
        return Err(Error::FreeSecondOrder(s.clone()));
    }
    if let Some(x) = fo.iter().find(|x| !marked_vars.contains(x)) {
        return Err(Error::UnmarkedVariable(x.clone()));
    }
    for (i, v) in marked_vars.iter().enumerate() {
        if marked_vars[..i].contains(v) {
            return Err(Error::VariableOrder(format!("`{v}` is marked twice")));
        }
    }
    let k = sig.len();
    let m = marked_vars.len();
    let tracks = compile_tracks(f, k, marked_vars, budget)?;
    let alphabet = MarkedAlphabet::new(sig.clone(), m);
    if m == 0 {
        return Ok(Dfa::from_raw(alphabet, tracks.minimize()));
    }
    Ok(Dfa::from_raw(alphabet, share_marks(&tracks, k, m, budget, f)?))
}

/// Product of a track automaton with a mark counter: the `c`-th marked
/// letter sets the track of variable `c`.
fn share_marks(tracks: &RawDfa, k: usize, m: usize, budget: &Budget, f: &Formula) -> Result<RawDfa> {
    let letters = 2u32 << k;
    let label_mask = (1u32 << k) - 1;
    let mut index: FxHashMap<(u32, usize), u32> = FxHashMap::default();
    // `None` is the sink for a surplus mark.
    let mut states: Vec<Option<(u32, usize)>> = vec![None, Some((tracks.init, 0))];
    index.insert((tracks.init, 0), 1);
    let mut trans: Vec<u32> = vec![0; letters as usize];
    let mut i = 1;
    while i < states.len() {
        let (q, c) = states[i].expect("only the sink is empty");
        for a in 0..letters {
            let label = a & label_mask;
            let target = if a >> k & 1 == 0 {
                Some((tracks.next(q, label), c))
            } else if c < m {
                Some((tracks.next(q, label | 1 << (k + c)), c + 1))
            } else {
                None
            };
            let id = match target {
                None => 0,
                Some(key) => {
                    let fresh = states.len() as u32;
                    *index.entry(key).or_insert_with(|| {
                        states.push(Some(key));
                        fresh
                    })
                }
            };
            trans.push(id);
        }
        if states.len() > budget.max_states {
            return Err(Error::ResourceLimit {
                what: "automaton states",
                limit: budget.max_states,
                context: context_of(f),
            });
        }
        i += 1;
    }
    let accepting = states
        .iter()
        .map(|s| matches!(s, Some((q, c)) if *c == m && tracks.accepting[*q as usize]))
        .collect();
    Ok(RawDfa {
        letters,
        init: 1,
        accepting,
        trans,
    }
    .minimize())
}

pub fn dfa_empty(d: &Dfa) -> bool {
    d.is_empty()
}

pub fn dfa_equivalent(a: &Dfa, b: &Dfa) -> Result<bool> {
    a.equivalent(b)
}

pub fn run(d: &Dfa, w: &MarkedWord) -> Result<bool> {
    d.run(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn sig(k: usize) -> Signature {
        Signature::standard(k)
    }

    fn f(text: &str, k: usize) -> Formula {
        Formula::parse(text, &sig(k)).unwrap()
    }

    fn vars(v: &[&str]) -> Vec<Var> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn mw(letters: &[u32], marks: &[usize]) -> MarkedWord {
        MarkedWord::new(Word(letters.iter().map(|&l| Letter(l)).collect()), marks).unwrap()
    }

    #[test]
    fn atomic_predicate() {
        let d = compile(&f("P1(x)", 1), &vars(&["x"]), &sig(1)).unwrap();
        assert!(d.run(&mw(&[1], &[0])).unwrap());
        assert!(!d.run(&mw(&[0], &[0])).unwrap());
        assert!(!d.run(&mw(&[1, 1], &[0, 1])).unwrap());
        assert!(!d.run(&mw(&[1], &[])).unwrap());
    }

    #[test]
    fn closed_formula_rejects_empty_word() {
        let d = compile(&f("ex x. P1(x)", 1), &[], &sig(1)).unwrap();
        assert_eq!(d.alphabet().size(), 2);
        assert!(!d.run(&mw(&[], &[])).unwrap());
        assert!(d.run(&mw(&[0, 1], &[])).unwrap());
        assert!(!d.run(&mw(&[0, 0], &[])).unwrap());
    }

    #[test]
    fn emptiness() {
        let x = vars(&["x"]);
        assert!(dfa_empty(&compile(&f("x<x", 0), &x, &sig(0)).unwrap()));
        assert!(!dfa_empty(&compile(&f("ex x. x=x", 0), &[], &sig(0)).unwrap()));
        assert!(dfa_empty(&compile(&f("P1(x) & ~P1(x)", 1), &x, &sig(1)).unwrap()));
    }

    #[test]
    fn equivalence() {
        let xy = vars(&["x", "y"]);
        let a = compile(&f("x<y", 0), &xy, &sig(0)).unwrap();
        let b = compile(&f("~(y<x) & ~(x=y)", 0), &xy, &sig(0)).unwrap();
        assert!(dfa_equivalent(&a, &b).unwrap());
        let renamed = compile(&f("u<v", 0), &vars(&["u", "v"]), &sig(0)).unwrap();
        assert!(dfa_equivalent(&a, &renamed).unwrap());
        let p = compile(&f("P1(x)", 1), &vars(&["x"]), &sig(1)).unwrap();
        let np = compile(&f("~P1(x)", 1), &vars(&["x"]), &sig(1)).unwrap();
        assert!(!dfa_equivalent(&p, &np).unwrap());
        assert!(dfa_equivalent(&a, &p).is_err());
    }

    #[test]
    fn second_order_parity() {
        // Alternating set starting inside at the first position and ending
        // outside at the last: exactly the even lengths.
        let even = f(
            "EX X. (all x. (~ex y. y<x) -> X(x)) & (all x. all y. (x<y & ~ex z. (x<z & z<y)) -> ((X(x) & ~X(y)) | (~X(x) & X(y)))) & (all x. (~ex y. x<y) -> ~X(x))",
            0,
        );
        let d = compile(&even, &[], &sig(0)).unwrap();
        for n in 0..8 {
            assert_eq!(d.run(&mw(&vec![0; n], &[])).unwrap(), n % 2 == 0, "length {n}");
        }
        assert_eq!(d.states(), 2);
    }

    #[test]
    fn minimal_and_text_round_trip() {
        let d = compile(&f("x<y & P1(x)", 1), &vars(&["x", "y"]), &sig(1)).unwrap();
        assert_eq!(d.raw().minimize(), *d.raw());
        let text = d.to_text();
        assert!(text.starts_with("dfa states="));
        assert!(text.contains("alphabet=.,P1,.*,P1*"));
        let back = Dfa::from_text(&text, &sig(1), 2).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn free_variables_are_checked() {
        assert!(matches!(
            compile(&f("x<y", 0), &vars(&["x"]), &sig(0)),
            Err(Error::UnmarkedVariable(_))
        ));
        assert!(matches!(
            compile(&f("X(x)", 0), &vars(&["x"]), &sig(0)),
            Err(Error::FreeSecondOrder(_))
        ));
    }

    #[test]
    fn budget_names_the_subformula() {
        let tiny = Budget {
            max_states: 2,
            max_entries: 1000,
        };
        let err = compile_with(&f("ex x. ex y. x<y & P1(y)", 1), &[], &sig(1), &tiny).unwrap_err();
        match err {
            Error::ResourceLimit { context, .. } => assert!(context.contains("x<y")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
