//! Signatures, letters and finite labelled words.
//!
//! A letter is the set of predicates holding at a position, stored as a bit
//! mask over the signature. Words render as `[., P1, P1+P2]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of unary predicates.
pub const MAX_PREDICATES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    predicates: Vec<String>,
}

impl Signature {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let predicates: Vec<String> = names.into_iter().map(Into::into).collect();
        if predicates.len() > MAX_PREDICATES {
            return Err(Error::Signature(format!(
                "at most {MAX_PREDICATES} predicates are supported"
            )));
        }
        for (i, p) in predicates.iter().enumerate() {
            let ok = p
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_uppercase())
                && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::Signature(format!("bad predicate name `{p}`")));
            }
            if predicates[..i].contains(p) {
                return Err(Error::Signature(format!("duplicate predicate `{p}`")));
            }
        }
        Ok(Signature { predicates })
    }

    /// `P1, …, Pk`.
    pub fn standard(k: usize) -> Self {
        Signature::new((1..=k).map(|i| format!("P{i}"))).expect("standard signature")
    }

    /// Parses a comma separated list; the empty string is the empty signature.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Signature::standard(0));
        }
        Signature::new(text.split(',').map(|s| s.trim().to_string()))
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.predicates
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p == name)
    }

    /// Number of plain letters, `2^k`.
    pub fn alphabet_size(&self) -> u32 {
        1 << self.predicates.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet_size()).map(Letter)
    }

    pub fn render_letter(&self, letter: Letter) -> String {
        if letter.0 == 0 {
            return ".".to_string();
        }
        let names: Vec<&str> = self
            .predicates
            .iter()
            .enumerate()
            .filter(|(i, _)| letter.has(*i))
            .map(|(_, n)| n.as_str())
            .collect();
        names.join("+")
    }

    pub fn parse_letter(&self, text: &str) -> Result<Letter> {
        let text = text.trim();
        if text == "." {
            return Ok(Letter(0));
        }
        let mut bits = 0u32;
        for part in text.split('+') {
            let part = part.trim();
            let i = self
                .index_of(part)
                .ok_or_else(|| Error::Word(format!("unknown predicate `{part}` in letter")))?;
            bits |= 1 << i;
        }
        Ok(Letter(bits))
    }

    pub fn render_word(&self, word: &Word) -> String {
        let parts: Vec<String> = word.0.iter().map(|l| self.render_letter(*l)).collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Word(format!("expected `[...]`, got `{text}`")))?;
        if inner.trim().is_empty() {
            return Ok(Word::empty());
        }
        inner
            .split(',')
            .map(|l| self.parse_letter(l))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render_marked(&self, letter: Letter, marked: bool) -> String {
        let base = self.render_letter(letter);
        if marked {
            format!("{base}*")
        } else {
            base
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicates.join(","))
    }
}

/// A set of predicates, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u32);

impl Letter {
    pub fn has(self, predicate: usize) -> bool {
        self.0 >> predicate & 1 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
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

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(
            std::iter::repeat(self.0.iter().copied())
                .take(times)
                .flatten()
                .collect(),
        )
    }
}

/// A word with a mark bit per position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedWord {
    pub word: Word,
    pub marks: Vec<bool>,
}

impl MarkedWord {
    /// Marks the given positions (which need not be sorted).
    pub fn new(word: Word, positions: &[usize]) -> Result<Self> {
        let mut marks = vec![false; word.len()];
        for &p in positions {
            if p >= word.len() {
                return Err(Error::Word(format!("mark position {p} out of range")));
            }
            if marks[p] {
                return Err(Error::Word(format!("position {p} marked twice")));
            }
            marks[p] = true;
        }
        Ok(MarkedWord { word, marks })
    }

    pub fn unmarked(word: Word) -> Self {
        let marks = vec![false; word.len()];
        MarkedWord { word, marks }
    }

    pub fn mark_count(&self) -> usize {
        self.marks.iter().filter(|m| **m).count()
    }

    pub fn marked_positions(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&i| self.marks[i]).collect()
    }

    pub fn render(&self, sig: &Signature) -> String {
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .zip(&self.marks)
            .map(|(l, m)| sig.render_marked(*l, *m))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_format_round_trip() {
        let sig = Signature::standard(2);
        let w = sig.parse_word("[., P1, P1+P2]").unwrap();
        assert_eq!(w, Word(vec![Letter(0), Letter(1), Letter(3)]));
        assert_eq!(sig.render_word(&w), "[., P1, P1+P2]");
        assert_eq!(sig.parse_word("[]").unwrap(), Word::empty());
        assert_eq!(sig.render_word(&Word::empty()), "[]");
    }

    #[test]
    fn bad_signatures() {
        assert!(Signature::new(["P1", "P1"]).is_err());
        assert!(Signature::new([""]).is_err());
        assert!(Signature::new(["p"]).is_err());
        assert_eq!(Signature::parse("").unwrap().len(), 0);
        assert_eq!(Signature::parse("P1, Q").unwrap().names(), ["P1", "Q"]);
    }

    #[test]
    fn unknown_letter() {
        let sig = Signature::standard(1);
        assert!(sig.parse_word("[P2]").is_err());
    }
}
