//! Complete deterministic automata over bit-vector letters `0..letters`.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawDfa {
    pub letters: u32,
    pub init: u32,
    pub accepting: Vec<bool>,
    /// `trans[q * letters + a]`.
    pub trans: Vec<u32>,
}

/// Limits applied while building automata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Budget {
    /// Maximal number of states of any intermediate automaton.
    pub max_states: usize,
    /// Maximal number of transition-table entries (states × letters).
    pub max_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 1_000_000,
            max_entries: 64_000_000,
        }
    }
}

impl Budget {
    fn check(&self, states: usize, letters: u32, context: &dyn Fn() -> String) -> Result<()> {
        if states > self.max_states {
            return Err(Error::ResourceLimit {
                what: "automaton states",
                limit: self.max_states,
                context: context(),
            });
        }
        if states.saturating_mul(letters as usize) > self.max_entries {
            return Err(Error::ResourceLimit {
                what: "transition table entries",
                limit: self.max_entries,
                context: context(),
            });
        }
        Ok(())
    }
}

impl RawDfa {
    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    #[inline]
    pub fn next(&self, q: u32, a: u32) -> u32 {
        self.trans[(q as usize) * self.letters as usize + a as usize]
    }

    /// One-state automaton accepting everything or nothing.
    pub fn constant(letters: u32, accept: bool) -> Self {
        RawDfa {
            letters,
            init: 0,
            accepting: vec![accept],
            trans: vec![0; letters as usize],
        }
    }

    pub fn from_fn(
        states: usize,
        letters: u32,
        init: u32,
        accepting: Vec<bool>,
        delta: impl Fn(u32, u32) -> u32,
    ) -> Self {
        let mut trans = Vec::with_capacity(states * letters as usize);
        for q in 0..states as u32 {
            for a in 0..letters {
                trans.push(delta(q, a));
            }
        }
        RawDfa {
            letters,
            init,
            accepting,
            trans,
        }
    }

    pub fn complement(&self) -> Self {
        RawDfa {
            letters: self.letters,
            init: self.init,
            accepting: self.accepting.iter().map(|b| !b).collect(),
            trans: self.trans.clone(),
        }
    }

    pub fn accepts(&self, word: impl IntoIterator<Item = u32>) -> bool {
        let q = word.into_iter().fold(self.init, |q, a| self.next(q, a));
        self.accepting[q as usize]
    }

    /// Reachable product under `op`.
    pub fn product(
        &self,
        other: &RawDfa,
        op: impl Fn(bool, bool) -> bool,
        budget: &Budget,
        context: &dyn Fn() -> String,
    ) -> Result<RawDfa> {
        assert_eq!(self.letters, other.letters, "product over different alphabets");
        let letters = self.letters;
        let mut index: FxHashMap<(u32, u32), u32> = FxHashMap::default();
        let mut pairs = vec![(self.init, other.init)];
        index.insert((self.init, other.init), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..letters {
                let key = (self.next(p, a), other.next(q, a));
                let next_id = pairs.len() as u32;
                let id = *index.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    next_id
                });
                trans.push(id);
            }
            budget.check(pairs.len(), letters, context)?;
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op(self.accepting[p as usize], other.accepting[q as usize]))
            .collect();
        Ok(RawDfa {
            letters,
            init: 0,
            accepting,
            trans,
        })
    }

    /// Existentially projects away letter bit `bit`, determinizing by the
    /// subset construction.
    pub fn project(&self, bit: u32, budget: &Budget, context: &dyn Fn() -> String) -> Result<RawDfa> {
        assert!(self.letters > 1 && (1 << bit) < self.letters);
        let new_letters = self.letters / 2;
        let low = (1u32 << bit) - 1;
        let widen = |a: u32| -> (u32, u32) {
            let base = (a & low) | ((a & !low) << 1);
            (base, base | 1 << bit)
        };
        let n = self.states();
        let mut seen = vec![u32::MAX; n];
        let mut index: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
        let mut subsets: Vec<Vec<u32>> = vec![vec![self.init]];
        index.insert(vec![self.init], 0);
        let mut trans = Vec::new();
        let mut scratch = Vec::new();
        let mut stamp = 0u32;
        let mut i = 0;
        while i < subsets.len() {
            for a in 0..new_letters {
                let (a0, a1) = widen(a);
                scratch.clear();
                stamp = stamp.wrapping_add(1);
                if stamp == u32::MAX {
                    seen.iter_mut().for_each(|s| *s = u32::MAX);
                    stamp = 0;
                }
                for &q in &subsets[i] {
                    for t in [self.next(q, a0), self.next(q, a1)] {
                        if seen[t as usize] != stamp {
                            seen[t as usize] = stamp;
                            scratch.push(t);
                        }
                    }
                }
                scratch.sort_unstable();
                let id = match index.get(&scratch) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        index.insert(scratch.clone(), id);
                        subsets.push(scratch.clone());
                        id
                    }
                };
                trans.push(id);
            }
            budget.check(subsets.len(), new_letters, context)?;
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Ok(RawDfa {
            letters: new_letters,
            init: 0,
            accepting,
            trans,
        })
    }

    /// Reachable part, renumbered in breadth-first discovery order.
    pub fn reachable(&self) -> RawDfa {
        let mut order = vec![u32::MAX; self.states()];
        let mut queue = VecDeque::from([self.init]);
        order[self.init as usize] = 0;
        let mut list = vec![self.init];
        while let Some(q) = queue.pop_front() {
            for a in 0..self.letters {
                let t = self.next(q, a);
                if order[t as usize] == u32::MAX {
                    order[t as usize] = list.len() as u32;
                    list.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut trans = Vec::with_capacity(list.len() * self.letters as usize);
        for &q in &list {
            for a in 0..self.letters {
                trans.push(order[self.next(q, a) as usize]);
            }
        }
        RawDfa {
            letters: self.letters,
            init: 0,
            accepting: list.iter().map(|&q| self.accepting[q as usize]).collect(),
            trans,
        }
    }

    /// Minimal complete automaton (Moore partition refinement), states in
    /// breadth-first discovery order.
    pub fn minimize(&self) -> RawDfa {
        let r = self.reachable();
        let n = r.states();
        let mut class: Vec<u32> = r.accepting.iter().map(|&b| b as u32).collect();
        let mut count = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        // Renumber so classes are dense.
        if count == 1 {
            class.iter_mut().for_each(|c| *c = 0);
        }
        loop {
            let mut index: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
            let mut next_class = Vec::with_capacity(n);
            let mut key = Vec::with_capacity(r.letters as usize + 1);
            for q in 0..n as u32 {
                key.clear();
                key.push(class[q as usize]);
                for a in 0..r.letters {
                    key.push(class[r.next(q, a) as usize]);
                }
                let fresh = index.len() as u32;
                let id = *index.entry(key.clone()).or_insert(fresh);
                next_class.push(id);
            }
            let new_count = index.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut trans = vec![0u32; count * r.letters as usize];
        let mut accepting = vec![false; count];
        for q in 0..n as u32 {
            let c = class[q as usize] as usize;
            accepting[c] = r.accepting[q as usize];
            for a in 0..r.letters {
                trans[c * r.letters as usize + a as usize] = class[r.next(q, a) as usize];
            }
        }
        RawDfa {
            letters: r.letters,
            init: class[r.init as usize],
            accepting,
            trans,
        }
        .reachable()
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// A shortest accepted word (lexicographically least among shortest).
    pub fn shortest_accepted(&self) -> Option<Vec<u32>> {
        let n = self.states();
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.init as usize] = true;
        let mut queue = VecDeque::from([self.init]);
        while let Some(q) = queue.pop_front() {
            if self.accepting[q as usize] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur as usize] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for a in 0..self.letters {
                let t = self.next(q, a);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// States from which an accepting state is reachable.
    pub fn productive(&self) -> Vec<bool> {
        let n = self.states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n as u32 {
            for a in 0..self.letters {
                rev[self.next(q, a) as usize].push(q);
            }
        }
        let mut good = self.accepting.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| good[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !good[p as usize] {
                    good[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        good
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_ctx() -> String {
        String::new()
    }

    /// Words over {0,1} whose number of 1s is even.
    fn even_ones() -> RawDfa {
        RawDfa::from_fn(2, 2, 0, vec![true, false], |q, a| q ^ a)
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // Four states counting ones mod 4 but accepting on parity only.
        let d = RawDfa::from_fn(4, 2, 0, vec![true, false, true, false], |q, a| (q + a) % 4);
        let m = d.minimize();
        assert_eq!(m.states(), 2);
        assert_eq!(m, even_ones());
    }

    #[test]
    fn product_and_complement() {
        let e = even_ones();
        let o = e.complement();
        let both = e.product(&o, |a, b| a && b, &Budget::default(), &no_ctx).unwrap();
        assert!(both.minimize().is_empty());
        let either = e.product(&o, |a, b| a || b, &Budget::default(), &no_ctx).unwrap();
        assert_eq!(either.minimize().states(), 1);
    }

    #[test]
    fn projection_of_a_bit() {
        // Letters are 2 bits; accept iff some letter has bit 1 set.
        let d = RawDfa::from_fn(2, 4, 0, vec![false, true], |q, a| q | (a >> 1));
        let p = d.project(1, &Budget::default(), &no_ctx).unwrap().minimize();
        // After projection every nonempty word can choose the bit.
        assert_eq!(p.letters, 2);
        assert!(!p.accepts([]));
        assert!(p.accepts([0]));
        assert!(p.accepts([1, 0]));
    }

    #[test]
    fn budget_is_enforced() {
        let d = RawDfa::from_fn(3, 2, 0, vec![false, false, true], |q, a| (q + a) % 3);
        let tiny = Budget {
            max_states: 1,
            max_entries: 100,
        };
        let err = d.product(&d, |a, b| a && b, &tiny, &|| "test".into());
        assert!(matches!(err, Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn shortest_word() {
        let e = even_ones().complement();
        assert_eq!(e.shortest_accepted(), Some(vec![1]));
        assert_eq!(even_ones().shortest_accepted(), Some(vec![]));
    }
}
