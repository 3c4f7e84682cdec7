//! Accepting tuples of interval types and their pumpability structure.
//!
//! A tuple `(τ₀, …, τ_k)` is accepting when reading `τ₀` from the initial
//! state, then each `τᵢ` as an interval whose first letter is marked, ends
//! in an accepting state. Questions about all accepting tuples are answered
//! by layered searches over `(state, type)` pairs instead of enumeration.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::compiler::{compile_with, Dfa};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::monoid::{interval_monoid_with, MonoidElement, Pumpability, TypeMonoid};
use crate::word::Signature;
use crate::Limits;

/// One accepting tuple of segment types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Disjunct {
    pub types: Vec<MonoidElement>,
}

/// Compiled formula with its interval monoid and pumpability table.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub(crate) dfa: Dfa,
    pub(crate) monoid: TypeMonoid,
    pub(crate) pump: Pumpability,
    arity: usize,
    /// `co[i]`: states after `i` segments from which the remaining marked
    /// segments can reach acceptance.
    co: Vec<Vec<bool>>,
}

impl NormalForm {
    /// Compiles `f` with the variables `vars` as marks. `vars` must be
    /// nonempty.
    pub fn new(f: &Formula, vars: &[Var], sig: &Signature, limits: &Limits) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Arity("normal forms need at least one variable".into()));
        }
        let dfa = compile_with(f, vars, sig, &limits.dfa)?;
        let monoid = interval_monoid_with(&dfa, limits.monoid_elements)?;
        let pump = monoid.pumpability();
        let arity = vars.len();
        let nq = monoid.dfa_states();
        let mut co = vec![vec![false; nq]; arity + 1];
        for q in 0..nq {
            co[arity][q] = monoid.dfa_accepting(q as u32);
        }
        for i in (0..arity).rev() {
            for q in 0..nq as u32 {
                co[i][q as usize] = (1..monoid.size())
                    .any(|t| monoid.apply_marked(t, q).is_some_and(|r| co[i + 1][r as usize]));
            }
        }
        Ok(NormalForm {
            dfa,
            monoid,
            pump,
            arity,
            co,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn monoid(&self) -> &TypeMonoid {
        &self.monoid
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn is_satisfiable(&self) -> bool {
        let init = self.monoid.dfa_init();
        (0..self.monoid.size()).any(|t| self.co[0][self.monoid.apply_plain(t, init) as usize])
    }

    fn nonempty_types(&self) -> std::ops::Range<usize> {
        1..self.monoid.size()
    }

    /// Whether the tuple is accepting.
    pub fn accepts(&self, d: &Disjunct) -> Result<bool> {
        if d.types.len() != self.arity + 1 {
            return Err(Error::Arity(format!(
                "expected {} types, got {}",
                self.arity + 1,
                d.types.len()
            )));
        }
        self.monoid.accepts_types(&d.types)
    }

    /// Indices `i` (1-based) whose pair `(τᵢ₋₁, τᵢ)` is not pumpable.
    pub fn eliminable_pairs(&self, d: &Disjunct) -> Vec<usize> {
        (1..d.types.len())
            .filter(|&i| !self.pump.pumpable(d.types[i - 1].0, d.types[i].0))
            .collect()
    }

    /// All accepting tuples in lexicographic order; errors beyond `limit`.
    pub fn disjuncts(&self, limit: usize) -> Result<Vec<Disjunct>> {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(self.arity + 1);
        let init = self.monoid.dfa_init();
        for t0 in 0..self.monoid.size() {
            let q = self.monoid.apply_plain(t0, init);
            if !self.co[0][q as usize] {
                continue;
            }
            stack.push(t0);
            self.extend(q, &mut stack, &mut out, limit)?;
            stack.pop();
        }
        Ok(out)
    }

    fn extend(&self, q: u32, stack: &mut Vec<usize>, out: &mut Vec<Disjunct>, limit: usize) -> Result<()> {
        let i = stack.len();
        if i == self.arity + 1 {
            if out.len() >= limit {
                return Err(Error::ResourceLimit {
                    what: "normal-form disjuncts",
                    limit,
                    context: "local normal form enumeration".into(),
                });
            }
            out.push(Disjunct {
                types: stack.iter().map(|&t| MonoidElement(t)).collect(),
            });
            return Ok(());
        }
        for t in self.nonempty_types() {
            if let Some(r) = self.monoid.apply_marked(t, q) {
                if self.co[i][r as usize] {
                    stack.push(t);
                    self.extend(r, stack, out, limit)?;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    /// Number of accepting tuples.
    pub fn count(&self) -> BigUint {
        let nq = self.monoid.dfa_states();
        let init = self.monoid.dfa_init();
        let mut ways = vec![BigUint::zero(); nq];
        for t0 in 0..self.monoid.size() {
            ways[self.monoid.apply_plain(t0, init) as usize] += 1u32;
        }
        for _ in 0..self.arity {
            let mut next = vec![BigUint::zero(); nq];
            for q in 0..nq {
                if ways[q].is_zero() {
                    continue;
                }
                for t in self.nonempty_types() {
                    if let Some(r) = self.monoid.apply_marked(t, q as u32) {
                        next[r as usize] += &ways[q];
                    }
                }
            }
            ways = next;
        }
        (0..nq)
            .filter(|&q| self.monoid.dfa_accepting(q as u32))
            .map(|q| ways[q].clone())
            .sum()
    }

    /// Layer `i` of pairs `(state after segment i, type of segment i)`
    /// reachable from the start, optionally requiring every pair so far to
    /// be pumpable. Stored as a bitset per type.
    fn forward_layers(&self, pumpable_only: bool) -> Vec<Vec<Vec<bool>>> {
        let nq = self.monoid.dfa_states();
        let size = self.monoid.size();
        let init = self.monoid.dfa_init();
        let mut first = vec![vec![false; nq]; size];
        for (t0, states) in first.iter_mut().enumerate() {
            states[self.monoid.apply_plain(t0, init) as usize] = true;
        }
        let mut layers = vec![first];
        for _ in 0..self.arity {
            let prev = layers.last().expect("nonempty");
            let mut next = vec![vec![false; nq]; size];
            for (tp, states) in prev.iter().enumerate() {
                if !states.iter().any(|&b| b) {
                    continue;
                }
                for t in self.nonempty_types() {
                    if pumpable_only && !self.pump.pumpable(tp, t) {
                        continue;
                    }
                    for q in (0..nq).filter(|&q| states[q]) {
                        if let Some(r) = self.monoid.apply_marked(t, q as u32) {
                            next[t][r as usize] = true;
                        }
                    }
                }
            }
            layers.push(next);
        }
        layers
    }

    /// An accepting tuple all of whose adjacent pairs are pumpable, if one
    /// exists (chosen deterministically by a backward walk).
    pub fn all_pumpable_disjunct(&self) -> Option<Disjunct> {
        let layers = self.forward_layers(true);
        let nq = self.monoid.dfa_states();
        // Walk backwards choosing, for each layer, the least type whose
        // states reach the chosen successor.
        let last = &layers[self.arity];
        let (mut t, mut q) = (0..self.monoid.size()).find_map(|t| {
            (0..nq)
                .find(|&q| last[t][q] && self.monoid.dfa_accepting(q as u32))
                .map(|q| (t, q as u32))
        })?;
        let mut types = vec![t];
        for i in (0..self.arity).rev() {
            let layer = &layers[i];
            let (tp, qp) = (0..self.monoid.size())
                .filter(|&tp| self.pump.pumpable(tp, t))
                .find_map(|tp| {
                    (0..nq as u32)
                        .find(|&qp| {
                            layer[tp][qp as usize] && self.monoid.apply_marked(t, qp) == Some(q)
                        })
                        .map(|qp| (tp, qp))
                })
                .expect("forward layers are consistent");
            types.push(tp);
            t = tp;
            q = qp;
        }
        types.reverse();
        Some(Disjunct {
            types: types.into_iter().map(MonoidElement).collect(),
        })
    }

    /// Indices `i` (1-based) that are non-pumpable in every accepting tuple.
    pub fn universally_eliminable(&self) -> Vec<usize> {
        let layers = self.forward_layers(false);
        let nq = self.monoid.dfa_states();
        (1..=self.arity)
            .filter(|&i| {
                let prev = &layers[i - 1];
                let pumpable_somewhere = (0..self.monoid.size()).any(|tp| {
                    (0..nq).any(|q| {
                        prev[tp][q]
                            && self.nonempty_types().any(|t| {
                                self.pump.pumpable(tp, t)
                                    && self
                                        .monoid
                                        .apply_marked(t, q as u32)
                                        .is_some_and(|r| self.co[i][r as usize])
                            })
                    })
                });
                !pumpable_somewhere
            })
            .collect()
    }

    /// Indices `i` such that some accepting tuple has its first
    /// non-pumpable pair at `i`.
    pub fn first_blocking_indices(&self) -> Vec<usize> {
        let layers = self.forward_layers(true);
        let nq = self.monoid.dfa_states();
        (1..=self.arity)
            .filter(|&i| {
                let prev = &layers[i - 1];
                (0..self.monoid.size()).any(|tp| {
                    (0..nq).any(|q| {
                        prev[tp][q]
                            && self.nonempty_types().any(|t| {
                                !self.pump.pumpable(tp, t)
                                    && self
                                        .monoid
                                        .apply_marked(t, q as u32)
                                        .is_some_and(|r| self.co[i][r as usize])
                            })
                    })
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(text: &str, vars: &[&str], k: usize) -> NormalForm {
        let sig = Signature::standard(k);
        let f = Formula::parse(text, &sig).unwrap();
        let v: Vec<Var> = vars.iter().map(|s| s.to_string()).collect();
        NormalForm::new(&f, &v, &sig, &Limits::default()).unwrap()
    }

    #[test]
    fn first_position() {
        let n = nf("~ex y. y<x", &["x"], 0);
        let ds = n.disjuncts(1000).unwrap();
        assert!(!ds.is_empty());
        assert!(ds.iter().all(|d| d.types[0] == n.monoid().identity()));
        assert!(ds.iter().all(|d| n.eliminable_pairs(d) == [1]));
        assert_eq!(n.universally_eliminable(), [1]);
        assert!(n.all_pumpable_disjunct().is_none());
        assert_eq!(BigUint::from(ds.len()), n.count());
    }

    #[test]
    fn predicate_has_pumpable_disjunct() {
        let n = nf("P1(x)", &["x"], 1);
        let d = n.all_pumpable_disjunct().unwrap();
        assert!(n.accepts(&d).unwrap());
        assert!(n.eliminable_pairs(&d).is_empty());
        assert!(n.universally_eliminable().is_empty());
        let ds = n.disjuncts(1000).unwrap();
        assert_eq!(BigUint::from(ds.len()), n.count());
        // Every listed tuple starts its marked segment with a P1 letter.
        for d in &ds {
            let w = n.monoid().witness(d.types[1]).unwrap();
            assert_eq!(w[0] & 1, 1);
        }
    }

    #[test]
    fn first_and_last() {
        let n = nf("x<y & (~ex z. z<x) & ~ex z. y<z", &["x", "y"], 0);
        for d in n.disjuncts(1000).unwrap() {
            assert_eq!(n.eliminable_pairs(&d), [1, 2]);
        }
        assert_eq!(n.universally_eliminable(), [1, 2]);
    }

    #[test]
    fn unsatisfiable() {
        let n = nf("P1(x) & ~P1(x)", &["x"], 1);
        assert!(!n.is_satisfiable());
        assert!(n.disjuncts(10).unwrap().is_empty());
        assert!(n.count().is_zero());
    }

    #[test]
    fn enumeration_limit() {
        let n = nf("P1(x)", &["x"], 1);
        assert!(matches!(n.disjuncts(1), Err(Error::ResourceLimit { .. })));
    }
}
