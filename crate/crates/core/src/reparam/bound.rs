//! Exact maximal preimage size of a graph formula.
//!
//! The graph is compiled over the tracks `image ++ domain`; reading the
//! word and image tracks as input and guessing the domain tracks gives a
//! nondeterministic automaton whose accepting runs on an input are exactly
//! the domain tuples in relation with it. The largest number of accepting
//! runs is found by exploring the reachable vectors of run counts; when
//! the counts grow past a cap (unbounded ambiguity) or the exploration
//! exceeds its budget, the bound is reported as unknown.

use std::collections::VecDeque;

use num_bigint::BigUint;
use rustc_hash::FxHashSet;

use crate::compiler::{compile_tracks, context_of, singleton};
use crate::error::Result;
use crate::formula::{Formula, Var};
use crate::Limits;

/// Largest number of `domain` tuples related by `graph` to one word and
/// image tuple, or `None` when not established within `limits`.
pub fn exact_max_preimage(
    graph: &Formula,
    domain: &[Var],
    image: &[Var],
    k: usize,
    limits: &Limits,
) -> Result<Option<BigUint>> {
    let layout: Vec<Var> = image.iter().chain(domain).cloned().collect();
    let mut dfa = match compile_tracks(graph, k, &layout, &limits.dfa) {
        Ok(d) => d,
        Err(e) if e.is_resource_limit() => return Ok(None),
        Err(e) => return Err(e),
    };
    let ctx = || context_of(graph);
    for j in 0..layout.len() {
        let bit = (k + j) as u32;
        dfa = match dfa.product(&singleton(dfa.letters, bit), |a, b| a && b, &limits.dfa, &ctx) {
            Ok(d) => d.minimize(),
            Err(e) if e.is_resource_limit() => return Ok(None),
            Err(e) => return Err(e),
        };
    }
    let useful = dfa.productive();
    if !useful[dfa.init as usize] {
        return Ok(Some(BigUint::from(0u32)));
    }
    let input_bits = k + image.len();
    let inputs = 1u32 << input_bits;
    let guesses = 1u32 << domain.len();
    let n = dfa.states();

    let start: Vec<(u32, u64)> = vec![(dfa.init, 1)];
    let mut seen: FxHashSet<Vec<(u32, u64)>> = FxHashSet::default();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    let mut best: u64 = 0;
    let mut counts = vec![0u64; n];
    let mut touched: Vec<u32> = Vec::new();
    while let Some(vector) = queue.pop_front() {
        let accepted: u64 = vector
            .iter()
            .filter(|(q, _)| dfa.accepting[*q as usize])
            .map(|(_, c)| c)
            .sum();
        best = best.max(accepted);
        for a in 0..inputs {
            for &(q, c) in &vector {
                for g in 0..guesses {
                    let t = dfa.next(q, a | g << input_bits);
                    if !useful[t as usize] {
                        continue;
                    }
                    if counts[t as usize] == 0 {
                        touched.push(t);
                    }
                    counts[t as usize] += c;
                }
            }
            touched.sort_unstable();
            let next: Vec<(u32, u64)> = touched.iter().map(|&t| (t, counts[t as usize])).collect();
            for &t in &touched {
                counts[t as usize] = 0;
            }
            touched.clear();
            if next.iter().any(|&(_, c)| c > limits.ambiguity_count) {
                return Ok(None);
            }
            if !next.is_empty() && seen.insert(next.clone()) {
                if seen.len() > limits.ambiguity_vectors {
                    return Ok(None);
                }
                queue.push_back(next);
            }
        }
    }
    Ok(Some(BigUint::from(best)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Signature;

    fn bound(text: &str, domain: &[&str], image: &[&str], k: usize) -> Option<u64> {
        let f = Formula::parse(text, &Signature::standard(k)).unwrap();
        let d: Vec<Var> = domain.iter().map(|s| s.to_string()).collect();
        let i: Vec<Var> = image.iter().map(|s| s.to_string()).collect();
        exact_max_preimage(&f, &d, &i, k, &Limits::default())
            .unwrap()
            .map(|b| u64::try_from(b).unwrap())
    }

    #[test]
    fn known_bounds() {
        assert_eq!(bound("~ex z. z<x", &["x"], &[], 0), Some(1));
        assert_eq!(bound("P1(x) & y=x", &["x"], &["y"], 1), Some(1));
                assert_eq!(bound("x<y & ~ex z. (z<y & ~(z=x) & ~(z<x))", &["x"], &["y"], 0), Some(1));
        // Neighbours on either side.
        assert_eq!(bound("(x<y & ~ex z. (x<z & z<y)) | (y<x & ~ex z. (y<z & z<x))", &["x"], &["y"], 0), Some(2));
        assert_eq!(bound("P1(x) & ~P1(x)", &["x"], &[], 1), Some(0));
        // Unbounded: every position relates to the empty image.
        assert_eq!(bound("x=x", &["x"], &[], 0), None);
    }
}
