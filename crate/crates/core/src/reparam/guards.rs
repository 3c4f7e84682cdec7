//! Formulas stating "the pair of interval types at index i is not
//! pumpable", built from an automaton over the marked alphabet by
//! encoding its run with existentially quantified sets.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::normal_form::NormalForm;
use crate::compiler::RawDfa;
use crate::error::Result;
use crate::formula::{and_all, fresh_names, or_all, Formula, Var};
use crate::word::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum GuardState {
    /// Fewer than `i - 1` marks read.
    Before(usize),
    /// Inside segment `i - 1` with its type so far.
    Left(usize),
    /// Inside segment `i`: stabilizer row of segment `i - 1`, type so far.
    Right(u32, usize),
    /// Past segment `i` with `marks` read and the pair not pumpable.
    After(usize),
    Reject,
}

/// Automaton over the marked alphabet (`2^(k+1)` letters) accepting the
/// words with exactly `arity` marks whose pair of segment types at index
/// `i` (1-based) is not pumpable.
pub(crate) fn blocking_automaton(nf: &NormalForm, i: usize) -> RawDfa {
    let m = nf.arity();
    let monoid = &nf.monoid;
    let pump = &nf.pump;
    let k = monoid.alphabet().base.len();
    let letters = 2u32 << k;
    let mut rows: FxHashMap<Vec<u64>, u32> = FxHashMap::default();
    let mut row_list: Vec<Vec<u64>> = Vec::new();
    let mut intern_row = |tau: usize, row_list: &mut Vec<Vec<u64>>| -> u32 {
        let row = pump.right_row(tau).to_vec();
        let fresh = row_list.len() as u32;
        *rows.entry(row.clone()).or_insert_with(|| {
            row_list.push(row);
            fresh
        })
    };
    let start = if i == 1 {
        GuardState::Left(0)
    } else {
        GuardState::Before(0)
    };
    let mut index: FxHashMap<GuardState, u32> = FxHashMap::default();
    let mut states = vec![start];
    index.insert(start, 0);
    let mut trans = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        let s = states[cursor];
        for a in 0..letters {
            let marked = a >> k & 1 == 1;
            let img = monoid
                .letter_image(a & ((1 << k) - 1))
                .expect("unmarked letter")
                .0;
            let t = match s {
                GuardState::Before(c) if marked => {
                    if c + 1 == i - 1 {
                        GuardState::Left(img)
                    } else {
                        GuardState::Before(c + 1)
                    }
                }
                GuardState::Before(c) => GuardState::Before(c),
                GuardState::Left(cur) if marked => GuardState::Right(intern_row(cur, &mut row_list), img),
                GuardState::Left(cur) => GuardState::Left(monoid.mul(cur, img)),
                GuardState::Right(row, cur) if marked => {
                    if i < m && !pump.pumpable_row(&row_list[row as usize], cur) {
                        GuardState::After(i + 1)
                    } else {
                        GuardState::Reject
                    }
                }
                GuardState::Right(row, cur) => GuardState::Right(row, monoid.mul(cur, img)),
                GuardState::After(c) if marked => {
                    if c < m {
                        GuardState::After(c + 1)
                    } else {
                        GuardState::Reject
                    }
                }
                other => other,
            };
            let fresh = states.len() as u32;
            let id = *index.entry(t).or_insert_with(|| {
                states.push(t);
                fresh
            });
            trans.push(id);
        }
        cursor += 1;
    }
    let accepting = states
        .iter()
        .map(|s| match s {
            GuardState::Right(row, cur) => i == m && !pump.pumpable_row(&row_list[*row as usize], *cur),
            GuardState::After(c) => *c == m,
            _ => false,
        })
        .collect();
    RawDfa {
        letters,
        init: 0,
        accepting,
        trans,
    }
    .minimize()
}

/// MSO formula with free variables `marks` (read in ascending order) that
/// holds exactly when `dfa`, over the marked alphabet of `sig`, accepts the
/// word with those positions marked. The word is assumed nonempty.
pub(crate) fn run_formula(dfa: &RawDfa, sig: &Signature, marks: &[Var]) -> Formula {
    let k = sig.len();
    let useful = dfa.productive();
    if !useful[dfa.init as usize] {
        return Formula::False;
    }
    // Codes for productive states only; runs through other states fail.
    let live: Vec<u32> = (0..dfa.states() as u32).filter(|&q| useful[q as usize]).collect();
    let code: FxHashMap<u32, usize> = live.iter().enumerate().map(|(c, &q)| (q, c)).collect();
    let bits = (usize::BITS - (live.len().max(2) - 1).leading_zeros()) as usize;

    let mut avoid: BTreeSet<Var> = marks.iter().cloned().collect();
    avoid.extend(sig.names().iter().cloned());
    let sets = fresh_names("R", bits, &mut avoid);
    let pos = fresh_names("p", 3, &mut avoid);
    let (p, p2, r) = (&pos[0], &pos[1], &pos[2]);

    let state_is = |q: u32, at: &str| -> Formula {
        let c = code[&q];
        and_all(sets.iter().enumerate().map(|(j, s)| {
            let member = Formula::In(s.clone(), at.to_string());
            if c >> j & 1 == 1 {
                member
            } else {
                Formula::not(member)
            }
        }))
    };
    let marked = |at: &str| or_all(marks.iter().map(|z| Formula::equal(at, z)));
    let letter_is = |a: u32, at: &str| -> Formula {
        let mut parts: Vec<Formula> = (0..k)
            .map(|j| {
                let atom = Formula::pred(j, at);
                if a >> j & 1 == 1 {
                    atom
                } else {
                    Formula::not(atom)
                }
            })
            .collect();
        parts.push(if a >> k & 1 == 1 {
            marked(at)
        } else {
            Formula::not(marked(at))
        });
        and_all(parts)
    };
    // The state at `at` is the successor of `q` under the letter at `at`.
    let step = |q: u32, at: &str| -> Formula {
        let mut by_target: Vec<(u32, Vec<u32>)> = Vec::new();
        for a in 0..dfa.letters {
            let t = dfa.next(q, a);
            if !useful[t as usize] {
                continue;
            }
            match by_target.iter_mut().find(|(x, _)| *x == t) {
                Some((_, ls)) => ls.push(a),
                None => by_target.push((t, vec![a])),
            }
        }
        or_all(by_target.into_iter().map(|(t, ls)| {
            and_all([
                or_all(ls.into_iter().map(|a| letter_is(a, at))),
                state_is(t, at),
            ])
        }))
    };

    let first = Formula::not(Formula::exists(r, Formula::less(r, p)));
    let last = Formula::not(Formula::exists(r, Formula::less(p, r)));
    let succ = and_all([
        Formula::less(p, p2),
        Formula::not(Formula::exists(
            r,
            Formula::and(Formula::less(p, r), Formula::less(r, p2)),
        )),
    ]);
    let start = Formula::forall(p, Formula::implies(first, step(dfa.init, p)));
    let steps = Formula::forall(
        p,
        Formula::forall(
            p2,
            Formula::implies(
                succ,
                and_all(
                    live.iter()
                        .map(|&q| Formula::implies(state_is(q, p), step(q, p2))),
                ),
            ),
        ),
    );
    let end = Formula::forall(
        p,
        Formula::implies(
            last,
            or_all(
                live.iter()
                    .filter(|&&q| dfa.accepting[q as usize])
                    .map(|&q| state_is(q, p)),
            ),
        ),
    );
    let mut body = and_all([start, steps, end]);
    for s in sets.iter().rev() {
        body = Formula::exists_set(s, body);
    }
    body
}

/// Formula over `vars` stating that the pair at index `i` is not pumpable
/// for the interval types of `nf`.
pub(crate) fn blocking_guard(nf: &NormalForm, i: usize, vars: &[Var], sig: &Signature) -> Result<Formula> {
    let dfa = blocking_automaton(nf, i);
    Ok(run_formula(&dfa, sig, vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile, Dfa, MarkedAlphabet};
    use crate::Limits;

    #[test]
    fn run_formula_defines_the_automaton() {
        let sig = Signature::standard(1);
        let vars: Vec<Var> = vec!["x".into(), "y".into()];
        let f = Formula::parse("x<y & P1(x) & ~P1(y)", &sig).unwrap();
        let d = compile(&f, &vars, &sig).unwrap();
        let g = run_formula(d.raw(), &sig, &vars);
        let guarded = and_all([Formula::less("x", "y"), g]);
        let back = compile(&guarded, &vars, &sig).unwrap();
        assert!(back.equivalent(&d).unwrap());
    }

    #[test]
    fn guard_matches_pumpability() {
        // Nothing can be inserted before a first position.
        let sig = Signature::standard(1);
        let vars: Vec<Var> = vec!["x".into()];
        let f = Formula::parse("(~ex z. z<x) | P1(x)", &sig).unwrap();
        let nf = NormalForm::new(&f, &vars, &sig, &Limits::default()).unwrap();
        let dfa = Dfa::from_raw(MarkedAlphabet::new(sig.clone(), 1), blocking_automaton(&nf, 1));
        for w in crate::oracle::enumerate_words(&sig, 4).unwrap() {
            for x in 0..w.len() {
                let mw = crate::word::MarkedWord::new(w.clone(), &[x]).unwrap();
                let t = nf.monoid().segment_types(&mw).unwrap();
                let blocked = !nf.monoid().is_pumpable(t[0], t[1]).unwrap().0;
                assert_eq!(dfa.run(&mw).unwrap(), blocked, "{}", mw.render(&sig));
            }
        }
        let guard = blocking_guard(&nf, 1, &vars, &sig).unwrap();
        let compiled = compile(&guard, &vars, &sig).unwrap();
        assert!(compiled.equivalent(&dfa).unwrap());
    }
}
