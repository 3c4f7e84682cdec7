//! Property tests for the invariants of the formula, compiler, monoid,
//! reparameterization, growth and interpretation layers. Ground truth is
//! always the brute-force evaluator or a recount in this file.

use chainrep::compiler::{compile, dfa_equivalent, Dfa};
use chainrep::formula::order_case_split;
use chainrep::growth::{brute_growth_profile, growth_lower_witness, no_decrement_witness, pump_witness};
use chainrep::interp::{reduce_interpretation, InterpretationSpec, BATTERY as INTERP_BATTERY};
use chainrep::monoid::{interval_monoid, transition_monoid, MonoidElement};
use chainrep::oracle::{check_reparameterization, count_tuples, enumerate_words, evaluate, Assignment, RepCandidate};
use chainrep::reparam::minimal_reparameterization;
use chainrep::selftest::{battery_signature, FormulaGenerator, BATTERY};
use chainrep::{Error, Formula, Limits, MarkedWord, Signature, Word};
use proptest::prelude::*;

fn xy() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn generated(seed: u64, predicates: usize) -> Formula {
    FormulaGenerator::new(seed, predicates).next_formula()
}

/// Strictly increasing `k`-tuples of positions below `n`.
fn increasing(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            cur.push(p);
            go(p + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

fn words(sig: &Signature, max_len: usize) -> Vec<Word> {
    enumerate_words(sig, max_len).unwrap().collect()
}

fn holds(f: &Formula, w: &Word, vars: &[String], t: &[usize]) -> bool {
    evaluate(f, w, &Assignment::positions(vars, t)).unwrap()
}

fn accepts(d: &Dfa, w: &Word, t: &[usize]) -> bool {
    d.run(&MarkedWord::new(w.clone(), t).unwrap()).unwrap()
}

/// Number of Myhill-Nerode classes among the states, by Moore refinement.
fn nerode_classes(d: &Dfa) -> usize {
    let n = d.states();
    let letters = d.alphabet().size();
    let mut class: Vec<usize> = (0..n as u32).map(|q| d.is_accepting(q) as usize).collect();
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..n as u32)
            .map(|q| {
                let succ = (0..letters).map(|a| class[d.next(q, a).unwrap() as usize]).collect();
                (class[q as usize], succ)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .drain(..)
            .map(|s| distinct.binary_search(&s).unwrap())
            .collect();
        let before = class.iter().collect::<std::collections::BTreeSet<_>>().len();
        if distinct.len() == before {
            return distinct.len();
        }
        class = next;
    }
}

/// Product automaton `a × b` accepting the language of `a`.
fn refine(a: &Dfa, b: &Dfa, sig: &Signature, marks: usize) -> Dfa {
    let (na, nb) = (a.states() as u32, b.states() as u32);
    let letters = a.alphabet().size();
    let id = |p: u32, q: u32| p * nb + q;
    let accepting: Vec<String> = (0..na)
        .flat_map(|p| (0..nb).map(move |q| (p, q)))
        .filter(|&(p, _)| a.is_accepting(p))
        .map(|(p, q)| id(p, q).to_string())
        .collect();
    let alphabet: Vec<String> = (0..letters).map(|l| a.alphabet().render_letter(l)).collect();
    let mut text = format!(
        "dfa states={} init={} accepting={} alphabet={}\n",
        na * nb,
        id(a.initial(), b.initial()),
        accepting.join(","),
        alphabet.join(",")
    );
    for p in 0..na {
        for q in 0..nb {
            for l in 0..letters {
                let to = id(a.next(p, l).unwrap(), b.next(q, l).unwrap());
                text.push_str(&format!("{} {} {to}\n", id(p, q), alphabet[l as usize]));
            }
        }
    }
    Dfa::from_text(&text, sig, marks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantifier_rank_laws(seed in any::<u64>()) {
        let f = generated(seed, 2);
        let g = generated(seed ^ 0x9e37, 2);
        let r = f.quantifier_rank();
        prop_assert_eq!(Formula::not(f.clone()).quantifier_rank(), r);
        prop_assert_eq!(Formula::and(f.clone(), g.clone()).quantifier_rank(), r.max(g.quantifier_rank()));
        prop_assert_eq!(Formula::exists("x", f.clone()).quantifier_rank(), r + 1);
        prop_assert_eq!(Formula::forall_set("Z", f).quantifier_rank(), r + 1);
    }

    #[test]
    fn order_cases_partition_assignments(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let vars = f.free_fo();
        let cases = order_case_split(&f);
        for w in words(&sig, 4) {
            for t in all_tuples(w.len(), vars.len()) {
                let matching: Vec<_> = cases.iter().filter(|(c, _)| holds(&c.constraint(), &w, &vars, &t)).collect();
                prop_assert_eq!(matching.len(), 1);
                let (_, fc) = matching[0];
                prop_assert_eq!(holds(fc, &w, &vars, &t), holds(&f, &w, &vars, &t));
            }
        }
    }

    #[test]
    fn compilation_is_compositional(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let g = generated(seed.wrapping_add(1), 1);
        let vars = xy();
        let df = compile(&f, &vars, &sig).unwrap();
        let dg = compile(&g, &vars, &sig).unwrap();
        let dnot = compile(&Formula::not(f.clone()), &vars, &sig).unwrap();
        let dand = compile(&Formula::and(f.clone(), g.clone()), &vars, &sig).unwrap();
        let y = vec!["y".to_string()];
        let dex = compile(&Formula::exists("x", f.clone()), &y, &sig).unwrap();
        for w in words(&sig, 4) {
            for t in increasing(w.len(), 2) {
                let a = accepts(&df, &w, &t);
                prop_assert_eq!(accepts(&dnot, &w, &t), !a);
                prop_assert_eq!(accepts(&dand, &w, &t), a && accepts(&dg, &w, &t));
            }
            for j in 0..w.len() {
                let projected = (0..w.len()).any(|i| holds(&f, &w, &vars, &[i, j]));
                prop_assert_eq!(accepts(&dex, &w, &[j]), projected);
            }
        }
    }

    #[test]
    fn compiled_automata_are_total_and_minimal(seed in any::<u64>()) {
        let sig = Signature::standard(2);
        let f = generated(seed, 2);
        let d = compile(&f, &f.free_fo(), &sig).unwrap();
        for q in 0..d.states() as u32 {
            for a in 0..d.alphabet().size() {
                prop_assert!((d.next(q, a).unwrap() as usize) < d.states());
            }
        }
        prop_assert_eq!(nerode_classes(&d), d.states());
    }

    #[test]
    fn monoid_images_form_a_congruence(
        seed in any::<u64>(),
        u in prop::collection::vec(0u32..64, 0..6),
        v in prop::collection::vec(0u32..64, 0..6),
    ) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let d = compile(&f, &f.free_fo(), &sig).unwrap();
        let m = transition_monoid(&d).unwrap();
        let size = d.alphabet().size();
        let u: Vec<u32> = u.into_iter().map(|a| a % size).collect();
        let v: Vec<u32> = v.into_iter().map(|a| a % size).collect();
        let e = m.image(&u).unwrap();
        let u2 = m.witness(e).unwrap().to_vec();
        prop_assert_eq!(m.image(&u2).unwrap(), e);
        let cat = |a: &[u32], b: &[u32]| [a, b].concat();
        prop_assert_eq!(m.image(&cat(&u, &v)).unwrap(), m.image(&cat(&u2, &v)).unwrap());
        prop_assert_eq!(m.image(&cat(&v, &u)).unwrap(), m.image(&cat(&v, &u2)).unwrap());
        prop_assert_eq!(
            m.image(&cat(&u, &v)).unwrap(),
            m.multiply(e, m.image(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn interval_witnesses_map_back(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let d = compile(&f, &xy(), &sig).unwrap();
        let m = interval_monoid(&d).unwrap();
        for e in m.elements() {
            let w = m.witness(e).unwrap();
            prop_assert_eq!(m.image(w).unwrap(), e);
            prop_assert!(w.iter().all(|&a| !d.alphabet().decode(a).1));
            prop_assert_eq!(w.is_empty(), e == m.identity());
        }
    }

    #[test]
    fn refinement_never_creates_pumpable_pairs(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let vars = xy();
        let f = generated(seed, 1);
        let aux = generated(seed.rotate_left(17), 1);
        let coarse_dfa = compile(&f, &vars, &sig).unwrap();
        let fine_dfa = refine(&coarse_dfa, &compile(&aux, &vars, &sig).unwrap(), &sig, 2);
        prop_assert!(dfa_equivalent(&coarse_dfa, &fine_dfa).unwrap());
        let (coarse, fine) = match (interval_monoid(&coarse_dfa), interval_monoid(&fine_dfa)) {
            (Ok(c), Ok(r)) if r.size() <= 400 => (c, r),
            _ => return Ok(()),
        };
        let project = |e: MonoidElement| coarse.image(fine.witness(e).unwrap()).unwrap();
        let pump = fine.pumpability();
        for b in fine.elements() {
            for e in fine.elements() {
                if pump.pumpable(b.0, e.0) {
                    prop_assert!(coarse.is_pumpable(project(b), project(e)).unwrap().0);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reparameterization_contract_on_random_formulas(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let r = match minimal_reparameterization(&f, &sig, &Limits::default()) {
            Err(Error::ResourceLimit { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(r.dimension() <= r.domain.len());
        let check = check_reparameterization(
            &RepCandidate {
                source: &f,
                graph: &r.graph,
                domain: &r.domain,
                image: &r.image,
                bound: &r.bound,
            },
            &sig,
            5,
        )
        .unwrap();
        prop_assert!(check.ok, "{} -> {}: {:?}", f, r.graph, check.counterexample);
    }

    #[test]
    fn dimension_is_invariant_under_equivalence(seed in any::<u64>()) {
        let sig = Signature::standard(1);
        let f = generated(seed, 1);
        let vars = f.free_fo();
        let variants = [
            Formula::not(Formula::not(f.clone())),
            Formula::and(f.clone(), Formula::or(f.clone(), Formula::True)),
            Formula::or(f.clone(), Formula::and(f.clone(), Formula::False)),
        ];
        let base = match minimal_reparameterization(&f, &sig, &Limits::default()) {
            Err(Error::ResourceLimit { .. }) => return Ok(()),
            other => other.unwrap().dimension(),
        };
        let df = compile(&f, &vars, &sig).unwrap();
        for g in &variants {
            prop_assert!(dfa_equivalent(&df, &compile(g, &vars, &sig).unwrap()).unwrap());
            prop_assert_eq!(minimal_reparameterization(g, &sig, &Limits::default()).unwrap().dimension(), base);
        }
    }
}

#[test]
fn brute_growth_is_monotone_in_n_and_length() {
    let sig = battery_signature();
    for (name, text, _) in BATTERY {
        let f = Formula::parse(text, &sig).unwrap();
        let profiles: Vec<Vec<usize>> = (3..=6).map(|l| brute_growth_profile(&f, &sig, 4, l).unwrap()).collect();
        for p in &profiles {
            assert!(p.windows(2).all(|w| w[0] <= w[1]), "{name}: {p:?}");
        }
        for pair in profiles.windows(2) {
            assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| a <= b), "{name}: {pair:?}");
        }
    }
}

#[test]
fn witness_counts_match_an_independent_recount() {
    let sig = battery_signature();
    let limits = Limits::default();
    for (name, text, _) in BATTERY {
        let f = Formula::parse(text, &sig).unwrap();
        for n in 1..=3 {
            let built = [
                pump_witness(&f, &sig, n, &limits),
                no_decrement_witness(&f, &sig, n, &limits),
                growth_lower_witness(&f, &sig, n, &limits),
            ];
            for w in built.into_iter().filter_map(|w| w.ok()) {
                let recount = count_tuples(&f, &w.variables, &w.word, Some(&w.marked_set)).unwrap();
                assert_eq!(recount, w.claimed_tuple_count, "{name}, n = {n}");
            }
        }
    }
}

#[test]
fn reduced_component_copies_match_bounds() {
    for (name, text, d) in INTERP_BATTERY {
        let spec = InterpretationSpec::parse(text, &Signature::standard(0)).unwrap();
        let r = reduce_interpretation(&spec, *d, &Limits::default()).unwrap();
        for rep in &r.reparameterizations {
            let copies = r.components.iter().filter(|c| c.source == rep.component).count();
            assert_eq!(num_bigint::BigUint::from(copies), rep.bound, "{name}: {}", rep.component);
        }
    }
}
