//! Growth degree and the structures that witness it.
//!
//! The degree of `f` is the dimension of its minimal reparameterization.
//! Lower bounds are shown by explicit words built from pumping idempotents;
//! every count reported here comes from the brute-force evaluator.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{order_case_split, Formula, Var};
use crate::oracle::{count_tuples, enumerate_words, satisfying_tuples_over, Prepared};
use crate::reparam::{minimal_reparameterization, serialize_big, Disjunct, NormalForm, Reparameterization};
use crate::word::{Letter, Signature, Word};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum BlockRole {
    /// `L_i`: a word of the `i`-th segment type.
    Lower { index: usize },
    /// Copy `copy` (1-based) of the pumping word `U_unit` (1-based).
    Unit { unit: usize, copy: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    #[serde(flatten)]
    pub role: BlockRole,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub layout: Vec<Block>,
    /// Copies of each pumping word.
    pub copies: usize,
    /// `(unit, copy)` pairs kept free of seed elements.
    pub buffers: Vec<(usize, usize)>,
}

/// A word, a position set and the oracle's count of satisfying tuples
/// drawn from that set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStructure {
    pub word: Word,
    pub marked_set: Vec<usize>,
    pub variables: Vec<Var>,
    pub claimed_tuple_count: usize,
    pub construction: Construction,
}

impl WitnessStructure {
    /// Word, set and layout in the text dump format.
    pub fn dump(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for b in &self.construction.layout {
            let name = match b.role {
                BlockRole::Lower { index } => format!("L{index}"),
                BlockRole::Unit { unit, copy } => {
                    let buffer = self.construction.buffers.contains(&(unit, copy));
                    format!("U{unit} copy {copy}{}", if buffer { " (buffer)" } else { "" })
                }
            };
            let _ = writeln!(out, "# {name}: [{}, {})", b.start, b.start + b.len);
        }
        let _ = writeln!(out, "word {}", sig.render_word(&self.word));
        let set: Vec<String> = self.marked_set.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "set [{}]", set.join(", "));
        let _ = writeln!(out, "tuples {}", self.claimed_tuple_count);
        out
    }

    fn verify(mut self, f: &Formula) -> Result<Self> {
        self.marked_set.sort_unstable();
        self.marked_set.dedup();
        self.claimed_tuple_count = count_tuples(f, &self.variables, &self.word, Some(&self.marked_set))?;
        Ok(self)
    }
}

/// Minimal reparameterization dimension.
pub fn growth_degree(f: &Formula, sig: &Signature, limits: &Limits) -> Result<usize> {
    Ok(minimal_reparameterization(f, sig, limits)?.dimension())
}

/// `brute_growth(f, n, max_len)` for every `n` in `0..=max_n`.
pub fn brute_growth_profile(f: &Formula, sig: &Signature, max_n: usize, max_len: usize) -> Result<Vec<usize>> {
    f.check(sig)?;
    let (vars, sets) = f.free_variables();
    if let Some(s) = sets.first() {
        return Err(Error::FreeSecondOrder(s.clone()));
    }
    let prepared = Prepared::new(f, &vars)?;
    let words = enumerate_words(sig, max_len)?;
    let best = words
        .par_bridge()
        .map(|w| {
            let labels: Vec<u32> = w.0.iter().map(|l| l.0).collect();
            let masks = satisfying_masks(&prepared, &labels, vars.len());
            (0..=max_n)
                .map(|n| best_subset_count(&masks, labels.len(), n.min(labels.len())))
                .collect::<Vec<usize>>()
        })
        .reduce(
            || vec![0; max_n + 1],
            |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
        );
    Ok(best)
}

/// Largest number of satisfying tuples inside a set of at most `n`
/// positions of a word of length at most `max_len`.
pub fn brute_growth(f: &Formula, sig: &Signature, n: usize, max_len: usize) -> Result<usize> {
    Ok(brute_growth_profile(f, sig, n, max_len)?[n])
}

/// Position masks of the satisfying tuples, deduplicated.
fn satisfying_masks(p: &Prepared, labels: &[u32], arity: usize) -> Vec<u64> {
    let len = labels.len();
    let mut masks = Vec::new();
    let mut tuple = vec![0usize; arity];
    loop {
        if (arity == 0 || len > 0) && p.eval_tuple(labels, &tuple, &[]) {
            masks.push(tuple.iter().fold(0u64, |m, &q| m | 1 << q));
        }
        // Odometer over positions; arity 0 visits the empty tuple once.
        let mut j = arity;
        loop {
            if j == 0 {
                return masks;
            }
            j -= 1;
            tuple[j] += 1;
            if tuple[j] < len {
                break;
            }
            tuple[j] = 0;
        }
        if len == 0 {
            return masks;
        }
    }
}

/// Best count over subsets of exactly `size` positions. Counting is
/// monotone in the set, so smaller sets never do better.
fn best_subset_count(masks: &[u64], len: usize, size: usize) -> usize {
    let mut best = 0;
    let mut set: u64 = (1u64 << size) - 1;
    let limit = 1u64 << len;
    loop {
        if set >= limit {
            return best;
        }
        best = best.max(masks.iter().filter(|&&m| m & !set == 0).count());
        if set == 0 {
            return best;
        }
        // Next set of the same size (Gosper's hack).
        let c = set & set.wrapping_neg();
        let r = set + c;
        set = (((r ^ set) >> 2) / c) | r;
    }
}

/// Whether `brute_growth(f, n, max_len) ≤ N·n^d` for the bound and
/// dimension of `rep`.
pub fn growth_upper_check(
    f: &Formula,
    sig: &Signature,
    rep: &Reparameterization,
    n: usize,
    max_len: usize,
) -> Result<bool> {
    let brute = brute_growth(f, sig, n, max_len)?;
    Ok(BigUint::from(brute) <= upper_bound(rep, n))
}

pub fn upper_bound(rep: &Reparameterization, n: usize) -> BigUint {
    &rep.bound * BigUint::from(n).pow(rep.dimension() as u32)
}

/// Ingredient words: `L_0..L_k` for the types of the disjunct and
/// `U_1..U_k` for the pumping idempotents of its adjacent pairs.
struct Ingredients {
    lower: Vec<Vec<Letter>>,
    units: Vec<Vec<Letter>>,
}

fn ingredients(nf: &NormalForm, d: &Disjunct) -> Result<Ingredients> {
    let monoid = nf.monoid();
    let word = |e| -> Result<Vec<Letter>> { Ok(monoid.witness(e)?.iter().map(|&a| Letter(a)).collect()) };
    let mut lower = Vec::new();
    let mut units = Vec::new();
    for (i, &t) in d.types.iter().enumerate() {
        lower.push(word(t)?);
        if i > 0 {
            let e = nf.pump.witness(d.types[i - 1].0, t.0).ok_or_else(|| {
                Error::NotPumpable(format!("pair at index {i} of the disjunct"))
            })?;
            units.push(word(e)?);
        }
    }
    Ok(Ingredients { lower, units })
}

struct Layout {
    word: Word,
    blocks: Vec<Block>,
    /// `unit_starts[i][c]`: first position of copy `c + 1` of `U_{i+1}`.
    unit_starts: Vec<Vec<usize>>,
    lower_starts: Vec<usize>,
}

/// `L_0 + Σ_i (U_i × copies + L_i)`.
fn lay_out(ing: &Ingredients, copies: usize) -> Layout {
    let mut letters = Vec::new();
    let mut blocks = Vec::new();
    let mut unit_starts = vec![Vec::new(); ing.units.len()];
    let mut lower_starts = Vec::new();
    let mut push = |letters: &mut Vec<Letter>, role, w: &[Letter]| {
        let start = letters.len();
        letters.extend_from_slice(w);
        blocks.push(Block {
            role,
            start,
            len: w.len(),
        });
        start
    };
    lower_starts.push(push(&mut letters, BlockRole::Lower { index: 0 }, &ing.lower[0]));
    for (i, u) in ing.units.iter().enumerate() {
        for c in 0..copies {
            let role = BlockRole::Unit { unit: i + 1, copy: c + 1 };
            unit_starts[i].push(push(&mut letters, role, u));
        }
        lower_starts.push(push(&mut letters, BlockRole::Lower { index: i + 1 }, &ing.lower[i + 1]));
    }
    Layout {
        word: Word(letters),
        blocks,
        unit_starts,
        lower_starts,
    }
}

/// Strict order case of `f` with an all-pumpable accepting tuple: the
/// variables in ascending order, its normal form and the tuple.
fn pumpable_case(f: &Formula, sig: &Signature, limits: &Limits) -> Result<Option<(Vec<Var>, NormalForm, Disjunct)>> {
    for (case, fc) in order_case_split(f) {
        if !case.is_strict() {
            continue;
        }
        let vars = case.representatives();
        let nf = NormalForm::new(&fc, &vars, sig, limits)?;
        if let Some(d) = nf.all_pumpable_disjunct() {
            return Ok(Some((vars, nf, d)));
        }
    }
    Ok(None)
}

fn sets_of_unit_starts(layout: &Layout) -> Vec<usize> {
    layout.unit_starts.iter().flatten().copied().collect()
}

/// `L + I × n + U` for a one-variable formula whose accepting tuple
/// `(τ₀, τ₁)` is pumpable; the set holds the first position of each copy.
pub fn pump_witness(f: &Formula, sig: &Signature, n: usize, limits: &Limits) -> Result<WitnessStructure> {
    let vars = f.free_fo();
    if vars.len() != 1 {
        return Err(Error::Arity(format!(
            "pumping needs exactly one free variable, found {}",
            vars.len()
        )));
    }
    let nf = NormalForm::new(f, &vars, sig, limits)?;
    let d = nf
        .all_pumpable_disjunct()
        .ok_or_else(|| Error::NotPumpable("no accepting pair of types is pumpable".into()))?;
    pumped(f, &vars, &nf, &d, n)
}

/// The pumped structure for a given accepting tuple with all pairs
/// pumpable: `L_0 + Σ (U_i × copies + L_i)`, the set being the first
/// positions of all copies.
pub fn pumped(f: &Formula, vars: &[Var], nf: &NormalForm, d: &Disjunct, copies: usize) -> Result<WitnessStructure> {
    if !nf.accepts(d)? {
        return Err(Error::NotApplicable("the tuple of types is not accepting".into()));
    }
    let ing = ingredients(nf, d)?;
    let layout = lay_out(&ing, copies);
    WitnessStructure {
        marked_set: sets_of_unit_starts(&layout),
        word: layout.word,
        variables: vars.to_vec(),
        claimed_tuple_count: 0,
        construction: Construction {
            layout: layout.blocks,
            copies,
            buffers: Vec::new(),
        },
    }
    .verify(f)
}

/// Word with `2N` copies of each pumping word and the set of their first
/// positions (`|S| ≤ 2Nk`), holding at least `(2N)^k` satisfying tuples
/// when all pairs are pumpable.
pub fn no_decrement_witness(f: &Formula, sig: &Signature, n: usize, limits: &Limits) -> Result<WitnessStructure> {
    let vars = f.free_fo();
    if vars.is_empty() {
        return Err(Error::NotApplicable("formula has no free variables".into()));
    }
    let (ascending, nf, d) = pumpable_case(f, sig, limits)?.ok_or_else(|| {
        Error::NotPumpable("no order case has an accepting tuple with all pairs pumpable".into())
    })?;
    let mut w = pumped(f, &ascending, &nf, &d, 2 * n)?;
    // Count in the formula's own variable order.
    w.variables = vars;
    w.verify(f)
}

/// Word `M_n` and set `S` of size `O(n)` with at least `n^d` satisfying
/// tuples, `d` the growth degree, built by transporting a seed tuple along
/// shifted copies of the pumping words.
pub fn growth_lower_witness(f: &Formula, sig: &Signature, n: usize, limits: &Limits) -> Result<WitnessStructure> {
    let rep = minimal_reparameterization(f, sig, limits)?;
    growth_lower_witness_for(f, sig, &rep, n, limits)
}

pub fn growth_lower_witness_for(
    f: &Formula,
    sig: &Signature,
    rep: &Reparameterization,
    n: usize,
    limits: &Limits,
) -> Result<WitnessStructure> {
    if rep.graph == Formula::False {
        return Err(Error::NotApplicable("unsatisfiable formula has no satisfying tuples".into()));
    }
    let k = rep.domain.len();
    if rep.dimension() == 0 {
        return single_tuple_witness(f, rep, sig, limits);
    }
    let image_formula = Formula::exists_many(&rep.domain, rep.graph.clone());
    let (ascending, nf, d) = pumpable_case(&image_formula, sig, limits)?.ok_or_else(|| {
        Error::Internal("minimal image formula has no all-pumpable accepting tuple".into())
    })?;
    let ing = ingredients(&nf, &d)?;
    let m = 2 * k + 3;
    let r = m.div_ceil(2);
    let seed_layout = lay_out(&ing, m);
    // Image variable `j` sits at the start of copy `r` of its unit.
    let unit_of: Vec<usize> = rep
        .image
        .iter()
        .map(|y| ascending.iter().position(|v| v == y).expect("strict case"))
        .collect();
    let b: Vec<usize> = unit_of.iter().map(|&u| seed_layout.unit_starts[u][r - 1]).collect();

    let order: Vec<Var> = rep.domain.iter().chain(&rep.image).cloned().collect();
    let graph = Prepared::new(&rep.graph, &order)?;
    let labels: Vec<u32> = seed_layout.word.0.iter().map(|l| l.0).collect();
    let seed = first_tuple(labels.len(), k, |a| {
        let t: Vec<usize> = a.iter().chain(&b).copied().collect();
        graph.eval_tuple(&labels, &t, &[])
    })
    .ok_or_else(|| Error::Internal("no seed tuple in the one-copy structure".into()))?;

    // Where each seed coordinate lies.
    let places: Vec<Place> = seed.iter().map(|&p| locate(&seed_layout, p)).collect();
    let units = ing.units.len();
    let mut buffers = Vec::new();
    let mut bounds = Vec::new();
    for u in 0..units {
        let occupied = |c: usize| places.iter().any(|pl| matches!(pl, Place::Unit { unit, copy, .. } if *unit == u && *copy == c));
        let left = (1..r).rev().find(|&c| !occupied(c));
        let right = (r + 1..=m).find(|&c| !occupied(c));
        let (Some(left), Some(right)) = (left, right) else {
            return Err(Error::Internal("no free buffer copy".into()));
        };
        buffers.push((u + 1, left));
        buffers.push((u + 1, right));
        bounds.push((left, right));
    }

    let layout = lay_out(&ing, m + n);
    let mut set = Vec::new();
    for pl in &places {
        match *pl {
            Place::Lower { index, offset } => set.push(layout.lower_starts[index] + offset),
            Place::Unit { unit, offset, .. } => {
                set.extend(layout.unit_starts[unit].iter().map(|s| s + offset));
            }
        }
    }
    let w = WitnessStructure {
        word: layout.word.clone(),
        marked_set: set,
        variables: rep.domain.clone(),
        claimed_tuple_count: 0,
        construction: Construction {
            layout: layout.blocks.clone(),
            copies: m + n,
            buffers,
        },
    }
    .verify(f)?;

    // The transported tuples must satisfy the graph with the shifted image.
    let labels: Vec<u32> = layout.word.0.iter().map(|l| l.0).collect();
    let shift = |unit: usize, copy: usize, by: usize| -> usize {
        let (left, right) = bounds[unit];
        if copy < left {
            copy
        } else if copy > right {
            copy + n
        } else {
            copy + by
        }
    };
    let mut seen = std::collections::BTreeSet::new();
    for pi in functions(units, n) {
        let mut t: Vec<usize> = places
            .iter()
            .map(|pl| match *pl {
                Place::Lower { index, offset } => layout.lower_starts[index] + offset,
                Place::Unit { unit, copy, offset } => {
                    layout.unit_starts[unit][shift(unit, copy, pi[unit]) - 1] + offset
                }
            })
            .collect();
        let a = t.clone();
        t.extend(unit_of.iter().map(|&u| layout.unit_starts[u][r + pi[u] - 1]));
        if !graph.eval_tuple(&labels, &t, &[]) {
            return Err(Error::Internal(format!("transported tuple {t:?} fails the graph")));
        }
        seen.insert(a);
    }
    if seen.len() != n.pow(units as u32) {
        return Err(Error::Internal("transported tuples are not distinct".into()));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy)]
enum Place {
    Lower { index: usize, offset: usize },
    Unit { unit: usize, copy: usize, offset: usize },
}

fn locate(layout: &Layout, p: usize) -> Place {
    let b = layout
        .blocks
        .iter()
        .find(|b| b.start <= p && p < b.start + b.len)
        .expect("position inside the word");
    match b.role {
        BlockRole::Lower { index } => Place::Lower {
            index,
            offset: p - b.start,
        },
        BlockRole::Unit { unit, copy } => Place::Unit {
            unit: unit - 1,
            copy,
            offset: p - b.start,
        },
    }
}

/// All maps `{0..d} → {1..n}` in lexicographic order.
fn functions(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|f| {
                (1..=n).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

/// Lexicographically least tuple over `0..len` accepted by `test`.
fn first_tuple(len: usize, arity: usize, mut test: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut t = vec![0usize; arity];
    if arity > 0 && len == 0 {
        return None;
    }
    loop {
        if test(&t) {
            return Some(t);
        }
        let mut j = arity;
        loop {
            if j == 0 {
                return None;
            }
            j -= 1;
            t[j] += 1;
            if t[j] < len {
                break;
            }
            t[j] = 0;
        }
    }
}

/// Degree 0: one satisfying tuple on a shortest satisfying word.
fn single_tuple_witness(f: &Formula, rep: &Reparameterization, sig: &Signature, limits: &Limits) -> Result<WitnessStructure> {
    let dfa = crate::compiler::compile_with(f, &rep.domain, sig, &limits.dfa)?;
    let word = dfa
        .shortest_accepted()
        .ok_or_else(|| Error::NotApplicable("unsatisfiable formula".into()))?
        .word;
    let tuple = satisfying_tuples_over(f, &rep.domain, &word, None)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("compiled witness word has no satisfying tuple".into()))?;
    WitnessStructure {
        construction: Construction {
            layout: vec![Block {
                role: BlockRole::Lower { index: 0 },
                start: 0,
                len: word.len(),
            }],
            copies: 0,
            buffers: Vec::new(),
        },
        word,
        marked_set: tuple,
        variables: rep.domain.clone(),
        claimed_tuple_count: 0,
    }
    .verify(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSample {
    pub n: usize,
    pub lower: Option<usize>,
    #[serde(serialize_with = "serialize_big")]
    pub upper: BigUint,
    pub brute: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub degree: usize,
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigUint,
    pub samples: Vec<GrowthSample>,
    /// Whether every sample satisfies `lower ≥ n^d` and `brute ≤ N·n^d`.
    pub sandwich_holds: bool,
}

/// Degree, bound and the sandwich samples for `n` in `1..=max_n`.
pub fn growth_report(f: &Formula, sig: &Signature, max_n: usize, max_len: usize, limits: &Limits) -> Result<GrowthReport> {
    let rep = minimal_reparameterization(f, sig, limits)?;
    let profile = brute_growth_profile(f, sig, max_n, max_len)?;
    let d = rep.dimension();
    let mut samples = Vec::new();
    let mut holds = true;
    for n in 1..=max_n {
        let lower = if rep.graph == Formula::False {
            None
        } else {
            Some(growth_lower_witness_for(f, sig, &rep, n, limits)?.claimed_tuple_count)
        };
        let upper = upper_bound(&rep, n);
        holds &= lower.is_none_or(|l| l >= n.pow(d as u32));
        holds &= BigUint::from(profile[n]) <= upper;
        samples.push(GrowthSample {
            n,
            lower,
            upper,
            brute: profile[n],
        });
    }
    Ok(GrowthReport {
        degree: d,
        bound: rep.bound,
        samples,
        sandwich_holds: holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, k: usize) -> (Formula, Signature) {
        let sig = Signature::standard(k);
        (Formula::parse(text, &sig).unwrap(), sig)
    }

    #[test]
    fn brute_counts() {
        let (f, sig) = parse("x<y", 0);
        assert_eq!(brute_growth_profile(&f, &sig, 4, 5).unwrap(), vec![0, 0, 1, 3, 6]);
        let (u, sig) = parse("P1(x) & ~P1(x)", 1);
        assert_eq!(brute_growth(&u, &sig, 3, 4).unwrap(), 0);
        let (s, sig) = parse("ex x. P1(x)", 1);
        assert_eq!(brute_growth(&s, &sig, 0, 3).unwrap(), 1);
    }

    #[test]
    fn subset_enumeration() {
        // Tuples {0,1} and {2}: best 2-set holds one tuple only if it covers it.
        let masks = [0b011, 0b100];
        assert_eq!(best_subset_count(&masks, 3, 2), 1);
        assert_eq!(best_subset_count(&masks, 3, 3), 2);
        assert_eq!(best_subset_count(&masks, 3, 0), 0);
    }

    #[test]
    fn pumping_predicate() {
        let (f, sig) = parse("P1(x)", 1);
        let w = pump_witness(&f, &sig, 5, &Limits::default()).unwrap();
        assert!(w.claimed_tuple_count >= 5);
        for &p in &w.marked_set {
            assert!(w.word.0[p].has(0));
        }
        let (g, sig) = parse("~ex y. y<x", 0);
        assert!(matches!(
            pump_witness(&g, &sig, 2, &Limits::default()),
            Err(Error::NotPumpable(_))
        ));
    }

    #[test]
    fn no_decrement_counts() {
        let (f, sig) = parse("x<y", 0);
        let w = no_decrement_witness(&f, &sig, 2, &Limits::default()).unwrap();
        assert!(w.marked_set.len() <= 8);
        assert!(w.claimed_tuple_count >= 16);
        let (f, sig) = parse("P1(x)", 1);
        let w = no_decrement_witness(&f, &sig, 3, &Limits::default()).unwrap();
        assert!(w.marked_set.len() <= 6);
        assert!(w.claimed_tuple_count >= 6);
    }

    #[test]
    fn lower_witnesses() {
        let l = Limits::default();
        let (f, sig) = parse("x<y", 0);
        let w = growth_lower_witness(&f, &sig, 3, &l).unwrap();
        assert!(w.claimed_tuple_count >= 9);
        let (f, sig) = parse("P1(x)", 1);
        assert!(growth_lower_witness(&f, &sig, 4, &l).unwrap().claimed_tuple_count >= 4);
        let (f, sig) = parse("~ex y. y<x", 0);
        assert!(growth_lower_witness(&f, &sig, 4, &l).unwrap().claimed_tuple_count >= 1);
        let (f, sig) = parse("P1(x) & ~P1(x)", 1);
        assert!(matches!(growth_lower_witness(&f, &sig, 2, &l), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn report_sandwich() {
        let (f, sig) = parse("P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))", 1);
        let r = growth_report(&f, &sig, 3, 6, &Limits::default()).unwrap();
        assert_eq!(r.degree, 1);
        assert!(r.sandwich_holds, "{r:?}");
    }
}
