//! MSO formulas over labelled linear orders: syntax tree, parsing,
//! rendering and structural analysis.
//!
//! First-order variables are lowercase identifiers and range over
//! positions; second-order variables are uppercase and range over sets of
//! positions. Predicates are referenced by their index in a [`Signature`].

mod build;
mod cases;
mod parse;
mod render;

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

pub use build::{
    and_all, asc_chain, at_least_tuples, disjoint_guarded, equalities, lex_less, nth_tuple,
    or_all,
};
pub use cases::{order_case_split, VariableOrderCase};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::word::Signature;

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Less(Var, Var),
    Equal(Var, Var),
    /// `P_i(x)` with a zero-based predicate index.
    Pred(usize, Var),
    /// `X(x)`: membership of a first-order variable in a set variable.
    In(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ExistsFo(Var, Box<Formula>),
    ForallFo(Var, Box<Formula>),
    ExistsSo(Var, Box<Formula>),
    ForallSo(Var, Box<Formula>),
    /// Counting macro: at least `n` positions `x` satisfy the body.
    AtLeast(u32, Var, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarOrder {
    First,
    Second,
}

pub fn is_fo_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

pub fn is_so_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Formula {
    pub fn less(x: &str, y: &str) -> Self {
        Formula::Less(x.into(), y.into())
    }

    pub fn equal(x: &str, y: &str) -> Self {
        Formula::Equal(x.into(), y.into())
    }

    pub fn pred(i: usize, x: &str) -> Self {
        Formula::Pred(i, x.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        Formula::ExistsFo(x.into(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Self {
        Formula::ForallFo(x.into(), Box::new(f))
    }

    pub fn exists_set(x: &str, f: Formula) -> Self {
        Formula::ExistsSo(x.into(), Box::new(f))
    }

    pub fn forall_set(x: &str, f: Formula) -> Self {
        Formula::ForallSo(x.into(), Box::new(f))
    }

    /// `∃x1 … ∃xn. f`, innermost last.
    pub fn exists_many(vars: &[Var], f: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(f, |acc, v| Formula::ExistsFo(v.clone(), Box::new(acc)))
    }

    /// Parses `text` over `sig`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        parse::parse(text, sig)
    }

    pub fn render(&self, sig: &Signature) -> String {
        render::render(self, sig)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::True
                | Formula::False
                | Formula::Less(..)
                | Formula::Equal(..)
                | Formula::Pred(..)
                | Formula::In(..)
        )
    }

    /// Maximal nesting depth of quantifiers; a counting quantifier
    /// `atleast n` counts as `n` nested quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Less(..)
            | Formula::Equal(..)
            | Formula::Pred(..)
            | Formula::In(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.quantifier_rank().max(g.quantifier_rank())
            }
            Formula::ExistsFo(_, f)
            | Formula::ForallFo(_, f)
            | Formula::ExistsSo(_, f)
            | Formula::ForallSo(_, f) => 1 + f.quantifier_rank(),
            Formula::AtLeast(n, _, f) => {
                if *n == 0 {
                    0
                } else {
                    *n as usize + f.quantifier_rank()
                }
            }
        }
    }

    /// Free first- and second-order variables in first-occurrence order.
    pub fn free_variables(&self) -> (Vec<Var>, Vec<Var>) {
        let mut fo = Vec::new();
        let mut so = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut fo, &mut so);
        (fo, so)
    }

    pub fn free_fo(&self) -> Vec<Var> {
        self.free_variables().0
    }

    fn collect_free(&self, bound: &mut Vec<Var>, fo: &mut Vec<Var>, so: &mut Vec<Var>) {
        fn note(v: &Var, bound: &[Var], out: &mut Vec<Var>) {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        }
        match self {
            Formula::True | Formula::False => {}
            Formula::Less(x, y) | Formula::Equal(x, y) => {
                note(x, bound, fo);
                note(y, bound, fo);
            }
            Formula::Pred(_, x) => note(x, bound, fo),
            Formula::In(set, x) => {
                note(set, bound, so);
                note(x, bound, fo);
            }
            Formula::Not(f) => f.collect_free(bound, fo, so),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.collect_free(bound, fo, so);
                g.collect_free(bound, fo, so);
            }
            Formula::ExistsFo(v, f)
            | Formula::ForallFo(v, f)
            | Formula::ExistsSo(v, f)
            | Formula::ForallSo(v, f)
            | Formula::AtLeast(_, v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, fo, so);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Less(x, y) | Formula::Equal(x, y) | Formula::In(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Pred(_, x) => {
                out.insert(x.clone());
            }
            Formula::Not(f) => f.all_names(out),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.all_names(out);
                g.all_names(out);
            }
            Formula::ExistsFo(v, f)
            | Formula::ForallFo(v, f)
            | Formula::ExistsSo(v, f)
            | Formula::ForallSo(v, f)
            | Formula::AtLeast(_, v, f) => {
                out.insert(v.clone());
                f.all_names(out);
            }
        }
    }

    pub fn names(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.all_names(&mut out);
        out
    }

    /// Largest predicate index used, if any.
    pub fn max_predicate(&self) -> Option<usize> {
        match self {
            Formula::Pred(i, _) => Some(*i),
            Formula::True
            | Formula::False
            | Formula::Less(..)
            | Formula::Equal(..)
            | Formula::In(..) => None,
            Formula::Not(f)
            | Formula::ExistsFo(_, f)
            | Formula::ForallFo(_, f)
            | Formula::ExistsSo(_, f)
            | Formula::ForallSo(_, f)
            | Formula::AtLeast(_, _, f) => f.max_predicate(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                match (f.max_predicate(), g.max_predicate()) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                }
            }
        }
    }

    /// Capture-avoiding renaming of free variables.
    ///
    /// Bound variables that would capture an incoming name are freshened.
    /// The map may be non-injective (used when merging equal variables);
    /// mapping a variable to a name of the other order is an error.
    pub fn substitute(&self, renaming: &[(Var, Var)]) -> Result<Formula> {
        for (from, to) in renaming {
            if is_fo_name(from) != is_fo_name(to) {
                return Err(Error::VariableOrder(format!(
                    "cannot rename `{from}` to `{to}`"
                )));
            }
        }
        Ok(self.subst(renaming))
    }

    fn subst(&self, map: &[(Var, Var)]) -> Formula {
        let look = |v: &Var| -> Var {
            map.iter()
                .find(|(from, _)| from == v)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| v.clone())
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Less(x, y) => Formula::Less(look(x), look(y)),
            Formula::Equal(x, y) => Formula::Equal(look(x), look(y)),
            Formula::Pred(i, x) => Formula::Pred(*i, look(x)),
            Formula::In(s, x) => Formula::In(look(s), look(x)),
            Formula::Not(f) => Formula::not(f.subst(map)),
            Formula::And(f, g) => Formula::and(f.subst(map), g.subst(map)),
            Formula::Or(f, g) => Formula::or(f.subst(map), g.subst(map)),
            Formula::Implies(f, g) => Formula::implies(f.subst(map), g.subst(map)),
            Formula::ExistsFo(v, f)
            | Formula::ForallFo(v, f)
            | Formula::ExistsSo(v, f)
            | Formula::ForallSo(v, f)
            | Formula::AtLeast(_, v, f) => {
                let inner: Vec<(Var, Var)> = map
                    .iter()
                    .filter(|(from, to)| from != v && from != to)
                    .cloned()
                    .collect();
                let (body_fo, body_so) = f.free_variables();
                let live: Vec<(Var, Var)> = inner
                    .into_iter()
                    .filter(|(from, _)| body_fo.contains(from) || body_so.contains(from))
                    .collect();
                let captures = live.iter().any(|(_, to)| to == v);
                let (binder, body) = if captures {
                    let mut avoid = f.names();
                    for (from, to) in &live {
                        avoid.insert(from.clone());
                        avoid.insert(to.clone());
                    }
                    avoid.insert(v.clone());
                    let fresh = fresh_name(v, &avoid);
                    let renamed = f.subst(&[(v.clone(), fresh.clone())]);
                    (fresh, renamed.subst(&live))
                } else {
                    (v.clone(), f.subst(&live))
                };
                let body = Box::new(body);
                match self {
                    Formula::ExistsFo(..) => Formula::ExistsFo(binder, body),
                    Formula::ForallFo(..) => Formula::ForallFo(binder, body),
                    Formula::ExistsSo(..) => Formula::ExistsSo(binder, body),
                    Formula::ForallSo(..) => Formula::ForallSo(binder, body),
                    Formula::AtLeast(n, ..) => Formula::AtLeast(*n, binder, body),
                    _ => unreachable!(),
                }
            }
        }
    }

    /// Expands counting quantifiers into core syntax.
    pub fn expand_macros(&self) -> Formula {
        match self {
            Formula::True
            | Formula::False
            | Formula::Less(..)
            | Formula::Equal(..)
            | Formula::Pred(..)
            | Formula::In(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.expand_macros()),
            Formula::And(f, g) => Formula::and(f.expand_macros(), g.expand_macros()),
            Formula::Or(f, g) => Formula::or(f.expand_macros(), g.expand_macros()),
            Formula::Implies(f, g) => Formula::implies(f.expand_macros(), g.expand_macros()),
            Formula::ExistsFo(v, f) => Formula::exists(v, f.expand_macros()),
            Formula::ForallFo(v, f) => Formula::forall(v, f.expand_macros()),
            Formula::ExistsSo(v, f) => Formula::exists_set(v, f.expand_macros()),
            Formula::ForallSo(v, f) => Formula::forall_set(v, f.expand_macros()),
            Formula::AtLeast(n, v, f) => {
                let body = f.expand_macros();
                if *n == 0 {
                    return Formula::True;
                }
                let mut avoid = body.names();
                avoid.insert(v.clone());
                let mut copies: Vec<Var> = Vec::new();
                for _ in 0..*n {
                    let c = fresh_name(v, &avoid);
                    avoid.insert(c.clone());
                    copies.push(c);
                }
                let mut parts = vec![asc_chain(&copies)];
                for c in &copies {
                    parts.push(body.subst(&[(v.clone(), c.clone())]));
                }
                Formula::exists_many(&copies, and_all(parts))
            }
        }
    }

    /// Checks predicate indices against `sig` and variable orders.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        if let Some(i) = self.max_predicate() {
            if i >= sig.len() {
                return Err(Error::UnknownPredicate(format!("P{}", i + 1)));
            }
        }
        self.check_orders()
    }

    fn check_orders(&self) -> Result<()> {
        let fo = |v: &Var| {
            if is_fo_name(v) {
                Ok(())
            } else {
                Err(Error::VariableOrder(format!(
                    "`{v}` used as a first-order variable"
                )))
            }
        };
        let so = |v: &Var| {
            if is_so_name(v) {
                Ok(())
            } else {
                Err(Error::VariableOrder(format!(
                    "`{v}` used as a second-order variable"
                )))
            }
        };
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Less(x, y) | Formula::Equal(x, y) => fo(x).and(fo(y)),
            Formula::Pred(_, x) => fo(x),
            Formula::In(s, x) => so(s).and(fo(x)),
            Formula::Not(f) => f.check_orders(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.check_orders()?;
                g.check_orders()
            }
            Formula::ExistsFo(v, f) | Formula::ForallFo(v, f) | Formula::AtLeast(_, v, f) => {
                fo(v)?;
                f.check_orders()
            }
            Formula::ExistsSo(v, f) | Formula::ForallSo(v, f) => {
                so(v)?;
                f.check_orders()
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Less(..)
            | Formula::Equal(..)
            | Formula::Pred(..)
            | Formula::In(..) => 1,
            Formula::Not(f)
            | Formula::ExistsFo(_, f)
            | Formula::ForallFo(_, f)
            | Formula::ExistsSo(_, f)
            | Formula::ForallSo(_, f)
            | Formula::AtLeast(_, _, f) => 1 + f.size(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                1 + f.size() + g.size()
            }
        }
    }
}

/// `base` itself if unused, else the first `base_n` not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Var>) -> Var {
    let stem = match base.rsplit_once('_') {
        Some((s, n)) if !s.is_empty() && n.chars().all(|c| c.is_ascii_digit()) => s,
        _ => base,
    };
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded candidates")
}

/// `count` fresh names `stem1, stem2, …` avoiding `avoid`; the chosen names
/// are added to `avoid`.
pub fn fresh_names(stem: &str, count: usize, avoid: &mut BTreeSet<Var>) -> Vec<Var> {
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let v = fresh_name(&format!("{stem}{i}"), avoid);
        avoid.insert(v.clone());
        out.push(v);
    }
    out
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render::render_default(self))
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render::render_default(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Formula {
        Formula::parse(text, &Signature::standard(2)).unwrap()
    }

    #[test]
    fn quantifier_rank_examples() {
        assert_eq!(Formula::pred(0, "x").quantifier_rank(), 0);
        assert_eq!(p("ex x. P1(x)").quantifier_rank(), 1);
        assert_eq!(p("ex x. (all y. x<y) & (EX X. X(x))").quantifier_rank(), 2);
        assert_eq!(p("atleast 2 x. P1(x)").quantifier_rank(), 2);
    }

    #[test]
    fn free_variable_examples() {
        assert_eq!(p("x < y").free_variables(), (vec!["x".into(), "y".into()], vec![]));
        assert_eq!(p("ex x. x < y").free_variables(), (vec!["y".into()], vec![]));
        assert_eq!(
            p("X(x) & ex y. X(y)").free_variables(),
            (vec!["x".into()], vec!["X".into()])
        );
    }

    #[test]
    fn substitute_examples() {
        let f = p("x<y");
        assert_eq!(
            f.substitute(&[("x".into(), "u".into())]).unwrap(),
            p("u<y")
        );
        let g = p("ex x. x<y");
        let h = g.substitute(&[("y".into(), "x".into())]).unwrap();
        match &h {
            Formula::ExistsFo(v, body) => {
                assert_ne!(v, "x");
                assert_eq!(**body, Formula::Less(v.clone(), "x".into()));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(g.substitute(&[("y".into(), "y".into())]).unwrap(), g);
        assert!(f.substitute(&[("x".into(), "X".into())]).is_err());
    }

    #[test]
    fn fresh_names_are_deterministic() {
        let avoid: BTreeSet<Var> = ["x".to_string(), "x_1".to_string()].into();
        assert_eq!(fresh_name("x", &avoid), "x_2");
        assert_eq!(fresh_name("y", &avoid), "y");
        assert_eq!(fresh_name("x_1", &avoid), "x_2");
    }

    #[test]
    fn expanding_counting_quantifier() {
        let f = p("atleast 2 x. P1(x)").expand_macros();
        assert_eq!(f.quantifier_rank(), 2);
        assert!(f.free_variables().0.is_empty());
    }
}
