//! Derived formula builders: conjunction chains, ordering constraints,
//! lexicographic comparison and tuple counting.

use std::collections::BTreeSet;

use super::{fresh_name, Formula, Var};

/// Conjunction of `parts`, flattened and with quantifier-free conjuncts
/// first (stable otherwise). `true` conjuncts are dropped; an empty list
/// gives `true`.
pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut flat = Vec::new();
    for p in parts {
        flatten_and(p, &mut flat);
    }
    if flat.contains(&Formula::False) {
        return Formula::False;
    }
    flat.retain(|f| *f != Formula::True);
    flat.sort_by_key(|f| f.quantifier_rank() > 0);
    let mut it = flat.into_iter();
    match it.next() {
        None => Formula::True,
        Some(first) => it.fold(first, Formula::and),
    }
}

fn flatten_and(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(*a, out);
            flatten_and(*b, out);
        }
        other => out.push(other),
    }
}

/// Disjunction of `parts`; an empty list gives `false`.
pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut parts: Vec<Formula> = parts.into_iter().filter(|f| *f != Formula::False).collect();
    if parts.contains(&Formula::True) {
        return Formula::True;
    }
    if parts.is_empty() {
        return Formula::False;
    }
    let first = parts.remove(0);
    parts.into_iter().fold(first, Formula::or)
}

/// `v1 < v2 < … < vn`.
pub fn asc_chain(vars: &[Var]) -> Formula {
    and_all(
        vars.windows(2)
            .map(|w| Formula::Less(w[0].clone(), w[1].clone())),
    )
}

/// `a1 = b1 ∧ … ∧ an = bn`.
pub fn equalities(pairs: &[(Var, Var)]) -> Formula {
    and_all(
        pairs
            .iter()
            .map(|(a, b)| Formula::Equal(a.clone(), b.clone())),
    )
}

/// Strict lexicographic order `a <lex b` on equal-length position tuples.
pub fn lex_less(a: &[Var], b: &[Var]) -> Formula {
    assert_eq!(a.len(), b.len(), "lexicographic comparison of unequal arity");
    let mut cases = Vec::new();
    for i in 0..a.len() {
        let mut parts: Vec<Formula> = (0..i)
            .map(|j| Formula::Equal(a[j].clone(), b[j].clone()))
            .collect();
        parts.push(Formula::Less(a[i].clone(), b[i].clone()));
        cases.push(and_all(parts));
    }
    or_all(cases)
}

/// First-match guarded disjunction
/// `⋁_j (⋀_{i<j} ¬guard_i) ∧ guard_j ∧ body_j`.
pub fn disjoint_guarded(parts: &[(Formula, Formula)]) -> Formula {
    let mut cases = Vec::new();
    for (j, (guard, body)) in parts.iter().enumerate() {
        let mut conj: Vec<Formula> = parts[..j]
            .iter()
            .map(|(g, _)| Formula::not(g.clone()))
            .collect();
        conj.push(guard.clone());
        conj.push(body.clone());
        cases.push(and_all(conj));
    }
    or_all(cases)
}

fn renamed_copy(body: &Formula, vars: &[Var], avoid: &mut BTreeSet<Var>) -> (Vec<Var>, Formula) {
    let mut copy = Vec::with_capacity(vars.len());
    for v in vars {
        let c = fresh_name(v, avoid);
        avoid.insert(c.clone());
        copy.push(c);
    }
    let map: Vec<(Var, Var)> = vars.iter().cloned().zip(copy.iter().cloned()).collect();
    let f = body.subst(&map);
    (copy, f)
}

/// At least `count` distinct tuples `vars` satisfy `body`, expressed with
/// lexicographically increasing witnesses.
pub fn at_least_tuples(count: usize, vars: &[Var], body: &Formula) -> Formula {
    if count == 0 {
        return Formula::True;
    }
    let mut avoid = body.names();
    avoid.extend(vars.iter().cloned());
    let mut copies = Vec::new();
    let mut parts = Vec::new();
    for _ in 0..count {
        let (c, f) = renamed_copy(body, vars, &mut avoid);
        parts.push(f);
        copies.push(c);
    }
    for w in copies.windows(2) {
        parts.insert(0, lex_less(&w[0], &w[1]));
    }
    let all: Vec<Var> = copies.into_iter().flatten().collect();
    Formula::exists_many(&all, and_all(parts))
}

/// `vars` is the `index`-th (1-based) tuple in lexicographic order among
/// the tuples satisfying `body`. When `max` bounds the number of such
/// tuples the redundant upper count is omitted.
pub fn nth_tuple(index: usize, max: Option<usize>, vars: &[Var], body: &Formula) -> Formula {
    assert!(index >= 1);
    let mut avoid = body.names();
    avoid.extend(vars.iter().cloned());
    let (copy, copy_body) = renamed_copy(body, vars, &mut avoid);
    let below = and_all([lex_less(&copy, vars), copy_body]);
    let mut parts = vec![body.clone()];
    if index > 1 {
        parts.push(at_least_tuples(index - 1, &copy, &below));
    }
    if max != Some(index) {
        parts.push(Formula::not(at_least_tuples(index, &copy, &below)));
    }
    and_all(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_all_orders_cheap_conjuncts_first() {
        let q = Formula::exists("z", Formula::less("x", "z"));
        let f = and_all([q.clone(), Formula::less("x", "y"), Formula::True]);
        assert_eq!(f, Formula::and(Formula::less("x", "y"), q));
        assert_eq!(and_all([]), Formula::True);
        assert_eq!(and_all([Formula::False, Formula::less("x", "y")]), Formula::False);
        assert_eq!(or_all([]), Formula::False);
    }

    #[test]
    fn chains() {
        let v: Vec<Var> = vec!["a".into(), "b".into(), "c".into()];
        assert_eq!(
            asc_chain(&v),
            Formula::and(Formula::less("a", "b"), Formula::less("b", "c"))
        );
        assert_eq!(asc_chain(&v[..1]), Formula::True);
    }
}
