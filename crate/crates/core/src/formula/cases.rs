use serde::Serialize;

use super::{and_all, asc_chain, Formula, Var};

/// A weak ordering of variables: equality classes listed in ascending
/// order. The representative of a class is its member that comes first in
/// the variable list the case was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VariableOrderCase {
    pub classes: Vec<Vec<Var>>,
}

impl VariableOrderCase {
    pub fn representatives(&self) -> Vec<Var> {
        self.classes.iter().map(|c| c[0].clone()).collect()
    }

    /// Renaming sending every variable to its class representative.
    pub fn merge_map(&self) -> Vec<(Var, Var)> {
        self.classes
            .iter()
            .flat_map(|c| c.iter().map(move |v| (v.clone(), c[0].clone())))
            .collect()
    }

    pub fn is_strict(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Equalities inside classes and the strict chain between
    /// representatives.
    pub fn constraint(&self) -> Formula {
        let mut parts = Vec::new();
        for c in &self.classes {
            for v in &c[1..] {
                parts.push(Formula::Equal(c[0].clone(), v.clone()));
            }
        }
        parts.push(asc_chain(&self.representatives()));
        and_all(parts)
    }

    pub fn describe(&self) -> String {
        self.classes
            .iter()
            .map(|c| c.join("="))
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

/// All weak orderings of `vars`, in a fixed canonical order.
pub fn weak_orderings(vars: &[Var]) -> Vec<VariableOrderCase> {
    let mut out = Vec::new();
    let mut assign = vec![0usize; vars.len()];
    fill(vars, 0, 0, &mut assign, &mut out);
    out
}

/// Assigns each variable a block label; labels `0..blocks` form a set
/// partition in restricted-growth form, then every permutation of blocks
/// gives an ordering.
fn fill(
    vars: &[Var],
    i: usize,
    blocks: usize,
    assign: &mut Vec<usize>,
    out: &mut Vec<VariableOrderCase>,
) {
    if i == vars.len() {
        let mut classes: Vec<Vec<Var>> = vec![Vec::new(); blocks];
        for (v, &b) in vars.iter().zip(assign.iter()) {
            classes[b].push(v.clone());
        }
        for perm in permutations(blocks) {
            out.push(VariableOrderCase {
                classes: perm.iter().map(|&b| classes[b].clone()).collect(),
            });
        }
        return;
    }
    for b in 0..=blocks {
        assign[i] = b;
        fill(vars, i + 1, blocks.max(b + 1), assign, out);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Splits `f` by the weak orderings of its free first-order variables.
///
/// Each entry carries the case and the formula over the case
/// representatives, conjoined with their strictly ascending order; it is
/// equivalent to `f` under the case constraint.
pub fn order_case_split(f: &Formula) -> Vec<(VariableOrderCase, Formula)> {
    let vars = f.free_fo();
    weak_orderings(&vars)
        .into_iter()
        .map(|case| {
            let merged = f.subst(&case.merge_map());
            let g = and_all([asc_chain(&case.representatives()), merged]);
            (case, g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Signature;

    fn names(v: &[&str]) -> Vec<Var> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn counts_are_ordered_bell_numbers() {
        assert_eq!(weak_orderings(&[]).len(), 1);
        assert_eq!(weak_orderings(&names(&["x"])).len(), 1);
        assert_eq!(weak_orderings(&names(&["x", "y"])).len(), 3);
        assert_eq!(weak_orderings(&names(&["x", "y", "z"])).len(), 13);
        assert_eq!(weak_orderings(&names(&["a", "b", "c", "d"])).len(), 75);
    }

    #[test]
    fn two_variable_cases() {
        let f = Formula::parse("x < y", &Signature::standard(0)).unwrap();
        let cases = order_case_split(&f);
        let descr: Vec<String> = cases.iter().map(|(c, _)| c.describe()).collect();
        assert_eq!(descr, ["x=y", "x < y", "y < x"]);
        let (merged, g) = &cases[0];
        assert_eq!(merged.representatives(), ["x"]);
        assert_eq!(*g, Formula::less("x", "x"));
    }
}
