//! MSO point interpretations and their dimension reduction.
//!
//! Only injective interpretations are supported: every output element is
//! one tuple of input positions from one component.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{and_all, nth_tuple, Formula, Var};
use crate::oracle::{enumerate_words, Prepared};
use crate::reparam::{minimal_reparameterization, serialize_big, Reparameterization};
use crate::word::{Signature, Word};
use crate::Limits;

/// Largest preimage bound for which `(q, i)` components are generated.
pub const MAX_COMPONENT_COPIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    pub vars: Vec<Var>,
    pub universe: Formula,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFormula {
    pub relation: String,
    pub components: Vec<String>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpretationSpec {
    pub signature: Signature,
    pub components: Vec<Component>,
    /// Output relation symbols with their arities.
    pub relations: BTreeMap<String, usize>,
    pub formulas: Vec<RelationFormula>,
}

/// Variables of argument `j` (1-based) of a relation formula.
pub fn argument_vars(vars: &[Var], j: usize) -> Vec<Var> {
    vars.iter().map(|v| format!("{v}_{j}")).collect()
}

fn spec_error(line: usize, msg: impl Into<String>) -> Error {
    Error::SpecFile { line, msg: msg.into() }
}

impl InterpretationSpec {
    /// Parses the text format. `sig` is used unless the file declares its
    /// own `signature` line before any formula.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let mut spec = InterpretationSpec {
            signature: sig.clone(),
            components: Vec::new(),
            relations: BTreeMap::new(),
            formulas: Vec::new(),
        };
        // Universe text per component, parsed once the signature is final.
        let mut pending: Vec<(usize, Option<Vec<Var>>, usize, Option<(usize, String)>)> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut relation_lines: Vec<(usize, String, usize, Option<(Vec<String>, String)>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (keyword, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            match keyword {
                "signature" => {
                    if !pending.is_empty() {
                        return Err(spec_error(line, "signature must precede components"));
                    }
                    spec.signature = Signature::parse(rest).map_err(|e| spec_error(line, e.to_string()))?;
                }
                "component" => {
                    let mut parts = rest.split_whitespace();
                    let name = parts
                        .next()
                        .ok_or_else(|| spec_error(line, "component needs a name"))?
                        .to_string();
                    if name.contains(['(', ')', ',']) {
                        return Err(spec_error(line, format!("invalid component name `{name}`")));
                    }
                    if names.contains(&name) {
                        return Err(spec_error(line, format!("duplicate component `{name}`")));
                    }
                    let mut dim = None;
                    let mut vars = None;
                    for p in parts {
                        if let Some(v) = p.strip_prefix("dim=") {
                            dim = Some(v.parse::<usize>().map_err(|_| spec_error(line, format!("bad dimension `{v}`")))?);
                        } else if let Some(v) = p.strip_prefix("vars=") {
                            let vs: Vec<Var> = if v.is_empty() {
                                Vec::new()
                            } else {
                                v.split(',').map(str::to_string).collect()
                            };
                            vars = Some(vs);
                        } else {
                            return Err(spec_error(line, format!("unexpected `{p}`")));
                        }
                    }
                    let dim = dim.ok_or_else(|| spec_error(line, "component needs dim=<d>"))?;
                    names.push(name);
                    pending.push((line, vars, dim, None));
                }
                "universe" => {
                    let last = pending
                        .last_mut()
                        .ok_or_else(|| spec_error(line, "universe before any component"))?;
                    if last.3.is_some() {
                        return Err(spec_error(line, "component already has a universe"));
                    }
                    last.3 = Some((line, rest.to_string()));
                }
                "relation" => {
                    let (head, body) = match rest.split_once(":=") {
                        Some((h, b)) => (h.trim(), Some(b.trim().to_string())),
                        None => (rest, None),
                    };
                    let (symbol, on) = match head.split_once(" on ") {
                        Some((s, o)) => (s.trim(), Some(o.trim())),
                        None => (head.trim(), None),
                    };
                    let (rname, arity) = symbol
                        .split_once('/')
                        .ok_or_else(|| spec_error(line, "relation needs <name>/<arity>"))?;
                    let arity: usize = arity
                        .trim()
                        .parse()
                        .map_err(|_| spec_error(line, format!("bad arity `{arity}`")))?;
                    let target = match (on, body) {
                        (Some(on), Some(body)) => {
                            let inner = on
                                .strip_prefix('(')
                                .and_then(|o| o.strip_suffix(')'))
                                .ok_or_else(|| spec_error(line, "expected `on (<q1>,...)`"))?;
                            let comps: Vec<String> = inner
                                .split(',')
                                .map(|c| c.trim().to_string())
                                .filter(|c| !c.is_empty())
                                .collect();
                            Some((comps, body))
                        }
                        (None, None) => None,
                        _ => return Err(spec_error(line, "expected `relation R/n on (...) := <formula>`")),
                    };
                    relation_lines.push((line, rname.trim().to_string(), arity, target));
                }
                "congruence" | "equivalence" => {
                    return Err(spec_error(
                        line,
                        "congruence interpretations are not supported; only injective interpretations are",
                    ));
                }
                other => return Err(spec_error(line, format!("unknown keyword `{other}`"))),
            }
        }
        let sig = spec.signature.clone();
        let parse_at = |line: usize, text: &str| -> Result<Formula> {
            Formula::parse(text, &sig).map_err(|e| spec_error(line, e.to_string()))
        };
        for (name, (line, vars, dim, universe)) in names.into_iter().zip(pending) {
            let (uline, utext) = universe.ok_or_else(|| spec_error(line, format!("component `{name}` has no universe")))?;
            let universe = parse_at(uline, &utext)?;
            let (free, sets) = universe.free_variables();
            if let Some(s) = sets.first() {
                return Err(spec_error(uline, format!("free set variable `{s}` in universe")));
            }
            let vars = vars.unwrap_or(free.clone());
            if vars.len() != dim {
                return Err(spec_error(
                    line,
                    format!("component `{name}` has dim={dim} but {} variables", vars.len()),
                ));
            }
            if let Some(v) = free.iter().find(|v| !vars.contains(v)) {
                return Err(spec_error(uline, format!("universe variable `{v}` is not a component variable")));
            }
            if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() {
                return Err(spec_error(line, "repeated component variable"));
            }
            spec.components.push(Component { name, vars, universe });
        }
        for (line, rname, arity, target) in relation_lines {
            if let Some(&a) = spec.relations.get(&rname) {
                if a != arity {
                    return Err(spec_error(line, format!("relation `{rname}` declared with arity {a}")));
                }
            }
            spec.relations.insert(rname.clone(), arity);
            let Some((comps, body)) = target else { continue };
            if comps.len() != arity {
                return Err(spec_error(line, format!("relation `{rname}` has arity {arity} but {} components", comps.len())));
            }
            let mut allowed = BTreeSet::new();
            for (j, c) in comps.iter().enumerate() {
                let comp = spec
                    .component(c)
                    .ok_or_else(|| spec_error(line, format!("unknown component `{c}`")))?;
                allowed.extend(argument_vars(&comp.vars, j + 1));
            }
            let formula = parse_at(line, &body)?;
            let (free, sets) = formula.free_variables();
            if let Some(s) = sets.first() {
                return Err(spec_error(line, format!("free set variable `{s}` in relation formula")));
            }
            if let Some(v) = free.iter().find(|v| !allowed.contains(*v)) {
                return Err(spec_error(line, format!("variable `{v}` is not an argument variable")));
            }
            if spec.formulas.iter().any(|f| f.relation == rname && f.components == comps) {
                return Err(spec_error(line, "duplicate relation formula"));
            }
            spec.formulas.push(RelationFormula {
                relation: rname,
                components: comps,
                formula,
            });
        }
        Ok(spec)
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Text format accepted by [`InterpretationSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("signature {}\n", self.signature);
        for c in &self.components {
            let _ = writeln!(out, "component {} dim={} vars={}", c.name, c.dim(), c.vars.join(","));
            let _ = writeln!(out, "universe {}", c.universe.render(&self.signature));
        }
        for (r, a) in &self.relations {
            let _ = writeln!(out, "relation {r}/{a}");
        }
        for f in &self.formulas {
            let _ = writeln!(
                out,
                "relation {}/{} on ({}) := {}",
                f.relation,
                f.components.len(),
                f.components.join(","),
                f.formula.render(&self.signature)
            );
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.components.iter().map(Component::dim).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Element {
    pub component: String,
    pub tuple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputStructure {
    pub elements: Vec<Element>,
    pub relations: BTreeMap<String, BTreeSet<Vec<Element>>>,
}

impl OutputStructure {
    pub fn dump(&self) -> String {
        let show = |e: &Element| {
            let t: Vec<String> = e.tuple.iter().map(|p| p.to_string()).collect();
            format!("{}({})", e.component, t.join(","))
        };
        let mut out = String::new();
        for e in &self.elements {
            let _ = writeln!(out, "element {}", show(e));
        }
        for (r, tuples) in &self.relations {
            for t in tuples {
                let args: Vec<String> = t.iter().map(show).collect();
                let _ = writeln!(out, "{r} {}", args.join(" "));
            }
        }
        out
    }
}

fn labels(w: &Word) -> Vec<u32> {
    w.0.iter().map(|l| l.0).collect()
}

/// All tuples over `0..len` of the given arity, lexicographically.
fn all_tuples(len: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..len).map(move |p| {
                    let mut u = t.clone();
                    u.push(p);
                    u
                })
            })
            .collect();
    }
    out
}

fn check_length(w: &Word) -> Result<()> {
    if w.len() > crate::oracle::MAX_WORD_LEN {
        return Err(Error::ResourceLimit {
            what: "word length",
            limit: crate::oracle::MAX_WORD_LEN,
            context: "interpretation".into(),
        });
    }
    Ok(())
}

/// Materializes the output structure on `w` with the oracle.
pub fn apply_interpretation(spec: &InterpretationSpec, w: &Word) -> Result<OutputStructure> {
    check_length(w)?;
    let lab = labels(w);
    let mut elements = Vec::new();
    let mut by_component: BTreeMap<&str, Vec<Vec<usize>>> = BTreeMap::new();
    for c in &spec.components {
        let p = Prepared::new(&c.universe, &c.vars)?;
        let tuples: Vec<Vec<usize>> = all_tuples(w.len(), c.dim())
            .into_iter()
            .filter(|t| p.eval_tuple(&lab, t, &[]))
            .collect();
        elements.extend(tuples.iter().map(|t| Element {
            component: c.name.clone(),
            tuple: t.clone(),
        }));
        by_component.insert(&c.name, tuples);
    }
    let mut relations: BTreeMap<String, BTreeSet<Vec<Element>>> =
        spec.relations.keys().map(|r| (r.clone(), BTreeSet::new())).collect();
    for rf in &spec.formulas {
        let comps: Vec<&Component> = rf
            .components
            .iter()
            .map(|n| spec.component(n).expect("validated component"))
            .collect();
        let order: Vec<Var> = comps
            .iter()
            .enumerate()
            .flat_map(|(j, c)| argument_vars(&c.vars, j + 1))
            .collect();
        let p = Prepared::new(&rf.formula, &order)?;
        let mut combos: Vec<Vec<&Vec<usize>>> = vec![Vec::new()];
        for c in &comps {
            let pool = &by_component[c.name.as_str()];
            combos = combos
                .into_iter()
                .flat_map(|combo| {
                    pool.iter().map(move |t| {
                        let mut next = combo.clone();
                        next.push(t);
                        next
                    })
                })
                .collect();
        }
        let set = relations.entry(rf.relation.clone()).or_default();
        for combo in combos {
            let flat: Vec<usize> = combo.iter().flat_map(|t| t.iter().copied()).collect();
            if p.eval_tuple(&lab, &flat, &[]) {
                set.insert(
                    combo
                        .iter()
                        .zip(&comps)
                        .map(|(t, c)| Element {
                            component: c.name.clone(),
                            tuple: t.to_vec(),
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(OutputStructure { elements, relations })
}

/// Bookkeeping of one reduced component `(q, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedComponent {
    pub name: String,
    pub source: String,
    pub index: usize,
}

/// Reparameterization used for one source component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReparam {
    pub component: String,
    pub domain: Vec<Var>,
    pub image: Vec<Var>,
    pub graph: Formula,
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub spec: InterpretationSpec,
    pub components: Vec<ReducedComponent>,
    pub reparameterizations: Vec<ComponentReparam>,
}

/// Builds the equivalent interpretation whose components are `(q, i)` for
/// `i ≤ N_q`, over the image variables of the reparameterization of each
/// universe.
pub fn reduce_interpretation(spec: &InterpretationSpec, d: usize, limits: &Limits) -> Result<Reduction> {
    let mut reps: Vec<(Component, Reparameterization, usize)> = Vec::new();
    for c in &spec.components {
        // Component variables absent from the universe range freely.
        let mut parts = vec![c.universe.clone()];
        let free = c.universe.free_fo();
        for v in c.vars.iter().filter(|v| !free.contains(v)) {
            parts.push(Formula::Equal(v.clone(), v.clone()));
        }
        let universe = and_all(parts);
        let rep = minimal_reparameterization(&universe, &spec.signature, limits)?;
        if rep.dimension() > d {
            return Err(Error::DimensionTooSmall {
                component: c.name.clone(),
                minimal: rep.dimension(),
                requested: d,
            });
        }
        let copies = rep
            .bound
            .to_usize()
            .filter(|&n| n <= MAX_COMPONENT_COPIES)
            .ok_or_else(|| Error::ResourceLimit {
                what: "preimage bound of a component",
                limit: MAX_COMPONENT_COPIES,
                context: c.name.clone(),
            })?;
        reps.push((c.clone(), rep, copies));
    }
    let mut used: BTreeSet<String> = spec.components.iter().map(|c| c.name.clone()).collect();
    let mut names: BTreeMap<(String, usize), String> = BTreeMap::new();
    let mut components = Vec::new();
    let mut reduced = Vec::new();
    for (c, rep, copies) in &reps {
        for i in 1..=*copies {
            let mut name = format!("{}.{i}", c.name);
            while used.contains(&name) {
                name.push('\'');
            }
            used.insert(name.clone());
            names.insert((c.name.clone(), i), name.clone());
            let universe = Formula::exists_many(&c.vars, nth_tuple(i, Some(*copies), &c.vars, &rep.graph));
            components.push(Component {
                name: name.clone(),
                vars: rep.image.clone(),
                universe,
            });
            reduced.push(ReducedComponent {
                name,
                source: c.name.clone(),
                index: i,
            });
        }
    }
    let find = |name: &str| reps.iter().find(|(c, _, _)| c.name == name).expect("validated component");
    let mut formulas = Vec::new();
    for rf in &spec.formulas {
        let args: Vec<_> = rf.components.iter().map(|n| find(n)).collect();
        let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
        for (_, _, copies) in &args {
            choices = choices
                .into_iter()
                .flat_map(|ch| {
                    (1..=*copies).map(move |i| {
                        let mut next = ch.clone();
                        next.push(i);
                        next
                    })
                })
                .collect();
        }
        for choice in choices {
            let mut parts = Vec::new();
            let mut bound_vars = Vec::new();
            for (j, ((c, rep, copies), &i)) in args.iter().zip(&choice).enumerate() {
                let xs = argument_vars(&c.vars, j + 1);
                let ys = argument_vars(&rep.image, j + 1);
                let renaming: Vec<(Var, Var)> = c
                    .vars
                    .iter()
                    .cloned()
                    .zip(xs.iter().cloned())
                    .chain(rep.image.iter().cloned().zip(ys.iter().cloned()))
                    .collect();
                let graph = rep.graph.substitute(&renaming)?;
                parts.push(nth_tuple(i, Some(*copies), &xs, &graph));
                bound_vars.extend(xs);
            }
            parts.push(rf.formula.clone());
            formulas.push(RelationFormula {
                relation: rf.relation.clone(),
                components: args
                    .iter()
                    .zip(&choice)
                    .map(|((c, _, _), &i)| names[&(c.name.clone(), i)].clone())
                    .collect(),
                formula: Formula::exists_many(&bound_vars, and_all(parts)),
            });
        }
    }
    Ok(Reduction {
        spec: InterpretationSpec {
            signature: spec.signature.clone(),
            components,
            relations: spec.relations.clone(),
            formulas,
        },
        components: reduced,
        reparameterizations: reps
            .into_iter()
            .map(|(c, rep, _)| ComponentReparam {
                component: c.name,
                domain: c.vars,
                image: rep.image,
                graph: rep.graph,
                bound: rep.bound,
            })
            .collect(),
    })
}

/// Map from elements of the second structure to elements of the first.
#[derive(Debug, Clone, Copy)]
pub enum ElementMap<'a> {
    Identity,
    /// `(q, i)`-element `ȳ` ↦ the `i`-th `G_q`-preimage of `ȳ`.
    Reduction(&'a Reduction),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceFailure {
    pub word: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub ok: bool,
    pub words_checked: u64,
    pub max_len: usize,
    pub elements_checked: usize,
    pub failure: Option<EquivalenceFailure>,
}

/// Checks on every word up to `max_len` that `map` is a bijection from the
/// output of `b` onto the output of `a` preserving and reflecting every
/// relation.
pub fn check_equivalence(
    a: &InterpretationSpec,
    b: &InterpretationSpec,
    map: ElementMap<'_>,
    max_len: usize,
) -> Result<EquivalenceReport> {
    if a.relations != b.relations {
        return Err(Error::Arity("interpretations have different output signatures".into()));
    }
    if a.signature != b.signature {
        return Err(Error::AlphabetMismatch("interpretations read different signatures".into()));
    }
    let prepared_graphs: BTreeMap<String, (Prepared, &ComponentReparam)> = match map {
        ElementMap::Identity => BTreeMap::new(),
        ElementMap::Reduction(r) => r
            .reparameterizations
            .iter()
            .map(|cr| {
                let order: Vec<Var> = cr.domain.iter().chain(&cr.image).cloned().collect();
                Ok((cr.component.clone(), (Prepared::new(&cr.graph, &order)?, cr)))
            })
            .collect::<Result<_>>()?,
    };
    let mut words_checked = 0;
    let mut elements_checked = 0;
    for w in enumerate_words(&a.signature, max_len)? {
        words_checked += 1;
        let checked = elements_checked;
        let fail = |reason: String| EquivalenceReport {
            ok: false,
            words_checked,
            max_len,
            elements_checked: checked,
            failure: Some(EquivalenceFailure {
                word: a.signature.render_word(&w),
                reason,
            }),
        };
        let out_a = apply_interpretation(a, &w)?;
        let out_b = apply_interpretation(b, &w)?;
        let lab = labels(&w);
        let mut pi: BTreeMap<Element, Element> = BTreeMap::new();
        for e in &out_b.elements {
            let image = match map {
                ElementMap::Identity => Some(e.clone()),
                ElementMap::Reduction(r) => {
                    let rc = r
                        .components
                        .iter()
                        .find(|c| c.name == e.component)
                        .ok_or_else(|| Error::Internal(format!("unknown reduced component `{}`", e.component)))?;
                    let (graph, cr) = &prepared_graphs[&rc.source];
                    all_tuples(w.len(), cr.domain.len())
                        .into_iter()
                        .filter(|x| {
                            let t: Vec<usize> = x.iter().chain(&e.tuple).copied().collect();
                            graph.eval_tuple(&lab, &t, &[])
                        })
                        .nth(rc.index - 1)
                        .map(|x| Element {
                            component: rc.source.clone(),
                            tuple: x,
                        })
                }
            };
            let Some(image) = image else {
                return Ok(fail(format!("element {e:?} has no image")));
            };
            pi.insert(e.clone(), image);
        }
        elements_checked += out_b.elements.len();
        let targets: BTreeSet<&Element> = pi.values().collect();
        if targets.len() != pi.len() {
            return Ok(fail("the map is not injective".into()));
        }
        let expected: BTreeSet<&Element> = out_a.elements.iter().collect();
        if targets != expected {
            return Ok(fail("the map is not onto the first output".into()));
        }
        for (r, tuples) in &out_b.relations {
            let mapped: BTreeSet<Vec<Element>> = tuples
                .iter()
                .map(|t| t.iter().map(|e| pi[e].clone()).collect())
                .collect();
            if mapped != out_a.relations[r] {
                return Ok(fail(format!("relation `{r}` is not preserved")));
            }
        }
    }
    Ok(EquivalenceReport {
        ok: true,
        words_checked,
        max_len,
        elements_checked,
        failure: None,
    })
}

/// Interpretations used by the self-test, with the dimension each reduces
/// to.
pub const BATTERY: &[(&str, &str, usize)] = &[
    (
        "successor pairs",
        "signature P1\n\
         component S dim=2 vars=x,y\n\
         universe x<y & ~ex z. (x<z & z<y)\n\
         relation E/2 on (S,S) := y_1 = x_2\n",
        1,
    ),
    (
        "marked positions",
        "signature P1\n\
         component A dim=1 vars=x\n\
         universe P1(x)\n\
         relation Lt/2 on (A,A) := x_1 < x_2\n",
        1,
    ),
    (
        "endpoints and labels",
        "signature P1\n\
         component B dim=2 vars=x,y\n\
         universe x<y & (~ex z. z<x) & ~ex z. y<z\n\
         component C dim=1 vars=x\n\
         universe P1(x)\n\
         relation Inside/2 on (B,C) := x_1 < x_2 & x_2 < y_1\n",
        1,
    ),
    (
        "neighbours",
        "signature P1\n\
         component N dim=2 vars=x,y\n\
         universe (x<y & ~ex z. (x<z & z<y)) | (y<x & ~ex z. (y<z & z<x))\n\
         relation Same/2 on (N,N) := x_1 = x_2\n",
        1,
    ),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> InterpretationSpec {
        InterpretationSpec::parse(text, &Signature::standard(1)).unwrap()
    }

    #[test]
    fn materializes_example() {
        let s = spec("component A dim=1\nuniverse P1(x)\nrelation E/2 on (A,A) := x_1 < x_2\n");
        let w = s.signature.parse_word("[P1, ., P1]").unwrap();
        let out = apply_interpretation(&s, &w).unwrap();
        assert_eq!(out.elements.len(), 2);
        let e = |p| Element {
            component: "A".into(),
            tuple: vec![p],
        };
        assert_eq!(out.relations["E"], BTreeSet::from([vec![e(0), e(2)]]));
    }

    #[test]
    fn sentences_and_empty_universes() {
        let s = spec("component Z dim=0\nuniverse ex x. P1(x)\ncomponent U dim=1\nuniverse P1(x) & ~P1(x)\n");
        let w = s.signature.parse_word("[., P1]").unwrap();
        let out = apply_interpretation(&s, &w).unwrap();
        assert_eq!(out.elements, vec![Element { component: "Z".into(), tuple: vec![] }]);
    }

    #[test]
    fn parse_errors() {
        let sig = Signature::standard(1);
        let bad = [
            "universe P1(x)\n",
            "component A dim=2\nuniverse P1(x)\n",
            "component A dim=1\nuniverse P1(x)\ncongruence x_1 = x_2\n",
            "component A dim=1\nuniverse P1(x)\nrelation E/2 on (A,B) := x_1 < x_2\n",
            "component A dim=1\nuniverse P1(x)\nrelation E/2 on (A,A) := x_1 < y_2\n",
            "component A dim=1\nuniverse P1(x\n",
        ];
        for text in bad {
            assert!(matches!(InterpretationSpec::parse(text, &sig), Err(Error::SpecFile { .. })), "{text}");
        }
    }

    #[test]
    fn text_round_trip() {
        for (_, text, _) in BATTERY {
            let s = spec(text);
            assert_eq!(spec(&s.to_text()), s);
        }
    }

    #[test]
    fn successor_reduction() {
        let s = spec(BATTERY[0].1);
        let r = reduce_interpretation(&s, 1, &Limits::default()).unwrap();
        assert_eq!(r.spec.dimension(), 1);
        assert_eq!(r.components.len(), 1);
        let report = check_equivalence(&s, &r.spec, ElementMap::Reduction(&r), 5).unwrap();
        assert!(report.ok, "{report:?}");
        assert!(check_equivalence(&s, &s, ElementMap::Identity, 4).unwrap().ok);
    }

    #[test]
    fn insufficient_dimension() {
        let s = spec("component A dim=2\nuniverse x<y\n");
        assert!(matches!(
            reduce_interpretation(&s, 1, &Limits::default()),
            Err(Error::DimensionTooSmall { minimal: 2, requested: 1, .. })
        ));
    }

    #[test]
    fn corrupted_index_formula_is_caught() {
        let s = spec(BATTERY[3].1);
        let mut r = reduce_interpretation(&s, 1, &Limits::default()).unwrap();
        assert_eq!(r.components.len(), 2);
        // The mixed-copy formula now selects the first preimage twice.
        let pick = |r: &Reduction, a: &str, b: &str| {
            r.spec.formulas.iter().position(|f| f.components == [a, b]).unwrap()
        };
        let (same, mixed) = (pick(&r, "N.1", "N.1"), pick(&r, "N.1", "N.2"));
        r.spec.formulas[mixed].formula = r.spec.formulas[same].formula.clone();
        let report = check_equivalence(&s, &r.spec, ElementMap::Reduction(&r), 4).unwrap();
        assert!(!report.ok);
    }
}
