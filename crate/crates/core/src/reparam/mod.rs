//! Minimal functional reparameterizations.
//!
//! A reparameterization of `f(x̄)` is a formula `G(x̄, ȳ)` defining a partial
//! function `x̄ ↦ ȳ` with the same domain as `f` and with at most `N`
//! preimages per `ȳ`. The procedure splits `f` by the order of its
//! variables, then per case either keeps all variables (some accepting type
//! tuple has only pumpable adjacent pairs) or eliminates one variable whose
//! adjacent pair is never pumpable and recurses on the projection.

mod bound;
mod guards;
mod normal_form;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

pub use bound::exact_max_preimage;
pub use normal_form::{Disjunct, NormalForm};

use crate::error::{Error, Result};
use crate::formula::{
    and_all, asc_chain, disjoint_guarded, equalities, fresh_names, or_all, order_case_split,
    Formula, Var,
};
use crate::monoid::ramsey_bound_big;
use crate::word::Signature;
use crate::Limits;

/// Note attached to reports whenever a variable was eliminated.
pub const PAIR_INDEXING_NOTE: &str = "pair indexing: x_i is eliminated when the pair (tau_{i-1}, tau_i) of the intervals ending at and starting at x_i is not pumpable; the shifted pair (tau_i, tau_{i+1}) would be out of range for the last variable and does not control the positions of x_i";

/// Monoids above this size get no explicit Ramsey certificate.
const RAMSEY_CERTIFICATE_LIMIT: usize = 2000;

pub(crate) fn serialize_big<S: Serializer>(b: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = b.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

fn serialize_opt_big<S: Serializer>(
    b: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(b) => serialize_big(b, s),
        None => s.serialize_none(),
    }
}

/// One step of the construction, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// Keeps every variable: `G = f ∧ ȳ = x̄`.
    Trivial {
        arity: usize,
        monoid_size: Option<usize>,
        all_pumpable: Option<Disjunct>,
    },
    /// Closed formula: no variables to map.
    Sentence {
        satisfiable: bool,
    },
    Unsatisfiable,
    OrderSplit {
        cases: Vec<CaseStep>,
    },
    Eliminate {
        variable: Var,
        index: usize,
        monoid_size: usize,
        #[serde(serialize_with = "serialize_big")]
        disjuncts: BigUint,
        #[serde(serialize_with = "serialize_big")]
        bound: BigUint,
        exact: bool,
        #[serde(serialize_with = "serialize_opt_big")]
        ramsey_certificate: Option<BigUint>,
    },
    /// Per-branch elimination where no single index works for all tuples;
    /// branch `j` holds the tuples whose first non-pumpable pair is at
    /// `indices[j]`.
    GroupSplit {
        indices: Vec<usize>,
        #[serde(serialize_with = "serialize_big")]
        bound: BigUint,
        exact: bool,
    },
    DisjCombine {
        parts: Vec<Step>,
        #[serde(serialize_with = "serialize_big")]
        bound: BigUint,
    },
    Compose {
        first: Box<Step>,
        then: Box<Step>,
        #[serde(serialize_with = "serialize_big")]
        bound: BigUint,
    },
    Tighten {
        #[serde(serialize_with = "serialize_big")]
        propagated: BigUint,
        #[serde(serialize_with = "serialize_opt_big")]
        exact: Option<BigUint>,
        inner: Box<Step>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseStep {
    pub case: String,
    pub result: Option<Box<Step>>,
}

impl Step {
    fn visit(&self, f: &mut dyn FnMut(&Step)) {
        f(self);
        match self {
            Step::OrderSplit { cases } => {
                for c in cases {
                    if let Some(r) = &c.result {
                        r.visit(f);
                    }
                }
            }
            Step::DisjCombine { parts, .. } => parts.iter().for_each(|p| p.visit(f)),
            Step::Compose { first, then, .. } => {
                first.visit(f);
                then.visit(f);
            }
            Step::Tighten { inner, .. } => inner.visit(f),
            _ => {}
        }
    }

    pub fn eliminations(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |s| {
            if matches!(s, Step::Eliminate { .. } | Step::GroupSplit { .. }) {
                n += 1;
            }
        });
        n
    }

    pub fn uses_group_split(&self) -> bool {
        let mut found = false;
        self.visit(&mut |s| found |= matches!(s, Step::GroupSplit { .. }));
        found
    }
}

/// How the graph relates image and domain variables.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    /// `graph = source ∧ ⋀ image_j = domain_{map[j]}`.
    Projection(Vec<usize>),
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reparameterization {
    pub source: Formula,
    pub domain: Vec<Var>,
    pub image: Vec<Var>,
    pub graph: Formula,
    pub bound: BigUint,
    pub provenance: Step,
    shape: Shape,
}

impl Reparameterization {
    pub fn dimension(&self) -> usize {
        self.image.len()
    }

    /// `source ∧ ⋀ image_j = domain_j` with preimage bound 1.
    pub fn trivial(source: &Formula, domain: &[Var], image: &[Var]) -> Self {
        assert_eq!(domain.len(), image.len());
        Self::projection(
            source,
            domain,
            image,
            (0..domain.len()).collect(),
            BigUint::one(),
            Step::Trivial {
                arity: domain.len(),
                monoid_size: None,
                all_pumpable: None,
            },
        )
    }

    fn projection(
        source: &Formula,
        domain: &[Var],
        image: &[Var],
        map: Vec<usize>,
        bound: BigUint,
        provenance: Step,
    ) -> Self {
        let eqs: Vec<(Var, Var)> = image
            .iter()
            .zip(&map)
            .map(|(y, &j)| (y.clone(), domain[j].clone()))
            .collect();
        Reparameterization {
            source: source.clone(),
            domain: domain.to_vec(),
            image: image.to_vec(),
            graph: and_all([source.clone(), equalities(&eqs)]),
            bound,
            provenance,
            shape: Shape::Projection(map),
        }
    }

    /// Reparameterization of an unsatisfiable formula.
    pub fn unsatisfiable(source: &Formula, domain: &[Var]) -> Self {
        Reparameterization {
            source: source.clone(),
            domain: domain.to_vec(),
            image: Vec::new(),
            graph: Formula::False,
            bound: BigUint::zero(),
            provenance: Step::Unsatisfiable,
            shape: Shape::General,
        }
    }

    /// Renames image variables (fresh names are the caller's concern).
    pub fn rename_image(&self, names: &[Var]) -> Result<Self> {
        if names.len() != self.image.len() {
            return Err(Error::Arity("image renaming of the wrong length".into()));
        }
        let map: Vec<(Var, Var)> = self.image.iter().cloned().zip(names.iter().cloned()).collect();
        Ok(Reparameterization {
            graph: self.graph.substitute(&map)?,
            image: names.to_vec(),
            ..self.clone()
        })
    }

    pub fn erratum_notes(&self) -> Vec<String> {
        if self.provenance.eliminations() > 0 {
            vec![PAIR_INDEXING_NOTE.to_string()]
        } else {
            Vec::new()
        }
    }
}

/// `G_i`: keeps every variable except the `i`-th (1-based) as image
/// variables, in order.
pub fn eliminate_variable(f: &Formula, domain: &[Var], i: usize, image: &[Var]) -> Result<Formula> {
    let map = elimination_map(domain.len(), i)?;
    if image.len() != map.len() {
        return Err(Error::Arity(format!(
            "eliminating one of {} variables needs {} image variables",
            domain.len(),
            map.len()
        )));
    }
    let eqs: Vec<(Var, Var)> = image
        .iter()
        .zip(&map)
        .map(|(y, &j)| (y.clone(), domain[j].clone()))
        .collect();
    Ok(and_all([f.clone(), equalities(&eqs)]))
}

fn elimination_map(arity: usize, i: usize) -> Result<Vec<usize>> {
    if i == 0 || i > arity {
        return Err(Error::IndexOutOfRange { index: i, arity });
    }
    Ok((0..arity).filter(|&j| j != i - 1).collect())
}

/// Guarded combination: part `j` applies where its guard is the first to
/// hold. Image tuples are padded to the largest dimension by repeating the
/// last image variable (the first domain variable for dimension 0).
pub fn combine_disjuncts(
    source: &Formula,
    domain: &[Var],
    parts: Vec<(Formula, Reparameterization)>,
    avoid: &mut BTreeSet<Var>,
) -> Result<Reparameterization> {
    if parts.is_empty() {
        return Ok(Reparameterization::unsatisfiable(source, domain));
    }
    for (_, r) in &parts {
        if r.domain != domain {
            return Err(Error::Arity("combined parts must share their domain".into()));
        }
    }
    let dim = parts.iter().map(|(_, r)| r.dimension()).max().unwrap_or(0);
    if parts.len() == 1 && parts[0].0 == Formula::True {
        return Ok(parts.into_iter().next().expect("one part").1);
    }
    let image = fresh_names("u", dim, avoid);
    let mut guarded = Vec::new();
    let mut steps = Vec::new();
    let mut bound = BigUint::zero();
    for (guard, r) in parts {
        let renamed = r.rename_image(&image[..r.dimension()])?;
        let pad_source = if r.dimension() == 0 {
            domain.first().cloned()
        } else {
            Some(image[r.dimension() - 1].clone())
        };
        let padding: Vec<(Var, Var)> = match pad_source {
            Some(v) => image[r.dimension()..]
                .iter()
                .map(|u| (u.clone(), v.clone()))
                .collect(),
            None => Vec::new(),
        };
        guarded.push((guard, and_all([renamed.graph, equalities(&padding)])));
        bound += &r.bound;
        steps.push(r.provenance);
    }
    Ok(Reparameterization {
        source: source.clone(),
        domain: domain.to_vec(),
        image,
        graph: disjoint_guarded(&guarded),
        bound: bound.clone(),
        provenance: Step::DisjCombine { parts: steps, bound },
        shape: Shape::General,
    })
}

/// Composes `g` (of `f`) with `h` (of `∃x̄ g`, over `g`'s image).
pub fn compose(g: &Reparameterization, h: &Reparameterization) -> Result<Reparameterization> {
    if h.domain != g.image {
        return Err(Error::Arity(format!(
            "composition expects domain {:?}, got {:?}",
            g.image, h.domain
        )));
    }
    let bound = &g.bound * &h.bound;
    let provenance = Step::Compose {
        first: Box::new(g.provenance.clone()),
        then: Box::new(h.provenance.clone()),
        bound: bound.clone(),
    };
    // Image variables of `h` must not collide with names of `g`.
    let mut taken = g.graph.names();
    taken.extend(g.domain.iter().cloned());
    taken.extend(g.image.iter().cloned());
    let clash = h.image.iter().any(|u| taken.contains(u));
    let h = if clash {
        let mut avoid = taken.clone();
        avoid.extend(h.graph.names());
        let names = fresh_names("u", h.image.len(), &mut avoid);
        h.rename_image(&names)?
    } else {
        h.clone()
    };
    match (&g.shape, &h.shape) {
        (Shape::Projection(gm), Shape::Projection(hm)) => {
            let map: Vec<usize> = hm.iter().map(|&j| gm[j]).collect();
            Ok(Reparameterization::projection(
                &g.source, &g.domain, &h.image, map, bound, provenance,
            ))
        }
        (Shape::Projection(gm), Shape::General) => {
            let sub: Vec<(Var, Var)> = g
                .image
                .iter()
                .zip(gm)
                .map(|(y, &j)| (y.clone(), g.domain[j].clone()))
                .collect();
            Ok(Reparameterization {
                source: g.source.clone(),
                domain: g.domain.clone(),
                image: h.image.clone(),
                graph: and_all([g.source.clone(), h.graph.substitute(&sub)?]),
                bound,
                provenance,
                shape: Shape::General,
            })
        }
        (Shape::General, Shape::Projection(hm)) => {
            // `h` implies its source, which `g` already implies: keep only
            // the image equalities, substituted into `g`.
            let sub: Vec<(Var, Var)> = hm
                .iter()
                .zip(&h.image)
                .map(|(&j, u)| (g.image[j].clone(), u.clone()))
                .collect();
            let rest: Vec<Var> = (0..g.image.len())
                .filter(|j| !hm.contains(j))
                .map(|j| g.image[j].clone())
                .collect();
            let graph = Formula::exists_many(&rest, g.graph.substitute(&sub)?);
            Ok(Reparameterization {
                source: g.source.clone(),
                domain: g.domain.clone(),
                image: h.image.clone(),
                graph,
                bound,
                provenance,
                shape: Shape::General,
            })
        }
        (Shape::General, Shape::General) => Ok(Reparameterization {
            source: g.source.clone(),
            domain: g.domain.clone(),
            image: h.image.clone(),
            graph: Formula::exists_many(&g.image, and_all([g.graph.clone(), h.graph.clone()])),
            bound,
            provenance,
            shape: Shape::General,
        }),
    }
}

/// All accepting segment-type tuples of `f` over `vars` (which `f` must
/// order ascendingly).
pub fn local_normal_form(f: &Formula, vars: &[Var], sig: &Signature, limits: &Limits) -> Result<Vec<Disjunct>> {
    NormalForm::new(f, vars, sig, limits)?.disjuncts(limits.disjuncts)
}

struct Engine<'a> {
    sig: &'a Signature,
    limits: &'a Limits,
    avoid: BTreeSet<Var>,
}

impl Engine<'_> {
    fn max_preimage(&self, graph: &Formula, domain: &[Var], image: &[Var]) -> Result<Option<BigUint>> {
        exact_max_preimage(graph, domain, image, self.sig.len(), self.limits)
    }

    fn ramsey_certificate(&self, nf: &NormalForm) -> Result<Option<BigUint>> {
        if nf.monoid().size() > RAMSEY_CERTIFICATE_LIMIT {
            return Ok(None);
        }
        Ok(Some(nf.count() * ramsey_bound_big(nf.monoid().size() as u64)?))
    }

    fn bound_or_certificate(
        &self,
        graph: &Formula,
        domain: &[Var],
        image: &[Var],
        certificate: &Option<BigUint>,
    ) -> Result<(BigUint, bool)> {
        match self.max_preimage(graph, domain, image)? {
            Some(b) => Ok((b, true)),
            None => match certificate {
                Some(c) => Ok((c.clone(), false)),
                None => Err(Error::ResourceLimit {
                    what: "preimage bound",
                    limit: self.limits.ambiguity_vectors,
                    context: graph.to_string(),
                }),
            },
        }
    }

    /// Reparameterization of `f`, whose free variables `vars` it orders
    /// strictly ascendingly.
    fn ascending(&mut self, f: &Formula, vars: &[Var]) -> Result<Reparameterization> {
        if vars.is_empty() {
            let d = crate::compiler::compile_with(f, &[], self.sig, &self.limits.dfa)?;
            if d.is_empty() {
                return Ok(Reparameterization::unsatisfiable(f, vars));
            }
            return Ok(Reparameterization {
                source: f.clone(),
                domain: Vec::new(),
                image: Vec::new(),
                graph: f.clone(),
                bound: BigUint::one(),
                provenance: Step::Sentence { satisfiable: true },
                shape: Shape::Projection(Vec::new()),
            });
        }
        let nf = NormalForm::new(f, vars, self.sig, self.limits)?;
        if !nf.is_satisfiable() {
            return Ok(Reparameterization::unsatisfiable(f, vars));
        }
        if let Some(d) = nf.all_pumpable_disjunct() {
            let image = fresh_names("u", vars.len(), &mut self.avoid);
            let mut r = Reparameterization::trivial(f, vars, &image);
            r.provenance = Step::Trivial {
                arity: vars.len(),
                monoid_size: Some(nf.monoid().size()),
                all_pumpable: Some(d),
            };
            return Ok(r);
        }
        let certificate = self.ramsey_certificate(&nf)?;
        if let Some(&i) = nf.universally_eliminable().first() {
            let image = fresh_names("u", vars.len() - 1, &mut self.avoid);
            let map = elimination_map(vars.len(), i)?;
            let graph = eliminate_variable(f, vars, i, &image)?;
            let (bound, exact) = self.bound_or_certificate(&graph, vars, &image, &certificate)?;
            let step = Step::Eliminate {
                variable: vars[i - 1].clone(),
                index: i,
                monoid_size: nf.monoid().size(),
                disjuncts: nf.count(),
                bound: bound.clone(),
                exact,
                ramsey_certificate: certificate,
            };
            let g = Reparameterization::projection(f, vars, &image, map.clone(), bound, step);
            let projected = self.project(f, vars, i, &image)?;
            let h = self.ascending(&projected, &image)?;
            return compose(&g, &h);
        }
        self.group_split(f, vars, &nf, certificate)
    }

    /// `asc(image) ∧ ∃x_i. f[x_j ↦ image]` for the elimination of `x_i`.
    fn project(&self, f: &Formula, vars: &[Var], i: usize, image: &[Var]) -> Result<Formula> {
        let map = elimination_map(vars.len(), i)?;
        let renaming: Vec<(Var, Var)> = map
            .iter()
            .zip(image)
            .map(|(&j, u)| (vars[j].clone(), u.clone()))
            .collect();
        Ok(and_all([
            asc_chain(image),
            Formula::exists(&vars[i - 1], f.substitute(&renaming)?),
        ]))
    }

    fn group_split(
        &mut self,
        f: &Formula,
        vars: &[Var],
        nf: &NormalForm,
        certificate: Option<BigUint>,
    ) -> Result<Reparameterization> {
        let indices = nf.first_blocking_indices();
        let image = fresh_names("u", vars.len() - 1, &mut self.avoid);
        let mut guards = Vec::new();
        for &i in &indices {
            guards.push(guards::blocking_guard(nf, i, vars, self.sig)?);
        }
        let mut guarded = Vec::new();
        let mut projections = Vec::new();
        for (j, &i) in indices.iter().enumerate() {
            guarded.push((guards[j].clone(), eliminate_variable(f, vars, i, &image)?));
            let mut branch: Vec<Formula> = guards[..j].iter().cloned().map(Formula::not).collect();
            branch.push(guards[j].clone());
            branch.push(f.clone());
            projections.push(self.project(&and_all(branch), vars, i, &image)?);
        }
        let graph = disjoint_guarded(&guarded);
        let (bound, exact) = self.bound_or_certificate(&graph, vars, &image, &certificate)?;
        let g = Reparameterization {
            source: f.clone(),
            domain: vars.to_vec(),
            image: image.clone(),
            graph,
            bound: bound.clone(),
            provenance: Step::GroupSplit {
                indices,
                bound,
                exact,
            },
            shape: Shape::General,
        };
        let projected = and_all([asc_chain(&image), or_all(projections)]);
        let h = self.ascending(&projected, &image)?;
        compose(&g, &h)
    }
}

/// Computes a reparameterization of minimal dimension.
pub fn minimal_reparameterization(f: &Formula, sig: &Signature, limits: &Limits) -> Result<Reparameterization> {
    f.check(sig)?;
    let (fo, so) = f.free_variables();
    if let Some(s) = so.first() {
        return Err(Error::FreeSecondOrder(s.clone()));
    }
    let mut engine = Engine {
        sig,
        limits,
        avoid: f.names(),
    };
    if fo.is_empty() {
        return engine.ascending(f, &[]);
    }
    let mut parts = Vec::new();
    let mut cases = Vec::new();
    for (case, fc) in order_case_split(f) {
        let reps = case.representatives();
        let satisfiable = !crate::compiler::compile_with(&fc, &reps, sig, &limits.dfa)?.is_empty();
        if !satisfiable {
            cases.push(CaseStep {
                case: case.describe(),
                result: None,
            });
            continue;
        }
        let r = engine.ascending(&fc, &reps)?;
        cases.push(CaseStep {
            case: case.describe(),
            result: Some(Box::new(r.provenance.clone())),
        });
        let lifted = lift_case(&r, &fo)?;
        parts.push((case.constraint(), lifted));
    }
    let combined = combine_disjuncts(f, &fo, parts, &mut engine.avoid)?;
    let split = Step::OrderSplit { cases };
    if combined.dimension() == fo.len() {
        let image = fresh_image_names(f, &fo);
        let mut r = Reparameterization::trivial(f, &fo, &image);
        r.provenance = split;
        return Ok(r);
    }
    if combined.graph == Formula::False {
        let mut r = Reparameterization::unsatisfiable(f, &fo);
        r.provenance = split;
        return Ok(r);
    }
    let names = fresh_image_names(f, &fo)[..combined.dimension()].to_vec();
    let mut r = combined.rename_image(&names)?;
    let exact = engine.max_preimage(&r.graph, &fo, &names)?;
    let propagated = r.bound.clone();
    if let Some(e) = &exact {
        if *e < r.bound {
            r.bound = e.clone();
        }
    }
    r.provenance = Step::Tighten {
        propagated,
        exact,
        inner: Box::new(Step::Compose {
            first: Box::new(split),
            then: Box::new(r.provenance),
            bound: r.bound.clone(),
        }),
    };
    Ok(r)
}

/// `y1, y2, …` avoiding the names of `f` and its domain.
fn fresh_image_names(f: &Formula, domain: &[Var]) -> Vec<Var> {
    let mut avoid = f.names();
    avoid.extend(domain.iter().cloned());
    fresh_names("y", domain.len(), &mut avoid)
}

/// Reparameterization of a case over its representatives, viewed over all
/// variables (the others equal their representatives).
fn lift_case(r: &Reparameterization, all: &[Var]) -> Result<Reparameterization> {
    let shape = match &r.shape {
        Shape::Projection(map) => Shape::Projection(
            map.iter()
                .map(|&j| all.iter().position(|v| *v == r.domain[j]).expect("representative"))
                .collect(),
        ),
        Shape::General => Shape::General,
    };
    Ok(Reparameterization {
        domain: all.to_vec(),
        shape,
        ..r.clone()
    })
}

/// Whether `f` has a reparameterization of dimension at most `m`.
pub fn decide_dimension(f: &Formula, m: usize, sig: &Signature, limits: &Limits) -> Result<bool> {
    Ok(minimal_reparameterization(f, sig, limits)?.dimension() <= m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min(text: &str, k: usize) -> Reparameterization {
        let sig = Signature::standard(k);
        let f = Formula::parse(text, &sig).unwrap();
        minimal_reparameterization(&f, &sig, &Limits::default()).unwrap()
    }

    #[test]
    fn elimination_formula() {
        let v: Vec<Var> = vec!["x".into(), "y".into(), "z".into()];
        let g = eliminate_variable(&Formula::True, &v, 2, &["a".into(), "b".into()]).unwrap();
        assert_eq!(g.to_string(), "(a=x & b=z)");
        assert!(matches!(
            eliminate_variable(&Formula::True, &v, 4, &[]),
            Err(Error::IndexOutOfRange { index: 4, arity: 3 })
        ));
    }

    #[test]
    fn battery_dimensions() {
        assert_eq!(min("~ex y. y<x", 0).dimension(), 0);
        assert_eq!(min("x<y & (~ex z. z<x) & ~ex z. y<z", 0).dimension(), 0);
        assert_eq!(min("P1(x)", 1).dimension(), 1);
        assert_eq!(min("P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))", 1).dimension(), 1);
        assert_eq!(min("x<y", 0).dimension(), 2);
        assert_eq!(min("x<y & y<z", 0).dimension(), 3);
        let unsat = min("P1(x) & ~P1(x)", 1);
        assert_eq!(unsat.dimension(), 0);
        assert_eq!(unsat.graph, Formula::False);
        assert_eq!(unsat.bound, BigUint::zero());
    }

    #[test]
    fn bounds_are_tight_on_examples() {
        assert_eq!(min("~ex y. y<x", 0).bound, BigUint::one());
        assert_eq!(min("x<y & (~ex z. z<x) & ~ex z. y<z", 0).bound, BigUint::one());
        let succ = min("P1(x) & x<y & ~ex z. (x<z & z<y)", 1);
        assert_eq!(succ.dimension(), 1);
        assert_eq!(succ.bound, BigUint::one());
    }

    #[test]
    fn trivial_form() {
        let r = min("x<y", 0);
        assert_eq!(r.image, ["y1", "y2"]);
        assert_eq!(r.graph.to_string(), "((x<y & y1=x) & y2=y)");
        assert_eq!(r.bound, BigUint::one());
    }

    #[test]
    fn group_path() {
        let sig = Signature::standard(2);
        let f = Formula::parse("x<y & (((~ex z. z<x) & P1(y)) | (P2(x) & ~ex z. y<z))", &sig).unwrap();
        let r = minimal_reparameterization(&f, &sig, &Limits::default()).unwrap();
        assert_eq!(r.dimension(), 1);
        assert!(r.provenance.uses_group_split());
        let check = crate::oracle::check_reparameterization(
            &crate::oracle::RepCandidate {
                source: &f,
                graph: &r.graph,
                domain: &r.domain,
                image: &r.image,
                bound: &r.bound,
            },
            &sig,
            3,
        )
        .unwrap();
        assert!(check.ok, "{check:?}");
    }

    #[test]
    fn decisions() {
        let sig = Signature::standard(0);
        let l = Limits::default();
        let lt = Formula::parse("x<y", &sig).unwrap();
        assert!(!decide_dimension(&lt, 1, &sig, &l).unwrap());
        assert!(decide_dimension(&lt, 2, &sig, &l).unwrap());
        let unsat = Formula::parse("x<x", &sig).unwrap();
        assert!(decide_dimension(&unsat, 0, &sig, &l).unwrap());
    }
}
