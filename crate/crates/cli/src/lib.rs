//! Report assembly for the `chainrep` command line.
//!
//! Every subcommand produces one [`Report`]: a self-contained JSON document
//! embedding the tool version, the run configuration and the result. The
//! human format is rendered from the same document.

pub mod human;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use chainrep::growth::{
    growth_lower_witness_for, growth_report, no_decrement_witness, pump_witness, WitnessStructure,
};
use chainrep::interp::{check_equivalence, reduce_interpretation, ElementMap, InterpretationSpec};
use chainrep::monoid::{interval_monoid_with, transition_monoid_with, TypeMonoid};
use chainrep::oracle::{check_reparameterization, RepCandidate};
use chainrep::reparam::{minimal_reparameterization, NormalForm, Reparameterization};
use chainrep::selftest::{self, SelftestConfig};
use chainrep::{compiler, Error, Formula, Limits, Signature};
use serde::Serialize;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Predicates assumed when neither `--sig` nor the input fixes a signature.
const INFERRED_SIGNATURE_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Human,
    Json,
}

/// Signature, budgets, sweep length and seed of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// `None`: inferred from the predicates the input mentions.
    pub signature: Option<Signature>,
    pub limits: Limits,
    /// Word-length limit for oracle sweeps; each subcommand has a default.
    pub max_len: Option<usize>,
    pub seed: u64,
    pub format: Format,
    /// Memory cap in MiB taken from `CHAINREP_BUDGET_MB`, already folded
    /// into `limits`.
    pub budget_mb: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            signature: None,
            limits: Limits::default(),
            max_len: None,
            seed: 1,
            format: Format::Human,
            budget_mb: None,
        }
    }
}

impl RunConfig {
    /// Rejects zero budgets.
    pub fn validate(&self) -> Result<(), CliError> {
        let l = &self.limits;
        for (name, v) in [
            ("--budget-states", l.dfa.max_states),
            ("--budget-monoid", l.monoid_elements),
            ("automaton table entries", l.dfa.max_entries),
        ] {
            if v == 0 {
                return Err(CliError::input(format!("{name} must be positive")));
            }
        }
        if self.max_len == Some(0) {
            return Err(CliError::input("--max-len must be positive"));
        }
        Ok(())
    }

    /// Folds a memory cap into the automaton table budget: entries are
    /// 4 bytes and the monoid keeps one state map per element.
    pub fn apply_memory_cap(&mut self, mb: u64) {
        let bytes = mb.saturating_mul(1 << 20);
        let entries = usize::try_from(bytes / 4).unwrap_or(usize::MAX);
        self.limits.dfa.max_entries = self.limits.dfa.max_entries.min(entries);
        let elements = usize::try_from(bytes / 4 / 64).unwrap_or(usize::MAX);
        self.limits.monoid_elements = self.limits.monoid_elements.min(elements.max(1));
        self.budget_mb = Some(mb);
    }

    fn describe(&self, sig: Option<&Signature>, max_len: Option<usize>) -> Value {
        json!({
            "signature": sig.or(self.signature.as_ref()).map(|s| s.names().to_vec()),
            "budget_states": self.limits.dfa.max_states,
            "budget_entries": self.limits.dfa.max_entries,
            "budget_monoid": self.limits.monoid_elements,
            "budget_mb": self.budget_mb,
            "max_len": max_len,
            "seed": self.seed,
        })
    }
}

/// Exit status of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Negative,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Negative => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub input: Value,
    pub summary: String,
    pub outcome: Outcome,
    pub result: Value,
    pub erratum_notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Human => human::render(&serde_json::to_value(self).expect("reports serialize")),
        }
    }
}

/// A failed run: exit 2 for input errors, 3 for exhausted budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            exit_code: 2,
            message: message.into(),
        }
    }

    fn from_core(e: Error, origin: Option<&Origin<'_>>) -> Self {
        let exit_code = if e.is_resource_limit() { 3 } else { 2 };
        let message = match (&e, origin) {
            (Error::Syntax { pos, msg }, Some(o)) => {
                let (line, col) = line_col(o.text, *pos);
                format!("{}:{line}:{col}: syntax error: {msg}", o.name)
            }
            (Error::SpecFile { line, msg }, Some(o)) => format!("{}:{line}: {msg}", o.name),
            (_, Some(o)) => format!("{}: {e}", o.name),
            (_, None) => e.to_string(),
        };
        CliError { exit_code, message }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::from_core(e, None)
    }
}

/// Where an input text came from, for error locations.
struct Origin<'a> {
    name: String,
    text: &'a str,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Debug, Clone)]
pub enum FormulaSource {
    Text(String),
    File(std::path::PathBuf),
}

/// A parsed formula with the signature it was read against.
#[derive(Debug, Clone)]
pub struct Input {
    pub formula: Formula,
    pub signature: Signature,
    pub text: String,
}

impl Input {
    fn describe(&self) -> Value {
        json!({
            "formula": self.formula.render(&self.signature),
            "free_variables": self.formula.free_fo(),
        })
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Reads and parses a formula. Without an explicit signature, the smallest
/// `P1..Pk` covering the predicates used is taken.
pub fn load_formula(source: &FormulaSource, config: &RunConfig) -> Result<Input, CliError> {
    let (name, text) = match source {
        FormulaSource::Text(t) => ("--formula".to_string(), t.clone()),
        FormulaSource::File(p) => (p.display().to_string(), read_file(p)?),
    };
    let origin = Origin { name, text: &text };
    let parse = |sig: &Signature| Formula::parse(text.trim_end(), sig).map_err(|e| CliError::from_core(e, Some(&origin)));
    let (formula, signature) = match &config.signature {
        Some(sig) => (parse(sig)?, sig.clone()),
        None => {
            let wide = parse(&Signature::standard(INFERRED_SIGNATURE_CAP))?;
            let sig = Signature::standard(wide.max_predicate().map_or(0, |p| p + 1));
            (parse(&sig)?, sig)
        }
    };
    Ok(Input {
        formula,
        signature,
        text,
    })
}

fn reparam_value(r: &Reparameterization, sig: &Signature) -> Value {
    json!({
        "domain": r.domain,
        "image": r.image,
        "dimension": r.dimension(),
        "bound": r.bound.to_string(),
        "graph": r.graph.render(sig),
        "provenance": r.provenance,
    })
}

fn report(
    command: &'static str,
    config: &RunConfig,
    sig: Option<&Signature>,
    max_len: Option<usize>,
    input: Value,
    summary: String,
    outcome: Outcome,
    result: Value,
    erratum_notes: Vec<String>,
) -> Report {
    Report {
        tool: "chainrep",
        version: VERSION,
        command,
        config: config.describe(sig, max_len),
        input,
        summary,
        outcome,
        result,
        erratum_notes,
    }
}

/// Minimal dimension with the reparameterization realizing it.
pub fn mindim(input: &Input, config: &RunConfig) -> Result<Report, CliError> {
    let r = minimal_reparameterization(&input.formula, &input.signature, &config.limits)?;
    let summary = format!(
        "minimal dimension {} with preimage bound {}",
        r.dimension(),
        r.bound
    );
    Ok(report(
        "mindim",
        config,
        Some(&input.signature),
        None,
        input.describe(),
        summary,
        Outcome::Success,
        json!({ "dimension": r.dimension(), "reparameterization": reparam_value(&r, &input.signature) }),
        r.erratum_notes(),
    ))
}

/// Whether a reparameterization of dimension at most `m` exists.
pub fn decide(input: &Input, m: usize, config: &RunConfig) -> Result<Report, CliError> {
    let r = minimal_reparameterization(&input.formula, &input.signature, &config.limits)?;
    let d = r.dimension();
    let answer = d <= m;
    let summary = if answer {
        format!("yes: minimal dimension {d} <= {m}")
    } else {
        format!("no: minimal dimension {d} > {m}")
    };
    Ok(report(
        "decide",
        config,
        Some(&input.signature),
        None,
        input.describe(),
        summary,
        if answer { Outcome::Success } else { Outcome::Negative },
        json!({
            "requested_dimension": m,
            "answer": answer,
            "minimal_dimension": d,
            "reparameterization": reparam_value(&r, &input.signature),
        }),
        r.erratum_notes(),
    ))
}

/// Growth degree, sandwich samples and lower witnesses for `n` in `1..=max_n`.
pub fn growth(input: &Input, max_n: usize, config: &RunConfig) -> Result<Report, CliError> {
    let max_len = config.max_len.unwrap_or(8);
    let sig = &input.signature;
    let g = growth_report(&input.formula, sig, max_n, max_len, &config.limits)?;
    let r = minimal_reparameterization(&input.formula, sig, &config.limits)?;
    let mut witnesses = Vec::new();
    if r.graph != Formula::False {
        for n in 1..=max_n {
            let w = growth_lower_witness_for(&input.formula, sig, &r, n, &config.limits)?;
            witnesses.push(witness_value(n, &w, sig));
        }
    }
    let summary = format!(
        "growth degree {} (bound {}); sandwich {}",
        g.degree,
        g.bound,
        if g.sandwich_holds { "holds" } else { "FAILS" }
    );
    let outcome = if g.sandwich_holds { Outcome::Success } else { Outcome::Negative };
    Ok(report(
        "growth",
        config,
        Some(sig),
        Some(max_len),
        input.describe(),
        summary,
        outcome,
        json!({ "growth": g, "lower_witnesses": witnesses }),
        r.erratum_notes(),
    ))
}

fn witness_value(n: usize, w: &WitnessStructure, sig: &Signature) -> Value {
    json!({
        "n": n,
        "word": sig.render_word(&w.word),
        "marked_set": w.marked_set,
        "variables": w.variables,
        "tuple_count": w.claimed_tuple_count,
        "construction": w.construction,
        "dump": w.dump(sig),
    })
}

fn monoid_value(m: &TypeMonoid) -> Result<Value, CliError> {
    let mut elements = Vec::new();
    for e in m.elements() {
        elements.push(json!({
            "id": e.0,
            "witness": m.render_witness(e)?,
            "idempotent": m.is_idempotent(e)?,
            "unmarked": m.is_unmarked(e)?,
            "nonempty": m.nonempty_realizable(e)?,
        }));
    }
    let mut table = Vec::new();
    for a in m.elements() {
        let row: Result<Vec<usize>, _> = m.elements().map(|b| m.multiply(a, b).map(|c| c.0)).collect();
        table.push(row?);
    }
    Ok(json!({
        "kind": m.kind(),
        "size": m.size(),
        "identity": m.identity().0,
        "elements": elements,
        "table": table,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidChoice {
    Interval,
    Transition,
}

/// Type-algebra dump of the formula's automaton over its free variables.
pub fn monoid(input: &Input, kind: MonoidChoice, config: &RunConfig) -> Result<Report, CliError> {
    let vars = input.formula.free_fo();
    let dfa = compiler::compile_with(&input.formula, &vars, &input.signature, &config.limits.dfa)?;
    let m = match kind {
        MonoidChoice::Interval => interval_monoid_with(&dfa, config.limits.monoid_elements)?,
        MonoidChoice::Transition => transition_monoid_with(&dfa, config.limits.monoid_elements)?,
    };
    let summary = format!(
        "{} monoid of size {} over a {}-state automaton",
        match kind {
            MonoidChoice::Interval => "interval",
            MonoidChoice::Transition => "transition",
        },
        m.size(),
        dfa.states()
    );
    Ok(report(
        "monoid",
        config,
        Some(&input.signature),
        None,
        input.describe(),
        summary,
        Outcome::Success,
        json!({ "marks": vars, "automaton_states": dfa.states(), "monoid": monoid_value(&m)? }),
        Vec::new(),
    ))
}

/// Normal-form disjuncts for ascending placements of the free variables.
pub fn normalform(input: &Input, config: &RunConfig) -> Result<Report, CliError> {
    let vars = input.formula.free_fo();
    if vars.is_empty() {
        return Err(CliError::input("normalform needs a formula with free first-order variables"));
    }
    let nf = NormalForm::new(&input.formula, &vars, &input.signature, &config.limits)?;
    let m = nf.monoid();
    let listed = nf.disjuncts(config.limits.disjuncts)?;
    let mut disjuncts = Vec::new();
    for d in &listed {
        let witnesses: Result<Vec<String>, _> = d.types.iter().map(|&t| m.render_witness(t)).collect();
        disjuncts.push(json!({
            "types": d.types.iter().map(|t| t.0).collect::<Vec<_>>(),
            "witnesses": witnesses?,
            "eliminable": nf.eliminable_pairs(d),
        }));
    }
    let count = nf.count();
    let summary = format!(
        "{count} disjuncts over {} segment types for {}",
        m.size(),
        vars.join(" < ")
    );
    Ok(report(
        "normalform",
        config,
        Some(&input.signature),
        None,
        input.describe(),
        summary,
        Outcome::Success,
        json!({
            "order": vars,
            "monoid_size": m.size(),
            "disjunct_count": count.to_string(),
            "disjuncts": disjuncts,
            "all_pumpable": nf.all_pumpable_disjunct().map(|d| d.types.iter().map(|t| t.0).collect::<Vec<_>>()),
            "universally_eliminable": nf.universally_eliminable(),
            "first_blocking_indices": nf.first_blocking_indices(),
        }),
        Vec::new(),
    ))
}

/// Pumping, no-decrement and growth-lower structures for size parameter `n`.
/// Constructions that do not apply are reported with the reason.
pub fn witness(input: &Input, n: usize, config: &RunConfig) -> Result<Report, CliError> {
    let sig = &input.signature;
    let f = &input.formula;
    let mut result = BTreeMap::new();
    let mut built = 0;
    let kinds: [(&str, &dyn Fn() -> chainrep::Result<WitnessStructure>); 3] = [
        ("pump", &|| pump_witness(f, sig, n, &config.limits)),
        ("no_decrement", &|| no_decrement_witness(f, sig, n, &config.limits)),
        ("growth_lower", &|| {
            let r = minimal_reparameterization(f, sig, &config.limits)?;
            growth_lower_witness_for(f, sig, &r, n, &config.limits)
        }),
    ];
    for (name, build) in kinds {
        let v = match build() {
            Ok(w) => {
                built += 1;
                witness_value(n, &w, sig)
            }
            Err(e @ (Error::NotApplicable(_) | Error::NotPumpable(_))) => json!({ "not_applicable": e.to_string() }),
            Err(e) => return Err(e.into()),
        };
        result.insert(name, v);
    }
    let summary = format!("{built} of 3 witness constructions apply for n = {n}");
    Ok(report(
        "witness",
        config,
        Some(sig),
        None,
        input.describe(),
        summary,
        Outcome::Success,
        json!(result),
        Vec::new(),
    ))
}

/// Oracle sweep of the contract of the computed minimal reparameterization.
pub fn oracle_check(input: &Input, config: &RunConfig) -> Result<Report, CliError> {
    let max_len = config.max_len.unwrap_or(6);
    let sig = &input.signature;
    let r = minimal_reparameterization(&input.formula, sig, &config.limits)?;
    let check = check_reparameterization(
        &RepCandidate {
            source: &r.source,
            graph: &r.graph,
            domain: &r.domain,
            image: &r.image,
            bound: &r.bound,
        },
        sig,
        max_len,
    )?;
    let summary = if check.ok {
        format!(
            "contract holds on {} words up to length {max_len} (largest preimage {})",
            check.words_checked, check.observed_max_preimage
        )
    } else {
        format!("contract violated: {:?}", check.counterexample.as_ref().map(|c| &c.violation))
    };
    Ok(report(
        "oracle-check",
        config,
        Some(sig),
        Some(max_len),
        input.describe(),
        summary,
        if check.ok { Outcome::Success } else { Outcome::Negative },
        json!({ "reparameterization": reparam_value(&r, sig), "check": check }),
        r.erratum_notes(),
    ))
}

/// Reads an interpretation spec file.
pub fn load_spec(path: &Path, config: &RunConfig) -> Result<InterpretationSpec, CliError> {
    let text = read_file(path)?;
    let sig = config.signature.clone().unwrap_or_else(|| Signature::standard(0));
    let origin = Origin {
        name: path.display().to_string(),
        text: &text,
    };
    InterpretationSpec::parse(&text, &sig).map_err(|e| CliError::from_core(e, Some(&origin)))
}

/// Reduces an interpretation to dimension `dim` (default: the largest
/// minimal dimension among its universes) and checks equivalence.
pub fn interp_reduce(spec: &InterpretationSpec, dim: Option<usize>, config: &RunConfig) -> Result<Report, CliError> {
    let max_len = config.max_len.unwrap_or(6);
    let mut minimal = BTreeMap::new();
    for c in &spec.components {
        let r = minimal_reparameterization(&c.universe, &spec.signature, &config.limits)?;
        minimal.insert(c.name.clone(), r.dimension());
    }
    let d = dim.unwrap_or_else(|| minimal.values().copied().max().unwrap_or(0));
    let input = json!({ "spec": spec.to_text(), "requested_dimension": dim });
    let reduction = match reduce_interpretation(spec, d, &config.limits) {
        Ok(r) => r,
        Err(e @ Error::DimensionTooSmall { .. }) => {
            return Ok(report(
                "interp-reduce",
                config,
                Some(&spec.signature),
                Some(max_len),
                input,
                format!("no: {e}"),
                Outcome::Negative,
                json!({ "dimension": d, "minimal_dimensions": minimal }),
                Vec::new(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let eq = check_equivalence(spec, &reduction.spec, ElementMap::Reduction(&reduction), max_len)?;
    let summary = format!(
        "reduced to dimension {} with {} components; equivalence {} on {} words",
        reduction.spec.dimension(),
        reduction.components.len(),
        if eq.ok { "holds" } else { "FAILS" },
        eq.words_checked
    );
    Ok(report(
        "interp-reduce",
        config,
        Some(&spec.signature),
        Some(max_len),
        input,
        summary,
        if eq.ok { Outcome::Success } else { Outcome::Negative },
        json!({
            "dimension": d,
            "minimal_dimensions": minimal,
            "reduced_spec": reduction.spec.to_text(),
            "components": reduction.components,
            "reparameterizations": reduction.reparameterizations,
            "equivalence": eq,
        }),
        Vec::new(),
    ))
}

/// The full acceptance battery.
pub fn selftest(config: &RunConfig) -> Result<Report, CliError> {
    let st = SelftestConfig {
        seed: config.seed,
        limits: config.limits.clone(),
        ..SelftestConfig::default()
    };
    let r = selftest::run(&st)?;
    let failed: Vec<u32> = r.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    let summary = if failed.is_empty() {
        format!("all {} criteria passed", r.criteria.len())
    } else {
        format!("failed criteria: {failed:?}")
    };
    Ok(report(
        "selftest",
        config,
        Some(&selftest::battery_signature()),
        None,
        json!({}),
        summary,
        if r.passed { Outcome::Success } else { Outcome::Negative },
        serde_json::to_value(&r).expect("selftest reports serialize"),
        vec![chainrep::reparam::PAIR_INDEXING_NOTE.to_string()],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(text: &str) -> Input {
        load_formula(&FormulaSource::Text(text.into()), &RunConfig::default()).unwrap()
    }

    #[test]
    fn signature_is_inferred_from_predicates() {
        assert_eq!(input("P1(x)").signature.len(), 1);
        assert_eq!(input("x<y").signature.len(), 0);
        assert_eq!(input("P3(x) | P1(x)").signature.len(), 3);
    }

    #[test]
    fn syntax_errors_carry_locations() {
        let e = load_formula(&FormulaSource::Text("x<y &\n  & P1(x)".into()), &RunConfig::default()).unwrap_err();
        assert_eq!(e.exit_code, 2);
        assert!(e.message.starts_with("--formula:2:"), "{}", e.message);
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn decide_outcomes() {
        let cfg = RunConfig::default();
        let no = decide(&input("x<y"), 1, &cfg).unwrap();
        assert_eq!(no.outcome, Outcome::Negative);
        assert!(no.summary.contains("minimal dimension 2"));
        assert_eq!(decide(&input("x<y"), 2, &cfg).unwrap().outcome, Outcome::Success);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig::default();
        let a = mindim(&input("P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))"), &cfg).unwrap();
        let b = mindim(&input("P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))"), &cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.result["dimension"], json!(1));
        assert!(!a.erratum_notes.is_empty());
    }

    #[test]
    fn memory_cap_lowers_budgets() {
        let mut cfg = RunConfig::default();
        cfg.apply_memory_cap(1);
        assert_eq!(cfg.limits.dfa.max_entries, 1 << 18);
        assert!(cfg.validate().is_ok());
        cfg.limits.dfa.max_states = 0;
        assert_eq!(cfg.validate().unwrap_err().exit_code, 2);
    }
}
