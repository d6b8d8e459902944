//! Problem-file handling and command implementations behind the `mslh`
//! binary: the split → approximate → saturate pipeline with model and
//! membership queries, plus the tree-automata toolbox.
//!
//! Problem format: `%` starts a comment, `#split r` requests reflexive
//! relation splitting for the binary predicate `r`, every clause is
//! `.`-terminated with `|`-separated literals, `~` negates, identifiers
//! starting with an uppercase letter are variables, and `false.` denotes
//! the empty clause.

use std::fmt;

use mslh_core::kernel::{Atom, Clause, Signature, SignatureError};
use mslh_core::modelbuild::{
    build_finite_model, ground_membership, FiniteStructure, ModelError,
};
use mslh_core::saturate::{saturate, Limits, SaturationResult, Stats};
use mslh_core::text::{parse_atom, parse_clauses, parse_term, register_clause, ParseError};
use mslh_core::transform::{
    approximate, back_translate_query, redundancy_cleanup, rrs, TransformError, TransformLedger,
};
use mslh_core::treeauto::{from_linear_atom, ta_to_mslh, TaError, TreeAutomaton};

#[derive(Debug)]
pub enum CliError {
    Parse { line: usize, col: usize, msg: String },
    Unsupported(String),
    Transform(TransformError),
    Model(ModelError),
    Automaton(TaError),
    BadLimits(String),
    BadSignature(String),
    Refuted,
    ResourceOut(Stats),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, col, msg } => write!(f, "{line}:{col}: {msg}"),
            CliError::Unsupported(m) => write!(f, "unsupported input: {m}"),
            CliError::Transform(e) => write!(f, "transformation failed: {e}"),
            CliError::Model(e) => write!(f, "model construction failed: {e}"),
            CliError::Automaton(e) => write!(f, "automaton operation failed: {e}"),
            CliError::BadLimits(m) => write!(f, "invalid limits `{m}`, expected `<clauses>,<iterations>`"),
            CliError::BadSignature(m) => write!(f, "invalid signature declaration: {m}"),
            CliError::Refuted => write!(f, "clause set is unsatisfiable; no model exists"),
            CliError::ResourceOut(s) => {
                write!(f, "saturation hit resource limits after {} iterations", s.iterations)
            }
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    /// Process exit code; verdict codes 0–2 are reserved for results.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::BadLimits(_) | CliError::BadSignature(_) => 10,
            CliError::Unsupported(_) | CliError::Transform(_) => 11,
            CliError::Model(_) | CliError::Automaton(_) | CliError::Refuted => 13,
            CliError::ResourceOut(_) => 14,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> CliError {
        CliError::Parse { line: e.line, col: e.col, msg: e.msg }
    }
}

impl From<SignatureError> for CliError {
    fn from(e: SignatureError) -> CliError {
        CliError::BadSignature(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> CliError {
        CliError::Transform(e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        CliError::Model(e)
    }
}

impl From<TaError> for CliError {
    fn from(e: TaError) -> CliError {
        CliError::Automaton(e)
    }
}

/// A parsed problem: split directives, clauses, and the signature
/// derived from their symbols in order of first occurrence.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub split: Vec<String>,
    pub clauses: Vec<Clause>,
    pub sig: Signature,
}

impl ProblemFile {
    pub fn parse(src: &str) -> Result<ProblemFile, CliError> {
        let mut split = Vec::new();
        let mut clause_src = String::new();
        for (no, raw) in src.lines().enumerate() {
            let line = raw.split('%').next().unwrap_or("").trim_end();
            let trimmed = line.trim();
            if let Some(rest) = trimmed.strip_prefix('#') {
                let mut words = rest.split_whitespace();
                match (words.next(), words.next(), words.next()) {
                    (Some("split"), Some(pred), None) => split.push(pred.to_string()),
                    _ => {
                        return Err(CliError::Parse {
                            line: no + 1,
                            col: 1,
                            msg: format!("unknown directive `#{rest}`"),
                        })
                    }
                }
                clause_src.push('\n');
            } else {
                clause_src.push_str(line);
                clause_src.push('\n');
            }
        }
        let clauses = parse_clauses(&clause_src)?;
        let mut sig = Signature::new();
        for c in &clauses {
            register_clause(c, &mut sig)?;
            if !c.is_horn() {
                return Err(CliError::Unsupported(format!("non-Horn clause {c}")));
            }
        }
        for p in &split {
            if sig.predicate_arity(p) != Some(2) {
                return Err(CliError::Unsupported(format!(
                    "#split {p}: not a binary predicate of the clause set"
                )));
            }
        }
        Ok(ProblemFile { split, clauses, sig })
    }

    /// Canonical reprint; parsing it again reproduces the same text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.split {
            out.push_str(&format!("#split {p}\n"));
        }
        for c in &self.clauses {
            if c.is_empty() {
                out.push_str("false.\n");
            } else {
                out.push_str(&format!("{c}.\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfiable,
    Unsatisfiable,
    Unknown,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Satisfiable => 0,
            Verdict::Unsatisfiable => 1,
            Verdict::Unknown => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Satisfiable => write!(f, "Satisfiable"),
            Verdict::Unsatisfiable => write!(f, "Unsatisfiable"),
            Verdict::Unknown => write!(f, "Unknown (approximation refuted)"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    pub no_split: bool,
    pub no_approx: bool,
    pub limits: Option<Limits>,
}

/// Saturation limits: explicit option, then the `MSLH_LIMITS`
/// environment variable (`<max_clauses>,<max_iterations>`), then defaults.
pub fn effective_limits(opts: &PipelineOptions) -> Result<Limits, CliError> {
    if let Some(l) = opts.limits {
        return Ok(l);
    }
    match std::env::var("MSLH_LIMITS") {
        Ok(spec) => parse_limits(&spec),
        Err(_) => Ok(Limits::default()),
    }
}

pub fn parse_limits(spec: &str) -> Result<Limits, CliError> {
    let bad = || CliError::BadLimits(spec.to_string());
    let (c, i) = spec.split_once(',').ok_or_else(bad)?;
    Ok(Limits {
        max_clauses: c.trim().parse().map_err(|_| bad())?,
        max_iterations: i.trim().parse().map_err(|_| bad())?,
    })
}

/// The transformed clause set a command operates on, together with the
/// bookkeeping needed to pose queries over the original signature.
pub struct Pipeline {
    pub sig: Signature,
    pub clauses: Vec<Clause>,
    pub ledger: TransformLedger,
}

pub fn run_pipeline(file: &ProblemFile, opts: &PipelineOptions) -> Result<Pipeline, CliError> {
    let mut sig = file.sig.clone();
    let mut clauses = file.clauses.clone();
    let mut ledger = TransformLedger::default();
    if !opts.no_split && !file.split.is_empty() {
        let (next, l) = rrs(&clauses, &file.split, &mut sig)?;
        clauses = next;
        ledger.merge(l);
    }
    if !opts.no_approx {
        let (next, l) = approximate(&clauses, &mut sig)?;
        clauses = next;
        ledger.merge(l);
    }
    if let Some(c) = clauses.iter().find(|c| !c.is_mslh()) {
        return Err(CliError::Unsupported(format!(
            "clause {c} is not MSLH; rerun without --no-approx"
        )));
    }
    Ok(Pipeline { sig, clauses, ledger })
}

pub struct SatReport {
    pub verdict: Verdict,
    pub stats: Option<Stats>,
    pub saturated: Option<Vec<Clause>>,
    pub proof: Option<String>,
    pub approximated: bool,
}

pub fn run_sat(file: &ProblemFile, opts: &PipelineOptions) -> Result<SatReport, CliError> {
    let limits = effective_limits(opts)?;
    let pipe = run_pipeline(file, opts)?;
    let approximated = pipe.ledger.approximation_was_lossy();
    match saturate(&pipe.sig, &pipe.clauses, limits) {
        SaturationResult::Saturated(out, stats) => Ok(SatReport {
            verdict: Verdict::Satisfiable,
            stats: Some(stats),
            saturated: Some(out),
            proof: None,
            approximated,
        }),
        SaturationResult::Refutation(proof) => Ok(SatReport {
            // a refutation of a lossy approximation says nothing about
            // the original set
            verdict: if approximated { Verdict::Unknown } else { Verdict::Unsatisfiable },
            stats: None,
            saturated: None,
            proof: Some(proof.to_trace()),
            approximated,
        }),
        SaturationResult::ResourceOut(stats) => Err(CliError::ResourceOut(stats)),
    }
}

/// Saturates and extracts the finite color model.
pub fn run_model(
    file: &ProblemFile,
    opts: &PipelineOptions,
) -> Result<(FiniteStructure, Vec<Clause>, Signature), CliError> {
    let report = run_sat(file, opts)?;
    let Some(nstar) = report.saturated else {
        return Err(CliError::Refuted);
    };
    let pipe = run_pipeline(file, opts)?;
    let model = build_finite_model(&pipe.sig, &nstar)?;
    Ok((model, nstar, pipe.sig))
}

/// Answers a ground query posed over the original signature by running
/// the pipeline, saturating, and translating the query forward.
pub fn run_member(
    file: &ProblemFile,
    opts: &PipelineOptions,
    query: &Atom,
) -> Result<bool, CliError> {
    let limits = effective_limits(opts)?;
    let pipe = run_pipeline(file, opts)?;
    let nstar = match saturate(&pipe.sig, &pipe.clauses, limits) {
        SaturationResult::Saturated(out, _) => out,
        SaturationResult::Refutation(_) => return Err(CliError::Refuted),
        SaturationResult::ResourceOut(stats) => return Err(CliError::ResourceOut(stats)),
    };
    let answer = back_translate_query(&pipe.ledger, query, |a| {
        ground_membership(&nstar, a).unwrap_or(false)
    })?;
    Ok(answer)
}

/// Reflexive relation splitting only, optionally followed by redundancy
/// cleanup.
pub fn run_rrs(file: &ProblemFile, cleanup: bool) -> Result<Vec<Clause>, CliError> {
    let mut sig = file.sig.clone();
    let (out, _) = rrs(&file.clauses, &file.split, &mut sig)?;
    Ok(if cleanup { redundancy_cleanup(&out) } else { out })
}

/// Split plus approximation, without saturating.
pub fn run_approx(file: &ProblemFile, opts: &PipelineOptions) -> Result<Vec<Clause>, CliError> {
    Ok(run_pipeline(file, opts)?.clauses)
}

/// Parses `f/2 a/0 ; r/2` into a signature (predicates after `;`).
pub fn parse_signature(spec: &str) -> Result<Signature, CliError> {
    let mut sig = Signature::new();
    let bad = |tok: &str| CliError::BadSignature(format!("expected `name/arity`, got `{tok}`"));
    let (funs, preds) = spec.split_once(';').unwrap_or((spec, ""));
    for tok in funs.split_whitespace() {
        let (n, a) = tok.split_once('/').ok_or_else(|| bad(tok))?;
        let a = a.parse().map_err(|_| bad(tok))?;
        sig.declare_function(n, a).map_err(|e| CliError::BadSignature(e.to_string()))?;
    }
    for tok in preds.split_whitespace() {
        let (n, a) = tok.split_once('/').ok_or_else(|| bad(tok))?;
        let a = a.parse().map_err(|_| bad(tok))?;
        sig.declare_predicate(n, a).map_err(|e| CliError::BadSignature(e.to_string()))?;
    }
    Ok(sig)
}

pub fn ta_from_atom(atom_src: &str, sig_spec: &str) -> Result<TreeAutomaton, CliError> {
    let atom = parse_atom(atom_src)?;
    let sig = parse_signature(sig_spec)?;
    Ok(from_linear_atom(&atom, &sig)?)
}

pub fn ta_accepts(ta_src: &str, term_src: &str) -> Result<bool, CliError> {
    let ta = TreeAutomaton::from_text(ta_src)?;
    let term = parse_term(term_src)?;
    Ok(ta.accepts(&term)?)
}

pub fn ta_clauses(ta_src: &str) -> Result<Vec<Clause>, CliError> {
    let ta = TreeAutomaton::from_text(ta_src)?;
    Ok(ta_to_mslh(&ta))
}

pub fn clause_listing(clauses: &[Clause]) -> String {
    let mut out = String::new();
    for c in clauses {
        if c.is_empty() {
            out.push_str("false.\n");
        } else {
            out.push_str(&format!("{c}.\n"));
        }
    }
    out
}

pub fn sat_report_json(report: &SatReport) -> serde_json::Value {
    serde_json::json!({
        "verdict": report.verdict.to_string(),
        "exit_code": report.verdict.exit_code(),
        "approximated": report.approximated,
        "saturated": report.saturated.as_ref().map(|cs| {
            cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        }),
        "proof": report.proof,
        "iterations": report.stats.as_ref().map(|s| s.iterations),
        "kept": report.stats.as_ref().map(|s| s.kept),
    })
}

pub fn model_json(model: &FiniteStructure) -> serde_json::Value {
    use mslh_core::modelbuild::color_name;
    serde_json::json!({
        "domain": model.domain.iter().map(color_name).collect::<Vec<_>>(),
        "constants": model.const_table.iter()
            .map(|(c, v)| (c.clone(), color_name(v)))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "functions": model.fun_tables.iter().map(|(f, table)| {
            let rows: Vec<serde_json::Value> = table.iter().map(|(args, v)| {
                serde_json::json!({
                    "args": args.iter().map(color_name).collect::<Vec<_>>(),
                    "value": color_name(v),
                })
            }).collect();
            (f.clone(), rows)
        }).collect::<std::collections::BTreeMap<_, _>>(),
        "predicates": model.pred_ext.iter().map(|(p, ext)| {
            (p.clone(), ext.iter().map(color_name).collect::<Vec<_>>())
        }).collect::<std::collections::BTreeMap<_, _>>(),
    })
}

/// Parses a ground atom for membership queries.
pub fn parse_query(src: &str) -> Result<Atom, CliError> {
    Ok(parse_atom(src)?)
}
