//! Clause set transformations: reflexive relation splitting (RRS), the
//! monadic/shallow/linear approximation, redundancy cleanup, and
//! back-translation of ground queries through the provenance ledger.

use std::fmt;

use indexmap::IndexMap;

use crate::kernel::{subsumes, unify_terms, Atom, Clause, Signature, Term};

/// Provenance of introduced symbols, enabling back-translation of ground
/// queries posed over the original signature.
#[derive(Debug, Clone, Default)]
pub struct TransformLedger {
    /// original predicate -> (reflexive part, irreflexive part)
    pub split_map: IndexMap<String, (String, String)>,
    /// original predicate (arity != 1) -> fresh function symbol
    pub monadic_map: IndexMap<String, String>,
    /// the shared monadic predicate wrapping projected atoms
    pub monadic_pred: Option<String>,
    /// fresh guard predicate -> extracted subterm pattern
    pub guard_map: IndexMap<String, Term>,
    /// ordered transformation records, for diagnostics
    pub applied_steps: Vec<String>,
    /// number of RRS rule applications
    pub rrs_steps: usize,
    /// clause count after RRS, reported because the Reflexive rule can
    /// blow up the set exponentially
    pub rrs_output_clauses: usize,
    /// number of approximation steps that lost information
    pub approx_steps: usize,
}

impl TransformLedger {
    /// Whether any information-losing approximation step fired.
    pub fn approximation_was_lossy(&self) -> bool {
        self.approx_steps > 0
    }

    pub fn merge(&mut self, other: TransformLedger) {
        self.split_map.extend(other.split_map);
        self.monadic_map.extend(other.monadic_map);
        if other.monadic_pred.is_some() {
            self.monadic_pred = other.monadic_pred;
        }
        self.guard_map.extend(other.guard_map);
        self.applied_steps.extend(other.applied_steps);
        self.rrs_steps += other.rrs_steps;
        self.rrs_output_clauses = other.rrs_output_clauses.max(self.rrs_output_clauses);
        self.approx_steps += other.approx_steps;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// The split target predicates already occur in the input.
    SplitSymbolsPresent(String),
    /// The predicate requested for splitting is not binary.
    NotBinary(String),
    NonHorn(String),
    NonGroundQuery(String),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::SplitSymbolsPresent(p) => {
                write!(f, "split predicates for `{p}` already occur in the input")
            }
            TransformError::NotBinary(p) => write!(f, "cannot split non-binary predicate `{p}`"),
            TransformError::NonHorn(c) => write!(f, "non-Horn clause not supported: {c}"),
            TransformError::NonGroundQuery(a) => write!(f, "query atom is not ground: {a}"),
        }
    }
}

impl std::error::Error for TransformError {}

pub fn split_names(r: &str) -> (String, String) {
    (format!("{r}_rfl"), format!("{r}_irr"))
}

/// One applicable RRS rule instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RrsInstance {
    /// Remove the clause: it contains an atom `R_irr(s,s)`.
    Delete { clause: usize },
    /// Replace an `R` occurrence by the Irreflexive or Reflexive rule.
    /// The occurrence indexes into the antecedent (negative) or the
    /// succedent (positive) of the clause.
    Split { clause: usize, negative: bool, atom: usize },
}

fn atom_occurrences(c: &Clause, pred: &str) -> Vec<(bool, usize)> {
    // Leftmost-first in display order: succedent atoms, then antecedent.
    let mut out = Vec::new();
    for (i, a) in c.succedent.iter().enumerate() {
        if a.pred == pred {
            out.push((false, i));
        }
    }
    for (i, a) in c.antecedent.iter().enumerate() {
        if a.pred == pred {
            out.push((true, i));
        }
    }
    out
}

fn contains_irr_diagonal(c: &Clause, irr: &str) -> bool {
    c.atoms().any(|a| a.pred == irr && a.args.len() == 2 && a.args[0] == a.args[1])
}

/// All applicable RRS rule instances for predicate `r`, Delete instances
/// first.
pub fn rrs_instances(n: &[Clause], r: &str) -> Vec<RrsInstance> {
    let (_, irr) = split_names(r);
    let mut out = Vec::new();
    for (i, c) in n.iter().enumerate() {
        if contains_irr_diagonal(c, &irr) {
            out.push(RrsInstance::Delete { clause: i });
        }
    }
    for (i, c) in n.iter().enumerate() {
        for (negative, atom) in atom_occurrences(c, r) {
            out.push(RrsInstance::Split { clause: i, negative, atom });
        }
    }
    out
}

fn replace_pred(c: &Clause, negative: bool, atom: usize, pred: &str, args: Vec<Term>) -> Clause {
    let mut c = c.clone();
    let slot = if negative { &mut c.antecedent[atom] } else { &mut c.succedent[atom] };
    *slot = Atom { pred: pred.to_string(), args };
    c
}

/// Applies one RRS rule instance, returning the successor clause set.
pub fn rrs_apply(n: &[Clause], r: &str, inst: &RrsInstance) -> Vec<Clause> {
    let (rfl, irr) = split_names(r);
    match *inst {
        RrsInstance::Delete { clause } => {
            let mut out = n.to_vec();
            out.remove(clause);
            out
        }
        RrsInstance::Split { clause, negative, atom } => {
            let c = &n[clause];
            let a = if negative { &c.antecedent[atom] } else { &c.succedent[atom] };
            let (s, t) = (&a.args[0], &a.args[1]);
            let mut out = n.to_vec();
            match unify_terms(s, t) {
                None => {
                    // Irreflexive
                    out[clause] = replace_pred(c, negative, atom, &irr, vec![s.clone(), t.clone()]);
                }
                Some(sigma) => {
                    // Reflexive: both the irreflexive copy and the unified
                    // reflexive instance.
                    out[clause] = replace_pred(c, negative, atom, &irr, vec![s.clone(), t.clone()]);
                    let instantiated = sigma.apply_clause(c);
                    let su = sigma.apply_term(s);
                    let tu = sigma.apply_term(t);
                    out.insert(
                        clause + 1,
                        replace_pred(&instantiated, negative, atom, &rfl, vec![su, tu]),
                    );
                }
            }
            out
        }
    }
}

/// Applies one step of the RRS transition system for predicate `r`, with
/// Delete taking priority and the leftmost occurrence processed first.
/// Returns `None` when no rule applies.
pub fn rrs_step(n: &[Clause], r: &str) -> Result<Option<Vec<Clause>>, TransformError> {
    let instances = rrs_instances(n, r);
    match instances.first() {
        None => Ok(None),
        Some(inst) => Ok(Some(rrs_apply(n, r, inst))),
    }
}

fn check_split_precondition(n: &[Clause], r: &str) -> Result<(), TransformError> {
    let (rfl, irr) = split_names(r);
    let occupied = n
        .iter()
        .flat_map(Clause::atoms)
        .any(|a| a.pred == rfl || a.pred == irr);
    if occupied {
        return Err(TransformError::SplitSymbolsPresent(r.to_string()));
    }
    Ok(())
}

/// Exhaustive reflexive relation splitting for each listed predicate.
/// The result contains no occurrence of a listed predicate and no atom
/// `R_irr(s,s)`.
pub fn rrs(
    n: &[Clause],
    predicates: &[String],
    sig: &mut Signature,
) -> Result<(Vec<Clause>, TransformLedger), TransformError> {
    let mut ledger = TransformLedger::default();
    let mut set = n.to_vec();
    for r in predicates {
        if sig.predicate_arity(r) != Some(2) {
            return Err(TransformError::NotBinary(r.clone()));
        }
        check_split_precondition(&set, r)?;
        let (rfl, irr) = split_names(r);
        if sig.has_symbol(&rfl) || sig.has_symbol(&irr) {
            return Err(TransformError::SplitSymbolsPresent(r.clone()));
        }
        sig.declare_predicate(&rfl, 2).map_err(|_| TransformError::SplitSymbolsPresent(r.clone()))?;
        sig.declare_predicate(&irr, 2).map_err(|_| TransformError::SplitSymbolsPresent(r.clone()))?;
        while let Some(next) = rrs_step(&set, r)? {
            set = next;
            ledger.rrs_steps += 1;
        }
        ledger.split_map.insert(r.clone(), (rfl.clone(), irr.clone()));
        ledger.applied_steps.push(format!("split {r} -> {rfl}/{irr}"));
    }
    ledger.rrs_output_clauses = set.len();
    Ok((set, ledger))
}

/// Removes tautologies, duplicate literal copies, and clauses subsumed by
/// another clause in the set.
pub fn redundancy_cleanup(n: &[Clause]) -> Vec<Clause> {
    let deduped: Vec<Clause> = n
        .iter()
        .map(Clause::dedup_literals)
        .filter(|c| !c.is_tautology())
        .collect();
    // strictly subsumed clauses go first ...
    let mut keep: Vec<bool> = vec![true; deduped.len()];
    for i in 0..deduped.len() {
        for j in 0..deduped.len() {
            if i != j && subsumes(&deduped[j], &deduped[i]) && !subsumes(&deduped[i], &deduped[j]) {
                keep[i] = false;
                break;
            }
        }
    }
    // ... then mutual subsumption (variants) keeps the first copy.
    let mut out: Vec<Clause> = Vec::new();
    for (i, c) in deduped.into_iter().enumerate() {
        if keep[i] && !out.iter().any(|d| subsumes(d, &c)) {
            out.push(c);
        }
    }
    out
}

struct Approximator<'a> {
    sig: &'a mut Signature,
    ledger: TransformLedger,
    guard_counter: usize,
    var_counter: usize,
}

impl<'a> Approximator<'a> {
    fn fresh_guard(&mut self, pattern: &Term) -> String {
        loop {
            self.guard_counter += 1;
            let name = format!("q{}", self.guard_counter);
            if !self.sig.has_symbol(&name) {
                self.sig.declare_predicate(&name, 1).expect("fresh guard name");
                self.ledger.guard_map.insert(name.clone(), pattern.clone());
                return name;
            }
        }
    }

    fn fresh_var(&mut self, avoid: &std::collections::BTreeSet<String>) -> String {
        loop {
            let name = format!("Z{}", self.var_counter);
            self.var_counter += 1;
            if !avoid.contains(&name) {
                return name;
            }
        }
    }

    /// Step 1: every atom over a non-monadic predicate `R` becomes
    /// `T(f_R(args))`.
    fn project_monadic(&mut self, n: &[Clause]) -> Vec<Clause> {
        let non_monadic: Vec<(String, usize)> = {
            let mut seen = IndexMap::new();
            for c in n {
                for a in c.atoms() {
                    if a.args.len() != 1 {
                        seen.entry(a.pred.clone()).or_insert(a.args.len());
                    }
                }
            }
            seen.into_iter().collect()
        };
        if non_monadic.is_empty() {
            return n.to_vec();
        }
        let t_pred = match &self.ledger.monadic_pred {
            Some(p) => p.clone(),
            None => {
                let name = self.sig.fresh_name("t");
                self.sig.declare_predicate(&name, 1).expect("fresh monadic predicate");
                self.ledger.monadic_pred = Some(name.clone());
                name
            }
        };
        for (pred, arity) in &non_monadic {
            let fname = self.sig.fresh_name(&format!("f_{pred}"));
            self.sig.declare_function(&fname, *arity).expect("fresh projection function");
            self.ledger.monadic_map.insert(pred.clone(), fname.clone());
            self.ledger.applied_steps.push(format!("project {pred}/{arity} -> {t_pred}({fname}(..))"));
            self.ledger.approx_steps += 1;
        }
        let map_atom = |a: &Atom| -> Atom {
            match self.ledger.monadic_map.get(&a.pred) {
                Some(f) => Atom::new(&t_pred, vec![Term::App(f.clone(), a.args.clone())]),
                None => a.clone(),
            }
        };
        n.iter()
            .map(|c| Clause {
                antecedent: c.antecedent.iter().map(map_atom).collect(),
                succedent: c.succedent.iter().map(map_atom).collect(),
            })
            .collect()
    }

    /// Step 2: extract non-variable arguments out of the succedent term
    /// until it is shallow. Returns the replacement clauses, or `None`
    /// when the clause needs no extraction.
    fn extract_succedent(&mut self, c: &Clause) -> Option<Vec<Clause>> {
        let succ = c.succedent.first()?;
        let arg = &succ.args[0];
        let Term::App(f, args) = arg else { return None };
        let pos = args.iter().position(|t| !t.is_var())?;
        let extracted = args[pos].clone();
        let guard = self.fresh_guard(&extracted);
        let avoid = c.vars();
        let z = self.fresh_var(&avoid);
        let mut new_args = args.clone();
        new_args[pos] = Term::var(&z);
        let residue = Clause {
            antecedent: {
                let mut ante = c.antecedent.clone();
                ante.push(Atom::new(&guard, vec![Term::var(&z)]));
                ante
            },
            succedent: vec![Atom::new(&succ.pred, vec![Term::App(f.clone(), new_args)])],
        };
        let fact = Clause {
            antecedent: c.antecedent.clone(),
            succedent: vec![Atom::new(&guard, vec![extracted])],
        };
        self.ledger.approx_steps += 1;
        self.ledger.applied_steps.push(format!("extract succedent subterm via {guard}"));
        Some(vec![fact, residue])
    }

    /// Step 3: linearize the succedent argument; repeated variables are
    /// renamed apart and the antecedent literals mentioning them copied.
    fn linearize_succedent(&mut self, c: &Clause) -> Option<Clause> {
        let succ = c.succedent.first()?;
        let arg = &succ.args[0];
        if arg.is_linear() {
            return None;
        }
        let mut new_arg = arg.clone();
        let mut antecedent = c.antecedent.clone();
        let avoid = c.vars();
        // repeated variables in left-to-right order of first occurrence
        let mut order: Vec<String> = Vec::new();
        collect_var_order(arg, &mut order);
        let mut processed = std::collections::BTreeSet::new();
        for x in order {
            if !processed.insert(x.clone()) {
                continue;
            }
            let k = new_arg.var_count(&x);
            if k <= 1 {
                continue;
            }
            for _ in 1..k {
                let fresh = self.fresh_var(&avoid);
                replace_last_occurrence(&mut new_arg, &x, &fresh);
                for lit in c.antecedent.iter() {
                    if lit.args.iter().any(|t| t.contains_var(&x)) {
                        antecedent.push(rename_var_atom(lit, &x, &fresh));
                    }
                }
            }
        }
        self.ledger.approx_steps += 1;
        self.ledger.applied_steps.push("linearize succedent".to_string());
        Some(Clause {
            antecedent,
            succedent: vec![Atom::new(&succ.pred, vec![new_arg])],
        })
    }

    /// Step 4: an antecedent atom whose argument has a variable both as a
    /// direct argument and inside a complex sibling argument loses the
    /// complex subterm to a guard predicate.
    fn extract_antecedent(&mut self, c: &Clause) -> Option<Vec<Clause>> {
        for (idx, atom) in c.antecedent.iter().enumerate() {
            let Term::App(f, args) = &atom.args[0] else { continue };
            let direct: Vec<&String> = args
                .iter()
                .filter_map(|t| match t {
                    Term::Var(v) => Some(v),
                    _ => None,
                })
                .collect();
            let Some(pos) = args
                .iter()
                .position(|t| !t.is_var() && direct.iter().any(|v| t.contains_var(v)))
            else {
                continue;
            };
            let extracted = args[pos].clone();
            let guard = self.fresh_guard(&extracted);
            let avoid = c.vars();
            let z = self.fresh_var(&avoid);
            let mut new_args = args.clone();
            new_args[pos] = Term::var(&z);
            let mut antecedent = c.antecedent.clone();
            antecedent[idx] = Atom::new(&atom.pred, vec![Term::App(f.clone(), new_args)]);
            antecedent.push(Atom::new(&guard, vec![Term::var(&z)]));
            let residue = Clause { antecedent, succedent: c.succedent.clone() };
            let mut fact_ante = c.antecedent.clone();
            fact_ante.remove(idx);
            let fact = Clause {
                antecedent: fact_ante,
                succedent: vec![Atom::new(&guard, vec![extracted])],
            };
            self.ledger.approx_steps += 1;
            self.ledger.applied_steps.push(format!("extract antecedent subterm via {guard}"));
            return Some(vec![fact, residue]);
        }
        None
    }

    fn normalize(&mut self, clauses: Vec<Clause>) -> Vec<Clause> {
        let mut work = clauses;
        let mut done = Vec::new();
        while let Some(c) = work.pop() {
            if let Some(repl) = self.extract_succedent(&c) {
                work.extend(repl);
            } else if let Some(repl) = self.linearize_succedent(&c) {
                work.push(repl);
            } else if let Some(repl) = self.extract_antecedent(&c) {
                work.extend(repl);
            } else {
                done.push(c);
            }
        }
        done.reverse();
        done
    }
}

fn collect_var_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::App(_, args) => {
            for a in args {
                collect_var_order(a, out);
            }
        }
    }
}

fn replace_last_occurrence(t: &mut Term, var: &str, fresh: &str) -> bool {
    match t {
        Term::Var(v) if v == var => {
            *t = Term::var(fresh);
            true
        }
        Term::Var(_) => false,
        Term::App(_, args) => {
            for a in args.iter_mut().rev() {
                if replace_last_occurrence(a, var, fresh) {
                    return true;
                }
            }
            false
        }
    }
}

fn rename_var_atom(a: &Atom, var: &str, fresh: &str) -> Atom {
    fn go(t: &Term, var: &str, fresh: &str) -> Term {
        match t {
            Term::Var(v) if v == var => Term::var(fresh),
            Term::Var(_) => t.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|x| go(x, var, fresh)).collect())
            }
        }
    }
    Atom {
        pred: a.pred.clone(),
        args: a.args.iter().map(|t| go(t, var, fresh)).collect(),
    }
}

/// The monadic/shallow/linear approximation. Satisfiability-preserving
/// upward: any model of the output induces a model of the input. Every
/// output clause is MSLH.
pub fn approximate(
    n: &[Clause],
    sig: &mut Signature,
) -> Result<(Vec<Clause>, TransformLedger), TransformError> {
    if let Some(c) = n.iter().find(|c| !c.is_horn()) {
        return Err(TransformError::NonHorn(c.to_string()));
    }
    let mut approx = Approximator {
        sig,
        ledger: TransformLedger::default(),
        guard_counter: 0,
        var_counter: 0,
    };
    let projected = approx.project_monadic(n);
    let out = approx.normalize(projected);
    // A fixpoint input must come back unchanged; projection already
    // counts its own steps, the normalization loop counts the rest.
    debug_assert!(out.iter().all(Clause::is_mslh));
    Ok((out, approx.ledger))
}

/// Answers a ground query over the original signature against an oracle
/// for minimal-Herbrand-model membership over the transformed signature.
/// Composes the split-predicate merge (`R := R_irr` off the diagonal,
/// `R_rfl` on it) with the monadic-shift undo.
pub fn back_translate_query(
    ledger: &TransformLedger,
    atom: &Atom,
    oracle: impl Fn(&Atom) -> bool,
) -> Result<bool, TransformError> {
    if !atom.is_ground() {
        return Err(TransformError::NonGroundQuery(atom.to_string()));
    }
    let pred = match ledger.split_map.get(&atom.pred) {
        Some((rfl, irr)) => {
            if atom.args.len() == 2 && atom.args[0] == atom.args[1] {
                rfl.clone()
            } else {
                irr.clone()
            }
        }
        None => atom.pred.clone(),
    };
    let target = match ledger.monadic_map.get(&pred) {
        Some(f) => {
            let t_pred = ledger.monadic_pred.as_deref().expect("projection implies a monadic predicate");
            Atom::new(t_pred, vec![Term::App(f.clone(), atom.args.clone())])
        }
        None => Atom { pred, args: atom.args.clone() },
    };
    Ok(oracle(&target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::clause_set_variant_eq;
    use crate::text::{parse_atom, parse_clauses, register_clause};

    fn setup(src: &str) -> (Vec<Clause>, Signature) {
        let clauses = parse_clauses(src).unwrap();
        let mut sig = Signature::new();
        for c in &clauses {
            register_clause(c, &mut sig).unwrap();
        }
        (clauses, sig)
    }

    fn split(src: &str, preds: &[&str]) -> (Vec<Clause>, TransformLedger, Signature) {
        let (n, mut sig) = setup(src);
        let preds: Vec<String> = preds.iter().map(|s| s.to_string()).collect();
        let (out, ledger) = rrs(&n, &preds, &mut sig).unwrap();
        (out, ledger, sig)
    }

    fn assert_set_eq(got: &[Clause], want: &str) {
        let want = parse_clauses(want).unwrap();
        assert!(
            clause_set_variant_eq(got, &want),
            "clause sets differ\n got: {:#?}\nwant: {:#?}",
            got.iter().map(Clause::to_string).collect::<Vec<_>>(),
            want.iter().map(Clause::to_string).collect::<Vec<_>>(),
        );
    }

    #[test]
    fn split_reflexivity_unit() {
        let (out, ledger, sig) = split("r(X,X).", &["r"]);
        assert_set_eq(&out, "r_rfl(X,X).");
        assert_eq!(ledger.split_map["r"], ("r_rfl".to_string(), "r_irr".to_string()));
        assert_eq!(sig.predicate_arity("r_rfl"), Some(2));
        assert_eq!(sig.predicate_arity("r_irr"), Some(2));
    }

    #[test]
    fn split_irreflexive_unit() {
        // y and g(y) fail the occurs check, so only the irreflexive copy
        // survives.
        let (out, _, _) = split("~r(Y,g(Y)).", &["r"]);
        assert_set_eq(&out, "~r_irr(Y,g(Y)).");
    }

    #[test]
    fn split_equivalence_axioms() {
        let (out, _, _) = split(
            "r(X,X). r(Y,X) | ~r(X,Y). r(X,Z) | ~r(X,Y) | ~r(Y,Z).",
            &["r"],
        );
        assert_set_eq(
            &out,
            "r_rfl(X,X).
             r_irr(Y,X) | ~r_irr(X,Y).
             r_rfl(X,X) | ~r_rfl(X,X).
             r_irr(X,Z) | ~r_irr(X,Y) | ~r_irr(Y,Z).
             r_rfl(X,X) | ~r_irr(X,Y) | ~r_irr(Y,X).
             r_irr(X,Y) | ~r_irr(X,Y) | ~r_rfl(Y,Y).
             r_irr(X,Z) | ~r_rfl(X,X) | ~r_irr(X,Z).
             r_rfl(X,X) | ~r_rfl(X,X) | ~r_rfl(X,X).",
        );
        let cleaned = redundancy_cleanup(&out);
        assert_set_eq(
            &cleaned,
            "r_rfl(X,X).
             r_irr(Y,X) | ~r_irr(X,Y).
             r_irr(X,Z) | ~r_irr(X,Y) | ~r_irr(Y,Z).",
        );
    }

    #[test]
    fn split_partial_order_axioms() {
        let (out, _, _) = split(
            "~r(X,X). r(X,g(X)). r(X,Z) | ~r(X,Y) | ~r(Y,Z).",
            &["r"],
        );
        let cleaned = redundancy_cleanup(&out);
        assert_set_eq(
            &cleaned,
            "~r_rfl(X,X).
             r_irr(X,g(X)).
             r_irr(X,Z) | ~r_irr(X,Y) | ~r_irr(Y,Z).
             r_rfl(X,X) | ~r_irr(X,Y) | ~r_irr(Y,X).",
        );
    }

    #[test]
    fn split_rejects_non_binary() {
        let (n, mut sig) = setup("p(a).");
        let err = rrs(&n, &["p".to_string()], &mut sig).unwrap_err();
        assert_eq!(err, TransformError::NotBinary("p".to_string()));
    }

    #[test]
    fn split_rejects_occupied_names() {
        let (n, mut sig) = setup("r(X,X). r_irr(a,b).");
        let err = rrs(&n, &["r".to_string()], &mut sig).unwrap_err();
        assert_eq!(err, TransformError::SplitSymbolsPresent("r".to_string()));
    }

    #[test]
    fn approximate_presplit_intro_set() {
        let (n, mut sig) = setup(
            "r_rfl(X,X). r_irr(X,Y) | ~r_irr(g(X),g(Y)). ~r_irr(g(X),c).",
        );
        let (out, ledger) = approximate(&n, &mut sig).unwrap();
        assert_set_eq(
            &out,
            "t(f_r_rfl(X,Y)).
             t(f_r_irr(X,Y)) | ~t(f_r_irr(g(X),g(Y))).
             ~t(f_r_irr(g(X),c)).",
        );
        assert!(ledger.approximation_was_lossy());
        assert_eq!(ledger.monadic_pred.as_deref(), Some("t"));
        assert!(out.iter().all(Clause::is_mslh));
    }

    #[test]
    fn approximate_extracts_nonlinear_antecedent() {
        let (n, mut sig) = setup("r(X,X). ~r(Y,g(Y)).");
        let (n, mut ledger) = rrs(&n, &["r".to_string()], &mut sig).unwrap();
        let (out, approx_ledger) = approximate(&n, &mut sig).unwrap();
        ledger.merge(approx_ledger);
        assert_set_eq(
            &out,
            "t(f_r_rfl(X,Y)).
             q1(g(Y)).
             ~q1(Z) | ~t(f_r_irr(Y,Z)).",
        );
        assert_eq!(ledger.guard_map["q1"], crate::text::parse_term("g(Y)").unwrap());

        // ground queries over the original signature route through the
        // split and the monadic shift
        let seen = std::cell::RefCell::new(Vec::new());
        let oracle = |a: &Atom| {
            seen.borrow_mut().push(a.to_string());
            true
        };
        back_translate_query(&ledger, &parse_atom("r(c,c)").unwrap(), oracle).unwrap();
        back_translate_query(&ledger, &parse_atom("r(c,g(c))").unwrap(), oracle).unwrap();
        assert_eq!(
            seen.borrow().as_slice(),
            ["t(f_r_rfl(c,c))", "t(f_r_irr(c,g(c)))"]
        );
        let err =
            back_translate_query(&ledger, &parse_atom("r(X,c)").unwrap(), |_| true).unwrap_err();
        assert!(matches!(err, TransformError::NonGroundQuery(_)));
    }

    #[test]
    fn approximate_extracts_deep_succedent() {
        // the lost-depth example: r_irr(X,g(X)) splits into a guard fact
        // and a shallow rule
        let (n, mut sig) = setup("r_irr(X,g(X)).");
        let (out, _) = approximate(&n, &mut sig).unwrap();
        assert_set_eq(&out, "q1(g(X)). t(f_r_irr(X,Y)) | ~q1(Y).");
    }

    #[test]
    fn approximate_keeps_linear_deep_antecedents() {
        let (n, mut sig) = setup("~t(f(g(X),c)).");
        let (out, ledger) = approximate(&n, &mut sig).unwrap();
        assert_set_eq(&out, "~t(f(g(X),c)).");
        assert!(!ledger.approximation_was_lossy());
    }

    #[test]
    fn approximate_is_identity_on_mslh() {
        let (n, mut sig) = setup("p(a). p(f(X)) | ~p(X). ~p(f(f(a))).");
        let (out, ledger) = approximate(&n, &mut sig).unwrap();
        assert_eq!(out, n);
        assert!(!ledger.approximation_was_lossy());
    }

    #[test]
    fn approximate_projects_propositional_atoms() {
        let (n, mut sig) = setup("p | ~q.");
        let (out, _) = approximate(&n, &mut sig).unwrap();
        assert_set_eq(&out, "t(f_p) | ~t(f_q).");
        assert_eq!(sig.function_arity("f_p"), Some(0));
    }

    #[test]
    fn approximate_copies_antecedent_on_linearization() {
        let (n, mut sig) = setup("s(f(X,X)) | ~p(X).");
        let (out, ledger) = approximate(&n, &mut sig).unwrap();
        assert_set_eq(&out, "s(f(X,Y)) | ~p(X) | ~p(Y).");
        assert!(ledger.approximation_was_lossy());
    }

    #[test]
    fn approximate_rejects_non_horn() {
        let (n, mut sig) = setup("p(X) | q(X).");
        let err = approximate(&n, &mut sig).unwrap_err();
        assert!(matches!(err, TransformError::NonHorn(_)));
    }
}
