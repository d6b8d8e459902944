//! Finite model extraction from saturated MSLH clause sets.
//!
//! Elements of the model are "colors": sets of monadic predicates. Two
//! ground terms are identified exactly when the minimal Herbrand model
//! puts them into the same predicates, so the quotient has at most 2^p
//! elements for p predicates. Productive clauses — those of the shape
//! `P_1(y_{j_1}), …, P_n(y_{j_n}) ⟹ S(f(y_1,…,y_m))` with pairwise
//! distinct `y_j` — become production rules driving a least fixpoint
//! over colors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;

use crate::kernel::{Atom, Clause, Signature, Term};
use crate::saturate::is_productive_shape;
use crate::treeauto::{TaRule, TreeAutomaton};

/// A domain element: the set of predicates satisfied by its class.
pub type Color = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    EmptyClausePresent,
    UndeclaredSymbol(String),
    NonGroundQuery(String),
    NonMonadicQuery(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyClausePresent => {
                write!(f, "clause set contains the empty clause; no model exists")
            }
            ModelError::UndeclaredSymbol(s) => write!(f, "symbol `{s}` is not interpreted"),
            ModelError::NonGroundQuery(a) => write!(f, "query atom is not ground: {a}"),
            ModelError::NonMonadicQuery(a) => write!(f, "query atom is not monadic: {a}"),
        }
    }
}

impl std::error::Error for ModelError {}

/// One productive clause, read as a bottom-up coloring rule: `func`
/// yields a term satisfying `pred` whenever argument `j` satisfies every
/// predicate in `constraints[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductionRule {
    pub func: String,
    pub pred: String,
    pub constraints: Vec<Color>,
}

impl fmt::Display for ProductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.constraints.iter().map(|c| color_name(c)).collect();
        write!(f, "{}({}) => {}", self.func, cs.join(","), self.pred)
    }
}

/// A finite structure over colors, with total function tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    pub domain: Vec<Color>,
    pub const_table: BTreeMap<String, Color>,
    pub fun_tables: BTreeMap<String, BTreeMap<Vec<Color>, Color>>,
    pub pred_ext: BTreeMap<String, BTreeSet<Color>>,
    /// one minimal-depth ground term per color, for diagnostics
    pub witnesses: BTreeMap<Color, Term>,
}

pub fn color_name(c: &Color) -> String {
    let parts: Vec<&str> = c.iter().map(String::as_str).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain ({} elements):", self.domain.len())?;
        for c in &self.domain {
            match self.witnesses.get(c) {
                Some(w) => writeln!(f, "  {}    e.g. {w}", color_name(c))?,
                None => writeln!(f, "  {}", color_name(c))?,
            }
        }
        for (p, ext) in &self.pred_ext {
            let cs: Vec<String> = ext.iter().map(color_name).collect();
            writeln!(f, "{p}: {}", cs.join(" "))?;
        }
        for (c, v) in &self.const_table {
            writeln!(f, "{c} = {}", color_name(v))?;
        }
        for (fun, table) in &self.fun_tables {
            for (args, v) in table {
                let args: Vec<String> = args.iter().map(color_name).collect();
                writeln!(f, "{fun}({}) = {}", args.join(","), color_name(v))?;
            }
        }
        Ok(())
    }
}

/// Extracts the production rules of every productive clause; all other
/// clauses are non-productive and ignored.
pub fn production_rules(clauses: &[Clause]) -> Vec<ProductionRule> {
    let mut out = Vec::new();
    for c in clauses {
        if !is_productive_shape(c) {
            continue;
        }
        let succ = &c.succedent[0];
        let Term::App(func, args) = &succ.args[0] else { unreachable!() };
        let constraints: Vec<Color> = args
            .iter()
            .map(|y| {
                let Term::Var(y) = y else { unreachable!() };
                c.antecedent
                    .iter()
                    .filter(|a| a.args[0] == Term::var(y))
                    .map(|a| a.pred.clone())
                    .collect()
            })
            .collect();
        out.push(ProductionRule { func: func.clone(), pred: succ.pred.clone(), constraints });
    }
    out
}

/// Unit clauses `⟹ S(x)`: their predicate holds of every ground term.
/// Saturation can derive such clauses (e.g. from `S(g(x))` and
/// `S(x) ⟸ S(g(g(x)))`), and they produce outside the Prop.-1(a) shape.
pub fn universal_facts(clauses: &[Clause]) -> BTreeSet<String> {
    clauses
        .iter()
        .filter(|c| {
            c.antecedent.is_empty()
                && matches!(c.succedent.as_slice(), [a] if matches!(a.args.as_slice(), [Term::Var(_)]))
        })
        .map(|c| c.succedent[0].pred.clone())
        .collect()
}

/// The color produced by applying the rules to already-colored arguments.
fn apply_rules(
    rules: &[ProductionRule],
    universal: &BTreeSet<String>,
    func: &str,
    args: &[Color],
) -> Color {
    let mut out: Color = rules
        .iter()
        .filter(|r| {
            r.func == func
                && r.constraints.len() == args.len()
                && r.constraints.iter().zip(args).all(|(req, got)| req.is_subset(got))
        })
        .map(|r| r.pred.clone())
        .collect();
    out.extend(universal.iter().cloned());
    out
}

fn color_tuples(domain: &[Color], arity: usize) -> Vec<Vec<Color>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                domain.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Builds the color-quotient structure from a saturated clause set by a
/// least fixpoint: colors of constants first, then closure under every
/// function over the colors reached so far. With no constants the domain
/// is the single color ∅ (a nonempty universe is still required).
pub fn build_finite_model(
    sig: &Signature,
    clauses: &[Clause],
) -> Result<FiniteStructure, ModelError> {
    if clauses.iter().any(Clause::is_empty) {
        return Err(ModelError::EmptyClausePresent);
    }
    let rules = production_rules(clauses);
    let universal = universal_facts(clauses);
    let mut domain: Vec<Color> = Vec::new();
    let mut witnesses: BTreeMap<Color, Term> = BTreeMap::new();
    let mut const_table = BTreeMap::new();
    for c in sig.constants() {
        let color = apply_rules(&rules, &universal, c, &[]);
        witnesses.entry(color.clone()).or_insert_with(|| Term::constant(c));
        if !domain.contains(&color) {
            domain.push(color.clone());
        }
        const_table.insert(c.to_string(), color);
    }
    if domain.is_empty() {
        // no constants: seed with one unnamed element, which still has to
        // satisfy every universally-derived fact
        domain.push(universal.iter().cloned().collect());
    }
    let proper: Vec<(String, usize)> = sig
        .functions()
        .filter(|&(_, a)| a > 0)
        .map(|(f, a)| (f.to_string(), a))
        .collect();
    let mut fun_tables: BTreeMap<String, BTreeMap<Vec<Color>, Color>> =
        proper.iter().map(|(f, _)| (f.clone(), BTreeMap::new())).collect();
    loop {
        let mut changed = false;
        for (f, arity) in &proper {
            for args in color_tuples(&domain, *arity) {
                if fun_tables[f].contains_key(&args) {
                    continue;
                }
                let color = apply_rules(&rules, &universal, f, &args);
                if let Some(ws) = args.iter().map(|c| witnesses.get(c).cloned()).collect() {
                    witnesses.entry(color.clone()).or_insert(Term::App(f.clone(), ws));
                }
                if !domain.contains(&color) {
                    domain.push(color.clone());
                }
                fun_tables.get_mut(f).unwrap().insert(args, color);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let pred_ext = sig
        .monadic_predicates()
        .into_iter()
        .map(|p| {
            let ext = domain.iter().filter(|c| c.contains(&p)).cloned().collect();
            (p, ext)
        })
        .collect();
    Ok(FiniteStructure { domain, const_table, fun_tables, pred_ext, witnesses })
}

impl FiniteStructure {
    fn eval_term(
        &self,
        t: &Term,
        assign: &BTreeMap<String, Color>,
    ) -> Result<Color, ModelError> {
        match t {
            Term::Var(v) => assign
                .get(v)
                .cloned()
                .ok_or_else(|| ModelError::UndeclaredSymbol(v.clone())),
            Term::App(f, args) if args.is_empty() => self
                .const_table
                .get(f)
                .cloned()
                .ok_or_else(|| ModelError::UndeclaredSymbol(f.clone())),
            Term::App(f, args) => {
                let args: Vec<Color> =
                    args.iter().map(|a| self.eval_term(a, assign)).collect::<Result<_, _>>()?;
                self.fun_tables
                    .get(f)
                    .and_then(|t| t.get(&args))
                    .cloned()
                    .ok_or_else(|| ModelError::UndeclaredSymbol(f.clone()))
            }
        }
    }

    fn eval_atom(
        &self,
        a: &Atom,
        assign: &BTreeMap<String, Color>,
    ) -> Result<bool, ModelError> {
        let ext = self
            .pred_ext
            .get(&a.pred)
            .ok_or_else(|| ModelError::UndeclaredSymbol(a.pred.clone()))?;
        if a.args.len() != 1 {
            return Err(ModelError::NonMonadicQuery(a.to_string()));
        }
        Ok(ext.contains(&self.eval_term(&a.args[0], assign)?))
    }
}

/// Truth of a clause in the structure, by exhaustive enumeration of the
/// domain^|vars| variable assignments.
pub fn evaluate(a: &FiniteStructure, c: &Clause) -> Result<bool, ModelError> {
    let vars: Vec<String> = c.vars().into_iter().collect();
    for tuple in color_tuples(&a.domain, vars.len()) {
        let assign: BTreeMap<String, Color> = vars.iter().cloned().zip(tuple).collect();
        let mut holds = false;
        for atom in &c.antecedent {
            if !a.eval_atom(atom, &assign)? {
                holds = true;
                break;
            }
        }
        if !holds {
            for atom in &c.succedent {
                if a.eval_atom(atom, &assign)? {
                    holds = true;
                    break;
                }
            }
        }
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_model(a: &FiniteStructure, clauses: &[Clause]) -> Result<bool, ModelError> {
    for c in clauses {
        if !evaluate(a, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ground_color(
    rules: &[ProductionRule],
    universal: &BTreeSet<String>,
    t: &Term,
) -> Result<Color, ModelError> {
    match t {
        Term::Var(v) => Err(ModelError::NonGroundQuery(v.clone())),
        Term::App(f, args) => {
            let args: Vec<Color> = args
                .iter()
                .map(|a| ground_color(rules, universal, a))
                .collect::<Result<_, _>>()?;
            Ok(apply_rules(rules, universal, f, &args))
        }
    }
}

/// Minimal-Herbrand-model membership of a ground monadic atom, via the
/// bottom-up color of its argument term.
pub fn ground_membership(clauses: &[Clause], atom: &Atom) -> Result<bool, ModelError> {
    if clauses.iter().any(Clause::is_empty) {
        return Err(ModelError::EmptyClausePresent);
    }
    if atom.args.len() != 1 {
        return Err(ModelError::NonMonadicQuery(atom.to_string()));
    }
    let rules = production_rules(clauses);
    let universal = universal_facts(clauses);
    Ok(ground_color(&rules, &universal, &atom.args[0])?.contains(&atom.pred))
}

/// Packages the color fixpoint as a bottom-up tree automaton: states are
/// the reachable colors, transitions come from the function tables, and
/// the finals are the colors containing `pred`. It accepts exactly the
/// ground terms `t` with `P(t)` in the minimal Herbrand model.
pub fn herbrand_automaton(
    sig: &Signature,
    clauses: &[Clause],
    pred: &str,
) -> Result<TreeAutomaton, ModelError> {
    let a = build_finite_model(sig, clauses)?;
    let ops: IndexMap<String, usize> =
        sig.functions().map(|(f, ar)| (f.to_string(), ar)).collect();
    let index = |c: &Color| a.domain.iter().position(|d| d == c).unwrap();
    let mut ta = TreeAutomaton::new(ops, BTreeSet::new());
    for c in &a.domain {
        ta.states.push(color_name(c));
        if c.contains(pred) {
            ta.finals.insert(index(c));
        }
    }
    for (name, color) in &a.const_table {
        ta.rules.push(TaRule { op: name.clone(), args: vec![], target: index(color) });
    }
    for (f, table) in &a.fun_tables {
        for (args, target) in table {
            ta.rules.push(TaRule {
                op: f.clone(),
                args: args.iter().map(&index).collect(),
                target: index(target),
            });
        }
    }
    Ok(ta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_atom, parse_clauses, register_clause};

    fn setup(src: &str) -> (Vec<Clause>, Signature) {
        let clauses = parse_clauses(src).unwrap();
        let mut sig = Signature::new();
        for c in &clauses {
            register_clause(c, &mut sig).unwrap();
        }
        (clauses, sig)
    }

    const EXAMPLE_SET: &str = "
        p(a). q(b).
        p(f(U,V)) | ~p(U) | ~p(V).
        q(f(U,V)) | ~q(U) | ~q(V).
        r(f(X,Y)) | ~p(X).
        r(f(X,Y)) | ~p(Y).
        r(f(X,Y)) | ~q(X).
        r(f(X,Y)) | ~q(Y).
        ~p(Z) | ~q(Z) | ~r(Z).
    ";

    fn color(names: &[&str]) -> Color {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn production_rule_extraction() {
        let (clauses, _) = setup(EXAMPLE_SET);
        let rules = production_rules(&clauses);
        assert_eq!(rules.len(), 8);
        assert!(rules.contains(&ProductionRule {
            func: "f".to_string(),
            pred: "r".to_string(),
            constraints: vec![color(&["p"]), color(&[])],
        }));
        // purely negative clauses and guarded antecedents produce nothing
        let (clauses, _) = setup("~p(X) | ~q(X). t(f_irr(X,Y)) | ~t(f_irr(g(X),g(Y))).");
        assert!(production_rules(&clauses).is_empty());
    }

    #[test]
    fn example_model_colors_and_tables() {
        let (clauses, sig) = setup(EXAMPLE_SET);
        let a = build_finite_model(&sig, &clauses).unwrap();
        // the five "named" classes plus the class of terms satisfying no
        // predicate, which is reachable via f({r},{r})
        let mut want: Vec<Color> = vec![
            color(&["p"]),
            color(&["q"]),
            color(&["p", "r"]),
            color(&["q", "r"]),
            color(&["r"]),
            color(&[]),
        ];
        let mut got = a.domain.clone();
        want.sort();
        got.sort();
        assert_eq!(got, want);
        let f = &a.fun_tables["f"];
        assert_eq!(f[&vec![color(&["p"]), color(&["p"])]], color(&["p", "r"]));
        assert_eq!(f[&vec![color(&["q"]), color(&["q"])]], color(&["q", "r"]));
        assert_eq!(f[&vec![color(&["p"]), color(&["q"])]], color(&["r"]));
        assert_eq!(a.const_table["a"], color(&["p"]));
        assert_eq!(a.const_table["b"], color(&["q"]));
        // the witness for a constant color is the constant itself
        assert_eq!(a.witnesses[&color(&["p"])], Term::constant("a"));
        assert!(verify_model(&a, &clauses).unwrap());
    }

    #[test]
    fn presplit_model_has_two_colors() {
        let (clauses, sig) = setup(
            "t(f_rfl(X,Y)).
             t(f_irr(X,Y)) | ~t(f_irr(g(X),g(Y))).
             ~t(f_irr(g(X),c)).",
        );
        let a = build_finite_model(&sig, &clauses).unwrap();
        let mut got = a.domain.clone();
        got.sort();
        assert_eq!(got, vec![color(&[]), color(&["t"])]);
        for (args, v) in &a.fun_tables["f_rfl"] {
            assert_eq!(*v, color(&["t"]), "f_rfl{args:?}");
        }
        for (args, v) in a.fun_tables["f_irr"].iter().chain(&a.fun_tables["g"]) {
            assert_eq!(*v, color(&[]), "{args:?}");
        }
        assert!(verify_model(&a, &clauses).unwrap());
    }

    #[test]
    fn trivial_domain_without_productive_clauses() {
        let (clauses, sig) = setup("~p(a).");
        let a = build_finite_model(&sig, &clauses).unwrap();
        assert_eq!(a.domain, vec![Color::new()]);
        assert!(verify_model(&a, &clauses).unwrap());
    }

    #[test]
    fn empty_clause_is_rejected() {
        let (clauses, sig) = setup("p(a). false.");
        assert_eq!(build_finite_model(&sig, &clauses), Err(ModelError::EmptyClausePresent));
    }

    #[test]
    fn evaluate_detects_falsified_clause() {
        let (clauses, sig) = setup("~p(a).");
        let a = build_finite_model(&sig, &clauses).unwrap();
        // P's extension is empty, so ⟹ P(a) is false in the structure
        let fact = parse_clauses("p(a).").unwrap();
        assert!(!evaluate(&a, &fact[0]).unwrap());
        let unknown = parse_clauses("s(a).").unwrap();
        assert!(matches!(evaluate(&a, &unknown[0]), Err(ModelError::UndeclaredSymbol(_))));
    }

    #[test]
    fn ground_membership_goldens() {
        let (clauses, _) = setup(EXAMPLE_SET);
        let member = |s: &str| ground_membership(&clauses, &parse_atom(s).unwrap()).unwrap();
        assert!(member("r(f(a,b))"));
        assert!(!member("p(b)"));
        assert!(member("q(f(b,b))"));
        assert!(member("p(f(a,a))"));
        assert!(!member("r(a)"));
        let nonground = parse_atom("p(X)").unwrap();
        assert!(matches!(
            ground_membership(&clauses, &nonground),
            Err(ModelError::NonGroundQuery(_))
        ));
    }

    /// All ground terms over the signature's functions up to a depth.
    fn ground_terms(sig: &Signature, depth: usize) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for (f, arity) in sig.functions() {
                let mut combos: Vec<Vec<Term>> = vec![vec![]];
                for _ in 0..arity {
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            out.iter().map(move |t| {
                                let mut c = c.clone();
                                c.push(t.clone());
                                c
                            })
                        })
                        .collect();
                }
                next.extend(combos.into_iter().map(|args| Term::App(f.to_string(), args)));
            }
            for t in next {
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }

    #[test]
    fn structure_agrees_with_herbrand_membership() {
        let (clauses, sig) = setup(EXAMPLE_SET);
        let a = build_finite_model(&sig, &clauses).unwrap();
        for t in ground_terms(&sig, 3) {
            for p in ["p", "q", "r"] {
                let atom = Atom::new(p, vec![t.clone()]);
                let herbrand = ground_membership(&clauses, &atom).unwrap();
                let finite = a.eval_atom(&atom, &BTreeMap::new()).unwrap();
                assert_eq!(herbrand, finite, "disagree on {atom}");
            }
        }
    }

    #[test]
    fn automaton_agrees_with_ground_membership() {
        let (clauses, sig) = setup(EXAMPLE_SET);
        let ta = herbrand_automaton(&sig, &clauses, "r").unwrap();
        for t in ground_terms(&sig, 3) {
            let atom = Atom::new("r", vec![t.clone()]);
            assert_eq!(
                ta.accepts(&t).unwrap(),
                ground_membership(&clauses, &atom).unwrap(),
                "disagree on {t}"
            );
        }
        let (clauses, sig) = setup("~p(a).");
        assert!(herbrand_automaton(&sig, &clauses, "p").unwrap().is_empty());
    }

    #[test]
    fn congruence_of_colors() {
        // the color of f(s,t) depends only on the colors of s and t
        let (clauses, sig) = setup(EXAMPLE_SET);
        let rules = production_rules(&clauses);
        let universal = universal_facts(&clauses);
        let terms = ground_terms(&sig, 3);
        let colors: Vec<Color> =
            terms.iter().map(|t| ground_color(&rules, &universal, t).unwrap()).collect();
        for (i, s1) in terms.iter().enumerate() {
            for (j, s2) in terms.iter().enumerate() {
                if colors[i] != colors[j] {
                    continue;
                }
                for t in terms.iter().take(4) {
                    let a = Term::App("f".to_string(), vec![s1.clone(), t.clone()]);
                    let b = Term::App("f".to_string(), vec![s2.clone(), t.clone()]);
                    assert_eq!(
                        ground_color(&rules, &universal, &a).unwrap(),
                        ground_color(&rules, &universal, &b).unwrap()
                    );
                }
            }
        }
    }
}
