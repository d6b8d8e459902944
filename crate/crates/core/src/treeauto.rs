//! Bottom-up tree automata with Boolean operations, the ADC/IG/AMC model
//! representation building blocks, and emission of equivalent MSLH
//! clause sets.
//!
//! Predicates at the top of atoms are treated as ranked operators, so an
//! automaton uniformly runs over "atom terms" like `r(X, g(a,Y))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;

use crate::kernel::{Atom, Clause, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaError {
    AlphabetMismatch(String),
    UnknownOperator(String),
    NonLinearAtom(String),
    InvalidAdc(String),
    MissingVariable(String),
    Parse(String),
}

impl fmt::Display for TaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaError::AlphabetMismatch(m) => write!(f, "operator alphabets differ: {m}"),
            TaError::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            TaError::NonLinearAtom(a) => write!(f, "atom is not linear: {a}"),
            TaError::InvalidAdc(m) => write!(f, "invalid disequality constraint: {m}"),
            TaError::MissingVariable(v) => write!(f, "constrained variable `{v}` not in atom"),
            TaError::Parse(m) => write!(f, "automaton syntax: {m}"),
        }
    }
}

impl std::error::Error for TaError {}

/// One transition `op(q_1,…,q_n) ↦ q`, states by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaRule {
    pub op: String,
    pub args: Vec<usize>,
    pub target: usize,
}

/// A bottom-up tree automaton over a ranked alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAutomaton {
    /// operators with arity, in declaration order
    pub ops: IndexMap<String, usize>,
    /// operators that stem from predicate symbols
    pub pred_ops: BTreeSet<String>,
    pub states: Vec<String>,
    pub rules: Vec<TaRule>,
    pub finals: BTreeSet<usize>,
}

impl TreeAutomaton {
    pub fn new(ops: IndexMap<String, usize>, pred_ops: BTreeSet<String>) -> TreeAutomaton {
        TreeAutomaton { ops, pred_ops, states: Vec::new(), rules: Vec::new(), finals: BTreeSet::new() }
    }

    fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.states.push(name.into());
        self.states.len() - 1
    }

    /// The set of states this ground term can run into.
    fn run(&self, t: &Term) -> Result<BTreeSet<usize>, TaError> {
        let Term::App(f, args) = t else {
            return Err(TaError::UnknownOperator(t.to_string()));
        };
        match self.ops.get(f) {
            None => return Err(TaError::UnknownOperator(f.clone())),
            Some(&a) if a != args.len() => return Err(TaError::UnknownOperator(f.clone())),
            Some(_) => {}
        }
        let arg_states: Vec<BTreeSet<usize>> =
            args.iter().map(|a| self.run(a)).collect::<Result<_, _>>()?;
        let mut out = BTreeSet::new();
        for r in &self.rules {
            if r.op == *f && r.args.iter().zip(&arg_states).all(|(q, s)| s.contains(q)) {
                out.insert(r.target);
            }
        }
        Ok(out)
    }

    /// Bottom-up (nondeterministic) run; true when a final state is
    /// reachable at the root.
    pub fn accepts(&self, t: &Term) -> Result<bool, TaError> {
        Ok(self.run(t)?.iter().any(|q| self.finals.contains(q)))
    }

    pub fn accepts_atom(&self, a: &Atom) -> Result<bool, TaError> {
        self.accepts(&atom_term(a))
    }

    /// Emptiness via the reachable-state fixpoint.
    pub fn is_empty(&self) -> bool {
        let mut reach = vec![false; self.states.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !reach[r.target] && r.args.iter().all(|&q| reach[q]) {
                    reach[r.target] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        !self.finals.iter().any(|&q| reach[q])
    }

    fn check_alphabet(&self, other: &TreeAutomaton) -> Result<(), TaError> {
        if self.ops != other.ops {
            return Err(TaError::AlphabetMismatch(format!(
                "[{}] vs [{}]",
                ops_line(&self.ops),
                ops_line(&other.ops)
            )));
        }
        Ok(())
    }

    /// Product intersection.
    pub fn intersect(&self, other: &TreeAutomaton) -> Result<TreeAutomaton, TaError> {
        self.check_alphabet(other)?;
        let mut out = TreeAutomaton::new(self.ops.clone(), &self.pred_ops | &other.pred_ops);
        for (i, p) in self.states.iter().enumerate() {
            for (j, q) in other.states.iter().enumerate() {
                out.add_state(format!("({p},{q})"));
                if self.finals.contains(&i) && other.finals.contains(&j) {
                    out.finals.insert(i * other.states.len() + j);
                }
            }
        }
        let pair = |i: usize, j: usize| i * other.states.len() + j;
        for r1 in &self.rules {
            for r2 in &other.rules {
                if r1.op == r2.op {
                    out.rules.push(TaRule {
                        op: r1.op.clone(),
                        args: r1.args.iter().zip(&r2.args).map(|(&a, &b)| pair(a, b)).collect(),
                        target: pair(r1.target, r2.target),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Union as a disjoint sum of the two automata. (A product union
    /// would require completing both automata first; the sum gives the
    /// same language without the extra states.)
    pub fn union(&self, other: &TreeAutomaton) -> Result<TreeAutomaton, TaError> {
        self.check_alphabet(other)?;
        let mut out = TreeAutomaton::new(self.ops.clone(), &self.pred_ops | &other.pred_ops);
        for (i, p) in self.states.iter().enumerate() {
            out.add_state(format!("l:{p}"));
            if self.finals.contains(&i) {
                out.finals.insert(i);
            }
        }
        let off = self.states.len();
        for (j, q) in other.states.iter().enumerate() {
            out.add_state(format!("r:{q}"));
            if other.finals.contains(&j) {
                out.finals.insert(off + j);
            }
        }
        out.rules.extend(self.rules.iter().cloned());
        out.rules.extend(other.rules.iter().map(|r| TaRule {
            op: r.op.clone(),
            args: r.args.iter().map(|&q| q + off).collect(),
            target: r.target + off,
        }));
        Ok(out)
    }

    /// Subset-construction determinization. The result is deterministic
    /// and complete (the empty subset acts as the sink state), with one
    /// state per reachable subset.
    pub fn determinize(&self) -> TreeAutomaton {
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut rules: Vec<(String, Vec<usize>, usize)> = Vec::new();
        let mut frontier: Vec<usize> = Vec::new();
        let mut intern = |s: BTreeSet<usize>,
                          subsets: &mut Vec<BTreeSet<usize>>,
                          frontier: &mut Vec<usize>|
         -> usize {
            *index.entry(s.clone()).or_insert_with(|| {
                subsets.push(s);
                frontier.push(subsets.len() - 1);
                subsets.len() - 1
            })
        };
        // constants seed the reachable subsets; the sink is always there
        intern(BTreeSet::new(), &mut subsets, &mut frontier);
        let mut processed = 0;
        while processed < subsets.len() {
            processed = subsets.len();
            for (op, &arity) in self.ops.clone().iter() {
                let n = subsets.len();
                for combo in tuples(n, arity) {
                    let mut target = BTreeSet::new();
                    for r in &self.rules {
                        if r.op == *op
                            && r.args
                                .iter()
                                .zip(&combo)
                                .all(|(q, &s)| subsets[s].contains(q))
                        {
                            target.insert(r.target);
                        }
                    }
                    let t = intern(target, &mut subsets, &mut frontier);
                    let rule = (op.clone(), combo, t);
                    if !rules.contains(&rule) {
                        rules.push(rule);
                    }
                }
            }
        }
        let mut out = TreeAutomaton::new(self.ops.clone(), self.pred_ops.clone());
        for s in &subsets {
            let names: Vec<&str> = s.iter().map(|&q| self.states[q].as_str()).collect();
            let i = out.add_state(format!("{{{}}}", names.join(",")));
            if s.iter().any(|q| self.finals.contains(q)) {
                out.finals.insert(i);
            }
        }
        out.rules = rules
            .into_iter()
            .map(|(op, args, target)| TaRule { op, args, target })
            .collect();
        out
    }

    /// Complement: determinize, then invert the final-state set. The
    /// subset construction is complete, so inversion is sound.
    pub fn complement(&self) -> TreeAutomaton {
        let mut det = self.determinize();
        det.finals = (0..det.states.len()).filter(|q| !det.finals.contains(q)).collect();
        det
    }

    /// Canonical text form: `ops:`/`preds:`/`final:` headers, then one
    /// rule per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("ops: {}\n", ops_line(&self.ops));
        if !self.pred_ops.is_empty() {
            let preds: Vec<&str> = self.pred_ops.iter().map(String::as_str).collect();
            out.push_str(&format!("preds: {}\n", preds.join(" ")));
        }
        let finals: Vec<&str> = self.finals.iter().map(|&q| self.states[q].as_str()).collect();
        out.push_str(&format!("final: {}\n", finals.join(" ")));
        for r in &self.rules {
            if r.args.is_empty() {
                out.push_str(&format!("{} -> {}\n", r.op, self.states[r.target]));
            } else {
                let args: Vec<&str> = r.args.iter().map(|&q| self.states[q].as_str()).collect();
                out.push_str(&format!("{}({}) -> {}\n", r.op, args.join(","), self.states[r.target]));
            }
        }
        out
    }

    pub fn from_text(src: &str) -> Result<TreeAutomaton, TaError> {
        let mut ops = IndexMap::new();
        let mut pred_ops = BTreeSet::new();
        let mut final_names: Vec<String> = Vec::new();
        let mut rule_lines: Vec<(String, Vec<String>, String)> = Vec::new();
        for (no, raw) in src.lines().enumerate() {
            let line = raw.split('%').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| TaError::Parse(format!("line {}: {m}", no + 1));
            if let Some(rest) = line.strip_prefix("ops:") {
                for tok in rest.split_whitespace() {
                    let (name, arity) = tok
                        .split_once('/')
                        .ok_or_else(|| err(format!("expected `name/arity`, got `{tok}`")))?;
                    let arity: usize =
                        arity.parse().map_err(|_| err(format!("bad arity in `{tok}`")))?;
                    ops.insert(name.to_string(), arity);
                }
            } else if let Some(rest) = line.strip_prefix("preds:") {
                pred_ops.extend(rest.split_whitespace().map(str::to_string));
            } else if let Some(rest) = line.strip_prefix("final:") {
                final_names.extend(rest.split_whitespace().map(str::to_string));
            } else {
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| err("expected `lhs -> state`".to_string()))?;
                let (lhs, rhs) = (lhs.trim(), rhs.trim());
                let (op, args) = match lhs.split_once('(') {
                    None => (lhs.to_string(), vec![]),
                    Some((op, rest)) => {
                        let inner = rest
                            .strip_suffix(')')
                            .ok_or_else(|| err("missing `)`".to_string()))?;
                        let args = if inner.trim().is_empty() {
                            vec![]
                        } else {
                            inner.split(',').map(|s| s.trim().to_string()).collect()
                        };
                        (op.to_string(), args)
                    }
                };
                rule_lines.push((op, args, rhs.to_string()));
            }
        }
        let mut out = TreeAutomaton::new(ops, pred_ops);
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        // state declaration order: rule targets, then arguments, then finals
        let intern = |name: &str, out: &mut TreeAutomaton, index: &mut BTreeMap<String, usize>| {
            *index
                .entry(name.to_string())
                .or_insert_with(|| out.add_state(name))
        };
        for (op, args, target) in &rule_lines {
            let arity = *out
                .ops
                .get(op)
                .ok_or_else(|| TaError::UnknownOperator(op.clone()))?;
            if arity != args.len() {
                return Err(TaError::Parse(format!(
                    "operator `{op}` used with {} arguments, declared /{arity}",
                    args.len()
                )));
            }
            let target = intern(target, &mut out, &mut index);
            let args = args.iter().map(|a| intern(a, &mut out, &mut index)).collect();
            out.rules.push(TaRule { op: op.clone(), args, target });
        }
        for name in final_names {
            let q = intern(&name, &mut out, &mut index);
            out.finals.insert(q);
        }
        Ok(out)
    }
}

fn ops_line(ops: &IndexMap<String, usize>) -> String {
    let parts: Vec<String> = ops.iter().map(|(n, a)| format!("{n}/{a}")).collect();
    parts.join(" ")
}

/// All `arity`-tuples over `0..n`, lexicographically.
fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    out
}

/// Views an atom as a term with the predicate as top operator.
pub fn atom_term(a: &Atom) -> Term {
    Term::App(a.pred.clone(), a.args.clone())
}

fn alphabet(sig: &Signature) -> (IndexMap<String, usize>, BTreeSet<String>) {
    let mut ops: IndexMap<String, usize> = sig
        .functions()
        .map(|(n, a)| (n.to_string(), a))
        .collect();
    let mut pred_ops = BTreeSet::new();
    for (p, a) in sig.predicates() {
        ops.insert(p.to_string(), a);
        pred_ops.insert(p.to_string());
    }
    (ops, pred_ops)
}

struct AtomAutomatonBuilder {
    ta: TreeAutomaton,
    universal: usize,
    /// x's dedicated state when a constrained variable is requested
    var_state: Option<(String, usize)>,
    counter: usize,
}

impl AtomAutomatonBuilder {
    /// The universal state `q1` accepts every ground term built from the
    /// function operators.
    fn new(sig: &Signature) -> AtomAutomatonBuilder {
        let (ops, pred_ops) = alphabet(sig);
        let mut ta = TreeAutomaton::new(ops, pred_ops);
        let universal = ta.add_state("q1");
        for (f, arity) in ta.ops.clone() {
            if !ta.pred_ops.contains(&f) {
                ta.rules.push(TaRule { op: f, args: vec![universal; arity], target: universal });
            }
        }
        AtomAutomatonBuilder { ta, universal, var_state: None, counter: 1 }
    }

    fn fresh(&mut self) -> usize {
        self.counter += 1;
        self.ta.add_state(format!("q{}", self.counter))
    }

    fn state_of(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(v) => match &self.var_state {
                Some((x, q)) if x == v => *q,
                _ => self.universal,
            },
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| self.state_of(a)).collect();
                let q = self.fresh();
                self.ta.rules.push(TaRule { op: f.clone(), args, target: q });
                q
            }
        }
    }

    fn finish(mut self, a: &Atom) -> TreeAutomaton {
        let args: Vec<usize> = a.args.iter().map(|t| self.state_of(t)).collect();
        let top = self.fresh();
        self.ta.rules.push(TaRule { op: a.pred.clone(), args, target: top });
        self.ta.finals.insert(top);
        self.ta
    }
}

/// `tatoms`: the automaton accepting exactly the ground instances of a
/// linear atom over the signature.
pub fn from_linear_atom(a: &Atom, sig: &Signature) -> Result<TreeAutomaton, TaError> {
    if !atom_term(a).is_linear() {
        return Err(TaError::NonLinearAtom(a.to_string()));
    }
    Ok(AtomAutomatonBuilder::new(sig).finish(a))
}

/// An atom with disequality constraints `(A: x_1 ≠ t_1, …, x_n ≠ t_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adc {
    pub atom: Atom,
    pub constraints: Vec<(String, Term)>,
}

/// An implicit generalization `A/{B_1,…,B_n}`: the ground instances of
/// `A` that are instances of no `B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ig {
    pub atom: Atom,
    pub blocked: Vec<Atom>,
}

/// An atom with membership constraint `A: x ∈ S`.
#[derive(Debug, Clone)]
pub struct Amc {
    pub atom: Atom,
    pub var: String,
    pub lang: TreeAutomaton,
}

/// ADC → IG: block each `A{x_i ↦ t_i}`. Generated ground-atom sets
/// coincide.
pub fn adc_to_ig(d: &Adc) -> Result<Ig, TaError> {
    let a_term = atom_term(&d.atom);
    if !a_term.is_linear() {
        return Err(TaError::NonLinearAtom(d.atom.to_string()));
    }
    let a_vars = d.atom.vars();
    let mut seen = BTreeSet::new();
    for (x, t) in &d.constraints {
        if !a_vars.contains(x) {
            return Err(TaError::MissingVariable(x.clone()));
        }
        if !seen.insert(x.clone()) {
            return Err(TaError::InvalidAdc(format!("variable `{x}` constrained twice")));
        }
        if !t.is_linear() {
            return Err(TaError::InvalidAdc(format!("non-linear term `{t}`")));
        }
        for (y, _) in &d.constraints {
            if t.contains_var(y) {
                return Err(TaError::InvalidAdc(format!(
                    "constrained variable `{y}` occurs in `{t}`"
                )));
            }
        }
        if t.vars().iter().any(|v| a_vars.contains(v)) {
            return Err(TaError::InvalidAdc(format!("`{t}` shares variables with the atom")));
        }
    }
    let blocked = d
        .constraints
        .iter()
        .map(|(x, t)| {
            let mut s = crate::kernel::Subst::new();
            s.bind(x, t);
            s.apply_atom(&d.atom)
        })
        .collect();
    Ok(Ig { atom: d.atom.clone(), blocked })
}

/// IG → automaton: `tatoms(A) ∩ ¬tatoms(B_1) ∩ … ∩ ¬tatoms(B_n)`.
pub fn ig_to_ta(g: &Ig, sig: &Signature) -> Result<TreeAutomaton, TaError> {
    let mut acc = from_linear_atom(&g.atom, sig)?;
    for b in &g.blocked {
        acc = acc.intersect(&from_linear_atom(b, sig)?.complement())?;
    }
    Ok(acc)
}

/// AMC → automaton: build `tatoms(A)` with a dedicated state at `x`'s
/// position, then wire the constraint automaton's accepting states into
/// that position.
pub fn amc_to_ta(m: &Amc, sig: &Signature) -> Result<TreeAutomaton, TaError> {
    if !atom_term(&m.atom).is_linear() {
        return Err(TaError::NonLinearAtom(m.atom.to_string()));
    }
    if !m.atom.vars().contains(&m.var) {
        return Err(TaError::MissingVariable(m.var.clone()));
    }
    let mut b = AtomAutomatonBuilder::new(sig);
    let x_state = b.fresh();
    b.var_state = Some((m.var.clone(), x_state));
    let mut host = b.finish(&m.atom);
    for (op, &arity) in &m.lang.ops {
        match host.ops.get(op) {
            Some(&a) if a == arity => {}
            Some(_) => return Err(TaError::AlphabetMismatch(op.clone())),
            None => return Err(TaError::UnknownOperator(op.clone())),
        }
    }
    let off = host.states.len();
    for q in &m.lang.states {
        host.add_state(format!("s:{q}"));
    }
    host.rules.extend(m.lang.rules.iter().map(|r| TaRule {
        op: r.op.clone(),
        args: r.args.iter().map(|&q| q + off).collect(),
        target: r.target + off,
    }));
    // every host rule reading x's state also reads the accepting states
    // of the constraint automaton
    let mut extra = Vec::new();
    for r in &host.rules {
        if r.args.contains(&x_state) {
            for &f in &m.lang.finals {
                let args = r
                    .args
                    .iter()
                    .map(|&q| if q == x_state { f + off } else { q })
                    .collect();
                extra.push(TaRule { op: r.op.clone(), args, target: r.target });
            }
        }
    }
    // x's dedicated state itself stays unreachable
    host.rules.extend(extra);
    Ok(host)
}

fn state_pred(ta: &TreeAutomaton, q: usize) -> String {
    let name = &ta.states[q];
    let plain = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain {
        name.clone()
    } else {
        format!("s{q}")
    }
}

/// Emits the MSLH clause set whose minimal Herbrand model interprets one
/// monadic predicate per state as that state's language. Operators that
/// stem from predicates are renamed `f_<op>`, turning them into function
/// symbols of the clause set.
pub fn ta_to_mslh(ta: &TreeAutomaton) -> Vec<Clause> {
    let op_name = |op: &str| {
        if ta.pred_ops.contains(op) {
            format!("f_{op}")
        } else {
            op.to_string()
        }
    };
    ta.rules
        .iter()
        .map(|r| {
            let vars: Vec<Term> = (0..r.args.len()).map(|i| Term::var(&format!("X{i}"))).collect();
            Clause {
                antecedent: r
                    .args
                    .iter()
                    .zip(&vars)
                    .map(|(&q, x)| Atom::new(&state_pred(ta, q), vec![x.clone()]))
                    .collect(),
                succedent: vec![Atom::new(
                    &state_pred(ta, r.target),
                    vec![Term::App(op_name(&r.op), vars)],
                )],
            }
        })
        .collect()
}
