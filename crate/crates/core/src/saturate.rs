//! Ordered resolution with selection, specialised as a terminating
//! decision procedure for MSLH clause sets.
//!
//! The calculus resolves a strictly maximal succedent atom of a clause
//! with nothing selected against a selected (or maximal) antecedent atom.
//! The selection strategy prefers antecedent atoms with a non-variable
//! argument; paired with subsumption and condensation this keeps
//! saturation of MSLH sets finite.

use std::fmt;

use crate::kernel::{
    condense, kbo_compare, rename_clause_apart, subsumes, unify_atoms, Atom, Clause, KboOrdering,
    Signature, Subst, Term,
};

/// Resource limits for the given-clause loop. Overridable through the
/// CLI via `MSLH_LIMITS=<max_clauses>,<max_iterations>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_clauses: usize,
    pub max_iterations: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_clauses: 50_000, max_iterations: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Input,
    Resolution,
    Factoring,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Input => write!(f, "input"),
            Rule::Resolution => write!(f, "resolution"),
            Rule::Factoring => write!(f, "factoring"),
        }
    }
}

/// One node of the derivation: a kept clause together with how it was
/// obtained.
#[derive(Debug, Clone)]
pub struct InferenceRecord {
    pub id: usize,
    pub clause: Clause,
    pub rule: Rule,
    pub parents: Vec<usize>,
    pub subst: Subst,
}

impl fmt::Display for InferenceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} [{}", self.id, self.clause, self.rule)?;
        for p in &self.parents {
            write!(f, ", {p}")?;
        }
        if !self.subst.is_empty() {
            write!(f, ", {}", self.subst)?;
        }
        write!(f, "]")
    }
}

/// A refutation: the ancestor records of the empty clause in derivation
/// order, ending in the empty clause.
#[derive(Debug, Clone)]
pub struct Proof {
    pub records: Vec<InferenceRecord>,
}

impl Proof {
    pub fn empty_clause(&self) -> &InferenceRecord {
        self.records.last().expect("a proof ends in the empty clause")
    }

    /// Line-oriented trace, one `id. <clause> [rule, parents, subst]`
    /// line per record.
    pub fn to_trace(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// conclusions produced by inference rules (before simplification)
    pub generated: usize,
    /// clauses kept after forward simplification, inputs included
    pub kept: usize,
    pub forward_subsumed: usize,
    pub backward_subsumed: usize,
    pub tautologies_deleted: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub enum SaturationResult {
    Refutation(Proof),
    Saturated(Vec<Clause>, Stats),
    ResourceOut(Stats),
}

/// The selection strategy: returns the index of the selected antecedent
/// atom, if any. Preference order:
/// 1. the first antecedent atom with a non-variable argument,
/// 2. the first whose argument is a variable absent from the succedent
///    (every antecedent atom of a succedent-free clause qualifies),
/// 3. the first atom of a clause `P_1(x),…,P_n(x) ⟹ S(x)`.
///
/// Preferring non-variable arguments is what stops resolvents from
/// growing ever deeper terms; scanning a single literal order over all
/// three conditions instead does not terminate.
pub fn select(c: &Clause) -> Option<usize> {
    if let Some(i) = c
        .antecedent
        .iter()
        .position(|a| a.args.iter().any(|t| !t.is_var()))
    {
        return Some(i);
    }
    // all antecedent arguments are variables from here on
    let succ_vars: std::collections::BTreeSet<String> =
        c.succedent.iter().flat_map(Atom::vars).collect();
    if let Some(i) = c
        .antecedent
        .iter()
        .position(|a| a.args.iter().any(|t| match t {
            Term::Var(v) => !succ_vars.contains(v),
            _ => false,
        }))
    {
        return Some(i);
    }
    if c.antecedent.is_empty() || c.succedent.len() != 1 {
        return None;
    }
    let Some(Term::Var(x)) = c.succedent[0].args.first() else { return None };
    let same_var = |a: &Atom| a.args.len() == 1 && a.args[0] == Term::var(x);
    if c.succedent[0].args.len() == 1 && c.antecedent.iter().all(same_var) {
        return Some(0);
    }
    None
}

/// Literal ordering lifted from the atom ordering: for atoms `A ≺ B`,
/// `A ≺ ¬A ≺ B`.
fn lit_cmp(sig: &Signature, a: &Atom, a_neg: bool, b: &Atom, b_neg: bool) -> KboOrdering {
    match kbo_compare(sig, a, b) {
        KboOrdering::Equal => {
            if a_neg == b_neg {
                KboOrdering::Equal
            } else if a_neg {
                KboOrdering::Greater
            } else {
                KboOrdering::Less
            }
        }
        ord => ord,
    }
}

/// Whether literal `(atom, negative)` at the given side/index is
/// (strictly) maximal in the clause. `Incomparable` counts as possibly
/// maximal.
fn is_maximal(
    sig: &Signature,
    c: &Clause,
    negative: bool,
    idx: usize,
    strict: bool,
) -> bool {
    let atom = if negative { &c.antecedent[idx] } else { &c.succedent[idx] };
    let beats = |other: &Atom, other_neg: bool| -> bool {
        match lit_cmp(sig, atom, negative, other, other_neg) {
            KboOrdering::Less => false,
            KboOrdering::Equal => !strict,
            KboOrdering::Greater | KboOrdering::Incomparable => true,
        }
    };
    for (i, a) in c.succedent.iter().enumerate() {
        if !(negative || i != idx) {
            continue;
        }
        if !beats(a, false) {
            return false;
        }
    }
    for (i, a) in c.antecedent.iter().enumerate() {
        if negative && i == idx {
            continue;
        }
        if !beats(a, true) {
            return false;
        }
    }
    true
}

/// A single ordered resolution step on chosen atom occurrences. The
/// clauses must be variable-disjoint.
fn resolve_at(
    sig: &Signature,
    c1: &Clause,
    ai: usize,
    c2: &Clause,
    bi: usize,
) -> Option<(Clause, Subst)> {
    if select(c1).is_some() {
        return None;
    }
    match select(c2) {
        Some(s) if s != bi => return None,
        Some(_) => {}
        None => {}
    }
    let sigma = unify_atoms(&c1.succedent[ai], &c2.antecedent[bi])?;
    let c1s = sigma.apply_clause(c1);
    if !is_maximal(sig, &c1s, false, ai, true) {
        return None;
    }
    if select(c2).is_none() {
        let c2s = sigma.apply_clause(c2);
        if !is_maximal(sig, &c2s, true, bi, false) {
            return None;
        }
    }
    let mut antecedent = c1s.antecedent;
    let mut succedent: Vec<Atom> = c1s.succedent;
    succedent.remove(ai);
    for (i, a) in c2.antecedent.iter().enumerate() {
        if i != bi {
            antecedent.push(sigma.apply_atom(a));
        }
    }
    succedent.extend(c2.succedent.iter().map(|a| sigma.apply_atom(a)));
    Some((Clause { antecedent, succedent }, sigma))
}

/// Ordered resolution between a succedent atom of `c1` and an antecedent
/// atom of `c2`, trying occurrences left to right. The clauses must be
/// variable-disjoint.
pub fn ordered_resolve(sig: &Signature, c1: &Clause, c2: &Clause) -> Option<Clause> {
    for ai in 0..c1.succedent.len() {
        for bi in 0..c2.antecedent.len() {
            if let Some((r, _)) = resolve_at(sig, c1, ai, c2, bi) {
                return Some(r);
            }
        }
    }
    None
}

/// Ordered factoring on two succedent atoms. Horn clauses have at most
/// one, so this never fires in the MSLH pipeline.
pub fn ordered_factor(sig: &Signature, c: &Clause) -> Option<Clause> {
    if select(c).is_some() {
        return None;
    }
    for i in 0..c.succedent.len() {
        for j in 0..c.succedent.len() {
            if i == j {
                continue;
            }
            let Some(sigma) = unify_atoms(&c.succedent[i], &c.succedent[j]) else {
                continue;
            };
            let cs = sigma.apply_clause(c);
            if !is_maximal(sig, &cs, false, i, false) {
                continue;
            }
            let mut out = cs;
            out.succedent.remove(j);
            return Some(out);
        }
    }
    None
}

/// Proposition-1(a) shape: `P_1(x_1),…,P_n(x_n) ⟹ S(f(y_1,…,y_m))` with
/// monadic atoms, variable antecedent arguments, pairwise distinct
/// `y_j`, and `{x_i} ⊆ {y_j}`. These are the clauses that produce model
/// elements.
pub fn is_productive_shape(c: &Clause) -> bool {
    if c.succedent.len() != 1 || c.succedent[0].args.len() != 1 {
        return false;
    }
    let Term::App(_, args) = &c.succedent[0].args[0] else { return false };
    let mut ys = std::collections::BTreeSet::new();
    for a in args {
        let Term::Var(y) = a else { return false };
        if !ys.insert(y.clone()) {
            return false;
        }
    }
    c.antecedent.iter().all(|a| {
        a.args.len() == 1
            && match &a.args[0] {
                Term::Var(x) => ys.contains(x),
                _ => false,
            }
    })
}

struct State {
    records: Vec<InferenceRecord>,
    alive: Vec<bool>,
    active: Vec<usize>,
    passive: Vec<usize>,
    stats: Stats,
    var_counter: u64,
}

impl State {
    fn kept(&self) -> impl Iterator<Item = usize> + '_ {
        self.active
            .iter()
            .chain(self.passive.iter())
            .copied()
            .filter(|&i| self.alive[i])
    }

    /// Forward simplification and insertion; returns the id when kept.
    fn insert(&mut self, clause: Clause, rule: Rule, parents: Vec<usize>, subst: Subst) -> Option<usize> {
        let clause = condense(&clause.dedup_literals());
        if clause.is_tautology() {
            self.stats.tautologies_deleted += 1;
            return None;
        }
        let kept: Vec<usize> = self.kept().collect();
        if kept.iter().any(|&i| subsumes(&self.records[i].clause, &clause)) {
            self.stats.forward_subsumed += 1;
            return None;
        }
        for i in kept {
            if subsumes(&clause, &self.records[i].clause) {
                self.alive[i] = false;
                self.stats.backward_subsumed += 1;
            }
        }
        let id = self.records.len();
        self.records.push(InferenceRecord { id, clause, rule, parents, subst });
        self.alive.push(true);
        self.passive.push(id);
        self.stats.kept += 1;
        Some(id)
    }

    fn proof(&self, empty_id: usize) -> Proof {
        let mut needed = std::collections::BTreeSet::new();
        let mut stack = vec![empty_id];
        while let Some(i) = stack.pop() {
            if needed.insert(i) {
                stack.extend(&self.records[i].parents);
            }
        }
        Proof {
            records: needed.into_iter().map(|i| self.records[i].clone()).collect(),
        }
    }
}

/// Saturates the clause set by the given-clause loop with tautology
/// deletion, condensation, and forward/backward subsumption. Terminates
/// on MSLH inputs; arbitrary Horn inputs are accepted but may only stop
/// at the resource limits.
pub fn saturate(sig: &Signature, n: &[Clause], limits: Limits) -> SaturationResult {
    let mut st = State {
        records: Vec::new(),
        alive: Vec::new(),
        active: Vec::new(),
        passive: Vec::new(),
        stats: Stats::default(),
        var_counter: 0,
    };
    for c in n {
        if let Some(id) = st.insert(c.clone(), Rule::Input, vec![], Subst::new()) {
            if st.records[id].clause.is_empty() {
                return SaturationResult::Refutation(st.proof(id));
            }
        }
    }
    let mut picks: usize = 0;
    while let Some(pos) = pick(&st, picks) {
        if st.stats.iterations >= limits.max_iterations || st.records.len() >= limits.max_clauses {
            return SaturationResult::ResourceOut(st.stats);
        }
        st.stats.iterations += 1;
        picks += 1;
        let given = st.passive.swap_remove(pos);
        if !st.alive[given] {
            continue;
        }
        st.active.push(given);
        let partners: Vec<usize> = st.active.iter().copied().filter(|&i| st.alive[i]).collect();
        let mut conclusions: Vec<(Clause, Vec<usize>, Subst, Rule)> = Vec::new();
        for &other in &partners {
            for (c1_id, c2_id) in [(given, other), (other, given)] {
                if c1_id == c2_id && given != other {
                    continue;
                }
                let c1 = st.records[c1_id].clause.clone();
                let c2 = rename_clause_apart(&st.records[c2_id].clause, &mut st.var_counter);
                for ai in 0..c1.succedent.len() {
                    for bi in 0..c2.antecedent.len() {
                        if let Some((r, sigma)) = resolve_at(sig, &c1, ai, &c2, bi) {
                            conclusions.push((r, vec![c1_id, c2_id], sigma, Rule::Resolution));
                        }
                    }
                }
                if c1_id == c2_id {
                    break;
                }
            }
        }
        if let Some(f) = ordered_factor(sig, &st.records[given].clause) {
            conclusions.push((f, vec![given], Subst::new(), Rule::Factoring));
        }
        for (clause, parents, sigma, rule) in conclusions {
            st.stats.generated += 1;
            if let Some(id) = st.insert(clause, rule, parents, sigma) {
                if st.records[id].clause.is_empty() {
                    return SaturationResult::Refutation(st.proof(id));
                }
            }
        }
    }
    let kept: Vec<Clause> = {
        let mut ids: Vec<usize> = st.kept().collect();
        ids.sort_unstable();
        ids.into_iter().map(|i| st.records[i].clause.clone()).collect()
    };
    SaturationResult::Saturated(kept, st.stats)
}

/// Clause choice: of every five picks, four take the lightest passive
/// clause and one the oldest, lightest-first. Ties go to the older
/// clause.
fn pick(st: &State, picks: usize) -> Option<usize> {
    let candidates = st.passive.iter().enumerate().filter(|&(_, &id)| st.alive[id]);
    if picks % 5 == 4 {
        candidates.min_by_key(|&(_, &id)| id).map(|(pos, _)| pos)
    } else {
        candidates
            .min_by_key(|&(_, &id)| (st.records[id].clause.weight(), id))
            .map(|(pos, _)| pos)
    }
}
