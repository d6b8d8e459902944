//! Substitutions in idempotent triangular form.

use std::collections::BTreeMap;
use std::fmt;

use super::term::{Atom, Clause, Literal, Term};

/// A finite map from variables to terms, normalized so that no mapped
/// variable occurs in any image term. Application is a single pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst {
    map: BTreeMap<String, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    /// Extends the substitution with `var -> term`, keeping idempotency:
    /// the current substitution is applied to `term` first, then `var` is
    /// eliminated from all existing images. Returns false (leaving the
    /// substitution unchanged) if the binding would fail the occurs check.
    pub fn bind(&mut self, var: &str, term: &Term) -> bool {
        let t = self.apply_term(term);
        if let Term::Var(v) = &t {
            if v == var {
                return true; // x -> x is the identity
            }
        }
        if t.contains_var(var) {
            return false;
        }
        let single = Subst { map: BTreeMap::from([(var.to_string(), t.clone())]) };
        for image in self.map.values_mut() {
            *image = single.apply_term(image);
        }
        self.map.insert(var.to_string(), t);
        true
    }

    /// Extends a matching substitution with `var -> term`, verbatim.
    /// Unlike [`bind`](Subst::bind), identity bindings are recorded —
    /// matching must lock a variable once it has been matched — and
    /// existing images are left untouched (the map acts as a
    /// simultaneous substitution on the pattern). Returns false if the
    /// variable is already bound to a different term.
    pub fn bind_match(&mut self, var: &str, term: &Term) -> bool {
        match self.map.get(var) {
            Some(bound) => bound == term,
            None => {
                self.map.insert(var.to_string(), term.clone());
                true
            }
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Option<Subst> {
        let mut s = Subst::new();
        for (v, t) in pairs {
            if !s.bind(&v, &t) {
                return None;
            }
        }
        Some(s)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { atom: self.apply_atom(&l.atom), positive: l.positive }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause {
            antecedent: c.antecedent.iter().map(|a| self.apply_atom(a)).collect(),
            succedent: c.succedent.iter().map(|a| self.apply_atom(a)).collect(),
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}
