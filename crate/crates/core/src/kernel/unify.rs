//! Unification (with occurs check) and one-sided matching.

use super::subst::Subst;
use super::term::{Atom, Term};

/// Most general unifier of two terms, if one exists. The result is
/// idempotent; absence of a unifier is a value, not an error.
pub fn unify_terms(s: &Term, t: &Term) -> Option<Subst> {
    let mut subst = Subst::new();
    if unify_into(s, t, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn unify_into(s: &Term, t: &Term, subst: &mut Subst) -> bool {
    let s = subst.apply_term(s);
    let t = subst.apply_term(t);
    match (&s, &t) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => subst.bind(x, &t),
        (_, Term::Var(y)) => subst.bind(y, &s),
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(a, b)| unify_into(a, b, subst))
        }
    }
}

/// Most general unifier of two atoms.
pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Subst> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut subst = Subst::new();
    for (s, t) in a.args.iter().zip(&b.args) {
        if !unify_into(s, t, &mut subst) {
            return None;
        }
    }
    Some(subst)
}

/// Matching: a substitution sigma with `pattern * sigma == target`,
/// binding only pattern variables.
pub fn match_terms(pattern: &Term, target: &Term) -> Option<Subst> {
    let mut subst = Subst::new();
    if match_into(pattern, target, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn match_into(pattern: &Term, target: &Term, subst: &mut Subst) -> bool {
    match pattern {
        Term::Var(x) => subst.bind_match(x, target),
        Term::App(f, fa) => match target {
            Term::App(g, ga) if f == g && fa.len() == ga.len() => {
                fa.iter().zip(ga).all(|(p, t)| match_into(p, t, subst))
            }
            _ => false,
        },
    }
}

pub fn match_atoms(pattern: &Atom, target: &Atom) -> Option<Subst> {
    if pattern.pred != target.pred || pattern.args.len() != target.args.len() {
        return None;
    }
    let mut subst = Subst::new();
    for (p, t) in pattern.args.iter().zip(&target.args) {
        if !match_into(p, t, &mut subst) {
            return None;
        }
    }
    Some(subst)
}

/// Extends `subst` so that `pattern * subst == target`; used by clause
/// subsumption, where bindings accumulate across literals.
pub fn match_atoms_extend(pattern: &Atom, target: &Atom, subst: &mut Subst) -> bool {
    if pattern.pred != target.pred || pattern.args.len() != target.args.len() {
        return false;
    }
    pattern
        .args
        .iter()
        .zip(&target.args)
        .all(|(p, t)| match_into(p, t, subst))
}
