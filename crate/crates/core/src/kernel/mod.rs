//! First-order syntax, substitutions, unification, shape checks and the
//! KBO-based atom ordering.

pub mod kbo;
pub mod subst;
pub mod term;
pub mod unify;

pub use kbo::{kbo_compare, kbo_compare_terms, KboOrdering};
pub use subst::Subst;
pub use term::{Atom, Clause, Literal, ShapeChecks, Signature, SignatureError, Term};
pub use unify::{match_atoms, match_atoms_extend, match_terms, unify_atoms, unify_terms};

use std::collections::BTreeMap;

/// Renames all variables of a clause to fresh `V<n>` names drawn from a
/// counter. Clauses are kept variable-disjoint by renaming eagerly before
/// inferences.
pub fn rename_clause_apart(c: &Clause, counter: &mut u64) -> Clause {
    fn go(t: &Term, map: &mut BTreeMap<String, Term>, counter: &mut u64) -> Term {
        match t {
            Term::Var(v) => map
                .entry(v.clone())
                .or_insert_with(|| {
                    let fresh = Term::Var(format!("V{counter}"));
                    *counter += 1;
                    fresh
                })
                .clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| go(a, map, counter)).collect())
            }
        }
    }
    fn atoms(src: &[Atom], map: &mut BTreeMap<String, Term>, counter: &mut u64) -> Vec<Atom> {
        src.iter()
            .map(|a| Atom {
                pred: a.pred.clone(),
                args: a.args.iter().map(|t| go(t, map, counter)).collect(),
            })
            .collect()
    }
    let mut map: BTreeMap<String, Term> = BTreeMap::new();
    let antecedent = atoms(&c.antecedent, &mut map, counter);
    let succedent = atoms(&c.succedent, &mut map, counter);
    Clause { antecedent, succedent }
}

/// Clause subsumption: `c` subsumes `d` if some substitution maps the
/// literals of `c` injectively onto literals of `d` of the same polarity.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.antecedent.len() > d.antecedent.len() || c.succedent.len() > d.succedent.len() {
        return false;
    }
    fn place(
        pats: &[Atom],
        targets: &[Atom],
        used: &mut Vec<bool>,
        subst: &Subst,
        rest: &dyn Fn(&Subst) -> bool,
    ) -> bool {
        match pats.split_first() {
            None => rest(subst),
            Some((p, tail)) => {
                for (i, t) in targets.iter().enumerate() {
                    if used[i] {
                        continue;
                    }
                    let mut s = subst.clone();
                    if match_atoms_extend(p, t, &mut s) {
                        used[i] = true;
                        if place(tail, targets, used, &s, rest) {
                            used[i] = false;
                            return true;
                        }
                        used[i] = false;
                    }
                }
                false
            }
        }
    }
    let mut used_succ = vec![false; d.succedent.len()];
    place(&c.succedent, &d.succedent, &mut used_succ, &Subst::new(), &|s| {
        let mut used_ante = vec![false; d.antecedent.len()];
        place(&c.antecedent, &d.antecedent, &mut used_ante, s, &|_| true)
    })
}

/// Condensation: repeatedly drops a literal whenever the clause subsumes
/// the result of dropping it. The condensation is equivalent to the
/// clause and subsumes it.
pub fn condense(c: &Clause) -> Clause {
    let mut cur = c.clone();
    'outer: loop {
        for i in 0..cur.succedent.len() {
            let mut cand = cur.clone();
            cand.succedent.remove(i);
            if subsumes(&cur, &cand) {
                cur = cand;
                continue 'outer;
            }
        }
        for i in 0..cur.antecedent.len() {
            let mut cand = cur.clone();
            cand.antecedent.remove(i);
            if subsumes(&cur, &cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Variant check: the clauses are equal up to a bijective variable
/// renaming and reordering of literals.
pub fn variant_eq(c: &Clause, d: &Clause) -> bool {
    if c.antecedent.len() != d.antecedent.len() || c.succedent.len() != d.succedent.len() {
        return false;
    }
    type Renaming = (BTreeMap<String, String>, BTreeMap<String, String>);

    fn match_term(p: &Term, t: &Term, ren: &mut Renaming) -> bool {
        match (p, t) {
            (Term::Var(x), Term::Var(y)) => {
                let fwd_ok = ren.0.entry(x.clone()).or_insert_with(|| y.clone()) == y;
                let bwd_ok = ren.1.entry(y.clone()).or_insert_with(|| x.clone()) == x;
                fwd_ok && bwd_ok
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(a, b)| match_term(a, b, ren))
            }
            _ => false,
        }
    }
    fn match_atom(p: &Atom, t: &Atom, ren: &mut Renaming) -> bool {
        p.pred == t.pred
            && p.args.len() == t.args.len()
            && p.args.iter().zip(&t.args).all(|(a, b)| match_term(a, b, ren))
    }
    fn place(pats: &[Atom], targets: &[Atom], used: &mut Vec<bool>, ren: &Renaming, rest: &dyn Fn(&Renaming) -> bool) -> bool {
        match pats.split_first() {
            None => rest(ren),
            Some((p, tail)) => {
                for (i, t) in targets.iter().enumerate() {
                    if used[i] {
                        continue;
                    }
                    let mut r = ren.clone();
                    if match_atom(p, t, &mut r) {
                        used[i] = true;
                        if place(tail, targets, used, &r, rest) {
                            used[i] = false;
                            return true;
                        }
                        used[i] = false;
                    }
                }
                false
            }
        }
    }
    let start: Renaming = (BTreeMap::new(), BTreeMap::new());
    let mut used_succ = vec![false; d.succedent.len()];
    place(&c.succedent, &d.succedent, &mut used_succ, &start, &|r| {
        let mut used_ante = vec![false; d.antecedent.len()];
        place(&c.antecedent, &d.antecedent, &mut used_ante, r, &|_| true)
    })
}

/// Multiset equality of clause sets modulo variable renaming.
pub fn clause_set_variant_eq(a: &[Clause], b: &[Clause]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for c in a {
        for (i, d) in b.iter().enumerate() {
            if !used[i] && variant_eq(c, d) {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn subsumption_basics() {
        // P(x) subsumes P(a)
        let general = Clause::fact(Atom::new("p", vec![v("X")]));
        let specific = Clause::fact(Atom::new("p", vec![Term::constant("a")]));
        assert!(subsumes(&general, &specific));
        assert!(!subsumes(&specific, &general));
        // ~P(x) does not subsume P(x): polarity differs
        let neg = Clause::new(vec![Atom::new("p", vec![v("X")])], vec![]);
        assert!(!subsumes(&neg, &general));
        // unit fact subsumes a wider clause containing an instance
        let wide = Clause::new(
            vec![Atom::new("q", vec![v("Y")])],
            vec![Atom::new("p", vec![Term::constant("a")])],
        );
        assert!(subsumes(&general, &wide));
    }

    #[test]
    fn subsumption_locks_identity_bindings() {
        // r(f(X,Y)) | ~p(X) and r(f(X,Y)) | ~p(Y) differ: once X and Y
        // are matched identically through the succedent atom, the
        // antecedent atoms cannot be aligned
        let f = |a: &str, b: &str| Term::app("f", vec![v(a), v(b)]);
        let c = Clause::new(vec![Atom::new("p", vec![v("X")])], vec![Atom::new("r", vec![f("X", "Y")])]);
        let d = Clause::new(vec![Atom::new("p", vec![v("Y")])], vec![Atom::new("r", vec![f("X", "Y")])]);
        assert!(!subsumes(&c, &d));
        assert!(!subsumes(&d, &c));
        assert_eq!(condense(&d), d);
    }

    #[test]
    fn subsumption_merges_variables() {
        // ~P(x) | ~Q(y) subsumes ~P(z) | ~Q(z)
        let c = Clause::new(
            vec![Atom::new("p", vec![v("X")]), Atom::new("q", vec![v("Y")])],
            vec![],
        );
        let d = Clause::new(
            vec![Atom::new("p", vec![v("Z")]), Atom::new("q", vec![v("Z")])],
            vec![],
        );
        assert!(subsumes(&c, &d));
        assert!(!subsumes(&d, &c));
    }

    #[test]
    fn variant_equality() {
        let c = Clause::new(
            vec![Atom::new("r", vec![v("X"), v("Y")])],
            vec![Atom::new("r", vec![v("Y"), v("X")])],
        );
        let d = Clause::new(
            vec![Atom::new("r", vec![v("U"), v("W")])],
            vec![Atom::new("r", vec![v("W"), v("U")])],
        );
        assert!(variant_eq(&c, &d));
        let e = Clause::new(
            vec![Atom::new("r", vec![v("U"), v("W")])],
            vec![Atom::new("r", vec![v("U"), v("W")])],
        );
        assert!(!variant_eq(&c, &e));
        // renaming must be bijective: r(X,Y) is not a variant of r(Z,Z)
        let f1 = Clause::fact(Atom::new("r", vec![v("X"), v("Y")]));
        let f2 = Clause::fact(Atom::new("r", vec![v("Z"), v("Z")]));
        assert!(!variant_eq(&f1, &f2));
    }

    #[test]
    fn rename_apart_produces_disjoint_variants() {
        let c = Clause::new(
            vec![Atom::new("r", vec![v("X"), v("Y")])],
            vec![Atom::new("r", vec![v("Y"), v("X")])],
        );
        let mut counter = 0;
        let c1 = rename_clause_apart(&c, &mut counter);
        let c2 = rename_clause_apart(&c, &mut counter);
        assert!(variant_eq(&c, &c1));
        assert!(variant_eq(&c1, &c2));
        assert!(c1.vars().is_disjoint(&c2.vars()));
    }
}
