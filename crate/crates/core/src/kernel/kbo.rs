//! Knuth-Bendix ordering with uniform weight one and declaration-order
//! precedence, lifted to atoms by treating the predicate as top operator.

use super::term::{Atom, Signature, Term};

/// Outcome of a (possibly non-ground) KBO comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KboOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl KboOrdering {
    pub fn flip(self) -> KboOrdering {
        match self {
            KboOrdering::Less => KboOrdering::Greater,
            KboOrdering::Greater => KboOrdering::Less,
            other => other,
        }
    }
}

fn add_var_counts(t: &Term, sign: i64, counts: &mut std::collections::BTreeMap<String, i64>) {
    match t {
        Term::Var(v) => {
            *counts.entry(v.clone()).or_insert(0) += sign;
        }
        Term::App(_, args) => {
            for a in args {
                add_var_counts(a, sign, counts);
            }
        }
    }
}

/// Variable condition for `s > t`: every variable occurs at least as
/// often in `s` as in `t`.
fn var_condition(s: &Term, t: &Term) -> bool {
    let mut counts = std::collections::BTreeMap::new();
    add_var_counts(s, 1, &mut counts);
    add_var_counts(t, -1, &mut counts);
    counts.values().all(|&c| c >= 0)
}

fn precedence(sig: &Signature, sym: &str) -> usize {
    // Symbols not declared (e.g. in artificial test terms) sort last by name
    // via the fallback in kbo_greater; declared symbols use declaration order.
    sig.precedence(sym).unwrap_or(usize::MAX)
}

/// Strict KBO comparison `s > t`. Since all weights are one, the weight of
/// a term is its symbol count, and the classic unary-function special case
/// cannot arise.
fn kbo_greater(sig: &Signature, s: &Term, t: &Term) -> bool {
    if s == t || !var_condition(s, t) {
        return false;
    }
    let (ws, wt) = (s.size(), t.size());
    if ws != wt {
        return ws > wt;
    }
    match (s, t) {
        (Term::App(f, fa), Term::App(g, ga)) => {
            let (pf, pg) = (precedence(sig, f), precedence(sig, g));
            if pf != pg {
                return pf > pg;
            }
            if f != g {
                // Undeclared symbols with identical fallback precedence:
                // disambiguate by name so ground comparison stays total.
                return f > g;
            }
            for (a, b) in fa.iter().zip(ga) {
                if a != b {
                    return kbo_greater(sig, a, b);
                }
            }
            false
        }
        _ => false,
    }
}

pub fn kbo_compare_terms(sig: &Signature, s: &Term, t: &Term) -> KboOrdering {
    if s == t {
        KboOrdering::Equal
    } else if kbo_greater(sig, s, t) {
        KboOrdering::Greater
    } else if kbo_greater(sig, t, s) {
        KboOrdering::Less
    } else {
        KboOrdering::Incomparable
    }
}

/// Compares two atoms by wrapping each in its predicate as a top operator.
pub fn kbo_compare(sig: &Signature, a: &Atom, b: &Atom) -> KboOrdering {
    let ta = Term::App(a.pred.clone(), a.args.clone());
    let tb = Term::App(b.pred.clone(), b.args.clone());
    kbo_compare_terms(sig, &ta, &tb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare_function("a", 0).unwrap();
        s.declare_function("f", 1).unwrap();
        s.declare_function("g", 1).unwrap();
        s.declare_predicate("p", 1).unwrap();
        s
    }

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn ground_weight_comparison() {
        // P(a) < P(f(a)): weights 2 vs 3
        let s = sig();
        let a = Atom::new("p", vec![Term::constant("a")]);
        let b = Atom::new("p", vec![Term::app("f", vec![Term::constant("a")])]);
        assert_eq!(kbo_compare(&s, &a, &b), KboOrdering::Less);
        assert_eq!(kbo_compare(&s, &b, &a), KboOrdering::Greater);
    }

    #[test]
    fn subterm_below_superterm() {
        // P(x) < P(f(x)) for all groundings
        let s = sig();
        let a = Atom::new("p", vec![v("X")]);
        let b = Atom::new("p", vec![Term::app("f", vec![v("X")])]);
        assert_eq!(kbo_compare(&s, &a, &b), KboOrdering::Less);
    }

    #[test]
    fn disjoint_variables_incomparable() {
        // P(f(x)) vs P(g(y)): equal weights, disjoint variables
        let s = sig();
        let a = Atom::new("p", vec![Term::app("f", vec![v("X")])]);
        let b = Atom::new("p", vec![Term::app("g", vec![v("Y")])]);
        assert_eq!(kbo_compare(&s, &a, &b), KboOrdering::Incomparable);
        // and indeed both ground-instance orders occur:
        // f(a) vs g(a): equal weight, precedence decides g > f
        let fa = Term::app("f", vec![Term::constant("a")]);
        let ga = Term::app("g", vec![Term::constant("a")]);
        assert_eq!(kbo_compare_terms(&s, &fa, &ga), KboOrdering::Less);
        // f(g(a)) vs g(a): weight decides
        let fga = Term::app("f", vec![ga.clone()]);
        assert_eq!(kbo_compare_terms(&s, &fga, &ga), KboOrdering::Greater);
    }

    #[test]
    fn equal_atoms() {
        let s = sig();
        let a = Atom::new("p", vec![Term::constant("a")]);
        assert_eq!(kbo_compare(&s, &a, &a), KboOrdering::Equal);
    }

    #[test]
    fn precedence_by_declaration_order() {
        let s = sig();
        // g declared after f, so g(a) > f(a) at equal weight
        let fa = Term::app("f", vec![Term::constant("a")]);
        let ga = Term::app("g", vec![Term::constant("a")]);
        assert_eq!(kbo_compare_terms(&s, &ga, &fa), KboOrdering::Greater);
    }
}
