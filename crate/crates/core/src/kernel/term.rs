//! First-order terms, atoms, literals and Horn clauses.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

/// A first-order signature: function and predicate symbols with arities.
///
/// Symbols carry a total precedence given by declaration order; the
/// precedence drives the Knuth-Bendix ordering used during saturation.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    functions: IndexMap<String, usize>,
    predicates: IndexMap<String, usize>,
    /// Declaration order over all symbols (functions and predicates mixed).
    precedence: IndexMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    NameClash(String),
    ArityMismatch { symbol: String, declared: usize, used: usize },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::NameClash(s) => {
                write!(f, "symbol `{s}` declared both as function and predicate")
            }
            SignatureError::ArityMismatch { symbol, declared, used } => {
                write!(f, "symbol `{symbol}` declared with arity {declared}, used with {used}")
            }
        }
    }
}

impl std::error::Error for SignatureError {}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if self.predicates.contains_key(name) {
            return Err(SignatureError::NameClash(name.to_string()));
        }
        match self.functions.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityMismatch {
                symbol: name.to_string(),
                declared: a,
                used: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.functions.insert(name.to_string(), arity);
                let next = self.precedence.len();
                self.precedence.insert(name.to_string(), next);
                Ok(())
            }
        }
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if self.functions.contains_key(name) {
            return Err(SignatureError::NameClash(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityMismatch {
                symbol: name.to_string(),
                declared: a,
                used: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_string(), arity);
                let next = self.precedence.len();
                self.precedence.insert(name.to_string(), next);
                Ok(())
            }
        }
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.functions.contains_key(name) || self.predicates.contains_key(name)
    }

    /// Precedence index of a symbol; later declarations are greater.
    pub fn precedence(&self, name: &str) -> Option<usize> {
        self.precedence.get(name).copied()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.functions
            .iter()
            .filter(|(_, &a)| a == 0)
            .map(|(n, _)| n.as_str())
    }

    /// The monadic predicates of the signature (arity one).
    pub fn monadic_predicates(&self) -> Vec<String> {
        self.predicates
            .iter()
            .filter(|(_, &a)| a == 1)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Returns a symbol name based on `base` that does not collide with
    /// any declared symbol: `base` itself if free, otherwise `base`, `base0`,
    /// `base1`, ... suffixed.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.has_symbol(base) {
            return base.to_string();
        }
        for i in 0.. {
            let cand = format!("{base}{i}");
            if !self.has_symbol(&cand) {
                return cand;
            }
        }
        unreachable!()
    }
}

/// A first-order term: a variable or a function application.
/// Constants are applications with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), vec![])
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Shallow: a constant, a variable, or `f(x1, ..., xn)` with all
    /// arguments variables.
    pub fn is_shallow(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_var),
        }
    }

    /// Linear: no variable occurs twice.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.collect_var_occurrences(&mut |v| seen.insert(v.to_string()))
    }

    fn collect_var_occurrences(&self, fresh: &mut impl FnMut(&str) -> bool) -> bool {
        match self {
            Term::Var(v) => fresh(v),
            Term::App(_, args) => args.iter().all(|a| a.collect_var_occurrences(fresh)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Number of occurrences of the variable `name`.
    pub fn var_count(&self, name: &str) -> usize {
        match self {
            Term::Var(v) => usize::from(v == name),
            Term::App(_, args) => args.iter().map(|a| a.var_count(name)).sum(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom { pred: pred.to_string(), args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn is_monadic(&self) -> bool {
        self.args.len() == 1
    }

    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.args
            .iter()
            .all(|t| t.collect_var_occurrences(&mut |v| seen.insert(v.to_string())))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.args {
            a.collect_vars(&mut out);
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.pred)
        } else {
            write!(f, "{}(", self.pred)?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

/// An atom with polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { atom, positive: false }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~{}", self.atom)
        }
    }
}

/// A clause `antecedent => succedent`: the antecedent atoms are the
/// negative literals, the succedent atoms the positive ones. Both sides
/// are multisets, represented as vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub antecedent: Vec<Atom>,
    pub succedent: Vec<Atom>,
}

/// Shape flags of a clause, see [`Clause::shape_checks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeChecks {
    pub is_horn: bool,
    pub is_mslh: bool,
    pub is_ground: bool,
    pub vars: BTreeSet<String>,
}

impl Clause {
    pub fn new(antecedent: Vec<Atom>, succedent: Vec<Atom>) -> Clause {
        Clause { antecedent, succedent }
    }

    pub fn empty() -> Clause {
        Clause { antecedent: vec![], succedent: vec![] }
    }

    pub fn fact(atom: Atom) -> Clause {
        Clause { antecedent: vec![], succedent: vec![atom] }
    }

    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Clause {
        let mut c = Clause::empty();
        for l in lits {
            if l.positive {
                c.succedent.push(l.atom);
            } else {
                c.antecedent.push(l.atom);
            }
        }
        c
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.succedent
            .iter()
            .map(|a| Literal::pos(a.clone()))
            .chain(self.antecedent.iter().map(|a| Literal::neg(a.clone())))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.succedent.iter().chain(self.antecedent.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.antecedent.is_empty() && self.succedent.is_empty()
    }

    pub fn is_horn(&self) -> bool {
        self.succedent.len() <= 1
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(Atom::is_ground)
    }

    /// MSLH: Horn, all predicates monadic, and the argument of any
    /// succedent atom shallow and linear.
    pub fn is_mslh(&self) -> bool {
        self.is_horn()
            && self.atoms().all(Atom::is_monadic)
            && self
                .succedent
                .iter()
                .all(|a| a.args[0].is_shallow() && a.args[0].is_linear())
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            for t in &a.args {
                t.collect_vars(&mut out);
            }
        }
        out
    }

    pub fn shape_checks(&self) -> ShapeChecks {
        ShapeChecks {
            is_horn: self.is_horn(),
            is_mslh: self.is_mslh(),
            is_ground: self.is_ground(),
            vars: self.vars(),
        }
    }

    /// A tautology contains the same atom in antecedent and succedent.
    pub fn is_tautology(&self) -> bool {
        self.succedent.iter().any(|a| self.antecedent.contains(a))
    }

    /// Symbol-count weight used for clause selection in the saturation loop.
    pub fn weight(&self) -> usize {
        self.atoms().map(Atom::size).sum()
    }

    /// Removes duplicate literal copies (per polarity).
    pub fn dedup_literals(&self) -> Clause {
        let mut ante: Vec<Atom> = Vec::new();
        for a in &self.antecedent {
            if !ante.contains(a) {
                ante.push(a.clone());
            }
        }
        let mut succ: Vec<Atom> = Vec::new();
        for a in &self.succedent {
            if !succ.contains(a) {
                succ.push(a.clone());
            }
        }
        Clause { antecedent: ante, succedent: succ }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "false");
        }
        let mut first = true;
        for a in &self.succedent {
            if !first {
                write!(f, " | ")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        for a in &self.antecedent {
            if !first {
                write!(f, " | ")?;
            }
            write!(f, "~{a}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn shallow_and_linear() {
        let t = Term::app("f", vec![v("X"), v("Y")]);
        assert!(t.is_shallow());
        assert!(t.is_linear());
        let t = Term::app("f", vec![v("X"), v("X")]);
        assert!(t.is_shallow());
        assert!(!t.is_linear());
        let t = Term::app("f", vec![Term::app("g", vec![v("X")]), v("Y")]);
        assert!(!t.is_shallow());
        assert!(t.is_linear());
        assert!(Term::constant("a").is_shallow());
        assert!(v("X").is_shallow());
        // f(a,X) is not shallow: the constant argument is not a variable
        assert!(!Term::app("f", vec![Term::constant("a"), v("X")]).is_shallow());
    }

    #[test]
    fn mslh_shape() {
        // T(f(X,Y)) as unit succedent is MSLH
        let c = Clause::fact(Atom::new("t", vec![Term::app("f", vec![v("X"), v("Y")])]));
        assert!(c.shape_checks().is_mslh);
        // P(X),P(Y) => S(f(X,X)): succedent non-linear
        let c = Clause::new(
            vec![Atom::new("p", vec![v("X")]), Atom::new("p", vec![v("Y")])],
            vec![Atom::new("s", vec![Term::app("f", vec![v("X"), v("X")])])],
        );
        assert!(!c.shape_checks().is_mslh);
        // two positive literals: not Horn
        let c = Clause::new(
            vec![],
            vec![Atom::new("p", vec![v("X")]), Atom::new("q", vec![v("X")])],
        );
        let s = c.shape_checks();
        assert!(!s.is_horn);
        assert!(!s.is_mslh);
        // binary predicate: not monadic
        let c = Clause::fact(Atom::new("r", vec![v("X"), v("X")]));
        assert!(!c.is_mslh());
    }

    #[test]
    fn shape_vars_and_ground() {
        let c = Clause::new(
            vec![Atom::new("p", vec![Term::app("g", vec![v("X")])])],
            vec![Atom::new("q", vec![v("Y")])],
        );
        let s = c.shape_checks();
        assert!(!s.is_ground);
        assert_eq!(
            s.vars,
            ["X", "Y"].iter().map(|s| s.to_string()).collect::<BTreeSet<_>>()
        );
        let c = Clause::fact(Atom::new("p", vec![Term::constant("a")]));
        assert!(c.shape_checks().is_ground);
    }

    #[test]
    fn signature_declarations() {
        let mut sig = Signature::new();
        sig.declare_function("f", 2).unwrap();
        sig.declare_predicate("p", 1).unwrap();
        assert!(sig.declare_function("p", 1).is_err());
        assert!(sig.declare_function("f", 3).is_err());
        assert_eq!(sig.precedence("f"), Some(0));
        assert_eq!(sig.precedence("p"), Some(1));
        assert_eq!(sig.fresh_name("f"), "f0");
        assert_eq!(sig.fresh_name("g"), "g");
    }
}
