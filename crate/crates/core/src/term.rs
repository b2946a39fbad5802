//! First-order terms over a signature, positions and subterm access.
//!
//! A [`Term`] is either a variable or the application of a function symbol to
//! exactly as many arguments as the symbol's arity. Arity is checked once, when
//! an application is built through a [`Signature`]; every operation in this
//! crate preserves it afterwards.
//!
//! Positions are paths of 1-based child indices. The root is the empty path,
//! printed as `e`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Errors raised while building terms or navigating positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadSymbolName(String),
    #[error("`{0}` is not a valid variable name")]
    BadVariableName(String),
    #[error("position {position} is not valid: no subterm at prefix {prefix}")]
    InvalidPosition {
        position: Position,
        prefix: Position,
    },
    #[error("position indices start at 1")]
    ZeroIndex,
}

fn is_ident_tail(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// True for names in the variable lexical class: an uppercase letter or `?`
/// followed by identifier characters.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => chars.all(is_ident_tail),
        Some('?') => {
            let rest = chars.as_str();
            !rest.is_empty() && rest.chars().all(is_ident_tail)
        }
        _ => false,
    }
}

/// True for names in the symbol lexical class: a lowercase letter followed by
/// identifier characters.
pub fn is_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(is_ident_tail)
}

/// A variable name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Result<Var, TermError> {
        if is_variable_name(name) {
            Ok(Var(Arc::from(name)))
        } else {
            Err(TermError::BadVariableName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A function-symbol name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Symbol, TermError> {
        if is_symbol_name(name) {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(TermError::BadSymbolName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Function symbols with their arities. Iteration is lexical by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Symbol, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Builds a signature from `(name, arity)` pairs, rejecting duplicates.
    pub fn from_decls<'a, I>(decls: I) -> Result<Signature, TermError>
    where
        I: IntoIterator<Item = (&'a str, usize)>,
    {
        let mut sig = Signature::new();
        for (name, arity) in decls {
            sig.declare(name, arity)?;
        }
        Ok(sig)
    }

    pub fn declare(&mut self, name: &str, arity: usize) -> Result<Symbol, TermError> {
        let symbol = Symbol::new(name)?;
        if self.arities.contains_key(&symbol) {
            return Err(TermError::DuplicateSymbol(name.to_string()));
        }
        self.arities.insert(symbol.clone(), arity);
        Ok(symbol)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.lookup(name).map(|(_, arity)| arity)
    }

    fn lookup(&self, name: &str) -> Option<(&Symbol, usize)> {
        // Symbol orders by its name, so a probe key finds the entry.
        let probe = Symbol(Arc::from(name));
        self.arities.get_key_value(&probe).map(|(s, a)| (s, *a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.arities.iter().map(|(s, a)| (s, *a))
    }

    /// Builds `name(args...)`, checking that the symbol is declared and that
    /// the argument count equals its arity.
    pub fn app(&self, name: &str, args: Vec<Term>) -> Result<Term, TermError> {
        let (symbol, arity) = self
            .lookup(name)
            .ok_or_else(|| TermError::UnknownSymbol(name.to_string()))?;
        if args.len() != arity {
            return Err(TermError::ArityMismatch {
                symbol: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Term::App(App {
            symbol: symbol.clone(),
            args,
        }))
    }

    /// Shorthand for a 0-ary application.
    pub fn constant(&self, name: &str) -> Result<Term, TermError> {
        self.app(name, Vec::new())
    }

    /// Checks every application node of `term` against this signature.
    pub fn check(&self, term: &Term) -> Result<(), TermError> {
        match term {
            Term::Var(_) => Ok(()),
            Term::App(app) => {
                let arity = self
                    .arity(app.symbol.name())
                    .ok_or_else(|| TermError::UnknownSymbol(app.symbol.name().to_string()))?;
                if arity != app.args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: app.symbol.name().to_string(),
                        expected: arity,
                        found: app.args.len(),
                    });
                }
                app.args.iter().try_for_each(|arg| self.check(arg))
            }
        }
    }
}

/// An application node. Only obtainable through [`Signature::app`] or from
/// operations on existing terms, so the argument count always matches the
/// symbol's arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct App {
    symbol: Symbol,
    args: Vec<Term>,
}

impl App {
    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(App),
}

impl From<Var> for Term {
    fn from(v: Var) -> Term {
        Term::Var(v)
    }
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    /// Rebuilds an application with the same head and new arguments. The
    /// argument count must be unchanged.
    pub(crate) fn with_args(symbol: &Symbol, args: Vec<Term>) -> Term {
        Term::App(App {
            symbol: symbol.clone(),
            args,
        })
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(_) => None,
        }
    }

    /// Head symbol of an application, `None` for variables.
    pub fn head(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(app) => Some(&app.symbol),
        }
    }

    /// Arguments of an application; empty for variables and constants.
    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(app) => &app.args,
        }
    }

    /// All positions of the term, in lexicographic order.
    pub fn positions(&self) -> PositionSet {
        let mut out = PositionSet::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut PositionSet) {
        out.insert(Position(path.clone()));
        for (i, arg) in self.args().iter().enumerate() {
            path.push(i + 1);
            arg.collect_positions(path, out);
            path.pop();
        }
    }

    pub fn is_valid_position(&self, p: &Position) -> bool {
        self.get(p).is_some()
    }

    /// The subterm at `p`, or `None` if `p` is not a position of the term.
    pub fn get(&self, p: &Position) -> Option<&Term> {
        p.0.iter()
            .try_fold(self, |t, &i| i.checked_sub(1).and_then(|k| t.args().get(k)))
    }

    /// The subterm at `p`; the error names the longest valid prefix of `p`.
    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        let mut current = self;
        for (depth, &i) in p.0.iter().enumerate() {
            match i.checked_sub(1).and_then(|k| current.args().get(k)) {
                Some(next) => current = next,
                None => {
                    return Err(TermError::InvalidPosition {
                        position: p.clone(),
                        prefix: Position(p.0[..depth].to_vec()),
                    })
                }
            }
        }
        Ok(current)
    }

    /// `self[p <- s]`: the term with the subterm at `p` replaced by `s`.
    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        self.subterm_at(p)?;
        Ok(self.replace_unchecked(&p.0, s))
    }

    fn replace_unchecked(&self, path: &[usize], s: Term) -> Term {
        match (path.split_first(), self) {
            (None, _) => s,
            (Some((&i, rest)), Term::App(app)) => {
                let mut args = app.args.clone();
                args[i - 1] = app.args[i - 1].replace_unchecked(rest, s);
                Term::with_args(&app.symbol, args)
            }
            (Some(_), Term::Var(_)) => unreachable!("path validated before replacement"),
        }
    }

    /// Variables occurring in the term, in lexical order.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(app) => app.args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(app) => app.args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Positions at which `s` occurs as a subterm.
    pub fn occurrences(&self, s: &Term) -> PositionSet {
        let mut out = PositionSet::new();
        let mut path = Vec::new();
        self.collect_occurrences(s, &mut path, &mut out);
        out
    }

    fn collect_occurrences(&self, s: &Term, path: &mut Vec<usize>, out: &mut PositionSet) {
        if self == s {
            out.insert(Position(path.clone()));
        }
        for (i, arg) in self.args().iter().enumerate() {
            path.push(i + 1);
            arg.collect_occurrences(s, path, out);
            path.pop();
        }
    }

    /// Number of nodes; equals the number of positions.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// Height of the tree; leaves have height 0.
    pub fn height(&self) -> usize {
        self.args()
            .iter()
            .map(|a| a.height() + 1)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(app) => {
                write!(f, "{}", app.symbol)?;
                if let Some((first, rest)) = app.args.split_first() {
                    write!(f, "({first}")?;
                    for arg in rest {
                        write!(f, ",{arg}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A path from the root of a term: 1-based child indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<usize>);

/// Positions in lexicographic order.
pub type PositionSet = BTreeSet<Position>;

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Result<Position, TermError> {
        if indices.contains(&0) {
            return Err(TermError::ZeroIndex);
        }
        Ok(Position(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i · self`
    pub fn prepend(&self, i: usize) -> Position {
        assert!(i >= 1, "position indices start at 1");
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Position(v)
    }

    /// `self · i`
    pub fn child(&self, i: usize) -> Position {
        assert!(i >= 1, "position indices start at 1");
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// The position with its last index removed; `None` at the root.
    pub fn parent(&self) -> Option<Position> {
        self.0.split_last().map(|(_, init)| Position(init.to_vec()))
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.split_first() {
            None => f.write_str("e"),
            Some((first, rest)) => {
                write!(f, "{first}")?;
                rest.iter().try_for_each(|i| write!(f, ".{i}"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid position `{0}`: expected `e` or dot-separated indices >= 1")]
pub struct PositionParseError(pub String);

impl FromStr for Position {
    type Err = PositionParseError;

    fn from_str(s: &str) -> Result<Position, PositionParseError> {
        let s = s.trim();
        if s == "e" || s == "ε" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|part| match part.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(PositionParseError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

/// Renders a position set as space-separated positions, e.g. `e 1 2 2.1`.
pub fn render_positions(set: &PositionSet) -> String {
    set.iter()
        .map(Position::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::from_decls([("f", 2), ("g", 1), ("a", 0), ("b", 0)]).unwrap()
    }

    fn x() -> Term {
        Term::var(Var::new("X").unwrap())
    }

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    // f(X, g(a))
    fn sample() -> Term {
        let s = sig();
        let ga = s.app("g", vec![s.constant("a").unwrap()]).unwrap();
        s.app("f", vec![x(), ga]).unwrap()
    }

    #[test]
    fn positions_of_leaves_is_root_only() {
        let s = sig();
        assert_eq!(render_positions(&x().positions()), "e");
        assert_eq!(render_positions(&s.constant("a").unwrap().positions()), "e");
    }

    #[test]
    fn positions_of_nested_application() {
        assert_eq!(render_positions(&sample().positions()), "e 1 2 2.1");
    }

    #[test]
    fn validity_of_positions() {
        let s = sig();
        let fab = s
            .app(
                "f",
                vec![s.constant("a").unwrap(), s.constant("b").unwrap()],
            )
            .unwrap();
        assert!(x().is_valid_position(&Position::root()));
        assert!(!fab.is_valid_position(&pos("3")));
        assert!(sample().is_valid_position(&pos("2.1")));
    }

    #[test]
    fn subterm_descends_and_reports_prefix() {
        let t = sample();
        assert_eq!(t.subterm_at(&Position::root()).unwrap(), &t);
        assert_eq!(
            t.subterm_at(&pos("2.1")).unwrap(),
            &sig().constant("a").unwrap()
        );
        assert_eq!(
            t.subterm_at(&pos("1.1")),
            Err(TermError::InvalidPosition {
                position: pos("1.1"),
                prefix: pos("1"),
            })
        );
    }

    #[test]
    fn replacement() {
        let s = sig();
        let t = sample();
        let b = s.constant("b").unwrap();
        assert_eq!(t.replace_at(&Position::root(), b.clone()).unwrap(), b);
        assert_eq!(
            t.replace_at(&pos("2.1"), b).unwrap().to_string(),
            "f(X,g(b))"
        );
        let y = Term::var(Var::new("Y").unwrap());
        let fxy = s.app("f", vec![x(), y]).unwrap();
        let ga = s.app("g", vec![s.constant("a").unwrap()]).unwrap();
        assert_eq!(
            fxy.replace_at(&pos("2"), ga).unwrap().to_string(),
            "f(X,g(a))"
        );
        assert!(t.replace_at(&pos("3"), x()).is_err());
    }

    #[test]
    fn variables_collapse_duplicates() {
        let s = sig();
        assert!(s.constant("a").unwrap().vars().is_empty());
        let y = Term::var(Var::new("Y").unwrap());
        let gx = s.app("g", vec![x()]).unwrap();
        let inner = s.app("f", vec![gx, y]).unwrap();
        let t = s.app("f", vec![x(), inner]).unwrap();
        let names: Vec<_> = t.vars().iter().map(|v| v.name().to_string()).collect();
        assert_eq!(names, ["X", "Y"]);
    }

    #[test]
    fn occurrences_scan_all_positions() {
        let s = sig();
        let gx = s.app("g", vec![x()]).unwrap();
        let t = s.app("f", vec![x(), gx]).unwrap();
        assert_eq!(render_positions(&t.occurrences(&x())), "1 2.1");
        assert!(t.occurrences(&t).contains(&Position::root()));
        let fab = s
            .app(
                "f",
                vec![s.constant("a").unwrap(), s.constant("b").unwrap()],
            )
            .unwrap();
        assert!(fab.occurrences(&x()).is_empty());
    }

    #[test]
    fn concatenation_identities() {
        let q = pos("1.2");
        assert_eq!(Position::root().concat(&q), q);
        assert_eq!(q.concat(&Position::root()), q);
        assert_eq!(q.concat(&pos("1")), pos("1.2.1"));
    }

    #[test]
    fn size_counts_nodes() {
        assert_eq!(x().size(), 1);
        assert_eq!(sig().constant("a").unwrap().size(), 1);
        assert_eq!(sample().size(), 4);
    }

    #[test]
    fn construction_checks_arity_and_declaration() {
        let s = sig();
        assert_eq!(
            s.app("f", vec![x()]),
            Err(TermError::ArityMismatch {
                symbol: "f".into(),
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            s.app("h", vec![]),
            Err(TermError::UnknownSymbol("h".into()))
        );
        let mut s2 = Signature::new();
        s2.declare("f", 2).unwrap();
        assert_eq!(
            s2.declare("f", 1),
            Err(TermError::DuplicateSymbol("f".into()))
        );
    }

    #[test]
    fn name_classes() {
        assert!(is_variable_name("X"));
        assert!(is_variable_name("?x1"));
        assert!(!is_variable_name("?"));
        assert!(!is_variable_name("x"));
        assert!(is_symbol_name("foo_bar"));
        assert!(!is_symbol_name("Foo"));
        assert!(Var::new("x").is_err());
        assert!(Symbol::new("X").is_err());
    }

    #[test]
    fn position_text_form() {
        assert_eq!(Position::root().to_string(), "e");
        assert_eq!(pos("2.1").indices(), &[2, 1]);
        assert!("0".parse::<Position>().is_err());
        assert!("1..2".parse::<Position>().is_err());
        assert_eq!(Position::new(vec![0]), Err(TermError::ZeroIndex));
    }
}
