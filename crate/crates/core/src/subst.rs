//! Substitutions: finite maps from variables to terms.
//!
//! A [`Substitution`] never stores a binding `X -> X`, so its key set is
//! exactly its domain and two substitutions are equal as functions iff their
//! maps are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Position, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("binding {0} -> {0} is an identity binding")]
    IdentityBinding(Var),
    #[error("variable {0} bound twice")]
    DuplicateBinding(Var),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    /// `{x -> t}`; rejects `t = x`.
    pub fn singleton(x: Var, t: Term) -> Result<Substitution, SubstError> {
        if t.as_var() == Some(&x) {
            return Err(SubstError::IdentityBinding(x));
        }
        let mut bindings = BTreeMap::new();
        bindings.insert(x, t);
        Ok(Substitution { bindings })
    }

    /// Builds a substitution from explicit bindings. Identity bindings are
    /// dropped; a variable bound twice is an error.
    pub fn from_bindings<I>(bindings: I) -> Result<Substitution, SubstError>
    where
        I: IntoIterator<Item = (Var, Term)>,
    {
        let mut map = BTreeMap::new();
        for (x, t) in bindings {
            if map.contains_key(&x) {
                return Err(SubstError::DuplicateBinding(x));
            }
            map.insert(x, t);
        }
        Ok(Substitution::from_map(map))
    }

    pub(crate) fn from_map(mut map: BTreeMap<Var, Term>) -> Substitution {
        map.retain(|x, t| t.as_var() != Some(x));
        Substitution { bindings: map }
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Bindings in lexical order of the variable.
    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    /// The image of `x` if `x` is in the domain.
    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.bindings.get(x)
    }

    /// The image of `x` as a function: unbound variables map to themselves.
    pub fn image(&self, x: &Var) -> Term {
        self.bindings
            .get(x)
            .cloned()
            .unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn dom(&self) -> BTreeSet<Var> {
        self.bindings.keys().cloned().collect()
    }

    pub fn in_dom(&self, x: &Var) -> bool {
        self.bindings.contains_key(x)
    }

    pub fn ran(&self) -> BTreeSet<Term> {
        self.bindings.values().cloned().collect()
    }

    /// Variables occurring in the range.
    pub fn vran(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.bindings.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// Homomorphic extension of the substitution to terms.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        self.apply_nonempty(t)
    }

    fn apply_nonempty(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.image(x),
            Term::App(app) if app.args().is_empty() => t.clone(),
            Term::App(app) => Term::with_args(
                app.symbol(),
                app.args().iter().map(|a| self.apply_nonempty(a)).collect(),
            ),
        }
    }

    /// `self ∘ tau`: apply `tau` first, then `self`.
    pub fn compose(&self, tau: &Substitution) -> Substitution {
        let mut map = BTreeMap::new();
        for (x, t) in &tau.bindings {
            map.insert(x.clone(), self.apply(t));
        }
        for (x, t) in &self.bindings {
            map.entry(x.clone()).or_insert_with(|| t.clone());
        }
        Substitution::from_map(map)
    }

    /// Keeps only the bindings whose variable is in `vs`.
    pub fn restrict(&self, vs: &BTreeSet<Var>) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(x, _)| vs.contains(*x))
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect(),
        }
    }

    /// `dom ∩ vran = ∅`, checked against `self ∘ self = self` in debug builds.
    pub fn is_idempotent(&self) -> bool {
        let disjoint = self.is_idempotent_by_domain();
        debug_assert_eq!(disjoint, self.is_idempotent_by_composition());
        disjoint
    }

    pub fn is_idempotent_by_domain(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|x| !t.contains_var(x)))
    }

    pub fn is_idempotent_by_composition(&self) -> bool {
        subst_equal(&self.compose(self), self)
    }
}

/// Equality of substitutions as functions.
pub fn subst_equal(sigma: &Substitution, tau: &Substitution) -> bool {
    sigma.bindings == tau.bindings
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Why a matching problem has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchFailure {
    /// The pattern has a symbol where the target has a different symbol or a
    /// variable.
    Clash,
    /// A pattern variable would need two different images.
    InconsistentBinding,
}

impl fmt::Display for MatchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchFailure::Clash => f.write_str("clash"),
            MatchFailure::InconsistentBinding => f.write_str("inconsistent binding"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    Matched(Substitution),
    NoMatch { reason: MatchFailure, at: Position },
}

impl MatchResult {
    pub fn witness(&self) -> Option<&Substitution> {
        match self {
            MatchResult::Matched(w) => Some(w),
            MatchResult::NoMatch { .. } => None,
        }
    }
}

/// One-sided unification: finds `gamma` with `gamma(pattern) = target` and
/// `dom(gamma) ⊆ vars(pattern)`. On failure reports the leftmost-outermost
/// conflicting position.
pub fn match_terms(pattern: &Term, target: &Term) -> MatchResult {
    let mut bindings = BTreeMap::new();
    let mut path = Vec::new();
    match match_into(pattern, target, &mut bindings, &mut path) {
        Ok(()) => MatchResult::Matched(Substitution::from_map(bindings)),
        Err(reason) => MatchResult::NoMatch {
            reason,
            at: Position::new(path).expect("paths are built from 1-based indices"),
        },
    }
}

/// Preorder matching. `bindings` keeps `X -> X` entries so consistency is
/// checked for variables mapped to themselves. On error `path` holds the
/// failing position.
fn match_into(
    pattern: &Term,
    target: &Term,
    bindings: &mut BTreeMap<Var, Term>,
    path: &mut Vec<usize>,
) -> Result<(), MatchFailure> {
    match pattern {
        Term::Var(x) => match bindings.get(x) {
            Some(bound) if bound == target => Ok(()),
            Some(_) => Err(MatchFailure::InconsistentBinding),
            None => {
                bindings.insert(x.clone(), target.clone());
                Ok(())
            }
        },
        Term::App(p) => {
            if target.head() != Some(p.symbol()) {
                return Err(MatchFailure::Clash);
            }
            for (i, (pa, ta)) in p.args().iter().zip(target.args()).enumerate() {
                path.push(i + 1);
                match_into(pa, ta, bindings, path)?;
                path.pop();
            }
            Ok(())
        }
    }
}

/// A witness `gamma` with `gamma ∘ theta = sigma`, if one exists.
///
/// Solves the simultaneous matching problem `theta(x) ≐ sigma(x)` over every
/// variable where either side is constrained: `dom(theta) ∪ dom(sigma)` plus
/// `vran(theta)`, since a range variable `y` of `theta` outside both domains
/// must be fixed by `gamma`.
pub fn more_general_witness(theta: &Substitution, sigma: &Substitution) -> Option<Substitution> {
    let mut vars: BTreeSet<Var> = theta.bindings.keys().cloned().collect();
    vars.extend(sigma.bindings.keys().cloned());
    vars.extend(theta.vran());

    let mut bindings = BTreeMap::new();
    let mut path = Vec::new();
    for x in &vars {
        let pattern = theta.image(x);
        let target = sigma.image(x);
        if match_into(&pattern, &target, &mut bindings, &mut path).is_err() {
            return None;
        }
    }
    let gamma = Substitution::from_map(bindings);
    debug_assert!(subst_equal(&gamma.compose(theta), sigma));
    Some(gamma)
}

/// `theta <= sigma`: some `gamma` has `gamma ∘ theta = sigma`.
pub fn more_general(theta: &Substitution, sigma: &Substitution) -> bool {
    more_general_witness(theta, sigma).is_some()
}
