//! First-order syntactic unification.
//!
//! Terms over a signature ([`term`]), substitutions and the generality
//! pre-order ([`subst`]), three Robinson-style unification algorithms
//! ([`unify`]), an independent equation-set solver with exhaustive enumerators
//! for cross-checking ([`oracle`]), and the text formats ([`syntax`]).
//!
//! ```
//! use fo_unify::{parse_signature, parse_term, robinson_unify};
//!
//! let sig = parse_signature("f/2\ng/1").unwrap();
//! let s = parse_term("f(X, g(Y))", &sig).unwrap();
//! let t = parse_term("f(g(Z), X)", &sig).unwrap();
//! let mgu = robinson_unify(&s, &t).mgu().cloned().unwrap();
//! assert_eq!(mgu.to_string(), "{X -> g(Z), Y -> Z}");
//! ```

pub mod oracle;
pub mod subst;
pub mod syntax;
pub mod term;
#[cfg(feature = "testkit")]
pub mod testkit;
pub mod unify;

use std::fmt;
use std::str::FromStr;

pub use oracle::{solve_equations, EquationSet};
pub use subst::{match_terms, more_general, subst_equal, MatchResult, Substitution};
pub use syntax::{parse_signature, parse_substitution, parse_term, ParseError};
pub use term::{Position, PositionSet, Signature, Symbol, Term, TermError, Var};
pub use unify::{
    classic_unify, is_mgu, is_unifier, robinson_unify, robinson_unify_efficient, unifiable,
    Failure, TraceSink, TraceStep, UnifyOutcome,
};

/// Selects one of the unification procedures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Classic,
    #[default]
    Robinson,
    Efficient,
    /// The equation-set solver. Produces no trace steps.
    EquationSet,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Classic,
        Algorithm::Robinson,
        Algorithm::Efficient,
        Algorithm::EquationSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Classic => "classic",
            Algorithm::Robinson => "robinson",
            Algorithm::Efficient => "efficient",
            Algorithm::EquationSet => "mm",
        }
    }

    pub fn run(self, s: &Term, t: &Term) -> UnifyOutcome {
        self.run_traced(s, t, None)
    }

    pub fn run_traced(self, s: &Term, t: &Term, sink: Option<TraceSink<'_>>) -> UnifyOutcome {
        match self {
            Algorithm::Classic => unify::classic_unify_traced(s, t, sink),
            Algorithm::Robinson => unify::robinson_unify_traced(s, t, sink),
            Algorithm::Efficient => unify::robinson_unify_efficient_traced(s, t, sink),
            Algorithm::EquationSet => solve_equations(&EquationSet::single(s.clone(), t.clone())),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Algorithm, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}
