//! Syntactic unification by resolving the leftmost-outermost difference.
//!
//! Three variants share the same core step, binding a variable found at the
//! first difference between the two terms:
//!
//! * [`classic_unify`] resolves differences with [`sub_of_frst_diff`], which
//!   assumes the pair is unifiable; violations are reported as failures.
//! * [`robinson_unify`] uses [`link_of_frst_diff`], which detects clashes and
//!   occurs-check violations itself.
//! * [`robinson_unify_efficient`] resumes the search for the next difference
//!   from the one just resolved instead of rescanning from the root.
//!
//! Each resolved difference removes the bound variable from both terms, so the
//! number of distinct variables in the pair strictly decreases.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::subst::{more_general, Substitution};
use crate::term::{Position, Symbol, Term, TermError, Var};

/// Why two terms have no unifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Different head symbols at `position` of the instantiated terms.
    Clash {
        position: Position,
        left: Symbol,
        right: Symbol,
    },
    /// `var` occurs in `term`, which it would have to be bound to.
    OccursCheck {
        var: Var,
        term: Term,
        position: Position,
    },
}

impl Failure {
    pub fn position(&self) -> &Position {
        match self {
            Failure::Clash { position, .. } | Failure::OccursCheck { position, .. } => position,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Clash {
                position,
                left,
                right,
            } => write!(f, "clash {left} vs {right} at {position}"),
            Failure::OccursCheck {
                var,
                term,
                position,
            } => write!(f, "occurs {var} in {term} at {position}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyOutcome {
    /// `steps` counts the resolved differences (link substitutions composed).
    Unified {
        mgu: Substitution,
        steps: usize,
    },
    Failed(Failure),
}

impl UnifyOutcome {
    pub fn is_unified(&self) -> bool {
        matches!(self, UnifyOutcome::Unified { .. })
    }

    pub fn mgu(&self) -> Option<&Substitution> {
        match self {
            UnifyOutcome::Unified { mgu, .. } => Some(mgu),
            UnifyOutcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            UnifyOutcome::Unified { .. } => None,
            UnifyOutcome::Failed(f) => Some(f),
        }
    }

    fn from_result(r: Result<(Substitution, usize), Failure>) -> UnifyOutcome {
        match r {
            Ok((mgu, steps)) => UnifyOutcome::Unified { mgu, steps },
            Err(f) => UnifyOutcome::Failed(f),
        }
    }
}

/// Final trace line: `result: <subst>` or `fail: <cause>`.
impl fmt::Display for UnifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyOutcome::Unified { mgu, .. } => write!(f, "result: {mgu}"),
            UnifyOutcome::Failed(failure) => write!(f, "fail: {failure}"),
        }
    }
}

/// One resolved difference. `vars_before`/`vars_after` are the number of
/// distinct variables in the pair before and after applying the binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub position: Position,
    pub var: Var,
    pub term: Term,
    pub vars_before: usize,
    pub vars_after: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: pos={} bind {} -> {} vars {} -> {}",
            self.step, self.position, self.var, self.term, self.vars_before, self.vars_after
        )
    }
}

/// Precondition violations of the partial operations in this module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("the terms are equal")]
    EqualTerms,
    #[error("terms are not unifiable: {0}")]
    NotUnifiable(Failure),
    #[error("candidate #{index} is not a unifier")]
    CandidateNotUnifier { index: usize },
    #[error(transparent)]
    Position(#[from] TermError),
    #[error("iteration bound {limit} exceeded")]
    IterationBound { limit: usize },
}

pub fn is_unifier(sigma: &Substitution, s: &Term, t: &Term) -> bool {
    sigma.apply(s) == sigma.apply(t)
}

/// Checks that `theta` unifies `s` and `t` and is more general than every
/// member of `candidates`, each of which must itself be a unifier.
pub fn is_mgu(
    theta: &Substitution,
    s: &Term,
    t: &Term,
    candidates: &[Substitution],
) -> Result<bool, UnifyError> {
    if let Some(index) = candidates.iter().position(|c| !is_unifier(c, s, t)) {
        return Err(UnifyError::CandidateNotUnifier { index });
    }
    Ok(is_unifier(theta, s, t) && candidates.iter().all(|c| more_general(theta, c)))
}

/// Leftmost-outermost position where `s` and `t` disagree at the root of their
/// subterms, or `None` if the terms are equal.
pub fn first_diff(s: &Term, t: &Term) -> Option<Position> {
    if s == t {
        return None;
    }
    let mut path = Vec::new();
    let (mut s, mut t) = (s, t);
    while let (Term::App(a), Term::App(b)) = (s, t) {
        if a.symbol() != b.symbol() {
            break;
        }
        // Same head and s != t: some argument differs.
        let k = a
            .args()
            .iter()
            .zip(b.args())
            .position(|(x, y)| x != y)
            .expect("equal heads with distinct terms have a differing argument");
        path.push(k + 1);
        s = &a.args()[k];
        t = &b.args()[k];
    }
    Some(Position::new(path).expect("indices are 1-based"))
}

/// [`first_diff`] for pairs assumed unifiable: at least one side of the
/// difference must be a variable.
pub fn resolving_diff(s: &Term, t: &Term) -> Result<Position, UnifyError> {
    let p = first_diff(s, t).ok_or(UnifyError::EqualTerms)?;
    let (sp, tp) = at(s, t, &p);
    if sp.is_var() || tp.is_var() {
        Ok(p)
    } else {
        Err(UnifyError::NotUnifiable(clash(p, sp, tp)))
    }
}

/// The binding that resolves a difference.
#[derive(Debug, Clone)]
struct Link {
    position: Position,
    var: Var,
    term: Term,
}

impl Link {
    fn substitution(&self) -> Substitution {
        Substitution::singleton(self.var.clone(), self.term.clone())
            .expect("a difference never pairs a variable with itself")
    }
}

fn at<'a>(s: &'a Term, t: &'a Term, p: &Position) -> (&'a Term, &'a Term) {
    (
        s.get(p).expect("difference position is valid in s"),
        t.get(p).expect("difference position is valid in t"),
    )
}

fn clash(position: Position, sp: &Term, tp: &Term) -> Failure {
    Failure::Clash {
        position,
        left: sp.head().expect("non-variable").clone(),
        right: tp.head().expect("non-variable").clone(),
    }
}

/// Binds whichever side of the difference at `p` is a variable, preferring
/// `s`; an occurs violation or a symbol clash is a failure.
fn link_at(s: &Term, t: &Term, p: Position) -> Result<Link, Failure> {
    let (sp, tp) = at(s, t, &p);
    let (var, term) = match (sp, tp) {
        (Term::Var(x), _) => (x, tp),
        (_, Term::Var(y)) => (y, sp),
        _ => return Err(clash(p, sp, tp)),
    };
    if term.contains_var(var) {
        return Err(Failure::OccursCheck {
            var: var.clone(),
            term: term.clone(),
            position: p,
        });
    }
    Ok(Link {
        position: p,
        var: var.clone(),
        term: term.clone(),
    })
}

/// The substitution resolving the first difference of a unifiable pair.
pub fn sub_of_frst_diff(s: &Term, t: &Term) -> Result<Substitution, UnifyError> {
    let p = resolving_diff(s, t)?;
    link_at(s, t, p)
        .map(|l| l.substitution())
        .map_err(UnifyError::NotUnifiable)
}

/// The link substitution at the first difference, or the reason no link
/// exists. Equal terms give the identity.
pub fn link_of_frst_diff(s: &Term, t: &Term) -> Result<Substitution, Failure> {
    match first_diff(s, t) {
        None => Ok(Substitution::identity()),
        Some(p) => link_at(s, t, p).map(|l| l.substitution()),
    }
}

fn pair_var_count(s: &Term, t: &Term) -> usize {
    let mut vars = BTreeSet::new();
    s.collect_vars(&mut vars);
    t.collect_vars(&mut vars);
    vars.len()
}

/// Receives one [`TraceStep`] per resolved difference.
pub type TraceSink<'a> = &'a mut dyn FnMut(&TraceStep);

struct Tracer<'a> {
    sink: Option<TraceSink<'a>>,
    step: usize,
}

impl<'a> Tracer<'a> {
    fn new(sink: Option<TraceSink<'a>>) -> Self {
        Tracer { sink, step: 0 }
    }

    /// Applies the link to both terms and reports the step.
    fn resolve(&mut self, s: &Term, t: &Term, link: &Link) -> (Substitution, Term, Term) {
        let sig = link.substitution();
        let (s2, t2) = (sig.apply(s), sig.apply(t));
        self.step += 1;
        if let Some(sink) = self.sink.as_mut() {
            sink(&TraceStep {
                step: self.step,
                position: link.position.clone(),
                var: link.var.clone(),
                term: link.term.clone(),
                vars_before: pair_var_count(s, t),
                vars_after: pair_var_count(&s2, &t2),
            });
        }
        (sig, s2, t2)
    }
}

pub fn classic_unify(s: &Term, t: &Term) -> UnifyOutcome {
    classic_unify_traced(s, t, None)
}

pub fn classic_unify_traced(s: &Term, t: &Term, sink: Option<TraceSink<'_>>) -> UnifyOutcome {
    fn go(s: &Term, t: &Term, tracer: &mut Tracer<'_>) -> Result<(Substitution, usize), Failure> {
        if s == t {
            return Ok((Substitution::identity(), 0));
        }
        let p = match resolving_diff(s, t) {
            Ok(p) => p,
            Err(UnifyError::NotUnifiable(f)) => return Err(f),
            Err(e) => unreachable!("s != t: {e}"),
        };
        let link = link_at(s, t, p)?;
        let (sig, s2, t2) = tracer.resolve(s, t, &link);
        let (rest, n) = go(&s2, &t2, tracer)?;
        Ok((rest.compose(&sig), n + 1))
    }
    UnifyOutcome::from_result(go(s, t, &mut Tracer::new(sink)))
}

pub fn robinson_unify(s: &Term, t: &Term) -> UnifyOutcome {
    robinson_unify_traced(s, t, None)
}

pub fn robinson_unify_traced(s: &Term, t: &Term, sink: Option<TraceSink<'_>>) -> UnifyOutcome {
    fn go(s: &Term, t: &Term, tracer: &mut Tracer<'_>) -> Result<(Substitution, usize), Failure> {
        let Some(p) = first_diff(s, t) else {
            return Ok((Substitution::identity(), 0));
        };
        let link = link_at(s, t, p)?;
        let (sig, s2, t2) = tracer.resolve(s, t, &link);
        let (rest, n) = go(&s2, &t2, tracer)?;
        Ok((rest.compose(&sig), n + 1))
    }
    UnifyOutcome::from_result(go(s, t, &mut Tracer::new(sink)))
}

/// The next position to the right of `p` where the subterms of `s` and `t`
/// differ, assuming everything up to and including `p` agrees. The root means
/// no further difference.
pub fn next_position(s: &Term, t: &Term, p: &Position) -> Result<Position, UnifyError> {
    s.subterm_at(p)?;
    t.subterm_at(p)?;
    Ok(next_position_unchecked(s, t, p.clone()))
}

fn next_position_unchecked(s: &Term, t: &Term, mut p: Position) -> Position {
    loop {
        let (Some(parent), Some(last)) = (p.parent(), p.last()) else {
            return Position::root();
        };
        let (sp, tp) = at(s, t, &parent);
        if sp.head() != tp.head() {
            return parent;
        }
        let sibling = parent.child(last + 1);
        match (s.get(&sibling), t.get(&sibling)) {
            (Some(a), Some(b)) if a != b => return sibling,
            (Some(_), _) => p = sibling,
            (None, _) if !parent.is_root() => p = parent,
            (None, _) => return Position::root(),
        }
    }
}

/// Robinson unification that continues the difference search from the last
/// resolved position.
///
/// # Panics
///
/// If the internal iteration bound is exceeded, which indicates a bug rather
/// than a property of the input. [`try_robinson_unify_efficient`] reports it as
/// an error instead.
pub fn robinson_unify_efficient(s: &Term, t: &Term) -> UnifyOutcome {
    try_robinson_unify_efficient(s, t, None).expect("efficient unification did not terminate")
}

pub fn robinson_unify_efficient_traced(
    s: &Term,
    t: &Term,
    sink: Option<TraceSink<'_>>,
) -> UnifyOutcome {
    try_robinson_unify_efficient(s, t, sink).expect("efficient unification did not terminate")
}

pub fn try_robinson_unify_efficient(
    s: &Term,
    t: &Term,
    sink: Option<TraceSink<'_>>,
) -> Result<UnifyOutcome, UnifyError> {
    let limit = s.size() * (pair_var_count(s, t) + 1);
    let mut aux = Aux {
        tracer: Tracer::new(sink),
        visits: 0,
        limit,
    };
    match aux.run(s, t, Position::root()) {
        Ok((mgu, steps)) => Ok(UnifyOutcome::Unified { mgu, steps }),
        Err(AuxError::Failed(f)) => Ok(UnifyOutcome::Failed(f)),
        Err(AuxError::Bound) => Err(UnifyError::IterationBound { limit }),
    }
}

enum AuxError {
    Failed(Failure),
    Bound,
}

struct Aux<'a> {
    tracer: Tracer<'a>,
    visits: usize,
    limit: usize,
}

impl Aux<'_> {
    fn run(
        &mut self,
        s: &Term,
        t: &Term,
        mut p: Position,
    ) -> Result<(Substitution, usize), AuxError> {
        loop {
            self.visits += 1;
            if self.visits > self.limit {
                return Err(AuxError::Bound);
            }
            let (sp, tp) = at(s, t, &p);
            let Some(q) = first_diff(sp, tp) else {
                p = next_position_unchecked(s, t, p);
                if p.is_root() {
                    return Ok((Substitution::identity(), 0));
                }
                continue;
            };
            let conflict = p.concat(&q);
            let link = link_at(s, t, conflict.clone()).map_err(AuxError::Failed)?;
            let (sig, s2, t2) = self.tracer.resolve(s, t, &link);
            let next = next_position_unchecked(&s2, &t2, conflict);
            if next.is_root() {
                return Ok((sig, 1));
            }
            let (rest, n) = self.run(&s2, &t2, next)?;
            return Ok((rest.compose(&sig), n + 1));
        }
    }
}

pub fn unifiable(s: &Term, t: &Term) -> bool {
    robinson_unify(s, t).is_unified()
}
