//! Independent ground truth for the unification algorithms.
//!
//! [`solve_equations`] is a rule-based solver over equation sets (delete,
//! decompose, orient, eliminate) and shares no code path with the
//! difference-resolving algorithms. The enumerators produce every term and
//! substitution within a size bound so unifier sets can be approximated by
//! brute force.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::subst::Substitution;
use crate::term::{Position, Signature, Term, Var};
use crate::unify::{is_unifier, Failure, UnifyOutcome};

/// A finite system of equations `s ≐ t`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquationSet {
    equations: Vec<(Term, Term)>,
}

impl EquationSet {
    pub fn new() -> Self {
        EquationSet::default()
    }

    pub fn single(s: Term, t: Term) -> Self {
        EquationSet {
            equations: vec![(s, t)],
        }
    }

    pub fn push(&mut self, s: Term, t: Term) {
        self.equations.push((s, t));
    }

    pub fn equations(&self) -> &[(Term, Term)] {
        &self.equations
    }
}

impl FromIterator<(Term, Term)> for EquationSet {
    fn from_iter<I: IntoIterator<Item = (Term, Term)>>(iter: I) -> Self {
        EquationSet {
            equations: iter.into_iter().collect(),
        }
    }
}

/// Solves the system by transformation into solved form. Each pending
/// equation remembers where it sits inside its original equation so failures
/// can report a position; `steps` counts eliminations.
pub fn solve_equations(eqs: &EquationSet) -> UnifyOutcome {
    let mut pending: VecDeque<(Term, Term, Position)> = eqs
        .equations
        .iter()
        .map(|(s, t)| (s.clone(), t.clone(), Position::root()))
        .collect();
    let mut solved: BTreeMap<Var, Term> = BTreeMap::new();
    let mut steps = 0;

    while let Some((s, t, at)) = pending.pop_front() {
        match (&s, &t) {
            // delete
            _ if s == t => {}
            // decompose / clash
            (Term::App(a), Term::App(b)) => {
                if a.symbol() != b.symbol() {
                    return UnifyOutcome::Failed(Failure::Clash {
                        position: at,
                        left: a.symbol().clone(),
                        right: b.symbol().clone(),
                    });
                }
                for (i, (x, y)) in a.args().iter().zip(b.args()).enumerate().rev() {
                    pending.push_front((x.clone(), y.clone(), at.child(i + 1)));
                }
            }
            // orient
            (Term::App(_), Term::Var(_)) => pending.push_front((t, s, at)),
            // eliminate / occurs check
            (Term::Var(x), _) => {
                if t.contains_var(x) {
                    return UnifyOutcome::Failed(Failure::OccursCheck {
                        var: x.clone(),
                        term: t.clone(),
                        position: at,
                    });
                }
                let elim = Substitution::singleton(x.clone(), t.clone())
                    .expect("s != t, so t is not the variable itself");
                for (l, r, _) in pending.iter_mut() {
                    *l = elim.apply(l);
                    *r = elim.apply(r);
                }
                for r in solved.values_mut() {
                    *r = elim.apply(r);
                }
                solved.insert(x.clone(), t.clone());
                steps += 1;
            }
        }
    }
    let mgu = Substitution::from_bindings(solved).expect("each variable is eliminated once");
    UnifyOutcome::Unified { mgu, steps }
}

/// Bounds for exhaustive enumeration: terms of height at most `max_depth`
/// (leaves have height 0) over `signature` and `variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBound {
    pub max_depth: usize,
    pub variables: BTreeSet<Var>,
    pub signature: Signature,
}

impl EnumBound {
    pub fn new(max_depth: usize, variables: BTreeSet<Var>, signature: Signature) -> Self {
        EnumBound {
            max_depth,
            variables,
            signature,
        }
    }
}

/// Every term within the bound, exactly once. Order: variables first
/// (lexical), then one block per symbol (lexical), with argument tuples in
/// lexicographic order of the terms one level down.
pub fn enum_terms(bound: &EnumBound) -> Vec<Term> {
    let mut level: Vec<Term> = Vec::new();
    for depth in 0..=bound.max_depth {
        let mut next: Vec<Term> = bound.variables.iter().cloned().map(Term::Var).collect();
        for (symbol, arity) in bound.signature.iter() {
            if arity > 0 && depth == 0 {
                continue;
            }
            for args in Tuples::new(&level, arity) {
                let t = bound
                    .signature
                    .app(symbol.name(), args)
                    .expect("arity taken from the signature");
                next.push(t);
            }
        }
        level = next;
    }
    level
}

/// All `arity`-tuples over `items`, last component varying fastest.
struct Tuples<'a> {
    items: &'a [Term],
    digits: Option<Vec<usize>>,
}

impl<'a> Tuples<'a> {
    fn new(items: &'a [Term], arity: usize) -> Self {
        let digits = if arity > 0 && items.is_empty() {
            None
        } else {
            Some(vec![0; arity])
        };
        Tuples { items, digits }
    }
}

impl Iterator for Tuples<'_> {
    type Item = Vec<Term>;

    fn next(&mut self) -> Option<Vec<Term>> {
        let digits = self.digits.as_mut()?;
        let out = digits.iter().map(|&d| self.items[d].clone()).collect();
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.items.len() {
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    }
}

/// Restartable stream of every substitution whose domain is a subset of
/// `domain` and whose images are drawn from a fixed term list. Identity
/// bindings are skipped. The first domain variable varies fastest, starting
/// from the identity substitution.
#[derive(Debug, Clone)]
pub struct SubstitutionStream {
    domain: Vec<Var>,
    /// Per domain variable: `None` (unbound) followed by the allowed images.
    choices: Vec<Vec<Option<Term>>>,
    digits: Option<Vec<usize>>,
}

impl SubstitutionStream {
    pub fn new(domain: &BTreeSet<Var>, terms: &[Term]) -> Self {
        let domain: Vec<Var> = domain.iter().cloned().collect();
        let choices = domain
            .iter()
            .map(|x| {
                std::iter::once(None)
                    .chain(
                        terms
                            .iter()
                            .filter(|t| t.as_var() != Some(x))
                            .cloned()
                            .map(Some),
                    )
                    .collect()
            })
            .collect();
        SubstitutionStream {
            digits: Some(vec![0; domain.len()]),
            domain,
            choices,
        }
    }

    /// Number of substitutions the stream yields in total.
    pub fn total(&self) -> usize {
        self.choices.iter().map(Vec::len).product()
    }
}

impl Iterator for SubstitutionStream {
    type Item = Substitution;

    fn next(&mut self) -> Option<Substitution> {
        let digits = self.digits.as_mut()?;
        let bindings = self
            .domain
            .iter()
            .zip(digits.iter())
            .zip(&self.choices)
            .filter_map(|((x, &d), ch)| ch[d].clone().map(|t| (x.clone(), t)));
        let out = Substitution::from_bindings(bindings).expect("domain variables are distinct");
        let mut i = 0;
        loop {
            if i == digits.len() {
                self.digits = None;
                break;
            }
            digits[i] += 1;
            if digits[i] < self.choices[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

pub fn enum_substitutions(domain: &BTreeSet<Var>, bound: &EnumBound) -> Vec<Substitution> {
    SubstitutionStream::new(domain, &enum_terms(bound)).collect()
}

fn pair_vars(s: &Term, t: &Term) -> BTreeSet<Var> {
    let mut vars = s.vars();
    vars.extend(t.vars());
    vars
}

/// The unifiers of `s` and `t` among [`enum_substitutions`] over their
/// variables, by filtering the full enumeration.
pub fn enumerated_unifiers(s: &Term, t: &Term, bound: &EnumBound) -> Vec<Substitution> {
    SubstitutionStream::new(&pair_vars(s, t), &enum_terms(bound))
        .filter(|sigma| is_unifier(sigma, s, t))
        .collect()
}

/// Finds the same unifiers as [`enumerated_unifiers`] without visiting every
/// substitution.
///
/// All domain variables but the last are enumerated. The last one is masked:
/// comparing the instantiated pair up to its first disagreement either shows
/// the pair equal whatever the last variable's image, or yields the single
/// image that could equate it, which is then checked. Terms are compared
/// without being instantiated.
#[derive(Debug, Clone)]
pub struct UnifierSearch {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl UnifierSearch {
    pub fn new(terms: Vec<Term>) -> Self {
        let index = terms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        UnifierSearch { terms, index }
    }

    pub fn from_bound(bound: &EnumBound) -> Self {
        UnifierSearch::new(enum_terms(bound))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The unifiers of `s` and `t`, in the order of [`enumerated_unifiers`].
    pub fn unifiers(&self, s: &Term, t: &Term) -> Vec<Substitution> {
        let domain: Vec<Var> = pair_vars(s, t).into_iter().collect();
        let mut found: Vec<Vec<Option<usize>>> = Vec::new();
        self.for_each_unifier(s, t, |choices| found.push(choices.to_vec()));
        // first variable fastest: compare from the last variable backwards,
        // with "unbound" before any image
        found.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        found
            .iter()
            .map(|choices| self.materialize(&domain, choices))
            .collect()
    }

    /// Builds the substitution described by per-variable image choices.
    pub fn materialize(&self, domain: &[Var], choices: &[Option<usize>]) -> Substitution {
        let bindings = domain
            .iter()
            .zip(choices)
            .filter_map(|(x, c)| c.map(|k| (x.clone(), self.terms[k].clone())));
        Substitution::from_bindings(bindings).expect("domain variables are distinct")
    }

    /// Calls `f` once per unifier of `s` and `t` within the term list. The
    /// argument gives, for each variable of the pair in lexical order, the
    /// index of its image in [`terms`](Self::terms) or `None` if unbound.
    pub fn for_each_unifier(&self, s: &Term, t: &Term, mut f: impl FnMut(&[Option<usize>])) {
        let domain: Vec<Var> = pair_vars(s, t).into_iter().collect();
        let Some(last) = domain.last() else {
            if s == t {
                f(&[]);
            }
            return;
        };
        let outer = domain.len() - 1;
        // Index of `Var x` in the term list: not a valid image for `x`.
        let own: Vec<Option<usize>> = domain
            .iter()
            .map(|x| self.index.get(&Term::Var(x.clone())).copied())
            .collect();
        let mut choices: Vec<Option<usize>> = vec![None; domain.len()];
        loop {
            let masked = Instance {
                domain: &domain,
                choices: &choices,
                terms: &self.terms,
                last: None,
            };
            match masked.compare(Node::Orig(s), Node::Orig(t)) {
                Cmp::Differ => {}
                Cmp::Equal => {
                    choices[outer] = None;
                    f(&choices);
                    for k in 0..self.terms.len() {
                        if Some(k) != own[outer] {
                            choices[outer] = Some(k);
                            f(&choices);
                        }
                    }
                    choices[outer] = None;
                }
                Cmp::Mask(other) => {
                    if let Some(image) = masked.build(other) {
                        let slot = if image.as_var() == Some(last) {
                            Some(None)
                        } else {
                            self.index.get(&image).map(|&k| Some(k))
                        };
                        let plugged = Instance {
                            last: Some(&image),
                            ..masked
                        };
                        if let Some(slot) = slot {
                            if matches!(plugged.compare(Node::Orig(s), Node::Orig(t)), Cmp::Equal) {
                                choices[outer] = slot;
                                f(&choices);
                                choices[outer] = None;
                            }
                        }
                    }
                }
            }
            // advance the odometer over the outer variables, first fastest
            let mut i = 0;
            loop {
                if i == outer {
                    return;
                }
                let mut next = choices[i].map_or(0, |k| k + 1);
                if Some(next) == own[i] {
                    next += 1;
                }
                if next < self.terms.len() {
                    choices[i] = Some(next);
                    break;
                }
                choices[i] = None;
                i += 1;
            }
        }
    }
}

/// A term of the original pair (instantiated on the fly) or a term taken
/// verbatim from an image.
#[derive(Debug, Clone, Copy)]
enum Node<'a> {
    Orig(&'a Term),
    Raw(&'a Term),
}

enum View<'a> {
    Mask,
    Var(&'a Var),
    App(&'a Term, bool),
}

enum Cmp<'a> {
    Equal,
    Differ,
    /// The first disagreement pairs the masked variable with this node.
    Mask(Node<'a>),
}

/// The pair's variables instantiated by `choices`, except the last variable,
/// which is masked or mapped to `last`.
#[derive(Clone, Copy)]
struct Instance<'a> {
    domain: &'a [Var],
    choices: &'a [Option<usize>],
    terms: &'a [Term],
    last: Option<&'a Term>,
}

impl<'a> Instance<'a> {
    fn view(&self, node: Node<'a>) -> View<'a> {
        match node {
            Node::Raw(Term::Var(v)) => View::Var(v),
            Node::Raw(app) => View::App(app, false),
            Node::Orig(Term::Var(v)) => {
                let i = self
                    .domain
                    .iter()
                    .position(|x| x == v)
                    .expect("the domain covers the pair's variables");
                if i + 1 == self.domain.len() {
                    match self.last {
                        None => View::Mask,
                        Some(u) => self.view(Node::Raw(u)),
                    }
                } else {
                    match self.choices[i] {
                        None => View::Var(v),
                        Some(k) => self.view(Node::Raw(&self.terms[k])),
                    }
                }
            }
            Node::Orig(app) => View::App(app, true),
        }
    }

    /// Leftmost-outermost comparison of two instantiated nodes.
    fn compare(&self, a: Node<'a>, b: Node<'a>) -> Cmp<'a> {
        match (self.view(a), self.view(b)) {
            (View::Mask, View::Mask) => Cmp::Equal,
            (View::Mask, _) => Cmp::Mask(b),
            (_, View::Mask) => Cmp::Mask(a),
            (View::Var(x), View::Var(y)) if x == y => Cmp::Equal,
            (View::App(l, lo), View::App(r, ro)) if l.head() == r.head() => {
                for (x, y) in l.args().iter().zip(r.args()) {
                    let nx = if lo { Node::Orig(x) } else { Node::Raw(x) };
                    let ny = if ro { Node::Orig(y) } else { Node::Raw(y) };
                    match self.compare(nx, ny) {
                        Cmp::Equal => {}
                        other => return other,
                    }
                }
                Cmp::Equal
            }
            _ => Cmp::Differ,
        }
    }

    /// The instantiated node as a term; `None` if it contains the mask.
    fn build(&self, node: Node<'a>) -> Option<Term> {
        match self.view(node) {
            View::Mask => None,
            View::Var(v) => Some(Term::Var(v.clone())),
            View::App(t, false) => Some(t.clone()),
            View::App(t, true) => {
                let app_args = t
                    .args()
                    .iter()
                    .map(|a| self.build(Node::Orig(a)))
                    .collect::<Option<Vec<_>>>()?;
                Some(Term::with_args(t.head().expect("application"), app_args))
            }
        }
    }
}
