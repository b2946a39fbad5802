//! Proptest strategies for terms, positions and substitutions.

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::sample::Index;

use crate::subst::Substitution;
use crate::term::{Position, Signature, Term, Var};

/// `f/2, g/1, h/3, a/0, b/0, c/0`
pub fn test_signature() -> Signature {
    Signature::from_decls([("f", 2), ("g", 1), ("h", 3), ("a", 0), ("b", 0), ("c", 0)])
        .expect("distinct symbols")
}

/// `X, Y, Z, W`
pub fn test_variables() -> Vec<Var> {
    ["X", "Y", "Z", "W"]
        .iter()
        .map(|n| Var::new(n).expect("valid name"))
        .collect()
}

/// Terms of height at most `max_height` over the test signature and variables.
pub fn arb_term(max_height: usize) -> BoxedStrategy<Term> {
    arb_term_over(test_signature(), test_variables(), max_height)
}

pub fn arb_term_over(sig: Signature, vars: Vec<Var>, max_height: usize) -> BoxedStrategy<Term> {
    let mut leaves: Vec<Term> = vars.into_iter().map(Term::Var).collect();
    let mut compound: Vec<(String, usize)> = Vec::new();
    for (symbol, arity) in sig.iter() {
        if arity == 0 {
            leaves.push(sig.constant(symbol.name()).expect("declared"));
        } else {
            compound.push((symbol.name().to_string(), arity));
        }
    }
    assert!(!leaves.is_empty(), "need a variable or a constant");
    let leaf = proptest::sample::select(leaves).boxed();
    let mut strategy = leaf.clone();
    if compound.is_empty() {
        return strategy;
    }
    for _ in 0..max_height {
        let below = strategy.clone();
        let sig = sig.clone();
        let app = proptest::sample::select(compound.clone())
            .prop_flat_map(move |(name, arity)| {
                let sig = sig.clone();
                proptest::collection::vec(below.clone(), arity)
                    .prop_map(move |args| sig.app(&name, args).expect("arity from signature"))
            })
            .boxed();
        strategy = prop_oneof![2 => leaf.clone(), 3 => app].boxed();
    }
    strategy
}

/// A term together with one of its positions.
pub fn arb_term_with_position(max_height: usize) -> BoxedStrategy<(Term, Position)> {
    (arb_term(max_height), any::<Index>())
        .prop_map(|(t, idx)| {
            let positions: Vec<Position> = t.positions().into_iter().collect();
            let p = positions[idx.index(positions.len())].clone();
            (t, p)
        })
        .boxed()
}

/// Substitutions over the test variables with at most `max_bindings`
/// bindings (fewer once identity bindings are dropped).
pub fn arb_substitution(max_bindings: usize, max_height: usize) -> BoxedStrategy<Substitution> {
    proptest::collection::btree_map(
        proptest::sample::select(test_variables()),
        arb_term(max_height),
        0..=max_bindings,
    )
    .prop_map(|map: BTreeMap<Var, Term>| {
        Substitution::from_bindings(map).expect("map keys are distinct")
    })
    .boxed()
}

/// Two terms with a known common instance.
#[derive(Debug, Clone)]
pub struct UnifiablePair {
    pub s: Term,
    pub t: Term,
    /// A unifier of `s` and `t`.
    pub witness: Substitution,
}

/// Builds a random instance `r` over `X`, `Y`, picks two of its subterms as
/// the images of `Z` and `W`, and abstracts random occurrences of those
/// subterms in two independent copies of `r`. `{Z -> .., W -> ..}` maps both
/// copies back to `r`.
pub fn arb_unifiable_pair(max_height: usize) -> BoxedStrategy<UnifiablePair> {
    let vars = test_variables();
    let inner: Vec<Var> = vars[..2].to_vec();
    let (z, w) = (vars[2].clone(), vars[3].clone());
    (
        arb_term_over(test_signature(), inner, max_height),
        any::<Index>(),
        any::<Index>(),
        proptest::collection::vec(any::<bool>(), 64),
        proptest::collection::vec(any::<bool>(), 64),
    )
        .prop_map(move |(r, i, j, left, right)| {
            let subterms: Vec<Term> = r
                .positions()
                .iter()
                .map(|p| r.get(p).expect("own position").clone())
                .collect();
            let zv = subterms[i.index(subterms.len())].clone();
            let wv = subterms[j.index(subterms.len())].clone();
            let abstracts = [(z.clone(), zv.clone()), (w.clone(), wv.clone())];
            let s = abstract_occurrences(&r, &abstracts, &mut left.iter().cycle());
            let t = abstract_occurrences(&r, &abstracts, &mut right.iter().cycle());
            let witness = Substitution::from_bindings([(z.clone(), zv), (w.clone(), wv)])
                .expect("distinct variables");
            UnifiablePair { s, t, witness }
        })
        .boxed()
}

fn abstract_occurrences<'a>(
    t: &Term,
    abstracts: &[(Var, Term)],
    coins: &mut impl Iterator<Item = &'a bool>,
) -> Term {
    for (v, image) in abstracts {
        if t == image && *coins.next().expect("cycled") {
            return Term::Var(v.clone());
        }
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::App(app) => {
            let args = app
                .args()
                .iter()
                .map(|a| abstract_occurrences(a, abstracts, coins))
                .collect();
            Term::with_args(app.symbol(), args)
        }
    }
}

/// Either a constructed unifiable pair or two unrelated random terms.
pub fn arb_pair(max_height: usize) -> BoxedStrategy<(Term, Term)> {
    prop_oneof![
        arb_unifiable_pair(max_height).prop_map(|p| (p.s, p.t)),
        (arb_term(max_height), arb_term(max_height)),
    ]
    .boxed()
}
