use std::collections::BTreeSet;

use fo_unify::oracle::{
    enum_terms, enumerated_unifiers, solve_equations, EnumBound, EquationSet, UnifierSearch,
};
use fo_unify::syntax::parse_substitution;
use fo_unify::testkit::{
    arb_pair, arb_substitution, arb_term, arb_term_with_position, arb_unifiable_pair,
    test_signature,
};
use fo_unify::unify::{first_diff, link_of_frst_diff};
use fo_unify::{
    is_unifier, match_terms, more_general, parse_term, subst_equal, Algorithm, MatchResult,
    Position, Term, TraceStep, UnifyOutcome, Var,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(t in arb_term(4)) {
        prop_assert_eq!(parse_term(&t.to_string(), &test_signature()).unwrap(), t);
    }

    #[test]
    fn substitution_round_trip(sigma in arb_substitution(3, 2)) {
        prop_assert_eq!(parse_substitution(&sigma.to_string(), &test_signature()).unwrap(), sigma);
    }

    #[test]
    fn size_counts_positions(t in arb_term(4)) {
        prop_assert_eq!(t.size(), t.positions().len());
    }

    #[test]
    fn positions_are_prefix_closed(t in arb_term(4)) {
        let positions = t.positions();
        prop_assert!(positions.contains(&Position::root()));
        for p in &positions {
            if let Some(parent) = p.parent() {
                prop_assert!(positions.contains(&parent));
            }
        }
    }

    #[test]
    fn replace_then_read_back((t, p) in arb_term_with_position(4), r in arb_term(2)) {
        let replaced = t.replace_at(&p, r.clone()).unwrap();
        prop_assert_eq!(replaced.subterm_at(&p).unwrap(), &r);
        let original = t.subterm_at(&p).unwrap().clone();
        prop_assert_eq!(replaced.replace_at(&p, original).unwrap(), t);
    }

    #[test]
    fn replacement_leaves_disjoint_positions((t, p) in arb_term_with_position(3), r in arb_term(2)) {
        let replaced = t.replace_at(&p, r).unwrap();
        for q in t.positions() {
            if !p.is_prefix_of(&q) && !q.is_prefix_of(&p) {
                prop_assert_eq!(replaced.get(&q), t.get(&q));
            }
        }
    }

    #[test]
    fn composition_applies_right_first(
        sigma in arb_substitution(3, 2),
        tau in arb_substitution(3, 2),
        t in arb_term(3),
    ) {
        prop_assert_eq!(sigma.compose(&tau).apply(&t), sigma.apply(&tau.apply(&t)));
    }

    #[test]
    fn composition_is_associative(
        a in arb_substitution(3, 2),
        b in arb_substitution(3, 2),
        c in arb_substitution(3, 2),
    ) {
        prop_assert!(subst_equal(&a.compose(&b).compose(&c), &a.compose(&b.compose(&c))));
    }

    #[test]
    fn idempotence_characterizations_agree(sigma in arb_substitution(3, 2)) {
        prop_assert_eq!(sigma.is_idempotent_by_domain(), sigma.is_idempotent_by_composition());
    }

    #[test]
    fn no_identity_bindings(sigma in arb_substitution(3, 2)) {
        for (x, t) in sigma.iter() {
            prop_assert_ne!(t.as_var(), Some(x));
        }
    }

    #[test]
    fn instances_are_matched(t in arb_term(3), sigma in arb_substitution(3, 2)) {
        let target = sigma.apply(&t);
        match match_terms(&t, &target) {
            MatchResult::Matched(w) => {
                prop_assert_eq!(w.apply(&t), target);
                let vars = t.vars();
                prop_assert!(w.dom().is_subset(&vars));
            }
            MatchResult::NoMatch { reason, at } => {
                prop_assert!(false, "{} at {}", reason, at);
            }
        }
    }

    #[test]
    fn instances_are_less_general(theta in arb_substitution(3, 2), gamma in arb_substitution(3, 1)) {
        prop_assert!(more_general(&theta, &gamma.compose(&theta)));
        prop_assert!(more_general(&Default::default(), &theta));
    }

    #[test]
    fn algorithms_agree((s, t) in arb_pair(3)) {
        let outcomes: Vec<UnifyOutcome> = Algorithm::ALL.iter().map(|a| a.run(&s, &t)).collect();
        for o in &outcomes[1..] {
            prop_assert_eq!(o.is_unified(), outcomes[0].is_unified());
        }
        if let Some(theta) = outcomes[0].mgu() {
            prop_assert!(is_unifier(theta, &s, &t));
            prop_assert!(theta.is_idempotent());
            for o in &outcomes[1..] {
                prop_assert!(subst_equal(theta, o.mgu().unwrap()));
            }
        }
    }

    #[test]
    fn symmetric_pairs_agree((s, t) in arb_pair(3)) {
        let there = Algorithm::Robinson.run(&s, &t);
        let back = Algorithm::Robinson.run(&t, &s);
        prop_assert_eq!(there.is_unified(), back.is_unified());
        if let (Some(a), Some(b)) = (there.mgu(), back.mgu()) {
            prop_assert!(more_general(a, b) && more_general(b, a));
        }
    }

    #[test]
    fn mgu_is_more_general_than_constructed_unifier(p in arb_unifiable_pair(4)) {
        prop_assert!(is_unifier(&p.witness, &p.s, &p.t));
        let theta = Algorithm::Robinson.run(&p.s, &p.t).mgu().cloned().unwrap();
        prop_assert!(more_general(&theta, &p.witness));
        prop_assert!(subst_equal(&p.witness, &p.witness.compose(&theta)));
    }

    #[test]
    fn mgu_introduces_no_variables((s, t) in arb_pair(3)) {
        if let Some(theta) = Algorithm::Robinson.run(&s, &t).mgu() {
            let mut vars = s.vars();
            vars.extend(t.vars());
            prop_assert!(theta.dom().is_subset(&vars));
            prop_assert!(theta.vran().is_subset(&vars));
        }
    }

    #[test]
    fn traces_decrease_the_variable_count((s, t) in arb_pair(3)) {
        for a in [Algorithm::Classic, Algorithm::Robinson, Algorithm::Efficient] {
            let mut steps: Vec<TraceStep> = Vec::new();
            let mut sink = |st: &TraceStep| steps.push(st.clone());
            let outcome = a.run_traced(&s, &t, Some(&mut sink));
            for (k, st) in steps.iter().enumerate() {
                prop_assert_eq!(st.step, k + 1);
                prop_assert_eq!(st.vars_after + 1, st.vars_before);
            }
            if let UnifyOutcome::Unified { steps: n, .. } = outcome {
                prop_assert_eq!(n, steps.len());
            }
        }
    }

    #[test]
    fn first_diff_is_a_difference((s, t) in arb_pair(3)) {
        match first_diff(&s, &t) {
            None => prop_assert_eq!(&s, &t),
            Some(p) => {
                let (a, b) = (s.get(&p).unwrap(), t.get(&p).unwrap());
                prop_assert_ne!(a, b);
                prop_assert!(a.is_var() || b.is_var() || a.head() != b.head());
                for q in p.indices().iter().enumerate().map(|(k, _)| {
                    Position::new(p.indices()[..k].to_vec()).unwrap()
                }) {
                    prop_assert_eq!(s.get(&q).unwrap().head(), t.get(&q).unwrap().head());
                }
            }
        }
    }

    #[test]
    fn link_binds_at_the_first_difference((s, t) in arb_pair(3)) {
        if s != t {
            if let Ok(link) = link_of_frst_diff(&s, &t) {
                prop_assert_eq!(link.len(), 1);
                let p = first_diff(&s, &t).unwrap();
                prop_assert_eq!(link.apply(s.get(&p).unwrap()), link.apply(t.get(&p).unwrap()));
            }
        }
    }

    #[test]
    fn equation_systems_match_pairwise_unification((s1, t1) in arb_pair(2), (s2, t2) in arb_pair(2)) {
        let system: EquationSet = [(s1.clone(), t1.clone()), (s2.clone(), t2.clone())].into_iter().collect();
        let solved = solve_equations(&system);
        let sig = test_signature();
        let pack = |a: &Term, b: &Term| sig.app("f", vec![a.clone(), b.clone()]).unwrap();
        let combined = Algorithm::Robinson.run(&pack(&s1, &s2), &pack(&t1, &t2));
        prop_assert_eq!(solved.is_unified(), combined.is_unified());
        if let (Some(a), Some(b)) = (solved.mgu(), combined.mgu()) {
            prop_assert!(is_unifier(a, &s1, &t1) && is_unifier(a, &s2, &t2));
            prop_assert!(more_general(a, b) && more_general(b, a));
        }
    }
}

fn small_bound() -> EnumBound {
    let sig = fo_unify::parse_signature("f/2\ng/1\na/0").unwrap();
    let vars: BTreeSet<Var> = ["X", "Y"].iter().map(|n| Var::new(n).unwrap()).collect();
    EnumBound::new(1, vars, sig)
}

fn small_term() -> impl Strategy<Value = Term> {
    let terms = enum_terms(&EnumBound {
        max_depth: 2,
        ..small_bound()
    });
    proptest::sample::select(terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn unifier_search_matches_filtering(s in small_term(), t in small_term()) {
        let bound = small_bound();
        let search = UnifierSearch::from_bound(&bound);
        prop_assert_eq!(search.unifiers(&s, &t), enumerated_unifiers(&s, &t, &bound));
    }

    #[test]
    fn enumerated_unifiers_are_instances_of_the_mgu(s in small_term(), t in small_term()) {
        let bound = small_bound();
        let unifiers = enumerated_unifiers(&s, &t, &bound);
        match Algorithm::Robinson.run(&s, &t) {
            UnifyOutcome::Unified { mgu, .. } => {
                for sigma in &unifiers {
                    prop_assert!(more_general(&mgu, sigma));
                }
            }
            UnifyOutcome::Failed(_) => prop_assert!(unifiers.is_empty()),
        }
    }
}
