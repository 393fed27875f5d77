mod common;

use std::collections::BTreeSet;

use common::terms::{depth, iota, sample, Gen};
use gst_core::kernel::subst::is_beta_normal;
use gst_core::kernel::{beta_normalize, subst_term, type_of, Term, Var};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_terms_are_well_typed(seed in any::<u64>()) {
        let (ty, t) = sample(seed);
        prop_assert!(depth(&t) <= 6);
        prop_assert_eq!(type_of(&t).unwrap(), ty);
    }

    #[test]
    fn substitution_preserves_types_and_free_variables(seed in any::<u64>()) {
        let (ty, t) = sample(seed);
        let mut g = Gen::new(seed ^ 0xabc);
        let c = g.term(&iota(), 3);
        let x = Var::new("x", iota());
        let s = subst_term(&t, &x, &c).unwrap();
        prop_assert_eq!(type_of(&s).unwrap(), ty);
        let mut allowed: BTreeSet<Var> = t.free_vars();
        allowed.remove(&x);
        allowed.extend(c.free_vars());
        prop_assert!(s.free_vars().is_subset(&allowed));
        if !t.has_free(&x) {
            prop_assert!(s.alpha_eq(&t));
        }
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        let (_, t) = sample(seed);
        let mut g = Gen::new(seed ^ 0x5eed);
        let x = Var::new("x", iota());
        let y = Var::new("y", iota());
        let c = g.term(&iota(), 3);
        // `d` must not mention `x`.
        let d = subst_term(&g.term(&iota(), 3), &x, &Term::constant("k", iota())).unwrap();
        let lhs = subst_term(&subst_term(&t, &x, &c).unwrap(), &y, &d).unwrap();
        let rhs = subst_term(
            &subst_term(&t, &y, &d).unwrap(),
            &x,
            &subst_term(&c, &y, &d).unwrap(),
        )
        .unwrap();
        prop_assert!(lhs.alpha_eq(&rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn beta_preserves_typing(seed in any::<u64>()) {
        let (ty, t) = sample(seed);
        let n = beta_normalize(&t);
        prop_assert_eq!(type_of(&n).unwrap(), ty);
        prop_assert!(is_beta_normal(&n));
        prop_assert!(beta_normalize(&n).alpha_eq(&n));
        prop_assert!(n.free_vars().is_subset(&t.free_vars()));
    }

    #[test]
    fn beta_redex_is_substitution(seed in any::<u64>()) {
        let (_, t) = sample(seed);
        let mut g = Gen::new(seed ^ 0xbe7a);
        let c = g.term(&iota(), 3);
        let x = Var::new("x", iota());
        let redex = Term::app(Term::abs(x.clone(), t.clone()), c.clone());
        let direct = beta_normalize(&subst_term(&t, &x, &c).unwrap());
        prop_assert!(beta_normalize(&redex).alpha_eq(&direct));
    }

    #[test]
    fn alpha_canonicalization_is_idempotent(seed in any::<u64>()) {
        let (_, t) = sample(seed);
        let c = t.canonicalize();
        prop_assert!(c.alpha_eq(&t));
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert_eq!(c.canonical(), t.canonical());
    }
}
