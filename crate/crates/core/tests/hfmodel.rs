mod common;

use std::collections::BTreeSet;

use common::tiers::naive_tiers;

use gst_core::hfmodel::*;

fn model(depth: u64) -> Model {
    zfplus_model(depth, DEFAULT_MAX_SET_SIZE).unwrap()
}

#[test]
fn tiers_agree_with_the_naive_construction() {
    for depth in 1..=3 {
        let m = model(depth);
        let naive = naive_tiers(depth);
        assert_eq!(m.state.tiers.len(), naive.len());
        for (a, b) in m.state.tiers.iter().zip(&naive) {
            let a: BTreeSet<HfValue> = a.members().iter().cloned().collect();
            assert_eq!(&a, b, "depth {depth}");
        }
    }
}

#[test]
fn intro_rules_hold_at_every_depth() {
    for depth in 1..=3 {
        let r = model(depth).state.check_intro_rules().unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.zero > 0 && r.succ1 > 0 && r.succ2 > 0);
    }
}

#[test]
fn tiers_are_monotone_and_tagged() {
    let m = model(3);
    for w in m.state.tiers.windows(2) {
        assert!(w[0].is_subset(&w[1]));
    }
    for t in &m.state.tiers {
        for v in t.members() {
            assert!(m.state.table.components.contains_key(&v.tag().unwrap()));
        }
    }
}

#[test]
fn exclusions_are_honoured() {
    let m = model(3);
    assert!(m.state.excluded_violations(SET).is_empty());
    assert!(m.state.excluded_violations(FUN).is_empty());
    for v in m.state.domain() {
        if v.has_tag(SET) || v.has_tag(FUN) {
            let inner = v.payload().unwrap();
            let flat: Vec<&HfValue> = inner
                .members()
                .iter()
                .flat_map(|x| match x.as_pair() {
                    Some((a, b)) => vec![a, b],
                    None => vec![x],
                })
                .collect();
            assert!(!flat.contains(&&m.bullet), "{v}");
        }
    }
    for v in m.state.domain().iter().filter(|v| v.has_tag(SET)) {
        assert!(!m.excluded(SET, v));
    }
}

#[test]
fn tag_map_examples() {
    assert_eq!(tag_map(SET, &[]), HfValue::empty());
    let a = HfValue::FinOrd(1);
    let b = HfValue::FinOrd(2);
    assert_eq!(
        tag_map(7, &[a.clone(), b.clone()]),
        HfValue::set([HfValue::tagged(7, a), HfValue::tagged(7, b)])
    );
    let five: Vec<HfValue> = (0..5).map(|n| HfValue::set([HfValue::FinOrd(n)])).collect();
    assert_eq!(tag_map(ORD, &five).len(), 5);
}

#[test]
fn zero_tiers() {
    let m = model(1);
    assert!(m.state.tiers[0].members().iter().all(|v| !v.has_tag(SET)));
    let only_exc = build_tiers(&[mexception()], &[], 2, DEFAULT_MAX_SET_SIZE).unwrap();
    assert_eq!(only_exc.tiers[0], HfValue::set([HfValue::tagged(EXC, HfValue::FinOrd(0))]));
    assert_eq!(only_exc.tiers[1], only_exc.tiers[0]);
    let table = TagTable::new(&[mexception()], &[], DEFAULT_MAX_SET_SIZE).unwrap();
    let prev = HfValue::set([HfValue::FinOrd(3)]);
    assert_eq!(tier_succ(&table, 4, &prev).unwrap(), prev);
}

#[test]
fn size_guard_trips() {
    let e = zfplus_model(5, DEFAULT_MAX_SET_SIZE).unwrap_err();
    assert!(matches!(e, ModelError::SizeGuard { .. }), "{e}");
    assert!(zfplus_model(3, 30).is_err());
}

#[test]
fn gzf_denotations() {
    let m = model(3);
    let Denotation::Value(empty) = m.denotation("∅̄").unwrap() else { panic!() };
    assert_eq!(empty, HfValue::tagged(SET, HfValue::empty()));
    let ord0 = HfValue::tagged(ORD, HfValue::FinOrd(0));
    let Denotation::Rel(elem) = m.denotation("∈̄").unwrap() else { panic!() };
    assert!(!elem(&m, &empty, &ord0));
    let Denotation::Op1(pow) = m.denotation("𝒫̄").unwrap() else { panic!() };
    assert_eq!(pow(&m, &ord0).unwrap(), m.bullet);
    let p = pow(&m, &empty).unwrap();
    assert_eq!(p, HfValue::tagged(SET, HfValue::set([empty.clone()])));
    let Denotation::Op1(succ) = m.denotation("mSucc").unwrap() else { panic!() };
    assert!(elem(&m, &empty, &succ(&m, &empty).unwrap()));
    for name in Model::CONSTANTS {
        assert!(m.denotation(name).is_some(), "{name}");
    }
}

#[test]
fn model_membership_is_the_limit_of_the_tiers() {
    let deep = model(3);
    let shallow = model(2);
    for v in deep.state.domain() {
        assert!(shallow.in_m(&v), "{v}");
    }
    let stray = HfValue::tagged(SET, HfValue::set([deep.bullet.clone()]));
    assert!(!deep.in_m(&stray));
    assert!(!deep.in_m(&HfValue::FinOrd(0)));
}

#[test]
fn dump_is_deterministic() {
    let a = serde_json::to_string(&model(3).state.dump()).unwrap();
    let b = serde_json::to_string(&model(3).state.dump()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"size\":36"));
}
