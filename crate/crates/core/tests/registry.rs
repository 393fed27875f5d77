use std::collections::BTreeMap;
use std::time::Instant;

use gst_core::kernel::build::dest_eq;
use gst_core::kernel::{Term, Type};
use gst_core::registry::{
    builtin_catalogue, builtin_features, instantiate_class, orphans, parse_class_file,
    print_class_file, validate_class, Catalogue, Class, ClassFile, RegistryError,
};

fn same_terms(a: &[Term], b: &[Term]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y))
}

#[test]
fn printing_and_reparsing_is_identity() {
    let start = Instant::now();
    let cat = builtin_catalogue();
    for c in &cat.classes {
        let file = ClassFile {
            class: c.clone(),
            feature: cat.feature_of_class(&c.name).cloned(),
        };
        let sig = cat.signature_for(&c.name).unwrap();
        let text = print_class_file(&file, &sig);
        let back = parse_class_file(&text, &c.name, cat).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back.class.name, c.name);
        assert_eq!(back.class.deps, c.deps);
        assert_eq!(back.class.params, c.params);
        assert!(same_terms(&back.class.defs, &c.defs), "{text}");
        assert!(same_terms(&back.class.axioms, &c.axioms), "{text}");
        assert!(same_terms(&back.class.lemmas, &c.lemmas), "{text}");
        match (&back.feature, &file.feature) {
            (Some(x), Some(y)) => {
                assert_eq!((&x.name, &x.class, &x.default), (&y.name, &y.class, &y.default));
                assert!(x.logo.alpha_eq(&y.logo) && x.cargo.alpha_eq(&y.cargo));
            }
            (None, None) => {}
            _ => panic!("feature lost for {}", c.name),
        }
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn feature_tuples() {
    let fs = builtin_features();
    let names: Vec<&str> = fs.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, ["GZF", "Ordinal", "OrdRec", "Function", "Exc", "OPair"]);
    let show = |i: usize| {
        let f = &fs[i];
        format!("[{}, {}, {}, {}]", f.class, f.logo, f.cargo, f.default)
    };
    assert_eq!(show(0), "[GZF, Set, SetMem, ∘GZF]");
    assert_eq!(show(1), "[Ordinal, Ord, ⊥, ∘Ord]");
    assert_eq!(show(2), "[OrdinalRec, ⊥, ⊥, ∘OrdRec]");
    assert_eq!(show(3), "[Function, Fun, FunMem, ∘Fun]");
    assert_eq!(show(4), "[Exception, Exc, ⊥, ∘Exc]");
    assert_eq!(show(5), "[OPair, Pair, PairMem, ∘Pair]");
}

#[test]
fn class_contents_match_the_catalogue_sources() {
    let cat = builtin_catalogue();
    let count = |n: &str| {
        let c = cat.class(n).unwrap();
        (c.params.len(), c.axioms.len(), c.defs.len())
    };
    assert_eq!(count("GZF"), (9, 13, 4));
    assert_eq!(count("Ordinal"), (6, 10, 1));
    assert_eq!(count("OrdinalRec"), (4, 7, 0));
    assert_eq!(count("Function"), (7, 10, 2));
    assert_eq!(count("Exception"), (3, 0, 0));
    assert_eq!(count("OPair"), (3, 3, 1));
    assert_eq!(count("Tagging"), (0, 2, 3));
    assert_eq!(count("ModelBase"), (2, 2, 8));

    let gzf = cat.class("GZF").unwrap();
    assert_eq!(gzf.axioms[0].to_string(), "⋃ : ((SetOf Set) ⇛ Set)");
    assert_eq!(gzf.axioms[9].to_string(), "∀b. ¬ (b ∈ ∅)");
    let setof = gzf.def_rhs("SetOf").unwrap();
    assert_eq!(setof.to_string(), "λp. λx. (x : Set) ∧ (∀b. (b ∈ x) → (b : p))");
    let exc = cat.class("Exception").unwrap();
    assert!(exc.axioms.is_empty() && exc.defs.is_empty());
}

#[test]
fn dependencies_are_exact() {
    let cat = builtin_catalogue();
    assert_eq!(cat.class("OrdinalRec").unwrap().deps, ["GZF", "Ordinal"]);
    assert_eq!(cat.class("Function").unwrap().deps, ["GZF"]);
    assert_eq!(cat.class("Tagging").unwrap().deps, ["OPair", "OrdRec"]);
    assert_eq!(cat.class("ModelBase").unwrap().deps, ["Tagging", "Function"]);
}

#[test]
fn no_orphan_constants() {
    let cat = builtin_catalogue();
    for c in &cat.classes {
        assert!(orphans(c, cat).is_empty(), "{}: {:?}", c.name, orphans(c, cat));
    }
}

#[test]
fn only_the_successor_axiom_has_a_free_variable() {
    let cat = builtin_catalogue();
    let mut open = Vec::new();
    for c in &cat.classes {
        for a in &c.axioms {
            let fv = a.free_vars();
            if !fv.is_empty() {
                open.push((c.name.clone(), fv.into_iter().map(|v| v.name).collect::<Vec<_>>()));
            }
        }
    }
    assert_eq!(open, vec![("GZF".to_string(), vec!["b".to_string()])]);
}

fn with_params(params: &[(&str, Type)]) -> Class {
    Class {
        name: "Test".into(),
        deps: vec![],
        params: params.iter().map(|(n, t)| (n.to_string(), t.clone())).collect(),
        axioms: vec![],
        defs: vec![],
        lemmas: vec![],
    }
}

#[test]
fn two_type_variables_are_rejected() {
    let cat = Catalogue::new();
    let c = with_params(&[("c1", Type::var("a")), ("c2", Type::var("b"))]);
    let r = validate_class(&c, &cat);
    assert!(r.mentions("multiple tv"), "{r}");
}

#[test]
fn cyclic_definitions_are_reported() {
    let cat = builtin_catalogue();
    let a = Type::var("a");
    let p = Type::pred(a.clone());
    let b = gst_core::kernel::Var::new("b", a.clone());
    let set_mem = Term::constant("SetMem2", p.clone());
    let set_of = Term::constant("SetOf2", p.clone());
    let d1 = gst_core::kernel::build::eq(
        set_mem.clone(),
        Term::abs(b.clone(), Term::app(set_of.clone(), Term::Var(b.clone()))),
    );
    let d2 = gst_core::kernel::build::eq(
        set_of,
        Term::abs(b.clone(), Term::app(set_mem, Term::Var(b))),
    );
    let mut c = with_params(&[("k", a)]);
    c.defs = vec![d1, d2];
    let r = validate_class(&c, cat);
    assert!(r.mentions("cycle: "), "{r}");
}

fn ordinal_bindings() -> BTreeMap<String, Term> {
    let d = Type::Domain(0);
    let cat = builtin_catalogue();
    cat.class("Ordinal")
        .unwrap()
        .params
        .iter()
        .map(|(n, t)| {
            let ty = t.subst(&[("a".to_string(), d.clone())].into_iter().collect());
            (n.clone(), Term::constant(format!("m{n}"), ty))
        })
        .collect()
}

#[test]
fn instantiation_yields_one_obligation_per_axiom() {
    let cat = builtin_catalogue();
    let ord = cat.class("Ordinal").unwrap();
    let inst = instantiate_class(ord, 0, &ordinal_bindings()).unwrap();
    assert_eq!(inst.obligations.len(), 10);
    assert_eq!(inst.defs.len(), 1 + 6);
    for t in inst.obligations.iter().chain(&inst.defs) {
        assert!(t.type_vars().is_empty(), "{t}");
    }
    let (lhs, _) = dest_eq(&inst.defs[1]).unwrap();
    assert_eq!(lhs, &Term::constant("∘Ord", Type::Domain(0)));
}

#[test]
fn empty_parameter_class_instantiates_to_its_axioms() {
    let cat = builtin_catalogue();
    let tagging = cat.class("Tagging").unwrap();
    let inst = instantiate_class(tagging, 1, &BTreeMap::new()).unwrap();
    assert_eq!(inst.obligations.len(), tagging.axioms.len());
    assert_eq!(inst.defs.len(), tagging.defs.len());
}

#[test]
fn bindings_must_be_monomorphic_and_complete() {
    let cat = builtin_catalogue();
    let ord = cat.class("Ordinal").unwrap();
    let mut b = ordinal_bindings();
    b.insert("ω".into(), Term::constant("ω", Type::var("a")));
    assert!(matches!(
        instantiate_class(ord, 0, &b),
        Err(RegistryError::TypeVarInBinding { .. })
    ));
    let mut b = ordinal_bindings();
    b.remove("succ");
    assert!(matches!(
        instantiate_class(ord, 0, &b),
        Err(RegistryError::MissingBinding(n)) if n == "succ"
    ));
}

#[test]
fn malformed_files_report_lines() {
    let cat = builtin_catalogue();
    let src = "class: Broken\nconsts:\n  (k α)\naxioms:\n  (∀ (x) (k x))\n";
    let err = parse_class_file(src, "broken.gst", cat).unwrap_err();
    assert!(err.to_string().starts_with("broken.gst: line 5"), "{err}");
    let err = parse_class_file("class: X\nbogus: 1\n", "x.gst", cat).unwrap_err();
    assert!(err.to_string().contains("unknown section"), "{err}");
}
