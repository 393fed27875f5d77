mod common;

use common::zfplus::{fixture, read, zf_sig};
use gst_core::combine::{
    cargo_ax, cover, disjoint, load_axiom_set, mk_gst, otherwise, parse_spec, typ_list,
    zfplus_spec, CombineError, OtherwisePolicy,
};
use gst_core::kernel::{subst_type_in_term, type_of, Term, Type, TypeSubst};
use gst_core::registry::{builtin_catalogue, BUILTIN_SOURCES};

#[test]
fn zfplus_matches_the_hand_enumeration() {
    let cat = builtin_catalogue();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::default()).unwrap();
    let expected = fixture();
    let got: Vec<(String, &Term)> = g
        .axioms
        .iter()
        .chain(&g.defs)
        .map(|l| (l.provenance.label().to_owned(), &l.formula))
        .collect();
    assert_eq!(got.len(), expected.len());
    for (i, ((gl, gt), (el, et))) in got.iter().zip(&expected).enumerate() {
        assert_eq!(gl, el, "label of entry {}", i + 1);
        assert!(gt.alpha_eq(et), "entry {}: got {gt}, expected {et}", i + 1);
    }
    assert_eq!(
        ["otherwise", "disjoint", "cover", "admit", "restrict"].map(|l| g.count(l)),
        [9, 6, 1, 4, 4]
    );
    assert_eq!(g.defs.len(), 4);
    assert_eq!(g.deps, ["GZF", "Ordinal", "Function", "Exception"]);
}

#[test]
fn stated_outputs_verbatim() {
    let cat = builtin_catalogue();
    let sig = zf_sig();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::default()).unwrap();
    let dom = read(&sig, "(∀ (b) (→ (¬ (: b Fun)) (= (dom b) •)))");
    assert!(g.axioms.iter().any(|l| l.formula.alpha_eq(&dom)));

    let gzf = cat.feature("GZF").unwrap();
    let exc = cat.feature("Exc").unwrap();
    let [admit, restrict] = cargo_ax(cat, gzf, &[gzf, exc], &[exc]).unwrap();
    assert!(admit.alpha_eq(&read(&sig, "(⊑ Set SetMem)")));
    assert!(restrict.alpha_eq(&read(&sig, "(= (⊓ Exc SetMem) ⊥)")));
    assert_eq!(admit.to_string(), "Set ⊑ SetMem");
}

#[test]
fn typ_list_examples() {
    let sig = zf_sig();
    let a = typ_list(&read(&sig, "(⇛ Set (SetOf Set))"));
    assert_eq!(a.len(), 1);
    assert_eq!((a[0].0.name.as_str(), a[0].1.to_string().as_str()), ("b1", "Set"));

    let b = typ_list(&read(&sig, "(Π (x : Set) (⇛ (ReplPred x) Set))"));
    let shown: Vec<String> = b.iter().map(|(v, p)| format!("{} : {p}", v.name)).collect();
    assert_eq!(shown, ["b1 : Set", "b2 : ReplPred b1"]);

    assert!(typ_list(&read(&sig, "Set")).is_empty());
}

#[test]
fn otherwise_examples() {
    let sig = zf_sig();
    let bullet = read(&sig, "•");
    let pow = read(&sig, "𝒫");
    let args = typ_list(&read(&sig, "(⇛ Set (SetOf Set))"));
    let got = otherwise(&pow, &args, &bullet).unwrap();
    assert!(got.alpha_eq(&read(&sig, "(∀ (b) (→ (¬ (: b Set)) (= (𝒫 b) •)))")));
    assert!(matches!(otherwise(&pow, &[], &bullet), Err(CombineError::EmptyArgList)));
}

#[test]
fn cover_and_disjoint_edges() {
    let sig = zf_sig();
    let logos: Vec<Term> = ["Set", "Ord", "Fun", "Exc"].iter().map(|s| read(&sig, s)).collect();
    assert_eq!(disjoint(&logos).len(), 6);
    assert!(disjoint(&logos[..1]).is_empty());
    let one = cover(&logos[..1]).unwrap();
    assert!(one.alpha_eq(&read(&sig, "(= Set ⊤)")));
    assert!(matches!(cover(&[]), Err(CombineError::EmptyCover)));
}

#[test]
fn all_otherwise_counts() {
    let cat = builtin_catalogue();
    let sig = zf_sig();
    let bullet = read(&sig, "•");
    let count = |f: &str| {
        gst_core::combine::all_otherwise(cat, cat.feature(f).unwrap(), &bullet, OtherwisePolicy::default())
            .unwrap()
            .into_iter()
            .map(|(n, _)| n)
            .collect::<Vec<_>>()
    };
    assert_eq!(count("Function"), ["mkFun", "dom", "ran", "⇸"]);
    assert!(count("Exc").is_empty());
    assert_eq!(count("Ordinal"), ["succ"]);
    assert_eq!(count("GZF"), ["⋃", "𝒫", "Succ", "Repl"]);
}

/// Counts `(: name (⇛ …` and `(: name (Π …` lines in the raw catalogue text.
fn textual_typings(class: &str) -> usize {
    let (_, src) = BUILTIN_SOURCES
        .iter()
        .find(|(_, s)| s.lines().any(|l| l.trim() == format!("class: {class}")))
        .unwrap();
    let mut in_axioms = false;
    let mut n = 0;
    for line in src.lines() {
        if !line.starts_with(' ') && !line.is_empty() {
            in_axioms = line.starts_with("axioms:");
            continue;
        }
        let l = line.trim();
        if in_axioms && l.starts_with("(: ") {
            let rest = l[3..].split_once(' ').map(|(_, r)| r).unwrap_or("");
            if rest.starts_with("(⇛") || rest.starts_with("(Π") {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn shape_for_every_subset_of_features() {
    let cat = builtin_catalogue();
    let names = ["GZF", "Ordinal", "Function", "Exc", "OPair"];
    let sig = cat
        .signature_for_deps(&["GZF", "Ordinal", "Function", "Exception", "OPair"].map(String::from))
        .unwrap();
    let bullet = read(&sig, "•");
    for mask in 1u32..(1 << names.len()) {
        let chosen: Vec<&str> = (0..names.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| names[i])
            .collect();
        if chosen.contains(&"Function") && !chosen.contains(&"GZF") {
            continue;
        }
        let mut spec = zfplus_spec();
        spec.configs = chosen
            .iter()
            .map(|f| gst_core::registry::FeatureConfig {
                feature: f.to_string(),
                default_value: bullet.clone(),
                blacklist: vec![],
            })
            .collect();
        let g = mk_gst(cat, &spec, OtherwisePolicy::default()).unwrap();
        let n = chosen.len();
        let typings: usize = chosen
            .iter()
            .map(|f| textual_typings(&cat.feature(f).unwrap().class))
            .sum();
        assert_eq!(g.count("disjoint"), n * (n - 1) / 2);
        assert_eq!(g.count("cover"), 1);
        assert_eq!(g.count("admit") + g.count("restrict"), 2 * n);
        assert_eq!(g.count("otherwise"), typings, "{chosen:?}");
    }
}

#[test]
fn generated_axioms_typecheck_polymorphic_and_at_a_domain() {
    let cat = builtin_catalogue();
    let sig = zf_sig();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::default()).unwrap();
    let s = TypeSubst::from([("a".to_string(), Type::Domain(0))]);
    for l in g.axioms.iter().chain(&g.defs) {
        gst_core::kernel::check_formula(&l.formula, &sig).unwrap();
        let mono = subst_type_in_term(&l.formula, &s);
        assert_eq!(type_of(&mono).unwrap(), Type::Bool);
        assert!(mono.type_vars().is_empty());
    }
}

#[test]
fn never_policy_drops_otherwise_axioms() {
    let cat = builtin_catalogue();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::Never).unwrap();
    assert_eq!(g.count("otherwise"), 0);
    assert_eq!(g.axioms.len(), 15);
}

#[test]
fn json_round_trip_is_stable() {
    let cat = builtin_catalogue();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::default()).unwrap();
    let json = g.to_axiom_set(cat).unwrap().to_json();
    let back = load_axiom_set(&json, cat).unwrap();
    for (a, b) in g.axioms.iter().zip(&back.axioms) {
        assert!(a.formula.alpha_eq(&b.formula), "{} vs {}", a.formula, b.formula);
        assert_eq!(a.provenance, b.provenance);
    }
    assert_eq!(back.to_axiom_set(cat).unwrap().to_json(), json);
    let again = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::default()).unwrap();
    assert_eq!(again.to_axiom_set(cat).unwrap().to_json(), json);
}

#[test]
fn spec_files() {
    let cat = builtin_catalogue();
    let src = r#"[
        {"feature": "GZF", "default": "•", "blacklist": ["Exc"]},
        {"feature": "Ordinal", "default": "•"},
        {"feature": "Function", "default": "•", "blacklist": ["Exc"]},
        {"feature": "Exc", "default": "•"}
    ]"#;
    let spec = parse_spec(src, cat).unwrap();
    let g = mk_gst(cat, &spec, OtherwisePolicy::default()).unwrap();
    assert_eq!((g.axioms.len(), g.defs.len()), (24, 4));

    assert!(matches!(parse_spec("[]", cat), Err(CombineError::EmptySpec)));
    let err = parse_spec(r#"[{"feature": "Nope", "default": "•"}]"#, cat).unwrap_err();
    assert!(err.to_string().contains("Nope"), "{err}");
    let undeclared = r#"[{"feature": "GZF", "default": "•"}]"#;
    let err = parse_spec(undeclared, cat).unwrap_err();
    assert!(err.to_string().contains("'•' is not a declared constant"), "{err}");
    let bad = r#"[{"feature": "GZF", "default": "∅", "blacklist": ["Exc"]}]"#;
    let spec = parse_spec(bad, cat).unwrap();
    assert!(matches!(
        mk_gst(cat, &spec, OtherwisePolicy::default()),
        Err(CombineError::UnknownBlacklist { .. })
    ));
    let dup = r#"[{"feature": "GZF", "default": "∅"}, {"feature": "GZF", "default": "∅"}]"#;
    let spec = parse_spec(dup, cat).unwrap();
    assert!(matches!(
        mk_gst(cat, &spec, OtherwisePolicy::default()),
        Err(CombineError::DuplicateFeature(_))
    ));
}

#[test]
fn single_feature_spec() {
    let cat = builtin_catalogue();
    let mut spec = zfplus_spec();
    spec.configs.truncate(1);
    spec.configs[0].blacklist.clear();
    let g = mk_gst(cat, &spec, OtherwisePolicy::default()).unwrap();
    assert_eq!(g.axioms.len(), 4 + 1 + 2);
    let sig = zf_sig();
    assert!(g.axioms[5].formula.alpha_eq(&read(&sig, "(⊑ Set SetMem)")));
    assert!(g.axioms[6].formula.alpha_eq(&read(&sig, "(= (⊓ ⊥ SetMem) ⊥)")));
}
