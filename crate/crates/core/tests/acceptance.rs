//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use common::{fo, terms, tiers::naive_tiers, zfplus};
use gst_core::checker::examples::{eval_surface, example_env, run_examples};
use gst_core::checker::{check_items, infinite_mention, zfplus_items, Bounds, Env, Evaluator, Scope, Verdict};
use gst_core::combine::{cargo_ax, mk_gst, zfplus_spec, OtherwisePolicy};
use gst_core::hfmodel::{zfplus_model, HfValue, DEFAULT_MAX_SET_SIZE, FUN};
use gst_core::kernel::subst::is_beta_normal;
use gst_core::kernel::{beta_normalize, subst_term, type_of, Term, Var};
use gst_core::registry::{builtin_catalogue, orphans, parse_class_file, print_class_file, ClassFile};
use gst_core::softtypes::{derived_rules, soft_context};

type Outcome = Result<String, String>;

const ROUND_TRIP_SECONDS: f64 = 1.0;
const SOUNDNESS_SECONDS: f64 = 60.0;
const KERNEL_TERMS: u64 = 1000;
const KERNEL_DEPTH: usize = 6;
const FO_FORMULAS: u64 = 500;
const FO_DOMAIN: usize = 6;
const EXAMPLE_SIZE: u64 = 8;
const MODEL_DEPTH: u64 = 3;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let cat = builtin_catalogue();
    let same = |a: &[Term], b: &[Term]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y));
    for f in &cat.features {
        let c = cat.class(&f.class).map_err(|e| e.to_string())?;
        let file = ClassFile {
            class: c.clone(),
            feature: Some(f.clone()),
        };
        let sig = cat.signature_for(&c.name).map_err(|e| e.to_string())?;
        let text = print_class_file(&file, &sig);
        let back = parse_class_file(&text, &c.name, cat).map_err(|e| format!("{}: {e}", c.name))?;
        let b = &back.class;
        let ok = b.deps == c.deps
            && b.params == c.params
            && same(&b.axioms, &c.axioms)
            && same(&b.defs, &c.defs)
            && same(&b.lemmas, &c.lemmas);
        ensure(ok, || format!("{} does not survive printing", c.name))?;
        let o = orphans(c, cat);
        ensure(o.is_empty(), || format!("{} has orphans {o:?}", c.name))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < ROUND_TRIP_SECONDS, || format!("took {secs:.2}s"))?;
    Ok(format!("{} features, {secs:.3}s", cat.features.len()))
}

fn generator() -> Outcome {
    let cat = builtin_catalogue();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::SoftTyping).map_err(|e| e.to_string())?;
    let counts = ["otherwise", "disjoint", "cover", "admit", "restrict"].map(|l| g.count(l));
    let shape = [counts[0], counts[1], counts[2], counts[3] + counts[4], g.defs.len()];
    ensure(shape == [9, 6, 1, 8, 4], || format!("shape {shape:?}"))?;
    let expected = zfplus::fixture();
    let got: Vec<_> = g.axioms.iter().chain(&g.defs).collect();
    ensure(got.len() == expected.len(), || "fixture length".into())?;
    for (i, (l, (label, t))) in got.iter().zip(&expected).enumerate() {
        ensure(l.provenance.label() == label && l.formula.alpha_eq(t), || {
            format!("entry {}: {} vs {t}", i + 1, l.formula)
        })?;
    }
    let sig = zfplus::zf_sig();
    let dom = zfplus::read(&sig, "(∀ (b) (→ (¬ (: b Fun)) (= (dom b) •)))");
    ensure(g.axioms.iter().any(|l| l.formula.alpha_eq(&dom)), || "dom otherwise axiom".into())?;
    let gzf = cat.feature("GZF").map_err(|e| e.to_string())?;
    let exc = cat.feature("Exc").map_err(|e| e.to_string())?;
    let [admit, restrict] = cargo_ax(cat, gzf, &[gzf, exc], &[exc]).map_err(|e| e.to_string())?;
    ensure(
        admit.alpha_eq(&zfplus::read(&sig, "(⊑ Set SetMem)"))
            && restrict.alpha_eq(&zfplus::read(&sig, "(= (⊓ Exc SetMem) ⊥)")),
        || format!("cargo axioms {admit}, {restrict}"),
    )?;
    Ok(format!("{} axioms + {} defs match the enumeration", g.axioms.len(), g.defs.len()))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let items = zfplus_items(builtin_catalogue()).map_err(|e| e.to_string())?;
    let model = Arc::new(zfplus_model(MODEL_DEPTH, DEFAULT_MAX_SET_SIZE).map_err(|e| e.to_string())?);
    let env = Env::from_model(model, Bounds::default(), 0);
    let report = check_items(&env, &items);
    let mut bad = Vec::new();
    for (item, r) in items.iter().zip(&report.results) {
        let infinite = item.source.as_ref().and_then(infinite_mention).or_else(|| infinite_mention(&item.formula));
        let want = if infinite.is_some() { Verdict::UncheckedInfinite } else { Verdict::Holds };
        if r.verdict != want {
            bad.push(format!("{} is {}", r.provenance, r.verdict.as_str()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let s = &report.summary;
    let counts = format!(
        "{} holds, {} fails, {} unchecked-infinite, {} unchecked-budget in {secs:.1}s",
        s.holds, s.fails, s.unchecked_infinite, s.unchecked_budget
    );
    ensure(bad.is_empty(), || format!("{counts}; {}", bad.join("; ")))?;
    ensure(secs < SOUNDNESS_SECONDS, || counts.clone())?;
    Ok(counts)
}

fn examples() -> Outcome {
    let report = run_examples(EXAMPLE_SIZE);
    if let Some(r) = report.results.iter().find(|r| !r.ok) {
        return Err(format!("{}: expected {}, got {}", r.name, r.expected, r.actual));
    }
    let (env, sig) = example_env(EXAMPLE_SIZE);
    let ev = Evaluator::new(&env);
    let guard = eval_surface(&env, &sig, "ord-guard").map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for x in env.domain.iter().filter(|x| x.has_tag(FUN)) {
        for y in &env.domain {
            for (a, b) in [(x, y), (y, x)] {
                ensure(!ev.test2(&guard, a, b).map_err(|e| e.to_string())?, || {
                    format!("ordinal branch on ({a}, {b})")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} values exact; {pairs} function-argument pairs avoid the ordinal branch", report.results.len()))
}

fn kernel() -> Outcome {
    let x = Var::new("x", terms::iota());
    let y = Var::new("y", terms::iota());
    for seed in 0..KERNEL_TERMS {
        let (ty, t) = terms::sample(seed);
        let fail = |what: &str| format!("seed {seed}: {what} for {t}");
        ensure(terms::depth(&t) <= KERNEL_DEPTH, || fail("too deep"))?;
        ensure(type_of(&t).ok() == Some(ty.clone()), || fail("ill-typed"))?;
        let mut g = terms::Gen::new(seed ^ 0x5eed);
        let c = g.term(&terms::iota(), 3);
        let d = subst_term(&g.term(&terms::iota(), 3), &x, &Term::constant("k", terms::iota())).map_err(|e| e.to_string())?;
        let s = |a: &Term, v: &Var, b: &Term| subst_term(a, v, b).map_err(|e| e.to_string());
        let lhs = s(&s(&t, &x, &c)?, &y, &d)?;
        let rhs = s(&s(&t, &y, &d)?, &x, &s(&c, &y, &d)?)?;
        ensure(lhs.alpha_eq(&rhs), || fail("substitution lemma"))?;
        ensure(type_of(&s(&t, &x, &c)?).ok() == Some(ty.clone()), || fail("substitution typing"))?;
        let n = beta_normalize(&t);
        ensure(type_of(&n).ok() == Some(ty.clone()) && is_beta_normal(&n), || fail("β"))?;
        let k = t.canonicalize();
        ensure(k.canonicalize() == k && k.alpha_eq(&t), || fail("α-canonical form"))?;
    }
    let ctx = soft_context();
    let rules = derived_rules(&ctx).map_err(|e| e.to_string())?;
    for r in &rules {
        let seq = r.replay(&ctx).map_err(|e| e.to_string())?;
        ensure(seq.alpha_eq(r.sequent()), || format!("{} replays to another sequent", r.name))?;
    }
    Ok(format!("{KERNEL_TERMS} terms, {} derived rules replayed", rules.len()))
}

fn oracles() -> Outcome {
    let mut largest = 0;
    for seed in 0..FO_FORMULAS {
        let w = fo::world(seed);
        largest = largest.max(w.n);
        let want = fo::naive(&w, &w.phi, &mut Vec::new());
        let env = fo::env_of(&w);
        let t = fo::to_term(&w.phi, 0);
        let ev = Evaluator::new(&env);
        let got = ev.holds(&t).map_err(|e| e.to_string())?;
        let refuted = ev.refute(&t, &Scope::default()).map_err(|e| e.to_string())?;
        ensure(got == want && refuted.is_none() == want, || format!("seed {seed}: {t}"))?;
    }
    ensure(largest <= FO_DOMAIN, || format!("domain {largest}"))?;
    for depth in 1..=MODEL_DEPTH {
        let m = zfplus_model(depth, DEFAULT_MAX_SET_SIZE).map_err(|e| e.to_string())?;
        let naive = naive_tiers(depth);
        let built: Vec<BTreeSet<HfValue>> = m.state.tiers.iter().map(|t| t.members().iter().cloned().collect()).collect();
        ensure(built == naive, || format!("tiers differ at depth {depth}"))?;
    }
    Ok(format!("{FO_FORMULAS} formulas over domains ≤ {largest}; tiers agree at depths 1..={MODEL_DEPTH}"))
}

fn intro_rules() -> Outcome {
    let mut checked = 0;
    for depth in 1..=MODEL_DEPTH {
        let m = zfplus_model(depth, DEFAULT_MAX_SET_SIZE).map_err(|e| e.to_string())?;
        let r = m.state.check_intro_rules().map_err(|e| e.to_string())?;
        ensure(r.violations.is_empty(), || r.violations.join("; "))?;
        checked += r.zero + r.succ1 + r.succ2;
    }
    Ok(format!("{checked} rule instances"))
}

fn pipeline(seed: u64) -> Result<String, String> {
    let cat = builtin_catalogue();
    let g = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::SoftTyping).map_err(|e| e.to_string())?;
    let mut out = g.to_axiom_set(cat).map_err(|e| e.to_string())?.to_json();
    let model = Arc::new(zfplus_model(MODEL_DEPTH, DEFAULT_MAX_SET_SIZE).map_err(|e| e.to_string())?);
    out += &serde_json::to_string(&model.state.dump()).map_err(|e| e.to_string())?;
    let env = Env::from_model(model, Bounds::default(), seed);
    out += &check_items(&env, &zfplus_items(cat).map_err(|e| e.to_string())?).to_json();
    out += &run_examples(EXAMPLE_SIZE).to_json();
    Ok(out)
}

fn determinism() -> Outcome {
    let a = pipeline(0)?;
    let b = pipeline(0)?;
    ensure(a == b, || "two runs differ".into())?;
    Ok(format!("{} bytes identical", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("feature files round-trip", round_trip),
        ("generator output", generator),
        ("model soundness", soundness),
        ("worked examples", examples),
        ("kernel properties", kernel),
        ("oracle equivalence", oracles),
        ("tier intro rules", intro_rules),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
