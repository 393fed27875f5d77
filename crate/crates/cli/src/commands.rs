use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use gst_core::checker::examples::{run_examples, ExampleReport};
use gst_core::checker::{check_items, feature_items, gst_items, zfplus_env, Bounds, CheckError, CheckReport};
use gst_core::combine::{load_axiom_set, mk_gst, parse_spec, CombineError, OtherwisePolicy};
use gst_core::hfmodel::{max_set_size_from_env, zfplus_model, ModelError};
use gst_core::morphisms::{parse_morphism, resp_thms, translate_axioms, zfplus_map, MorphismError, ParameterMorphism};
use gst_core::registry::builtin_catalogue;
use gst_core::softtypes::{resugar, soft_signature};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Combine { path: String, source: CombineError },
    #[error("{path}: {source}")]
    Morphism { path: String, source: MorphismError },
    #[error(transparent)]
    Translate(#[from] MorphismError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How a command that ran to completion went.
pub enum Outcome {
    Clean,
    Failures,
}

type CliResult = Result<Outcome, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let res = match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|source| CliError::Io {
        path: out.map_or("<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

fn morphism(path: Option<&Path>) -> Result<ParameterMorphism, CliError> {
    match path {
        None => Ok(zfplus_map()),
        Some(p) => parse_morphism(&read(p)?).map_err(|source| CliError::Morphism {
            path: p.display().to_string(),
            source,
        }),
    }
}

pub fn combine(spec: &Path, out: Option<&Path>, policy: OtherwisePolicy) -> CliResult {
    let cat = builtin_catalogue();
    let at = |source| CliError::Combine {
        path: spec.display().to_string(),
        source,
    };
    let parsed = parse_spec(&read(spec)?, cat).map_err(at)?;
    let gst = mk_gst(cat, &parsed, policy).map_err(at)?;
    emit(out, &gst.to_axiom_set(cat).map_err(at)?.to_json())?;

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &gst.axioms {
        *counts.entry(l.provenance.label()).or_default() += 1;
    }
    let shown: Vec<String> = ["otherwise", "disjoint", "cover", "admit", "restrict"]
        .iter()
        .map(|k| format!("{k} {}", counts.get(k).copied().unwrap_or(0)))
        .collect();
    eprintln!(
        "{}: {} axioms ({}), {} defs",
        gst.name,
        gst.axioms.len(),
        shown.join(", "),
        gst.defs.len()
    );
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct FullReport<'a> {
    check: &'a CheckReport,
    examples: &'a ExampleReport,
}

pub fn check(
    axioms: &Path,
    depth: u64,
    bounds: Bounds,
    seed: u64,
    morphism_file: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let cat = builtin_catalogue();
    let gst = load_axiom_set(&read(axioms)?, cat).map_err(|source| CliError::Combine {
        path: axioms.display().to_string(),
        source,
    })?;
    let eta = morphism(morphism_file)?;
    let mut items = gst_items(cat, &gst, &eta)?;
    let features: Vec<&str> = gst.deps.iter().map(String::as_str).collect();
    items.extend(feature_items(cat, &features, &eta)?);

    let env = zfplus_env(depth, max_set_size_from_env(), bounds, seed)?;
    let report = check_items(&env, &items);
    let examples = run_examples(8);
    let mut json = serde_json::to_string_pretty(&FullReport {
        check: &report,
        examples: &examples,
    })
    .expect("report serializes");
    json.push('\n');
    emit(out, &json)?;

    let s = &report.summary;
    eprintln!(
        "depth {depth}, {} elements: {} holds, {} fails, {} unchecked-infinite, {} unchecked-budget; examples {}",
        report.domain_size,
        s.holds,
        s.fails,
        s.unchecked_infinite,
        s.unchecked_budget,
        if examples.all_ok() { "ok" } else { "FAILED" },
    );
    for r in report.results_with(gst_core::checker::Verdict::Fails) {
        eprintln!("fails: {} {}", r.provenance, r.axiom);
    }
    if report.has_failures() || !examples.all_ok() {
        Ok(Outcome::Failures)
    } else {
        Ok(Outcome::Clean)
    }
}

pub fn translate(feature: &str, morphism_file: Option<&Path>, out: Option<&Path>) -> CliResult {
    let cat = builtin_catalogue();
    let eta = morphism(morphism_file)?;
    let axioms = translate_axioms(cat, feature, &eta)?;
    let goals = resp_thms(cat, feature, &eta)?;
    // Model constants print as plain atoms once declared at their types.
    let mut sig = soft_signature();
    for (name, ty) in axioms.iter().chain(&goals).flat_map(|t| t.constants()) {
        if !sig.contains(&name) {
            sig.declare(&name, ty).expect("fresh constant");
        }
    }
    let mut text = String::from("; axioms\n");
    for t in &axioms {
        text.push_str(&format!("{}\n", resugar(t, &sig)));
    }
    text.push_str("; respectfulness\n");
    for t in &goals {
        text.push_str(&format!("{}\n", resugar(t, &sig)));
    }
    emit(out, &text)?;
    Ok(Outcome::Clean)
}

pub fn eval_examples(size: u64, out: Option<&Path>) -> CliResult {
    let report = run_examples(size);
    emit(out, &report.to_json())?;
    for r in report.results.iter().filter(|r| !r.ok) {
        eprintln!("mismatch: {}: expected {}, got {}", r.name, r.expected, r.actual);
    }
    Ok(if report.all_ok() { Outcome::Clean } else { Outcome::Failures })
}

pub fn dump_model(depth: u64, out: Option<&Path>) -> CliResult {
    let model = zfplus_model(depth, max_set_size_from_env())?;
    let mut json = serde_json::to_string_pretty(&model.state.dump()).expect("dump serializes");
    json.push('\n');
    emit(out, &json)?;
    Ok(Outcome::Clean)
}
