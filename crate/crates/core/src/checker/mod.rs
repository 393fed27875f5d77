//! Bounded semantic checking of formulas over a finite model.

mod env;
mod eval;
pub mod examples;
mod value;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combine::{mk_gst, zfplus_spec, CombineError, GstClass, OtherwisePolicy};
use crate::hfmodel::{zfplus_model, Model, ModelError};
use crate::kernel::Term;
use crate::morphisms::{resp_thms, translate_axioms, translate_gst, MorphismError, ParameterMorphism};
use crate::registry::Catalogue;

pub use env::{is_individual, sort_of, Bounds, Candidates, Env, Sort};
pub use eval::{close, Evaluator, Witness};
pub use value::{Builtin, FnVal, NativeFn, Scope, Val};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("'{0}' needs a limit tier")]
    Unmaterialized(String),
    #[error("uninterpreted {0}")]
    Unbound(String),
    #[error("ill-typed evaluation: {0}")]
    Type(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type EResult<T> = Result<T, EvalError>;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Constants whose meaning lives beyond every finite tier.
pub const INFINITE_CONSTANTS: &[&str] = &[
    "Inf", "ω", "Limit", "Tier_limit", "mInf", "mω", "mSetOrd",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    UncheckedInfinite,
    UncheckedBudget,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::UncheckedInfinite => "unchecked-infinite",
            Verdict::UncheckedBudget => "unchecked-budget",
        }
    }
}

/// A formula to check. `source` is the formula before translation, used
/// only to classify it.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub provenance: String,
    pub formula: Term,
    pub source: Option<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub instances: u64,
    pub enumeration: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub axiom: String,
    pub provenance: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Binding>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub stats: Stats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub holds: usize,
    pub fails: usize,
    pub unchecked_infinite: usize,
    pub unchecked_budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub domain_size: usize,
    pub seed: u64,
    pub bounds: Bounds,
    pub summary: Summary,
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn has_failures(&self) -> bool {
        self.summary.fails > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn results_with(&self, v: Verdict) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(move |r| r.verdict == v)
    }
}

/// The infinite constant a formula mentions, if any.
pub fn infinite_mention(t: &Term) -> Option<&'static str> {
    INFINITE_CONSTANTS.iter().copied().find(|c| t.mentions_const(c))
}

/// Checks one closed-up formula.
pub fn check_item(env: &Env, item: &CheckItem) -> CheckResult {
    let mut out = CheckResult {
        axiom: item.formula.to_string(),
        provenance: item.provenance.clone(),
        verdict: Verdict::Holds,
        witness: None,
        reason: None,
        stats: Stats {
            instances: 0,
            enumeration: "exhaustive",
        },
    };
    let mention = item
        .source
        .as_ref()
        .and_then(infinite_mention)
        .or_else(|| infinite_mention(&item.formula));
    if let Some(c) = mention {
        out.verdict = Verdict::UncheckedInfinite;
        out.reason = Some(format!("mentions {c}"));
        return out;
    }
    let ev = Evaluator::new(env);
    let res = ev.refute(&close(&item.formula), &Scope::default());
    out.stats.instances = ev.steps();
    if ev.sampled() {
        out.stats.enumeration = "sampled";
    }
    match res {
        Ok(None) => {}
        Ok(Some(w)) => {
            out.verdict = Verdict::Fails;
            out.witness = Some(
                w.into_iter()
                    .map(|(var, v)| Binding {
                        var,
                        value: v.to_string(),
                    })
                    .collect(),
            );
        }
        Err(EvalError::Unmaterialized(c)) => {
            out.verdict = Verdict::UncheckedInfinite;
            out.reason = Some(format!("mentions {c}"));
        }
        Err(e @ (EvalError::Budget(_) | EvalError::Model(_))) => {
            out.verdict = Verdict::UncheckedBudget;
            out.reason = Some(e.to_string());
        }
        Err(e) => {
            out.verdict = Verdict::Fails;
            out.reason = Some(e.to_string());
        }
    }
    out
}

/// Checks every item, in parallel; results keep the input order.
pub fn check_items(env: &Env, items: &[CheckItem]) -> CheckReport {
    let results: Vec<CheckResult> = items.par_iter().map(|i| check_item(env, i)).collect();
    let mut summary = Summary::default();
    for r in &results {
        match r.verdict {
            Verdict::Holds => summary.holds += 1,
            Verdict::Fails => summary.fails += 1,
            Verdict::UncheckedInfinite => summary.unchecked_infinite += 1,
            Verdict::UncheckedBudget => summary.unchecked_budget += 1,
        }
    }
    CheckReport {
        domain_size: env.domain.len(),
        seed: env.seed,
        bounds: env.bounds,
        summary,
        results,
    }
}

/// A generated class translated by `eta`, axioms then definitions.
pub fn gst_items(cat: &Catalogue, gst: &GstClass, eta: &ParameterMorphism) -> Result<Vec<CheckItem>, CheckError> {
    let translated = translate_gst(cat, gst, eta)?;
    Ok(gst
        .axioms
        .iter()
        .chain(&gst.defs)
        .zip(translated)
        .map(|(src, l)| CheckItem {
            provenance: l.provenance.to_string(),
            formula: l.formula,
            source: Some(src.formula.clone()),
        })
        .collect())
}

/// The translated axioms of each feature's class and its respectfulness
/// goals.
pub fn feature_items(
    cat: &Catalogue,
    features: &[&str],
    eta: &ParameterMorphism,
) -> Result<Vec<CheckItem>, CheckError> {
    let mut out = Vec::new();
    for f in features {
        let class = cat.class(f).map_err(MorphismError::from)?;
        let translated = translate_axioms(cat, f, eta)?;
        for (i, (src, t)) in class.axioms.iter().zip(translated).enumerate() {
            out.push(CheckItem {
                provenance: format!("axiom {f} {}", i + 1),
                formula: t,
                source: Some(src.clone()),
            });
        }
        for t in resp_thms(cat, f, eta)? {
            out.push(CheckItem {
                provenance: format!("resp {f}"),
                formula: t,
                source: None,
            });
        }
    }
    Ok(out)
}

pub const ZFPLUS_FEATURES: [&str; 4] = ["GZF", "Ordinal", "Function", "Exc"];

/// The generated ZF⁺ axioms and the translated feature axioms.
pub fn zfplus_items(cat: &Catalogue) -> Result<Vec<CheckItem>, CheckError> {
    let eta = crate::morphisms::zfplus_map();
    let gst = mk_gst(cat, &zfplus_spec(), OtherwisePolicy::SoftTyping)?;
    let mut items = gst_items(cat, &gst, &eta)?;
    items.extend(feature_items(cat, &ZFPLUS_FEATURES, &eta)?);
    Ok(items)
}

/// The model environment for ZF⁺ at `depth`.
pub fn zfplus_env(depth: u64, max_set_size: usize, bounds: Bounds, seed: u64) -> Result<Env, CheckError> {
    let model: Arc<Model> = Arc::new(zfplus_model(depth, max_set_size)?);
    Ok(Env::from_model(model, bounds, seed))
}
