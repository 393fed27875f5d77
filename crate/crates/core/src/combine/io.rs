//! JSON forms of specs and generated axiom sets. Formulas are stored as
//! surface S-expressions.

use serde::{Deserialize, Serialize};

use crate::kernel::sexp::{parse, ParseError};
use crate::kernel::Signature;
use crate::registry::{Catalogue, FeatureConfig};
use crate::softtypes::notation::{resugar, Elaborator};

use super::{CResult, CombineError, GstClass, GstSpec, Labeled, Provenance};

#[derive(Deserialize)]
struct RawConfig {
    feature: String,
    default: String,
    #[serde(default)]
    blacklist: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSpec {
    Bare(Vec<RawConfig>),
    Named { name: String, configs: Vec<RawConfig> },
}

fn parse_with(sig: &Signature, src: &str, context: String) -> CResult<crate::kernel::Term> {
    let wrap = |source| CombineError::Parse {
        context: context.clone(),
        source,
    };
    let e = parse(src).map_err(wrap)?;
    let t = Elaborator::new(sig).term(&e, 1).map_err(wrap)?;
    if let Some(v) = t.free_vars().into_iter().next() {
        return Err(wrap(ParseError::new(1, format!("'{}' is not a declared constant", v.name))));
    }
    Ok(t)
}

/// Reads a spec: a JSON list of `{feature, default, blacklist}` objects,
/// or `{name, configs}` with such a list.
pub fn parse_spec(json: &str, cat: &Catalogue) -> CResult<GstSpec> {
    let (name, raw) = match serde_json::from_str::<RawSpec>(json)? {
        RawSpec::Bare(c) => ("GST".to_owned(), c),
        RawSpec::Named { name, configs } => (name, configs),
    };
    if raw.is_empty() {
        return Err(CombineError::EmptySpec);
    }
    let classes = raw
        .iter()
        .map(|r| Ok(cat.feature(&r.feature)?.class.clone()))
        .collect::<CResult<Vec<_>>>()?;
    let sig = cat.signature_for_deps(&classes)?;
    let configs = raw
        .into_iter()
        .map(|r| {
            let default_value = parse_with(&sig, &r.default, format!("default of {}", r.feature))?;
            Ok(FeatureConfig {
                feature: r.feature,
                default_value,
                blacklist: r.blacklist,
            })
        })
        .collect::<CResult<Vec<_>>>()?;
    Ok(GstSpec { name, configs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomEntry {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub formula: String,
}

/// The serialized form of a generated class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    pub name: String,
    pub deps: Vec<String>,
    pub axioms: Vec<AxiomEntry>,
    pub defs: Vec<AxiomEntry>,
}

impl AxiomSet {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("axiom sets serialize");
        s.push('\n');
        s
    }

    /// Elaborates every formula against the dependencies' signature.
    pub fn resolve(&self, cat: &Catalogue) -> CResult<GstClass> {
        let sig = cat.signature_for_deps(&self.deps)?;
        let read = |list: &[AxiomEntry], kind: &str| {
            list.iter()
                .enumerate()
                .map(|(i, e)| {
                    let formula = parse_with(&sig, &e.formula, format!("{kind} {}", i + 1))?;
                    crate::kernel::check_formula(&formula, &sig)?;
                    Ok(Labeled {
                        provenance: e.provenance.clone(),
                        formula,
                    })
                })
                .collect::<CResult<Vec<_>>>()
        };
        Ok(GstClass {
            name: self.name.clone(),
            deps: self.deps.clone(),
            axioms: read(&self.axioms, "axiom")?,
            defs: read(&self.defs, "def")?,
        })
    }
}

impl GstClass {
    pub fn to_axiom_set(&self, cat: &Catalogue) -> CResult<AxiomSet> {
        let sig = cat.signature_for_deps(&self.deps)?;
        let entries = |list: &[Labeled]| {
            list.iter()
                .map(|l| AxiomEntry {
                    provenance: l.provenance.clone(),
                    formula: resugar(&l.formula, &sig).to_string(),
                })
                .collect()
        };
        Ok(AxiomSet {
            name: self.name.clone(),
            deps: self.deps.clone(),
            axioms: entries(&self.axioms),
            defs: entries(&self.defs),
        })
    }
}

/// Parses an axiom-set JSON file and elaborates it.
pub fn load_axiom_set(json: &str, cat: &Catalogue) -> CResult<GstClass> {
    serde_json::from_str::<AxiomSet>(json)?.resolve(cat)
}
