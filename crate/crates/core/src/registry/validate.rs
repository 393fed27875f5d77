use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kernel::build::{dest_eq, eq};
use crate::kernel::deduction::find_cycle;
use crate::kernel::{
    check_formula, infer_type, subst_type_in_term, Signature, Term, Type, TypeSubst,
};

use super::{Catalogue, Class, Feature, RResult, RegistryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Outcome of validating one class or feature.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub subject: String,
    pub issues: Vec<Issue>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.issues.iter().any(|i| i.message.contains(needle))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "{}: valid", self.subject);
        }
        write!(f, "{}:", self.subject)?;
        for i in &self.issues {
            write!(f, "\n  {i}")?;
        }
        Ok(())
    }
}

fn check_params(c: &Class, r: &mut Report) {
    let mut seen = BTreeSet::new();
    for (n, _) in &c.params {
        if !seen.insert(n) {
            r.push(format!("parameter {n}"), "duplicate parameter");
        }
    }
    if c.params.is_empty() {
        return;
    }
    let tvs: BTreeSet<String> = c.params.iter().flat_map(|(_, t)| t.type_vars()).collect();
    match tvs.len() {
        1 => {}
        0 => r.push("parameters", "no tv: parameters mention no type variable"),
        _ => {
            let shown: Vec<String> = tvs.iter().map(|v| format!("'{v}")).collect();
            r.push("parameters", format!("multiple tv: {}", shown.join(", ")));
        }
    }
}

/// Signature for `c`'s formulas, with problems recorded in `r`.
fn class_signature(c: &Class, cat: &Catalogue, r: &mut Report) -> Option<Signature> {
    let mut sig = match cat.signature_for_deps(&c.deps) {
        Ok(s) => s,
        Err(e) => {
            r.push("deps", e.to_string());
            return None;
        }
    };
    for (n, t) in &c.params {
        if let Err(e) = sig.declare_compatible(n, t.clone()) {
            r.push(format!("parameter {n}"), e.to_string());
        }
    }
    for (i, d) in c.defs.iter().enumerate() {
        match dest_eq(d) {
            Some((Term::Const(n, t), _)) => {
                if let Err(e) = sig.declare_compatible(n, t.clone()) {
                    r.push(format!("def {}", i + 1), e.to_string());
                }
            }
            _ => r.push(format!("def {}", i + 1), "not an equation with a constant lhs"),
        }
    }
    Some(sig)
}

fn check_defs(c: &Class, sig: &Signature, r: &mut Report) {
    let names: BTreeSet<String> = c.defined_names().into_iter().collect();
    let mut graph: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (i, d) in c.defs.iter().enumerate() {
        let loc = format!("def {}", i + 1);
        let Some((Term::Const(n, lt), rhs)) = dest_eq(d) else {
            continue;
        };
        if let Err(e) = check_formula(d, sig) {
            r.push(&loc, format!("ill-typed: {e}"));
        }
        let fv = rhs.free_vars();
        if !fv.is_empty() {
            let shown: Vec<&str> = fv.iter().map(|v| v.name.as_str()).collect();
            r.push(&loc, format!("right-hand side not closed: {}", shown.join(", ")));
        }
        if !rhs.type_vars().is_subset(&lt.type_vars()) {
            r.push(&loc, "right-hand side has type variables not in the constant's type");
        }
        let uses: BTreeSet<String> = rhs
            .constant_names()
            .into_iter()
            .filter(|m| names.contains(m))
            .collect();
        graph.entry(n.clone()).or_default().extend(uses);
    }
    if let Some(cycle) = find_cycle(&graph) {
        r.push("defs", format!("cycle: {}", cycle.join(" → ")));
    }
}

fn check_formulas(c: &Class, sig: &Signature, r: &mut Report) {
    for (kind, list) in [("axiom", &c.axioms), ("lemma", &c.lemmas)] {
        for (i, a) in list.iter().enumerate() {
            if let Err(e) = check_formula(a, sig) {
                r.push(format!("{kind} {}", i + 1), format!("ill-typed: {e}"));
            }
        }
    }
}

/// Constants used by `c` that are declared neither by `c`, its transitive
/// dependencies, nor the logical and soft-type signature.
pub fn orphans(c: &Class, cat: &Catalogue) -> Vec<(String, String)> {
    let mut allowed: BTreeSet<String> = crate::softtypes::soft_signature()
        .names()
        .map(str::to_owned)
        .collect();
    let mut scope = vec![c];
    if let Ok(deps) = cat.closure(&c.deps) {
        scope.extend(deps);
    }
    for k in scope {
        allowed.extend(k.params.iter().map(|(n, _)| n.clone()));
        allowed.extend(k.defined_names());
    }
    let mut out = Vec::new();
    let sections = [("axiom", &c.axioms), ("def", &c.defs), ("lemma", &c.lemmas)];
    for (kind, list) in sections {
        for (i, t) in list.iter().enumerate() {
            for n in t.constant_names() {
                if !allowed.contains(&n) {
                    out.push((format!("{kind} {}", i + 1), n));
                }
            }
        }
    }
    out
}

/// Checks every class invariant; never fails, problems go into the report.
pub fn validate_class(c: &Class, cat: &Catalogue) -> Report {
    let mut r = Report {
        subject: format!("class {}", c.name),
        issues: vec![],
    };
    check_params(c, &mut r);
    if let Some(sig) = class_signature(c, cat, &mut r) {
        check_defs(c, &sig, &mut r);
        check_formulas(c, &sig, &mut r);
    }
    for (loc, n) in orphans(c, cat) {
        r.push(loc, format!("orphan constant '{n}'"));
    }
    r
}

/// Checks the feature invariants against its class.
pub fn validate_feature(f: &Feature, cat: &Catalogue) -> Report {
    let mut r = Report {
        subject: format!("feature {}", f.name),
        issues: vec![],
    };
    let c = match cat.class(&f.class) {
        Ok(c) => c,
        Err(e) => {
            r.push("class", e.to_string());
            return r;
        }
    };
    let Some(tv) = c.type_var() else {
        r.push("class", "class has no single type variable");
        return r;
    };
    let tvt = Type::var(tv);
    match c.param(&f.default) {
        Some(t) if *t == tvt => {}
        Some(t) => r.push("default", format!("'{}' has type {t}, expected {tvt}", f.default)),
        None => r.push("default", format!("'{}' is not a parameter of {}", f.default, c.name)),
    }
    let sig = match cat.signature_for(&c.name) {
        Ok(s) => s,
        Err(e) => {
            r.push("class", e.to_string());
            return r;
        }
    };
    for (what, t) in [("logo", &f.logo), ("cargo", &f.cargo)] {
        match infer_type(t, &sig) {
            Ok(ty) if ty == Type::pred(tvt.clone()) => {}
            Ok(ty) => r.push(what, format!("has type {ty}, expected {}", Type::pred(tvt.clone()))),
            Err(e) => r.push(what, e.to_string()),
        }
    }
    r
}

/// `Θ⟦δᵢ⟧ ∪ bindings` and the proof obligations `Φ⟦δᵢ⟧`.
#[derive(Clone, Debug)]
pub struct Instantiation {
    pub defs: Vec<Term>,
    pub obligations: Vec<Term>,
}

/// A parameter instantiation of `c` at the domain type `δᵢ`.
pub fn instantiate_class(
    c: &Class,
    domain: u32,
    bindings: &BTreeMap<String, Term>,
) -> RResult<Instantiation> {
    let tv = c.type_var().unwrap_or_else(|| "a".to_owned());
    let s = TypeSubst::from([(tv, Type::Domain(domain))]);
    let mut defs: Vec<Term> = c.defs.iter().map(|d| subst_type_in_term(d, &s)).collect();
    for (n, t) in &c.params {
        let b = bindings
            .get(n)
            .ok_or_else(|| RegistryError::MissingBinding(n.clone()))?;
        if b.type_vars().iter().next().is_some() {
            return Err(RegistryError::TypeVarInBinding {
                name: n.clone(),
                term: b.to_string(),
            });
        }
        if !b.free_vars().is_empty() {
            return Err(RegistryError::OpenBinding {
                name: n.clone(),
                term: b.to_string(),
            });
        }
        let want = t.subst(&s);
        let got = crate::kernel::type_of(b)?;
        if got != want {
            return Err(RegistryError::BindingType {
                name: n.clone(),
                expected: want,
                found: got,
            });
        }
        defs.push(eq(Term::constant(n.clone(), want), b.clone()));
    }
    let obligations = c.axioms.iter().map(|a| subst_type_in_term(a, &s)).collect();
    Ok(Instantiation { defs, obligations })
}
