//! Parameter morphisms: renaming the parameters of a feature into model
//! constants, bounding individual quantifiers by the model predicate, and
//! the respectfulness goals that come with a renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::combine::{GstClass, Labeled};
use crate::kernel::build::{and, binder, dest_eq, imp, imps};
use crate::kernel::sexp::ParseError;
use crate::kernel::{beta_normalize, Term, Type, TypeSubst, Var};
use crate::registry::{Catalogue, RegistryError};
use crate::softtypes::{has_type, meet};

#[derive(Debug, Error)]
pub enum MorphismError {
    #[error("'{constant}' of {scope} has no image under the morphism")]
    UnmappedConstant { constant: String, scope: String },
    #[error("morphism file: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

pub type MorphResult<T> = Result<T, MorphismError>;

/// A renaming of parameters into model constants. Individual quantifiers in
/// translated formulas are restricted to `domain_predicate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterMorphism {
    pub mapping: BTreeMap<String, String>,
    pub domain_predicate: String,
}

impl ParameterMorphism {
    pub fn new<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        ParameterMorphism {
            mapping: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect(),
            domain_predicate: "𝕄".to_owned(),
        }
    }

    pub fn image(&self, name: &str) -> Option<&str> {
        self.mapping.get(name).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// Union of two morphisms; entries of `other` win on conflict.
    pub fn extend(mut self, other: &ParameterMorphism) -> Self {
        self.mapping
            .extend(other.mapping.iter().map(|(a, b)| (a.clone(), b.clone())));
        self
    }
}

impl fmt::Display for ParameterMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.mapping {
            writeln!(f, "{a} ↦ {b}")?;
        }
        Ok(())
    }
}

/// Reads `source ↦ target` lines; `;` and `#` start comments.
pub fn parse_morphism(src: &str) -> MorphResult<ParameterMorphism> {
    let mut pairs = BTreeMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split([';', '#']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((a, b)) = line.split_once('↦') else {
            return Err(ParseError::new(i + 1, format!("expected 'source ↦ target': {line}")).into());
        };
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() || a.contains(char::is_whitespace) || b.contains(char::is_whitespace) {
            return Err(ParseError::new(i + 1, format!("expected 'source ↦ target': {line}")).into());
        }
        if pairs.insert(a.to_owned(), b.to_owned()).is_some() {
            return Err(ParseError::new(i + 1, format!("'{a}' is mapped twice")).into());
        }
    }
    Ok(ParameterMorphism {
        mapping: pairs,
        domain_predicate: "𝕄".to_owned(),
    })
}

pub fn mgzf_map() -> ParameterMorphism {
    ParameterMorphism::new([
        ("Set", "mSet"),
        ("∈", "∈̄"),
        ("⋃", "⋃̄"),
        ("𝒫", "𝒫̄"),
        ("∅", "∅̄"),
        ("Succ", "mSucc"),
        ("Inf", "mInf"),
        ("Repl", "R̄"),
        ("SetMem", "mSetMem"),
        ("SetOf", "mSetOf"),
        ("ReplPred", "mReplPred"),
    ])
}

pub fn mordinal_map() -> ParameterMorphism {
    ParameterMorphism::new([
        ("Ord", "mOrd"),
        ("<", "<̄"),
        ("0", "0̄"),
        ("succ", "msucc"),
        ("ω", "mω"),
    ])
}

pub fn mfunction_map() -> ParameterMorphism {
    ParameterMorphism::new([
        ("Fun", "mFun"),
        ("fapp", "mfapp"),
        ("⇸", "m⇸"),
        ("mkFun", "mmkFun"),
        ("dom", "mdom"),
        ("ran", "mran"),
        ("FunMem", "mFunMem"),
        ("FunPred", "mFunPred"),
    ])
}

pub fn mexception_map() -> ParameterMorphism {
    ParameterMorphism::new([("Exc", "mExc"), ("•", "m•")])
}

pub fn defaults_map() -> ParameterMorphism {
    ParameterMorphism::new([
        ("∘GZF", "∘set"),
        ("∘Ord", "∘ord"),
        ("∘Fun", "∘fun"),
        ("∘Exc", "∘exc"),
    ])
}

/// The four component maps and the defaults together.
pub fn zfplus_map() -> ParameterMorphism {
    mgzf_map()
        .extend(&mordinal_map())
        .extend(&mfunction_map())
        .extend(&mexception_map())
        .extend(&defaults_map())
}

fn is_individual(t: &Type) -> bool {
    matches!(t, Type::Var(_) | Type::Domain(_))
}

/// Translates formulas over the classes reachable from some roots.
pub struct Translator<'a> {
    eta: &'a ParameterMorphism,
    scope: String,
    params: BTreeSet<String>,
    defs: BTreeMap<String, (Type, Term)>,
}

impl<'a> Translator<'a> {
    pub fn new(cat: &Catalogue, roots: &[String], eta: &'a ParameterMorphism) -> MorphResult<Self> {
        let mut params = BTreeSet::new();
        let mut defs = BTreeMap::new();
        for c in cat.closure(roots)? {
            params.extend(c.params.iter().map(|(n, _)| n.clone()));
            for d in &c.defs {
                if let Some((Term::Const(n, ty), rhs)) = dest_eq(d) {
                    defs.insert(n.clone(), (ty.clone(), rhs.clone()));
                }
            }
        }
        Ok(Translator {
            eta,
            scope: roots.join(", "),
            params,
            defs,
        })
    }

    /// Replaces unmapped defined constants by their definitions until none is
    /// left, then β-normalizes.
    fn unfold(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        loop {
            let mut changed = false;
            let next = self.unfold_once(&cur, &mut changed);
            if !changed {
                return cur;
            }
            cur = beta_normalize(&next);
        }
    }

    fn unfold_once(&self, t: &Term, changed: &mut bool) -> Term {
        match t {
            Term::Const(n, ty) if self.eta.image(n).is_none() => match self.defs.get(n) {
                Some((lhs_ty, rhs)) => {
                    let s = ty.match_against(lhs_ty).unwrap_or_else(TypeSubst::new);
                    *changed = true;
                    crate::kernel::subst_type_in_term(rhs, &s)
                }
                None => t.clone(),
            },
            Term::Const(..) | Term::Var(_) => t.clone(),
            Term::App(f, a) => Term::app(self.unfold_once(f, changed), self.unfold_once(a, changed)),
            Term::Abs(v, b) => Term::abs(v.clone(), self.unfold_once(b, changed)),
        }
    }

    fn rename(&self, t: &Term) -> MorphResult<Term> {
        Ok(match t {
            Term::Const(n, ty) => match self.eta.image(n) {
                Some(m) => Term::constant(m, ty.clone()),
                None if self.params.contains(n) => {
                    return Err(MorphismError::UnmappedConstant {
                        constant: n.clone(),
                        scope: self.scope.clone(),
                    })
                }
                None => t.clone(),
            },
            Term::Var(_) => t.clone(),
            Term::App(..) => {
                if let Some(b) = self.bound(t)? {
                    return Ok(b);
                }
                let Term::App(f, a) = t else { unreachable!() };
                Term::app(self.rename(f)?, self.rename(a)?)
            }
            Term::Abs(v, b) => Term::abs(v.clone(), self.rename(b)?),
        })
    }

    fn domain(&self, ty: &Type) -> Term {
        Term::constant(self.eta.domain_predicate.clone(), Type::pred(ty.clone()))
    }

    fn is_bounded(&self, p: &Term) -> bool {
        let dp = &self.eta.domain_predicate;
        matches!(p, Term::Const(n, _) if n == dp)
            || p.as_binary("⊓").is_some_and(|(l, _)| matches!(l, Term::Const(n, _) if n == dp))
    }

    /// Translates `Q (λx. body)` for an individual quantifier `Q`.
    fn bound(&self, t: &Term) -> MorphResult<Option<Term>> {
        let (head, args) = t.strip_app();
        let Some(q) = ["∀", "∃", "∃!", "∃≤1"].into_iter().find(|q| head.is_const(q)) else {
            return Ok(None);
        };
        let [lam] = args.as_slice() else {
            return Ok(None);
        };
        let (v, body) = match lam {
            Term::Abs(v, b) => (v.clone(), (**b).clone()),
            other => {
                let Ok(ty) = crate::kernel::type_of(other) else {
                    return Ok(None);
                };
                let Some((arg, _)) = ty.as_arrow() else {
                    return Ok(None);
                };
                let v = Var::new("x", arg.clone());
                let body = Term::app((*other).clone(), Term::Var(v.clone()));
                (v, body)
            }
        };
        if !is_individual(&v.ty) {
            return Ok(Some(binder(q, v.clone(), self.rename(&body)?)));
        }
        let xv = Term::Var(v.clone());
        let connective = if q == "∀" { "→" } else { "∧" };
        let guard_of = |g: &Term| -> Option<Term> {
            let (x, p) = g.as_binary(":")?;
            (*x == xv).then(|| p.clone())
        };
        let new_body = match body.as_binary(connective) {
            Some((g, rest)) if guard_of(g).is_some() => {
                let p = self.rename(&guard_of(g).unwrap())?;
                let p = if self.is_bounded(&p) {
                    p
                } else {
                    meet(self.domain(&v.ty), p)
                };
                let rest = self.rename(rest)?;
                let g = has_type(xv.clone(), p);
                if q == "∀" { imp(g, rest) } else { and(g, rest) }
            }
            _ => {
                let rest = self.rename(&body)?;
                let g = has_type(xv.clone(), self.domain(&v.ty));
                if q == "∀" { imp(g, rest) } else { and(g, rest) }
            }
        };
        Ok(Some(binder(q, v, new_body)))
    }

    /// Closes `t` universally over its free variables, unfolds unmapped
    /// definitions, renames and bounds.
    pub fn translate(&self, t: &Term) -> MorphResult<Term> {
        let closed = crate::kernel::build::all_many(t.free_vars(), t.clone());
        self.rename(&self.unfold(&closed))
    }
}

/// `η` applied to the axioms of a feature's class.
pub fn translate_axioms(
    cat: &Catalogue,
    feature: &str,
    eta: &ParameterMorphism,
) -> MorphResult<Vec<Term>> {
    let c = cat.class(feature)?;
    let tr = Translator::new(cat, &[c.name.clone()], eta)?;
    c.axioms.iter().map(|a| tr.translate(a)).collect()
}

/// `η` applied to a generated class: its axioms, then its definitions.
pub fn translate_gst(
    cat: &Catalogue,
    gst: &GstClass,
    eta: &ParameterMorphism,
) -> MorphResult<Vec<Labeled>> {
    let tr = Translator::new(cat, &gst.deps, eta)?;
    gst.axioms
        .iter()
        .chain(&gst.defs)
        .map(|l| {
            Ok(Labeled {
                provenance: l.provenance.clone(),
                formula: tr.translate(&l.formula)?,
            })
        })
        .collect()
}

/// Respectfulness goals: each mapped operator with a soft typing and an
/// individual result sends model arguments to the model.
pub fn resp_thms(
    cat: &Catalogue,
    feature: &str,
    eta: &ParameterMorphism,
) -> MorphResult<Vec<Term>> {
    let c = cat.class(feature)?;
    let typed: BTreeSet<&str> = c
        .axioms
        .iter()
        .filter_map(|a| match a.as_binary(":") {
            Some((Term::Const(n, _), _)) => Some(n.as_str()),
            _ => None,
        })
        .collect();
    let mut out = Vec::new();
    for (n, ty) in &c.params {
        let Some(image) = eta.image(n) else { continue };
        if !typed.contains(n.as_str()) {
            continue;
        }
        let (args, res) = ty.strip_arrows();
        if !is_individual(res) {
            continue;
        }
        let dp = |t: &Type| Term::constant(eta.domain_predicate.clone(), Type::pred(t.clone()));
        let vars: Vec<Var> = args
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let base = if is_individual(t) { "x" } else { "p" };
                let name = if args.len() == 1 { base.to_owned() } else { format!("{base}{}", i + 1) };
                Var::new(name, (*t).clone())
            })
            .collect();
        let applied = Term::apps(
            Term::constant(image, ty.clone()),
            vars.iter().map(|v| Term::Var(v.clone())),
        );
        let guards: Vec<Term> = vars
            .iter()
            .filter(|v| is_individual(&v.ty))
            .map(|v| has_type(Term::Var(v.clone()), dp(&v.ty)))
            .collect();
        let concl = has_type(applied, dp(res));
        out.push(crate::kernel::build::all_many(vars, imps(guards, concl)));
    }
    Ok(out)
}
