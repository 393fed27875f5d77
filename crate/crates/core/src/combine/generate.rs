use crate::kernel::build::{all_many, eq, imp, not, or};
use crate::kernel::{beta_normalize, subst_type_in_term, type_of, Term, Type, TypeSubst, Var};
use crate::registry::{Catalogue, Class, Feature, FeatureConfig};
use crate::softtypes::notation::individual;
use crate::softtypes::{bot, has_type, join, meet, sub, top};

use super::{CResult, CombineError, GstClass, GstSpec, Labeled, OtherwisePolicy, Provenance};

fn pred_arg(p: &Term) -> Type {
    let t = type_of(p).expect("soft type is well-typed");
    t.as_arrow().map(|(a, _)| a.clone()).unwrap_or_else(individual)
}

/// `typList(R)`: one fresh argument `bᵢ : Pᵢ` per `⇛` or `Π` on the spine of
/// `R`, numbered from 1.
pub fn typ_list(r: &Term) -> Vec<(Var, Term)> {
    let mut out = Vec::new();
    let mut cur = r.clone();
    loop {
        let (head, args) = cur.strip_app();
        let [p, q] = args.as_slice() else { break };
        let v = Var::new(format!("b{}", out.len() + 1), pred_arg(p));
        let next = if head.is_const("⇛") {
            (*q).clone()
        } else if head.is_const("Π") {
            beta_normalize(&Term::app((*q).clone(), Term::Var(v.clone())))
        } else {
            break;
        };
        out.push((v, (*p).clone()));
        cur = next;
    }
    out
}

/// `∀b₁…bₙ. (¬b₁ : P₁ ∨ … ∨ ¬bₙ : Pₙ) → κ b₁ … bₙ = D`
pub fn otherwise(kappa: &Term, args: &[(Var, Term)], d: &Term) -> CResult<Term> {
    let Some(((lv, lp), rest)) = args.split_last() else {
        return Err(CombineError::EmptyArgList);
    };
    let last = not(has_type(Term::Var(lv.clone()), lp.clone()));
    let guard = rest.iter().rev().fold(last, |acc, (v, p)| {
        or(not(has_type(Term::Var(v.clone()), p.clone())), acc)
    });
    let applied = Term::apps(kappa.clone(), args.iter().map(|(v, _)| Term::Var(v.clone())));
    Ok(all_many(
        args.iter().map(|(v, _)| v.clone()),
        imp(guard, eq(applied, d.clone())),
    ))
}

/// Moves a class's own type variable to the individual type `'a`.
fn at_individual(class: &Class, t: &Term) -> Term {
    match class.type_var() {
        Some(tv) if tv != "a" => subst_type_in_term(t, &TypeSubst::from([(tv, individual())])),
        _ => t.clone(),
    }
}

/// `allOtherwise(F, D)` in axiom order, each with its operator's name.
pub fn all_otherwise(
    cat: &Catalogue,
    f: &Feature,
    d: &Term,
    policy: OtherwisePolicy,
) -> CResult<Vec<(String, Term)>> {
    let class = cat.class(&f.class)?;
    let mut out = Vec::new();
    for ax in &class.axioms {
        let Some((name, r)) = policy.select(class, ax) else {
            continue;
        };
        let Some(ty) = class.param(&name) else { continue };
        let kappa = at_individual(class, &Term::constant(name.clone(), ty.clone()));
        let args = typ_list(&at_individual(class, &r));
        if args.is_empty() {
            continue;
        }
        out.push((name, otherwise(&kappa, &args, d)?));
    }
    Ok(out)
}

/// `Q₁ ⊔ … ⊔ Qₙ`, left-nested; `⊥` when empty.
fn union(qs: &[Term], at: &Type) -> Term {
    let mut it = qs.iter().cloned();
    match it.next() {
        None => bot(at.clone()),
        Some(first) => it.fold(first, join),
    }
}

/// `(P₁ ⊔ … ⊔ Pₙ = ⊤)`
pub fn cover(logos: &[Term]) -> CResult<Term> {
    let first = logos.first().ok_or(CombineError::EmptyCover)?;
    let at = pred_arg(first);
    Ok(eq(union(logos, &at), top(at)))
}

/// `(Pᵢ ⊓ Pⱼ = ⊥)` for all `i < j`, in lexicographic order.
pub fn disjoint(logos: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for (i, p) in logos.iter().enumerate() {
        for q in &logos[i + 1..] {
            out.push(eq(meet(p.clone(), q.clone()), bot(pred_arg(p))));
        }
    }
    out
}

/// `(Q₁ ⊔ … ⊔ Qₙ ⊑ P)`
pub fn admit_cargo(p: &Term, qs: &[Term]) -> Term {
    sub(union(qs, &pred_arg(p)), p.clone())
}

/// `((Q₁ ⊔ … ⊔ Qₙ) ⊓ P = ⊥)`
pub fn restrict_cargo(p: &Term, qs: &[Term]) -> Term {
    let at = pred_arg(p);
    eq(meet(union(qs, &at), p.clone()), bot(at))
}

fn logo_at(cat: &Catalogue, f: &Feature) -> CResult<Term> {
    Ok(at_individual(cat.class(&f.class)?, &f.logo))
}

/// `cargoAx(F, 𝒲, ℬ)`: the admit and restrict axioms for `F`'s cargo.
pub fn cargo_ax(
    cat: &Catalogue,
    f: &Feature,
    all: &[&Feature],
    blacklist: &[&Feature],
) -> CResult<[Term; 2]> {
    let cargo = at_individual(cat.class(&f.class)?, &f.cargo);
    let banned = |g: &Feature| blacklist.iter().any(|b| b.name == g.name);
    let admitted = all
        .iter()
        .filter(|g| !banned(g))
        .map(|g| logo_at(cat, g))
        .collect::<CResult<Vec<_>>>()?;
    let restricted = blacklist
        .iter()
        .map(|g| logo_at(cat, g))
        .collect::<CResult<Vec<_>>>()?;
    Ok([
        admit_cargo(&cargo, &admitted),
        restrict_cargo(&cargo, &restricted),
    ])
}

/// `mkGST(spec)`.
pub fn mk_gst(cat: &Catalogue, spec: &GstSpec, policy: OtherwisePolicy) -> CResult<GstClass> {
    let features = spec.resolve(cat)?;
    let mut axioms = Vec::new();
    for (f, c) in features.iter().zip(&spec.configs) {
        for (constant, formula) in all_otherwise(cat, f, &c.default_value, policy)? {
            axioms.push(Labeled {
                provenance: Provenance::Otherwise {
                    feature: f.name.clone(),
                    constant,
                },
                formula,
            });
        }
    }
    let logos = features
        .iter()
        .map(|f| logo_at(cat, f))
        .collect::<CResult<Vec<_>>>()?;
    axioms.extend(disjoint(&logos).into_iter().map(|formula| Labeled {
        provenance: Provenance::Disjoint,
        formula,
    }));
    axioms.push(Labeled {
        provenance: Provenance::Cover,
        formula: cover(&logos)?,
    });
    for (f, c) in features.iter().zip(&spec.configs) {
        let blacklist: Vec<&Feature> = features
            .iter()
            .filter(|g| c.blacklist.contains(&g.name))
            .copied()
            .collect();
        let [admit, restrict] = cargo_ax(cat, f, &features, &blacklist)?;
        axioms.push(Labeled {
            provenance: Provenance::Admit { feature: f.name.clone() },
            formula: admit,
        });
        axioms.push(Labeled {
            provenance: Provenance::Restrict { feature: f.name.clone() },
            formula: restrict,
        });
    }
    let mut defs = Vec::new();
    for (f, c) in features.iter().zip(&spec.configs) {
        let class = cat.class(&f.class)?;
        let ty = class.param(&f.default).cloned().unwrap_or_else(individual);
        let k = at_individual(class, &Term::constant(f.default.clone(), ty));
        defs.push(Labeled {
            provenance: Provenance::Defs { feature: f.name.clone() },
            formula: eq(k, c.default_value.clone()),
        });
    }
    Ok(GstClass {
        name: spec.name.clone(),
        deps: features.iter().map(|f| f.class.clone()).collect(),
        axioms,
        defs,
    })
}

/// `[[GZF, •, [Exc]], [Ordinal, •, ⋄], [Function, •, [Exc]], [Exc, •, ⋄]]`
pub fn zfplus_spec() -> GstSpec {
    let bullet = Term::constant("•", individual());
    let config = |feature: &str, blacklist: &[&str]| FeatureConfig {
        feature: feature.to_owned(),
        default_value: bullet.clone(),
        blacklist: blacklist.iter().map(|s| s.to_string()).collect(),
    };
    GstSpec {
        name: "ZF⁺".into(),
        configs: vec![
            config("GZF", &["Exc"]),
            config("Ordinal", &[]),
            config("Function", &["Exc"]),
            config("Exc", &[]),
        ],
    }
}
