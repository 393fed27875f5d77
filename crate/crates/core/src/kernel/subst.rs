use std::collections::{BTreeMap, BTreeSet};

use super::error::{KResult, KernelError};
use super::term::{Term, Var};
use super::types::{Type, TypeSubst};

/// Simultaneous term substitution.
pub type TermSubst = BTreeMap<Var, Term>;

/// Type of a term, trusting constant annotations. Fails only on a
/// malformed application.
pub fn type_of(t: &Term) -> KResult<Type> {
    match t {
        Term::Var(v) => Ok(v.ty.clone()),
        Term::Const(_, ty) => Ok(ty.clone()),
        Term::Abs(v, b) => Ok(Type::arrow(v.ty.clone(), type_of(b)?)),
        Term::App(f, a) => {
            let tf = type_of(f)?;
            let ta = type_of(a)?;
            match tf.as_arrow() {
                Some((dom, cod)) if *dom == ta => Ok(cod.clone()),
                _ => Err(KernelError::IllTyped {
                    location: t.to_string(),
                    message: format!("cannot apply {tf} to {ta}"),
                }),
            }
        }
    }
}

/// A variant of `v` whose name is not in `avoid`, built by priming.
pub fn fresh_var(v: &Var, avoid: &BTreeSet<String>) -> Var {
    let mut name = v.name.clone();
    while avoid.contains(&name) {
        name.push('\'');
    }
    Var::new(name, v.ty.clone())
}

/// Capture-avoiding `B[x := C]`.
pub fn subst_term(b: &Term, x: &Var, c: &Term) -> KResult<Term> {
    let tc = type_of(c)?;
    if tc != x.ty {
        return Err(KernelError::TypeMismatch {
            expected: x.ty.clone(),
            found: tc,
        });
    }
    Ok(subst_many(b, &TermSubst::from([(x.clone(), c.clone())])))
}

/// Capture-avoiding simultaneous substitution. The caller guarantees that
/// each replacement has the type of the variable it replaces.
pub fn subst_many(t: &Term, s: &TermSubst) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(..) => t.clone(),
        Term::App(f, a) => Term::app(subst_many(f, s), subst_many(a, s)),
        Term::Abs(v, body) => {
            let fv_body = body.free_vars();
            let mut inner: TermSubst = s
                .iter()
                .filter(|(k, _)| *k != v && fv_body.contains(*k))
                .map(|(k, r)| (k.clone(), r.clone()))
                .collect();
            if inner.is_empty() {
                return t.clone();
            }
            let range_fv: BTreeSet<Var> = inner.values().flat_map(|r| r.free_vars()).collect();
            if range_fv.contains(v) {
                let avoid: BTreeSet<String> = range_fv
                    .iter()
                    .chain(fv_body.iter())
                    .map(|w| w.name.clone())
                    .collect();
                let nv = fresh_var(v, &avoid);
                inner.insert(v.clone(), Term::Var(nv.clone()));
                Term::abs(nv, subst_many(body, &inner))
            } else {
                Term::abs(v.clone(), subst_many(body, &inner))
            }
        }
    }
}

/// Rewrites every type annotation by `s`, renaming binders that would
/// otherwise capture a free variable whose type collapses onto theirs.
pub fn subst_type_in_term(t: &Term, s: &TypeSubst) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    fn go(t: &Term, s: &TypeSubst, ren: &mut Vec<(Var, Var)>) -> Term {
        match t {
            Term::Var(v) => match ren.iter().rev().find(|(old, _)| old == v) {
                Some((_, new)) => Term::Var(new.clone()),
                None => Term::var(v.name.clone(), v.ty.subst(s)),
            },
            Term::Const(n, ty) => Term::constant(n.clone(), ty.subst(s)),
            Term::App(f, a) => Term::app(go(f, s, ren), go(a, s, ren)),
            Term::Abs(v, b) => {
                let images: BTreeSet<Var> = b
                    .free_vars()
                    .into_iter()
                    .filter(|w| w != v)
                    .map(|w| match ren.iter().rev().find(|(old, _)| *old == w) {
                        Some((_, new)) => new.clone(),
                        None => Var::new(w.name, w.ty.subst(s)),
                    })
                    .collect();
                let mut nv = Var::new(v.name.clone(), v.ty.subst(s));
                if images.contains(&nv) {
                    let avoid = images.iter().map(|w| w.name.clone()).collect();
                    nv = fresh_var(&nv, &avoid);
                }
                ren.push((v.clone(), nv.clone()));
                let body = go(b, s, ren);
                ren.pop();
                Term::abs(nv, body)
            }
        }
    }
    go(t, s, &mut Vec::new())
}

/// The β-normal form (normal-order reduction).
pub fn beta_normalize(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Abs(v, b) => Term::abs(v.clone(), beta_normalize(b)),
        Term::App(f, a) => {
            let f = beta_normalize(f);
            match &f {
                Term::Abs(v, body) => {
                    let s = TermSubst::from([(v.clone(), (**a).clone())]);
                    beta_normalize(&subst_many(body, &s))
                }
                _ => Term::app(f, beta_normalize(a)),
            }
        }
    }
}

pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(..) => true,
        Term::Abs(_, b) => is_beta_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Abs(..)) && is_beta_normal(f) && is_beta_normal(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d0() -> Type {
        Type::Domain(0)
    }

    fn fvar(n: &str) -> Var {
        Var::new(n, Type::arrow(d0(), d0()))
    }

    #[test]
    fn substitution_without_capture() {
        let y = fvar("y");
        let x = Var::new("x", d0());
        let b = Term::abs(y.clone(), Term::app(Term::Var(y.clone()), Term::Var(x.clone())));
        let c = Term::constant("c", d0());
        let r = subst_term(&b, &x, &c).unwrap();
        let expect = Term::abs(y.clone(), Term::app(Term::Var(y), c));
        assert!(r.alpha_eq(&expect));
    }

    #[test]
    fn substitution_renames_binder() {
        let y = Var::new("y", d0());
        let x = Var::new("x", d0());
        let f = Var::new("f", Type::arrows([d0(), d0()], d0()));
        // λy. f y x
        let b = Term::abs(
            y.clone(),
            Term::apps(Term::Var(f.clone()), [Term::Var(y.clone()), Term::Var(x.clone())]),
        );
        let r = subst_term(&b, &x, &Term::Var(y.clone())).unwrap();
        let Term::Abs(bound, _) = &r else { panic!() };
        assert_ne!(bound, &y);
        assert!(r.free_vars().contains(&y));
        let yp = Var::new("y'", d0());
        let expect = Term::abs(
            yp.clone(),
            Term::apps(Term::Var(f), [Term::Var(yp), Term::Var(y)]),
        );
        assert!(r.alpha_eq(&expect));
    }

    #[test]
    fn base_case_and_mismatch() {
        let x = Var::new("x", d0());
        let c = Term::constant("c", d0());
        assert_eq!(subst_term(&Term::Var(x.clone()), &x, &c).unwrap(), c);
        assert!(matches!(
            subst_term(&Term::Var(x.clone()), &x, &Term::constant("t", Type::Bool)),
            Err(KernelError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn type_substitution_rewrites_annotations() {
        let a = Type::var("a");
        let e = Term::constant("∅", a);
        let s = TypeSubst::from([("a".to_owned(), d0())]);
        assert_eq!(subst_type_in_term(&e, &s), Term::constant("∅", d0()));
        let closed = Term::constant("k", Type::Bool);
        assert_eq!(subst_type_in_term(&closed, &s), closed);
    }

    #[test]
    fn type_substitution_avoids_collapse_capture() {
        // λx::'a. x::δ0  must not become the identity on δ0
        let xa = Var::new("x", Type::var("a"));
        let xd = Var::new("x", d0());
        let t = Term::abs(xa, Term::Var(xd.clone()));
        let s = TypeSubst::from([("a".to_owned(), d0())]);
        let r = subst_type_in_term(&t, &s);
        assert_eq!(r.free_vars(), BTreeSet::from([xd]));
    }

    #[test]
    fn beta_examples() {
        let x = Var::new("x", d0());
        let y = Var::new("y", d0());
        let a = Term::constant("a", d0());
        let b = Term::constant("b", d0());
        let id = Term::abs(x.clone(), Term::Var(x.clone()));
        assert_eq!(beta_normalize(&Term::app(id, a.clone())), a);
        let k = Term::abs_many([x.clone(), y], Term::Var(x));
        assert_eq!(beta_normalize(&Term::apps(k, [a.clone(), b])), a);
        let normal = Term::app(Term::constant("f", Type::arrow(d0(), d0())), a);
        assert_eq!(beta_normalize(&normal), normal);
        assert!(is_beta_normal(&normal));
    }
}
