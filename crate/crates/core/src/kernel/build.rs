//! Constructors for logical formulas. Inputs must already be well-typed;
//! an ill-typed argument is a programming error and panics.

use super::subst::type_of;
use super::term::{Term, Var};
use super::types::Type;

fn ty(t: &Term) -> Type {
    type_of(t).unwrap_or_else(|e| panic!("ill-typed term {t}: {e}"))
}

fn op2(name: &str) -> Term {
    Term::constant(name, Type::arrows([Type::Bool, Type::Bool], Type::Bool))
}

pub fn tru() -> Term {
    Term::constant("True", Type::Bool)
}

pub fn fals() -> Term {
    Term::constant("False", Type::Bool)
}

pub fn eq_const(at: Type) -> Term {
    Term::constant("=", Type::arrows([at.clone(), at], Type::Bool))
}

pub fn eq(a: Term, b: Term) -> Term {
    let t = ty(&a);
    Term::apps(eq_const(t), [a, b])
}

pub fn imp(a: Term, b: Term) -> Term {
    Term::apps(op2("→"), [a, b])
}

/// `a1 → a2 → … → concl`
pub fn imps<I>(hyps: I, concl: Term) -> Term
where
    I: IntoIterator<Item = Term>,
    I::IntoIter: DoubleEndedIterator,
{
    hyps.into_iter().rev().fold(concl, |acc, h| imp(h, acc))
}

pub fn and(a: Term, b: Term) -> Term {
    Term::apps(op2("∧"), [a, b])
}

pub fn or(a: Term, b: Term) -> Term {
    Term::apps(op2("∨"), [a, b])
}

pub fn iff(a: Term, b: Term) -> Term {
    Term::apps(op2("⟷"), [a, b])
}

pub fn not(a: Term) -> Term {
    Term::app(Term::constant("¬", Type::pred(Type::Bool)), a)
}

pub fn quant_const(name: &str, at: Type) -> Term {
    Term::constant(name, Type::arrow(Type::pred(at), Type::Bool))
}

/// `Q (λv. body)` for a binder constant `Q`.
pub fn binder(name: &str, v: Var, body: Term) -> Term {
    let at = v.ty.clone();
    Term::app(quant_const(name, at), Term::abs(v, body))
}

pub fn all(v: Var, body: Term) -> Term {
    binder("∀", v, body)
}

pub fn all_many<I>(vs: I, body: Term) -> Term
where
    I: IntoIterator<Item = Var>,
    I::IntoIter: DoubleEndedIterator,
{
    vs.into_iter().rev().fold(body, |acc, v| all(v, acc))
}

pub fn ex(v: Var, body: Term) -> Term {
    binder("∃", v, body)
}

/// `℩ d p`
pub fn iota(default: Term, pred: Term) -> Term {
    let t = ty(&default);
    let c = Term::constant("℩", Type::arrows([t.clone(), Type::pred(t.clone())], t));
    Term::apps(c, [default, pred])
}

pub fn ite(b: Term, x: Term, y: Term) -> Term {
    let t = ty(&x);
    let c = Term::constant("IF", Type::arrows([Type::Bool, t.clone(), t.clone()], t));
    Term::apps(c, [b, x, y])
}

/// `c a1 … an` where `c` is given at the instance fitting the arguments and
/// result type.
pub fn app_const(name: &str, args: Vec<Term>, result: Type) -> Term {
    let arg_tys: Vec<Type> = args.iter().map(ty).collect();
    Term::apps(Term::constant(name, Type::arrows(arg_tys, result)), args)
}

/// Splits `a → b` into its components.
pub fn dest_imp(t: &Term) -> Option<(&Term, &Term)> {
    t.as_binary("→")
}

/// Splits `a = b` into its components.
pub fn dest_eq(t: &Term) -> Option<(&Term, &Term)> {
    t.as_binary("=")
}

/// Splits `Q (λv. body)` for the named binder.
pub fn dest_binder<'a>(name: &str, t: &'a Term) -> Option<(&'a Var, &'a Term)> {
    match t.as_unary(name)? {
        Term::Abs(v, b) => Some((v, b)),
        _ => None,
    }
}
