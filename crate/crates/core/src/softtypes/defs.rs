//! The soft-type combinators and their simple definitions.

use crate::kernel::build::{all, and, eq, fals, imp, or, tru};
use crate::kernel::{KResult, Signature, Term, Type, Var};

fn ta() -> Type {
    Type::var("a")
}

fn tb() -> Type {
    Type::var("b")
}

fn pred(t: Type) -> Type {
    Type::pred(t)
}

/// Declared types of `: ⊤ ⊥ ⇛ Π ⊓ ⊔ ⊑`.
pub fn soft_constants() -> Vec<(&'static str, Type)> {
    let pa = pred(ta());
    let fab = Type::arrow(ta(), tb());
    vec![
        (":", Type::arrows([ta(), pa.clone()], Type::Bool)),
        ("⊤", pa.clone()),
        ("⊥", pa.clone()),
        (
            "⇛",
            Type::arrows([pa.clone(), pred(tb())], pred(fab.clone())),
        ),
        (
            "Π",
            Type::arrows([pa.clone(), Type::arrows([ta(), tb()], Type::Bool)], pred(fab)),
        ),
        ("⊓", Type::arrows([pa.clone(), pa.clone()], pa.clone())),
        ("⊔", Type::arrows([pa.clone(), pa.clone()], pa.clone())),
        ("⊑", Type::arrows([pa.clone(), pa], Type::Bool)),
    ]
}

/// The logical signature extended by the soft-type combinators.
pub fn soft_signature() -> Signature {
    let mut sig = Signature::logical();
    extend_signature(&mut sig).expect("soft constants are fresh");
    sig
}

pub fn extend_signature(sig: &mut Signature) -> KResult<()> {
    use crate::kernel::Fixity;
    for (n, t) in soft_constants() {
        let fix = match n {
            ":" => Fixity::Infix(60),
            "⊓" => Fixity::Infix(70),
            "⊔" => Fixity::Infix(65),
            "⇛" => Fixity::Infix(55),
            "⊑" => Fixity::Infix(50),
            _ => Fixity::Prefix,
        };
        match sig.get(n) {
            Some(d) if d.ty == t => {}
            _ => sig.declare_with(n, t, fix)?,
        }
    }
    Ok(())
}

/// `x : P` with `x :: τ`, `P :: τ ⇒ ★`.
pub fn has_type(x: Term, p: Term) -> Term {
    let t = crate::kernel::type_of(&x).expect("well-typed");
    Term::apps(
        Term::constant(":", Type::arrows([t.clone(), pred(t)], Type::Bool)),
        [x, p],
    )
}

fn pred_arg(p: &Term) -> Type {
    let t = crate::kernel::type_of(p).expect("well-typed");
    t.as_arrow().expect("predicate").0.clone()
}

fn bin_pred(name: &str, p: Term, q: Term) -> Term {
    let t = pred(pred_arg(&p));
    Term::apps(Term::constant(name, Type::arrows([t.clone(), t.clone()], t)), [p, q])
}

pub fn meet(p: Term, q: Term) -> Term {
    bin_pred("⊓", p, q)
}

pub fn join(p: Term, q: Term) -> Term {
    bin_pred("⊔", p, q)
}

pub fn sub(p: Term, q: Term) -> Term {
    let t = pred(pred_arg(&p));
    Term::apps(Term::constant("⊑", Type::arrows([t.clone(), t], Type::Bool)), [p, q])
}

pub fn top(at: Type) -> Term {
    Term::constant("⊤", pred(at))
}

pub fn bot(at: Type) -> Term {
    Term::constant("⊥", pred(at))
}

/// `P ⇛ Q`
pub fn fun_type(p: Term, q: Term) -> Term {
    let a = pred_arg(&p);
    let b = pred_arg(&q);
    let c = Term::constant(
        "⇛",
        Type::arrows([pred(a.clone()), pred(b.clone())], pred(Type::arrow(a, b))),
    );
    Term::apps(c, [p, q])
}

/// `Π P Q` with `Q :: τ ⇒ ρ ⇒ ★`.
pub fn dep_fun_type(p: Term, q: Term) -> Term {
    let a = pred_arg(&p);
    let qt = crate::kernel::type_of(&q).expect("well-typed");
    let b = pred_arg_of_type(qt.as_arrow().expect("family").1);
    let c = Term::constant(
        "Π",
        Type::arrows([pred(a.clone()), Type::arrows([a.clone(), b.clone()], Type::Bool)],
            pred(Type::arrow(a, b))),
    );
    Term::apps(c, [p, q])
}

fn pred_arg_of_type(t: &Type) -> Type {
    t.as_arrow().expect("predicate").0.clone()
}

/// The `SoftTypeOps` definitions, each `c = rhs` at the declared type.
pub fn soft_defs() -> Vec<Term> {
    let x = Var::new("x", ta());
    let p = Var::new("p", pred(ta()));
    let q = Var::new("q", pred(ta()));
    let qb = Var::new("q", pred(tb()));
    let qd = Var::new("q", Type::arrows([ta(), tb()], Type::Bool));
    let f = Var::new("f", Type::arrow(ta(), tb()));
    let t = |v: &Var| Term::Var(v.clone());
    let fx = Term::app(t(&f), t(&x));
    let decl = |n: &str| {
        let ty = soft_constants().into_iter().find(|(m, _)| *m == n).unwrap().1;
        Term::constant(n, ty)
    };
    let colon = eq(
        decl(":"),
        Term::abs_many([x.clone(), p.clone()], Term::app(t(&p), t(&x))),
    );
    let top_d = eq(decl("⊤"), Term::abs(x.clone(), tru()));
    let bot_d = eq(decl("⊥"), Term::abs(x.clone(), fals()));
    let arrow_d = eq(
        decl("⇛"),
        Term::abs_many(
            [p.clone(), qb.clone(), f.clone()],
            all(
                x.clone(),
                imp(has_type(t(&x), t(&p)), has_type(fx.clone(), t(&qb))),
            ),
        ),
    );
    let pi_d = eq(
        decl("Π"),
        Term::abs_many(
            [p.clone(), qd.clone(), f.clone()],
            all(
                x.clone(),
                imp(
                    has_type(t(&x), t(&p)),
                    has_type(fx, Term::app(t(&qd), t(&x))),
                ),
            ),
        ),
    );
    let meet_d = eq(
        decl("⊓"),
        Term::abs_many(
            [p.clone(), q.clone(), x.clone()],
            and(has_type(t(&x), t(&p)), has_type(t(&x), t(&q))),
        ),
    );
    let join_d = eq(
        decl("⊔"),
        Term::abs_many(
            [p.clone(), q.clone(), x.clone()],
            or(has_type(t(&x), t(&p)), has_type(t(&x), t(&q))),
        ),
    );
    let sub_d = eq(
        decl("⊑"),
        Term::abs_many(
            [p.clone(), q.clone()],
            all(
                x.clone(),
                imp(has_type(t(&x), t(&p)), has_type(t(&x), t(&q))),
            ),
        ),
    );
    vec![colon, top_d, bot_d, arrow_d, pi_d, meet_d, join_d, sub_d]
}

/// Right-hand side of the definition of `name`.
pub fn soft_def(name: &str) -> Option<Term> {
    soft_defs().into_iter().find_map(|d| {
        let (l, r) = crate::kernel::build::dest_eq(&d)?;
        match l {
            Term::Const(n, _) if n == name => Some(r.clone()),
            _ => None,
        }
    })
}
