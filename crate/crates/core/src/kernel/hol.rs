//! The base axiom block: equality, extensionality-free truth axioms, the two
//! description axioms, and the definitions of the derived connectives.

use super::build::*;
use super::term::{Term, Var};
use super::types::Type;

fn a() -> Type {
    Type::var("a")
}

fn v(name: &str, t: Type) -> Var {
    Var::new(name, t)
}

fn tv(name: &str, t: Type) -> Term {
    Term::var(name, t)
}

fn pa() -> Type {
    Type::pred(a())
}

fn ex1_const() -> Term {
    quant_const("∃!", a())
}

/// The five axioms with their outer quantifiers.
pub fn closed_axioms() -> Vec<Term> {
    let (x, y) = (v("x", a()), v("y", a()));
    let p = v("p", pa());
    let pb = v("p", Type::Bool);
    let d = v("d", a());
    let px = |t: &Var| Term::app(Term::Var(p.clone()), Term::Var(t.clone()));
    let iota_dp = iota(Term::Var(d.clone()), Term::Var(p.clone()));
    let ex1p = Term::app(ex1_const(), Term::Var(p.clone()));
    vec![
        all(x.clone(), eq(Term::Var(x.clone()), Term::Var(x.clone()))),
        all_many(
            [p.clone(), x.clone(), y.clone()],
            imps([eq(Term::Var(x.clone()), Term::Var(y.clone())), px(&x)], px(&y)),
        ),
        all(
            pb.clone(),
            or(eq(Term::Var(pb.clone()), tru()), eq(Term::Var(pb), fals())),
        ),
        all_many(
            [p.clone(), d.clone()],
            imp(ex1p.clone(), Term::app(Term::Var(p.clone()), iota_dp.clone())),
        ),
        all_many(
            [p.clone(), d.clone()],
            imp(not(ex1p), eq(iota_dp, Term::Var(d.clone()))),
        ),
    ]
}

/// The same five axioms with the outer quantifiers dropped; free variables
/// are schematic and instantiated with `trm-inst`.
pub fn schematic_axioms() -> Vec<Term> {
    let x = tv("x", a());
    let y = tv("y", a());
    let p = tv("p", pa());
    let pb = tv("p", Type::Bool);
    let d = tv("d", a());
    let iota_dp = iota(d.clone(), p.clone());
    let ex1p = Term::app(ex1_const(), p.clone());
    vec![
        eq(x.clone(), x.clone()),
        imps(
            [eq(x.clone(), y.clone()), Term::app(p.clone(), x)],
            Term::app(p.clone(), y),
        ),
        or(eq(pb.clone(), tru()), eq(pb, fals())),
        imp(ex1p.clone(), Term::app(p, iota_dp.clone())),
        imp(not(ex1p), eq(iota_dp, d)),
    ]
}

/// Definitions of `True ∀ ∃ False ¬ ∧ ∨ ⟷ ∃≤1 ∃! IF`, in dependency order.
pub fn definitions() -> Vec<Term> {
    let b = Type::Bool;
    let pb = v("p", b.clone());
    let qb = v("q", b.clone());
    let rb = v("r", b.clone());
    let big_p = v("P", pa());
    let x = v("x", a());
    let y = v("y", a());
    let t = |w: &Var| Term::Var(w.clone());
    let ap = |f: &Var, w: &Var| Term::app(t(f), t(w));
    let bool2 = Type::arrows([b.clone(), b.clone()], b.clone());
    let quant = Type::arrow(pa(), b.clone());

    let id_b = Term::abs(pb.clone(), t(&pb));
    let true_def = eq(tru(), eq(id_b.clone(), id_b));

    let forall_def = eq(
        Term::constant("∀", quant.clone()),
        Term::abs(big_p.clone(), eq(t(&big_p), Term::abs(x.clone(), tru()))),
    );

    let exists_def = eq(
        Term::constant("∃", quant.clone()),
        Term::abs(
            big_p.clone(),
            all(
                qb.clone(),
                imp(all(x.clone(), imp(ap(&big_p, &x), t(&qb))), t(&qb)),
            ),
        ),
    );

    let false_def = eq(fals(), all(pb.clone(), t(&pb)));

    let not_def = eq(
        Term::constant("¬", Type::pred(b.clone())),
        Term::abs(pb.clone(), imp(t(&pb), fals())),
    );

    let and_def = eq(
        Term::constant("∧", bool2.clone()),
        Term::abs_many(
            [pb.clone(), qb.clone()],
            all(rb.clone(), imp(imps([t(&pb), t(&qb)], t(&rb)), t(&rb))),
        ),
    );

    let or_def = eq(
        Term::constant("∨", bool2.clone()),
        Term::abs_many(
            [pb.clone(), qb.clone()],
            all(
                rb.clone(),
                imps([imp(t(&pb), t(&rb)), imp(t(&qb), t(&rb))], t(&rb)),
            ),
        ),
    );

    let iff_def = eq(
        Term::constant("⟷", bool2),
        Term::abs_many(
            [pb.clone(), qb.clone()],
            and(imp(t(&pb), t(&qb)), imp(t(&qb), t(&pb))),
        ),
    );

    let at_most_def = eq(
        Term::constant("∃≤1", quant.clone()),
        Term::abs(
            big_p.clone(),
            all_many(
                [x.clone(), y.clone()],
                imps([ap(&big_p, &x), ap(&big_p, &y)], eq(t(&x), t(&y))),
            ),
        ),
    );

    let ex1_def = eq(
        Term::constant("∃!", quant),
        Term::abs(
            big_p.clone(),
            ex(
                x.clone(),
                and(
                    ap(&big_p, &x),
                    all(y.clone(), imp(ap(&big_p, &y), eq(t(&y), t(&x)))),
                ),
            ),
        ),
    );

    let c = v("c", a());
    let if_def = eq(
        Term::constant("IF", Type::arrows([b.clone(), a(), a()], a())),
        Term::abs_many(
            [pb.clone(), x.clone(), y.clone()],
            iota(
                t(&x),
                Term::abs(
                    c.clone(),
                    and(
                        imp(t(&pb), eq(t(&c), t(&x))),
                        imp(not(t(&pb)), eq(t(&c), t(&y))),
                    ),
                ),
            ),
        ),
    );

    vec![
        true_def, forall_def, exists_def, false_def, not_def, and_def, or_def, iff_def,
        at_most_def, ex1_def, if_def,
    ]
}

/// Every formula admitted as an `assm` leaf independently of Δ and Γ.
pub fn hol_set() -> Vec<Term> {
    let mut out = closed_axioms();
    out.extend(schematic_axioms());
    out.extend(definitions());
    out
}
