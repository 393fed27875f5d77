//! Introduction and elimination rules for the soft-type combinators, stored
//! as kernel derivations over Δ = the soft-type definitions.
//!
//! Statements use the type variables `'s` and `'t`, and the names `F P Q R b`.
//! Eigenvariable premises appear universally closed as hypotheses.

use crate::kernel::build::{self, imp};
use crate::kernel::{Context, Derivation, KResult, KernelError, Sequent, Term, Type, Var};

use super::defs::{dep_fun_type, fun_type, has_type, join, meet, soft_signature, sub};
use super::proof::Prover;

#[derive(Clone, Debug)]
pub struct DerivedRule {
    pub name: &'static str,
    pub derivation: Derivation,
}

impl DerivedRule {
    pub fn sequent(&self) -> &Sequent {
        self.derivation.sequent()
    }

    /// Replays every step; a failure names this rule.
    pub fn replay(&self, ctx: &Context) -> KResult<Sequent> {
        self.derivation
            .replay(ctx)
            .map_err(|e| KernelError::ReplayFailed {
                rule: self.name.to_owned(),
                source: Box::new(e),
            })
    }
}

/// The context the rules are checked in.
pub fn soft_context() -> Context {
    Context::new(soft_signature()).expect("the soft signature admits the HOL set")
}

pub const RULE_NAMES: [&str; 11] = [
    "⇛-intro",
    "⇛-elim",
    "⊓-intro",
    "⊓-elim-left",
    "⊓-elim-right",
    "⊔-intro-left",
    "⊔-intro-right",
    "⊑-refl",
    "⊑-trans",
    "Π-elim",
    "Π-intro",
];

struct Names {
    s: Type,
    t: Type,
}

impl Names {
    fn new() -> Self {
        Names {
            s: Type::var("s"),
            t: Type::var("t"),
        }
    }
    fn pred_s(&self, n: &str) -> Term {
        Term::var(n, Type::pred(self.s.clone()))
    }
    fn pred_t(&self, n: &str) -> Term {
        Term::var(n, Type::pred(self.t.clone()))
    }
    fn fam(&self) -> Term {
        Term::var("Q", Type::arrows([self.s.clone(), self.t.clone()], Type::Bool))
    }
    fn fun(&self) -> Term {
        Term::var("F", Type::arrow(self.s.clone(), self.t.clone()))
    }
    fn b(&self) -> Term {
        Term::var("b", self.s.clone())
    }
    fn x(&self) -> Var {
        Var::new("x", self.s.clone())
    }
}

fn fun_intro(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, f, x) = (n.pred_s("P"), n.pred_t("Q"), n.fun(), n.x());
    let xt = Term::Var(x.clone());
    let premise = build::all(
        x,
        imp(has_type(xt.clone(), pp.clone()), has_type(Term::app(f.clone(), xt), q.clone())),
    );
    let ty = fun_type(pp, q);
    let inner = p.fold_head(&p.hyp(premise)?, &Term::app(ty.clone(), f.clone()))?;
    p.fold_head(&inner, &has_type(f, ty))
}

fn fun_elim(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, f, b) = (n.pred_s("P"), n.pred_t("Q"), n.fun(), n.b());
    let hf = p.hyp(has_type(f, fun_type(pp.clone(), q)))?;
    let hb = p.hyp(has_type(b.clone(), pp))?;
    let all = p.unfold_head(&p.unfold_head(&hf)?)?;
    p.mp(&p.all_elim(&all, &b)?, &hb)
}

fn meet_intro(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, b) = (n.pred_s("P"), n.pred_s("Q"), n.b());
    let both = p.and_intro(
        &p.hyp(has_type(b.clone(), pp.clone()))?,
        &p.hyp(has_type(b.clone(), q.clone()))?,
    )?;
    let m = meet(pp, q);
    let applied = p.fold_head(&both, &Term::app(m.clone(), b.clone()))?;
    p.fold_head(&applied, &has_type(b, m))
}

fn meet_elim(p: &Prover, left: bool) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, b) = (n.pred_s("P"), n.pred_s("Q"), n.b());
    let h = p.hyp(has_type(b, meet(pp, q)))?;
    let conj = p.unfold_head(&p.unfold_head(&h)?)?;
    if left {
        p.and_elim_left(&conj)
    } else {
        p.and_elim_right(&conj)
    }
}

fn join_intro(p: &Prover, left: bool) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, b) = (n.pred_s("P"), n.pred_s("Q"), n.b());
    let bp = has_type(b.clone(), pp.clone());
    let bq = has_type(b.clone(), q.clone());
    let disj = if left {
        p.or_intro_left(&p.hyp(bp)?, &bq)?
    } else {
        p.or_intro_right(&p.hyp(bq)?, &bp)?
    };
    let j = join(pp, q);
    let applied = p.fold_head(&disj, &Term::app(j.clone(), b.clone()))?;
    p.fold_head(&applied, &has_type(b, j))
}

fn sub_refl(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let pp = n.pred_s("P");
    let x = n.x();
    let xp = has_type(Term::Var(x.clone()), pp.clone());
    let body = p.disch(&xp, &p.hyp(xp.clone())?)?;
    let all = p.all_intro(&x, &body)?;
    p.fold_head(&all, &sub(pp.clone(), pp))
}

fn sub_trans(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, r) = (n.pred_s("P"), n.pred_s("Q"), n.pred_s("R"));
    let x = n.x();
    let xt = Term::Var(x.clone());
    let pq = p.unfold_head(&p.hyp(sub(pp.clone(), q.clone()))?)?;
    let qr = p.unfold_head(&p.hyp(sub(q, r.clone()))?)?;
    let xp = has_type(xt.clone(), pp.clone());
    let xq = p.mp(&p.all_elim(&pq, &xt)?, &p.hyp(xp.clone())?)?;
    let xr = p.mp(&p.all_elim(&qr, &xt)?, &xq)?;
    let all = p.all_intro(&x, &p.disch(&xp, &xr)?)?;
    p.fold_head(&all, &sub(pp, r))
}

fn pi_elim(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, f, b) = (n.pred_s("P"), n.fam(), n.fun(), n.b());
    let hf = p.hyp(has_type(f, dep_fun_type(pp.clone(), q)))?;
    let hb = p.hyp(has_type(b.clone(), pp))?;
    let all = p.unfold_head(&p.unfold_head(&hf)?)?;
    p.mp(&p.all_elim(&all, &b)?, &hb)
}

fn pi_intro(p: &Prover) -> KResult<Derivation> {
    let n = Names::new();
    let (pp, q, f, x) = (n.pred_s("P"), n.fam(), n.fun(), n.x());
    let xt = Term::Var(x.clone());
    let premise = build::all(
        x,
        imp(
            has_type(xt.clone(), pp.clone()),
            has_type(Term::app(f.clone(), xt.clone()), Term::app(q.clone(), xt)),
        ),
    );
    let ty = dep_fun_type(pp, q);
    let inner = p.fold_head(&p.hyp(premise)?, &Term::app(ty.clone(), f.clone()))?;
    p.fold_head(&inner, &has_type(f, ty))
}

/// Builds all rules in the order of [`RULE_NAMES`].
pub fn derived_rules(ctx: &Context) -> KResult<Vec<DerivedRule>> {
    let p = Prover::new(ctx);
    let builders: [fn(&Prover) -> KResult<Derivation>; 11] = [
        fun_intro,
        fun_elim,
        meet_intro,
        |p| meet_elim(p, true),
        |p| meet_elim(p, false),
        |p| join_intro(p, true),
        |p| join_intro(p, false),
        sub_refl,
        sub_trans,
        pi_elim,
        pi_intro,
    ];
    RULE_NAMES
        .iter()
        .zip(builders)
        .map(|(name, build)| {
            let derivation = build(&p).map_err(|e| KernelError::ReplayFailed {
                rule: (*name).to_owned(),
                source: Box::new(e),
            })?;
            Ok(DerivedRule { name, derivation })
        })
        .collect()
}
