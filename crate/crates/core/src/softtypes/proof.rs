//! Natural-deduction helpers built from the six kernel rules. Every helper
//! returns a [`Derivation`]; contexts are merged by replaying a tree with a
//! larger Γ, so premises never need to be prepared by hand.

use std::cell::Cell;
use std::collections::HashMap;

use crate::kernel::build::{self, dest_eq, eq, imp};
use crate::kernel::types::match_into;
use crate::kernel::{
    hol, type_of, Context, Derivation, FormulaSet, KResult, KernelError, Term, Type, TypeSubst,
    Var,
};

use super::defs::soft_defs;

const AX_REFL: usize = 0;
const AX_SUBST: usize = 1;
const AX_EM: usize = 2;

/// Proof builder over a fixed definition set Δ.
pub struct Prover<'c> {
    ctx: &'c Context,
    defs: Vec<Term>,
    counter: Cell<usize>,
}

impl<'c> Prover<'c> {
    /// Δ is the soft-type definition set.
    pub fn new(ctx: &'c Context) -> Self {
        Prover {
            ctx,
            defs: soft_defs(),
            counter: Cell::new(0),
        }
    }

    pub fn ctx(&self) -> &Context {
        self.ctx
    }

    fn tick(&self) -> usize {
        let n = self.counter.get() + 1;
        self.counter.set(n);
        n
    }

    /// A term variable whose name is used nowhere else in the proof.
    pub fn fresh(&self, base: &str, ty: Type) -> Var {
        Var::new(format!("{base}·{}", self.tick()), ty)
    }

    fn fresh_tv(&self) -> String {
        format!("τ{}", self.tick())
    }

    fn node(&self, step: crate::kernel::Step, premises: Vec<Derivation>) -> KResult<Derivation> {
        Derivation::new(self.ctx, step, premises)
    }

    fn assm(&self, hyps: Vec<Term>, phi: Term) -> KResult<Derivation> {
        self.node(
            crate::kernel::Step::Assm {
                defs: self.defs.clone(),
                hyps,
                phi,
            },
            vec![],
        )
    }

    /// `φ ⊢ φ`
    pub fn hyp(&self, phi: Term) -> KResult<Derivation> {
        self.assm(vec![phi.clone()], phi)
    }

    /// A member of the HOL set or of Δ, with empty Γ.
    pub fn axiom(&self, phi: Term) -> KResult<Derivation> {
        self.assm(vec![], phi)
    }

    fn schematic(&self, i: usize) -> KResult<Derivation> {
        self.axiom(hol::schematic_axioms().swap_remove(i))
    }

    /// The definition of `name` (HOL or soft) at the instance `ty`.
    pub fn def_at(&self, name: &str, ty: &Type) -> KResult<Derivation> {
        let d = hol::definitions()
            .into_iter()
            .chain(self.defs.iter().cloned())
            .find(|d| matches!(dest_eq(d), Some((Term::Const(n, _), _)) if n == name))
            .ok_or_else(|| KernelError::UnknownConstant(name.to_owned()))?;
        let Some((Term::Const(_, decl), _)) = dest_eq(&d) else {
            unreachable!()
        };
        let mut s = TypeSubst::new();
        if !match_into(decl, ty, &mut s) {
            return Err(KernelError::NotAnInstance {
                name: name.to_owned(),
                ty: ty.clone(),
                declared: decl.clone(),
            });
        }
        let th = self.axiom(d)?;
        self.inst_type(th, &s)
    }

    /// Simultaneous type instantiation of a theorem with empty Γ.
    pub fn inst_type(&self, th: Derivation, s: &TypeSubst) -> KResult<Derivation> {
        let s: Vec<(&String, &Type)> = s.iter().filter(|(a, t)| **t != Type::var(*a)).collect();
        let mut th = th;
        let mut renamed = Vec::new();
        for (alpha, sigma) in &s {
            let fresh = self.fresh_tv();
            th = self.node(
                crate::kernel::Step::TypInst {
                    alpha: (*alpha).clone(),
                    sigma: Type::var(fresh.clone()),
                },
                vec![th],
            )?;
            renamed.push((fresh, (*sigma).clone()));
        }
        for (alpha, sigma) in renamed {
            th = self.node(crate::kernel::Step::TypInst { alpha, sigma }, vec![th])?;
        }
        Ok(th)
    }

    /// Simultaneous term instantiation.
    pub fn inst(&self, th: Derivation, s: &[(Var, Term)]) -> KResult<Derivation> {
        let mut th = th;
        let mut renamed = Vec::new();
        for (v, t) in s {
            let fresh = self.fresh(&v.name, v.ty.clone());
            th = self.node(
                crate::kernel::Step::TrmInst {
                    x: v.clone(),
                    b: Term::Var(fresh.clone()),
                },
                vec![th],
            )?;
            renamed.push((fresh, t.clone()));
        }
        for (x, b) in renamed {
            th = self.node(crate::kernel::Step::TrmInst { x, b }, vec![th])?;
        }
        Ok(th)
    }

    /// Replays `th` with `extra` added to every hypothesis set.
    pub fn weaken(&self, th: &Derivation, extra: &FormulaSet) -> KResult<Derivation> {
        if extra.is_subset(&th.sequent().hyps) {
            return Ok(th.clone());
        }
        let mut memo = HashMap::new();
        self.weaken_memo(th, extra, &mut memo)
    }

    fn weaken_memo(
        &self,
        th: &Derivation,
        extra: &FormulaSet,
        memo: &mut HashMap<*const crate::kernel::Sequent, Derivation>,
    ) -> KResult<Derivation> {
        use crate::kernel::Step;
        let key = th.sequent() as *const _;
        if let Some(d) = memo.get(&key) {
            return Ok(d.clone());
        }
        let premises = th
            .premises()
            .iter()
            .map(|p| self.weaken_memo(p, extra, memo))
            .collect::<KResult<Vec<_>>>()?;
        let step = match th.step() {
            Step::Assm { defs, hyps, phi } => {
                let mut hs: FormulaSet = hyps.iter().cloned().collect();
                for e in extra.iter() {
                    hs.insert(e.clone());
                }
                Step::Assm {
                    defs: defs.clone(),
                    hyps: hs.iter().cloned().collect(),
                    phi: phi.clone(),
                }
            }
            Step::ImpI { phi, retain } => Step::ImpI {
                phi: phi.clone(),
                retain: *retain || extra.contains(phi),
            },
            other => other.clone(),
        };
        let d = self.node(step, premises)?;
        memo.insert(key, d.clone());
        Ok(d)
    }

    fn union(&self, a: &Derivation, b: &Derivation) -> KResult<(Derivation, Derivation)> {
        let ha = &a.sequent().hyps;
        let hb = &b.sequent().hyps;
        if ha == hb {
            return Ok((a.clone(), b.clone()));
        }
        let all: FormulaSet = ha.iter().chain(hb.iter()).cloned().collect();
        Ok((self.weaken(a, &all)?, self.weaken(b, &all)?))
    }

    /// From `A → B` and `A` conclude `B`.
    pub fn mp(&self, ab: &Derivation, a: &Derivation) -> KResult<Derivation> {
        let (ab, a) = self.union(ab, a)?;
        self.node(crate::kernel::Step::ImpE, vec![ab, a])
    }

    /// Discharges `phi`, which need not have been used.
    pub fn disch(&self, phi: &Term, th: &Derivation) -> KResult<Derivation> {
        let th = if th.sequent().hyps.contains(phi) {
            th.clone()
        } else {
            self.weaken(th, &FormulaSet::from_iter([phi.clone()]))?
        };
        self.node(
            crate::kernel::Step::ImpI {
                phi: phi.clone(),
                retain: false,
            },
            vec![th],
        )
    }

    fn ty(t: &Term) -> Type {
        type_of(t).expect("well-typed")
    }

    /// `⊢ t = t`
    pub fn refl(&self, t: &Term) -> KResult<Derivation> {
        let a = Self::ty(t);
        let th = self.inst_type(self.schematic(AX_REFL)?, &TypeSubst::from([("a".into(), a.clone())]))?;
        self.inst(th, &[(Var::new("x", a), t.clone())])
    }

    /// From `a = b` and `M a` conclude `M b`, for a motive `M = λz. φ`.
    pub fn subst(&self, eq_th: &Derivation, th: &Derivation, motive: &Term) -> KResult<Derivation> {
        let (a, b) = dest_eq(eq_th.concl())
            .ok_or_else(|| KernelError::mismatch("subst", "not an equation"))?;
        let ta = Self::ty(a);
        let ax = self.inst_type(
            self.schematic(AX_SUBST)?,
            &TypeSubst::from([("a".into(), ta.clone())]),
        )?;
        let ax = self.inst(
            ax,
            &[
                (Var::new("p", Type::pred(ta.clone())), motive.clone()),
                (Var::new("x", ta.clone()), a.clone()),
                (Var::new("y", ta), b.clone()),
            ],
        )?;
        let step = self.mp(&ax, eq_th)?;
        self.mp(&step, th)
    }

    /// `b = a` from `a = b`.
    pub fn sym(&self, eq_th: &Derivation) -> KResult<Derivation> {
        let (a, _) = dest_eq(eq_th.concl())
            .ok_or_else(|| KernelError::mismatch("sym", "not an equation"))?;
        let z = self.fresh("z", Self::ty(a));
        let motive = Term::abs(z.clone(), eq(Term::Var(z), a.clone()));
        self.subst(eq_th, &self.refl(a)?, &motive)
    }

    /// `a = c` from `a = b` and `b = c`.
    pub fn trans(&self, ab: &Derivation, bc: &Derivation) -> KResult<Derivation> {
        let (a, _) = dest_eq(ab.concl())
            .ok_or_else(|| KernelError::mismatch("trans", "not an equation"))?;
        let z = self.fresh("z", Self::ty(a));
        let motive = Term::abs(z.clone(), eq(a.clone(), Term::Var(z)));
        self.subst(bc, ab, &motive)
    }

    /// `B` from `A = B` and `A`.
    pub fn eq_mp(&self, eq_th: &Derivation, th: &Derivation) -> KResult<Derivation> {
        let z = self.fresh("z", Type::Bool);
        self.subst(eq_th, th, &Term::abs(z.clone(), Term::Var(z)))
    }

    fn head_motive(&self, t: &Term) -> KResult<(String, Type, Term)> {
        let (head, args) = t.strip_app();
        let Term::Const(name, ty) = head else {
            return Err(KernelError::mismatch("unfold", format!("{t} has no constant head")));
        };
        let z = self.fresh("ζ", ty.clone());
        let motive = Term::abs(z.clone(), Term::apps(Term::Var(z), args.into_iter().cloned()));
        Ok((name.clone(), ty.clone(), motive))
    }

    /// Unfolds the head constant of the conclusion `c a1 … an`.
    pub fn unfold_head(&self, th: &Derivation) -> KResult<Derivation> {
        let (name, ty, motive) = self.head_motive(th.concl())?;
        let d = self.def_at(&name, &ty)?;
        self.subst(&d, th, &motive)
    }

    /// Proves `target = c a1 … an` from a theorem stating its head unfolding.
    pub fn fold_head(&self, th: &Derivation, target: &Term) -> KResult<Derivation> {
        let (name, ty, motive) = self.head_motive(target)?;
        let d = self.sym(&self.def_at(&name, &ty)?)?;
        self.subst(&d, th, &motive)
    }

    /// `⊢ True`
    pub fn truth(&self) -> KResult<Derivation> {
        let d = self.def_at("True", &Type::Bool)?;
        let (_, rhs) = dest_eq(d.concl()).expect("equation");
        let (l, _) = dest_eq(rhs).expect("equation");
        let r = self.refl(l)?;
        self.eq_mp(&self.sym(&d)?, &r)
    }

    /// From `∀x. φ` conclude `φ[t]`.
    pub fn all_elim(&self, th: &Derivation, t: &Term) -> KResult<Derivation> {
        let lam = th
            .concl()
            .as_unary("∀")
            .ok_or_else(|| KernelError::mismatch("all_elim", format!("{} is not ∀", th.concl())))?
            .clone();
        let unfolded = self.unfold_head(th)?;
        let back = self.sym(&unfolded)?;
        let z = self.fresh("z", Self::ty(&lam));
        let motive = Term::abs(z.clone(), Term::app(Term::Var(z), t.clone()));
        self.subst(&back, &self.truth()?, &motive)
    }

    /// From `φ` conclude `∀x. φ`; `x` must not be free in Γ.
    pub fn all_intro(&self, x: &Var, th: &Derivation) -> KResult<Derivation> {
        let phi = th.concl().clone();
        let eqt = self.eqt_intro(th)?;
        let f = Term::abs(x.clone(), phi.clone());
        let g = Term::abs(x.clone(), build::tru());
        let fun_eq = self.node(
            crate::kernel::Step::Ext {
                f,
                g,
                x: x.clone(),
            },
            vec![eqt],
        )?;
        self.fold_head(&fun_eq, &build::all(x.clone(), phi))
    }

    /// Universally closes over `xs`, innermost last.
    pub fn all_intro_many(&self, xs: &[Var], th: &Derivation) -> KResult<Derivation> {
        xs.iter().rev().try_fold(th.clone(), |acc, x| self.all_intro(x, &acc))
    }

    /// Instantiates leading universal quantifiers in order.
    pub fn all_elim_many(&self, th: &Derivation, ts: &[Term]) -> KResult<Derivation> {
        ts.iter().try_fold(th.clone(), |acc, t| self.all_elim(&acc, t))
    }

    /// From `False` conclude `goal`.
    pub fn false_elim(&self, th: &Derivation, goal: &Term) -> KResult<Derivation> {
        let all = self.unfold_head(th)?;
        self.all_elim(&all, goal)
    }

    /// From `A ∨ B`, `A → C` and `B → C` conclude `C`.
    pub fn or_elim(&self, th: &Derivation, f: &Derivation, g: &Derivation) -> KResult<Derivation> {
        let (_, c) = build::dest_imp(f.concl())
            .ok_or_else(|| KernelError::mismatch("or_elim", "case is not an implication"))?;
        let c = c.clone();
        let unfolded = self.unfold_head(th)?;
        let inst = self.all_elim(&unfolded, &c)?;
        let step = self.mp(&inst, f)?;
        self.mp(&step, g)
    }

    /// `φ = True` from `φ`.
    pub fn eqt_intro(&self, th: &Derivation) -> KResult<Derivation> {
        let phi = th.concl().clone();
        let em = self.inst(self.schematic(AX_EM)?, &[(Var::new("p", Type::Bool), phi.clone())])?;
        let is_t = eq(phi.clone(), build::tru());
        let is_f = eq(phi, build::fals());
        let case_t = self.disch(&is_t, &self.hyp(is_t.clone())?)?;
        let absurd = self.eq_mp(&self.hyp(is_f.clone())?, th)?;
        let case_f = self.disch(&is_f, &self.false_elim(&absurd, &is_t)?)?;
        self.or_elim(&em, &case_t, &case_f)
    }

    /// `A ∧ B` from `A` and `B`.
    pub fn and_intro(&self, a: &Derivation, b: &Derivation) -> KResult<Derivation> {
        let (pa, pb) = (a.concl().clone(), b.concl().clone());
        let r = self.fresh("r", Type::Bool);
        let h = build::imps([pa.clone(), pb.clone()], Term::Var(r.clone()));
        let hr = self.mp(&self.mp(&self.hyp(h.clone())?, a)?, b)?;
        let body = self.disch(&h, &hr)?;
        let closed = self.all_intro(&r, &body)?;
        self.fold_head(&closed, &build::and(pa, pb))
    }

    fn and_elim(&self, th: &Derivation, left: bool) -> KResult<Derivation> {
        let (a, b) = th
            .concl()
            .as_binary("∧")
            .ok_or_else(|| KernelError::mismatch("and_elim", "not a conjunction"))?;
        let (a, b) = (a.clone(), b.clone());
        let goal = if left { a.clone() } else { b.clone() };
        let unfolded = self.unfold_head(th)?;
        let inst = self.all_elim(&unfolded, &goal)?;
        let pick = self.hyp(goal.clone())?;
        let sel = self.disch(&a, &self.disch(&b, &pick)?)?;
        self.mp(&inst, &sel)
    }

    pub fn and_elim_left(&self, th: &Derivation) -> KResult<Derivation> {
        self.and_elim(th, true)
    }

    pub fn and_elim_right(&self, th: &Derivation) -> KResult<Derivation> {
        self.and_elim(th, false)
    }

    fn or_intro(&self, th: &Derivation, other: &Term, left: bool) -> KResult<Derivation> {
        let known = th.concl().clone();
        let r = self.fresh("r", Type::Bool);
        let rt = Term::Var(r.clone());
        let h_known = imp(known.clone(), rt.clone());
        let h_other = imp(other.clone(), rt.clone());
        let got = self.mp(&self.hyp(h_known.clone())?, th)?;
        let (first, second, target) = if left {
            (h_known, h_other, build::or(known, other.clone()))
        } else {
            (h_other, h_known, build::or(other.clone(), known))
        };
        let body = self.disch(&first, &self.disch(&second, &got)?)?;
        let closed = self.all_intro(&r, &body)?;
        self.fold_head(&closed, &target)
    }

    /// `A ∨ B` from `A`.
    pub fn or_intro_left(&self, th: &Derivation, b: &Term) -> KResult<Derivation> {
        self.or_intro(th, b, true)
    }

    /// `A ∨ B` from `B`.
    pub fn or_intro_right(&self, th: &Derivation, a: &Term) -> KResult<Derivation> {
        self.or_intro(th, a, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::softtypes::defs::soft_signature;

    fn ctx() -> Context {
        Context::new(soft_signature()).unwrap()
    }

    #[test]
    fn truth_and_equality() {
        let c = ctx();
        let p = Prover::new(&c);
        let t = p.truth().unwrap();
        assert_eq!(t.concl(), &build::tru());
        assert!(t.sequent().hyps.is_empty());
        let a = Term::var("A", Type::var("s"));
        let b = Term::var("B", Type::var("s"));
        let ab = p.hyp(eq(a.clone(), b.clone())).unwrap();
        let ba = p.sym(&ab).unwrap();
        assert!(ba.concl().alpha_eq(&eq(b, a)));
        ba.replay(&c).unwrap();
    }

    #[test]
    fn quantifier_round_trip() {
        let c = ctx();
        let p = Prover::new(&c);
        let x = Var::new("u", Type::var("s"));
        let q = Term::var("Q", Type::pred(Type::var("s")));
        let qx = Term::app(q.clone(), Term::Var(x.clone()));
        let body = p.disch(&qx, &p.hyp(qx.clone()).unwrap()).unwrap();
        let all = p.all_intro(&x, &body).unwrap();
        assert!(all.sequent().hyps.is_empty());
        let w = Term::var("w", Type::var("s"));
        let inst = p.all_elim(&all, &w).unwrap();
        let qw = Term::app(q, w);
        assert!(inst.concl().alpha_eq(&imp(qw.clone(), qw)));
        inst.replay(&c).unwrap();
    }

    #[test]
    fn connectives() {
        let c = ctx();
        let p = Prover::new(&c);
        let a = Term::var("A", Type::Bool);
        let b = Term::var("B", Type::Bool);
        let ha = p.hyp(a.clone()).unwrap();
        let hb = p.hyp(b.clone()).unwrap();
        let ab = p.and_intro(&ha, &hb).unwrap();
        assert!(ab.concl().alpha_eq(&build::and(a.clone(), b.clone())));
        assert!(p.and_elim_left(&ab).unwrap().concl().alpha_eq(&a));
        assert!(p.and_elim_right(&ab).unwrap().concl().alpha_eq(&b));
        let or = p.or_intro_right(&hb, &a).unwrap();
        assert!(or.concl().alpha_eq(&build::or(a, b)));
        or.replay(&c).unwrap();
    }
}
