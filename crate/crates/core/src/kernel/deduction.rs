use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::build::{dest_eq, dest_imp, eq};
use super::error::{KResult, KernelError};
use super::hol;
use super::signature::{check_formula, infer_type, Signature};
use super::subst::{beta_normalize, subst_many, subst_type_in_term, TermSubst};
use super::term::{Nameless, Term, Var};
use super::types::{Type, TypeSubst};

/// A set of formulas keyed by canonical form, so membership is α-equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaSet(BTreeMap<Nameless, Term>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet::default()
    }

    pub fn insert(&mut self, t: Term) -> bool {
        self.0.insert(t.canonical(), t).is_none()
    }

    pub fn remove(&mut self, t: &Term) -> bool {
        self.0.remove(&t.canonical()).is_some()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.0.contains_key(&t.canonical())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.0.values()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.0.keys().all(|k| other.0.contains_key(k))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.iter().flat_map(Term::free_vars).collect()
    }

    pub fn type_vars(&self) -> BTreeSet<String> {
        self.iter().flat_map(Term::type_vars).collect()
    }
}

impl FromIterator<Term> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let mut s = FormulaSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

/// `Δ; Γ ⊢ φ`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub defs: FormulaSet,
    pub hyps: FormulaSet,
    pub concl: Term,
}

impl Sequent {
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        self.defs == other.defs && self.hyps == other.hyps && self.concl.alpha_eq(&other.concl)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|Δ|={}; {{", self.defs.len())?;
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "}} ⊢ {}", self.concl)
    }
}

/// Names that a simple definition may not redefine.
const PRIMITIVE: &[&str] = &["→", "=", "℩"];

/// The signature and the set of HOL formulas available to `assm`.
#[derive(Clone, Debug)]
pub struct Context {
    sig: Signature,
    hol: FormulaSet,
    reserved: BTreeSet<String>,
}

impl Context {
    pub fn new(sig: Signature) -> KResult<Self> {
        let mut hol_set = FormulaSet::new();
        let mut reserved: BTreeSet<String> = PRIMITIVE.iter().map(|s| s.to_string()).collect();
        for d in hol::definitions() {
            if let Some((Term::Const(n, _), _)) = dest_eq(&d) {
                reserved.insert(n.clone());
            }
        }
        for f in hol::hol_set() {
            check_formula(&f, &sig)?;
            hol_set.insert(beta_normalize(&f));
        }
        Ok(Context {
            sig,
            hol: hol_set,
            reserved,
        })
    }

    /// Context over the logical signature extended by `extra`.
    pub fn with_constants<'a, I>(extra: I) -> KResult<Self>
    where
        I: IntoIterator<Item = (&'a str, Type)>,
    {
        let mut sig = Signature::logical();
        for (n, t) in extra {
            sig.declare_compatible(n, t)?;
        }
        Context::new(sig)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn hol(&self) -> &FormulaSet {
        &self.hol
    }

    fn formula(&self, t: &Term) -> KResult<Term> {
        check_formula(t, &self.sig)?;
        Ok(beta_normalize(t))
    }
}

/// Checks that every member of `defs` is a simple definition `κ = B` with
/// `B` closed, `TV(B) ⊆ TV(κ)`, and that the definitions are acyclic.
pub fn check_simple_definitions<'a, I>(defs: I, reserved: &BTreeSet<String>) -> KResult<()>
where
    I: IntoIterator<Item = &'a Term>,
{
    let mut graph: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for d in defs {
        let (lhs, rhs) =
            dest_eq(d).ok_or_else(|| KernelError::BadDefinition(format!("not an equation: {d}")))?;
        let Term::Const(name, ty) = lhs else {
            return Err(KernelError::BadDefinition(format!(
                "left-hand side is not a constant: {d}"
            )));
        };
        if reserved.contains(name) {
            return Err(KernelError::BadDefinition(format!("'{name}' is a logical constant")));
        }
        if !rhs.free_vars().is_empty() {
            return Err(KernelError::BadDefinition(format!(
                "right-hand side of '{name}' has free variables"
            )));
        }
        if !rhs.type_vars().is_subset(&ty.type_vars()) {
            return Err(KernelError::BadDefinition(format!(
                "right-hand side of '{name}' has extra type variables"
            )));
        }
        if graph.insert(name.clone(), rhs.constant_names()).is_some() {
            return Err(KernelError::BadDefinition(format!("'{name}' defined twice")));
        }
    }
    if let Some(cycle) = find_cycle(&graph) {
        return Err(KernelError::BadDefinition(format!("cycle: {}", cycle.join(" → "))));
    }
    Ok(())
}

/// A cycle in the graph restricted to its keys, if any.
pub fn find_cycle(graph: &BTreeMap<String, BTreeSet<String>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit(
        n: &str,
        graph: &BTreeMap<String, BTreeSet<String>>,
        marks: &mut BTreeMap<String, Mark>,
        stack: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        match marks.get(n) {
            Some(Mark::Done) => return None,
            Some(Mark::Open) => {
                let start = stack.iter().position(|s| s == n).unwrap_or(0);
                let mut cyc = stack[start..].to_vec();
                cyc.push(n.to_owned());
                return Some(cyc);
            }
            None => {}
        }
        marks.insert(n.to_owned(), Mark::Open);
        stack.push(n.to_owned());
        for m in graph.get(n).into_iter().flatten() {
            if graph.contains_key(m) {
                if let Some(c) = visit(m, graph, marks, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        marks.insert(n.to_owned(), Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for n in graph.keys() {
        if let Some(c) = visit(n, graph, &mut marks, &mut Vec::new()) {
            return Some(c);
        }
    }
    None
}

/// One inference step together with the data it needs beyond its premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Assm {
        defs: Vec<Term>,
        hyps: Vec<Term>,
        phi: Term,
    },
    /// Discharges `phi`. With `retain`, `phi` stays in Γ (the case
    /// `Γ ∪ {φ} = Γ`).
    ImpI {
        phi: Term,
        retain: bool,
    },
    ImpE,
    TypInst {
        alpha: String,
        sigma: Type,
    },
    TrmInst {
        x: Var,
        b: Term,
    },
    Ext {
        f: Term,
        g: Term,
        x: Var,
    },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Assm { .. } => "assm",
            Step::ImpI { .. } => "impI",
            Step::ImpE => "impE",
            Step::TypInst { .. } => "typ-inst",
            Step::TrmInst { .. } => "trm-inst",
            Step::Ext { .. } => "ext",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Step::Assm { .. } => 0,
            Step::ImpE => 2,
            _ => 1,
        }
    }
}

/// Applies one rule to premises that were themselves produced by `derive`.
pub fn derive(ctx: &Context, step: &Step, premises: &[&Sequent]) -> KResult<Sequent> {
    let rule = step.name();
    if premises.len() != step.arity() {
        return Err(KernelError::mismatch(
            rule,
            format!("expected {} premises, got {}", step.arity(), premises.len()),
        ));
    }
    match step {
        Step::Assm { defs, hyps, phi } => {
            let mut dset = FormulaSet::new();
            for d in defs {
                dset.insert(ctx.formula(d)?);
            }
            check_simple_definitions(dset.iter(), &ctx.reserved)?;
            let mut hset = FormulaSet::new();
            for h in hyps {
                hset.insert(ctx.formula(h)?);
            }
            let phi = ctx.formula(phi)?;
            if !(ctx.hol.contains(&phi) || dset.contains(&phi) || hset.contains(&phi)) {
                return Err(KernelError::side(rule, format!("{phi} ∉ HOL ∪ Δ ∪ Γ")));
            }
            Ok(Sequent {
                defs: dset,
                hyps: hset,
                concl: phi,
            })
        }
        Step::ImpI { phi, retain } => {
            let p = premises[0];
            let phi = ctx.formula(phi)?;
            if !p.hyps.contains(&phi) {
                return Err(KernelError::mismatch(rule, format!("{phi} is not a hypothesis")));
            }
            let mut hyps = p.hyps.clone();
            if !retain {
                hyps.remove(&phi);
            }
            Ok(Sequent {
                defs: p.defs.clone(),
                hyps,
                concl: super::build::imp(phi, p.concl.clone()),
            })
        }
        Step::ImpE => {
            let (major, minor) = (premises[0], premises[1]);
            if major.defs != minor.defs || major.hyps != minor.hyps {
                return Err(KernelError::mismatch(rule, "contexts differ"));
            }
            let (a, b) = dest_imp(&major.concl)
                .ok_or_else(|| KernelError::mismatch(rule, "major premise is not an implication"))?;
            if !a.alpha_eq(&minor.concl) {
                return Err(KernelError::mismatch(
                    rule,
                    format!("antecedent {a} differs from {}", minor.concl),
                ));
            }
            Ok(Sequent {
                defs: major.defs.clone(),
                hyps: major.hyps.clone(),
                concl: b.clone(),
            })
        }
        Step::TypInst { alpha, sigma } => {
            let p = premises[0];
            if p.hyps.type_vars().contains(alpha) {
                return Err(KernelError::side(rule, format!("'{alpha} ∈ TV(Γ)")));
            }
            let s = TypeSubst::from([(alpha.clone(), sigma.clone())]);
            let concl = ctx.formula(&subst_type_in_term(&p.concl, &s))?;
            Ok(Sequent {
                defs: p.defs.clone(),
                hyps: p.hyps.clone(),
                concl,
            })
        }
        Step::TrmInst { x, b } => {
            let p = premises[0];
            let tb = infer_type(b, &ctx.sig)?;
            if tb != x.ty {
                return Err(KernelError::side(rule, format!("{b} :: {tb}, not {}", x.ty)));
            }
            if p.defs.free_vars().contains(x) || p.hyps.free_vars().contains(x) {
                return Err(KernelError::side(rule, format!("{} ∈ FV(Δ ∪ Γ)", x.name)));
            }
            let s = TermSubst::from([(x.clone(), b.clone())]);
            let concl = ctx.formula(&subst_many(&p.concl, &s))?;
            Ok(Sequent {
                defs: p.defs.clone(),
                hyps: p.hyps.clone(),
                concl,
            })
        }
        Step::Ext { f, g, x } => {
            let p = premises[0];
            let tf = infer_type(f, &ctx.sig)?;
            let tg = infer_type(g, &ctx.sig)?;
            if tf != tg {
                return Err(KernelError::mismatch(rule, format!("{tf} vs {tg}")));
            }
            match tf.as_arrow() {
                Some((dom, _)) if *dom == x.ty => {}
                _ => return Err(KernelError::mismatch(rule, format!("{tf} does not take {}", x.ty))),
            }
            if f.has_free(x) || g.has_free(x) {
                return Err(KernelError::side(rule, format!("{} free in F or G", x.name)));
            }
            if p.defs.free_vars().contains(x) || p.hyps.free_vars().contains(x) {
                return Err(KernelError::side(rule, format!("{} ∈ FV(Δ ∪ Γ)", x.name)));
            }
            let xt = Term::Var(x.clone());
            let expect = beta_normalize(&eq(
                Term::app(f.clone(), xt.clone()),
                Term::app(g.clone(), xt),
            ));
            if !expect.alpha_eq(&p.concl) {
                return Err(KernelError::mismatch(
                    rule,
                    format!("premise {} is not {expect}", p.concl),
                ));
            }
            Ok(Sequent {
                defs: p.defs.clone(),
                hyps: p.hyps.clone(),
                concl: beta_normalize(&eq(f.clone(), g.clone())),
            })
        }
    }
}

#[derive(Debug)]
struct Node {
    step: Step,
    premises: Vec<Derivation>,
    sequent: Sequent,
}

/// A proof tree whose every node was checked by [`derive`] on construction.
#[derive(Clone, Debug)]
pub struct Derivation(Arc<Node>);

impl Derivation {
    pub fn new(ctx: &Context, step: Step, premises: Vec<Derivation>) -> KResult<Self> {
        let seqs: Vec<&Sequent> = premises.iter().map(|d| &d.0.sequent).collect();
        let sequent = derive(ctx, &step, &seqs)?;
        Ok(Derivation(Arc::new(Node {
            step,
            premises,
            sequent,
        })))
    }

    pub fn sequent(&self) -> &Sequent {
        &self.0.sequent
    }

    pub fn concl(&self) -> &Term {
        &self.0.sequent.concl
    }

    pub fn step(&self) -> &Step {
        &self.0.step
    }

    pub fn premises(&self) -> &[Derivation] {
        &self.0.premises
    }

    /// Number of distinct nodes.
    pub fn node_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        fn go(d: &Derivation, seen: &mut BTreeSet<usize>) {
            if seen.insert(Arc::as_ptr(&d.0) as usize) {
                for p in &d.0.premises {
                    go(p, seen);
                }
            }
        }
        go(self, &mut seen);
        seen.len()
    }

    /// Re-runs every step bottom-up and checks each stored sequent.
    pub fn replay(&self, ctx: &Context) -> KResult<Sequent> {
        let mut memo: HashMap<usize, Sequent> = HashMap::new();
        self.replay_memo(ctx, &mut memo)
    }

    fn replay_memo(&self, ctx: &Context, memo: &mut HashMap<usize, Sequent>) -> KResult<Sequent> {
        let key = Arc::as_ptr(&self.0) as usize;
        if let Some(s) = memo.get(&key) {
            return Ok(s.clone());
        }
        let mut seqs = Vec::with_capacity(self.0.premises.len());
        for p in &self.0.premises {
            seqs.push(p.replay_memo(ctx, memo)?);
        }
        let refs: Vec<&Sequent> = seqs.iter().collect();
        let wrap = |e: KernelError| KernelError::ReplayFailed {
            rule: self.0.step.name().to_owned(),
            source: Box::new(e),
        };
        let got = derive(ctx, &self.0.step, &refs).map_err(wrap)?;
        if !got.alpha_eq(&self.0.sequent) {
            return Err(wrap(KernelError::mismatch(
                self.0.step.name(),
                "stored sequent differs from replayed one",
            )));
        }
        memo.insert(key, got.clone());
        Ok(got)
    }
}
