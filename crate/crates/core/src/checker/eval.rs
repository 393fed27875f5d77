use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::hfmodel::HfValue;
use crate::kernel::{Term, Type, Var};

use super::env::{Candidates, Env};
use super::value::{Builtin, FnVal, NativeFn, Scope, Val};
use super::{EResult, EvalError};

/// One assignment of a countermodel, in binding order.
pub type Witness = Vec<(String, Val)>;

/// Evaluates terms over an [`Env`]. Not shared between threads; each check
/// gets its own evaluator so step counts stay per check.
pub struct Evaluator<'e> {
    env: &'e Env,
    steps: Cell<u64>,
    sampled: Cell<bool>,
    memo: RefCell<HashMap<MemoKey, Val>>,
}

const MEMO_LIMIT: usize = 1 << 16;

/// Arguments of a native call with a function-valued argument. Function
/// values compare by identity; the key holds them, so an address cannot be
/// reused while it is cached.
struct MemoKey {
    imp: NativeFn,
    args: Vec<Val>,
}

fn same(a: &Val, b: &Val) -> bool {
    match (a, b) {
        (Val::Bool(x), Val::Bool(y)) => x == y,
        (Val::Ind(x), Val::Ind(y)) => x == y,
        (Val::Fun(f), Val::Fun(g)) => Arc::ptr_eq(f, g),
        _ => false,
    }
}

impl PartialEq for MemoKey {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.imp, &o.imp)
            && self.args.len() == o.args.len()
            && self.args.iter().zip(&o.args).all(|(a, b)| same(a, b))
    }
}

impl Eq for MemoKey {}

impl Hash for MemoKey {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (Arc::as_ptr(&self.imp) as *const () as usize).hash(h);
        for a in &self.args {
            match a {
                Val::Bool(b) => b.hash(h),
                Val::Ind(v) => v.hash(h),
                Val::Fun(f) => (Arc::as_ptr(f) as usize).hash(h),
            }
        }
    }
}

fn arg_type(t: &Type) -> EResult<&Type> {
    t.as_arrow()
        .map(|(a, _)| a)
        .ok_or_else(|| EvalError::Type(format!("expected a function type, found {t}")))
}

/// The `n`-th argument type of a curried function type.
fn nth_arg(t: &Type, n: usize) -> EResult<&Type> {
    let (args, _) = t.strip_arrows();
    args.get(n)
        .copied()
        .ok_or_else(|| EvalError::Type(format!("{t} has no argument {n}")))
}

impl<'e> Evaluator<'e> {
    pub fn new(env: &'e Env) -> Self {
        Evaluator {
            env,
            steps: Cell::new(0),
            sampled: Cell::new(false),
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn env(&self) -> &'e Env {
        self.env
    }

    /// Quantifier instances visited so far.
    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    /// Whether some quantifier ranged over a sample rather than everything.
    pub fn sampled(&self) -> bool {
        self.sampled.get()
    }

    fn tick(&self) -> EResult<()> {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        if n > self.env.bounds.max_steps {
            return Err(EvalError::Budget(format!(
                "more than {} quantifier instances",
                self.env.bounds.max_steps
            )));
        }
        Ok(())
    }

    fn candidates(&self, t: &Type) -> EResult<Candidates> {
        let c = self.env.candidates(t)?;
        if !c.exhaustive {
            self.sampled.set(true);
        }
        Ok(c)
    }

    pub fn eval_closed(&self, t: &Term) -> EResult<Val> {
        self.eval(t, &Scope::default())
    }

    pub fn holds(&self, t: &Term) -> EResult<bool> {
        self.eval_closed(t)?.as_bool()
    }

    pub fn eval(&self, t: &Term, scope: &Scope) -> EResult<Val> {
        match t {
            Term::Var(v) => scope
                .lookup(v)
                .cloned()
                .ok_or_else(|| EvalError::Unbound(format!("variable {}", v.name))),
            Term::Const(n, ty) => self.constant(n, ty),
            Term::Abs(v, b) => Ok(Val::fun(FnVal::Closure {
                var: v.clone(),
                body: (**b).clone(),
                scope: scope.clone(),
            })),
            Term::App(..) => {
                let (head, args) = t.strip_app();
                if let Term::Const(n, ty) = head {
                    if let Some(v) = self.special(n, ty, &args, scope)? {
                        return Ok(v);
                    }
                    if let Some(v) = self.call_native(n, &args, None, scope)? {
                        return Ok(v);
                    }
                }
                let mut f = self.eval(head, scope)?;
                for a in args {
                    let x = self.eval(a, scope)?;
                    f = self.apply(&f, x)?;
                }
                Ok(f)
            }
        }
    }

    /// Connectives that must not evaluate all their arguments, and binders
    /// applied to a λ.
    fn special(&self, n: &str, ty: &Type, args: &[&Term], scope: &Scope) -> EResult<Option<Val>> {
        let b = |t: &Term| -> EResult<bool> { self.eval(t, scope)?.as_bool() };
        let out = match (n, args) {
            ("∧", [x, y]) => b(x)? && b(y)?,
            ("∨", [x, y]) => b(x)? || b(y)?,
            ("→", [x, y]) => !b(x)? || b(y)?,
            ("¬", [x]) => !b(x)?,
            ("⟷", [x, y]) => b(x)? == b(y)?,
            (":", [x, p]) => {
                let x = self.eval(x, scope)?;
                self.has_type(&x, p, scope)?
            }
            ("=", [x, y]) => {
                let (x, y) = (self.eval(x, scope)?, self.eval(y, scope)?);
                match (&x, &y) {
                    (Val::Ind(a), Val::Ind(b)) => a == b,
                    _ => self.equal(&x, &y, nth_arg(ty, 0)?)?,
                }
            }
            ("IF", [c, x, y]) => return Ok(Some(self.eval(if b(c)? { x } else { y }, scope)?)),
            ("∀" | "∃" | "∃!" | "∃≤1", [Term::Abs(v, body)]) => {
                let q = Builtin::from_name(n).expect("quantifier");
                self.quantify(q, &v.ty, |c| {
                    self.eval(body, &scope.bind(v.clone(), c.clone()))?.as_bool()
                })?
            }
            ("℩", [d, Term::Abs(v, body)]) => {
                let d = self.eval(d, scope)?;
                return Ok(Some(self.iota(&v.ty, d, |c| {
                    self.eval(body, &scope.bind(v.clone(), c.clone()))?.as_bool()
                })?));
            }
            _ => return Ok(None),
        };
        Ok(Some(Val::Bool(out)))
    }

    /// `x : P`, looking through ⊓ ⊔ ⊤ ⊥ without building predicate values.
    fn has_type(&self, x: &Val, p: &Term, scope: &Scope) -> EResult<bool> {
        let (head, args) = p.strip_app();
        if let Term::Const(n, _) = head {
            match (n.as_str(), args.as_slice()) {
                ("⊓", [a, b]) => {
                    return Ok(self.has_type(x, a, scope)? && self.has_type(x, b, scope)?)
                }
                ("⊔", [a, b]) => {
                    return Ok(self.has_type(x, a, scope)? || self.has_type(x, b, scope)?)
                }
                ("⊤", []) => return Ok(true),
                ("⊥", []) => return Ok(false),
                _ => {}
            }
            if let Some(v) = self.call_native(n, &args, Some(x), scope)? {
                return v.as_bool();
            }
        }
        let pv = self.eval(p, scope)?;
        self.apply(&pv, x.clone())?.as_bool()
    }

    /// Calls a native constant applied to exactly its arity (counting
    /// `extra` as a final argument) without building partial applications.
    fn call_native(&self, n: &str, args: &[&Term], extra: Option<&Val>, scope: &Scope) -> EResult<Option<Val>> {
        let Some(Val::Fun(f)) = self.env.constants.get(n) else {
            return Ok(None);
        };
        let FnVal::Native { arity, args: pre, imp, .. } = &**f else {
            return Ok(None);
        };
        if !pre.is_empty() || *arity != args.len() + usize::from(extra.is_some()) || *arity == 0 {
            return Ok(None);
        }
        let mut vals = Vec::with_capacity(*arity);
        for a in args {
            vals.push(self.eval(a, scope)?);
        }
        if let Some(x) = extra {
            vals.push(x.clone());
        }
        self.invoke(imp, vals).map(Some)
    }

    /// Runs a native; calls with a function argument are memoized.
    fn invoke(&self, imp: &NativeFn, args: Vec<Val>) -> EResult<Val> {
        if !args.iter().any(|a| matches!(a, Val::Fun(_))) {
            return imp(self, &args);
        }
        let key = MemoKey { imp: imp.clone(), args };
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = imp(self, &key.args)?;
        let mut memo = self.memo.borrow_mut();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, v.clone());
        Ok(v)
    }

    fn constant(&self, n: &str, ty: &Type) -> EResult<Val> {
        match n {
            "True" => return Ok(Val::Bool(true)),
            "False" => return Ok(Val::Bool(false)),
            _ => {}
        }
        if let Some(v) = self.env.constants.get(n) {
            if let Val::Fun(f) = v {
                if let FnVal::Native { arity: 0, imp, .. } = &**f {
                    return imp(self, &[]);
                }
            }
            return Ok(v.clone());
        }
        if let Some(op) = Builtin::from_name(n) {
            return Ok(Val::fun(FnVal::Builtin {
                op,
                ty: ty.clone(),
                args: Vec::new(),
            }));
        }
        if self.env.unmaterialized.contains(n) {
            return Err(EvalError::Unmaterialized(n.to_owned()));
        }
        Err(EvalError::Unbound(format!("constant {n}")))
    }

    pub fn apply(&self, f: &Val, x: Val) -> EResult<Val> {
        let Val::Fun(g) = f else {
            return Err(EvalError::Type(format!("{f} applied to {x}")));
        };
        match &**g {
            FnVal::Closure { var, body, scope } => self.eval(body, &scope.bind(var.clone(), x)),
            FnVal::Builtin { op, ty, args } => {
                let mut args = args.clone();
                args.push(x);
                if args.len() == op.arity() {
                    self.run_builtin(*op, ty, &args)
                } else {
                    Ok(Val::fun(FnVal::Builtin {
                        op: *op,
                        ty: ty.clone(),
                        args,
                    }))
                }
            }
            FnVal::Native { name, arity, args, imp } => {
                let mut args = args.clone();
                args.push(x);
                if args.len() == *arity {
                    self.invoke(imp, args)
                } else {
                    Ok(Val::fun(FnVal::Native {
                        name: name.clone(),
                        arity: *arity,
                        args,
                        imp: imp.clone(),
                    }))
                }
            }
            FnVal::PredSet(s) => Ok(Val::Bool(s.contains(x.as_ind()?))),
            FnVal::RelSet(r) => Ok(Val::fun(FnVal::RelRow(r.clone(), x.as_ind()?.clone()))),
            FnVal::RelRow(r, a) => Ok(Val::Bool(r.contains(&(a.clone(), x.as_ind()?.clone())))),
            FnVal::OpMap(m, d) => Ok(Val::Ind(m.get(x.as_ind()?).unwrap_or(d).clone())),
        }
    }

    /// `p x` for a predicate value.
    pub fn test(&self, p: &Val, x: &HfValue) -> EResult<bool> {
        self.apply(p, Val::Ind(x.clone()))?.as_bool()
    }

    /// `r x y` for a relation value.
    pub fn test2(&self, r: &Val, x: &HfValue, y: &HfValue) -> EResult<bool> {
        let row = self.apply(r, Val::Ind(x.clone()))?;
        self.apply(&row, Val::Ind(y.clone()))?.as_bool()
    }

    fn quantify(&self, q: Builtin, t: &Type, mut body: impl FnMut(&Val) -> EResult<bool>) -> EResult<bool> {
        let cands = self.candidates(t)?;
        let mut count = 0usize;
        for c in cands.vals.iter() {
            self.tick()?;
            let v = body(c)?;
            match q {
                Builtin::All if !v => return Ok(false),
                Builtin::Ex if v => return Ok(true),
                Builtin::ExOne | Builtin::AtMostOne if v => {
                    count += 1;
                    if count > 1 {
                        return Ok(false);
                    }
                }
                _ => {}
            }
        }
        Ok(match q {
            Builtin::All => true,
            Builtin::Ex => false,
            Builtin::ExOne => count == 1,
            _ => true,
        })
    }

    /// The unique candidate satisfying `p`, else the default.
    fn iota(&self, t: &Type, d: Val, mut p: impl FnMut(&Val) -> EResult<bool>) -> EResult<Val> {
        let cands = self.candidates(t)?;
        let mut found: Option<&Val> = None;
        for c in cands.vals.iter() {
            self.tick()?;
            if p(c)? {
                if found.is_some() {
                    return Ok(d);
                }
                found = Some(c);
            }
        }
        Ok(found.cloned().unwrap_or(d))
    }

    /// Extensional equality at type `t`.
    pub fn equal(&self, a: &Val, b: &Val, t: &Type) -> EResult<bool> {
        match (a, b) {
            (Val::Bool(x), Val::Bool(y)) => Ok(x == y),
            (Val::Ind(x), Val::Ind(y)) => Ok(x == y),
            (Val::Fun(_), Val::Fun(_)) => {
                let (dom, cod) = t
                    .as_arrow()
                    .ok_or_else(|| EvalError::Type(format!("functions compared at {t}")))?;
                let cands = self.candidates(dom)?;
                for c in cands.vals.iter() {
                    self.tick()?;
                    let l = self.apply(a, c.clone())?;
                    let r = self.apply(b, c.clone())?;
                    if !self.equal(&l, &r, cod)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(EvalError::Type(format!("cannot compare {a} with {b}"))),
        }
    }

    fn run_builtin(&self, op: Builtin, ty: &Type, a: &[Val]) -> EResult<Val> {
        use Builtin::*;
        let bool_of = |v: &Val| v.as_bool();
        let out = match op {
            Eq => self.equal(&a[0], &a[1], nth_arg(ty, 0)?)?,
            Imp => !bool_of(&a[0])? || bool_of(&a[1])?,
            And => bool_of(&a[0])? && bool_of(&a[1])?,
            Or => bool_of(&a[0])? || bool_of(&a[1])?,
            Iff => bool_of(&a[0])? == bool_of(&a[1])?,
            Not => !bool_of(&a[0])?,
            All | Ex | ExOne | AtMostOne => {
                let t = arg_type(arg_type(ty)?)?;
                self.quantify(op, t, |c| self.apply(&a[0], c.clone())?.as_bool())?
            }
            If => return Ok(if bool_of(&a[0])? { a[1].clone() } else { a[2].clone() }),
            Iota => {
                let t = nth_arg(ty, 0)?;
                return self.iota(t, a[0].clone(), |c| self.apply(&a[1], c.clone())?.as_bool());
            }
            HasType => self.apply(&a[1], a[0].clone())?.as_bool()?,
            Meet => {
                self.apply(&a[0], a[2].clone())?.as_bool()?
                    && self.apply(&a[1], a[2].clone())?.as_bool()?
            }
            Join => {
                self.apply(&a[0], a[2].clone())?.as_bool()?
                    || self.apply(&a[1], a[2].clone())?.as_bool()?
            }
            Top => true,
            Bot => false,
            Sub => {
                let t = arg_type(nth_arg(ty, 0)?)?;
                self.quantify(All, t, |c| {
                    Ok(!self.apply(&a[0], c.clone())?.as_bool()?
                        || self.apply(&a[1], c.clone())?.as_bool()?)
                })?
            }
            FunTy => {
                let t = arg_type(nth_arg(ty, 0)?)?;
                self.quantify(All, t, |c| {
                    if !self.apply(&a[0], c.clone())?.as_bool()? {
                        return Ok(true);
                    }
                    let y = self.apply(&a[2], c.clone())?;
                    self.apply(&a[1], y)?.as_bool()
                })?
            }
            Pi => {
                let t = arg_type(nth_arg(ty, 0)?)?;
                self.quantify(All, t, |c| {
                    if !self.apply(&a[0], c.clone())?.as_bool()? {
                        return Ok(true);
                    }
                    let y = self.apply(&a[2], c.clone())?;
                    let fam = self.apply(&a[1], c.clone())?;
                    self.apply(&fam, y)?.as_bool()
                })?
            }
        };
        Ok(Val::Bool(out))
    }

    /// A countermodel for a closed formula: leading universal binders,
    /// implications, conjunctions and the semantic ⊑ / ⇛ / = judgements are
    /// searched in canonical order; anything else is evaluated whole.
    pub fn refute(&self, t: &Term, scope: &Scope) -> EResult<Option<Witness>> {
        if let Some(Term::Abs(v, body)) = t.as_unary("∀") {
            let cands = self.candidates(&v.ty)?;
            for c in cands.vals.iter() {
                self.tick()?;
                if let Some(mut w) = self.refute(body, &scope.bind(v.clone(), c.clone()))? {
                    w.insert(0, (v.name.clone(), c.clone()));
                    return Ok(Some(w));
                }
            }
            return Ok(None);
        }
        if let Some((a, b)) = t.as_binary("→") {
            if !self.eval(a, scope)?.as_bool()? {
                return Ok(None);
            }
            return self.refute(b, scope);
        }
        if let Some((a, b)) = t.as_binary("∧") {
            if let Some(w) = self.refute(a, scope)? {
                return Ok(Some(w));
            }
            return self.refute(b, scope);
        }
        if let Some(w) = self.refute_pointwise(t, scope)? {
            return Ok(w);
        }
        Ok((!self.eval(t, scope)?.as_bool()?).then(Vec::new))
    }

    /// `P ⊑ Q`, `f : P ⇛ Q` and `F = G` at a function type, refuted at a
    /// point named `x`.
    fn refute_pointwise(&self, t: &Term, scope: &Scope) -> EResult<Option<Option<Witness>>> {
        let (head, args) = t.strip_app();
        let Term::Const(n, ty) = head else {
            return Ok(None);
        };
        let point = |dom: &Type, bad: &dyn Fn(&Val) -> EResult<bool>| -> EResult<Option<Witness>> {
            let cands = self.candidates(dom)?;
            for c in cands.vals.iter() {
                self.tick()?;
                if bad(c)? {
                    return Ok(Some(vec![("x".to_owned(), c.clone())]));
                }
            }
            Ok(None)
        };
        match (n.as_str(), args.as_slice()) {
            ("⊑", [p, q]) => {
                let (p, q) = (self.eval(p, scope)?, self.eval(q, scope)?);
                let dom = arg_type(nth_arg(ty, 0)?)?;
                Ok(Some(point(dom, &|c| {
                    Ok(self.apply(&p, c.clone())?.as_bool()? && !self.apply(&q, c.clone())?.as_bool()?)
                })?))
            }
            (":", [f, fty]) if fty.as_binary("⇛").is_some() => {
                let (p, q) = fty.as_binary("⇛").expect("checked");
                let (f, p, q) = (self.eval(f, scope)?, self.eval(p, scope)?, self.eval(q, scope)?);
                let dom = arg_type(nth_arg(ty, 0)?)?;
                Ok(Some(point(dom, &|c| {
                    if !self.apply(&p, c.clone())?.as_bool()? {
                        return Ok(false);
                    }
                    let y = self.apply(&f, c.clone())?;
                    Ok(!self.apply(&q, y)?.as_bool()?)
                })?))
            }
            ("=", [l, r]) => {
                let at = nth_arg(ty, 0)?;
                let Some((dom, cod)) = at.as_arrow() else {
                    return Ok(None);
                };
                let (l, r) = (self.eval(l, scope)?, self.eval(r, scope)?);
                Ok(Some(point(dom, &|c| {
                    let a = self.apply(&l, c.clone())?;
                    let b = self.apply(&r, c.clone())?;
                    Ok(!self.equal(&a, &b, cod)?)
                })?))
            }
            _ => Ok(None),
        }
    }
}

/// Universal closure over the free variables, in name order.
pub fn close(t: &Term) -> Term {
    let fv: Vec<Var> = t.free_vars().into_iter().collect();
    crate::kernel::build::all_many(fv, t.clone())
}
