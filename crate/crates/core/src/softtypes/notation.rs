//! Surface notation for formulas, elaborated into core terms.
//!
//! ```text
//! (λ binders body)              (λ binders body else D)   guarded λ
//! (∀ binders φ)  (∃ …)  (∃! …)  (∃≤1 …)
//! (Π (x : P) Q)                 Π P (λx. Q)
//! (℩ k φ D)                     ℩ D (λk. φ)
//! (if b x y)                    IF b x y
//! (sep (b X) φ)                 {b ∈ X | φ}
//! (img B (b X))                 {B | b ∈ X}
//! (img< B (u C))                {B | u < C}
//! (λ< (u B) C)                  λu<B. C
//! (∧ a b c) (∨ …) (→ …)         right-nested
//! (⊓ P Q R) (⊔ …)               left-nested
//! (f a1 … an)                   application; constant instances by matching
//! ```
//!
//! A binder list is either one bounded group `(x y : P)` / `(b ∈ X)`, or a
//! list whose items are a name, a typed name `(x T)`, or a bounded group.
//! Types: `α` `β` `★` `(⇒ T1 … Tn)` plus the core type grammar. Untyped
//! binders and unknown atoms denote variables of the individual type `α`.
//! Numerals `n` stand for `succ (… (succ 0))`.

use std::collections::BTreeSet;

use crate::kernel::build::{self, dest_binder, iota, ite};
use crate::kernel::sexp::{self, ParseError, SExp};
use crate::kernel::syntax::{term_from_sexp, type_from_sexp, type_to_sexp};
use crate::kernel::types::match_into;
use crate::kernel::{infer_type, type_of, Signature, Term, Type, TypeSubst, Var};

use super::defs::has_type;

const KEYWORDS: &[&str] = &[
    "λ", "∀", "∃", "∃!", "∃≤1", "Π", "℩", "if", "sep", "img", "img<", "λ<", ":", "∈", "else",
    "var", "const", "app", "lam",
];

const QUANTIFIERS: &[&str] = &["∀", "∃", "∃!", "∃≤1"];

pub fn individual() -> Type {
    Type::var("a")
}

/// Surface type syntax.
pub fn parse_type(e: &SExp, line: usize) -> Result<Type, ParseError> {
    match e {
        SExp::Atom(a) => match a.as_str() {
            "α" => Ok(Type::var("a")),
            "β" => Ok(Type::var("b")),
            "★" | "bool" => Ok(Type::Bool),
            _ => Err(ParseError::new(line, format!("unknown type '{a}'"))),
        },
        SExp::List(items) if items.first().and_then(SExp::as_atom) == Some("⇒") => {
            if items.len() < 3 {
                return Err(ParseError::new(line, "⇒ needs at least two types"));
            }
            let tys = items[1..]
                .iter()
                .map(|t| parse_type(t, line))
                .collect::<Result<Vec<_>, _>>()?;
            let (last, init) = tys.split_last().unwrap();
            Ok(Type::arrows(init.to_vec(), last.clone()))
        }
        _ => type_from_sexp(e, line),
    }
}

pub fn print_type(t: &Type) -> SExp {
    match t {
        Type::Var(v) if v == "a" => SExp::atom("α"),
        Type::Var(v) if v == "b" => SExp::atom("β"),
        Type::Bool => SExp::atom("★"),
        Type::Arrow(..) => {
            let (args, res) = t.strip_arrows();
            let mut items = vec![SExp::atom("⇒")];
            items.extend(args.into_iter().map(print_type));
            items.push(print_type(res));
            SExp::List(items)
        }
        _ => type_to_sexp(t),
    }
}

fn looks_like_type(e: &SExp) -> bool {
    match e {
        SExp::Atom(a) => matches!(a.as_str(), "α" | "β" | "★" | "bool"),
        SExp::List(items) => matches!(
            items.first().and_then(SExp::as_atom),
            Some("⇒" | "tv" | "d" | "arrow")
        ),
    }
}

fn is_numeral(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Instance of a constant of declared type `decl` applied to arguments of
/// the given types, found by matching argument types left to right.
pub fn infer_instance(decl: &Type, arg_tys: &[Type]) -> Option<Type> {
    let mut s = TypeSubst::new();
    let mut cur = decl;
    for at in arg_tys {
        let (dom, cod) = cur.as_arrow()?;
        if !match_into(dom, at, &mut s) {
            return None;
        }
        cur = cod;
    }
    Some(decl.subst(&s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BoundKind {
    Colon,
    Elem,
}

struct Group {
    vars: Vec<Var>,
    bound: Option<(BoundKind, Term)>,
}

/// Elaborates surface notation against a signature.
pub struct Elaborator<'s> {
    sig: &'s Signature,
    ind: Type,
}

impl<'s> Elaborator<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Elaborator {
            sig,
            ind: individual(),
        }
    }

    pub fn sig(&self) -> &Signature {
        self.sig
    }

    /// Elaborates and type-checks a term.
    pub fn term(&self, e: &SExp, line: usize) -> Result<Term, ParseError> {
        let t = self.elab(e, line, &mut Vec::new())?;
        infer_type(&t, self.sig).map_err(|err| ParseError::new(line, err.to_string()))?;
        Ok(t)
    }

    /// Elaborates a term that must be a formula.
    pub fn formula(&self, e: &SExp, line: usize) -> Result<Term, ParseError> {
        let t = self.term(e, line)?;
        let ty = type_of(&t).map_err(|err| ParseError::new(line, err.to_string()))?;
        if !ty.is_bool() {
            return Err(ParseError::new(line, format!("expected a formula, found type {ty}")));
        }
        Ok(t)
    }

    pub fn term_str(&self, src: &str) -> Result<Term, ParseError> {
        self.term(&sexp::parse(src)?, 1)
    }

    fn err(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(line, msg)
    }

    fn atom(&self, a: &str, line: usize, scope: &[Var]) -> Result<Term, ParseError> {
        if let Some(v) = scope.iter().rev().find(|v| v.name == a) {
            return Ok(Term::Var(v.clone()));
        }
        if let Some(ty) = self.sig.ctyp(a) {
            return Ok(Term::constant(a, ty.clone()));
        }
        if is_numeral(a) {
            return self.numeral(a, line);
        }
        if KEYWORDS.contains(&a) {
            return Err(Self::err(line, format!("keyword '{a}' used as a term")));
        }
        Ok(Term::var(a, self.ind.clone()))
    }

    fn numeral(&self, a: &str, line: usize) -> Result<Term, ParseError> {
        let n: u64 = a
            .parse()
            .map_err(|_| Self::err(line, format!("numeral {a} out of range")))?;
        let (Some(zt), Some(st)) = (self.sig.ctyp("0"), self.sig.ctyp("succ")) else {
            return Err(Self::err(line, "numerals need the constants 0 and succ"));
        };
        let mut t = Term::constant("0", zt.clone());
        for _ in 0..n {
            t = Term::app(Term::constant("succ", st.clone()), t);
        }
        Ok(t)
    }

    fn elab(&self, e: &SExp, line: usize, scope: &mut Vec<Var>) -> Result<Term, ParseError> {
        let items = match e {
            SExp::Atom(a) => return self.atom(a, line, scope),
            SExp::List(items) => items,
        };
        let Some(head) = items.first() else {
            return Err(Self::err(line, "empty application"));
        };
        let shadowed = |h: &str| scope.iter().any(|v| v.name == h);
        if let Some(h) = head.as_atom().filter(|h| !shadowed(h)) {
            match (h, items.len()) {
                ("var" | "const", 3) | ("app", 3) | ("lam", 4) => return term_from_sexp(e, line),
                ("λ", 3) => return self.lambda(&items[1], &items[2], None, line, scope),
                ("λ", 5) if items[3].as_atom() == Some("else") => {
                    return self.lambda(&items[1], &items[2], Some(&items[4]), line, scope)
                }
                (q, 3) if QUANTIFIERS.contains(&q) => {
                    return self.quantifier(q, &items[1], &items[2], line, scope)
                }
                ("Π", 3)
                    if items[1]
                        .as_list()
                        .is_some_and(|g| Self::split_group(g).is_some()) =>
                {
                    return self.pi(&items[1], &items[2], line, scope)
                }
                ("℩", 4) => {
                    let v = self.var_spec(&items[1], line)?;
                    let d = self.elab(&items[3], line, scope)?;
                    scope.push(v.clone());
                    let body = self.elab(&items[2], line, scope);
                    scope.pop();
                    self.check_pair(&d, &Term::var(v.name.clone(), v.ty.clone()), line)?;
                    return Ok(iota(d, Term::abs(v, body?)));
                }
                ("if", 4) => {
                    let b = self.elab(&items[1], line, scope)?;
                    let x = self.elab(&items[2], line, scope)?;
                    let y = self.elab(&items[3], line, scope)?;
                    self.check_pair(&x, &y, line)?;
                    self.expect_type(&b, &Type::Bool, line)?;
                    return Ok(ite(b, x, y));
                }
                ("sep", 3) => return self.sep(&items[1], &items[2], line, scope),
                ("img", 3) => return self.img(&items[1], &items[2], false, line, scope),
                ("img<", 3) => return self.img(&items[1], &items[2], true, line, scope),
                ("λ<", 3) => return self.lam_lt(&items[1], &items[2], line, scope),
                ("∧" | "∨" | "→", n) if n >= 3 => {
                    let parts = self.elab_all(&items[1..], line, scope)?;
                    for p in &parts {
                        self.expect_type(p, &Type::Bool, line)?;
                    }
                    let f = match h {
                        "∧" => build::and,
                        "∨" => build::or,
                        _ => build::imp,
                    };
                    let mut it = parts.into_iter().rev();
                    let last = it.next().unwrap();
                    return Ok(it.fold(last, |acc, p| f(p, acc)));
                }
                ("⊓" | "⊔", n) if n >= 4 => {
                    let parts = self.elab_all(&items[1..], line, scope)?;
                    let mut it = parts.into_iter();
                    let first = it.next().unwrap();
                    let mut acc = first;
                    for p in it {
                        acc = self.apply_const(h, vec![acc, p], line)?;
                    }
                    return Ok(acc);
                }
                _ => {}
            }
            if let Some(decl) = self.sig.ctyp(h) {
                let _ = decl;
                let args = self.elab_all(&items[1..], line, scope)?;
                return self.apply_const(h, args, line);
            }
        }
        let f = self.elab(head, line, scope)?;
        let args = self.elab_all(&items[1..], line, scope)?;
        self.apply(f, args, line)
    }

    fn elab_all(
        &self,
        items: &[SExp],
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Vec<Term>, ParseError> {
        items.iter().map(|i| self.elab(i, line, scope)).collect()
    }

    fn ty(&self, t: &Term, line: usize) -> Result<Type, ParseError> {
        type_of(t).map_err(|e| Self::err(line, e.to_string()))
    }

    fn expect_type(&self, t: &Term, want: &Type, line: usize) -> Result<(), ParseError> {
        let got = self.ty(t, line)?;
        if &got == want {
            Ok(())
        } else {
            Err(Self::err(line, format!("{t} has type {got}, expected {want}")))
        }
    }

    fn check_pair(&self, a: &Term, b: &Term, line: usize) -> Result<(), ParseError> {
        let ta = self.ty(a, line)?;
        self.expect_type(b, &ta, line)
    }

    pub(crate) fn apply_const(
        &self,
        name: &str,
        args: Vec<Term>,
        line: usize,
    ) -> Result<Term, ParseError> {
        let decl = self
            .sig
            .ctyp(name)
            .ok_or_else(|| Self::err(line, format!("unknown constant '{name}'")))?;
        let tys = args
            .iter()
            .map(|a| self.ty(a, line))
            .collect::<Result<Vec<_>, _>>()?;
        let inst = infer_instance(decl, &tys).ok_or_else(|| {
            let shown: Vec<String> = tys.iter().map(|t| t.to_string()).collect();
            Self::err(
                line,
                format!("'{name}' :: {decl} cannot take arguments of types [{}]", shown.join(", ")),
            )
        })?;
        Ok(Term::apps(Term::constant(name, inst), args))
    }

    fn apply(&self, f: Term, args: Vec<Term>, line: usize) -> Result<Term, ParseError> {
        let mut t = f;
        for a in args {
            let tf = self.ty(&t, line)?;
            let ta = self.ty(&a, line)?;
            match tf.as_arrow() {
                Some((dom, _)) if *dom == ta => t = Term::app(t, a),
                _ => {
                    return Err(Self::err(
                        line,
                        format!("cannot apply {t} :: {tf} to {a} :: {ta}"),
                    ))
                }
            }
        }
        Ok(t)
    }

    fn var_spec(&self, e: &SExp, line: usize) -> Result<Var, ParseError> {
        match e {
            SExp::Atom(a) if !KEYWORDS.contains(&a.as_str()) => Ok(Var::new(a.clone(), self.ind.clone())),
            SExp::List(items) if items.len() == 2 && looks_like_type(&items[1]) => {
                let name = items[0]
                    .as_atom()
                    .ok_or_else(|| Self::err(line, format!("bad binder {e}")))?;
                Ok(Var::new(name, parse_type(&items[1], line)?))
            }
            _ => Err(Self::err(line, format!("bad binder {e}"))),
        }
    }

    fn split_group(items: &[SExp]) -> Option<(usize, BoundKind)> {
        items.iter().enumerate().find_map(|(i, it)| match it.as_atom() {
            Some(":") => Some((i, BoundKind::Colon)),
            Some("∈") => Some((i, BoundKind::Elem)),
            _ => None,
        })
    }

    fn group(
        &self,
        items: &[SExp],
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Group, ParseError> {
        let Some((pos, kind)) = Self::split_group(items) else {
            return Err(Self::err(line, "missing ':' in bounded binder"));
        };
        if pos == 0 || pos + 2 != items.len() {
            return Err(Self::err(line, "bounded binder must be (x … : P)"));
        }
        let bound = self.elab(&items[pos + 1], line, scope)?;
        let implied = match kind {
            BoundKind::Colon => self.ty(&bound, line)?.as_arrow().map(|(d, _)| d.clone()),
            BoundKind::Elem => None,
        };
        let vars = items[..pos]
            .iter()
            .map(|v| {
                let mut var = self.var_spec(v, line)?;
                if let (SExp::Atom(_), Some(t)) = (v, &implied) {
                    var.ty = t.clone();
                }
                Ok(var)
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        Ok(Group {
            vars,
            bound: Some((kind, bound)),
        })
    }

    /// Parses a binder list; bounds are elaborated in the scope extended by
    /// earlier groups, which are pushed onto `scope` (the caller pops them).
    fn binders(
        &self,
        e: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Vec<Group>, ParseError> {
        let items = match e {
            SExp::List(items) if !items.is_empty() => items,
            SExp::Atom(_) => {
                let v = self.var_spec(e, line)?;
                scope.push(v.clone());
                return Ok(vec![Group {
                    vars: vec![v],
                    bound: None,
                }]);
            }
            _ => return Err(Self::err(line, "empty binder list")),
        };
        let groups_src: Vec<&SExp> = if Self::split_group(items).is_some() {
            vec![e]
        } else {
            items.iter().collect()
        };
        let mut out = Vec::new();
        for g in groups_src {
            let group = match g {
                SExp::List(gi) if Self::split_group(gi).is_some() => self.group(gi, line, scope)?,
                _ => Group {
                    vars: vec![self.var_spec(g, line)?],
                    bound: None,
                },
            };
            scope.extend(group.vars.iter().cloned());
            out.push(group);
        }
        Ok(out)
    }

    fn guard(&self, v: &Var, bound: &(BoundKind, Term), line: usize) -> Result<Term, ParseError> {
        let x = Term::Var(v.clone());
        match bound {
            (BoundKind::Colon, p) => {
                let want = Type::pred(v.ty.clone());
                self.expect_type(p, &want, line)?;
                Ok(has_type(x, p.clone()))
            }
            (BoundKind::Elem, s) => self.apply_const("∈", vec![x, s.clone()], line),
        }
    }

    fn with_binders<F>(
        &self,
        e: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
        body: F,
    ) -> Result<(Vec<Group>, Term), ParseError>
    where
        F: FnOnce(&Self, &mut Vec<Var>) -> Result<Term, ParseError>,
    {
        let depth = scope.len();
        let groups = self.binders(e, line, scope);
        let result = groups.and_then(|g| body(self, scope).map(|b| (g, b)));
        scope.truncate(depth);
        result
    }

    fn quantifier(
        &self,
        q: &str,
        binders: &SExp,
        body: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (groups, body) =
            self.with_binders(binders, line, scope, |s, sc| s.elab(body, line, sc))?;
        self.expect_type(&body, &Type::Bool, line)?;
        let mut acc = body;
        for g in groups.iter().rev() {
            for v in g.vars.iter().rev() {
                let inner = match &g.bound {
                    None => acc,
                    Some(b) => {
                        let guard = self.guard(v, b, line)?;
                        if q == "∀" {
                            build::imp(guard, acc)
                        } else {
                            build::and(guard, acc)
                        }
                    }
                };
                acc = build::binder(q, v.clone(), inner);
            }
        }
        Ok(acc)
    }

    fn lambda(
        &self,
        binders: &SExp,
        body: &SExp,
        otherwise: Option<&SExp>,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (groups, body) =
            self.with_binders(binders, line, scope, |s, sc| s.elab(body, line, sc))?;
        let mut guards = Vec::new();
        let mut vars = Vec::new();
        for g in &groups {
            for v in &g.vars {
                if let Some(b) = &g.bound {
                    guards.push(self.guard(v, b, line)?);
                }
                vars.push(v.clone());
            }
        }
        let body = match otherwise {
            None if guards.is_empty() => body,
            None => return Err(Self::err(line, "bounded λ needs an else branch")),
            Some(d) => {
                let d = self.elab(d, line, scope)?;
                self.check_pair(&body, &d, line)?;
                let mut it = guards.into_iter().rev();
                let cond = match it.next() {
                    Some(last) => it.fold(last, |acc, g| build::and(g, acc)),
                    None => return Err(Self::err(line, "else branch needs a bounded binder")),
                };
                ite(cond, body, d)
            }
        };
        Ok(Term::abs_many(vars, body))
    }

    fn pi(
        &self,
        binders: &SExp,
        body: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (groups, q) = self.with_binders(binders, line, scope, |s, sc| s.elab(body, line, sc))?;
        let [Group {
            vars,
            bound: Some((BoundKind::Colon, p)),
        }] = groups.as_slice()
        else {
            return Err(Self::err(line, "Π needs exactly one bounded binder (x : P)"));
        };
        let [v] = vars.as_slice() else {
            return Err(Self::err(line, "Π binds a single variable"));
        };
        let fam = Term::abs(v.clone(), q);
        self.apply_const("Π", vec![p.clone(), fam], line)
    }

    fn pair_spec(&self, e: &SExp, line: usize) -> Result<(Var, SExp), ParseError> {
        match e.as_list() {
            Some([v, s]) => Ok((self.var_spec(v, line)?, s.clone())),
            _ => Err(Self::err(line, format!("expected (var set), found {e}"))),
        }
    }

    fn fresh(&self, base: &str, avoid: &[&Term], ty: Type) -> Var {
        let used: BTreeSet<String> = avoid
            .iter()
            .flat_map(|t| {
                let mut n: BTreeSet<String> = t.free_vars().into_iter().map(|v| v.name).collect();
                t.walk(&mut |s| {
                    if let Term::Abs(v, _) = s {
                        n.insert(v.name.clone());
                    }
                });
                n
            })
            .collect();
        crate::kernel::subst::fresh_var(&Var::new(base, ty), &used)
    }

    /// `{b ∈ X | φ}` = `Repl X (λb c. b = c ∧ φ)`.
    fn sep(
        &self,
        spec: &SExp,
        body: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (b, xs) = self.pair_spec(spec, line)?;
        let x = self.elab(&xs, line, scope)?;
        scope.push(b.clone());
        let phi = self.elab(body, line, scope);
        scope.pop();
        let phi = phi?;
        self.expect_type(&phi, &Type::Bool, line)?;
        let c = self.fresh("c", &[&phi, &x], b.ty.clone());
        let rel = Term::abs_many(
            [b.clone(), c.clone()],
            build::and(build::eq(Term::Var(b), Term::Var(c)), phi),
        );
        self.apply_const("Repl", vec![x, rel], line)
    }

    /// `{B | b ∈ X}` = `Repl X (λb c. c = B)`; with `lt`, `X` is `predSet C`.
    fn img(
        &self,
        body: &SExp,
        spec: &SExp,
        lt: bool,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (b, xs) = self.pair_spec(spec, line)?;
        let mut x = self.elab(&xs, line, scope)?;
        if lt {
            x = self.apply_const("predSet", vec![x], line)?;
        }
        scope.push(b.clone());
        let bt = self.elab(body, line, scope);
        scope.pop();
        let bt = bt?;
        let c = self.fresh("c", &[&bt, &x], self.ty(&bt, line)?);
        let rel = Term::abs_many([b, c.clone()], build::eq(Term::Var(c), bt));
        self.apply_const("Repl", vec![x, rel], line)
    }

    /// `λu<B. C` = `mkFun (predSet B) (λu v. v = C)`.
    fn lam_lt(
        &self,
        spec: &SExp,
        body: &SExp,
        line: usize,
        scope: &mut Vec<Var>,
    ) -> Result<Term, ParseError> {
        let (u, bs) = self.pair_spec(spec, line)?;
        let b = self.elab(&bs, line, scope)?;
        let dom = self.apply_const("predSet", vec![b], line)?;
        scope.push(u.clone());
        let c = self.elab(body, line, scope);
        scope.pop();
        let c = c?;
        let v = self.fresh("v", &[&c, &dom], self.ty(&c, line)?);
        let rel = Term::abs_many([u, v.clone()], build::eq(Term::Var(v), c));
        self.apply_const("mkFun", vec![dom, rel], line)
    }
}

/// Elaborates `e` against `sig` (line 1 for errors).
pub fn desugar(e: &SExp, sig: &Signature) -> Result<Term, ParseError> {
    Elaborator::new(sig).term(e, 1)
}

pub fn desugar_str(src: &str, sig: &Signature) -> Result<Term, ParseError> {
    desugar(&sexp::parse(src)?, sig)
}

/// True when every binder name is usable as a surface atom: not a keyword,
/// constant or numeral, and not shadowing another name in scope.
fn names_are_safe(t: &Term, sig: &Signature) -> bool {
    fn bad_name(n: &str, sig: &Signature) -> bool {
        KEYWORDS.contains(&n)
            || sig.contains(n)
            || is_numeral(n)
            || n.is_empty()
            || n.chars().any(|c| c.is_whitespace() || c == '(' || c == ')' || c == ';')
    }
    fn go(t: &Term, sig: &Signature, in_scope: &mut Vec<String>) -> bool {
        match t {
            Term::Var(_) | Term::Const(..) => true,
            Term::App(f, a) => go(f, sig, in_scope) && go(a, sig, in_scope),
            Term::Abs(v, b) => {
                if bad_name(&v.name, sig) || in_scope.contains(&v.name) {
                    return false;
                }
                in_scope.push(v.name.clone());
                let ok = go(b, sig, in_scope);
                in_scope.pop();
                ok
            }
        }
    }
    let mut free: Vec<String> = t.free_vars().into_iter().map(|v| v.name).collect();
    let n = free.len();
    free.dedup();
    if free.len() != n {
        return false;
    }
    go(t, sig, &mut free)
}

/// Prints a term in surface notation, re-sugaring bounded quantifiers and
/// dependent types. `desugar(resugar(t))` is α-equivalent to `t`.
pub fn resugar(t: &Term, sig: &Signature) -> SExp {
    let owned;
    let t = if names_are_safe(t, sig) {
        t
    } else {
        owned = t.canonicalize();
        &owned
    };
    Resugar { sig, ind: individual() }.go(t, &mut Vec::new())
}

struct Resugar<'s> {
    sig: &'s Signature,
    ind: Type,
}

impl Resugar<'_> {
    fn binder(&self, v: &Var) -> SExp {
        if v.ty == self.ind {
            SExp::atom(v.name.clone())
        } else {
            SExp::list([SExp::atom(v.name.clone()), print_type(&v.ty)])
        }
    }

    fn var(&self, v: &Var, bound: &[Var]) -> SExp {
        if bound.contains(v) {
            return SExp::atom(v.name.clone());
        }
        let clash = KEYWORDS.contains(&v.name.as_str())
            || self.sig.contains(&v.name)
            || is_numeral(&v.name)
            || bound.iter().any(|b| b.name == v.name);
        if v.ty == self.ind && !clash {
            SExp::atom(v.name.clone())
        } else {
            SExp::list([SExp::atom("var"), SExp::atom(v.name.clone()), type_to_sexp(&v.ty)])
        }
    }

    fn head_const(&self, name: &str, ty: &Type, args: &[&Term]) -> Option<SExp> {
        let decl = self.sig.ctyp(name)?;
        let tys: Vec<Type> = args.iter().map(|a| type_of(a).ok()).collect::<Option<_>>()?;
        // `:` and `∈` are keywords only inside binder groups.
        let applied_infix = matches!(name, ":" | "∈") && args.len() >= 2;
        if (KEYWORDS.contains(&name) && !applied_infix) || is_numeral(name) {
            return None;
        }
        (infer_instance(decl, &tys).as_ref() == Some(ty)).then(|| SExp::atom(name))
    }

    fn go(&self, t: &Term, bound: &mut Vec<Var>) -> SExp {
        match t {
            Term::Var(v) => self.var(v, bound),
            Term::Const(n, ty) => self
                .head_const(n, ty, &[])
                .unwrap_or_else(|| {
                    SExp::list([SExp::atom("const"), SExp::atom(n.clone()), type_to_sexp(ty)])
                }),
            Term::Abs(v, b) => {
                bound.push(v.clone());
                let body = self.go(b, bound);
                bound.pop();
                SExp::list([SExp::atom("λ"), SExp::list([self.binder(v)]), body])
            }
            Term::App(..) => self.app(t, bound),
        }
    }

    fn bounded(&self, q: &str, v: &Var, body: &Term) -> Option<(Term, Term)> {
        let conn = if q == "∀" { "→" } else { "∧" };
        let (guard, rest) = body.as_binary(conn)?;
        let (x, p) = guard.as_binary(":")?;
        if *x != Term::Var(v.clone()) || p.has_free(v) {
            return None;
        }
        Some((p.clone(), rest.clone()))
    }

    fn app(&self, t: &Term, bound: &mut Vec<Var>) -> SExp {
        let (head, args) = t.strip_app();
        if let Term::Const(name, ty) = head {
            if QUANTIFIERS.contains(&name.as_str()) && args.len() == 1 {
                if let Some((v, body)) = dest_binder(name, t) {
                    let (spec, body_sexp) = match self.bounded(name, v, body) {
                        Some((p, rest)) => {
                            let ps = self.go(&p, bound);
                            bound.push(v.clone());
                            let b = self.go(&rest, bound);
                            bound.pop();
                            (SExp::list([SExp::atom(v.name.clone()), SExp::atom(":"), ps]), b)
                        }
                        None => {
                            bound.push(v.clone());
                            let b = self.go(body, bound);
                            bound.pop();
                            (SExp::list([self.binder(v)]), b)
                        }
                    };
                    return SExp::list([SExp::atom(name.clone()), spec, body_sexp]);
                }
            }
            if name == "Π" && args.len() == 2 {
                if let Term::Abs(v, q) = args[1] {
                    let p = self.go(args[0], bound);
                    bound.push(v.clone());
                    let qs = self.go(q, bound);
                    bound.pop();
                    return SExp::list([
                        SExp::atom("Π"),
                        SExp::list([SExp::atom(v.name.clone()), SExp::atom(":"), p]),
                        qs,
                    ]);
                }
            }
            if name == "℩" && args.len() == 2 {
                if let Term::Abs(v, phi) = args[1] {
                    let d = self.go(args[0], bound);
                    bound.push(v.clone());
                    let ps = self.go(phi, bound);
                    bound.pop();
                    return SExp::list([SExp::atom("℩"), self.binder(v), ps, d]);
                }
            }
            if name == "IF" && args.len() == 3 {
                let mut items = vec![SExp::atom("if")];
                items.extend(args.iter().map(|a| self.go(a, bound)));
                return SExp::List(items);
            }
            let h = match self.head_const(name, ty, &args) {
                Some(h) if !bound.iter().any(|b| b.name == *name) => h,
                _ => SExp::list([
                    SExp::atom("const"),
                    SExp::atom(name.clone()),
                    type_to_sexp(ty),
                ]),
            };
            let mut items = vec![h];
            items.extend(args.iter().map(|a| self.go(a, bound)));
            return SExp::List(items);
        }
        let mut items = vec![self.go(head, bound)];
        items.extend(args.iter().map(|a| self.go(a, bound)));
        SExp::List(items)
    }
}
