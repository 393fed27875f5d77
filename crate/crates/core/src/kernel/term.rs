use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::types::Type;

/// A term variable: a raw name paired with its type. Two variables are the
/// same variable only when both components agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: Type) -> Var {
        Var {
            name: name.into(),
            ty,
        }
    }
}

/// Raw terms with named binders. Equality via `==` is syntactic; use
/// [`Term::alpha_eq`] or [`Term::canonical`] for comparison modulo α.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(String, Type),
    App(Arc<Term>, Arc<Term>),
    Abs(Var, Arc<Term>),
}

/// Binder-index form of a term. α-equivalent terms map to identical values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nameless {
    Bound(u32),
    Free(Var),
    Const(String, Type),
    App(Box<Nameless>, Box<Nameless>),
    Abs(Type, Box<Nameless>),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var(Var::new(name, ty))
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn abs(v: Var, body: Term) -> Term {
        Term::Abs(v, Arc::new(body))
    }

    /// Nested abstraction `λv1 … vn. body`.
    pub fn abs_many<I>(vars: I, body: Term) -> Term
    where
        I: IntoIterator<Item = Var>,
        I::IntoIter: DoubleEndedIterator,
    {
        vars.into_iter().rev().fold(body, |acc, v| Term::abs(v, acc))
    }

    /// Splits an application spine into head and arguments.
    pub fn strip_app(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head_const(&self) -> Option<(&str, &Type)> {
        match self.strip_app().0 {
            Term::Const(n, t) => Some((n.as_str(), t)),
            _ => None,
        }
    }

    pub fn is_const(&self, name: &str) -> bool {
        matches!(self, Term::Const(n, _) if n == name)
    }

    /// Matches `c a b` for the named constant `c`.
    pub fn as_binary(&self, name: &str) -> Option<(&Term, &Term)> {
        let (head, args) = self.strip_app();
        if head.is_const(name) && args.len() == 2 {
            Some((args[0], args[1]))
        } else {
            None
        }
    }

    /// Matches `c a` for the named constant `c`.
    pub fn as_unary(&self, name: &str) -> Option<&Term> {
        let (head, args) = self.strip_app();
        if head.is_const(name) && args.len() == 1 {
            Some(args[0])
        } else {
            None
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
            Term::Const(..) => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs(v, b) => {
                bound.push(v);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(..) => false,
            Term::App(f, a) => f.has_free(v) || a.has_free(v),
            Term::Abs(w, b) => w != v && b.has_free(v),
        }
    }

    /// Type variables occurring in any annotation of the term.
    pub fn type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_type_vars(&mut out);
        out
    }

    fn collect_type_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => v.ty.collect_type_vars(out),
            Term::Const(_, t) => t.collect_type_vars(out),
            Term::App(f, a) => {
                f.collect_type_vars(out);
                a.collect_type_vars(out);
            }
            Term::Abs(v, b) => {
                v.ty.collect_type_vars(out);
                b.collect_type_vars(out);
            }
        }
    }

    /// Every constant instance occurring in the term.
    pub fn constants(&self) -> BTreeSet<(String, Type)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Const(n, ty) = t {
                out.insert((n.clone(), ty.clone()));
            }
        });
        out
    }

    pub fn constant_names(&self) -> BTreeSet<String> {
        self.constants().into_iter().map(|(n, _)| n).collect()
    }

    pub fn mentions_const(&self, name: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(n, _) => n == name,
            Term::App(f, a) => f.mentions_const(name) || a.mentions_const(name),
            Term::Abs(_, b) => b.mentions_const(name),
        }
    }

    pub fn walk<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        match self {
            Term::Var(_) | Term::Const(..) => {}
            Term::App(g, a) => {
                g.walk(f);
                a.walk(f);
            }
            Term::Abs(_, b) => b.walk(f),
        }
    }

    pub fn canonical(&self) -> Nameless {
        fn go(t: &Term, binders: &mut Vec<Var>) -> Nameless {
            match t {
                Term::Var(v) => match binders.iter().rev().position(|b| b == v) {
                    Some(i) => Nameless::Bound(i as u32),
                    None => Nameless::Free(v.clone()),
                },
                Term::Const(n, ty) => Nameless::Const(n.clone(), ty.clone()),
                Term::App(f, a) => {
                    Nameless::App(Box::new(go(f, binders)), Box::new(go(a, binders)))
                }
                Term::Abs(v, b) => {
                    binders.push(v.clone());
                    let body = go(b, binders);
                    binders.pop();
                    Nameless::Abs(v.ty.clone(), Box::new(body))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Renames every binder to a deterministic name (`_0`, `_1`, … by binder
    /// depth, skipping names that are free in the term).
    pub fn canonicalize(&self) -> Term {
        Term::from_nameless(&self.canonical())
    }

    pub fn from_nameless(n: &Nameless) -> Term {
        let free: BTreeSet<String> = collect_nameless_free(n);
        fn go(n: &Nameless, free: &BTreeSet<String>, binders: &mut Vec<(Var, usize)>) -> Term {
            match n {
                Nameless::Bound(i) => {
                    Term::Var(binders[binders.len() - 1 - *i as usize].0.clone())
                }
                Nameless::Free(v) => Term::Var(v.clone()),
                Nameless::Const(c, t) => Term::Const(c.clone(), t.clone()),
                Nameless::App(f, a) => Term::app(go(f, free, binders), go(a, free, binders)),
                Nameless::Abs(ty, b) => {
                    let mut k = binders.last().map_or(0, |(_, k)| k + 1);
                    let name = loop {
                        let candidate = format!("_{k}");
                        if !free.contains(&candidate) {
                            break candidate;
                        }
                        k += 1;
                    };
                    let v = Var::new(name, ty.clone());
                    binders.push((v.clone(), k));
                    let body = go(b, free, binders);
                    binders.pop();
                    Term::abs(v, body)
                }
            }
        }
        go(n, &free, &mut Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(..) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }
}

fn collect_nameless_free(n: &Nameless) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn go(n: &Nameless, out: &mut BTreeSet<String>) {
        match n {
            Nameless::Free(v) => {
                out.insert(v.name.clone());
            }
            Nameless::App(f, a) => {
                go(f, out);
                go(a, out);
            }
            Nameless::Abs(_, b) => go(b, out),
            _ => {}
        }
    }
    go(n, &mut out);
    out
}

/// Constants rendered infix by the display printer, tightest first.
const INFIX: &[&str] = &[
    "∈", "<", "+", "⊆", "⇸", "`", "−ₗ", ":", "⊓", "⊔", "⇛", "⊑", "=", "∧", "∨", "⟷", "→", "m∈", "m<",
];
const BINDERS: &[&str] = &["∀", "∃", "∃!", "∃≤1"];

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atomic(t: &Term) -> bool {
            matches!(t, Term::Var(_) | Term::Const(..))
        }
        fn arg(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if atomic(t) {
                write!(f, "{t}")
            } else {
                write!(f, "({t})")
            }
        }
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::Const(n, _) => write!(f, "{n}"),
            Term::Abs(v, b) => write!(f, "λ{}. {}", v.name, b),
            Term::App(..) => {
                let (head, args) = self.strip_app();
                if let Term::Const(n, _) = head {
                    if args.len() == 2 && INFIX.contains(&n.as_str()) {
                        arg(args[0], f)?;
                        write!(f, " {n} ")?;
                        return arg(args[1], f);
                    }
                    if args.len() == 1 && BINDERS.contains(&n.as_str()) {
                        if let Term::Abs(v, b) = args[0] {
                            return write!(f, "{n}{}. {}", v.name, b);
                        }
                    }
                }
                arg(head, f)?;
                for a in args {
                    write!(f, " ")?;
                    arg(a, f)?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d0() -> Type {
        Type::Domain(0)
    }

    #[test]
    fn free_vars_of_abstraction() {
        let x = Var::new("x", Type::arrow(d0(), d0()));
        let y = Var::new("y", d0());
        let t = Term::abs(x.clone(), Term::app(Term::Var(x), Term::Var(y.clone())));
        assert_eq!(t.free_vars(), BTreeSet::from([y]));
        assert!(Term::constant("c", d0()).free_vars().is_empty());
    }

    #[test]
    fn alpha_equivalence_ignores_binder_names() {
        let x = Var::new("x", d0());
        let y = Var::new("y", d0());
        let t1 = Term::abs(x.clone(), Term::Var(x));
        let t2 = Term::abs(y.clone(), Term::Var(y));
        assert!(t1.alpha_eq(&t2));
        assert_eq!(t1.canonicalize(), t2.canonicalize());
    }

    #[test]
    fn same_name_different_type_is_a_different_variable() {
        let x0 = Var::new("x", d0());
        let x1 = Var::new("x", Type::Domain(1));
        let t = Term::abs(x0, Term::Var(x1.clone()));
        assert_eq!(t.free_vars(), BTreeSet::from([x1]));
    }

    #[test]
    fn canonicalize_avoids_free_names() {
        let free = Var::new("_0", d0());
        let b = Var::new("b", d0());
        let t = Term::abs(b, Term::Var(free.clone()));
        let c = t.canonicalize();
        assert!(c.alpha_eq(&t));
        assert_eq!(c.free_vars(), BTreeSet::from([free]));
        assert_eq!(c.canonicalize(), c);
    }
}
