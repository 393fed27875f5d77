use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Object-logic types: type variables, truth values, domain types and
/// operator types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(String),
    Bool,
    Domain(u32),
    Arrow(Arc<Type>, Arc<Type>),
}

/// Simultaneous substitution of types for type variables.
pub type TypeSubst = BTreeMap<String, Type>;

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Arrow(Arc::new(from), Arc::new(to))
    }

    /// Right-nested arrow `t1 ⇒ t2 ⇒ … ⇒ result`.
    pub fn arrows<I: IntoIterator<Item = Type>>(args: I, result: Type) -> Type
    where
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::arrow(arg, acc))
    }

    /// `τ ⇒ ★`
    pub fn pred(of: Type) -> Type {
        Type::arrow(of, Type::Bool)
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, Type::Bool)
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Splits `a1 ⇒ … ⇒ an ⇒ r` into `([a1..an], r)` where `r` is not an arrow.
    pub fn strip_arrows(&self) -> (Vec<&Type>, &Type) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Type::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }

    pub fn type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_type_vars(&mut out);
        out
    }

    pub(crate) fn collect_type_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(v) => {
                out.insert(v.clone());
            }
            Type::Bool | Type::Domain(_) => {}
            Type::Arrow(a, b) => {
                a.collect_type_vars(out);
                b.collect_type_vars(out);
            }
        }
    }

    pub fn has_type_vars(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Bool | Type::Domain(_) => false,
            Type::Arrow(a, b) => a.has_type_vars() || b.has_type_vars(),
        }
    }

    pub fn subst(&self, s: &TypeSubst) -> Type {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Type::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Type::Bool | Type::Domain(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.subst(s), b.subst(s)),
        }
    }

    /// One-way matching: finds `s` with `pattern.subst(s) == self`.
    pub fn match_against(&self, pattern: &Type) -> Option<TypeSubst> {
        let mut s = TypeSubst::new();
        if match_into(pattern, self, &mut s) {
            Some(s)
        } else {
            None
        }
    }
}

/// Extends `s` so that `pattern.subst(s) == target`, if possible.
pub fn match_into(pattern: &Type, target: &Type, s: &mut TypeSubst) -> bool {
    match (pattern, target) {
        (Type::Var(v), _) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.insert(v.clone(), target.clone());
                true
            }
        },
        (Type::Bool, Type::Bool) => true,
        (Type::Domain(i), Type::Domain(j)) => i == j,
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => match_into(a1, a2, s) && match_into(b1, b2, s),
        _ => false,
    }
}

/// `σ ⋖ τ`: σ arises from τ by substituting types for type variables.
pub fn is_instance(sigma: &Type, tau: &Type) -> bool {
    sigma.match_against(tau).is_some()
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "'{v}"),
            Type::Bool => write!(f, "★"),
            Type::Domain(i) => write!(f, "δ{i}"),
            Type::Arrow(a, b) => {
                if a.as_arrow().is_some() {
                    write!(f, "({a}) ⇒ {b}")
                } else {
                    write!(f, "{a} ⇒ {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Type {
        Type::var("a")
    }

    #[test]
    fn instance_examples() {
        let d1 = Type::Domain(1);
        assert!(is_instance(
            &Type::arrow(d1.clone(), d1.clone()),
            &Type::arrow(a(), a())
        ));
        let s = Type::arrows([a(), Type::Bool], a());
        assert!(is_instance(&s, &s));
        assert!(!is_instance(
            &Type::arrow(Type::Domain(0), Type::Domain(1)),
            &Type::arrow(a(), a())
        ));
    }

    #[test]
    fn instance_is_one_way() {
        assert!(!is_instance(&Type::arrow(a(), a()), &Type::arrow(Type::Domain(0), Type::Domain(0))));
    }

    #[test]
    fn arrows_are_right_nested() {
        let t = Type::arrows([Type::Domain(0), Type::Domain(1)], Type::Bool);
        let (args, res) = t.strip_arrows();
        assert_eq!(args, vec![&Type::Domain(0), &Type::Domain(1)]);
        assert_eq!(res, &Type::Bool);
        assert_eq!(t.to_string(), "δ0 ⇒ δ1 ⇒ ★");
    }
}
