use std::collections::BTreeMap;

use super::error::{KResult, KernelError};
use super::term::Term;
use super::types::{is_instance, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixity {
    Prefix,
    /// Infix with a binding power; larger binds tighter.
    Infix(u8),
    Binder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub ty: Type,
    pub fixity: Fixity,
}

/// The `ctyp` table: declared types of constants plus display flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<String, ConstDecl>,
}

fn alpha() -> Type {
    Type::var("a")
}

fn bool_op2() -> Type {
    Type::arrows([Type::Bool, Type::Bool], Type::Bool)
}

impl Signature {
    pub fn empty() -> Self {
        Signature::default()
    }

    /// The logical constants: `→ ⟷ ∧ ∨ ¬ True False = ∀ ∃ ∃! ∃≤1 ℩ IF`.
    pub fn logical() -> Self {
        let mut s = Signature::empty();
        let a = alpha();
        let quant = Type::arrow(Type::pred(a.clone()), Type::Bool);
        let decls: Vec<(&str, Type, Fixity)> = vec![
            ("→", bool_op2(), Fixity::Infix(25)),
            ("⟷", bool_op2(), Fixity::Infix(28)),
            ("∨", bool_op2(), Fixity::Infix(30)),
            ("∧", bool_op2(), Fixity::Infix(35)),
            ("¬", Type::pred(Type::Bool), Fixity::Prefix),
            ("True", Type::Bool, Fixity::Prefix),
            ("False", Type::Bool, Fixity::Prefix),
            ("=", Type::arrows([a.clone(), a.clone()], Type::Bool), Fixity::Infix(50)),
            ("∀", quant.clone(), Fixity::Binder),
            ("∃", quant.clone(), Fixity::Binder),
            ("∃!", quant.clone(), Fixity::Binder),
            ("∃≤1", quant, Fixity::Binder),
            (
                "℩",
                Type::arrows([a.clone(), Type::pred(a.clone())], a.clone()),
                Fixity::Prefix,
            ),
            ("IF", Type::arrows([Type::Bool, a.clone(), a.clone()], a), Fixity::Prefix),
        ];
        for (n, t, f) in decls {
            s.declare_with(n, t, f).expect("logical constants are distinct");
        }
        s
    }

    pub fn declare(&mut self, name: &str, ty: Type) -> KResult<()> {
        self.declare_with(name, ty, Fixity::Prefix)
    }

    pub fn declare_with(&mut self, name: &str, ty: Type, fixity: Fixity) -> KResult<()> {
        if self.consts.contains_key(name) {
            return Err(KernelError::DuplicateConstant(name.to_owned()));
        }
        self.consts.insert(name.to_owned(), ConstDecl { ty, fixity });
        Ok(())
    }

    /// Declares `name` unless an identical declaration is present.
    pub fn declare_compatible(&mut self, name: &str, ty: Type) -> KResult<()> {
        match self.consts.get(name) {
            Some(d) if d.ty == ty => Ok(()),
            Some(_) => Err(KernelError::DuplicateConstant(name.to_owned())),
            None => self.declare(name, ty),
        }
    }

    pub fn get(&self, name: &str) -> Option<&ConstDecl> {
        self.consts.get(name)
    }

    pub fn ctyp(&self, name: &str) -> Option<&Type> {
        self.consts.get(name).map(|d| &d.ty)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.consts.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.consts.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }

    /// Instance of `name` at its declared type.
    pub fn inst(&self, name: &str) -> KResult<Term> {
        let ty = self
            .ctyp(name)
            .ok_or_else(|| KernelError::UnknownConstant(name.to_owned()))?;
        Ok(Term::constant(name, ty.clone()))
    }
}

/// The unique `τ` with `t :: τ`.
pub fn infer_type(t: &Term, sig: &Signature) -> KResult<Type> {
    infer_at(t, sig, &mut String::from("ε"))
}

fn infer_at(t: &Term, sig: &Signature, path: &mut String) -> KResult<Type> {
    match t {
        Term::Var(v) => Ok(v.ty.clone()),
        Term::Const(n, ty) => {
            let declared = sig
                .ctyp(n)
                .ok_or_else(|| KernelError::UnknownConstant(n.clone()))?;
            if is_instance(ty, declared) {
                Ok(ty.clone())
            } else {
                Err(KernelError::NotAnInstance {
                    name: n.clone(),
                    ty: ty.clone(),
                    declared: declared.clone(),
                })
            }
        }
        Term::Abs(v, b) => {
            let len = path.len();
            path.push_str(".body");
            let tb = infer_at(b, sig, path)?;
            path.truncate(len);
            Ok(Type::arrow(v.ty.clone(), tb))
        }
        Term::App(f, a) => {
            let len = path.len();
            path.push_str(".fn");
            let tf = infer_at(f, sig, path)?;
            path.truncate(len);
            path.push_str(".arg");
            let ta = infer_at(a, sig, path)?;
            path.truncate(len);
            match tf.as_arrow() {
                Some((dom, cod)) if *dom == ta => Ok(cod.clone()),
                Some((dom, _)) => Err(KernelError::IllTyped {
                    location: path.clone(),
                    message: format!("argument has type {ta}, expected {dom}"),
                }),
                None => Err(KernelError::IllTyped {
                    location: path.clone(),
                    message: format!("applying a non-function of type {tf}"),
                }),
            }
        }
    }
}

/// Checks that `t` is a formula (`t :: ★`).
pub fn check_formula(t: &Term, sig: &Signature) -> KResult<()> {
    let ty = infer_type(t, sig)?;
    if ty.is_bool() {
        Ok(())
    } else {
        Err(KernelError::NotAFormula(format!("{t} has type {ty}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::term::Var;

    #[test]
    fn identity_abstraction() {
        let s = Type::Domain(3);
        let x = Var::new("x", s.clone());
        let t = Term::abs(x.clone(), Term::Var(x));
        assert_eq!(infer_type(&t, &Signature::logical()).unwrap(), Type::arrow(s.clone(), s));
    }

    #[test]
    fn powerset_instance() {
        let mut sig = Signature::logical();
        sig.declare("𝒫", Type::arrow(alpha(), alpha())).unwrap();
        let d0 = Type::Domain(0);
        let p = Term::constant("𝒫", Type::arrow(d0.clone(), d0.clone()));
        assert_eq!(infer_type(&p, &sig).unwrap(), Type::arrow(d0.clone(), d0));
    }

    #[test]
    fn negation_of_individual_is_ill_typed() {
        let t = Term::app(
            Term::constant("¬", Type::pred(Type::Bool)),
            Term::var("x", Type::Domain(0)),
        );
        assert!(matches!(
            infer_type(&t, &Signature::logical()),
            Err(KernelError::IllTyped { .. })
        ));
    }

    #[test]
    fn unknown_and_non_instance() {
        let sig = Signature::logical();
        assert!(matches!(
            infer_type(&Term::constant("zz", Type::Bool), &sig),
            Err(KernelError::UnknownConstant(_))
        ));
        assert!(matches!(
            infer_type(&Term::constant("¬", Type::Bool), &sig),
            Err(KernelError::NotAnInstance { .. })
        ));
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let mut sig = Signature::logical();
        assert!(sig.declare("=", Type::Bool).is_err());
    }
}
