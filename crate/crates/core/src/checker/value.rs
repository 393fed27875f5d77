//! Runtime values of the evaluator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::hfmodel::HfValue;
use crate::kernel::{Term, Type, Var};

use super::eval::Evaluator;
use super::{EResult, EvalError};

pub type NativeFn = Arc<dyn Fn(&Evaluator, &[Val]) -> EResult<Val> + Send + Sync>;

#[derive(Clone)]
pub enum Val {
    Bool(bool),
    Ind(HfValue),
    Fun(Arc<FnVal>),
}

/// Logical and soft-type constants with a fixed meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Eq,
    Imp,
    And,
    Or,
    Iff,
    Not,
    All,
    Ex,
    ExOne,
    AtMostOne,
    If,
    Iota,
    HasType,
    Meet,
    Join,
    Sub,
    Top,
    Bot,
    FunTy,
    Pi,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Builtin> {
        use Builtin::*;
        Some(match name {
            "=" => Eq,
            "→" => Imp,
            "∧" => And,
            "∨" => Or,
            "⟷" => Iff,
            "¬" => Not,
            "∀" => All,
            "∃" => Ex,
            "∃!" => ExOne,
            "∃≤1" => AtMostOne,
            "IF" => If,
            "℩" => Iota,
            ":" => HasType,
            "⊓" => Meet,
            "⊔" => Join,
            "⊑" => Sub,
            "⊤" => Top,
            "⊥" => Bot,
            "⇛" => FunTy,
            "Π" => Pi,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        use Builtin::*;
        match self {
            Not | All | Ex | ExOne | AtMostOne | Top | Bot => 1,
            Eq | Imp | And | Or | Iff | Iota | HasType | Sub => 2,
            If | Meet | Join | FunTy | Pi => 3,
        }
    }
}

/// Function values. Enumerated predicates, relations and operators are
/// finite tables over the domain.
pub enum FnVal {
    Closure { var: Var, body: Term, scope: Scope },
    Builtin { op: Builtin, ty: Type, args: Vec<Val> },
    Native { name: Arc<str>, arity: usize, args: Vec<Val>, imp: NativeFn },
    PredSet(BTreeSet<HfValue>),
    RelSet(Arc<BTreeSet<(HfValue, HfValue)>>),
    RelRow(Arc<BTreeSet<(HfValue, HfValue)>>, HfValue),
    OpMap(BTreeMap<HfValue, HfValue>, HfValue),
}

impl Val {
    pub fn fun(f: FnVal) -> Val {
        Val::Fun(Arc::new(f))
    }

    pub fn native<F>(name: &str, arity: usize, f: F) -> Val
    where
        F: Fn(&Evaluator, &[Val]) -> EResult<Val> + Send + Sync + 'static,
    {
        Val::fun(FnVal::Native {
            name: name.into(),
            arity,
            args: Vec::new(),
            imp: Arc::new(f),
        })
    }

    pub fn as_bool(&self) -> EResult<bool> {
        match self {
            Val::Bool(b) => Ok(*b),
            other => Err(EvalError::Type(format!("expected a truth value, found {other}"))),
        }
    }

    pub fn as_ind(&self) -> EResult<&HfValue> {
        match self {
            Val::Ind(v) => Ok(v),
            other => Err(EvalError::Type(format!("expected an object, found {other}"))),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Bool(b) => write!(f, "{b}"),
            Val::Ind(v) => write!(f, "{v}"),
            Val::Fun(g) => write!(f, "{g}"),
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for FnVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnVal::Closure { var, body, .. } => write!(f, "λ{}. {body}", var.name),
            FnVal::Builtin { op, args, .. } => write!(f, "{op:?}/{}", args.len()),
            FnVal::Native { name, args, .. } => write!(f, "{name}/{}", args.len()),
            FnVal::PredSet(s) => write!(f, "{{{}}}", join(s)),
            FnVal::RelSet(r) => {
                write!(f, "{{{}}}", join(r.iter().map(|(a, b)| format!("({a}, {b})"))))
            }
            FnVal::RelRow(r, a) => write!(f, "row {a} of {} pairs", r.len()),
            FnVal::OpMap(m, d) => {
                let shown = join(m.iter().map(|(a, b)| format!("{a} ↦ {b}")));
                write!(f, "{{{shown}; else {d}}}")
            }
        }
    }
}

/// Variable bindings as a shared linked list, innermost first.
#[derive(Clone, Default)]
pub struct Scope(Option<Arc<Frame>>);

struct Frame {
    var: Var,
    val: Val,
    next: Scope,
}

impl Scope {
    pub fn bind(&self, var: Var, val: Val) -> Scope {
        Scope(Some(Arc::new(Frame {
            var,
            val,
            next: self.clone(),
        })))
    }

    pub fn lookup(&self, v: &Var) -> Option<&Val> {
        let mut cur = &self.0;
        while let Some(fr) = cur {
            if fr.var == *v {
                return Some(&fr.val);
            }
            cur = &fr.next.0;
        }
        None
    }
}
