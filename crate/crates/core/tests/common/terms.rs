//! Random well-typed terms.

use gst_core::kernel::{Term, Type, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn iota() -> Type {
    Type::var("a")
}

pub fn types() -> Vec<Type> {
    let i = iota();
    vec![
        i.clone(),
        Type::Bool,
        Type::arrow(i.clone(), i.clone()),
        Type::pred(i.clone()),
        Type::arrows([i.clone(), i.clone()], Type::Bool),
        Type::arrow(Type::pred(i.clone()), Type::Bool),
    ]
}

/// Random well-typed terms. Variable names are drawn from a tiny pool so
/// that shadowing and capture situations come up often.
pub struct Gen {
    pub rng: ChaCha8Rng,
    types: Vec<Type>,
}

pub const NAMES: [&str; 3] = ["x", "y", "z"];

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            types: types(),
        }
    }

    pub fn pick_type(&mut self) -> Type {
        let i = self.rng.gen_range(0..self.types.len());
        self.types[i].clone()
    }

    fn leaf(&mut self, ty: &Type) -> Term {
        if self.rng.gen_bool(0.7) {
            let n = NAMES[self.rng.gen_range(0..NAMES.len())];
            Term::var(n, ty.clone())
        } else {
            Term::constant(format!("c{}", self.rng.gen_range(0..2)), ty.clone())
        }
    }

    pub fn term(&mut self, ty: &Type, depth: u32) -> Term {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.leaf(ty);
        }
        let lam = ty.as_arrow().map(|(a, b)| (a.clone(), b.clone()));
        match (self.rng.gen_range(0..3), lam) {
            (0, Some((a, b))) => {
                let n = NAMES[self.rng.gen_range(0..NAMES.len())];
                Term::abs(Var::new(n, a), self.term(&b, depth - 1))
            }
            (1, _) if depth >= 2 => {
                // A redex on purpose.
                let a = self.pick_type();
                let n = NAMES[self.rng.gen_range(0..NAMES.len())];
                let body = self.term(ty, depth - 2);
                Term::app(Term::abs(Var::new(n, a.clone()), body), self.term(&a, depth - 1))
            }
            _ => {
                let a = self.pick_type();
                let f = self.term(&Type::arrow(a.clone(), ty.clone()), depth - 1);
                Term::app(f, self.term(&a, depth - 1))
            }
        }
    }
}

pub fn sample(seed: u64) -> (Type, Term) {
    let mut g = Gen::new(seed);
    let ty = g.pick_type();
    let d = g.rng.gen_range(0..=6);
    let t = g.term(&ty, d);
    (ty, t)
}

pub fn depth(t: &Term) -> usize {
    match t {
        Term::App(f, a) => 1 + depth(f).max(depth(a)),
        Term::Abs(_, b) => 1 + depth(b),
        _ => 0,
    }
}

