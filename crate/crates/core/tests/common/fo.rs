//! Random closed first-order formulas with a direct evaluator.

use std::collections::BTreeSet;
use std::sync::Arc;

use gst_core::checker::{Bounds, Env, FnVal, Val};
use gst_core::hfmodel::HfValue;
use gst_core::kernel::build::{all, and, binder, eq, ex, iff, imp, not, or};
use gst_core::kernel::{Term, Type, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub enum Tm {
    Var(usize),
    C,
}

#[derive(Clone, Debug)]
pub enum Fo {
    P(Tm),
    R(Tm, Tm),
    Eq(Tm, Tm),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Imp(Box<Fo>, Box<Fo>),
    Iff(Box<Fo>, Box<Fo>),
    All(Box<Fo>),
    Ex(Box<Fo>),
    ExOne(Box<Fo>),
    AtMostOne(Box<Fo>),
}

/// A random instance: domain size, tables for `P` and `R`, the constant
/// `c`, and a closed formula.
pub struct World {
    pub n: usize,
    pub p: BTreeSet<usize>,
    pub r: BTreeSet<(usize, usize)>,
    pub c: usize,
    pub phi: Fo,
}

pub fn gen_tm(rng: &mut ChaCha8Rng, bound: usize) -> Tm {
    if bound == 0 || rng.gen_bool(0.2) {
        Tm::C
    } else {
        Tm::Var(rng.gen_range(0..bound))
    }
}

pub fn gen_fo(rng: &mut ChaCha8Rng, bound: usize, depth: u32) -> Fo {
    if depth == 0 || rng.gen_bool(0.15) {
        return match rng.gen_range(0..3) {
            0 => Fo::P(gen_tm(rng, bound)),
            1 => Fo::R(gen_tm(rng, bound), gen_tm(rng, bound)),
            _ => Fo::Eq(gen_tm(rng, bound), gen_tm(rng, bound)),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut ChaCha8Rng, b| Box::new(gen_fo(rng, b, d));
    match rng.gen_range(0..10) {
        0 => Fo::Not(sub(rng, bound)),
        1 => Fo::And(sub(rng, bound), sub(rng, bound)),
        2 => Fo::Or(sub(rng, bound), sub(rng, bound)),
        3 => Fo::Imp(sub(rng, bound), sub(rng, bound)),
        4 => Fo::Iff(sub(rng, bound), sub(rng, bound)),
        5 | 6 => Fo::All(sub(rng, bound + 1)),
        7 => Fo::Ex(sub(rng, bound + 1)),
        8 => Fo::ExOne(sub(rng, bound + 1)),
        _ => Fo::AtMostOne(sub(rng, bound + 1)),
    }
}

pub fn world(seed: u64) -> World {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=6);
    let p = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let r = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(0.4))
        .collect();
    let c = rng.gen_range(0..n);
    let phi = gen_fo(&mut rng, 0, 5);
    World { n, p, r, c, phi }
}

/// Direct evaluation; `env[i]` is the value of the i-th bound variable.
pub fn naive(w: &World, f: &Fo, env: &mut Vec<usize>) -> bool {
    let tm = |t: &Tm, env: &Vec<usize>| match t {
        Tm::Var(i) => env[*i],
        Tm::C => w.c,
    };
    let count = |g: &Fo, env: &mut Vec<usize>| {
        (0..w.n)
            .filter(|&a| {
                env.push(a);
                let b = naive(w, g, env);
                env.pop();
                b
            })
            .count()
    };
    match f {
        Fo::P(t) => w.p.contains(&tm(t, env)),
        Fo::R(a, b) => w.r.contains(&(tm(a, env), tm(b, env))),
        Fo::Eq(a, b) => tm(a, env) == tm(b, env),
        Fo::Not(g) => !naive(w, g, env),
        Fo::And(g, h) => naive(w, g, env) && naive(w, h, env),
        Fo::Or(g, h) => naive(w, g, env) || naive(w, h, env),
        Fo::Imp(g, h) => !naive(w, g, env) || naive(w, h, env),
        Fo::Iff(g, h) => naive(w, g, env) == naive(w, h, env),
        Fo::All(g) => count(g, env) == w.n,
        Fo::Ex(g) => count(g, env) > 0,
        Fo::ExOne(g) => count(g, env) == 1,
        Fo::AtMostOne(g) => count(g, env) <= 1,
    }
}

pub fn ind() -> Type {
    Type::var("a")
}

pub fn var(i: usize) -> Var {
    Var::new(format!("v{i}"), ind())
}

pub fn to_term(f: &Fo, bound: usize) -> Term {
    let tm = |t: &Tm| match t {
        Tm::Var(i) => Term::var(format!("v{i}"), ind()),
        Tm::C => Term::constant("c", ind()),
    };
    let p = Term::constant("P", Type::pred(ind()));
    let r = Term::constant("R", Type::arrows([ind(), ind()], Type::Bool));
    let t = |g: &Fo| to_term(g, bound);
    let inner = |g: &Fo| to_term(g, bound + 1);
    match f {
        Fo::P(a) => Term::app(p, tm(a)),
        Fo::R(a, b) => Term::apps(r, [tm(a), tm(b)]),
        Fo::Eq(a, b) => eq(tm(a), tm(b)),
        Fo::Not(g) => not(t(g)),
        Fo::And(g, h) => and(t(g), t(h)),
        Fo::Or(g, h) => or(t(g), t(h)),
        Fo::Imp(g, h) => imp(t(g), t(h)),
        Fo::Iff(g, h) => iff(t(g), t(h)),
        Fo::All(g) => all(var(bound), inner(g)),
        Fo::Ex(g) => ex(var(bound), inner(g)),
        Fo::ExOne(g) => binder("∃!", var(bound), inner(g)),
        Fo::AtMostOne(g) => binder("∃≤1", var(bound), inner(g)),
    }
}

pub fn point(i: usize) -> HfValue {
    HfValue::FinOrd(i as u64)
}

pub fn env_of(w: &World) -> Env {
    let mut env = Env::new((0..w.n).map(point).collect(), Bounds::default(), 0);
    env.define("P", Val::fun(FnVal::PredSet(w.p.iter().map(|&i| point(i)).collect())));
    let r = w.r.iter().map(|&(a, b)| (point(a), point(b))).collect();
    env.define("R", Val::fun(FnVal::RelSet(Arc::new(r))));
    env.define("c", Val::Ind(point(w.c)));
    env
}

