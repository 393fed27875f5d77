use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hfmodel::{Denotation, HfValue, Model, ModelError};
use crate::kernel::Type;

use super::eval::Evaluator;
use super::value::{FnVal, Val};
use super::{EResult, EvalError};

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Largest domain whose unary predicates are all enumerated.
    pub unary: usize,
    /// Largest domain whose binary relations are all enumerated.
    pub binary: usize,
    /// Largest `n^n` for which all operators are enumerated.
    pub op: u64,
    /// Number of random candidates per sampled sort.
    pub samples: usize,
    /// Quantifier instances allowed per check.
    pub max_steps: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            unary: 10,
            binary: 4,
            op: 4096,
            samples: 48,
            max_steps: 200_000_000,
        }
    }
}

/// Candidates for one higher-order sort.
#[derive(Clone)]
pub struct Candidates {
    pub vals: Arc<[Val]>,
    pub exhaustive: bool,
}

/// What a checked formula is evaluated against.
pub struct Env {
    pub domain: Vec<HfValue>,
    pub constants: BTreeMap<String, Val>,
    /// Constants whose meaning needs a limit tier.
    pub unmaterialized: BTreeSet<String>,
    pub bounds: Bounds,
    pub seed: u64,
    domain_vals: Arc<[Val]>,
    preds: OnceLock<Candidates>,
    rels: OnceLock<Candidates>,
    ops: OnceLock<Candidates>,
}

pub fn is_individual(t: &Type) -> bool {
    matches!(t, Type::Var(_) | Type::Domain(_))
}

/// Sort of a quantified variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Individual,
    Bool,
    Pred,
    Rel,
    Op,
}

pub fn sort_of(t: &Type) -> Option<Sort> {
    if is_individual(t) {
        return Some(Sort::Individual);
    }
    if t.is_bool() {
        return Some(Sort::Bool);
    }
    let (args, res) = t.strip_arrows();
    match (args.as_slice(), res) {
        ([a], Type::Bool) if is_individual(a) => Some(Sort::Pred),
        ([a, b], Type::Bool) if is_individual(a) && is_individual(b) => Some(Sort::Rel),
        ([a], r) if is_individual(a) && is_individual(r) => Some(Sort::Op),
        _ => None,
    }
}

impl Env {
    /// An environment over `domain` (deduplicated, kept in canonical order).
    pub fn new(domain: Vec<HfValue>, bounds: Bounds, seed: u64) -> Env {
        let set: BTreeSet<HfValue> = domain.into_iter().collect();
        let domain: Vec<HfValue> = set.into_iter().collect();
        let domain_vals = domain.iter().cloned().map(Val::Ind).collect();
        Env {
            domain,
            constants: BTreeMap::new(),
            unmaterialized: BTreeSet::new(),
            bounds,
            seed,
            domain_vals,
            preds: OnceLock::new(),
            rels: OnceLock::new(),
            ops: OnceLock::new(),
        }
    }

    pub fn define(&mut self, name: &str, v: Val) {
        self.constants.insert(name.to_owned(), v);
    }

    /// The values a variable of type `t` ranges over.
    pub fn candidates(&self, t: &Type) -> EResult<Candidates> {
        let c = match sort_of(t) {
            Some(Sort::Individual) => Candidates {
                vals: self.domain_vals.clone(),
                exhaustive: true,
            },
            Some(Sort::Bool) => Candidates {
                vals: Arc::from([Val::Bool(false), Val::Bool(true)]),
                exhaustive: true,
            },
            Some(Sort::Pred) => self.preds.get_or_init(|| self.pred_candidates()).clone(),
            Some(Sort::Rel) => self.rels.get_or_init(|| self.rel_candidates()).clone(),
            Some(Sort::Op) => self.ops.get_or_init(|| self.op_candidates()).clone(),
            None => return Err(EvalError::Budget(format!("no enumeration for type {t}"))),
        };
        Ok(c)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    fn pred_candidates(&self) -> Candidates {
        let d = &self.domain;
        let n = d.len();
        let pred = |s: BTreeSet<HfValue>| Val::fun(FnVal::PredSet(s));
        if n <= self.bounds.unary {
            let vals = (0u64..1 << n)
                .map(|mask| pred((0..n).filter(|i| mask >> i & 1 == 1).map(|i| d[i].clone()).collect()))
                .collect();
            return Candidates { vals, exhaustive: true };
        }
        let mut out = vec![pred(BTreeSet::new()), pred(d.iter().cloned().collect())];
        for x in d {
            out.push(pred([x.clone()].into()));
        }
        for x in d {
            out.push(pred(d.iter().filter(|y| *y != x).cloned().collect()));
        }
        let mut rng = self.rng(1);
        for _ in 0..self.bounds.samples {
            out.push(pred(d.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()));
        }
        Candidates {
            vals: out.into(),
            exhaustive: false,
        }
    }

    fn rel_candidates(&self) -> Candidates {
        let d = &self.domain;
        let n = d.len();
        let rel = |s: BTreeSet<(HfValue, HfValue)>| Val::fun(FnVal::RelSet(Arc::new(s)));
        let pairs: Vec<(HfValue, HfValue)> = d
            .iter()
            .flat_map(|a| d.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        if n <= self.bounds.binary {
            let vals = (0u64..1 << pairs.len())
                .map(|mask| {
                    rel((0..pairs.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| pairs[i].clone())
                        .collect())
                })
                .collect();
            return Candidates { vals, exhaustive: true };
        }
        let mut out = vec![
            rel(BTreeSet::new()),
            rel(pairs.iter().cloned().collect()),
            rel(d.iter().map(|a| (a.clone(), a.clone())).collect()),
        ];
        let mut rng = self.rng(2);
        for _ in 0..self.bounds.samples / 2 {
            // A partial functional relation: a random subset mapped at random.
            let mut s = BTreeSet::new();
            for a in d {
                if rng.gen_bool(0.5) {
                    s.insert((a.clone(), d.choose(&mut rng).expect("nonempty").clone()));
                }
            }
            out.push(rel(s));
        }
        for _ in 0..self.bounds.samples - self.bounds.samples / 2 {
            out.push(rel(pairs.iter().filter(|_| rng.gen_bool(0.1)).cloned().collect()));
        }
        Candidates {
            vals: out.into(),
            exhaustive: false,
        }
    }

    fn op_candidates(&self) -> Candidates {
        let d = &self.domain;
        let n = d.len();
        let Some(default) = d.first().cloned() else {
            return Candidates { vals: Arc::from([]), exhaustive: true };
        };
        let op = |m: BTreeMap<HfValue, HfValue>| Val::fun(FnVal::OpMap(m, default.clone()));
        let total = (n as u64).checked_pow(n as u32);
        if total.is_some_and(|t| t <= self.bounds.op) {
            let mut vals = Vec::new();
            let mut digits = vec![0usize; n];
            loop {
                vals.push(op(d.iter().cloned().zip(digits.iter().map(|&i| d[i].clone())).collect()));
                let mut k = 0;
                while k < n && digits[k] == n - 1 {
                    digits[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
                digits[k] += 1;
            }
            return Candidates { vals: vals.into(), exhaustive: true };
        }
        let mut out = vec![op(d.iter().map(|a| (a.clone(), a.clone())).collect())];
        for c in d {
            out.push(op(d.iter().map(|a| (a.clone(), c.clone())).collect()));
        }
        let mut rng = self.rng(3);
        for _ in 0..self.bounds.samples {
            out.push(op(d
                .iter()
                .map(|a| (a.clone(), d.choose(&mut rng).expect("nonempty").clone()))
                .collect()));
        }
        Candidates {
            vals: out.into(),
            exhaustive: false,
        }
    }

    /// The model's constants over its top tier.
    pub fn from_model(model: Arc<Model>, bounds: Bounds, seed: u64) -> Env {
        let mut env = Env::new(model.state.domain(), bounds, seed);
        for name in Model::CONSTANTS {
            match model.denotation(name) {
                Some(Denotation::Unmaterialized) => {
                    env.unmaterialized.insert((*name).to_owned());
                }
                Some(d) => {
                    let v = wrap_denotation(name, d, model.clone());
                    env.define(name, v);
                }
                None => {}
            }
        }
        env
    }
}

fn model_err(e: ModelError) -> EvalError {
    EvalError::Model(e)
}

/// Runs `body` with callbacks that may fail; the first failure wins.
fn with_callback_errors<T>(body: impl FnOnce(&RefCell<Option<EvalError>>) -> T) -> EResult<T> {
    let cell = RefCell::new(None);
    let out = body(&cell);
    match cell.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn record<T: Default>(cell: &RefCell<Option<EvalError>>, r: EResult<T>) -> T {
    match r {
        Ok(v) => v,
        Err(e) => {
            cell.borrow_mut().get_or_insert(e);
            T::default()
        }
    }
}

fn wrap_denotation(name: &str, d: Denotation, m: Arc<Model>) -> Val {
    match d {
        Denotation::Value(v) => Val::Ind(v),
        Denotation::Pred(f) => Val::native(name, 1, move |_, a| Ok(Val::Bool(f(&m, a[0].as_ind()?)))),
        Denotation::Rel(f) => Val::native(name, 2, move |_, a| {
            Ok(Val::Bool(f(&m, a[0].as_ind()?, a[1].as_ind()?)))
        }),
        Denotation::Rel3(f) => Val::native(name, 3, move |_, a| {
            Ok(Val::Bool(f(&m, a[0].as_ind()?, a[1].as_ind()?, a[2].as_ind()?)))
        }),
        Denotation::Op1(f) => {
            Val::native(name, 1, move |_, a| f(&m, a[0].as_ind()?).map(Val::Ind).map_err(model_err))
        }
        Denotation::Op2(f) => Val::native(name, 2, move |_, a| {
            f(&m, a[0].as_ind()?, a[1].as_ind()?).map(Val::Ind).map_err(model_err)
        }),
        Denotation::PredOf(f) => Val::native(name, 2, move |ev: &Evaluator, a| {
            let x = a[1].as_ind()?;
            let b = with_callback_errors(|cell| {
                f(&m, &|h| record(cell, ev.test(&a[0], h)), x)
            })?;
            Ok(Val::Bool(b))
        }),
        Denotation::RelTest(f) => Val::native(name, 2, move |ev: &Evaluator, a| {
            let x = a[0].as_ind()?;
            let cands = &ev.env().domain;
            let b = with_callback_errors(|cell| {
                f(&m, x, &|b, c| record(cell, ev.test2(&a[1], b, c)), cands)
            })?;
            Ok(Val::Bool(b))
        }),
        Denotation::RelOp(f) => Val::native(name, 2, move |ev: &Evaluator, a| {
            let x = a[0].as_ind()?;
            let cands = &ev.env().domain;
            let r = with_callback_errors(|cell| {
                f(&m, x, &|b, c| record(cell, ev.test2(&a[1], b, c)), cands)
            })?;
            r.map(Val::Ind).map_err(model_err)
        }),
        Denotation::Unmaterialized => {
            let n = name.to_owned();
            Val::native(name, 0, move |_, _| Err(EvalError::Unmaterialized(n.clone())))
        }
    }
}
