//! Computable denotations of the model-side constants.

use super::tiers::{is_function_graph, TierState};
use super::value::{count_partial_functions, partial_functions, powerset, HfValue, Tag};
use super::value::{EXC, FUN, ORD, SET};
use super::{MResult, ModelError};

pub type Pred<'a> = &'a dyn Fn(&HfValue) -> bool;
pub type Rel<'a> = &'a dyn Fn(&HfValue, &HfValue) -> bool;

/// What a model constant means. Higher-order arguments arrive as callbacks;
/// `cands` is the finite range searched for their witnesses.
#[derive(Clone)]
pub enum Denotation {
    Value(HfValue),
    Pred(fn(&Model, &HfValue) -> bool),
    Rel(fn(&Model, &HfValue, &HfValue) -> bool),
    Rel3(fn(&Model, &HfValue, &HfValue, &HfValue) -> bool),
    Op1(fn(&Model, &HfValue) -> MResult<HfValue>),
    Op2(fn(&Model, &HfValue, &HfValue) -> MResult<HfValue>),
    /// `c p x` with `p` a predicate.
    PredOf(fn(&Model, Pred, &HfValue) -> bool),
    /// `c x p` with `p` a relation, a truth value.
    RelTest(fn(&Model, &HfValue, Rel, &[HfValue]) -> bool),
    /// `c x p` with `p` a relation, an object.
    RelOp(fn(&Model, &HfValue, Rel, &[HfValue]) -> MResult<HfValue>),
    /// Needs a limit tier.
    Unmaterialized,
}

/// A built tier state together with the default object `•`.
#[derive(Clone, Debug)]
pub struct Model {
    pub state: TierState,
    pub bullet: HfValue,
}

fn set_of<I: IntoIterator<Item = HfValue>>(items: I) -> HfValue {
    HfValue::tagged(SET, HfValue::set(items))
}

fn at_most_one<I: IntoIterator<Item = bool>>(it: I) -> bool {
    it.into_iter().filter(|b| *b).nth(1).is_none()
}

impl Model {
    pub fn new(state: TierState) -> Model {
        Model {
            state,
            bullet: HfValue::tagged(EXC, HfValue::FinOrd(0)),
        }
    }

    /// `b : 𝕄`
    pub fn in_m(&self, b: &HfValue) -> bool {
        self.state.table.in_model(b)
    }

    fn tagged_m(&self, b: &HfValue, t: Tag) -> bool {
        b.has_tag(t) && self.in_m(b)
    }

    pub fn excluded(&self, owner: Tag, b: &HfValue) -> bool {
        self.state.table.excluded.excludes(owner, b)
    }

    /// `∘κ` for every component: all features default to `•`.
    pub fn default_of(&self, _tag: Tag) -> HfValue {
        self.bullet.clone()
    }

    pub fn m_set(&self, b: &HfValue) -> bool {
        self.tagged_m(b, SET)
    }

    /// `b ∈̄ y`
    pub fn elem(&self, b: &HfValue, y: &HfValue) -> bool {
        self.m_set(y) && y.payload().is_some_and(|p| p.contains(b))
    }

    fn guard(&self, what: &str, n: u128) -> MResult<()> {
        if n > self.state.table.max_set_size as u128 {
            return Err(ModelError::SizeGuard {
                what: what.into(),
                limit: self.state.table.max_set_size,
            });
        }
        Ok(())
    }

    pub fn set_mem(&self, b: &HfValue) -> bool {
        self.in_m(b) && !self.excluded(SET, b)
    }

    pub fn fun_mem(&self, b: &HfValue) -> bool {
        self.in_m(b) && !self.excluded(FUN, b)
    }

    fn members(x: &HfValue) -> &[HfValue] {
        x.payload().map(HfValue::members).unwrap_or(&[])
    }

    fn repl_pred(&self, x: &HfValue, p: Rel, cands: &[HfValue]) -> bool {
        Self::members(x)
            .iter()
            .all(|b| at_most_one(cands.iter().map(|c| self.set_mem(c) && p(b, c))))
    }

    fn fun_pred(&self, x: &HfValue, p: Rel, cands: &[HfValue]) -> bool {
        Self::members(x)
            .iter()
            .filter(|b| self.fun_mem(b))
            .all(|b| at_most_one(cands.iter().map(|c| self.fun_mem(c) && p(b, c))))
    }

    fn graph(f: &HfValue) -> impl Iterator<Item = (&HfValue, &HfValue)> {
        Self::members(f).iter().filter_map(HfValue::as_pair)
    }

    /// The denotation of a model constant, by name.
    pub fn denotation(&self, name: &str) -> Option<Denotation> {
        use Denotation::*;
        Some(match name {
            "𝕄" => Pred(|m, b| m.in_m(b)),
            "mSet" => Pred(|m, b| m.m_set(b)),
            "∈̄" => Rel(|m, b, y| m.elem(b, y)),
            "mSetMem" => Pred(|m, b| m.set_mem(b)),
            "mSetOf" => PredOf(|m, p, x| m.m_set(x) && Self::members(x).iter().all(p)),
            "⋃̄" => Op1(|m, x| {
                let ok = m.m_set(x) && Self::members(x).iter().all(|y| m.m_set(y));
                Ok(if ok {
                    set_of(Self::members(x).iter().flat_map(|y| Self::members(y).iter().cloned()))
                } else {
                    m.default_of(SET)
                })
            }),
            "𝒫̄" => Op1(|m, x| {
                if !m.m_set(x) {
                    return Ok(m.default_of(SET));
                }
                let xs = Self::members(x);
                m.guard("𝒫̄ argument", 1u128.checked_shl(xs.len() as u32).unwrap_or(u128::MAX))?;
                Ok(set_of(powerset(xs).into_iter().map(|s| HfValue::tagged(SET, s))))
            }),
            "∅̄" => Value(set_of([])),
            "mSucc" => Op1(|m, x| {
                Ok(if m.m_set(x) {
                    set_of(Self::members(x).iter().cloned().chain([x.clone()]))
                } else {
                    m.default_of(SET)
                })
            }),
            "mReplPred" => RelTest(|m, x, p, cands| m.repl_pred(x, p, cands)),
            "R̄" => RelOp(|m, x, p, cands| {
                if !(m.m_set(x) && m.repl_pred(x, p, cands)) {
                    return Ok(m.default_of(SET));
                }
                let xs = Self::members(x);
                Ok(set_of(
                    cands
                        .iter()
                        .filter(|c| m.set_mem(c) && xs.iter().any(|b| p(b, c)))
                        .cloned(),
                ))
            }),
            "mInf" | "mω" | "mSetOrd" => Unmaterialized,
            "mOrd" => Pred(|m, b| m.tagged_m(b, ORD)),
            "<̄" => Rel(|m, u, v| {
                let n = |x: &HfValue| if m.tagged_m(x, ORD) { x.payload()?.as_ord() } else { None };
                matches!((n(u), n(v)), (Some(a), Some(b)) if a < b)
            }),
            "0̄" => Value(HfValue::tagged(ORD, HfValue::FinOrd(0))),
            "msucc" => Op1(|m, x| {
                Ok(match x.payload().and_then(HfValue::as_ord) {
                    Some(n) if m.tagged_m(x, ORD) => HfValue::tagged(ORD, HfValue::FinOrd(n + 1)),
                    _ => m.default_of(ORD),
                })
            }),
            "mFun" => Pred(|m, b| m.tagged_m(b, FUN)),
            "mfapp" => Rel3(|m, f, b, c| {
                m.tagged_m(f, FUN) && Self::members(f).contains(&HfValue::pair(b.clone(), c.clone()))
            }),
            "m⇸" => Op2(|m, x, y| {
                if !(m.m_set(x) && m.m_set(y)) {
                    return Ok(m.default_of(FUN));
                }
                let ok = |v: &&HfValue| !m.excluded(FUN, v);
                let xs: Vec<HfValue> = Self::members(x).iter().filter(ok).cloned().collect();
                let ys: Vec<HfValue> = Self::members(y).iter().filter(ok).cloned().collect();
                m.guard("m⇸ result", count_partial_functions(xs.len(), ys.len(), xs.len()))?;
                Ok(set_of(
                    partial_functions(&xs, &ys, xs.len())
                        .into_iter()
                        .map(|g| HfValue::tagged(FUN, g)),
                ))
            }),
            "mmkFun" => RelOp(|m, x, p, cands| {
                if !(m.m_set(x) && m.fun_pred(x, p, cands)) {
                    return Ok(m.default_of(FUN));
                }
                let mut pairs = Vec::new();
                for b in Self::members(x).iter().filter(|b| m.fun_mem(b)) {
                    for c in cands.iter().filter(|c| m.fun_mem(c) && p(b, c)) {
                        pairs.push(HfValue::pair(b.clone(), c.clone()));
                    }
                }
                Ok(HfValue::tagged(FUN, HfValue::set(pairs)))
            }),
            "mdom" => Op1(|m, f| {
                Ok(if m.tagged_m(f, FUN) {
                    set_of(Self::graph(f).map(|(a, _)| a.clone()))
                } else {
                    m.default_of(FUN)
                })
            }),
            "mran" => Op1(|m, f| {
                Ok(if m.tagged_m(f, FUN) {
                    set_of(Self::graph(f).map(|(_, b)| b.clone()))
                } else {
                    m.default_of(FUN)
                })
            }),
            "mFunMem" => Pred(|m, b| m.fun_mem(b)),
            "mFunPred" => RelTest(|m, x, p, cands| m.fun_pred(x, p, cands)),
            "mExc" => Pred(|m, b| m.tagged_m(b, EXC)),
            "m•" | "∘set" | "∘ord" | "∘fun" | "∘exc" => Value(self.bullet.clone()),
            _ => return None,
        })
    }

    /// Every name [`Model::denotation`] knows.
    pub const CONSTANTS: &'static [&'static str] = &[
        "𝕄", "mSet", "∈̄", "mSetMem", "mSetOf", "⋃̄", "𝒫̄", "∅̄", "mSucc", "mReplPred", "R̄",
        "mInf", "mSetOrd", "mOrd", "<̄", "0̄", "msucc", "mω", "mFun", "mfapp", "m⇸", "mmkFun",
        "mdom", "mran", "mFunMem", "mFunPred", "mExc", "m•", "∘set", "∘ord", "∘fun", "∘exc",
    ];

    /// Whether `g` is the graph of a function object in the model.
    pub fn is_fun_graph(&self, g: &HfValue) -> bool {
        is_function_graph(g, &|v| self.fun_mem(v))
    }
}
