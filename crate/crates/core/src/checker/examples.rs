//! Ordinal left-subtraction, function application and operator overriding,
//! evaluated on a small structural universe of ordinals and functions.

use serde::Serialize;

use crate::hfmodel::{HfValue, EXC, FUN, ORD, SET};
use crate::kernel::sexp;
use crate::kernel::{type_of, Signature, Term};
use crate::softtypes::notation::{parse_type, Elaborator};
use crate::softtypes::soft_signature;

use super::{Bounds, EResult, Env, EvalError, Evaluator, Val};

/// Primitive constants of the example universe, with surface types.
const PRIMITIVES: &[(&str, &str)] = &[
    ("Ord", "(⇒ α ★)"),
    ("Fun", "(⇒ α ★)"),
    ("Set", "(⇒ α ★)"),
    ("∈", "(⇒ α α ★)"),
    ("fapp", "(⇒ α α α ★)"),
    ("mkFun", "(⇒ α (⇒ α α ★) α)"),
    ("dom", "(⇒ α α)"),
    ("ran", "(⇒ α α)"),
    ("∩", "(⇒ α α α)"),
    ("SetOf", "(⇒ (⇒ α ★) α ★)"),
    ("+", "(⇒ α α α)"),
    ("0", "α"),
    ("succ", "(⇒ α α)"),
    ("•", "α"),
    ("∅", "α"),
    ("f", "α"),
    ("g", "α"),
];

/// Defined operators, in definition order.
pub const DEFINITIONS: &[(&str, &str)] = &[
    ("−ₗ", "(λ (i j) (℩ k (= i (+ j k)) •))"),
    ("`", "(λ (h x) (℩ y (fapp h x y) •))"),
    ("λ̇", "(λ (x (t (⇒ α α))) (mkFun x (λ (b c) (∧ (∈ b x) (= c (t b))))))"),
    (
        "lift",
        "(λ ((o (⇒ α α α)) h k) (λ̇ (∩ (dom h) (dom k)) (λ (b) (o (` h b) (` k b)))))",
    ),
    ("FunRet", "(λ ((p (⇒ α ★)) h) (∧ (: h Fun) (: (ran h) (SetOf p))))"),
    (
        "override",
        "(λ ((t1 (⇒ α α ★)) (o1 (⇒ α α α)) (t2 (⇒ α α ★)) (o2 (⇒ α α α))) \
         (λ (x y) (if (t1 x y) (o1 x y) (if (t2 x y) (o2 x y) •))))",
    ),
    ("ord-guard", "(λ (x y) (∧ (: x Ord) (: y Ord)))"),
    ("fun-guard", "(λ (x y) (∧ (: x (FunRet Ord)) (: y (FunRet Ord))))"),
    ("−", "(override ord-guard −ₗ fun-guard (lift −ₗ))"),
];

fn ord(n: u64) -> HfValue {
    HfValue::tagged(ORD, HfValue::FinOrd(n))
}

fn bullet() -> HfValue {
    HfValue::tagged(EXC, HfValue::FinOrd(0))
}

fn set_of<I: IntoIterator<Item = HfValue>>(xs: I) -> HfValue {
    HfValue::tagged(SET, HfValue::set(xs))
}

fn members(x: &HfValue) -> &[HfValue] {
    x.payload().map(HfValue::members).unwrap_or(&[])
}

fn ord_of(x: &HfValue) -> Option<u64> {
    if x.has_tag(ORD) {
        x.payload()?.as_ord()
    } else {
        None
    }
}

fn graph(x: &HfValue) -> impl Iterator<Item = (&HfValue, &HfValue)> {
    let items = if x.has_tag(FUN) { members(x) } else { &[] };
    items.iter().filter_map(HfValue::as_pair)
}

/// The function on `0..n` given by `j ↦ j + shift`.
pub fn shift_function(n: u64, shift: u64) -> HfValue {
    HfValue::tagged(
        FUN,
        HfValue::set((0..n).map(|j| HfValue::pair(ord(j), ord(j + shift)))),
    )
}

fn pred(name: &str, p: fn(&HfValue) -> bool) -> Val {
    Val::native(name, 1, move |_, a| Ok(Val::Bool(p(a[0].as_ind()?))))
}

fn op1(name: &str, f: fn(&HfValue) -> HfValue) -> Val {
    Val::native(name, 1, move |_, a| Ok(Val::Ind(f(a[0].as_ind()?))))
}

fn op2(name: &str, f: fn(&HfValue, &HfValue) -> HfValue) -> Val {
    Val::native(name, 2, move |_, a| Ok(Val::Ind(f(a[0].as_ind()?, a[1].as_ind()?))))
}

/// The signature the definitions are written in.
pub fn example_signature() -> Signature {
    let mut sig = soft_signature();
    for (n, t) in PRIMITIVES {
        let ty = parse_type(&sexp::parse(t).expect("type"), 0)
            .expect("primitive type");
        sig.declare(n, ty).expect("fresh primitive");
    }
    sig
}

/// Parses the definitions into terms, extending `sig` with each one.
pub fn example_definitions(sig: &mut Signature) -> Vec<(String, Term)> {
    DEFINITIONS
        .iter()
        .map(|(n, src)| {
            let e = sexp::parse(src).expect("definition parses");
            let t = Elaborator::new(sig).term(&e, 0).expect("definition elaborates");
            let ty = type_of(&t).expect("definition is well-typed");
            sig.declare(n, ty).expect("fresh definition");
            ((*n).to_owned(), t)
        })
        .collect()
}

/// An environment with ordinals `0..=n+2`, `•`, `∅` and the functions
/// `f j = j + 2`, `g j = j + 1` on `0..n`.
pub fn example_env(n: u64) -> (Env, Signature) {
    let (f, g) = (shift_function(n, 2), shift_function(n, 1));
    let mut domain: Vec<HfValue> = (0..=n + 2).map(ord).collect();
    domain.extend([bullet(), set_of([]), f.clone(), g.clone()]);
    let mut env = Env::new(domain, Bounds::default(), 0);

    env.define("Ord", pred("Ord", |x| ord_of(x).is_some()));
    env.define("Fun", pred("Fun", |x| x.has_tag(FUN)));
    env.define("Set", pred("Set", |x| x.has_tag(SET)));
    env.define(
        "∈",
        Val::native("∈", 2, |_, a| {
            let (b, y) = (a[0].as_ind()?, a[1].as_ind()?);
            Ok(Val::Bool(y.has_tag(SET) && members(y).contains(b)))
        }),
    );
    env.define(
        "fapp",
        Val::native("fapp", 3, |_, a| {
            let (h, b, c) = (a[0].as_ind()?, a[1].as_ind()?, a[2].as_ind()?);
            Ok(Val::Bool(graph(h).any(|(x, y)| x == b && y == c)))
        }),
    );
    env.define(
        "mkFun",
        Val::native("mkFun", 2, |ev: &Evaluator, a| {
            let x = a[0].as_ind()?;
            if !x.has_tag(SET) {
                return Ok(Val::Ind(bullet()));
            }
            let mut pairs = Vec::new();
            for b in members(x) {
                for c in &ev.env().domain {
                    if ev.test2(&a[1], b, c)? {
                        pairs.push(HfValue::pair(b.clone(), c.clone()));
                    }
                }
            }
            Ok(Val::Ind(HfValue::tagged(FUN, HfValue::set(pairs))))
        }),
    );
    env.define(
        "dom",
        op1("dom", |h| {
            if h.has_tag(FUN) {
                set_of(graph(h).map(|(a, _)| a.clone()))
            } else {
                bullet()
            }
        }),
    );
    env.define(
        "ran",
        op1("ran", |h| {
            if h.has_tag(FUN) {
                set_of(graph(h).map(|(_, b)| b.clone()))
            } else {
                bullet()
            }
        }),
    );
    env.define(
        "∩",
        op2("∩", |x, y| {
            if x.has_tag(SET) && y.has_tag(SET) {
                set_of(members(x).iter().filter(|b| members(y).contains(b)).cloned())
            } else {
                bullet()
            }
        }),
    );
    env.define(
        "SetOf",
        Val::native("SetOf", 2, |ev: &Evaluator, a| {
            let x = a[1].as_ind()?;
            if !x.has_tag(SET) {
                return Ok(Val::Bool(false));
            }
            for b in members(x) {
                if !ev.test(&a[0], b)? {
                    return Ok(Val::Bool(false));
                }
            }
            Ok(Val::Bool(true))
        }),
    );
    env.define(
        "+",
        op2("+", |i, j| match (ord_of(i), ord_of(j)) {
            (Some(a), Some(b)) => ord(a + b),
            _ => bullet(),
        }),
    );
    env.define("0", Val::Ind(ord(0)));
    env.define(
        "succ",
        op1("succ", |i| ord_of(i).map(|a| ord(a + 1)).unwrap_or_else(bullet)),
    );
    env.define("•", Val::Ind(bullet()));
    env.define("∅", Val::Ind(set_of([])));
    env.define("f", Val::Ind(f));
    env.define("g", Val::Ind(g));

    let mut sig = example_signature();
    for (name, t) in example_definitions(&mut sig) {
        let v = Evaluator::new(&env)
            .eval_closed(&t)
            .expect("definitions evaluate to closures");
        env.define(&name, v);
    }
    (env, sig)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleResult {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub n: u64,
    pub results: Vec<ExampleResult>,
}

impl ExampleReport {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Evaluates a surface-notation term in the example environment.
pub fn eval_surface(env: &Env, sig: &Signature, src: &str) -> EResult<Val> {
    let e = sexp::parse(src).map_err(|e| EvalError::Type(e.to_string()))?;
    let t = Elaborator::new(sig)
        .term(&e, 0)
        .map_err(|e| EvalError::Type(e.to_string()))?;
    Evaluator::new(env).eval_closed(&t)
}

fn render(r: &EResult<Val>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Every pair of domain elements on which both override guards fire.
pub fn override_overlaps(env: &Env, sig: &Signature) -> EResult<Vec<(HfValue, HfValue)>> {
    let ev = Evaluator::new(env);
    let t1 = eval_surface(env, sig, "ord-guard")?;
    let t2 = eval_surface(env, sig, "fun-guard")?;
    let mut out = Vec::new();
    for x in &env.domain {
        for y in &env.domain {
            if ev.test2(&t1, x, y)? && ev.test2(&t2, x, y)? {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}

/// The worked examples at size `n`: the function examples range over
/// `j < n`.
pub fn run_examples(n: u64) -> ExampleReport {
    let (env, sig) = example_env(n);
    let mut results = Vec::new();
    let mut expect = |name: String, src: &str, want: HfValue| {
        let got = eval_surface(&env, &sig, src);
        let ok = matches!(&got, Ok(Val::Ind(v)) if *v == want);
        results.push(ExampleResult {
            name,
            expected: want.to_string(),
            actual: render(&got),
            ok,
        });
    };
    expect("5 −ₗ 3".into(), "(−ₗ 5 3)", ord(2));
    expect("3 −ₗ 5".into(), "(−ₗ 3 5)", bullet());
    expect("3 −ₗ ∅".into(), "(−ₗ 3 ∅)", bullet());
    for j in 0..n {
        expect(
            format!("(lift (−ₗ) f g) ` {j}"),
            &format!("(` (lift −ₗ f g) {j})"),
            ord(1),
        );
    }
    expect("5 − 3".into(), "(− 5 3)", ord(2));
    for j in 0..n {
        expect(format!("(f − g) ` {j}"), &format!("(` (− f g) {j})"), ord(1));
    }
    expect(format!("(f − g) ` {n}"), &format!("(` (− f g) {n})"), bullet());

    let overlaps = override_overlaps(&env, &sig);
    results.push(ExampleResult {
        name: "override guards are exclusive".into(),
        expected: "no pair".into(),
        actual: match &overlaps {
            Ok(v) if v.is_empty() => "no pair".into(),
            Ok(v) => format!("({}, {})", v[0].0, v[0].1),
            Err(e) => format!("error: {e}"),
        },
        ok: matches!(&overlaps, Ok(v) if v.is_empty()),
    });
    ExampleReport { n, results }
}
