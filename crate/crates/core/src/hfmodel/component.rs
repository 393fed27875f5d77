//! Model components `[κ, 𝒟, [Z, S, L], Φ, Ψ]` and their file format.

use std::fmt;

use crate::kernel::sexp::{parse_all, ParseError, SExp};

use super::value::{count_partial_functions, partial_functions, powerset, tag_name, HfValue, Tag};
use super::value::{EXC, FUN, ORD, SET};
use super::{MResult, ModelError};

/// `Z`, the objects a component adds at tier 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroRule {
    Empty,
    Payloads(Vec<HfValue>),
}

/// `S`, what a component adds at tier `k ≥ 1` given the previous tier with
/// the component's excluded objects removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuccRule {
    Nothing,
    /// `𝒫 x`
    Powerset,
    /// The single ordinal `k − lag`, once `k ≥ lag`.
    Ordinals { lag: u64 },
    /// Partial functions on `x` with at most `k − lag` pairs, once
    /// `k ≥ lag`. Every finite function on the model appears at some tier.
    Functions { lag: u64 },
}

/// `L`. Limit tiers are never built; the rule is kept for the record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitRule {
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub zero: ZeroRule,
    pub succ: SuccRule,
    pub limit: LimitRule,
}

/// A constraint on `Excluded owner`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// `∀x. ¬⟨element, x⟩ : Excluded owner`
    Never { owner: Tag, element: Tag },
    /// `∀x. ⟨element, x⟩ : Excluded owner`
    Always { owner: Tag, element: Tag },
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Exclusion::Never { owner, element } => write!(
                f,
                "∀x. ¬ ⟨{}, x⟩ : Excluded {}",
                tag_name(element),
                tag_name(owner)
            ),
            Exclusion::Always { owner, element } => write!(
                f,
                "∀x. ⟨{}, x⟩ : Excluded {}",
                tag_name(element),
                tag_name(owner)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelComponent {
    pub name: String,
    pub tag: Tag,
    pub deps: Vec<Tag>,
    pub constructor: Constructor,
    pub excluded: Vec<Exclusion>,
    /// Names of the simple definitions `Ψ` the component provides.
    pub defs: Vec<String>,
}

impl ModelComponent {
    /// `TierImp κ k x` for a finite ordinal `k`.
    pub fn tier_imp(&self, k: u64, x: &HfValue, max_size: usize) -> MResult<Vec<HfValue>> {
        if k == 0 {
            return Ok(match &self.constructor.zero {
                ZeroRule::Empty => vec![],
                ZeroRule::Payloads(p) => p.clone(),
            });
        }
        let xs = x.members();
        match self.constructor.succ {
            SuccRule::Nothing => Ok(vec![]),
            SuccRule::Powerset => {
                if xs.len() >= 63 || 1usize << xs.len() > max_size {
                    return Err(ModelError::SizeGuard {
                        what: format!("𝒫 of a {}-element tier", xs.len()),
                        limit: max_size,
                    });
                }
                Ok(powerset(xs))
            }
            SuccRule::Ordinals { lag } => Ok(if k >= lag {
                vec![HfValue::FinOrd(k - lag)]
            } else {
                vec![]
            }),
            SuccRule::Functions { lag } => {
                if k < lag {
                    return Ok(vec![]);
                }
                let bound = (k - lag) as usize;
                if count_partial_functions(xs.len(), xs.len(), bound) > max_size as u128 {
                    return Err(ModelError::SizeGuard {
                        what: format!("functions on a {}-element tier", xs.len()),
                        limit: max_size,
                    });
                }
                Ok(partial_functions(xs, xs, bound))
            }
        }
    }
}

pub fn mgzf() -> ModelComponent {
    let defs = [
        "mSet", "∈̄", "mSetMem", "mSetOf", "⋃̄", "𝒫̄", "∅̄", "mSucc", "mSetOrd", "mInf",
        "mReplPred", "R̄",
    ];
    ModelComponent {
        name: "mGZF".into(),
        tag: SET,
        deps: vec![],
        constructor: Constructor {
            zero: ZeroRule::Empty,
            succ: SuccRule::Powerset,
            limit: LimitRule::Empty,
        },
        excluded: vec![Exclusion::Never { owner: SET, element: SET }],
        defs: defs.map(String::from).to_vec(),
    }
}

pub fn mordinal() -> ModelComponent {
    ModelComponent {
        name: "mOrdinal".into(),
        tag: ORD,
        deps: vec![],
        constructor: Constructor {
            zero: ZeroRule::Empty,
            succ: SuccRule::Ordinals { lag: 2 },
            limit: LimitRule::Empty,
        },
        excluded: vec![],
        defs: ["mOrd", "<̄", "0̄", "msucc", "mω"].map(String::from).to_vec(),
    }
}

pub fn mfunction() -> ModelComponent {
    let defs = ["mFun", "mfapp", "m⇸", "mmkFun", "mdom", "mran", "mFunMem", "mFunPred"];
    ModelComponent {
        name: "mFunction".into(),
        tag: FUN,
        deps: vec![SET],
        constructor: Constructor {
            zero: ZeroRule::Empty,
            succ: SuccRule::Functions { lag: 2 },
            limit: LimitRule::Empty,
        },
        excluded: vec![],
        defs: defs.map(String::from).to_vec(),
    }
}

pub fn mexception() -> ModelComponent {
    ModelComponent {
        name: "mExc".into(),
        tag: EXC,
        deps: vec![],
        constructor: Constructor {
            zero: ZeroRule::Payloads(vec![HfValue::FinOrd(0)]),
            succ: SuccRule::Nothing,
            limit: LimitRule::Empty,
        },
        excluded: vec![],
        defs: ["mExc", "m•"].map(String::from).to_vec(),
    }
}

/// The four components interpreting ZF⁺, in tag order.
pub fn zfplus_components() -> Vec<ModelComponent> {
    vec![mgzf(), mordinal(), mfunction(), mexception()]
}

/// The exclusions a spec's blacklists induce: objects of a blacklisted
/// feature are excluded from the owner's ingestion.
pub fn zfplus_exclusions() -> Vec<Exclusion> {
    vec![
        Exclusion::Always { owner: SET, element: EXC },
        Exclusion::Always { owner: FUN, element: EXC },
    ]
}

fn bad(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, msg)
}

fn tag_of(e: &SExp, line: usize) -> Result<Tag, ParseError> {
    match e.as_atom() {
        Some("set") => Ok(SET),
        Some("ord") => Ok(ORD),
        Some("fun") => Ok(FUN),
        Some("exc") => Ok(EXC),
        Some(n) => n.parse().map_err(|_| bad(line, format!("bad tag '{n}'"))),
        None => Err(bad(line, format!("bad tag {e}"))),
    }
}

fn number(e: Option<&SExp>, line: usize) -> Result<u64, ParseError> {
    e.and_then(SExp::as_atom)
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| bad(line, "expected a number"))
}

/// Parses a component file: sections `component: tag: deps: constructor:
/// excluded: defs:` in the catalogue layout. The constructor section holds
/// `(zero …) (succ …) (limit empty)`.
pub fn parse_component(src: &str) -> Result<ModelComponent, ParseError> {
    let mut name = None;
    let mut tag = None;
    let mut deps = vec![];
    let mut zero = ZeroRule::Empty;
    let mut succ = SuccRule::Nothing;
    let mut excluded = vec![];
    let mut defs = vec![];
    let mut section = String::new();
    for (i, line) in src.lines().enumerate() {
        let n = i + 1;
        let body = match line.split_once(';') {
            Some((b, _)) => b,
            None => line,
        };
        let rest = if !body.starts_with(char::is_whitespace) && !body.trim().is_empty() {
            let (h, r) = body
                .split_once(':')
                .ok_or_else(|| bad(n, format!("expected a section header: {line}")))?;
            section = h.trim().to_owned();
            r
        } else {
            body
        };
        for (_, e) in parse_all(rest).map_err(|e| bad(n, e.message))? {
            match section.as_str() {
                "component" => name = e.as_atom().map(str::to_owned),
                "tag" => tag = Some(tag_of(&e, n)?),
                "deps" => deps.push(tag_of(&e, n)?),
                "defs" => defs.push(e.to_string()),
                "constructor" => {
                    let items = e.as_list().ok_or_else(|| bad(n, "expected (zero|succ|limit …)"))?;
                    let kind = items.first().and_then(SExp::as_atom);
                    let arg = items.get(1);
                    match (kind, arg.and_then(SExp::as_atom)) {
                        (Some("zero"), Some("empty")) => zero = ZeroRule::Empty,
                        (Some("zero"), _) => {
                            let ps = items[1..]
                                .iter()
                                .map(|p| number(Some(p), n).map(HfValue::FinOrd))
                                .collect::<Result<_, _>>()?;
                            zero = ZeroRule::Payloads(ps)
                        }
                        (Some("succ"), Some("nothing")) => succ = SuccRule::Nothing,
                        (Some("succ"), Some("powerset")) => succ = SuccRule::Powerset,
                        (Some("succ"), Some("ordinals")) => {
                            succ = SuccRule::Ordinals { lag: number(items.get(2), n)? }
                        }
                        (Some("succ"), Some("functions")) => {
                            succ = SuccRule::Functions { lag: number(items.get(2), n)? }
                        }
                        (Some("limit"), Some("empty")) => {}
                        _ => return Err(bad(n, format!("unknown constructor clause {e}"))),
                    }
                }
                "excluded" => {
                    let items = e.as_list().unwrap_or_default();
                    let [kind, owner, element] = items else {
                        return Err(bad(n, format!("expected (never|always owner element), found {e}")));
                    };
                    let (owner, element) = (tag_of(owner, n)?, tag_of(element, n)?);
                    excluded.push(match kind.as_atom() {
                        Some("never") => Exclusion::Never { owner, element },
                        Some("always") => Exclusion::Always { owner, element },
                        _ => return Err(bad(n, format!("unknown exclusion {kind}"))),
                    });
                }
                "" => return Err(bad(n, "content before the first section")),
                s => return Err(bad(n, format!("unknown section '{s}'"))),
            }
        }
    }
    Ok(ModelComponent {
        name: name.ok_or_else(|| bad(1, "missing 'component' section"))?,
        tag: tag.ok_or_else(|| bad(1, "missing 'tag' section"))?,
        deps,
        constructor: Constructor {
            zero,
            succ,
            limit: LimitRule::Empty,
        },
        excluded,
        defs,
    })
}
