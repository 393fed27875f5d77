use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// A small natural naming the feature that owns a tagged object.
pub type Tag = u32;

pub const SET: Tag = 0;
pub const ORD: Tag = 1;
pub const FUN: Tag = 2;
pub const EXC: Tag = 3;

pub fn tag_name(t: Tag) -> String {
    match t {
        SET => "set".into(),
        ORD => "ord".into(),
        FUN => "fun".into(),
        EXC => "exc".into(),
        n => format!("tag{n}"),
    }
}

/// Hereditarily finite values. Sets are kept sorted and duplicate-free, so
/// the derived equality and order are the intended ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HfValue {
    Set(Arc<[HfValue]>),
    FinOrd(u64),
    /// The Kuratowski pair `{{a}, {a, b}}`, kept unexpanded.
    KPair(Arc<HfValue>, Arc<HfValue>),
    Tagged(Tag, Arc<HfValue>),
}

impl HfValue {
    pub fn empty() -> HfValue {
        HfValue::Set(Arc::from(Vec::new()))
    }

    pub fn set<I: IntoIterator<Item = HfValue>>(items: I) -> HfValue {
        let mut v: Vec<HfValue> = items.into_iter().collect();
        v.sort();
        v.dedup();
        HfValue::Set(Arc::from(v))
    }

    pub fn pair(a: HfValue, b: HfValue) -> HfValue {
        HfValue::KPair(Arc::new(a), Arc::new(b))
    }

    /// `⟨i, b⟩`
    pub fn tagged(i: Tag, b: HfValue) -> HfValue {
        HfValue::Tagged(i, Arc::new(b))
    }

    pub fn members(&self) -> &[HfValue] {
        match self {
            HfValue::Set(m) => m,
            _ => &[],
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, HfValue::Set(_))
    }

    pub fn contains(&self, x: &HfValue) -> bool {
        self.members().binary_search(x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members().len()
    }

    pub fn is_empty(&self) -> bool {
        self.members().is_empty()
    }

    /// `fst` of a tagged object.
    pub fn tag(&self) -> Option<Tag> {
        match self {
            HfValue::Tagged(t, _) => Some(*t),
            _ => None,
        }
    }

    /// `snd` of a tagged object.
    pub fn payload(&self) -> Option<&HfValue> {
        match self {
            HfValue::Tagged(_, b) => Some(b),
            _ => None,
        }
    }

    pub fn has_tag(&self, t: Tag) -> bool {
        self.tag() == Some(t)
    }

    pub fn as_pair(&self) -> Option<(&HfValue, &HfValue)> {
        match self {
            HfValue::KPair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_ord(&self) -> Option<u64> {
        match self {
            HfValue::FinOrd(n) => Some(*n),
            _ => None,
        }
    }

    /// The pair spelled out as `{{a}, {a, b}}`.
    pub fn kuratowski(a: &HfValue, b: &HfValue) -> HfValue {
        HfValue::set([
            HfValue::set([a.clone()]),
            HfValue::set([a.clone(), b.clone()]),
        ])
    }

    pub fn union(&self, other: &HfValue) -> HfValue {
        HfValue::set(self.members().iter().chain(other.members()).cloned())
    }

    pub fn is_subset(&self, other: &HfValue) -> bool {
        self.members().iter().all(|m| other.contains(m))
    }

    /// Nesting depth, counting tags and pairs as one level.
    pub fn rank(&self) -> usize {
        match self {
            HfValue::Set(m) => m.iter().map(|x| x.rank() + 1).max().unwrap_or(0),
            HfValue::FinOrd(_) => 0,
            HfValue::KPair(a, b) => 1 + a.rank().max(b.rank()),
            HfValue::Tagged(_, b) => 1 + b.rank(),
        }
    }
}

impl fmt::Display for HfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HfValue::Set(m) => {
                f.write_str("{")?;
                for (i, x) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
            HfValue::FinOrd(n) => write!(f, "{n}"),
            HfValue::KPair(a, b) => write!(f, "({a}, {b})"),
            HfValue::Tagged(EXC, b) if **b == HfValue::FinOrd(0) => f.write_str("•"),
            HfValue::Tagged(t, b) => write!(f, "⟨{}, {b}⟩", tag_name(*t)),
        }
    }
}

impl fmt::Debug for HfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HfValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All subsets of `xs`, each as a canonical set. Callers bound `xs.len()`.
pub fn powerset(xs: &[HfValue]) -> Vec<HfValue> {
    (0u64..1 << xs.len())
        .map(|mask| {
            HfValue::set(
                xs.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, x)| x.clone()),
            )
        })
        .collect()
}

/// All partial functions from `dom` to `cod` with at most `max_pairs` pairs,
/// as sets of pairs.
pub fn partial_functions(dom: &[HfValue], cod: &[HfValue], max_pairs: usize) -> Vec<HfValue> {
    let mut out = Vec::new();
    let mut graph = Vec::new();
    fn go(
        i: usize,
        dom: &[HfValue],
        cod: &[HfValue],
        left: usize,
        graph: &mut Vec<HfValue>,
        out: &mut Vec<HfValue>,
    ) {
        if i == dom.len() {
            out.push(HfValue::set(graph.iter().cloned()));
            return;
        }
        go(i + 1, dom, cod, left, graph, out);
        if left > 0 {
            for c in cod {
                graph.push(HfValue::pair(dom[i].clone(), c.clone()));
                go(i + 1, dom, cod, left - 1, graph, out);
                graph.pop();
            }
        }
    }
    go(0, dom, cod, max_pairs, &mut graph, &mut out);
    out.sort();
    out
}

/// Number of partial functions [`partial_functions`] would produce,
/// saturating.
pub fn count_partial_functions(n_dom: usize, n_cod: usize, max_pairs: usize) -> u128 {
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    for k in 0..=max_pairs.min(n_dom) {
        if k > 0 {
            choose = choose * (n_dom - k + 1) as u128 / k as u128;
        }
        let ways = (n_cod as u128).saturating_pow(k as u32);
        total = total.saturating_add(choose.saturating_mul(ways));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_are_canonical() {
        let a = HfValue::set([HfValue::FinOrd(2), HfValue::FinOrd(1), HfValue::FinOrd(2)]);
        let b = HfValue::set([HfValue::FinOrd(1), HfValue::FinOrd(2)]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(a.contains(&HfValue::FinOrd(1)));
    }

    #[test]
    fn function_counts() {
        let xs: Vec<HfValue> = (0..4).map(HfValue::FinOrd).collect();
        assert_eq!(partial_functions(&xs, &xs, 1).len(), 17);
        assert_eq!(count_partial_functions(4, 4, 1), 17);
        assert_eq!(partial_functions(&xs, &xs[..2], 4).len(), 81);
        assert_eq!(count_partial_functions(4, 2, 4), 81);
        assert_eq!(powerset(&xs).len(), 16);
    }

    #[test]
    fn display() {
        let s = HfValue::tagged(SET, HfValue::set([HfValue::tagged(SET, HfValue::empty())]));
        assert_eq!(s.to_string(), "⟨set, {⟨set, {}⟩}⟩");
        assert_eq!(HfValue::tagged(EXC, HfValue::FinOrd(0)).to_string(), "•");
    }
}
