use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::component::{Exclusion, ModelComponent, SuccRule, ZeroRule};
use super::value::{tag_name, HfValue, Tag};
use super::{MResult, ModelError};

/// `Excluded i` for every tag `i`: the tags whose objects `i` ignores.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExcludedTable {
    by_owner: BTreeMap<Tag, BTreeSet<Tag>>,
}

impl ExcludedTable {
    /// The least table meeting every constraint.
    pub fn solve(constraints: &[Exclusion]) -> MResult<ExcludedTable> {
        let mut t = ExcludedTable::default();
        for c in constraints {
            if let Exclusion::Always { owner, element } = *c {
                t.by_owner.entry(owner).or_default().insert(element);
            }
        }
        for c in constraints {
            if let Exclusion::Never { owner, element } = *c {
                if t.by_owner.get(&owner).is_some_and(|s| s.contains(&element)) {
                    return Err(ModelError::ExcludedUnsatisfiable {
                        owner: tag_name(owner),
                        element: tag_name(element),
                    });
                }
            }
        }
        Ok(t)
    }

    /// `b : Excluded owner`
    pub fn excludes(&self, owner: Tag, b: &HfValue) -> bool {
        match (b.tag(), self.by_owner.get(&owner)) {
            (Some(t), Some(s)) => s.contains(&t),
            _ => false,
        }
    }

    pub fn tags_excluded_by(&self, owner: Tag) -> Vec<Tag> {
        self.by_owner.get(&owner).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }
}

/// `i ⊕ x = {⟨i, b⟩ | b ∈ x}`
pub fn tag_map(i: Tag, x: &[HfValue]) -> HfValue {
    HfValue::set(x.iter().map(|b| HfValue::tagged(i, b.clone())))
}

/// `x ⊖ Eᵢ`
pub fn without_excluded(x: &HfValue, owner: Tag, excluded: &ExcludedTable) -> HfValue {
    HfValue::set(x.members().iter().filter(|b| !excluded.excludes(owner, b)).cloned())
}

/// The components indexed by tag, with their exclusions solved.
#[derive(Clone, Debug)]
pub struct TagTable {
    pub components: BTreeMap<Tag, ModelComponent>,
    pub excluded: ExcludedTable,
    pub max_set_size: usize,
}

impl TagTable {
    pub fn new(
        components: &[ModelComponent],
        extra: &[Exclusion],
        max_set_size: usize,
    ) -> MResult<TagTable> {
        let mut by_tag = BTreeMap::new();
        let mut constraints: Vec<Exclusion> = extra.to_vec();
        for c in components {
            if by_tag.insert(c.tag, c.clone()).is_some() {
                return Err(ModelError::TagCollision(tag_name(c.tag)));
            }
            constraints.extend(c.excluded.iter().copied());
        }
        for c in components {
            if let Some(d) = c.deps.iter().find(|d| !by_tag.contains_key(d)) {
                return Err(ModelError::MissingDependency {
                    component: c.name.clone(),
                    tag: tag_name(*d),
                });
            }
        }
        Ok(TagTable {
            components: by_tag,
            excluded: ExcludedTable::solve(&constraints)?,
            max_set_size,
        })
    }

    /// `⨄ (λi. TierImp i k (x ⊖ Eᵢ))`
    fn disjoint_union(&self, k: u64, x: &HfValue) -> MResult<Vec<HfValue>> {
        let mut out = Vec::new();
        for (i, c) in &self.components {
            let input = without_excluded(x, *i, &self.excluded);
            out.extend(tag_map(*i, &c.tier_imp(k, &input, self.max_set_size)?).members().iter().cloned());
        }
        Ok(out)
    }

    /// Whether `b` lies in some finite tier of the unbounded construction.
    pub fn in_model(&self, b: &HfValue) -> bool {
        let (Some(i), Some(p)) = (b.tag(), b.payload()) else {
            return false;
        };
        let Some(c) = self.components.get(&i) else {
            return false;
        };
        let ingestible = |m: &HfValue| self.in_model(m) && !self.excluded.excludes(i, m);
        let from_zero = match &c.constructor.zero {
            ZeroRule::Empty => false,
            ZeroRule::Payloads(ps) => ps.contains(p),
        };
        from_zero
            || match c.constructor.succ {
                SuccRule::Nothing => false,
                SuccRule::Powerset => p.is_set() && p.members().iter().all(ingestible),
                SuccRule::Ordinals { .. } => p.as_ord().is_some(),
                SuccRule::Functions { .. } => is_function_graph(p, &ingestible),
            }
    }
}

/// A finite single-valued set of pairs whose components satisfy `ok`.
pub fn is_function_graph(g: &HfValue, ok: &dyn Fn(&HfValue) -> bool) -> bool {
    if !g.is_set() {
        return false;
    }
    let mut prev: Option<&HfValue> = None;
    for m in g.members() {
        let Some((a, b)) = m.as_pair() else { return false };
        if prev == Some(a) || !ok(a) || !ok(b) {
            return false;
        }
        prev = Some(a);
    }
    true
}

pub fn tier_zero(table: &TagTable) -> MResult<HfValue> {
    Ok(HfValue::set(table.disjoint_union(0, &HfValue::empty())?))
}

/// `Tier_succ k x = x ∪ ⨄ (λi. TierImp i k (x ⊖ Eᵢ))` for `k ≥ 1`.
pub fn tier_succ(table: &TagTable, k: u64, prev: &HfValue) -> MResult<HfValue> {
    let new = table.disjoint_union(k, prev)?;
    let out = HfValue::set(prev.members().iter().cloned().chain(new));
    if out.len() > table.max_set_size {
        return Err(ModelError::SizeGuard {
            what: format!("tier {k} with {} elements", out.len()),
            limit: table.max_set_size,
        });
    }
    Ok(out)
}

/// `Tier 0 … Tier depth`, with the limit machinery left unbuilt.
#[derive(Clone, Debug)]
pub struct TierState {
    pub depth: u64,
    pub tiers: Vec<HfValue>,
    pub table: TagTable,
}

pub const UNMATERIALIZED: [&str; 4] = [
    "Tier_limit: no limit tier is built",
    "lim1: unchecked, requires an infinite model",
    "lim2: unchecked, requires an infinite model",
    "ω, Limit, mInf, mSetOrd ω: not materialized",
];

pub fn build_tiers(
    components: &[ModelComponent],
    extra: &[Exclusion],
    depth: u64,
    max_set_size: usize,
) -> MResult<TierState> {
    if depth == 0 {
        return Err(ModelError::DepthZero);
    }
    let table = TagTable::new(components, extra, max_set_size)?;
    let mut tiers = vec![tier_zero(&table)?];
    for k in 1..=depth {
        let next = tier_succ(&table, k, tiers.last().unwrap())?;
        tiers.push(next);
    }
    Ok(TierState { depth, tiers, table })
}

/// Counts and failures from checking the zero, succ1 and succ2 rules.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IntroReport {
    pub zero: usize,
    pub succ1: usize,
    pub succ2: usize,
    pub violations: Vec<String>,
}

impl TierState {
    pub fn top(&self) -> &HfValue {
        self.tiers.last().expect("at least one tier")
    }

    /// Elements of the top tier in canonical order.
    pub fn domain(&self) -> Vec<HfValue> {
        self.top().members().to_vec()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.tiers.iter().map(HfValue::len).collect()
    }

    /// Checks the tier introduction rules on every built tier.
    pub fn check_intro_rules(&self) -> MResult<IntroReport> {
        let mut r = IntroReport::default();
        let t = &self.table;
        for (i, c) in &t.components {
            for b in c.tier_imp(0, &HfValue::empty(), t.max_set_size)? {
                r.zero += 1;
                if !self.tiers[0].contains(&HfValue::tagged(*i, b.clone())) {
                    r.violations.push(format!("zero: ⟨{}, {b}⟩ ∉ Tier 0", tag_name(*i)));
                }
            }
        }
        for j in 0..self.tiers.len() - 1 {
            let (lo, hi) = (&self.tiers[j], &self.tiers[j + 1]);
            for b in lo.members() {
                r.succ1 += 1;
                if !hi.contains(b) {
                    r.violations.push(format!("succ1: {b} ∈ Tier {j} but not Tier {}", j + 1));
                }
            }
            for (i, c) in &t.components {
                let input = without_excluded(lo, *i, &t.excluded);
                for b in c.tier_imp(j as u64 + 1, &input, t.max_set_size)? {
                    r.succ2 += 1;
                    if !hi.contains(&HfValue::tagged(*i, b.clone())) {
                        r.violations.push(format!(
                            "succ2: ⟨{}, {b}⟩ ∉ Tier {}",
                            tag_name(*i),
                            j + 1
                        ));
                    }
                }
            }
        }
        Ok(r)
    }

    /// Objects inside the payload of an `owner`-tagged element that `owner`
    /// excludes.
    pub fn excluded_violations(&self, owner: Tag) -> Vec<HfValue> {
        let mut out = Vec::new();
        for x in self.top().members().iter().filter(|x| x.has_tag(owner)) {
            let p = x.payload().unwrap();
            let inner: Vec<&HfValue> = match p.members().first().and_then(HfValue::as_pair) {
                Some(_) => p
                    .members()
                    .iter()
                    .filter_map(HfValue::as_pair)
                    .flat_map(|(a, b)| [a, b])
                    .collect(),
                None => p.members().iter().collect(),
            };
            if inner.iter().any(|m| self.table.excluded.excludes(owner, m)) {
                out.push(x.clone());
            }
        }
        out
    }

    pub fn dump(&self) -> ModelDump {
        ModelDump {
            depth: self.depth,
            tiers: self
                .tiers
                .iter()
                .enumerate()
                .map(|(index, t)| TierDump {
                    index,
                    size: t.len(),
                    elements: t.members().iter().map(ToString::to_string).collect(),
                })
                .collect(),
            excluded: self
                .table
                .components
                .keys()
                .map(|i| (tag_name(*i), self.table.excluded.tags_excluded_by(*i).into_iter().map(tag_name).collect()))
                .collect(),
            unmaterialized: UNMATERIALIZED.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TierDump {
    pub index: usize,
    pub size: usize,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelDump {
    pub depth: u64,
    pub tiers: Vec<TierDump>,
    pub excluded: BTreeMap<String, Vec<String>>,
    pub unmaterialized: Vec<String>,
}
