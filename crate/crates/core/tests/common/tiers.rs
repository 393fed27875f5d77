use std::collections::BTreeSet;

use gst_core::hfmodel::{HfValue, EXC, FUN, ORD, SET};

/// Tiers of the ZF⁺ assembly computed straight from the equations, sharing
/// nothing with the library beyond the value type.
pub fn naive_tiers(depth: u64) -> Vec<BTreeSet<HfValue>> {
    fn subsets(xs: &[HfValue]) -> Vec<Vec<HfValue>> {
        match xs.split_first() {
            None => vec![vec![]],
            Some((h, t)) => {
                let rest = subsets(t);
                let mut out = rest.clone();
                for mut r in rest {
                    r.push(h.clone());
                    out.push(r);
                }
                out
            }
        }
    }
    fn graphs(xs: &[HfValue], max: usize) -> Vec<Vec<HfValue>> {
        let mut out = vec![vec![]];
        for x in xs {
            let mut next = Vec::new();
            for g in &out {
                next.push(g.clone());
                if g.len() < max {
                    for y in xs {
                        let mut h = g.clone();
                        h.push(HfValue::pair(x.clone(), y.clone()));
                        next.push(h);
                    }
                }
            }
            out = next;
        }
        out
    }
    let bullet = HfValue::tagged(EXC, HfValue::FinOrd(0));
    let mut tiers = vec![BTreeSet::from([bullet.clone()])];
    for k in 1..=depth {
        let prev = tiers.last().unwrap().clone();
        let ingest: Vec<HfValue> = prev.iter().filter(|v| **v != bullet).cloned().collect();
        let mut next = prev.clone();
        for s in subsets(&ingest) {
            next.insert(HfValue::tagged(SET, HfValue::set(s)));
        }
        if k >= 2 {
            next.insert(HfValue::tagged(ORD, HfValue::FinOrd(k - 2)));
            for g in graphs(&ingest, (k - 2) as usize) {
                next.insert(HfValue::tagged(FUN, HfValue::set(g)));
            }
        }
        tiers.push(next);
    }
    tiers
}

