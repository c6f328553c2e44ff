//! Subtracting small, tight clusters out of larger candidates.

use std::cmp::Ordering;

use crate::bits::Bits;
use serde::{Deserialize, Serialize};

use crate::local::Local;
use crate::metric::{MetricSpace, PointId};

/// Clusters tagged with the diameter they were built for, plus outliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedClustering {
    pub entries: Vec<(Vec<PointId>, f64)>,
    pub outliers: Vec<PointId>,
}

#[derive(Debug, Clone)]
pub(crate) struct Entry {
    pub set: Bits,
    pub tag: f64,
    pub diam: f64,
    pub outlier: bool,
}

impl Entry {
    pub fn new(local: &Local, set: Bits, tag: f64, outlier: bool) -> Self {
        let diam = local.diam(&set);
        Entry { set, tag, diam, outlier }
    }

    pub fn enlarged(&self) -> bool {
        self.diam > self.tag
    }
}

/// The (source, target) pair the next subtraction would use.
fn next_pair(entries: &[Entry]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let key = |i: usize, j: usize| (entries[i].tag, entries[j].tag, i, j);
    let less = |a: (f64, f64, usize, usize), b: (f64, f64, usize, usize)| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
            == Ordering::Less
    };
    for (i, src) in entries.iter().enumerate() {
        if src.enlarged() {
            continue;
        }
        for (j, dst) in entries.iter().enumerate() {
            if i == j || dst.outlier || dst.tag < src.tag || src.set.is_disjoint(&dst.set) {
                continue;
            }
            if best.is_none_or(|(bi, bj)| less(key(i, j), key(bi, bj))) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub(crate) fn refine_entries(local: &Local, entries: &mut Vec<Entry>) {
    while let Some((i, j)) = next_pair(entries) {
        let src = entries[i].set.clone();
        entries[j].set.difference_with(&src);
        if entries[j].set.is_clear() {
            entries.remove(j);
        } else {
            entries[j].diam = local.diam(&entries[j].set);
        }
    }
}

fn to_local(space: &MetricSpace, tc: &TaggedClustering) -> (Local, Vec<Entry>) {
    let mut ids: Vec<PointId> = tc.entries.iter().flat_map(|(m, _)| m.iter().copied()).chain(tc.outliers.iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    let local = Local::unit(space, ids);
    let set_of = |m: &[PointId]| {
        let mut s = local.empty_set();
        for p in m {
            s.insert(local.ids.binary_search(p).expect("collected above"));
        }
        s
    };
    let mut entries: Vec<Entry> = tc.entries.iter().map(|(m, r)| Entry::new(&local, set_of(m), *r, false)).collect();
    for &o in &tc.outliers {
        entries.push(Entry::new(&local, set_of(&[o]), 0.0, true));
    }
    (local, entries)
}

/// Repeatedly removes a non-enlarged entry's points from every entry whose
/// tag is at least as large. Outliers act as entries tagged 0 and are never
/// reduced themselves. Entries emptied along the way are dropped.
pub fn refine(space: &MetricSpace, tc: &TaggedClustering) -> TaggedClustering {
    let (local, mut entries) = to_local(space, tc);
    refine_entries(&local, &mut entries);
    let mut out = TaggedClustering { entries: vec![], outliers: vec![] };
    for e in entries {
        if e.outlier {
            out.outliers.extend(local.globals(&e.set));
        } else {
            out.entries.push((local.globals(&e.set), e.tag));
        }
    }
    out.outliers.sort_unstable();
    out
}

/// Whether another subtraction step would apply.
pub fn refine_applicable(space: &MetricSpace, tc: &TaggedClustering) -> bool {
    let (_, entries) = to_local(space, tc);
    next_pair(&entries).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::line;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = line(&[0.0, 1.0, 2.0]);
        let tc = TaggedClustering { entries: vec![(vec![0, 1], 1.0), (vec![1, 2], 2.0)], outliers: vec![] };
        let r = refine(&s, &tc);
        assert_eq!(r.entries, vec![(vec![0, 1], 1.0), (vec![2], 2.0)]);
        assert!(!refine_applicable(&s, &r));

        let disjoint = TaggedClustering { entries: vec![(vec![0], 0.0), (vec![1, 2], 1.0)], outliers: vec![] };
        assert_eq!(refine(&s, &disjoint), disjoint);

        let enlarged = TaggedClustering { entries: vec![(vec![0, 2], 1.0), (vec![1, 2], 2.0)], outliers: vec![] };
        assert_eq!(refine(&s, &enlarged), enlarged);

        let with_out = TaggedClustering { entries: vec![(vec![0, 1, 2], 2.0)], outliers: vec![2] };
        let r = refine(&s, &with_out);
        assert_eq!(r.entries, vec![(vec![0, 1], 2.0)]);
        assert_eq!(r.outliers, vec![2]);
    }

    proptest! {
        #[test]
        fn exit_guard_is_false(xs in prop::collection::vec(0.0f64..20.0, 2..9),
                               raw in prop::collection::vec((prop::collection::vec(0usize..9, 1..5), 0u8..6), 1..5)) {
            let mut pts = xs.clone();
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let s = line(&pts);
            let n = pts.len();
            let entries: Vec<(Vec<PointId>, f64)> = raw.into_iter().map(|(m, t)| {
                let mut m: Vec<PointId> = m.into_iter().map(|p| p % n).collect();
                m.sort_unstable();
                m.dedup();
                (m, t as f64 * 2.0)
            }).collect();
            let tc = TaggedClustering { entries: entries.clone(), outliers: vec![] };
            let r = refine(&s, &tc);
            prop_assert!(!refine_applicable(&s, &r));
            for (m, t) in &r.entries {
                prop_assert!(!m.is_empty());
                prop_assert!(entries.iter().any(|(orig, ot)| ot == t && m.iter().all(|p| orig.contains(p))));
            }
        }
    }
}
