//! Recursive construction of tagged clusters over a net.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use smallvec::SmallVec;

use crate::bits::Bits;

use super::refine::{refine_entries, Entry};
use crate::local::Local;
use crate::metric::{Cluster, PartitionSolution, PointId};

struct Cand {
    set: Bits,
    tag: f64,
    spent: f64,
    diam: f64,
}

pub(crate) struct Found<P> {
    pub cost: f64,
    pub net: PartitionSolution,
    pub payload: P,
}

#[derive(Default)]
struct Blockers {
    pairs: Vec<(f64, Vec<(usize, usize)>)>,
    cores: Vec<(f64, Bits)>,
}

type Key = (Bits, Vec<(Bits, u64, bool)>, usize, usize);

pub(crate) struct MsdSearch<'a> {
    pub local: Local,
    radii: &'a [f64],
    witnesses: usize,
    cands: Vec<Option<Rc<Vec<Cand>>>>,
    seen: HashMap<Key, f64>,
    /// Leaves costing this much or more are of no interest.
    bound: f64,
}

/// Witness-set size needed when `clusters` clusters are built in total.
pub(crate) fn witness_cap(clusters: usize) -> usize {
    clusters.saturating_sub(1).clamp(1, 4)
}

fn canonical(entries: &mut [Entry]) {
    entries.sort_by(|a, b| {
        a.tag
            .total_cmp(&b.tag)
            .then(a.outlier.cmp(&b.outlier))
            .then_with(|| a.set.as_slice().cmp(b.set.as_slice()))
    });
}

impl<'a> MsdSearch<'a> {
    pub fn new(local: Local, radii: &'a [f64], witnesses: usize) -> Self {
        let n = local.len();
        MsdSearch {
            local,
            radii,
            witnesses,
            cands: (0..n).map(|_| None).collect(),
            seen: HashMap::new(),
            bound: f64::INFINITY,
        }
    }

    /// Only look for leaves cheaper than `bound`.
    pub fn below(&mut self, bound: f64) {
        self.bound = bound;
    }

    fn weight(&self, set: &Bits) -> usize {
        set.ones().map(|i| self.local.weight[i]).sum()
    }

    /// Clusters that may contain `z`: intersections of balls of radius r
    /// around up to `witnesses` points near `z`, where r is a distance between
    /// two points within the budget step of `z` and is attained inside the
    /// cluster. Each (cluster, r) is kept once, at its cheapest step.
    fn candidates(&mut self, z: usize) -> Rc<Vec<Cand>> {
        if let Some(c) = &self.cands[z] {
            return c.clone();
        }
        let l = &self.local;
        let m = l.len();
        let mut diameters: Vec<(f64, f64)> = Vec::new();
        let mut seen_r = HashSet::new();
        for &step in self.radii {
            for x in (0..m).filter(|&x| l.d(z, x) <= step) {
                for y in (0..m).filter(|&y| l.d(z, y) <= step) {
                    let r = l.d(x, y);
                    if r <= step && l.d(z, x).max(l.d(z, y)) <= r && seen_r.insert(r.to_bits()) {
                        diameters.push((r, step));
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (r, step) in diameters {
            let near: Vec<usize> = (0..m).filter(|&w| l.d(z, w) <= r).collect();
            let balls: Vec<Bits> = near.iter().map(|&w| l.ball(w, r)).collect();
            let mut pick = Vec::new();
            self.witness_sets(&near, &balls, r, 0, &mut pick, &mut |set| {
                let members: Vec<usize> = set.ones().collect();
                let attained = members.iter().any(|&a| members.iter().any(|&b| l.d(a, b) == r));
                if attained && seen.insert((set.clone(), r.to_bits())) {
                    out.push(Cand { diam: l.diam(&set), set, tag: r, spent: step });
                }
            });
        }
        let rc = Rc::new(out);
        self.cands[z] = Some(rc.clone());
        rc
    }

    /// Enumerates pairwise-close witness sets of `near` of size 1..=cap in
    /// lexicographic order and reports the intersection of their balls.
    fn witness_sets(
        &self,
        near: &[usize],
        balls: &[Bits],
        r: f64,
        from: usize,
        pick: &mut Vec<usize>,
        emit: &mut dyn FnMut(Bits),
    ) {
        for i in from..near.len() {
            if pick.iter().any(|&j| self.local.d(near[j], near[i]) > r) {
                continue;
            }
            pick.push(i);
            let mut set = balls[pick[0]].clone();
            for &j in &pick[1..] {
                set.intersect_with(&balls[j]);
            }
            emit(set);
            if pick.len() < self.witnesses {
                self.witness_sets(near, balls, r, i + 1, pick, emit);
            }
            pick.pop();
        }
    }

    pub fn run<P>(
        &mut self,
        y: Bits,
        entries: Vec<Entry>,
        budget: f64,
        clusters: usize,
        outliers: usize,
        judge: &mut dyn FnMut(&PartitionSolution) -> Option<P>,
    ) -> Option<Found<P>> {
        let mut best = None;
        self.seen.clear();
        self.go(y, entries, budget, clusters, outliers, judge, &mut best);
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn go<P>(
        &mut self,
        y: Bits,
        mut entries: Vec<Entry>,
        budget: f64,
        q: usize,
        outl: usize,
        judge: &mut dyn FnMut(&PartitionSolution) -> Option<P>,
        best: &mut Option<Found<P>>,
    ) {
        refine_entries(&self.local, &mut entries);
        canonical(&mut entries);
        let probes: Vec<usize> = match y.ones().next() {
            Some(z) => {
                if q == 0 && self.weight(&y) > outl {
                    return;
                }
                vec![z]
            }
            None => {
                let widest = entries
                    .iter()
                    .filter(|e| !e.outlier && e.enlarged())
                    .min_by(|a, b| a.tag.total_cmp(&b.tag));
                match widest {
                    None => {
                        self.leaf(&entries, judge, best);
                        return;
                    }
                    Some(e) => {
                        let (a, b) = self.local.diam_pair(&e.set);
                        vec![a, b]
                    }
                }
            }
        };
        if q == 0 && outl == 0 {
            return;
        }
        // Nodes with no clusters left only peel off a few outliers; not
        // worth remembering.
        if q > 0 {
            let key: Key = (
                y.clone(),
                entries.iter().map(|e| (e.set.clone(), e.tag.to_bits(), e.outlier)).collect(),
                q,
                outl,
            );
            if self.seen.get(&key).is_some_and(|&b| b >= budget) {
                return;
            }
            self.seen.insert(key, budget);
        }

        for z in probes {
            if q > 0 {
                // With one cluster and no outliers left, an enlarged entry can
                // only shrink through a chain of carvings that starts at the
                // new cluster and never decreases in tag.
                let blockers = if q == 1 { self.blockers(&entries) } else { Blockers::default() };
                let cands = self.candidates(z);
                for c in cands.iter() {
                    if c.spent > budget {
                        continue;
                    }
                    let cutoff = best.as_ref().map_or(self.bound, |b| b.cost);
                    if q == 1 && !self.may_finish(&entries, &blockers, c, &y, outl, cutoff) {
                        continue;
                    }
                    let mut rest = y.clone();
                    rest.difference_with(&c.set);
                    let mut next = Vec::with_capacity(entries.len() + 1);
                    next.extend_from_slice(&entries);
                    next.push(Entry { set: c.set.clone(), tag: c.tag, diam: c.diam, outlier: false });
                    self.go(rest, next, budget - c.spent, q - 1, outl, judge, best);
                }
            }
            let w = self.local.weight[z];
            if w <= outl {
                let mut single = self.local.empty_set();
                single.insert(z);
                let mut rest = y.clone();
                rest.set(z, false);
                let mut next = Vec::with_capacity(entries.len() + 1);
                    next.extend_from_slice(&entries);
                next.push(Entry { set: single, tag: 0.0, diam: 0.0, outlier: true });
                self.go(rest, next, budget, q, outl - w, judge, best);
            }
        }
    }

    /// For every cluster entry, its tag and the points no other existing
    /// entry could carve away (only entries of no larger tag can); for the
    /// enlarged ones also the pairs of such points that are too far apart.
    fn blockers(&self, entries: &[Entry]) -> Blockers {
        let mut out = Blockers::default();
        for (i, e) in entries.iter().enumerate() {
            if e.outlier {
                continue;
            }
            let mut kept = e.set.clone();
            for (j, f) in entries.iter().enumerate() {
                if j != i && f.tag <= e.tag {
                    kept.difference_with(&f.set);
                }
            }
            if e.enlarged() {
                out.pairs.push((e.tag, self.far_pairs(&kept, e.tag)));
            }
            out.cores.push((e.tag, kept));
        }
        out
    }

    fn far_pairs(&self, set: &Bits, limit: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in set.ones() {
            for b in set.ones().filter(|&b| b > a) {
                if self.local.d(a, b) > limit {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Necessary condition for `c`, as the last cluster, to lead to a leaf:
    /// after the uncovered points become outliers, the remaining outlier
    /// budget must break every far pair that neither `c` nor an existing
    /// entry can carve away. Refinement only ever removes points from
    /// entries of larger or equal tag, and an outlier removes its point
    /// everywhere.
    #[allow(clippy::too_many_arguments)]
    fn may_finish(&self, entries: &[Entry], blockers: &Blockers, c: &Cand, y: &Bits, outl: usize, cutoff: f64) -> bool {
        let forced = y.difference(&c.set).map(|i| self.local.weight[i]).sum::<usize>();
        if forced > outl {
            return false;
        }
        let spare = outl - forced;
        let removed = |v: usize| y.contains(v) && !c.set.contains(v);
        let mut open: SmallVec<[(usize, usize); 16]> = SmallVec::new();
        let mut note = |a: usize, b: usize| {
            if removed(a) || removed(b) {
                return true;
            }
            open.push((a, b));
            spare > 0
        };
        for (tag, pairs) in &blockers.pairs {
            for &(a, b) in pairs {
                if (c.tag > *tag || !(c.set.contains(a) || c.set.contains(b))) && !note(a, b) {
                    return false;
                }
            }
        }
        let mut kept = c.set.clone();
        for f in entries.iter().filter(|f| f.tag <= c.tag) {
            kept.difference_with(&f.set);
        }
        if c.diam > c.tag {
            for a in kept.ones() {
                for b in kept.ones().filter(|&b| b > a) {
                    if self.local.d(a, b) > c.tag && !note(a, b) {
                        return false;
                    }
                }
            }
        }
        if !self.coverable(&open, spare) {
            return false;
        }
        // Every final cluster keeps its core minus what the outliers take.
        let mut floor = 0.0;
        let mut add = |set: &mut Bits| {
            for v in y.difference(&c.set) {
                set.set(v, false);
            }
            floor += self.diam_dropping(set, spare);
            floor < cutoff
        };
        if !add(&mut kept) {
            return false;
        }
        for (tag, core) in &blockers.cores {
            let mut core = core.clone();
            if c.tag <= *tag {
                core.difference_with(&c.set);
            }
            if !add(&mut core) {
                return false;
            }
        }
        true
    }

    /// Smallest diameter of `set` after removing points of total weight at
    /// most `budget`.
    fn diam_dropping(&self, set: &Bits, budget: usize) -> f64 {
        if set.is_clear() {
            return 0.0;
        }
        let (a, b) = self.local.diam_pair(set);
        let diam = self.local.d(a, b);
        if budget == 0 || diam == 0.0 {
            return diam;
        }
        let mut best = diam;
        for v in [a, b] {
            let w = self.local.weight[v];
            if w <= budget {
                let mut rest = set.clone();
                rest.set(v, false);
                best = best.min(self.diam_dropping(&rest, budget - w));
            }
        }
        best
    }

    /// Whether points of total weight ≤ `budget` can touch every pair.
    fn coverable(&self, pairs: &[(usize, usize)], budget: usize) -> bool {
        let Some(&(a, b)) = pairs.first() else { return true };
        for v in [a, b] {
            let w = self.local.weight[v];
            if w <= budget {
                let rest: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(x, y)| x != v && y != v).collect();
                if self.coverable(&rest, budget - w) {
                    return true;
                }
            }
        }
        false
    }

    fn leaf<P>(&self, entries: &[Entry], judge: &mut dyn FnMut(&PartitionSolution) -> Option<P>, best: &mut Option<Found<P>>) {
        let cost: f64 = entries.iter().filter(|e| !e.outlier).map(|e| e.diam).sum();
        if cost >= best.as_ref().map_or(self.bound, |b| b.cost) {
            return;
        }
        let mut clusters = Vec::new();
        let mut outliers: Vec<PointId> = Vec::new();
        for e in entries {
            if e.outlier {
                outliers.extend(self.local.globals(&e.set));
            } else {
                let mut c = Cluster::new(self.local.globals(&e.set));
                c.tag = Some(e.tag);
                clusters.push(c);
            }
        }
        outliers.sort_unstable();
        let net = PartitionSolution { clusters, outliers };
        if let Some(payload) = judge(&net) {
            *best = Some(Found { cost, net, payload });
        }
    }
}
