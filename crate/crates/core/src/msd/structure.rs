//! Reshaping operations on plain cluster lists.

use crate::metric::{MetricSpace, PointId};

fn union(parts: &[&Vec<PointId>]) -> Vec<PointId> {
    let mut out: Vec<PointId> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Indices of the clusters at most diam(C) away from C that are no smaller.
pub fn neighborhood(space: &MetricSpace, sol: &[Vec<PointId>], c: usize) -> Vec<usize> {
    let dc = space.diam_unchecked(&sol[c]);
    (0..sol.len())
        .filter(|&j| j != c)
        .filter(|&j| space.set_distance(&sol[c], &sol[j]) <= dc && dc <= space.diam_unchecked(&sol[j]))
        .collect()
}

/// Replaces `picked` clusters by their union, placed at the smallest index.
fn merge(sol: &mut Vec<Vec<PointId>>, picked: &[usize]) {
    let merged = union(&picked.iter().map(|&i| &sol[i]).collect::<Vec<_>>());
    let first = *picked.iter().min().expect("non-empty merge");
    let mut drop: Vec<usize> = picked.iter().copied().filter(|&i| i != first).collect();
    drop.sort_unstable_by(|a, b| b.cmp(a));
    sol[first] = merged;
    for i in drop {
        sol.remove(i);
    }
}

/// Merges every cluster with more than four neighbours into them, until none
/// is left. Never increases the cost.
pub fn bound_neighborhoods(space: &MetricSpace, sol: &[Vec<PointId>]) -> Vec<Vec<PointId>> {
    let mut out = sol.to_vec();
    loop {
        let hit = (0..out.len()).find_map(|c| {
            let nb = neighborhood(space, &out, c);
            (nb.len() > 4).then(|| {
                let mut all = nb;
                all.push(c);
                all
            })
        });
        match hit {
            Some(group) => merge(&mut out, &group),
            None => return out,
        }
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First group of 2 to 5 clusters, smallest first, whose union is no wider
/// than the sum of their diameters.
pub fn first_unpacked(space: &MetricSpace, sol: &[Vec<PointId>]) -> Option<Vec<usize>> {
    let diams: Vec<f64> = sol.iter().map(|c| space.diam_unchecked(c)).collect();
    for size in 2..=5.min(sol.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let total: f64 = idx.iter().map(|&i| diams[i]).sum();
            let u = union(&idx.iter().map(|&i| &sol[i]).collect::<Vec<_>>());
            if space.diam_unchecked(&u) <= total {
                return Some(idx);
            }
            if !next_combination(&mut idx, sol.len()) {
                break;
            }
        }
    }
    None
}

/// Merges unpacked groups until every group of at most five clusters is
/// strictly wider than the sum of its diameters.
pub fn make_packed(space: &MetricSpace, sol: &[Vec<PointId>]) -> Vec<Vec<PointId>> {
    let mut out = sol.to_vec();
    while let Some(group) = first_unpacked(space, &out) {
        merge(&mut out, &group);
    }
    out
}

/// Single-linkage merge of clusters at distance ≤ 2δ. Clusters come back
/// ordered by their smallest member.
pub fn enforce_min_cluster_distance(space: &MetricSpace, sol: &[Vec<PointId>], delta: f64) -> Vec<Vec<PointId>> {
    let n = sol.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if space.set_distance(&sol[a], &sol[b]) <= 2.0 * delta {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<PointId>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().extend_from_slice(&sol[i]);
    }
    let mut out: Vec<Vec<PointId>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort_by_key(|g| g.first().copied());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::line;

    fn cost(space: &MetricSpace, sol: &[Vec<PointId>]) -> f64 {
        sol.iter().map(|c| space.diam_unchecked(c)).sum()
    }

    #[test]
    fn neighborhood_examples() {
        let s = line(&[0.0, 1.0, 2.0, 3.0, 100.0]);
        let sol = vec![vec![0, 1], vec![2, 3], vec![4]];
        assert_eq!(neighborhood(&s, &sol, 0), vec![1]);
        assert_eq!(neighborhood(&s, &sol, 1), vec![0]);
        assert!(neighborhood(&s, &sol, 2).is_empty());
    }

    #[test]
    fn star_collapses() {
        // Hub {0, 1} of diameter 2 with five arms of diameter 2 at distance 2.
        let mut rows = vec![vec![0.0; 12]; 12];
        let arm = |p: usize| if p < 2 { None } else { Some((p - 2) / 2) };
        for a in 0..12 {
            for b in 0..12 {
                if a == b {
                    continue;
                }
                rows[a][b] = match (arm(a), arm(b)) {
                    (None, None) => 2.0,
                    (Some(x), Some(y)) if x == y => 2.0,
                    (None, Some(_)) | (Some(_), None) => 2.0,
                    _ => 4.0,
                };
            }
        }
        let s = MetricSpace::from_matrix(rows).unwrap();
        let sol: Vec<Vec<PointId>> = std::iter::once(vec![0, 1]).chain((0..5).map(|i| vec![2 + 2 * i, 3 + 2 * i])).collect();
        assert_eq!(neighborhood(&s, &sol, 0).len(), 5);
        let out = bound_neighborhoods(&s, &sol);
        assert_eq!(out.len(), 1);
        assert!(cost(&s, &out) <= cost(&s, &sol));
        let one = vec![(0..12).collect::<Vec<_>>()];
        assert_eq!(bound_neighborhoods(&s, &one), one);
    }

    #[test]
    fn packing_examples() {
        let s = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(make_packed(&s, &[vec![0, 2], vec![1, 3]]), vec![vec![0, 1, 2, 3]]);
        let s = line(&[0.0, 1.0, 10.0, 11.0]);
        let far = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(make_packed(&s, &far), far);
        assert_eq!(make_packed(&s, &[vec![0, 1, 2, 3]]), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn min_distance_examples() {
        let s = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(enforce_min_cluster_distance(&s, &[vec![0, 1], vec![2, 3]], 1.0), vec![vec![0, 1, 2, 3]]);
        let s = line(&[0.0, 1.0, 10.0, 11.0]);
        let far = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(enforce_min_cluster_distance(&s, &far, 1.0), far);
        assert_eq!(enforce_min_cluster_distance(&s, &[vec![0, 1, 2, 3]], 1.0), vec![vec![0, 1, 2, 3]]);
    }
}
