//! Maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum matching between `left` nodes and `right_len` right nodes, where
/// `adj[u]` lists the right neighbours of `u`. Returns the partner of every
/// left node. Neighbours are tried in list order, so results are deterministic.
pub fn hopcroft_karp(adj: &[Vec<usize>], right_len: usize) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut mate_l = vec![FREE; n];
    let mut mate_r = vec![FREE; right_len];
    let mut dist = vec![0usize; n];

    loop {
        // Layer the free left nodes and everything reachable by alternating paths.
        let mut queue = VecDeque::new();
        let mut found = false;
        for u in 0..n {
            if mate_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..n {
            if mate_l[u] == FREE {
                augment(u, adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
    mate_l.into_iter().map(|v| (v != FREE).then_some(v)).collect()
}

fn augment(u: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = mate_r[v];
        if w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, mate_l, mate_r, dist)) {
            mate_l[u] = v;
            mate_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(adj: &[Vec<usize>], right: usize) -> usize {
        fn go(u: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if u == adj.len() {
                return 0;
            }
            let mut best = go(u + 1, adj, used);
            for &v in &adj[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(u + 1, adj, used));
                    used[v] = false;
                }
            }
            best
        }
        go(0, adj, &mut vec![false; right])
    }

    #[test]
    fn small_cases() {
        assert_eq!(hopcroft_karp(&[], 3), vec![]);
        assert_eq!(hopcroft_karp(&[vec![0], vec![0]], 1).iter().flatten().count(), 1);
        let m = hopcroft_karp(&[vec![0, 1], vec![0]], 2);
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(edges in prop::collection::vec(prop::collection::vec(0usize..5, 0..4), 0..6)) {
            let adj: Vec<Vec<usize>> = edges.into_iter().map(|mut e| { e.sort_unstable(); e.dedup(); e }).collect();
            let m = hopcroft_karp(&adj, 5);
            let mut seen = std::collections::HashSet::new();
            for (u, v) in m.iter().enumerate() {
                if let Some(v) = v {
                    prop_assert!(adj[u].contains(v));
                    prop_assert!(seen.insert(*v));
                }
            }
            prop_assert_eq!(seen.len(), brute(&adj, 5));
        }
    }
}
