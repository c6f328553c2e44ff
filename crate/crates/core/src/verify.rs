//! Independent validation of a solution document against its instance.

use crate::instance::{Instance, SolutionDocument, Variant};
use crate::metric::powered;
use crate::variants::ClusterConstraint;

pub const COST_TOLERANCE: f64 = 1e-9;

/// Every problem found with `doc`; empty when the solution is valid.
pub fn check(inst: &Instance, doc: &SolutionDocument) -> Vec<String> {
    let space = &inst.space;
    let n = space.len();
    let p = &doc.parameters;
    let mut problems = Vec::new();
    let mut seen = vec![false; n];
    let mut claim = |x: usize, what: &str, problems: &mut Vec<String>| {
        if x >= n {
            problems.push(format!("{what} {x} is not a point"));
        } else if seen[x] {
            problems.push(format!("point {x} appears twice"));
        } else {
            seen[x] = true;
        }
    };
    for &o in &doc.outliers {
        claim(o, "outlier", &mut problems);
    }
    if doc.outliers.len() > p.g {
        problems.push(format!("{} outliers exceed g = {}", doc.outliers.len(), p.g));
    }

    let cost = match (&doc.balls, &doc.clusters) {
        (Some(balls), None) => {
            if balls.len() > p.k {
                problems.push(format!("{} balls exceed k = {}", balls.len(), p.k));
            }
            let mut ok = true;
            for b in balls {
                if b.center >= n || !(b.radius >= 0.0 && b.radius.is_finite()) {
                    problems.push(format!("bad ball {:?}", b));
                    ok = false;
                }
            }
            if ok {
                for x in (0..n).filter(|&x| !seen[x]) {
                    if !balls.iter().any(|b| space.distance(b.center, x) <= b.radius) {
                        problems.push(format!("point {x} is neither covered nor an outlier"));
                    }
                }
            }
            if p.fair {
                match &inst.fair {
                    Some(f) => {
                        let mut used = vec![0usize; f.caps.len()];
                        for b in balls.iter().filter(|b| b.center < n) {
                            used[f.colors[b.center]] += 1;
                        }
                        for (c, (u, cap)) in used.iter().zip(&f.caps).enumerate() {
                            if u > cap {
                                problems.push(format!("color {c} hosts {u} centers, cap {cap}"));
                            }
                        }
                    }
                    None => problems.push("fair solution for an instance without colors".into()),
                }
            }
            if doc.variant == Variant::KCenter {
                balls.iter().map(|b| b.radius).fold(0.0, f64::max)
            } else {
                balls.iter().map(|b| powered(b.radius, p.alpha)).sum()
            }
        }
        (None, Some(clusters)) => {
            if clusters.len() > p.k {
                problems.push(format!("{} clusters exceed k = {}", clusters.len(), p.k));
            }
            for c in clusters {
                if c.members.is_empty() {
                    problems.push("empty cluster".into());
                }
                for &x in &c.members {
                    claim(x, "member", &mut problems);
                }
            }
            for x in (0..n).filter(|&x| !seen[x]) {
                problems.push(format!("point {x} is neither clustered nor an outlier"));
            }
            if p.balance {
                match &inst.balance {
                    Some(b) => {
                        for (i, c) in clusters.iter().enumerate() {
                            if c.members.iter().all(|&x| x < n) && !b.accepts(&c.members) {
                                problems.push(format!("cluster {i} is not balanced"));
                            }
                        }
                    }
                    None => problems.push("balanced solution for an instance without a balance section".into()),
                }
            }
            clusters
                .iter()
                .filter(|c| c.members.iter().all(|&x| x < n))
                .map(|c| powered(space.diam_unchecked(&c.members), p.alpha))
                .sum()
        }
        _ => {
            problems.push("a solution needs exactly one of balls or clusters".into());
            return problems;
        }
    };
    if (cost - doc.cost).abs() > COST_TOLERANCE * cost.abs().max(1.0) {
        problems.push(format!("reported cost {} but the solution costs {cost}", doc.cost));
    }
    problems
}
