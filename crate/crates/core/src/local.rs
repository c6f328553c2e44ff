//! Dense distance tables over a small subset of points, indexed locally.

use smallvec::SmallVec;

use crate::bits::Bits;

use crate::metric::{MetricSpace, PointId};

pub(crate) struct Local {
    pub ids: Vec<PointId>,
    /// Number of original points each local point stands for.
    pub weight: Vec<usize>,
    d: Vec<f64>,
    n: usize,
}

impl Local {
    pub fn new(space: &MetricSpace, ids: Vec<PointId>, weight: Vec<usize>) -> Self {
        let n = ids.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = space.distance(ids[i], ids[j]);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Local { ids, weight, d, n }
    }

    pub fn unit(space: &MetricSpace, ids: Vec<PointId>) -> Self {
        let weight = vec![1; ids.len()];
        Self::new(space, ids, weight)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn empty_set(&self) -> Bits {
        Bits::with_capacity(self.n)
    }

    pub fn full_set(&self) -> Bits {
        Bits::full(self.n)
    }

    pub fn ball(&self, center: usize, radius: f64) -> Bits {
        let mut s = self.empty_set();
        for j in 0..self.n {
            if self.d(center, j) <= radius {
                s.insert(j);
            }
        }
        s
    }

    pub fn diam(&self, set: &Bits) -> f64 {
        let members: SmallVec<[usize; 32]> = set.ones().collect();
        let mut diam = 0.0f64;
        for (a, &i) in members.iter().enumerate() {
            let row = &self.d[i * self.n..(i + 1) * self.n];
            for &j in &members[a + 1..] {
                diam = diam.max(row[j]);
            }
        }
        diam
    }

    /// Lexicographically smallest pair realizing the diameter of `set`.
    pub fn diam_pair(&self, set: &Bits) -> (usize, usize) {
        let first = set.ones().next().expect("nonempty set");
        let diam = self.diam(set);
        if diam == 0.0 {
            return (first, first);
        }
        for i in set.ones() {
            if let Some(j) = set.ones().find(|&j| j > i && self.d(i, j) == diam) {
                return (i, j);
            }
        }
        unreachable!("the diameter is attained")
    }

    pub fn globals(&self, set: &Bits) -> Vec<PointId> {
        set.ones().map(|i| self.ids[i]).collect()
    }

    /// Distinct pairwise distances in ascending order, including 0.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let mut v: Vec<f64> = vec![0.0];
        for i in 0..self.n {
            for j in i + 1..self.n {
                v.push(self.d(i, j));
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}
