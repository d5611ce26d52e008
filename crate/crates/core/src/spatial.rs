//! Grid hash for tolerance-based point lookup in max-norm.

use std::collections::HashMap;

use crate::datum::max_dist;

pub(crate) struct SpatialIndex {
    cell: f64,
    tol: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    points: Vec<Vec<f64>>,
}

impl SpatialIndex {
    /// `tol` must not exceed `cell`, so a query box touches at most two
    /// cells per axis.
    pub fn new(cell: f64, tol: f64) -> Self {
        debug_assert!(tol <= cell);
        SpatialIndex {
            cell,
            tol,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    /// Index of a stored point within `tol` of `p`, if any.
    pub fn find(&self, p: &[f64]) -> Option<usize> {
        let ranges: Vec<(i64, i64)> = p
            .iter()
            .map(|x| {
                (
                    ((x - self.tol) / self.cell).floor() as i64,
                    ((x + self.tol) / self.cell).floor() as i64,
                )
            })
            .collect();
        let mut key: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            if let Some(ids) = self.buckets.get(&key) {
                if let Some(&id) = ids
                    .iter()
                    .find(|&&id| max_dist(&self.points[id], p) <= self.tol)
                {
                    return Some(id);
                }
            }
            // odometer over the (at most 2^n) touched cells
            let mut axis = 0;
            loop {
                if axis == key.len() {
                    return None;
                }
                if key[axis] < ranges[axis].1 {
                    key[axis] += 1;
                    break;
                }
                key[axis] = ranges[axis].0;
                axis += 1;
            }
        }
    }

    pub fn insert(&mut self, p: &[f64]) -> usize {
        let id = self.points.len();
        self.buckets.entry(self.key(p)).or_default().push(id);
        self.points.push(p.to_vec());
        id
    }

    /// Insert unless a point within tolerance exists; returns `(id, inserted)`.
    pub fn insert_unique(&mut self, p: &[f64]) -> (usize, bool) {
        match self.find(p) {
            Some(id) => (id, false),
            None => (self.insert(p), true),
        }
    }
}
