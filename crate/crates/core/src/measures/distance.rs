//! Pairwise Euclidean distances and nearest neighbor / nearest enemy search.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::Matrix;

/// Largest sample count for which a dense `m × m` cache is built.
pub const DENSE_CAP: usize = 20_000;

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Row access to a symmetric distance matrix with zero diagonal.
pub trait DistanceRows {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row `i`. Implementations either borrow stored data or fill `scratch`.
    fn row<'s>(&'s self, i: usize, scratch: &'s mut Vec<f64>) -> &'s [f64];
}

/// Dense distance matrix plus neighbor indices, built once per dataset.
#[derive(Debug, Clone)]
pub struct DistanceCache {
    m: usize,
    dist: Vec<f64>,
    neighbors: Neighbors,
}

impl DistanceCache {
    pub fn new(x: &Matrix, labels: &[usize]) -> Result<Self> {
        Self::with_cap(x, labels, DENSE_CAP)
    }

    pub fn with_cap(x: &Matrix, labels: &[usize], cap: usize) -> Result<Self> {
        let m = x.cols();
        if m > cap {
            return Err(Error::TooManySamples { m, cap });
        }
        let mut dist = vec![0.0; m * m];
        for i in 0..m {
            let xi = x.col(i);
            for j in (i + 1)..m {
                let d = euclidean(xi, x.col(j));
                dist[i * m + j] = d;
                dist[j * m + i] = d;
            }
        }
        let mut cache = Self {
            m,
            dist,
            neighbors: Neighbors::default(),
        };
        cache.neighbors = Neighbors::compute(&cache, labels);
        Ok(cache)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.m + j]
    }

    pub fn neighbors(&self) -> &Neighbors {
        &self.neighbors
    }
}

impl DistanceRows for DistanceCache {
    fn len(&self) -> usize {
        self.m
    }

    fn row<'s>(&'s self, i: usize, _scratch: &'s mut Vec<f64>) -> &'s [f64] {
        &self.dist[i * self.m..(i + 1) * self.m]
    }
}

/// Recomputes each row on demand; O(m) memory.
#[derive(Debug, Clone, Copy)]
pub struct StreamingDistances<'a> {
    x: &'a Matrix,
}

impl<'a> StreamingDistances<'a> {
    pub fn new(x: &'a Matrix) -> Self {
        Self { x }
    }
}

impl DistanceRows for StreamingDistances<'_> {
    fn len(&self) -> usize {
        self.x.cols()
    }

    fn row<'s>(&'s self, i: usize, scratch: &'s mut Vec<f64>) -> &'s [f64] {
        let xi = self.x.col(i);
        scratch.clear();
        scratch.extend(
            self.x
                .columns()
                .enumerate()
                .map(|(j, c)| if j == i { 0.0 } else { euclidean(xi, c) }),
        );
        scratch
    }
}

/// Per-point nearest same-class neighbor, nearest point of any class, and
/// nearest enemy (closest point with another label). Ties go to the lowest
/// index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Neighbors {
    pub same_class: Vec<Option<usize>>,
    pub any: Vec<Option<usize>>,
    pub enemy: Vec<Option<usize>>,
    pub same_class_dist: Vec<f64>,
    pub any_dist: Vec<f64>,
    pub enemy_dist: Vec<f64>,
}

impl Neighbors {
    pub fn compute<D: DistanceRows + ?Sized>(rows: &D, labels: &[usize]) -> Self {
        let m = rows.len();
        let mut out = Neighbors {
            same_class: vec![None; m],
            any: vec![None; m],
            enemy: vec![None; m],
            same_class_dist: vec![f64::INFINITY; m],
            any_dist: vec![f64::INFINITY; m],
            enemy_dist: vec![f64::INFINITY; m],
        };
        let mut scratch = Vec::new();
        for i in 0..m {
            let row = rows.row(i, &mut scratch);
            for (j, &d) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                if d < out.any_dist[i] {
                    out.any_dist[i] = d;
                    out.any[i] = Some(j);
                }
                if labels[j] == labels[i] {
                    if d < out.same_class_dist[i] {
                        out.same_class_dist[i] = d;
                        out.same_class[i] = Some(j);
                    }
                } else if d < out.enemy_dist[i] {
                    out.enemy_dist[i] = d;
                    out.enemy[i] = Some(j);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> (Matrix, Vec<usize>) {
        let x = Matrix::from_columns(&[[0.0], [1.0], [3.0], [4.0], [6.0]]).unwrap();
        (x, vec![0, 0, 1, 1, 0])
    }

    #[test]
    fn cache_invariants() {
        let (x, labels) = line();
        let c = DistanceCache::new(&x, &labels).unwrap();
        for i in 0..5 {
            assert_eq!(c.get(i, i), 0.0);
            for j in 0..5 {
                assert_eq!(c.get(i, j), c.get(j, i));
            }
        }
        let n = c.neighbors();
        assert_eq!(n.same_class, vec![Some(1), Some(0), Some(3), Some(2), Some(1)]);
        assert_eq!(n.enemy, vec![Some(2), Some(2), Some(1), Some(4), Some(3)]);
        assert_eq!(n.any, vec![Some(1), Some(0), Some(3), Some(2), Some(3)]);
        for i in 0..5 {
            assert_ne!(labels[n.enemy[i].unwrap()], labels[i]);
        }
    }

    #[test]
    fn ties_take_lowest_index() {
        let x = Matrix::from_columns(&[[0.0], [-1.0], [1.0]]).unwrap();
        let c = DistanceCache::new(&x, &[0, 1, 1]).unwrap();
        assert_eq!(c.neighbors().enemy[0], Some(1));
    }

    #[test]
    fn streaming_matches_dense() {
        let (x, labels) = line();
        let dense = DistanceCache::new(&x, &labels).unwrap();
        let stream = StreamingDistances::new(&x);
        let mut s = Vec::new();
        for i in 0..5 {
            let mut t = Vec::new();
            assert_eq!(dense.row(i, &mut t), stream.row(i, &mut s));
        }
        assert_eq!(&Neighbors::compute(&stream, &labels), dense.neighbors());
    }

    #[test]
    fn cap_is_enforced() {
        let (x, labels) = line();
        assert_eq!(
            DistanceCache::with_cap(&x, &labels, 4).unwrap_err(),
            Error::TooManySamples { m: 5, cap: 4 }
        );
    }
}
