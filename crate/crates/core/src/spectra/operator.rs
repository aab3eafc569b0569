use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::SpectraError;

/// Vertex block size for blocked reductions and parallel application.
pub(crate) const BLOCK: usize = 4096;

/// The averaging operator `(Af)(v) = (1/d) * sum_s f(move_s(v))` over `d`
/// permutations of `0..n`, stored row-major (`n x d`).
#[derive(Debug, Clone)]
pub struct WalkOperator {
    n: usize,
    degree: usize,
    moves: Vec<u32>,
    self_adjoint: bool,
}

impl WalkOperator {
    /// Validates that every column is a permutation.
    pub fn from_row_major(n: usize, degree: usize, moves: Vec<u32>) -> Result<Self, SpectraError> {
        if moves.len() != n * degree {
            return Err(SpectraError::Shape {
                expected: n * degree,
                found: moves.len(),
            });
        }
        if degree == 0 {
            return Err(SpectraError::NoMoves);
        }
        let mut seen = vec![false; n];
        for col in 0..degree {
            seen.iter_mut().for_each(|s| *s = false);
            for v in 0..n {
                let t = moves[v * degree + col] as usize;
                if t >= n || seen[t] {
                    return Err(SpectraError::NotPermutation { column: col });
                }
                seen[t] = true;
            }
        }
        let self_adjoint = pair_inverse_columns(n, degree, &moves);
        Ok(WalkOperator {
            n,
            degree,
            moves,
            self_adjoint,
        })
    }

    /// From one permutation per move.
    pub fn from_permutations(n: usize, perms: &[Vec<u32>]) -> Result<Self, SpectraError> {
        let degree = perms.len();
        if let Some(p) = perms.iter().find(|p| p.len() != n) {
            return Err(SpectraError::Shape {
                expected: n,
                found: p.len(),
            });
        }
        let mut moves = Vec::with_capacity(n * degree);
        for v in 0..n {
            moves.extend(perms.iter().map(|p| p[v]));
        }
        Self::from_row_major(n, degree, moves)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True when the move multiset is closed under inversion, making A symmetric.
    pub fn is_self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn moves(&self) -> &[u32] {
        &self.moves
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.moves[v * self.degree..(v + 1) * self.degree]
    }

    /// `out = A x`. Each output entry is summed in move order, so the result
    /// does not depend on the worker count.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        let inv_d = 1.0 / self.degree as f64;
        let d = self.degree;
        let fill = |start: usize, chunk: &mut [f64]| {
            for (k, o) in chunk.iter_mut().enumerate() {
                let row = &self.moves[(start + k) * d..(start + k + 1) * d];
                let mut s = 0.0;
                for &t in row {
                    s += x[t as usize];
                }
                *o = s * inv_d;
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            out.par_chunks_mut(BLOCK)
                .enumerate()
                .for_each(|(b, chunk)| fill(b * BLOCK, chunk));
        }
        #[cfg(not(feature = "parallel"))]
        for (b, chunk) in out.chunks_mut(BLOCK).enumerate() {
            fill(b * BLOCK, chunk);
        }
    }

    /// Connected components of the move graph as a label per vertex, labels
    /// numbered in order of their least vertex.
    pub fn components(&self) -> (usize, Vec<u32>) {
        let mut label = vec![u32::MAX; self.n];
        let mut count = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &t in self.neighbors(v) {
                    let t = t as usize;
                    if label[t] == u32::MAX {
                        label[t] = count;
                        queue.push_back(t);
                    }
                }
            }
            count += 1;
        }
        (count as usize, label)
    }

    /// Dense `n x n` matrix, row-major.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let inv_d = 1.0 / self.degree as f64;
        let mut m = vec![0.0; n * n];
        for v in 0..n {
            for &t in self.neighbors(v) {
                m[v * n + t as usize] += inv_d;
            }
        }
        m
    }
}

/// Matches every column with a distinct column holding its inverse permutation.
fn pair_inverse_columns(n: usize, degree: usize, moves: &[u32]) -> bool {
    let col = |c: usize, v: usize| moves[v * degree + c] as usize;
    let mut used = vec![false; degree];
    for c in 0..degree {
        if used[c] {
            continue;
        }
        let partner = (c..degree).find(|&k| {
            (k == c || !used[k]) && (0..n).all(|v| col(k, col(c, v)) == v)
        });
        match partner {
            Some(k) => {
                used[c] = true;
                used[k] = true;
            }
            None => return false,
        }
    }
    true
}

/// Blocked dot product with a fixed summation order.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.chunks(BLOCK)
        .zip(b.chunks(BLOCK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .fold(0.0, |acc, s| acc + s)
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub(crate) fn remove_mean(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let total = v
        .chunks(BLOCK)
        .map(|c| c.iter().sum::<f64>())
        .fold(0.0, |acc, s| acc + s);
    let mean = total / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> WalkOperator {
        let fwd: Vec<u32> = (0..n).map(|v| ((v + 1) % n) as u32).collect();
        let back: Vec<u32> = (0..n).map(|v| ((v + n - 1) % n) as u32).collect();
        WalkOperator::from_permutations(n, &[fwd, back]).unwrap()
    }

    #[test]
    fn stochastic_and_symmetric() {
        let op = cycle(9);
        assert!(op.is_self_adjoint());
        let mut out = vec![0.0; 9];
        op.apply(&[1.0; 9], &mut out);
        assert!(out.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let m = op.to_dense();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(m[i * 9 + j], m[j * 9 + i]);
            }
        }
    }

    #[test]
    fn rejects_non_permutations() {
        assert_eq!(
            WalkOperator::from_row_major(3, 1, vec![0, 0, 1]).unwrap_err(),
            SpectraError::NotPermutation { column: 0 }
        );
        assert!(matches!(
            WalkOperator::from_row_major(3, 1, vec![0, 1]),
            Err(SpectraError::Shape { .. })
        ));
        assert_eq!(
            WalkOperator::from_row_major(0, 0, vec![]).unwrap_err(),
            SpectraError::NoMoves
        );
    }

    #[test]
    fn one_directional_cycle_is_not_self_adjoint() {
        let fwd: Vec<u32> = (0..5).map(|v| ((v + 1) % 5) as u32).collect();
        let op = WalkOperator::from_permutations(5, &[fwd]).unwrap();
        assert!(!op.is_self_adjoint());
    }

    #[test]
    fn involutions_pair_with_themselves() {
        let swap = vec![1u32, 0, 3, 2];
        let op = WalkOperator::from_permutations(4, &[swap.clone(), swap]).unwrap();
        assert!(op.is_self_adjoint());
        assert_eq!(op.components().0, 2);
    }

    #[test]
    fn components_of_two_cycles() {
        let n = 16;
        let fwd: Vec<u32> = (0..n).map(|v| ((v / 8) * 8 + (v % 8 + 1) % 8) as u32).collect();
        let back: Vec<u32> = (0..n).map(|v| ((v / 8) * 8 + (v % 8 + 7) % 8) as u32).collect();
        let op = WalkOperator::from_permutations(n, &[fwd, back]).unwrap();
        let (count, labels) = op.components();
        assert_eq!(count, 2);
        assert!(labels[..8].iter().all(|&l| l == 0));
        assert!(labels[8..].iter().all(|&l| l == 1));
    }
}
