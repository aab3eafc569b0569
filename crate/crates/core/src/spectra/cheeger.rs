use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::operator::WalkOperator;
use super::SpectraError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Size of the minimizing prefix set.
    pub best_set_size: usize,
    /// `|boundary(A)| / (d * min(|A|, |A^c|))` at the minimizer.
    pub boundary_ratio: f64,
}

/// Sweeps prefix sets of the vertices sorted by `vector` (ties broken by
/// index) and returns the prefix with the least boundary ratio. The boundary
/// counts move-edges `(v, s)` with `v` inside and `move_s(v)` outside.
pub fn cheeger_sweep(op: &WalkOperator, vector: &[f64]) -> Result<SweepResult, SpectraError> {
    let n = op.size();
    if vector.len() != n {
        return Err(SpectraError::Shape {
            expected: n,
            found: vector.len(),
        });
    }
    if !op.is_self_adjoint() {
        return Err(SpectraError::NotSelfAdjoint);
    }
    if n < 2 {
        return Ok(SweepResult {
            best_set_size: 0,
            boundary_ratio: 0.0,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vector[i].total_cmp(&vector[j]).then(i.cmp(&j)));

    let d = op.degree();
    let mut inside = vec![false; n];
    let mut boundary: i64 = 0;
    let mut best = SweepResult {
        best_set_size: 0,
        boundary_ratio: f64::INFINITY,
    };
    for (k, &v) in order.iter().take(n - 1).enumerate() {
        let mut leaving = 0i64;
        let mut entering = 0i64;
        for &t in op.neighbors(v) {
            let t = t as usize;
            if t == v {
                continue;
            }
            if inside[t] {
                // Symmetric move multiset: each edge v -> t inside A pairs
                // with an edge t -> v that stops leaving A.
                entering += 1;
            } else {
                leaving += 1;
            }
        }
        inside[v] = true;
        boundary += leaving - entering;
        let size = k + 1;
        let ratio = boundary as f64 / (d * size.min(n - size)) as f64;
        if ratio < best.boundary_ratio {
            best = SweepResult {
                best_set_size: size,
                boundary_ratio: ratio,
            };
        }
    }
    Ok(best)
}
