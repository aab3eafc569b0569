//! Spectral gaps of walk operators: a dense oracle, a matrix-free Lanczos
//! solver, Cheeger sweeps and prime scans.

mod cheeger;
pub mod dense;
mod lanczos;
mod operator;
mod scan;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use cheeger::{cheeger_sweep, SweepResult};
pub use lanczos::{iterative_eigenpair, iterative_gap, Eigenpair, IterativeConfig};
pub use operator::WalkOperator;
pub use scan::{gap_scan, min_gap, RowFlag, ScanConfig, ScanRow};

use operator::{norm, remove_mean};

/// Default size limit for the dense solver.
pub const DEFAULT_DENSE_CAP: usize = 5000;
/// `Method::Auto` switches to the iterative solver above this size.
pub const DEFAULT_DENSE_AUTO_MAX: usize = 1024;
/// Gaps at or below this are treated as zero when deciding ergodicity.
pub const GAP_ZERO_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectraError {
    #[error("expected length {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("move column {column} is not a permutation")]
    NotPermutation { column: usize },
    #[error("operator has no moves")]
    NoMoves,
    #[error("operator is not self-adjoint (move multiset not closed under inverses)")]
    NotSelfAdjoint,
    #[error("Lanczos basis too small to restart")]
    BasisTooSmall,
    #[error("dense solver limited to {cap} vertices, operator has {n}")]
    DenseCap { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Iterative => "iterative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub size: usize,
    pub degree: usize,
    /// Largest eigenvalue on the mean-zero subspace.
    pub lambda2: f64,
    pub gap: f64,
    /// Exact for the dense solver; a Ritz estimate (upper bound) for the iterative one.
    pub lambda_min: f64,
    pub method: Method,
    pub iterations: usize,
    pub residual_norm: f64,
    pub seed: Option<u64>,
    pub converged: bool,
    /// Set for one-vertex spaces, where lambda2 is undefined and the gap is reported as 0.
    pub degenerate: bool,
}

impl SpectralReport {
    #[allow(clippy::too_many_arguments)]
    fn from_lambdas(
        op: &WalkOperator,
        lambda2: f64,
        lambda_min: f64,
        method: Method,
        iterations: usize,
        residual_norm: f64,
        seed: Option<u64>,
        converged: bool,
    ) -> Self {
        SpectralReport {
            size: op.size(),
            degree: op.degree(),
            lambda2,
            gap: (1.0 - lambda2).clamp(0.0, 2.0),
            lambda_min,
            method,
            iterations,
            residual_norm,
            seed,
            converged,
            degenerate: false,
        }
    }

    fn degenerate(op: &WalkOperator, method: Method, seed: Option<u64>) -> Self {
        SpectralReport {
            size: op.size(),
            degree: op.degree(),
            lambda2: 1.0,
            gap: 0.0,
            lambda_min: 1.0,
            method,
            iterations: 0,
            residual_norm: 0.0,
            seed,
            converged: true,
            degenerate: true,
        }
    }

    /// Spectral gap distinguishable from zero.
    pub fn has_gap(&self) -> bool {
        !self.degenerate && self.gap > GAP_ZERO_TOL
    }
}

pub fn dense_spectrum(op: &WalkOperator) -> Result<SpectralReport, SpectraError> {
    dense_eigenpair(op, DEFAULT_DENSE_CAP).map(|e| e.report)
}

/// Full eigendecomposition of the materialized operator.
pub fn dense_eigenpair(op: &WalkOperator, cap: usize) -> Result<Eigenpair, SpectraError> {
    let n = op.size();
    if n > cap {
        return Err(SpectraError::DenseCap { n, cap });
    }
    if !op.is_self_adjoint() {
        return Err(SpectraError::NotSelfAdjoint);
    }
    if n == 1 {
        return Ok(Eigenpair {
            report: SpectralReport::degenerate(op, Method::Dense, None),
            vector: alloc::vec![0.0],
        });
    }
    let eig = dense::symmetric_eigen(&op.to_dense(), n, true);
    let lambda2 = eig.values[n - 2];
    let lambda_min = eig.values[0];

    // The top eigenspace contains the constants; take whichever of the two
    // leading eigenvectors keeps more mass after removing its mean.
    let mut vector: Vec<f64> = Vec::new();
    let mut best = -1.0;
    for k in [n - 2, n - 1] {
        let mut v = eig.vector(k).expect("vectors requested");
        remove_mean(&mut v);
        let vn = norm(&v);
        if vn > best {
            best = vn;
            vector = v;
        }
    }
    if best > 0.0 {
        vector.iter_mut().for_each(|x| *x /= best);
    }
    let mut av = alloc::vec![0.0; n];
    op.apply(&vector, &mut av);
    let residual = libm::sqrt(
        av.iter()
            .zip(&vector)
            .map(|(a, v)| (a - lambda2 * v) * (a - lambda2 * v))
            .sum::<f64>(),
    );
    Ok(Eigenpair {
        report: SpectralReport::from_lambdas(op, lambda2, lambda_min, Method::Dense, 0, residual, None, true),
        vector,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: MethodChoice,
    pub dense_cap: usize,
    pub dense_auto_max: usize,
    pub iterative: IterativeConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: MethodChoice::Auto,
            dense_cap: DEFAULT_DENSE_CAP,
            dense_auto_max: DEFAULT_DENSE_AUTO_MAX,
            iterative: IterativeConfig::default(),
        }
    }
}

/// Dispatches to the dense or iterative solver.
pub fn solve(op: &WalkOperator, config: &SolverConfig) -> Result<Eigenpair, SpectraError> {
    let dense = match config.method {
        MethodChoice::Dense => true,
        MethodChoice::Iterative => false,
        MethodChoice::Auto => op.size() <= config.dense_auto_max.min(config.dense_cap),
    };
    if dense {
        dense_eigenpair(op, config.dense_cap)
    } else {
        iterative_eigenpair(op, &config.iterative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn cycle(n: usize) -> WalkOperator {
        let fwd: Vec<u32> = (0..n).map(|v| ((v + 1) % n) as u32).collect();
        let back: Vec<u32> = (0..n).map(|v| ((v + n - 1) % n) as u32).collect();
        WalkOperator::from_permutations(n, &[fwd, back]).unwrap()
    }

    fn complete(n: usize) -> WalkOperator {
        let perms: Vec<Vec<u32>> = (1..n)
            .map(|k| (0..n).map(|v| ((v + k) % n) as u32).collect())
            .collect();
        WalkOperator::from_permutations(n, &perms).unwrap()
    }

    #[test]
    fn dense_complete_graph() {
        let r = dense_spectrum(&complete(4)).unwrap();
        assert!((r.lambda2 + 1.0 / 3.0).abs() < 1e-12);
        assert!((r.gap - 4.0 / 3.0).abs() < 1e-12);
        assert!((r.lambda_min + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn dense_cycle() {
        let r = dense_spectrum(&cycle(8)).unwrap();
        assert!((r.lambda2 - (2.0 * PI / 8.0).cos()).abs() < 1e-12);
        assert!((r.lambda2 - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((r.lambda_min + 1.0).abs() < 1e-12);
        assert!(r.residual_norm < 1e-10);
    }

    #[test]
    fn single_vertex_is_degenerate() {
        let op = WalkOperator::from_permutations(1, &[vec![0], vec![0], vec![0]]).unwrap();
        let r = dense_spectrum(&op).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.gap, 0.0);
        assert!(!r.has_gap());
        let r = iterative_gap(&op, &IterativeConfig::default()).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn dense_cap_enforced() {
        let op = cycle(10);
        assert_eq!(
            dense_eigenpair(&op, 9).unwrap_err(),
            SpectraError::DenseCap { n: 10, cap: 9 }
        );
    }

    #[test]
    fn iterative_cycle_64() {
        let r = iterative_gap(&cycle(64), &IterativeConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.lambda2 - (2.0 * PI / 64.0).cos()).abs() < 1e-8);
        assert!(r.residual_norm <= 1e-8);
        assert_eq!(r.method, Method::Iterative);
    }

    #[test]
    fn iterative_detects_disconnection() {
        let n = 16;
        let fwd: Vec<u32> = (0..n).map(|v| ((v / 8) * 8 + (v % 8 + 1) % 8) as u32).collect();
        let back: Vec<u32> = (0..n).map(|v| ((v / 8) * 8 + (v % 8 + 7) % 8) as u32).collect();
        let op = WalkOperator::from_permutations(n, &[fwd, back]).unwrap();
        let r = iterative_gap(&op, &IterativeConfig::default()).unwrap();
        assert!((r.lambda2 - 1.0).abs() < 1e-10);
        assert!(!r.has_gap());
        let d = dense_spectrum(&op).unwrap();
        assert!(!d.has_gap());
    }

    #[test]
    fn iterative_rejects_non_symmetric() {
        let fwd: Vec<u32> = (0..5).map(|v| ((v + 1) % 5) as u32).collect();
        let op = WalkOperator::from_permutations(5, &[fwd]).unwrap();
        assert_eq!(
            iterative_gap(&op, &IterativeConfig::default()).unwrap_err(),
            SpectraError::NotSelfAdjoint
        );
        assert_eq!(dense_spectrum(&op).unwrap_err(), SpectraError::NotSelfAdjoint);
    }

    #[test]
    fn iterative_is_deterministic() {
        let op = cycle(40);
        let cfg = IterativeConfig {
            seed: 17,
            ..Default::default()
        };
        let a = iterative_eigenpair(&op, &cfg).unwrap();
        let b = iterative_eigenpair(&op, &cfg).unwrap();
        assert_eq!(a.report, b.report);
        assert_eq!(a.vector, b.vector);
    }

    #[test]
    fn small_basis_still_converges() {
        let cfg = IterativeConfig {
            basis: 6,
            keep: 2,
            ..Default::default()
        };
        let r = iterative_gap(&cycle(50), &cfg).unwrap();
        assert!(r.converged);
        assert!((r.lambda2 - (2.0 * PI / 50.0).cos()).abs() < 1e-8);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let cfg = IterativeConfig {
            basis: 4,
            keep: 1,
            max_iter: 6,
            ..Default::default()
        };
        let r = iterative_gap(&cycle(200), &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.residual_norm > cfg.tol);
    }

    #[test]
    fn two_vertices() {
        let swap = vec![1u32, 0];
        let op = WalkOperator::from_permutations(2, &[swap.clone(), swap]).unwrap();
        let d = dense_spectrum(&op).unwrap();
        assert!((d.lambda2 + 1.0).abs() < 1e-14);
        let i = iterative_gap(&op, &IterativeConfig::default()).unwrap();
        assert!((i.lambda2 + 1.0).abs() < 1e-12);
        assert!((i.gap - 2.0).abs() < 1e-12);
    }
}
