use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::system::{Move, Point, SkewProductSystem};
use super::DynamicsError;
use crate::rng::seeded_rng;
use crate::spectra::{solve, Eigenpair, SolverConfig, SpectralReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub size: u64,
    pub transitive: bool,
    pub orbit_count: usize,
    /// Size of the orbit through the identity point.
    pub identity_orbit_size: u64,
}

/// Orbits of the group generated by the six moves. With the uniform measure
/// on a finite space, ergodicity is exactly transitivity.
pub fn orbit_transitivity(sys: &SkewProductSystem, capacity: usize) -> Result<OrbitReport, DynamicsError> {
    let op = sys.move_operator(capacity)?;
    let (count, labels) = op.components();
    let identity_orbit_size = labels.iter().filter(|&&l| l == labels[0]).count() as u64;
    Ok(OrbitReport {
        size: sys.size(),
        transitive: count == 1,
        orbit_count: count,
        identity_orbit_size,
    })
}

/// Spectral gap of the average of the six move operators on the product space.
pub fn koopman_gap(
    sys: &SkewProductSystem,
    solver: &SolverConfig,
    capacity: usize,
) -> Result<SpectralReport, DynamicsError> {
    koopman_eigenpair(sys, solver, capacity).map(|e| e.report)
}

pub fn koopman_eigenpair(
    sys: &SkewProductSystem,
    solver: &SolverConfig,
    capacity: usize,
) -> Result<Eigenpair, DynamicsError> {
    let op = sys.move_operator(capacity)?;
    Ok(solve(&op, solver)?)
}

/// Weighted Hamming distance on factor components: weight `2^-(i+1)` for
/// the `i`-th factor, base factors first, then fiber factors, each in
/// ascending prime order. Left translations preserve it.
#[derive(Debug, Clone)]
pub struct ProductMetric {
    base_weights: Vec<f64>,
    fiber_weights: Vec<f64>,
}

impl ProductMetric {
    pub fn for_system(sys: &SkewProductSystem) -> Self {
        let nb = sys.base().num_factors();
        let nf = sys.fiber().num_factors();
        let w = |i: usize| libm::ldexp(1.0, -(i as i32 + 1));
        ProductMetric {
            base_weights: (0..nb).map(w).collect(),
            fiber_weights: (nb..nb + nf).map(w).collect(),
        }
    }

    pub fn base_weights(&self) -> &[f64] {
        &self.base_weights
    }

    pub fn fiber_weights(&self) -> &[f64] {
        &self.fiber_weights
    }

    pub fn base_distance(&self, sys: &SkewProductSystem, x: u64, x2: u64) -> f64 {
        let k = sys.base();
        self.base_weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| k.component(x, i) != k.component(x2, i))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn fiber_distance(&self, sys: &SkewProductSystem, y: u64, y2: u64) -> f64 {
        let l = sys.fiber();
        self.fiber_weights
            .iter()
            .enumerate()
            .filter(|&(j, _)| l.component(y, j) != l.component(y2, j))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn distance(&self, sys: &SkewProductSystem, p: Point, q: Point) -> f64 {
        self.base_distance(sys, p.base, q.base) + self.fiber_distance(sys, p.fiber, q.fiber)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectConfig {
    pub delta: f64,
    pub horizon: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// Max over samples and steps `n <= horizon` of `d(T_c^n p, T_c^n q)`.
    pub defect: f64,
    pub delta: f64,
    /// Starting pair attaining the defect.
    pub attaining_pair: (Point, Point),
    pub attaining_step: usize,
    pub min_positive_distance: f64,
    pub samples: usize,
    pub horizon: usize,
    pub seed: u64,
}

/// Samples pairs in `<c> x L` at distance in `(0, delta]`, iterates `T_c`
/// and reports the largest separation seen.
///
/// A partner for `(c^t, y)` is `(c^(t+u), y')` where `y'` differs from `y`
/// in exactly the fiber factors of a mask `S`; the pair `(u, S)` is drawn
/// uniformly among all choices keeping the distance within `delta`.
pub fn equicontinuity_defect(sys: &SkewProductSystem, config: &DefectConfig) -> Result<DefectReport, DynamicsError> {
    let metric = ProductMetric::for_system(sys);
    let closure = sys.closure();
    let m = closure.order();
    let fw = metric.fiber_weights();
    if fw.len() > 20 {
        return Err(DynamicsError::TooManyFactors(fw.len()));
    }

    // Base distance depends only on the offset u by left invariance.
    let base_offset: Vec<f64> = (0..m)
        .map(|u| metric.base_distance(sys, closure.power(0), closure.power(u)))
        .collect();
    let mask_weight = |mask: u32| -> f64 {
        fw.iter()
            .enumerate()
            .filter(|&(j, _)| mask >> j & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    };
    let mut min_positive = f64::INFINITY;
    let mut choices: Vec<(usize, u32)> = Vec::new();
    for (u, &db) in base_offset.iter().enumerate() {
        for mask in 0u32..(1 << fw.len()) {
            let d = db + mask_weight(mask);
            if d == 0.0 {
                continue;
            }
            min_positive = min_positive.min(d);
            if d <= config.delta {
                choices.push((u, mask));
            }
        }
    }
    if choices.is_empty() {
        return Err(DynamicsError::Resolution {
            delta: config.delta,
            min_distance: min_positive,
        });
    }

    let mut rng = seeded_rng(config.seed);
    let fiber = sys.fiber();
    let mut best: Option<(f64, (Point, Point), usize)> = None;
    for _ in 0..config.samples {
        let t = rng.random_range(0..m);
        let y = rng.random_range(0..fiber.size());
        let (u, mask) = choices[rng.random_range(0..choices.len())];
        let mut comps = fiber.decode(y);
        for (j, comp) in comps.iter_mut().enumerate() {
            if mask >> j & 1 == 1 {
                let size = fiber.factor_tables()[j].size() as u32;
                let shift = rng.random_range(1..size);
                *comp = (*comp + shift) % size;
            }
        }
        let p0 = sys.closure_point(t, y);
        let q0 = sys.closure_point(t + u, fiber.encode(&comps));

        let (mut p, mut q) = (p0, q0);
        for step in 0..=config.horizon {
            let d = metric.distance(sys, p, q);
            if best.map_or(true, |(bd, _, _)| d > bd) {
                best = Some((d, (p0, q0), step));
            }
            if step < config.horizon {
                p = sys.apply_move(Move::C, p);
                q = sys.apply_move(Move::C, q);
            }
        }
    }
    let (defect, attaining_pair, attaining_step) = best.unwrap_or((0.0, (sys.identity(), sys.identity()), 0));
    Ok(DefectReport {
        defect,
        delta: config.delta,
        attaining_pair,
        attaining_step,
        min_positive_distance: min_positive,
        samples: config.samples,
        horizon: config.horizon,
        seed: config.seed,
    })
}
