//! Skew-product actions of the free group on truncated products
//! `K_N x L_M` of SL2(Z/p) factors, and their ergodicity, spectral-gap and
//! equicontinuity diagnostics.
//!
//! Truncations use primes `p = 1 mod 4` for the base and `p = 3 mod 4` for
//! the fiber. The counting measure stands in for Haar measure.

mod closure;
mod cocycle;
mod diagnostics;
mod product;
mod system;

pub use closure::CyclicClosure;
pub use cocycle::{extend_cocycle, Cocycle, CocycleKind};
pub use diagnostics::{
    equicontinuity_defect, koopman_eigenpair, koopman_gap, orbit_transitivity, DefectConfig, DefectReport,
    OrbitReport, ProductMetric,
};
pub use product::{build_truncation, Element, ResidueClass, TruncatedProduct};
pub use system::{Move, Point, SkewProductSystem};

use crate::cayley::CayleyError;
use crate::spectra::SpectraError;

/// Default bound on product-space sizes.
pub const DEFAULT_PRODUCT_CAPACITY: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("prime {prime} is not congruent to {class} mod 4")]
    WrongClass { prime: u32, class: u8 },
    #[error("the generators do not generate SL2(Z/{prime})")]
    NotGenerated { prime: u32 },
    #[error("prime {0} listed twice")]
    DuplicatePrime(u32),
    #[error("product space of size {size} exceeds capacity {capacity}")]
    Capacity { size: u64, capacity: usize },
    #[error("element {0} is outside the base group")]
    NotInBase(u64),
    #[error("cocycle table has {found} entries, the closure of c has order {expected}")]
    CocycleLength { expected: usize, found: usize },
    #[error("cocycle value {0} is not a fiber element")]
    CocycleValue(u64),
    #[error("no pair lies within delta = {delta}; the least positive distance is {min_distance}")]
    Resolution { delta: f64, min_distance: f64 },
    #[error("{0} fiber factors is too many for mask enumeration")]
    TooManyFactors(usize),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::{canonical_generators, GeneratorSet, Prime};
    use crate::spectra::{MethodChoice, SolverConfig};

    const CAP: usize = 1 << 22;

    fn primes(vs: &[u64]) -> alloc::vec::Vec<Prime> {
        vs.iter().map(|&v| Prime::new(v).unwrap()).collect()
    }

    fn system(kp: &[u64], lp: &[u64], seed: Option<u64>) -> SkewProductSystem {
        let g = canonical_generators();
        let k = build_truncation(ResidueClass::One, &primes(kp), &g.set(GeneratorSet::ABC), CAP).unwrap();
        let l = build_truncation(ResidueClass::Three, &primes(lp), &g.set(GeneratorSet::AB), CAP).unwrap();
        let order = CyclicClosure::new(&k, k.project(&g.c)).unwrap().order();
        let cocycle = match seed {
            None => Cocycle::trivial(order),
            Some(s) => Cocycle::seeded_random(order, &l, s),
        };
        SkewProductSystem::new(k, l, &g, cocycle).unwrap()
    }

    #[test]
    fn trivial_fiber_is_transitive_and_matches_cayley_gap() {
        let sys = system(&[5], &[], None);
        let orbits = orbit_transitivity(&sys, CAP).unwrap();
        assert!(orbits.transitive);
        assert_eq!(orbits.orbit_count, 1);
        let dense = SolverConfig {
            method: MethodChoice::Dense,
            ..Default::default()
        };
        let koop = koopman_gap(&sys, &dense, CAP).unwrap();
        let g = canonical_generators();
        let table = crate::cayley::enumerate_group(Prime::new(5).unwrap(), &g.set(GeneratorSet::ABC)).unwrap();
        let cay = crate::spectra::dense_spectrum(&crate::cayley::walk_operator(&table)).unwrap();
        assert!((koop.gap - cay.gap).abs() < 1e-10);
        assert!(koop.has_gap());
    }

    #[test]
    fn defect_with_trivial_cocycle_is_initial_distance() {
        let sys = system(&[5], &[3, 7], None);
        let metric = ProductMetric::for_system(&sys);
        assert_eq!(metric.base_weights(), &[0.5]);
        assert_eq!(metric.fiber_weights(), &[0.25, 0.125]);
        let cfg = DefectConfig {
            delta: 0.2,
            horizon: 25,
            samples: 50,
            seed: 1,
        };
        let r = equicontinuity_defect(&sys, &cfg).unwrap();
        let (p, q) = r.attaining_pair;
        let d0 = metric.distance(&sys, p, q);
        assert_eq!(r.defect, d0);
        assert!(d0 > 0.0 && d0 <= 0.2);
        assert_eq!(r.min_positive_distance, 0.125);
    }

    #[test]
    fn defect_resolution_guard() {
        let sys = system(&[5], &[3], None);
        let cfg = DefectConfig {
            delta: 0.1,
            horizon: 5,
            samples: 5,
            seed: 0,
        };
        assert_eq!(
            equicontinuity_defect(&sys, &cfg).unwrap_err(),
            DynamicsError::Resolution {
                delta: 0.1,
                min_distance: 0.25
            }
        );
    }

    #[test]
    fn intransitive_system_has_no_gap() {
        // With a trivial cocycle and a fiber on which f, g alone act, a fiber
        // function invariant under (a, f), (b, g), (c, 1) exists whenever the
        // action is intransitive; both diagnostics must agree.
        let sys = system(&[5], &[3], None);
        let orbits = orbit_transitivity(&sys, CAP).unwrap();
        let gap = koopman_gap(&sys, &SolverConfig::default(), CAP).unwrap();
        assert_eq!(gap.has_gap(), orbits.transitive);
    }
}
