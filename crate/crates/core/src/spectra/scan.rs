use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{cheeger_sweep, solve, Method, SolverConfig};
use crate::cayley::{enumerate_group_with_capacity, walk_operator, CayleyError, DEFAULT_CAPACITY};
use crate::sl2::{GeneratorSet, Generators, Prime};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub solver: SolverConfig,
    pub capacity: usize,
    /// Also run a Cheeger sweep on each eigenvector estimate.
    pub cheeger: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            solver: SolverConfig::default(),
            capacity: DEFAULT_CAPACITY,
            cheeger: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    NotGenerated,
    Capacity,
    NotConverged,
    Degenerate,
}

impl RowFlag {
    pub fn name(self) -> &'static str {
        match self {
            RowFlag::Ok => "ok",
            RowFlag::NotGenerated => "not_generated",
            RowFlag::Capacity => "capacity",
            RowFlag::NotConverged => "not_converged",
            RowFlag::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: u32,
    pub class_mod4: u8,
    pub group_size: u64,
    pub generated: bool,
    pub lambda2: Option<f64>,
    pub gap: Option<f64>,
    pub method: Option<Method>,
    pub flag: RowFlag,
    pub residual_norm: Option<f64>,
    pub cheeger_ratio: Option<f64>,
}

fn scan_prime(p: Prime, gens: &[crate::sl2::IntMat2], config: &ScanConfig) -> ScanRow {
    let mut row = ScanRow {
        p: p.value(),
        class_mod4: p.residue_class_mod4(),
        group_size: 0,
        generated: false,
        lambda2: None,
        gap: None,
        method: None,
        flag: RowFlag::Ok,
        residual_norm: None,
        cheeger_ratio: None,
    };
    let table = match enumerate_group_with_capacity(p, gens, config.capacity) {
        Ok(t) => t,
        Err(CayleyError::Capacity { .. }) | Err(CayleyError::NoGenerators) => {
            row.flag = RowFlag::Capacity;
            return row;
        }
    };
    row.group_size = table.size() as u64;
    row.generated = table.is_full_group();
    if !row.generated {
        row.flag = RowFlag::NotGenerated;
        return row;
    }
    let op = walk_operator(&table);
    drop(table);
    let pair = match solve(&op, &config.solver) {
        Ok(pair) => pair,
        Err(_) => {
            row.flag = RowFlag::Capacity;
            return row;
        }
    };
    let r = pair.report;
    row.lambda2 = Some(r.lambda2);
    row.gap = Some(r.gap);
    row.method = Some(r.method);
    row.residual_norm = Some(r.residual_norm);
    row.flag = if r.degenerate {
        RowFlag::Degenerate
    } else if !r.converged {
        RowFlag::NotConverged
    } else {
        RowFlag::Ok
    };
    if config.cheeger {
        row.cheeger_ratio = cheeger_sweep(&op, &pair.vector).ok().map(|s| s.boundary_ratio);
    }
    row
}

/// One row per prime, in input order. Primes whose projected generators do
/// not generate SL2(Z/p) are flagged and not solved.
pub fn gap_scan(primes: &[Prime], set: GeneratorSet, gens: &Generators, config: &ScanConfig) -> Vec<ScanRow> {
    let images = gens.set(set);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        primes
            .par_iter()
            .map(|&p| scan_prime(p, &images, config))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        primes.iter().map(|&p| scan_prime(p, &images, config)).collect()
    }
}

/// Least gap over rows flagged `ok`.
pub fn min_gap(rows: &[ScanRow]) -> Option<f64> {
    rows.iter()
        .filter(|r| r.flag == RowFlag::Ok)
        .filter_map(|r| r.gap)
        .min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::canonical_generators;

    fn primes(vs: &[u64]) -> Vec<Prime> {
        vs.iter().map(|&v| Prime::new(v).unwrap()).collect()
    }

    #[test]
    fn cyclic_subgroup_is_flagged() {
        let rows = gap_scan(&primes(&[3]), GeneratorSet::A, &canonical_generators(), &ScanConfig::default());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].flag, RowFlag::NotGenerated);
        assert_eq!(rows[0].group_size, 3);
        assert!(rows[0].gap.is_none());
    }

    #[test]
    fn empty_scan() {
        let rows = gap_scan(&[], GeneratorSet::AB, &canonical_generators(), &ScanConfig::default());
        assert!(rows.is_empty());
        assert_eq!(min_gap(&rows), None);
    }

    #[test]
    fn small_primes_have_gaps() {
        let config = ScanConfig {
            cheeger: true,
            ..Default::default()
        };
        let rows = gap_scan(&primes(&[5, 13, 17]), GeneratorSet::AB, &canonical_generators(), &config);
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.flag, RowFlag::Ok);
            let gap = r.gap.unwrap();
            assert!(gap > 0.0);
            let h = r.cheeger_ratio.unwrap();
            assert!(gap / 2.0 <= h + 1e-12 && h <= (2.0 * gap).sqrt() + 1e-9);
        }
        assert_eq!(rows[0].method, Some(Method::Dense));
        assert_eq!(rows[2].method, Some(Method::Iterative));
        assert!(min_gap(&rows).unwrap() > 0.0);
    }

    #[test]
    fn capacity_is_flagged() {
        let config = ScanConfig {
            capacity: 10,
            ..Default::default()
        };
        let rows = gap_scan(&primes(&[5]), GeneratorSet::AB, &canonical_generators(), &config);
        assert_eq!(rows[0].flag, RowFlag::Capacity);
    }
}
