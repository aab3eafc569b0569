use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::cayley::{enumerate_group_with_capacity, GroupTable};
use crate::sl2::{IntMat2, Prime};

/// Index of a product element: per-factor BFS indices in mixed radix, first
/// factor most significant, so integer order is lexicographic order.
pub type Element = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "3")]
    Three,
}

impl ResidueClass {
    pub fn value(self) -> u8 {
        match self {
            ResidueClass::One => 1,
            ResidueClass::Three => 3,
        }
    }

    pub fn from_value(v: u8) -> Option<Self> {
        match v {
            1 => Some(ResidueClass::One),
            3 => Some(ResidueClass::Three),
            _ => None,
        }
    }

    pub fn contains(self, p: Prime) -> bool {
        p.residue_class_mod4() == self.value()
    }
}

/// A finite product of SL2(Z/p) factors over primes of one residue class.
#[derive(Debug, Clone)]
pub struct TruncatedProduct {
    class: ResidueClass,
    primes: Vec<Prime>,
    tables: Vec<GroupTable>,
    /// `strides[i]` is the place value of factor `i`.
    strides: Vec<u64>,
    total: u64,
}

/// Builds the product over `primes` (sorted ascending), each factor the BFS
/// closure of `gens` mod p. Every factor must be all of SL2(Z/p).
pub fn build_truncation(
    class: ResidueClass,
    primes: &[Prime],
    gens: &[IntMat2],
    capacity: usize,
) -> Result<TruncatedProduct, DynamicsError> {
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    if let Some(w) = primes.windows(2).find(|w| w[0] == w[1]) {
        return Err(DynamicsError::DuplicatePrime(w[0].value()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !class.contains(p)) {
        return Err(DynamicsError::WrongClass {
            prime: p.value(),
            class: class.value(),
        });
    }
    let mut tables = Vec::with_capacity(primes.len());
    let mut total: u64 = 1;
    for &p in &primes {
        let t = enumerate_group_with_capacity(p, gens, capacity)?;
        if !t.is_full_group() {
            return Err(DynamicsError::NotGenerated { prime: p.value() });
        }
        total = total.saturating_mul(t.size() as u64);
        if total > capacity as u64 {
            return Err(DynamicsError::Capacity {
                size: total,
                capacity,
            });
        }
        tables.push(t);
    }
    let mut strides = alloc::vec![1u64; tables.len()];
    for i in (0..tables.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * tables[i + 1].size() as u64;
    }
    Ok(TruncatedProduct {
        class,
        primes,
        tables,
        strides,
        total,
    })
}

impl TruncatedProduct {
    pub fn class(&self) -> ResidueClass {
        self.class
    }

    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    pub fn factor_tables(&self) -> &[GroupTable] {
        &self.tables
    }

    pub fn num_factors(&self) -> usize {
        self.tables.len()
    }

    pub fn size(&self) -> u64 {
        self.total
    }

    pub fn identity(&self) -> Element {
        0
    }

    #[inline]
    pub fn component(&self, x: Element, factor: usize) -> u32 {
        ((x / self.strides[factor]) % self.tables[factor].size() as u64) as u32
    }

    pub fn decode(&self, x: Element) -> Vec<u32> {
        (0..self.tables.len()).map(|i| self.component(x, i)).collect()
    }

    pub fn encode(&self, components: &[u32]) -> Element {
        debug_assert_eq!(components.len(), self.tables.len());
        components
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as u64 * s)
            .sum()
    }

    /// Componentwise product `x * y`.
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.tables
            .iter()
            .enumerate()
            .map(|(i, t)| t.mul(self.component(x, i), self.component(y, i)) as u64 * self.strides[i])
            .sum()
    }

    pub fn inverse(&self, x: Element) -> Element {
        self.tables
            .iter()
            .enumerate()
            .map(|(i, t)| t.inverse(self.component(x, i)) as u64 * self.strides[i])
            .sum()
    }

    /// The image of an integer matrix under reduction into every factor.
    pub fn project(&self, m: &IntMat2) -> Element {
        self.tables
            .iter()
            .zip(&self.strides)
            .map(|(t, &s)| {
                let idx = t
                    .index_of(&m.reduce_mod(t.prime()))
                    .expect("factors are full SL2(Z/p)");
                idx as u64 * s
            })
            .sum()
    }

    /// The permutation `x -> g * x`.
    pub fn left_translation(&self, g: Element) -> Vec<u32> {
        (0..self.total).map(|x| self.mul(g, x) as u32).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::{canonical_generators, GeneratorSet};

    fn primes(vs: &[u64]) -> Vec<Prime> {
        vs.iter().map(|&v| Prime::new(v).unwrap()).collect()
    }

    const CAP: usize = 1 << 24;

    #[test]
    fn sizes() {
        let g = canonical_generators();
        let k = build_truncation(ResidueClass::One, &primes(&[5]), &g.set(GeneratorSet::ABC), CAP).unwrap();
        assert_eq!(k.size(), 120);
        let l = build_truncation(ResidueClass::Three, &primes(&[7, 3]), &g.set(GeneratorSet::AB), CAP).unwrap();
        assert_eq!(l.size(), 24 * 336);
        assert_eq!(l.primes(), &primes(&[3, 7])[..]);
        let trivial = build_truncation(ResidueClass::Three, &[], &g.set(GeneratorSet::AB), CAP).unwrap();
        assert_eq!(trivial.size(), 1);
    }

    #[test]
    fn guards() {
        let g = canonical_generators();
        assert_eq!(
            build_truncation(ResidueClass::One, &primes(&[3]), &g.set(GeneratorSet::ABC), CAP).unwrap_err(),
            DynamicsError::WrongClass { prime: 3, class: 1 }
        );
        assert_eq!(
            build_truncation(ResidueClass::One, &primes(&[5]), &g.set(GeneratorSet::A), CAP).unwrap_err(),
            DynamicsError::NotGenerated { prime: 5 }
        );
        assert_eq!(
            build_truncation(ResidueClass::One, &primes(&[5, 5]), &g.set(GeneratorSet::AB), CAP).unwrap_err(),
            DynamicsError::DuplicatePrime(5)
        );
        assert!(matches!(
            build_truncation(ResidueClass::Three, &primes(&[3, 7]), &g.set(GeneratorSet::AB), 1000),
            Err(DynamicsError::Capacity { .. })
        ));
    }

    #[test]
    fn group_law() {
        let g = canonical_generators();
        let l = build_truncation(ResidueClass::Three, &primes(&[3, 7]), &g.set(GeneratorSet::AB), CAP).unwrap();
        for (x, y) in [(5u64, 4000u64), (8063, 1), (77, 77)] {
            let xy = l.mul(x, y);
            for i in 0..2 {
                let t = &l.factor_tables()[i];
                let expect = t.element(l.component(x, i)).mul(t.element(l.component(y, i)));
                assert_eq!(*t.element(l.component(xy, i)), expect);
            }
            assert_eq!(l.mul(x, l.inverse(x)), l.identity());
            assert_eq!(l.encode(&l.decode(x)), x);
        }
        let a = l.project(&g.a);
        assert_eq!(l.mul(a, l.project(&g.a.inverse())), 0);
        let perm = l.left_translation(a);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(i, &v)| v as usize == i));
    }
}
