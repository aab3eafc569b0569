use alloc::vec;
use alloc::vec::Vec;

use super::product::{Element, TruncatedProduct};
use super::DynamicsError;

/// The cyclic subgroup generated by one element of a truncated product,
/// with a section of the coset space `G / <c>`.
///
/// Coset representatives are the least element (in index order) of each
/// left coset `x<c>`; every element factors uniquely as `x = k * c^t`.
#[derive(Debug, Clone)]
pub struct CyclicClosure {
    generator: Element,
    powers: Vec<Element>,
    reps: Vec<Element>,
    coset_of: Vec<u32>,
    power_of: Vec<u32>,
}

impl CyclicClosure {
    pub fn new(parent: &TruncatedProduct, c: Element) -> Result<Self, DynamicsError> {
        let n = parent.size();
        if c >= n {
            return Err(DynamicsError::NotInBase(c));
        }
        if n > u32::MAX as u64 {
            return Err(DynamicsError::Capacity {
                size: n,
                capacity: u32::MAX as usize,
            });
        }
        let mut powers = vec![parent.identity()];
        let mut y = c;
        while y != parent.identity() {
            powers.push(y);
            y = parent.mul(y, c);
        }
        let order = powers.len();

        let n = n as usize;
        let mut coset_of = vec![u32::MAX; n];
        let mut power_of = vec![0u32; n];
        let mut reps = Vec::with_capacity(n / order);
        for x in 0..n {
            if coset_of[x] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x as Element);
            let mut y = x as Element;
            for t in 0..order {
                coset_of[y as usize] = id;
                power_of[y as usize] = t as u32;
                y = parent.mul(y, c);
            }
            debug_assert_eq!(y, x as Element);
        }
        Ok(CyclicClosure {
            generator: c,
            powers,
            reps,
            coset_of,
            power_of,
        })
    }

    pub fn generator(&self) -> Element {
        self.generator
    }

    pub fn order(&self) -> usize {
        self.powers.len()
    }

    /// `c^0, c^1, ..., c^(m-1)`.
    pub fn elements(&self) -> &[Element] {
        &self.powers
    }

    pub fn power(&self, t: usize) -> Element {
        self.powers[t % self.powers.len()]
    }

    pub fn coset_reps(&self) -> &[Element] {
        &self.reps
    }

    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    /// `(k, t)` with `x = k * c^t` and `k` the coset representative.
    #[inline]
    pub fn factor(&self, x: Element) -> (Element, usize) {
        let i = x as usize;
        (self.reps[self.coset_of[i] as usize], self.power_of[i] as usize)
    }

    #[inline]
    pub fn power_of(&self, x: Element) -> usize {
        self.power_of[x as usize] as usize
    }

    pub fn contains(&self, x: Element) -> bool {
        self.coset_of[x as usize] == 0
    }
}
