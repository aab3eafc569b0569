use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::closure::CyclicClosure;
use super::product::{Element, TruncatedProduct};
use super::DynamicsError;
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleKind {
    Trivial,
    SeededRandom { seed: u64 },
    Table,
}

/// A map from the cyclic closure `<c>` into the fiber group, stored by power:
/// `values[t]` is the image of `c^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    kind: CocycleKind,
    values: Vec<Element>,
}

impl Cocycle {
    pub fn trivial(order: usize) -> Self {
        Cocycle {
            kind: CocycleKind::Trivial,
            values: vec![0; order],
        }
    }

    /// Independent uniform fiber elements, one per power of c.
    pub fn seeded_random(order: usize, fiber: &TruncatedProduct, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let values = (0..order).map(|_| rng.random_range(0..fiber.size())).collect();
        Cocycle {
            kind: CocycleKind::SeededRandom { seed },
            values,
        }
    }

    pub fn from_table(values: Vec<Element>, order: usize, fiber: &TruncatedProduct) -> Result<Self, DynamicsError> {
        if values.len() != order {
            return Err(DynamicsError::CocycleLength {
                expected: order,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= fiber.size()) {
            return Err(DynamicsError::CocycleValue(v));
        }
        Ok(Cocycle {
            kind: CocycleKind::Table,
            values,
        })
    }

    pub fn kind(&self) -> CocycleKind {
        self.kind
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The value at `c^t`.
    #[inline]
    pub fn at_power(&self, t: usize) -> Element {
        self.values[t]
    }
}

/// `phi(x) = phi0(k^-1 x)` where `k` represents the coset of `x`; since
/// `k^-1 x = c^t`, this is the stored value at power `t`.
pub fn extend_cocycle(closure: &CyclicClosure, phi0: &Cocycle, x: Element) -> Element {
    phi0.at_power(closure.power_of(x))
}
