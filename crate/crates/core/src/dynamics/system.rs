use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::closure::CyclicClosure;
use super::cocycle::{extend_cocycle, Cocycle};
use super::product::{Element, TruncatedProduct};
use super::DynamicsError;
use crate::sl2::Generators;
use crate::spectra::WalkOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub base: Element,
    pub fiber: Element,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    A,
    AInv,
    B,
    BInv,
    C,
    CInv,
}

impl Move {
    pub const ALL: [Move; 6] = [Move::A, Move::AInv, Move::B, Move::BInv, Move::C, Move::CInv];

    pub fn inverse(self) -> Move {
        match self {
            Move::A => Move::AInv,
            Move::AInv => Move::A,
            Move::B => Move::BInv,
            Move::BInv => Move::B,
            Move::C => Move::CInv,
            Move::CInv => Move::C,
        }
    }
}

/// The skew product on `K x L`:
///
/// ```text
/// T_a(x, y) = (a x, f y)
/// T_b(x, y) = (b x, g y)
/// T_c(x, y) = (c x, phi(x) y)
/// ```
///
/// where a, b, c are projected into the base, f, g are a, b projected into
/// the fiber, and `phi` extends a cocycle on `<c>` along the coset section.
#[derive(Debug, Clone)]
pub struct SkewProductSystem {
    base: TruncatedProduct,
    fiber: TruncatedProduct,
    a: Element,
    b: Element,
    c: Element,
    a_inv: Element,
    b_inv: Element,
    c_inv: Element,
    f: Element,
    g: Element,
    f_inv: Element,
    g_inv: Element,
    closure: CyclicClosure,
    cocycle: Cocycle,
}

impl SkewProductSystem {
    pub fn new(
        base: TruncatedProduct,
        fiber: TruncatedProduct,
        gens: &Generators,
        cocycle: Cocycle,
    ) -> Result<Self, DynamicsError> {
        let a = base.project(&gens.a);
        let b = base.project(&gens.b);
        let c = base.project(&gens.c);
        let f = fiber.project(&gens.a);
        let g = fiber.project(&gens.b);
        let closure = CyclicClosure::new(&base, c)?;
        if cocycle.len() != closure.order() {
            return Err(DynamicsError::CocycleLength {
                expected: closure.order(),
                found: cocycle.len(),
            });
        }
        if let Some(&v) = cocycle.values().iter().find(|&&v| v >= fiber.size()) {
            return Err(DynamicsError::CocycleValue(v));
        }
        Ok(SkewProductSystem {
            a_inv: base.inverse(a),
            b_inv: base.inverse(b),
            c_inv: base.inverse(c),
            f_inv: fiber.inverse(f),
            g_inv: fiber.inverse(g),
            base,
            fiber,
            a,
            b,
            c,
            f,
            g,
            closure,
            cocycle,
        })
    }

    pub fn base(&self) -> &TruncatedProduct {
        &self.base
    }

    pub fn fiber(&self) -> &TruncatedProduct {
        &self.fiber
    }

    pub fn closure(&self) -> &CyclicClosure {
        &self.closure
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// Base images of a, b, c.
    pub fn base_generators(&self) -> [Element; 3] {
        [self.a, self.b, self.c]
    }

    /// Fiber images f, g.
    pub fn fiber_generators(&self) -> [Element; 2] {
        [self.f, self.g]
    }

    pub fn size(&self) -> u64 {
        self.base.size() * self.fiber.size()
    }

    pub fn index(&self, p: Point) -> u64 {
        p.base * self.fiber.size() + p.fiber
    }

    pub fn point(&self, index: u64) -> Point {
        Point {
            base: index / self.fiber.size(),
            fiber: index % self.fiber.size(),
        }
    }

    pub fn identity(&self) -> Point {
        Point { base: 0, fiber: 0 }
    }

    pub fn phi(&self, x: Element) -> Element {
        extend_cocycle(&self.closure, &self.cocycle, x)
    }

    pub fn apply_move(&self, m: Move, p: Point) -> Point {
        let (base, fiber) = (&self.base, &self.fiber);
        let (x, y) = (p.base, p.fiber);
        let (x, y) = match m {
            Move::A => (base.mul(self.a, x), fiber.mul(self.f, y)),
            Move::AInv => (base.mul(self.a_inv, x), fiber.mul(self.f_inv, y)),
            Move::B => (base.mul(self.b, x), fiber.mul(self.g, y)),
            Move::BInv => (base.mul(self.b_inv, x), fiber.mul(self.g_inv, y)),
            Move::C => (base.mul(self.c, x), fiber.mul(self.phi(x), y)),
            Move::CInv => {
                let x1 = base.mul(self.c_inv, x);
                (x1, fiber.mul(fiber.inverse(self.phi(x1)), y))
            }
        };
        Point { base: x, fiber: y }
    }

    pub fn apply_word(&self, word: &[Move], p: Point) -> Point {
        word.iter().fold(p, |q, &m| self.apply_move(m, q))
    }

    /// The six moves as permutations of the flattened product space, in
    /// [`Move::ALL`] order, packaged as the averaging (Koopman) operator.
    pub fn move_operator(&self, capacity: usize) -> Result<WalkOperator, DynamicsError> {
        let n = self.size();
        if n > capacity as u64 || n > u32::MAX as u64 {
            return Err(DynamicsError::Capacity { size: n, capacity });
        }
        let base_perm = |g: Element| self.base.left_translation(g);
        let fiber_perm = |g: Element| self.fiber.left_translation(g);
        let pa = base_perm(self.a);
        let pai = base_perm(self.a_inv);
        let pb = base_perm(self.b);
        let pbi = base_perm(self.b_inv);
        let pc = base_perm(self.c);
        let pci = base_perm(self.c_inv);
        let pf = fiber_perm(self.f);
        let pfi = fiber_perm(self.f_inv);
        let pg = fiber_perm(self.g);
        let pgi = fiber_perm(self.g_inv);

        // Left translations by every value phi takes, and by their inverses.
        let mut by_value: BTreeMap<Element, Vec<u32>> = BTreeMap::new();
        for &v in self.cocycle.values() {
            by_value.entry(v).or_insert_with(|| fiber_perm(v));
            let vi = self.fiber.inverse(v);
            by_value.entry(vi).or_insert_with(|| fiber_perm(vi));
        }
        let phi_inv: BTreeMap<Element, Element> = self
            .cocycle
            .values()
            .iter()
            .map(|&v| (v, self.fiber.inverse(v)))
            .collect();

        let nf = self.fiber.size();
        let mut moves = Vec::with_capacity(n as usize * 6);
        for x in 0..self.base.size() {
            let xi = x as usize;
            let phi_x = &by_value[&self.phi(x)];
            let x_back = pci[xi] as Element;
            let phi_back = &by_value[&phi_inv[&self.phi(x_back)]];
            let rows = |bx: u32, y: u32| bx as u64 * nf + y as u64;
            for y in 0..nf as usize {
                moves.push(rows(pa[xi], pf[y]) as u32);
                moves.push(rows(pai[xi], pfi[y]) as u32);
                moves.push(rows(pb[xi], pg[y]) as u32);
                moves.push(rows(pbi[xi], pgi[y]) as u32);
                moves.push(rows(pc[xi], phi_x[y]) as u32);
                moves.push(rows(pci[xi], phi_back[y]) as u32);
            }
        }
        Ok(WalkOperator::from_row_major(n as usize, 6, moves)?)
    }

    /// Restricted to `<c> x L`, `T_c` advances the power of c and multiplies
    /// the fiber by `phi0(c^t)`.
    pub fn closure_point(&self, t: usize, fiber: Element) -> Point {
        Point {
            base: self.closure.power(t),
            fiber,
        }
    }
}
