//! Breadth-first enumeration of subgroups of SL2(Z/p) and their Cayley graphs.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use crate::sl2::{IntMat2, ModMat2, Prime};
use crate::spectra::WalkOperator;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_CAPACITY: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CayleyError {
    #[error("group enumeration exceeded the capacity bound of {capacity} elements")]
    Capacity { capacity: usize },
    #[error("empty generating set")]
    NoGenerators,
}

/// Element lookup keyed by packed residues. Packing into 16-bit lanes is only
/// injective for p < 2^16.
#[derive(Debug, Clone)]
enum ElementIndex {
    Packed(HashMap<u64, u32>),
    Wide(HashMap<u128, u32>),
}

impl ElementIndex {
    fn for_prime(p: Prime) -> Self {
        if p.value() < (1 << 16) {
            ElementIndex::Packed(HashMap::new())
        } else {
            ElementIndex::Wide(HashMap::new())
        }
    }

    #[inline]
    fn get(&self, m: &ModMat2) -> Option<u32> {
        match self {
            ElementIndex::Packed(h) => h.get(&m.packed_key()).copied(),
            ElementIndex::Wide(h) => h.get(&m.wide_key()).copied(),
        }
    }

    fn insert(&mut self, m: &ModMat2, idx: u32) {
        match self {
            ElementIndex::Packed(h) => {
                h.insert(m.packed_key(), idx);
            }
            ElementIndex::Wide(h) => {
                h.insert(m.wide_key(), idx);
            }
        }
    }
}

/// A finite subgroup of SL2(Z/p) in BFS discovery order (identity first),
/// with its right-multiplication table over the symmetric generator multiset
/// `[s0, s0^-1, s1, s1^-1, ...]`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    prime: Prime,
    elements: Vec<ModMat2>,
    gen_images: Vec<ModMat2>,
    /// Row-major, `size x degree`.
    moves: Vec<u32>,
    index: ElementIndex,
}

impl GroupTable {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.gen_images.len()
    }

    pub fn elements(&self) -> &[ModMat2] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &ModMat2 {
        &self.elements[i as usize]
    }

    pub fn gen_images(&self) -> &[ModMat2] {
        &self.gen_images
    }

    pub fn move_table(&self) -> &[u32] {
        &self.moves
    }

    /// Index of `element * gen_images[column]`.
    #[inline]
    pub fn step(&self, element: u32, column: usize) -> u32 {
        self.moves[element as usize * self.degree() + column]
    }

    /// The column holding the inverse generator of `column`.
    pub fn inverse_column(column: usize) -> usize {
        column ^ 1
    }

    pub fn index_of(&self, m: &ModMat2) -> Option<u32> {
        if m.modulus() != self.prime.value() {
            return None;
        }
        self.index.get(m)
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let prod = self.element(i).mul(self.element(j));
        self.index
            .get(&prod)
            .expect("subgroup is closed under multiplication")
    }

    pub fn inverse(&self, i: u32) -> u32 {
        self.index
            .get(&self.element(i).inverse())
            .expect("subgroup is closed under inversion")
    }

    pub fn is_full_group(&self) -> bool {
        self.size() as u64 == self.prime.sl2_order()
    }
}

/// BFS closure of the reductions of `gens` mod `p` under right multiplication.
pub fn enumerate_group(p: Prime, gens: &[IntMat2]) -> Result<GroupTable, CayleyError> {
    enumerate_group_with_capacity(p, gens, DEFAULT_CAPACITY)
}

pub fn enumerate_group_with_capacity(
    p: Prime,
    gens: &[IntMat2],
    capacity: usize,
) -> Result<GroupTable, CayleyError> {
    if gens.is_empty() {
        return Err(CayleyError::NoGenerators);
    }
    let gen_images: Vec<ModMat2> = gens
        .iter()
        .flat_map(|g| {
            let m = g.reduce_mod(p);
            [m, m.inverse()]
        })
        .collect();
    let degree = gen_images.len();

    let mut index = ElementIndex::for_prime(p);
    let mut elements = Vec::new();
    let mut moves: Vec<u32> = Vec::new();
    let identity = ModMat2::identity(p);
    index.insert(&identity, 0);
    elements.push(identity);

    let mut queue = VecDeque::from([0u32]);
    while let Some(i) = queue.pop_front() {
        let g = elements[i as usize];
        for s in &gen_images {
            let h = g.mul(s);
            let j = match index.get(&h) {
                Some(j) => j,
                None => {
                    if elements.len() >= capacity {
                        return Err(CayleyError::Capacity { capacity });
                    }
                    let j = elements.len() as u32;
                    index.insert(&h, j);
                    elements.push(h);
                    queue.push_back(j);
                    j
                }
            };
            moves.push(j);
        }
    }
    // Rows were appended in pop order, which is discovery order.
    debug_assert_eq!(moves.len(), elements.len() * degree);
    assert_eq!(
        p.sl2_order() % elements.len() as u64,
        0,
        "subgroup order must divide |SL2(Z/p)|"
    );
    Ok(GroupTable {
        prime: p,
        elements,
        gen_images,
        moves,
        index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub prime: Prime,
    pub subgroup_size: u64,
    pub full_group_size: u64,
    pub generated: bool,
}

impl GenerationReport {
    pub fn from_table(table: &GroupTable) -> Self {
        GenerationReport {
            prime: table.prime,
            subgroup_size: table.size() as u64,
            full_group_size: table.prime.sl2_order(),
            generated: table.is_full_group(),
        }
    }
}

pub fn generation_check(p: Prime, gens: &[IntMat2]) -> Result<GenerationReport, CayleyError> {
    Ok(GenerationReport::from_table(&enumerate_group(p, gens)?))
}

/// Normalized adjacency operator of the Cayley multigraph.
pub fn walk_operator(table: &GroupTable) -> WalkOperator {
    WalkOperator::from_row_major(table.size(), table.degree(), table.moves.clone())
        .expect("move table columns are permutations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::canonical_generators;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn sizes() {
        let g = canonical_generators();
        assert_eq!(enumerate_group(p(5), &[g.a.clone(), g.b.clone()]).unwrap().size(), 120);
        assert_eq!(enumerate_group(p(3), &[IntMat2::identity()]).unwrap().size(), 1);
        assert_eq!(enumerate_group(p(3), &[g.a.clone(), g.b.clone()]).unwrap().size(), 24);
    }

    #[test]
    fn generation_examples() {
        let g = canonical_generators();
        assert!(generation_check(p(5), &[g.a.clone(), g.b.clone()]).unwrap().generated);
        let cyc = generation_check(p(5), &[g.a.clone()]).unwrap();
        assert!(!cyc.generated);
        assert_eq!(cyc.subgroup_size, 5);
        assert_eq!(cyc.full_group_size, 120);
    }

    #[test]
    fn table_structure() {
        let g = canonical_generators();
        let t = enumerate_group(p(7), &[g.a.clone(), g.b.clone(), g.c.clone()]).unwrap();
        assert_eq!(t.degree(), 6);
        assert!(t.element(0).is_identity());
        for i in 0..t.size() as u32 {
            for col in 0..t.degree() {
                let j = t.step(i, col);
                assert_eq!(t.step(j, GroupTable::inverse_column(col)), i);
                assert_eq!(*t.element(j), t.element(i).mul(&t.gen_images()[col]));
            }
        }
        let x = 17u32;
        let y = 101u32;
        let prod = t.mul(x, y);
        assert_eq!(*t.element(prod), t.element(x).mul(t.element(y)));
        assert!(t.element(t.mul(x, t.inverse(x))).is_identity());
    }

    #[test]
    fn capacity_error() {
        let g = canonical_generators();
        let err = enumerate_group_with_capacity(p(5), &[g.a.clone(), g.b.clone()], 50).unwrap_err();
        assert_eq!(err, CayleyError::Capacity { capacity: 50 });
        assert_eq!(enumerate_group(p(5), &[]).unwrap_err(), CayleyError::NoGenerators);
    }

    #[test]
    fn identity_generator_gives_self_loops() {
        let t = enumerate_group(p(3), &[IntMat2::identity()]).unwrap();
        assert_eq!(t.degree(), 2);
        assert_eq!(t.move_table(), &[0, 0]);
    }

    #[test]
    fn walk_operator_on_identity_indicator() {
        let g = canonical_generators();
        let t = enumerate_group(p(3), &[g.a.clone(), g.b.clone()]).unwrap();
        let op = walk_operator(&t);
        let mut e = alloc::vec![0.0; t.size()];
        e[0] = 1.0;
        let mut out = alloc::vec![0.0; t.size()];
        op.apply(&e, &mut out);
        // (A 1_e)(h) = #{s : h s = e} / 4, nonzero exactly at the inverses of the generators
        for (h, &v) in out.iter().enumerate() {
            let hits = t
                .gen_images()
                .iter()
                .filter(|s| t.element(h as u32).mul(s).is_identity())
                .count();
            assert_eq!(v, hits as f64 / 4.0);
        }
        for s in t.gen_images() {
            assert_eq!(out[t.index_of(s).unwrap() as usize], 0.25);
        }
    }

    #[test]
    fn wide_keys_for_large_primes() {
        let g = canonical_generators();
        let big = p(65_537);
        let t = enumerate_group(big, &[g.a.clone()]).unwrap();
        assert_eq!(t.size(), 65_537);
        assert!(matches!(t.index, ElementIndex::Wide(_)));
        assert_eq!(t.index_of(&g.a.reduce_mod(big)), Some(1));
    }
}
