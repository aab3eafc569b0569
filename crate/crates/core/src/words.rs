//! Free-group words, exact evaluation into SL2(Z), and exhaustive
//! finite-length freeness scans.
//!
//! Letters are ordered by generator index, then `+1` before `-1`; that order
//! drives both enumeration and witness selection. A letter's *code* is
//! `2 * generator + (exponent == -1)`, so the inverse of code `k` is `k ^ 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::sl2::IntMat2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("word has rank {word} but {images} images were supplied")]
    RankMismatch { word: usize, images: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    Generator { index: usize, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter {
            generator,
            inverse: exponent < 0,
        }
    }

    pub fn code(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter {
            generator: code / 2,
            inverse: code % 2 == 1,
        }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A word over `rank` free generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self, WordError> {
        if let Some(l) = letters.iter().find(|l| l.generator >= rank) {
            return Err(WordError::Generator {
                index: l.generator,
                rank,
            });
        }
        Ok(Word { rank, letters })
    }

    /// From `(generator, exponent)` pairs.
    pub fn from_pairs(rank: usize, pairs: &[(usize, i8)]) -> Result<Self, WordError> {
        Self::new(rank, pairs.iter().map(|&(g, e)| Letter::new(g, e)).collect())
    }

    pub fn empty(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub(crate) fn from_codes(rank: usize, codes: &[usize]) -> Self {
        Word {
            rank,
            letters: codes.iter().map(|&c| Letter::from_code(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Concatenation, not reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            rank: self.rank.max(other.rank),
            letters,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Renders letters with the given generator names, e.g. `a*b^-1`.
    pub fn display_with(&self, names: &[&str]) -> String {
        use core::fmt::Write;
        if self.letters.is_empty() {
            return String::from("1");
        }
        let mut out = String::new();
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            match names.get(l.generator) {
                Some(n) => out.push_str(n),
                None => {
                    let _ = write!(out, "g{}", l.generator);
                }
            }
            if l.inverse {
                out.push_str("^-1");
            }
        }
        out
    }

    pub fn cmp_shortlex(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters
                .iter()
                .map(|l| l.code())
                .cmp(other.letters.iter().map(|l| l.code()))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// Free reduction by a single stack pass.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word {
        rank: w.rank,
        letters: out,
    }
}

/// Evaluates the word under the homomorphism sending generator `i` to `images[i]`.
pub fn evaluate(w: &Word, images: &[IntMat2]) -> Result<IntMat2, WordError> {
    if images.len() < w.rank {
        return Err(WordError::RankMismatch {
            word: w.rank,
            images: images.len(),
        });
    }
    let inverses: Vec<IntMat2> = images.iter().map(IntMat2::inverse).collect();
    let mut acc = IntMat2::identity();
    for l in &w.letters {
        let m = if l.inverse {
            &inverses[l.generator]
        } else {
            &images[l.generator]
        };
        acc = acc.mul(m);
    }
    Ok(acc)
}

/// Number of reduced words of length exactly `len` over `rank` generators.
pub fn reduced_word_count(rank: usize, len: u32) -> u128 {
    if len == 0 {
        return 1;
    }
    if rank == 0 {
        return 0;
    }
    let k = 2 * rank as u128;
    k * (k - 1).pow(len - 1)
}

/// Iterator over every reduced word of exactly the given length, in
/// lexicographic letter-code order.
pub struct ReducedWords {
    rank: usize,
    codes: Vec<usize>,
    done: bool,
}

impl ReducedWords {
    fn first_valid(prev: Option<usize>, from: usize, alphabet: usize) -> Option<usize> {
        (from..alphabet).find(|&c| prev.map_or(true, |p| c != p ^ 1))
    }

    /// Advances position `i` to its next admissible code and fills the suffix
    /// with the least admissible codes.
    fn advance(&mut self) -> bool {
        let alphabet = 2 * self.rank;
        let mut i = self.codes.len();
        while i > 0 {
            i -= 1;
            let prev = if i == 0 { None } else { Some(self.codes[i - 1]) };
            if let Some(c) = Self::first_valid(prev, self.codes[i] + 1, alphabet) {
                self.codes[i] = c;
                for j in i + 1..self.codes.len() {
                    self.codes[j] = Self::first_valid(Some(self.codes[j - 1]), 0, alphabet)
                        .expect("alphabet has at least two codes");
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let w = Word::from_codes(self.rank, &self.codes);
        if !self.advance() {
            self.done = true;
        }
        Some(w)
    }
}

/// Every reduced word of length `len`. Length 0 yields the empty word once;
/// rank 0 yields nothing else.
pub fn enumerate_reduced(rank: usize, len: usize) -> ReducedWords {
    let mut codes = Vec::with_capacity(len);
    let mut done = rank == 0 && len > 0;
    if !done {
        for j in 0..len {
            let prev = if j == 0 { None } else { Some(codes[j - 1]) };
            match ReducedWords::first_valid(prev, 0, 2 * rank) {
                Some(c) => codes.push(c),
                None => {
                    done = true;
                    break;
                }
            }
        }
    }
    ReducedWords { rank, codes, done }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub rank: usize,
    pub max_length: usize,
    pub words_checked: u64,
    /// Shortest, then lexicographically least, nontrivial reduced word
    /// evaluating to the identity.
    pub witness: Option<Word>,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.witness.is_none()
    }
}

/// Exact 2x2 accumulator: `i128` while entries fit, BigInt afterwards.
#[derive(Clone)]
enum Acc {
    Small([i128; 4]),
    Big(IntMat2),
}

impl Acc {
    fn mul(&self, rhs: &Gen) -> Acc {
        if let (Acc::Small(l), Some(r)) = (self, rhs.small.as_ref()) {
            if let Some(e) = mul_i128(l, r) {
                return Acc::Small(e);
            }
        }
        Acc::Big(self.to_big().mul(&rhs.big))
    }

    fn to_big(&self) -> IntMat2 {
        match self {
            Acc::Small(e) => IntMat2::from_entries_unchecked(e.map(BigInt::from)),
            Acc::Big(m) => m.clone(),
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            Acc::Small(e) => *e == [1, 0, 0, 1],
            Acc::Big(m) => m.is_identity(),
        }
    }
}

#[inline]
fn mul_i128(l: &[i128; 4], r: &[i128; 4]) -> Option<[i128; 4]> {
    let dot = |a: i128, b: i128, c: i128, d: i128| a.checked_mul(b)?.checked_add(c.checked_mul(d)?);
    Some([
        dot(l[0], r[0], l[1], r[2])?,
        dot(l[0], r[1], l[1], r[3])?,
        dot(l[2], r[0], l[3], r[2])?,
        dot(l[2], r[1], l[3], r[3])?,
    ])
}

struct Gen {
    big: IntMat2,
    small: Option<[i128; 4]>,
}

struct Scan<'a> {
    rank: usize,
    max_len: usize,
    letters: &'a [Gen],
    codes: Vec<usize>,
    checked: u64,
    witness: Option<Word>,
}

impl Scan<'_> {
    fn visit(&mut self, acc: &Acc) {
        self.checked += 1;
        if acc.is_identity() {
            let w = Word::from_codes(self.rank, &self.codes);
            if self
                .witness
                .as_ref()
                .map_or(true, |cur| w.cmp_shortlex(cur) == Ordering::Less)
            {
                self.witness = Some(w);
            }
        }
        if self.codes.len() == self.max_len {
            return;
        }
        let last = *self.codes.last().expect("visit is called on nonempty words");
        for code in 0..self.letters.len() {
            if code == last ^ 1 {
                continue;
            }
            let next = acc.mul(&self.letters[code]);
            self.codes.push(code);
            self.visit(&next);
            self.codes.pop();
        }
    }
}

fn scan_subtree(rank: usize, max_len: usize, letters: &[Gen], first: usize) -> (u64, Option<Word>) {
    let mut scan = Scan {
        rank,
        max_len,
        letters,
        codes: alloc::vec![first],
        checked: 0,
        witness: None,
    };
    let start = Acc::Small([1, 0, 0, 1]).mul(&letters[first]);
    scan.visit(&start);
    (scan.checked, scan.witness)
}

/// Checks every nontrivial reduced word of length `1..=max_length` for an
/// identity evaluation, reusing prefix products along the depth-first tree.
pub fn freeness_scan(images: &[IntMat2], max_length: usize) -> FreenessReport {
    let rank = images.len();
    let letters: Vec<Gen> = images
        .iter()
        .flat_map(|m| [m.clone(), m.inverse()])
        .map(|big| Gen {
            small: big.to_i128(),
            big,
        })
        .collect();
    if max_length == 0 || rank == 0 {
        return FreenessReport {
            rank,
            max_length,
            words_checked: 0,
            witness: None,
        };
    }

    #[cfg(feature = "parallel")]
    let parts: Vec<(u64, Option<Word>)> = {
        use rayon::prelude::*;
        (0..letters.len())
            .into_par_iter()
            .map(|first| scan_subtree(rank, max_length, &letters, first))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(u64, Option<Word>)> = (0..letters.len())
        .map(|first| scan_subtree(rank, max_length, &letters, first))
        .collect();

    let mut words_checked = 0;
    let mut witness: Option<Word> = None;
    for (n, w) in parts {
        words_checked += n;
        if let Some(w) = w {
            if witness
                .as_ref()
                .map_or(true, |cur| w.cmp_shortlex(cur) == Ordering::Less)
            {
                witness = Some(w);
            }
        }
    }
    FreenessReport {
        rank,
        max_length,
        words_checked,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::canonical_generators;

    fn w(rank: usize, pairs: &[(usize, i8)]) -> Word {
        Word::from_pairs(rank, pairs).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&w(1, &[(0, 1), (0, -1)])).is_empty());
        assert!(reduce(&Word::empty(3)).is_empty());
        assert_eq!(
            reduce(&w(2, &[(0, 1), (1, 1), (1, -1), (0, 1)])),
            w(2, &[(0, 1), (0, 1)])
        );
        // nested cancellation
        assert!(reduce(&w(2, &[(0, 1), (1, 1), (1, -1), (0, -1)])).is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let g = canonical_generators();
        let imgs = [g.a.clone(), g.b.clone(), g.c.clone()];
        assert!(evaluate(&Word::empty(3), &imgs).unwrap().is_identity());
        let ab = evaluate(&w(3, &[(0, 1), (1, 1)]), &imgs).unwrap();
        assert_eq!(ab, IntMat2::from_i64(17, 4, 4, 1).unwrap());
        let cancel = w(3, &[(0, 1), (0, -1), (1, 1)]);
        assert_eq!(evaluate(&cancel, &imgs).unwrap(), g.b);
        assert_eq!(
            evaluate(&w(3, &[(0, 1)]), &imgs[..2]),
            Err(WordError::RankMismatch { word: 3, images: 2 })
        );
    }

    #[test]
    fn bad_generator_index() {
        assert_eq!(
            Word::from_pairs(2, &[(2, 1)]),
            Err(WordError::Generator { index: 2, rank: 2 })
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reduced(3, 1).count(), 6);
        assert_eq!(enumerate_reduced(3, 2).count(), 30);
        assert_eq!(enumerate_reduced(2, 3).count(), 36);
        assert_eq!(enumerate_reduced(0, 3).count(), 0);
        assert_eq!(reduced_word_count(3, 2), 30);
    }

    #[test]
    fn enumeration_is_lexicographic_and_reduced() {
        let words: Vec<Word> = enumerate_reduced(2, 3).collect();
        assert!(words.iter().all(Word::is_reduced));
        assert!(words
            .windows(2)
            .all(|p| p[0].cmp_shortlex(&p[1]) == Ordering::Less));
        assert_eq!(words[0], w(2, &[(0, 1), (0, 1), (0, 1)]));
        assert_eq!(words[35], w(2, &[(1, -1), (1, -1), (1, -1)]));
    }

    #[test]
    fn duplicated_generator_is_refuted() {
        let g = canonical_generators();
        let r = freeness_scan(&[g.a.clone(), g.a.clone()], 2);
        assert_eq!(r.witness, Some(w(2, &[(0, 1), (1, -1)])));
        assert_eq!(r.words_checked, 4 + 12);
        assert!(!r.is_free());
    }

    #[test]
    fn small_scans() {
        let g = canonical_generators();
        let r = freeness_scan(&[g.a.clone(), g.b.clone(), g.c.clone()], 2);
        assert_eq!(r.words_checked, 36);
        assert!(r.is_free());
        // x has infinite order, but x and x^2 commute
        let r = freeness_scan(&[g.x.clone(), g.a.clone()], 3);
        assert_eq!(r.witness, Some(w(2, &[(0, 1), (0, 1), (1, -1)])));
    }

    #[test]
    fn torsion_is_detected() {
        // [[0,-1],[1,0]] has order 4
        let s = IntMat2::from_i64(0, -1, 1, 0).unwrap();
        let r = freeness_scan(&[s], 6);
        assert_eq!(r.witness, Some(w(1, &[(0, 1); 4])));
    }

    #[test]
    fn big_integer_fallback_matches_direct_evaluation() {
        // entries overflow i128 well before length 40
        let g = canonical_generators();
        let imgs = [g.c.clone()];
        let long = Word::from_pairs(1, &[(0, 1); 40]).unwrap();
        let direct = evaluate(&long, &imgs).unwrap();
        assert!(direct.to_i128().is_none());
        let gen = Gen {
            small: g.c.to_i128(),
            big: g.c.clone(),
        };
        let mut acc = Acc::Small([1, 0, 0, 1]);
        for _ in 0..40 {
            acc = acc.mul(&gen);
        }
        assert_eq!(acc.to_big(), direct);
    }

    #[test]
    fn display() {
        let word = w(3, &[(0, 1), (2, -1)]);
        assert_eq!(word.display_with(&["a", "b", "c"]), "a*c^-1");
        assert_eq!(word.to_string(), "g0*g2^-1");
        assert_eq!(Word::empty(2).to_string(), "1");
    }
}
