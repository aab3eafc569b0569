use proptest::prelude::*;
use sl2act_core::cayley::{enumerate_group, walk_operator};
use sl2act_core::dynamics::{
    build_truncation, Cocycle, CyclicClosure, Move, Point, ResidueClass, SkewProductSystem, TruncatedProduct,
};
use sl2act_core::sl2::{canonical_generators, GeneratorSet, IntMat2, Prime};
use sl2act_core::words::{
    enumerate_reduced, evaluate, freeness_scan, reduce, reduced_word_count, Letter, Word,
};

const PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 101];

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len).prop_map(|v| {
        v.into_iter()
            .map(|(g, inv)| Letter::new(g, if inv { -1 } else { 1 }))
            .collect()
    })
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(rank, max_len).prop_map(move |l| Word::new(rank, l).unwrap())
}

fn abc() -> Vec<IntMat2> {
    canonical_generators().set(GeneratorSet::ABC)
}

proptest! {
    #[test]
    fn reduction_is_homomorphic(u in word(3, 12), v in word(3, 12), pi in 0..PRIMES.len()) {
        let p = Prime::new(PRIMES[pi]).unwrap();
        let images = abc();
        let mu = evaluate(&u, &images).unwrap();
        let mv = evaluate(&v, &images).unwrap();
        prop_assert_eq!(mu.mul(&mv).reduce_mod(p), mu.reduce_mod(p).mul(&mv.reduce_mod(p)));
        prop_assert_eq!(mu.determinant(), 1.into());
        prop_assert_eq!(mu.reduce_mod(p).determinant(), 1);
    }

    #[test]
    fn inverse_is_an_involution(w in word(3, 16)) {
        let m = evaluate(&w, &abc()).unwrap();
        prop_assert_eq!(m.inverse().inverse(), m.clone());
        prop_assert!(m.mul(&m.inverse()).is_identity());
        prop_assert_eq!(evaluate(&w.inverse(), &abc()).unwrap(), m.inverse());
    }

    #[test]
    fn free_reduction_is_sound(u in word(3, 20), v in word(3, 20)) {
        let images = abc();
        let r = reduce(&u);
        prop_assert!(r.is_reduced());
        prop_assert!(r.len() <= u.len());
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert_eq!(evaluate(&r, &images).unwrap(), evaluate(&u, &images).unwrap());
        prop_assert!(reduce(&u.concat(&u.inverse())).is_empty());
        prop_assert_eq!(
            evaluate(&u.concat(&v), &images).unwrap(),
            evaluate(&u, &images).unwrap().mul(&evaluate(&v, &images).unwrap())
        );
    }

    #[test]
    fn freeness_scan_is_monotone(picks in prop::collection::vec(0usize..6, 2), len in 1usize..5) {
        let g = canonical_generators();
        let pool = [
            g.a.clone(),
            g.b.clone(),
            g.c.clone(),
            g.a.mul(&g.a),
            g.a.inverse(),
            IntMat2::identity(),
        ];
        let images: Vec<IntMat2> = picks.iter().map(|&i| pool[i].clone()).collect();
        let short = freeness_scan(&images, len);
        let long = freeness_scan(&images, len + 1);
        if let Some(w) = &short.witness {
            prop_assert!(w.len() <= len);
            prop_assert_eq!(long.witness.as_ref(), Some(w));
            prop_assert!(evaluate(w, &images).unwrap().is_identity());
        } else {
            prop_assert!(long.words_checked > short.words_checked);
        }
    }

    #[test]
    fn walk_operator_is_self_adjoint_and_stochastic(
        pi in 0usize..3,
        set in 0usize..3,
        f in prop::collection::vec(-1.0f64..1.0, 1320),
        g in prop::collection::vec(-1.0f64..1.0, 1320),
    ) {
        let p = Prime::new([5, 7, 11][pi]).unwrap();
        let set = [GeneratorSet::A, GeneratorSet::AB, GeneratorSet::ABC][set];
        let table = enumerate_group(p, &canonical_generators().set(set)).unwrap();
        let op = walk_operator(&table);
        let n = op.size();
        let (f, g) = (&f[..n], &g[..n]);
        let mut af = vec![0.0; n];
        let mut ag = vec![0.0; n];
        op.apply(f, &mut af);
        op.apply(g, &mut ag);
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        prop_assert!((dot(&af, g) - dot(f, &ag)).abs() < 1e-9);
        let ones = vec![1.0; n];
        let mut a1 = vec![0.0; n];
        op.apply(&ones, &mut a1);
        prop_assert!(a1.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }
}

fn system(seed: u64) -> SkewProductSystem {
    let g = canonical_generators();
    let p = |v| Prime::new(v).unwrap();
    let base: TruncatedProduct =
        build_truncation(ResidueClass::One, &[p(5)], &g.set(GeneratorSet::ABC), 1 << 20).unwrap();
    let fiber = build_truncation(ResidueClass::Three, &[p(3)], &g.set(GeneratorSet::AB), 1 << 20).unwrap();
    let order = CyclicClosure::new(&base, base.project(&g.c)).unwrap().order();
    let phi = Cocycle::seeded_random(order, &fiber, seed);
    SkewProductSystem::new(base, fiber, &g, phi).unwrap()
}

fn moves(max_len: usize) -> impl Strategy<Value = Vec<Move>> {
    prop::collection::vec(prop::sample::select(Move::ALL.to_vec()), 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_are_mutually_inverse(seed in 0u64..1000, x in 0u64..120, y in 0u64..24, word in moves(30)) {
        let sys = system(seed);
        let p = Point { base: x, fiber: y };
        let inverse: Vec<Move> = word.iter().rev().map(|m| m.inverse()).collect();
        prop_assert_eq!(sys.apply_word(&inverse, sys.apply_word(&word, p)), p);
    }

    #[test]
    fn base_factor_is_a_tower(seed in 0u64..1000, x in 0u64..120, y1 in 0u64..24, y2 in 0u64..24, word in moves(50)) {
        let sys = system(seed);
        let q1 = sys.apply_word(&word, Point { base: x, fiber: y1 });
        let q2 = sys.apply_word(&word, Point { base: x, fiber: y2 });
        prop_assert_eq!(q1.base, q2.base);
        prop_assert_eq!(q1.fiber == q2.fiber, y1 == y2);
    }

    #[test]
    fn cocycle_is_read_off_the_power_of_c(seed in 0u64..1000, x in 0u64..120, t in 0usize..12) {
        let sys = system(seed);
        let cl = sys.closure();
        let (rep, s) = cl.factor(x);
        prop_assert_eq!(sys.base().mul(rep, cl.power(s)), x);
        prop_assert_eq!(sys.phi(x), sys.cocycle().at_power(s));
        let shifted = sys.base().mul(rep, cl.power((s + t) % cl.order()));
        prop_assert_eq!(sys.phi(shifted), sys.cocycle().at_power((s + t) % cl.order()));
    }
}

#[test]
fn reduced_word_counts() {
    for rank in 1..=3 {
        for len in 0..=8u32 {
            let words: Vec<Word> = enumerate_reduced(rank, len as usize).collect();
            let expected = if len == 0 {
                1
            } else {
                2 * rank as u128 * (2 * rank as u128 - 1).pow(len - 1)
            };
            assert_eq!(reduced_word_count(rank, len), expected);
            assert_eq!(words.len() as u128, expected, "rank {rank} length {len}");
            assert!(words.iter().all(|w| w.is_reduced() && w.len() == len as usize));
            assert!(words.windows(2).all(|w| w[0].cmp_shortlex(&w[1]).is_lt()));
        }
    }
}
