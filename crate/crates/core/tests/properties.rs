//! Randomized laws over catalog entries and conjugated, summed random
//! factorizations. Every suite runs at least 200 cases.

mod common;

use common::{base_pool, check_laws, conjugate, f13, random_mf, random_poly, RANDOM_RINGS};
use mfann::annihilator::annihilator_truncated;
use mfann::catalog::Ring;
use mfann::field::Field;
use mfann::ideal::{intersect_at, truncate_ideal};
use mfann::mf::MatrixFactorization;
use mfann::{IdealSpec, Polynomial, PrimeField, TruncatedAlgebra};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: u32 = 200;

fn instance(seed: u64, ring_ix: usize) -> (MatrixFactorization<PrimeField>, MatrixFactorization<PrimeField>, Polynomial<PrimeField>, u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ring, level) = RANDOM_RINGS[ring_ix % RANDOM_RINGS.len()];
    let mf = random_mf(&mut rng, ring);
    let other = random_mf(&mut rng, ring);
    let probe = random_poly(&mut rng, mf.spec());
    (mf, other, probe, level)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, ..ProptestConfig::default() })]

    #[test]
    fn random_factorizations_are_valid(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, _, _) = instance(seed, ring);
        prop_assert!(mf.is_valid(), "{}", mf.label());
        prop_assert!(mf.direct_sum(&other).unwrap().is_valid());
        prop_assert!(mf.swap().is_valid());
    }

    #[test]
    fn syzygy_invariance(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, probe, level) = instance(seed, ring);
        prop_assert!(check_laws(&mf, &other, &probe, level).swap, "{}", mf.label());
    }

    #[test]
    fn direct_sum_law(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, probe, level) = instance(seed, ring);
        prop_assert!(check_laws(&mf, &other, &probe, level).direct_sum, "{} + {}", mf.label(), other.label());
    }

    #[test]
    fn truncation_monotonicity(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, probe, level) = instance(seed, ring);
        prop_assert!(check_laws(&mf, &other, &probe, level).monotone, "{}", mf.label());
    }

    #[test]
    fn row_col_bound(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, probe, level) = instance(seed, ring);
        prop_assert!(check_laws(&mf, &other, &probe, level).row_col, "{}", mf.label());
    }

    #[test]
    fn witness_agrees_with_truncation(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, other, probe, level) = instance(seed, ring);
        prop_assert!(check_laws(&mf, &other, &probe, level).witness_agrees, "{}", mf.label());
    }

    #[test]
    fn conjugation_preserves_annihilator(seed in any::<u64>(), ring in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ring, level) = RANDOM_RINGS[ring];
        let pool = base_pool(ring);
        let base = &pool[rng.gen_range(0..pool.len())];
        let conj = conjugate(&mut rng, base);
        prop_assert!(conj.is_valid());
        let alg = TruncatedAlgebra::build(base.spec(), level).unwrap();
        prop_assert_eq!(
            annihilator_truncated(&conj, &alg).unwrap().subspace,
            annihilator_truncated(base, &alg).unwrap().subspace,
            "{}", base.label()
        );
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), ring in 0usize..3) {
        let (mf, _, _, _) = instance(seed, ring);
        let js = serde_json::to_string(&mf.to_json()).unwrap();
        let back = MatrixFactorization::from_json(&f13(), &serde_json::from_str(&js).unwrap()).unwrap();
        prop_assert_eq!(back, mf);
    }

    #[test]
    fn polynomial_ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = Ring::AInf2.spec(&f13()).unwrap();
        let (a, b, c) = (random_poly(&mut rng, &spec), random_poly(&mut rng, &spec), random_poly(&mut rng, &spec));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(spec.poly(&spec.fmt_poly(&a)).unwrap(), a);
    }

    #[test]
    fn truncated_multiplication_is_commutative_and_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = Ring::DInf1.spec(&f13()).unwrap();
        let alg = TruncatedAlgebra::build(&spec, 6).unwrap();
        let (a, b, c) = (random_poly(&mut rng, &spec), random_poly(&mut rng, &spec), random_poly(&mut rng, &spec));
        let (va, vb, vc) = (alg.reduce(&a), alg.reduce(&b), alg.reduce(&c));
        prop_assert_eq!(alg.multiply(&va, &vb), alg.multiply(&vb, &va));
        prop_assert_eq!(alg.multiply(&alg.multiply(&va, &vb), &vc), alg.multiply(&va, &alg.multiply(&vb, &vc)));
        prop_assert_eq!(alg.reduce(&(&a * &b)), alg.multiply(&va, &vb));
    }

    #[test]
    fn intersection_lies_in_both(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = Ring::AInf1.spec(&f13()).unwrap();
        let alg = TruncatedAlgebra::build(&spec, 6).unwrap();
        let a = IdealSpec::new(&spec, vec![random_poly(&mut rng, &spec), random_poly(&mut rng, &spec)], None).unwrap();
        let b = IdealSpec::new(&spec, vec![random_poly(&mut rng, &spec)], None).unwrap();
        let meet = intersect_at(&a, &b, &alg).unwrap().subspace;
        prop_assert!(meet.is_subspace_of(&truncate_ideal(&a, &alg).unwrap()).unwrap());
        prop_assert!(meet.is_subspace_of(&truncate_ideal(&b, &alg).unwrap()).unwrap());
    }
}

#[test]
fn scalar_units_do_not_change_annihilators() {
    let k = f13();
    for ring in [Ring::AInf1, Ring::DInf1] {
        let alg = TruncatedAlgebra::build(&ring.spec(&k).unwrap(), 6).unwrap();
        for e in ring.entries(&k, 3).unwrap() {
            let c = k.from_i64(7);
            let c_inv = k.inv(&c).unwrap();
            let spec = e.mf.spec();
            let scaled = MatrixFactorization::new(
                spec,
                e.mf.phi().scale(&Polynomial::constant(&k, spec.nvars(), c.clone())),
                e.mf.psi().scale(&Polynomial::constant(&k, spec.nvars(), c_inv)),
                "scaled",
            )
            .unwrap();
            assert_eq!(
                annihilator_truncated(&scaled, &alg).unwrap().subspace,
                annihilator_truncated(&e.mf, &alg).unwrap().subspace
            );
        }
    }
}
