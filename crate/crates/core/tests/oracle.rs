//! The library's truncated annihilators against a dense brute-force oracle.

mod common;

use common::{f13, random_mf, DenseOracle, RANDOM_RINGS};
use mfann::annihilator::{annihilator_truncated, membership_truncated, Solvability};
use mfann::catalog::Ring;
use mfann::ideal::{is_m_primary, truncate_ideal, MPrimary};
use mfann::{IdealSpec, TruncatedAlgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest level the dense oracle handles quickly, per ring.
fn oracle_level(ring: Ring) -> u32 {
    match ring {
        Ring::AInf1 | Ring::DInf1 => 7,
        Ring::AInf2 => 5,
        Ring::DInf2 => 4,
    }
}

#[test]
fn ring_dimensions_match() {
    let k = f13();
    for ring in Ring::ALL {
        for level in 1..=oracle_level(ring) {
            let spec = ring.spec(&k).unwrap();
            let alg = TruncatedAlgebra::build(&spec, level).unwrap();
            assert_eq!(alg.dim(), DenseOracle::new(&spec, level).ring_dim(), "{ring} N={level}");
        }
    }
}

#[test]
fn catalog_annihilators_match() {
    let k = f13();
    for ring in Ring::ALL {
        let level = oracle_level(ring);
        let spec = ring.spec(&k).unwrap();
        let alg = TruncatedAlgebra::build(&spec, level).unwrap();
        let oracle = DenseOracle::new(&spec, level);
        for e in ring.entries(&k, 3).unwrap() {
            let ann = annihilator_truncated(&e.mf, &alg).unwrap();
            assert_eq!(ann.subspace.dim(), oracle.ann_dim(&e.mf), "{}", e.selector());
            for g in &ann.generators {
                assert!(oracle.contains(&e.mf, g), "{}: {}", e.selector(), spec.fmt_poly(g));
            }
        }
    }
}

#[test]
fn random_annihilators_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for round in 0..30 {
        let (ring, level) = RANDOM_RINGS[round % RANDOM_RINGS.len()];
        let level = level.min(5);
        let mf = random_mf(&mut rng, ring);
        let alg = TruncatedAlgebra::build(mf.spec(), level).unwrap();
        let oracle = DenseOracle::new(mf.spec(), level);
        assert_eq!(annihilator_truncated(&mf, &alg).unwrap().subspace.dim(), oracle.ann_dim(&mf), "{}", mf.label());
        let probe = common::random_poly(&mut rng, mf.spec());
        let solvable = membership_truncated(&mf, &probe, &alg).unwrap() == Solvability::Solvable;
        assert_eq!(solvable, oracle.contains(&mf, &probe), "{} with {}", mf.label(), mf.spec().fmt_poly(&probe));
    }
}

#[test]
fn coarse_truncation_merges_powers() {
    // (x, y^3) and (x, y^4) agree in R_3 and differ from R_4 on.
    let k = f13();
    let spec = Ring::AInf1.spec(&k).unwrap();
    let three = IdealSpec::parse(&spec, &["x", "y^3"]).unwrap();
    let four = IdealSpec::parse(&spec, &["x", "y^4"]).unwrap();
    for level in 3..=6 {
        let alg = TruncatedAlgebra::build(&spec, level).unwrap();
        let same = truncate_ideal(&three, &alg).unwrap() == truncate_ideal(&four, &alg).unwrap();
        let oracle = DenseOracle::new(&spec, level);
        let oracle_same = oracle.colength(three.generators()) == oracle.colength(four.generators());
        assert_eq!(same, level == 3);
        assert_eq!(oracle_same, level == 3);
    }
}

#[test]
fn colengths_match() {
    let k = f13();
    let spec = Ring::AInf1.spec(&k).unwrap();
    let x = IdealSpec::parse(&spec, &["x"]).unwrap();
    let MPrimary::NotMPrimaryEvidence { colengths } = is_m_primary(&x, 9).unwrap() else { panic!("(x) is not m-primary") };
    let expected: Vec<usize> = (1..=9).map(|n| DenseOracle::new(&spec, n).colength(x.generators())).collect();
    assert_eq!(colengths, expected);

    let spec = Ring::DInf1.spec(&k).unwrap();
    let ideal = IdealSpec::parse(&spec, &["x^2", "x*y", "y^3"]).unwrap();
    let MPrimary::MPrimary { colength, .. } = is_m_primary(&ideal, 8).unwrap() else { panic!("m-primary") };
    assert_eq!(colength, DenseOracle::new(&spec, 8).colength(ideal.generators()));
}
