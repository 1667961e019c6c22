//! Identities that tie the transforms, ring products and optimisation
//! products together through the public API.

use num_bigint::BigInt;
use proptest::prelude::*;
use subsetconv::optimize::opt_product;
use subsetconv::products::{convolve_power, cover_product, product, subset_convolve, xor_convolve};
use subsetconv::transform::{walsh_hadamard, zeta_transform};
use subsetconv::{
    BigIntRing, CheckedWord, ExtendedWeight, ExtendedWeightFunction, GroundSet, OptMode, ProductMode, SetFunction,
};

fn table(max_n: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>, usize)> {
    (0..=max_n).prop_flat_map(|n| {
        let size = 1 << n;
        (
            prop::collection::vec(-20i64..=20, size),
            prop::collection::vec(-20i64..=20, size),
            Just(n),
        )
    })
}

fn sf(n: usize, v: &[i64]) -> SetFunction<i64> {
    SetFunction::from_slice(GroundSet::new(n).unwrap(), v).unwrap()
}

fn pointwise(a: &SetFunction<i64>, b: &SetFunction<i64>) -> Vec<i64> {
    a.values().iter().zip(b.values()).map(|(x, y)| x * y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeta_diagonalises_cover((a, b, n) in table(9)) {
        let (f, g) = (sf(n, &a), sf(n, &b));
        let h = cover_product(&CheckedWord, &f, &g).unwrap();
        let zf = zeta_transform(&CheckedWord, &f).unwrap();
        let zg = zeta_transform(&CheckedWord, &g).unwrap();
        prop_assert_eq!(zeta_transform(&CheckedWord, &h).unwrap().into_values(), pointwise(&zf, &zg));
    }

    #[test]
    fn walsh_diagonalises_xor((a, b, n) in table(9)) {
        let (f, g) = (sf(n, &a), sf(n, &b));
        let h = xor_convolve(&CheckedWord, &f, &g).unwrap();
        let wf = walsh_hadamard(&CheckedWord, &f, false).unwrap();
        let wg = walsh_hadamard(&CheckedWord, &g, false).unwrap();
        prop_assert_eq!(walsh_hadamard(&CheckedWord, &h, false).unwrap().into_values(), pointwise(&wf, &wg));
    }

    #[test]
    fn word_and_bigint_rings_agree((a, b, n) in table(8)) {
        let (f, g) = (sf(n, &a), sf(n, &b));
        let (bf, bg) = (f.map(|&x| BigInt::from(x)), g.map(|&x| BigInt::from(x)));
        for mode in [ProductMode::Subset, ProductMode::Cover, ProductMode::Pack, ProductMode::IntersectCover, ProductMode::Xor] {
            let word = product(&CheckedWord, &f, &g, mode).unwrap();
            let big = product(&BigIntRing, &bf, &bg, mode).unwrap();
            prop_assert_eq!(word.map(|&x| BigInt::from(x)), big);
        }
    }

    #[test]
    fn powers_iterate_products((a, _, n) in table(7), k in 1usize..5) {
        let f = sf(n, &a);
        let mut want = f.clone();
        for _ in 1..k {
            want = subset_convolve(&CheckedWord, &want, &f).unwrap();
        }
        prop_assert_eq!(convolve_power(&CheckedWord, &f, k, ProductMode::Subset).unwrap(), want);
    }

    #[test]
    fn max_sum_is_negated_min_sum((a, b, n) in table(7)) {
        let ground = GroundSet::new(n).unwrap();
        let weight = |x: i64| if x % 5 == 0 { ExtendedWeight::PosInf } else { ExtendedWeight::Finite(x) };
        let f = ExtendedWeightFunction::new(ground, a.iter().map(|&x| weight(x)).collect(), 20).unwrap();
        let g = ExtendedWeightFunction::new(ground, b.iter().map(|&x| weight(x)).collect(), 20).unwrap();
        for mode in [ProductMode::Subset, ProductMode::Cover, ProductMode::IntersectCover] {
            let min = opt_product(&f, &g, OptMode::MinSum, mode).unwrap();
            let max = opt_product(&f.negate(), &g.negate(), OptMode::MaxSum, mode).unwrap();
            prop_assert_eq!(max, min.negate());
        }
    }
}
