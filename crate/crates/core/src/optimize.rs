//! Min-sum and max-sum products through an integer embedding.
//!
//! A finite weight `v` becomes the power `B^(v − shift)` of a power-of-two
//! digit base `B = 2^b`, infinities become the ring zero, and the ordinary
//! product is taken over big integers. Digit `r` of the result at `S` then
//! counts the pairs in the product's pair set whose shifted weights sum to
//! `r`; the optimum is the lowest (min-sum) or highest (max-sum) nonzero
//! digit. `b` is chosen so that no count can reach `B`: `n + 1` bits when
//! each `S` has at most `2ⁿ` pairs (`Subset`, `Xor`), otherwise enough bits
//! to exceed `3ⁿ`.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mask::{GroundSet, Mask};
use crate::oracle::visit_pairs;
use crate::products::{self, ProductMode};
use crate::ring::BigIntRing;
use crate::setfn::SetFunction;

/// An integer weight extended with both infinities. Min-sum uses `PosInf`
/// as its absorbing element, max-sum uses `NegInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedWeight {
    NegInf,
    Finite(i64),
    PosInf,
}

impl ExtendedWeight {
    #[inline]
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtendedWeight::Finite(v) => Some(v),
            _ => None,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedWeight::Finite(_))
    }

    pub fn negate(self) -> ExtendedWeight {
        match self {
            ExtendedWeight::NegInf => ExtendedWeight::PosInf,
            ExtendedWeight::PosInf => ExtendedWeight::NegInf,
            ExtendedWeight::Finite(v) => ExtendedWeight::Finite(-v),
        }
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedWeight::NegInf => write!(f, "-inf"),
            ExtendedWeight::PosInf => write!(f, "inf"),
            ExtendedWeight::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ExtendedWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "+inf" => Ok(ExtendedWeight::PosInf),
            "-inf" => Ok(ExtendedWeight::NegInf),
            _ => s
                .parse::<i64>()
                .map(ExtendedWeight::Finite)
                .map_err(|_| Error::InvalidArgument(format!("bad weight `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptMode {
    MinSum,
    MaxSum,
}

impl OptMode {
    /// The semiring zero: no feasible pair.
    pub fn absorbing(self) -> ExtendedWeight {
        match self {
            OptMode::MinSum => ExtendedWeight::PosInf,
            OptMode::MaxSum => ExtendedWeight::NegInf,
        }
    }

    /// Whether `a` is strictly better than `b`.
    #[inline]
    pub fn prefers(self, a: ExtendedWeight, b: ExtendedWeight) -> bool {
        match self {
            OptMode::MinSum => a < b,
            OptMode::MaxSum => a > b,
        }
    }

    pub fn dual(self) -> OptMode {
        match self {
            OptMode::MinSum => OptMode::MaxSum,
            OptMode::MaxSum => OptMode::MinSum,
        }
    }
}

impl FromStr for OptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(OptMode::MinSum),
            "max" => Ok(OptMode::MaxSum),
            _ => Err(Error::InvalidArgument(format!("unknown optimisation mode `{s}`"))),
        }
    }
}

/// A set function into extended integers with a declared bound `M` on the
/// magnitude of its finite entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedWeightFunction {
    ground: GroundSet,
    weights: Vec<ExtendedWeight>,
    bound: u64,
}

impl ExtendedWeightFunction {
    pub fn new(ground: GroundSet, weights: Vec<ExtendedWeight>, bound: u64) -> Result<Self> {
        if weights.len() != ground.size() {
            return Err(Error::LengthMismatch {
                expected: ground.size(),
                actual: weights.len(),
            });
        }
        if let Some(v) = weights
            .iter()
            .filter_map(|w| w.finite())
            .find(|v| v.unsigned_abs() > bound)
        {
            return Err(Error::BoundViolation { value: v, bound });
        }
        Ok(ExtendedWeightFunction { ground, weights, bound })
    }

    /// Declares the smallest bound that fits the finite entries.
    pub fn with_inferred_bound(ground: GroundSet, weights: Vec<ExtendedWeight>) -> Result<Self> {
        let bound = weights
            .iter()
            .filter_map(|w| w.finite())
            .map(i64::unsigned_abs)
            .max()
            .unwrap_or(0);
        Self::new(ground, weights, bound)
    }

    pub fn from_fn(ground: GroundSet, bound: u64, f: impl FnMut(Mask) -> ExtendedWeight) -> Result<Self> {
        Self::new(ground, ground.masks().map(f).collect(), bound)
    }

    #[inline]
    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.ground.n()
    }

    #[inline]
    pub fn bound(&self) -> u64 {
        self.bound
    }

    #[inline]
    pub fn get(&self, mask: Mask) -> ExtendedWeight {
        self.weights[mask.index()]
    }

    pub fn weights(&self) -> &[ExtendedWeight] {
        &self.weights
    }

    /// `S ↦ −f(S)`, swapping the infinities.
    pub fn negate(&self) -> Self {
        ExtendedWeightFunction {
            ground: self.ground,
            weights: self.weights.iter().map(|w| w.negate()).collect(),
            bound: self.bound,
        }
    }

    /// Adds `c` to every finite entry.
    pub fn translate(&self, c: i64) -> Self {
        ExtendedWeightFunction {
            ground: self.ground,
            weights: self
                .weights
                .iter()
                .map(|w| match w {
                    ExtendedWeight::Finite(v) => ExtendedWeight::Finite(v + c),
                    other => *other,
                })
                .collect(),
            bound: self.bound + c.unsigned_abs(),
        }
    }

    fn check_mode(&self, mode: OptMode) -> Result<()> {
        let wrong = match mode {
            OptMode::MinSum => ExtendedWeight::NegInf,
            OptMode::MaxSum => ExtendedWeight::PosInf,
        };
        if self.weights.contains(&wrong) {
            return Err(Error::InvalidArgument(format!(
                "{wrong} is not allowed in {mode:?} inputs"
            )));
        }
        Ok(())
    }

    fn min_finite(&self) -> Option<i64> {
        self.weights.iter().filter_map(|w| w.finite()).min()
    }
}

/// The embedded big-integer product, before digit scanning.
#[derive(Debug, Clone)]
pub struct EmbeddedProduct {
    mode: OptMode,
    digit_bits: u64,
    offset: i64,
    bound: u64,
    values: SetFunction<BigInt>,
}

impl EmbeddedProduct {
    /// Bits per digit of the embedding base.
    pub fn digit_bits(&self) -> u64 {
        self.digit_bits
    }

    /// Number of pairs whose shifted weights sum to `r` at `s`.
    pub fn digit(&self, s: Mask, r: u64) -> BigInt {
        let v = self.values.get(s);
        let mask = (BigInt::one() << self.digit_bits) - 1u32;
        (v >> (r * self.digit_bits)) & mask
    }

    /// Total shift removed before embedding; digit `r` stands for the weight
    /// `r + offset`.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn optimum(&self, s: Mask) -> ExtendedWeight {
        let v = self.values.get(s);
        debug_assert!(v.sign() != Sign::Minus, "embedded counts are nonnegative");
        if v.is_zero() {
            return self.mode.absorbing();
        }
        let r = match self.mode {
            OptMode::MinSum => v.trailing_zeros().expect("nonzero") / self.digit_bits,
            OptMode::MaxSum => (v.bits() - 1) / self.digit_bits,
        };
        ExtendedWeight::Finite(r as i64 + self.offset)
    }

    pub fn to_function(&self) -> Result<ExtendedWeightFunction> {
        let ground = self.values.ground();
        ExtendedWeightFunction::new(ground, ground.masks().map(|s| self.optimum(s)).collect(), self.bound)
    }
}

fn digit_bits(mode: ProductMode, n: usize) -> u64 {
    match mode {
        ProductMode::Subset | ProductMode::Xor => n as u64 + 1,
        _ => BigInt::from(3u32).pow(n as u32).bits(),
    }
}

fn embed(f: &ExtendedWeightFunction, shift: i64, bits: u64) -> SetFunction<BigInt> {
    SetFunction::from_fn(f.ground, |s| match f.get(s) {
        ExtendedWeight::Finite(v) => BigInt::one() << ((v - shift) as u64 * bits),
        _ => BigInt::zero(),
    })
}

/// Runs the embedded product without reading out optima.
pub fn embed_product(
    f: &ExtendedWeightFunction,
    g: &ExtendedWeightFunction,
    mode: OptMode,
    product: ProductMode,
) -> Result<EmbeddedProduct> {
    f.ground.check_same(g.ground)?;
    f.check_mode(mode)?;
    g.check_mode(mode)?;
    if let ProductMode::ExactIntersection(l) = product {
        if l > f.n() {
            return Err(Error::RankOutOfRange { rank: l, max: f.n() });
        }
    }
    let bits = digit_bits(product, f.n());
    // Shifting by the smallest finite entry keeps every exponent nonnegative
    // and the digit range no wider than the spread of the inputs.
    let shift_f = f.min_finite().unwrap_or(0);
    let shift_g = g.min_finite().unwrap_or(0);
    let ef = embed(f, shift_f, bits);
    let eg = embed(g, shift_g, bits);
    let values = products::product(&BigIntRing, &ef, &eg, product)?;
    Ok(EmbeddedProduct {
        mode,
        digit_bits: bits,
        offset: shift_f + shift_g,
        bound: f.bound + g.bound,
        values,
    })
}

/// `S ↦ opt_{T⊆S} f(T) + g(S∖T)`.
pub fn opt_convolve(
    f: &ExtendedWeightFunction,
    g: &ExtendedWeightFunction,
    mode: OptMode,
) -> Result<ExtendedWeightFunction> {
    opt_product(f, g, mode, ProductMode::Subset)
}

/// Optimum of `f(U) + g(V)` over the pair set of `product`.
pub fn opt_product(
    f: &ExtendedWeightFunction,
    g: &ExtendedWeightFunction,
    mode: OptMode,
    product: ProductMode,
) -> Result<ExtendedWeightFunction> {
    embed_product(f, g, mode, product)?.to_function()
}

/// The first pair `(U, V)` of the product's pair set at `s`, in
/// [`visit_pairs`] order, with `f(U) + g(V) = target`.
pub fn opt_witness(
    f: &ExtendedWeightFunction,
    g: &ExtendedWeightFunction,
    product: ProductMode,
    s: Mask,
    target: ExtendedWeight,
) -> Result<(Mask, Mask)> {
    f.ground.check_same(g.ground)?;
    let no_witness = || Error::NoWitness {
        mask: s.bits(),
        target: target.to_string(),
    };
    let goal = target.finite().ok_or_else(no_witness)?;
    let found = visit_pairs(product, f.ground, s, |u, v| match (f.get(u), g.get(v)) {
        (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) if a + b == goal => ControlFlow::Break((u, v)),
        _ => ControlFlow::Continue(()),
    });
    match found {
        ControlFlow::Break(pair) => Ok(pair),
        ControlFlow::Continue(()) => Err(no_witness()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::direct_opt_product;
    use proptest::prelude::*;
    use ExtendedWeight::{Finite as Fi, NegInf, PosInf};

    fn ewf(v: &[ExtendedWeight]) -> ExtendedWeightFunction {
        let n = v.len().trailing_zeros() as usize;
        ExtendedWeightFunction::with_inferred_bound(GroundSet::new(n).unwrap(), v.to_vec()).unwrap()
    }

    fn fin(v: &[i64]) -> ExtendedWeightFunction {
        ewf(&v.iter().map(|&x| Fi(x)).collect::<Vec<_>>())
    }

    #[test]
    fn convolve_examples() {
        let f = fin(&[0, 1, 2, 5]);
        assert_eq!(
            opt_convolve(&f, &f, OptMode::MinSum).unwrap().weights(),
            &[Fi(0), Fi(1), Fi(2), Fi(3)]
        );
        let f = fin(&[0, 3, 3, 1]);
        assert_eq!(
            opt_convolve(&f, &f, OptMode::MaxSum).unwrap().weights(),
            &[Fi(0), Fi(3), Fi(3), Fi(6)]
        );
        let f = ewf(&[PosInf, Fi(1), Fi(2), PosInf]);
        assert_eq!(
            opt_convolve(&f, &f, OptMode::MinSum).unwrap().weights(),
            &[PosInf, PosInf, PosInf, Fi(3)]
        );
    }

    #[test]
    fn product_examples() {
        let f = fin(&[3, 1, 2, 5]);
        let cover = opt_product(&f, &f, OptMode::MinSum, ProductMode::Cover).unwrap();
        assert_eq!(cover.get(Mask(1)), Fi(2));
        assert_eq!(opt_convolve(&f, &f, OptMode::MinSum).unwrap().get(Mask(1)), Fi(4));

        let f = fin(&[0, 1, 2, 5]);
        let exact = opt_product(&f, &f, OptMode::MinSum, ProductMode::ExactIntersection(1)).unwrap();
        assert_eq!(exact.get(Mask(1)), Fi(2));

        let ic = opt_product(&f, &f, OptMode::MinSum, ProductMode::IntersectCover).unwrap();
        assert_eq!(ic.get(Mask::EMPTY), PosInf);
        let ic = opt_product(&f, &f, OptMode::MaxSum, ProductMode::IntersectCover).unwrap();
        assert_eq!(ic.get(Mask::EMPTY), NegInf);
    }

    #[test]
    fn negative_weights_are_shifted() {
        let f = fin(&[-3, 4, -1, 2]);
        for mode in [OptMode::MinSum, OptMode::MaxSum] {
            assert_eq!(
                opt_convolve(&f, &f, mode).unwrap(),
                direct_opt_product(&f, &f, mode, ProductMode::Subset).unwrap()
            );
        }
    }

    #[test]
    fn witness_examples() {
        let f = fin(&[0, 1, 2, 5]);
        let full = Mask(0b11);
        assert_eq!(
            opt_witness(&f, &f, ProductMode::Subset, full, Fi(3)),
            Ok((Mask(0b01), Mask(0b10)))
        );
        assert_eq!(
            opt_witness(&f, &f, ProductMode::Subset, Mask::EMPTY, Fi(0)),
            Ok((Mask::EMPTY, Mask::EMPTY))
        );
        assert!(matches!(
            opt_witness(&f, &f, ProductMode::Subset, full, Fi(2)),
            Err(Error::NoWitness { .. })
        ));
        assert!(opt_witness(&f, &f, ProductMode::Subset, full, PosInf).is_err());
    }

    #[test]
    fn bound_and_mode_checks() {
        let g = GroundSet::new(1).unwrap();
        assert_eq!(
            ExtendedWeightFunction::new(g, vec![Fi(0), Fi(9)], 8),
            Err(Error::BoundViolation { value: 9, bound: 8 })
        );
        let f = ewf(&[NegInf, Fi(1)]);
        assert!(opt_convolve(&f, &f, OptMode::MinSum).is_err());
        assert!(opt_convolve(&f, &f, OptMode::MaxSum).is_ok());
        let h = fin(&[0, 1, 2, 3]);
        assert!(matches!(
            opt_convolve(&f, &h, OptMode::MaxSum),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn weight_parsing() {
        assert_eq!("inf".parse::<ExtendedWeight>(), Ok(PosInf));
        assert_eq!("-inf".parse::<ExtendedWeight>(), Ok(NegInf));
        assert_eq!("-7".parse::<ExtendedWeight>(), Ok(Fi(-7)));
        assert!("x".parse::<ExtendedWeight>().is_err());
        assert_eq!(Fi(-7).to_string(), "-7");
        assert_eq!(PosInf.to_string(), "inf");
    }

    fn arb_ewf(n: usize, m: i64, absorbing: ExtendedWeight) -> impl Strategy<Value = ExtendedWeightFunction> {
        proptest::collection::vec(prop_oneof![4 => (-m..=m).prop_map(Fi), 1 => Just(absorbing)], 1 << n)
            .prop_map(move |w| ExtendedWeightFunction::new(GroundSet::new(n).unwrap(), w, m as u64).unwrap())
    }

    fn arb_case() -> impl Strategy<Value = (ExtendedWeightFunction, ExtendedWeightFunction)> {
        (0usize..=6, 0i64..=6).prop_flat_map(|(n, m)| (arb_ewf(n, m, PosInf), arb_ewf(n, m, PosInf)))
    }

    // All pairs `(U, V)` achieving the optimum at `s`.
    fn optimal_pairs(
        f: &ExtendedWeightFunction,
        g: &ExtendedWeightFunction,
        s: Mask,
        target: ExtendedWeight,
    ) -> Vec<(Mask, Mask)> {
        let mut out = Vec::new();
        let _ = visit_pairs::<()>(ProductMode::Subset, f.ground(), s, |u, v| {
            if let (Some(a), Some(b)) = (f.get(u).finite(), g.get(v).finite()) {
                if Fi(a + b) == target {
                    out.push((u, v));
                }
            }
            ControlFlow::Continue(())
        });
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_oracle_every_mode((f, g) in arb_case(), l in 0usize..3) {
            let modes = [
                ProductMode::Subset,
                ProductMode::Cover,
                ProductMode::Pack,
                ProductMode::IntersectCover,
                ProductMode::ExactIntersection(l.min(f.n())),
                ProductMode::Xor,
            ];
            for p in modes {
                prop_assert_eq!(
                    opt_product(&f, &g, OptMode::MinSum, p).unwrap(),
                    direct_opt_product(&f, &g, OptMode::MinSum, p).unwrap()
                );
            }
        }

        #[test]
        fn duality((f, g) in arb_case()) {
            let min = opt_convolve(&f, &g, OptMode::MinSum).unwrap();
            let max = opt_convolve(&f.negate(), &g.negate(), OptMode::MaxSum).unwrap();
            prop_assert_eq!(max.negate(), min);
        }

        #[test]
        fn translation_covariance((f, g) in arb_case(), c in -5i64..=5) {
            let base = opt_convolve(&f, &g, OptMode::MinSum).unwrap();
            let moved = opt_convolve(&f.translate(c), &g, OptMode::MinSum).unwrap();
            let shifted = f.translate(c);
            for s in f.ground().masks() {
                match base.get(s) {
                    Fi(v) => {
                        prop_assert_eq!(moved.get(s), Fi(v + c));
                        prop_assert_eq!(
                            optimal_pairs(&f, &g, s, Fi(v)),
                            optimal_pairs(&shifted, &g, s, Fi(v + c))
                        );
                    }
                    other => prop_assert_eq!(moved.get(s), other),
                }
            }
        }

        #[test]
        fn digits_count_pairs((f, g) in arb_case()) {
            let emb = embed_product(&f, &g, OptMode::MinSum, ProductMode::Subset).unwrap();
            let spread = (f.bound() + g.bound()) * 2;
            for s in f.ground().masks() {
                for r in 0..=spread {
                    let weight = r as i64 + emb.offset();
                    let count = optimal_pairs(&f, &g, s, Fi(weight)).len();
                    prop_assert_eq!(emb.digit(s, r), BigInt::from(count));
                }
            }
        }
    }
}
