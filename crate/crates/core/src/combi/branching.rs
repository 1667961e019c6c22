use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::products::subset_convolve;
use crate::ring::RationalRing;
use crate::setfn::SetFunction;

/// Leaf values `f` and the split probability `α` of a process that either
/// stops at `S` with value `f(S)` or splits `S` into a uniformly random
/// ordered pair of nonempty parts and recurses on both.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingSpec {
    f: SetFunction<BigRational>,
    alpha: BigRational,
}

impl BranchingSpec {
    pub fn new(f: SetFunction<BigRational>, alpha: BigRational) -> Result<Self> {
        if alpha < BigRational::zero() || alpha > BigRational::one() {
            return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [0, 1]")));
        }
        Ok(BranchingSpec { f, alpha })
    }

    pub fn f(&self) -> &SetFunction<BigRational> {
        &self.f
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

/// Expected product of leaf values,
///
/// ```text
/// g(S) = (1 − α) f(S) + α / (2^|S| − 2) · Σ_{∅⊂T⊂S} g(T) g(S∖T),
/// ```
///
/// with `g = f` on sets of at most one element. Level `s` convolves `g`
/// restricted to sizes `1..s` with itself, which supplies exactly the
/// proper splits of every `s`-set.
pub fn branching_expectation(spec: &BranchingSpec) -> Result<SetFunction<BigRational>> {
    let f = &spec.f;
    let alpha = &spec.alpha;
    let stay = BigRational::one() - alpha;
    let mut g = f.clone();
    if alpha.is_zero() {
        return Ok(g);
    }
    for s in 2..=f.n() {
        let h = SetFunction::from_fn(f.ground(), |t| {
            if (1..s).contains(&t.len()) {
                g.get(t).clone()
            } else {
                BigRational::zero()
            }
        });
        let conv = subset_convolve(&RationalRing, &h, &h)?;
        let splits = BigInt::from((1u64 << s) - 2);
        let scale = alpha / BigRational::from_integer(splits);
        for (i, v) in g.values_mut().iter_mut().enumerate() {
            if (i as u32).count_ones() as usize == s {
                *v = &stay * &f.values()[i] + &scale * &conv.values()[i];
            }
        }
    }
    Ok(g)
}
