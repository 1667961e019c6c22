//! Exact rings used as coefficient domains.
//!
//! A [`Ring`] is a context object: kernels receive `&R` and call its methods
//! on plain element values. This keeps elements lightweight (`i64`,
//! `BigInt`, `BigRational`) and lets [`Counting`] observe every operation of
//! an unmodified kernel. Commutativity is never assumed by the kernels.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word;

pub trait Ring: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn name(&self) -> &'static str;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) -> Result<()>;
    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem) -> Result<()>;
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// Exact division by a positive integer; fails when the quotient is not
    /// a ring element.
    fn div_exact(&self, a: &Self::Elem, divisor: u64) -> Result<Self::Elem>;

    /// `acc += a * b`.
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Result<()> {
        let p = self.mul(a, b)?;
        self.add_assign(acc, &p)
    }

    /// `dst[i] += src[i]` for every `i`.
    fn add_slice(&self, dst: &mut [Self::Elem], src: &[Self::Elem]) -> Result<()> {
        debug_assert_eq!(dst.len(), src.len());
        for (d, s) in dst.iter_mut().zip(src) {
            self.add_assign(d, s)?;
        }
        Ok(())
    }

    /// `dst[i] -= src[i]` for every `i`.
    fn sub_slice(&self, dst: &mut [Self::Elem], src: &[Self::Elem]) -> Result<()> {
        debug_assert_eq!(dst.len(), src.len());
        for (d, s) in dst.iter_mut().zip(src) {
            self.sub_assign(d, s)?;
        }
        Ok(())
    }

    /// A specialised evaluation of `S ↦ Σ_{U∪V=S, |U∩V|=ell} f(U) g(V)`,
    /// or `None` to use the generic ranked kernel.
    fn ranked_product_fast(
        &self,
        _f: &[Self::Elem],
        _g: &[Self::Elem],
        _n: usize,
        _ell: usize,
    ) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Hadamard butterfly `(lo, hi) <- (lo + hi, lo - hi)` elementwise.
    fn butterfly(&self, lo: &mut [Self::Elem], hi: &mut [Self::Elem]) -> Result<()> {
        debug_assert_eq!(lo.len(), hi.len());
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let mut diff = a.clone();
            self.sub_assign(&mut diff, b)?;
            self.add_assign(a, b)?;
            *b = diff;
        }
        Ok(())
    }
}

/// Signed 64-bit integers; any overflow is reported, never wrapped.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckedWord;

const WORD_OVERFLOW: Error = Error::Overflow { ring: "i64" };

impl Ring for CheckedWord {
    type Elem = i64;

    fn name(&self) -> &'static str {
        "i64"
    }
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn from_i64(&self, v: i64) -> i64 {
        v
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }

    #[inline]
    fn add_assign(&self, a: &mut i64, b: &i64) -> Result<()> {
        *a = a.checked_add(*b).ok_or(WORD_OVERFLOW)?;
        Ok(())
    }

    #[inline]
    fn sub_assign(&self, a: &mut i64, b: &i64) -> Result<()> {
        *a = a.checked_sub(*b).ok_or(WORD_OVERFLOW)?;
        Ok(())
    }

    fn neg(&self, a: &i64) -> Result<i64> {
        a.checked_neg().ok_or(WORD_OVERFLOW)
    }

    #[inline]
    fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_mul(*b).ok_or(WORD_OVERFLOW)
    }

    fn div_exact(&self, a: &i64, divisor: u64) -> Result<i64> {
        let d = i64::try_from(divisor).map_err(|_| Error::InexactDivision { divisor })?;
        if d == 0 || a % d != 0 {
            return Err(Error::InexactDivision { divisor });
        }
        Ok(a / d)
    }

    #[inline]
    fn mul_add_assign(&self, acc: &mut i64, a: &i64, b: &i64) -> Result<()> {
        let p = i64::try_from(*a as i128 * *b as i128).map_err(|_| WORD_OVERFLOW)?;
        self.add_assign(acc, &p)
    }

    // Taken only when the exact output provably fits in a machine word: at
    // most `pairs` terms per entry, each bounded by max|f| * max|g|. The
    // narrowest word that holds the bound is used.
    fn ranked_product_fast(&self, f: &[i64], g: &[i64], n: usize, ell: usize) -> Option<Vec<i64>> {
        if n < word::MIN_N {
            return None;
        }
        let pairs: u128 = if ell == 0 { 1 << n } else { 3u128.pow(n as u32) };
        let bound = pairs.checked_mul(word::max_abs(f))?.checked_mul(word::max_abs(g))?;
        if bound <= i32::MAX as u128 {
            Some(word::ranked_product::<u32>(f, g, n, ell))
        } else if bound <= i64::MAX as u128 {
            Some(word::ranked_product::<u64>(f, g, n, ell))
        } else {
            None
        }
    }

    // The slice forms accumulate an overflow flag instead of branching per
    // element so the loops vectorize.
    fn add_slice(&self, dst: &mut [i64], src: &[i64]) -> Result<()> {
        let mut overflow = false;
        for (d, s) in dst.iter_mut().zip(src) {
            let (v, o) = d.overflowing_add(*s);
            *d = v;
            overflow |= o;
        }
        if overflow {
            Err(WORD_OVERFLOW)
        } else {
            Ok(())
        }
    }

    fn sub_slice(&self, dst: &mut [i64], src: &[i64]) -> Result<()> {
        let mut overflow = false;
        for (d, s) in dst.iter_mut().zip(src) {
            let (v, o) = d.overflowing_sub(*s);
            *d = v;
            overflow |= o;
        }
        if overflow {
            Err(WORD_OVERFLOW)
        } else {
            Ok(())
        }
    }

    fn butterfly(&self, lo: &mut [i64], hi: &mut [i64]) -> Result<()> {
        let mut overflow = false;
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (s, o1) = a.overflowing_add(*b);
            let (d, o2) = a.overflowing_sub(*b);
            *a = s;
            *b = d;
            overflow |= o1 | o2;
        }
        if overflow {
            Err(WORD_OVERFLOW)
        } else {
            Ok(())
        }
    }
}

/// Arbitrary-precision integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct BigIntRing;

impl Ring for BigIntRing {
    type Elem = BigInt;

    fn name(&self) -> &'static str {
        "big"
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    #[inline]
    fn add_assign(&self, a: &mut BigInt, b: &BigInt) -> Result<()> {
        if !b.is_zero() {
            *a += b;
        }
        Ok(())
    }

    #[inline]
    fn sub_assign(&self, a: &mut BigInt, b: &BigInt) -> Result<()> {
        if !b.is_zero() {
            *a -= b;
        }
        Ok(())
    }

    fn neg(&self, a: &BigInt) -> Result<BigInt> {
        Ok(-a)
    }

    #[inline]
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }

    fn div_exact(&self, a: &BigInt, divisor: u64) -> Result<BigInt> {
        let d = BigInt::from(divisor);
        let (q, r) = a.div_rem(&d);
        if divisor == 0 || !r.is_zero() {
            return Err(Error::InexactDivision { divisor });
        }
        Ok(q)
    }

    #[inline]
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) -> Result<()> {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
        Ok(())
    }
}

/// Arbitrary-precision rationals, always kept in lowest terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalRing;

impl Ring for RationalRing {
    type Elem = BigRational;

    fn name(&self) -> &'static str {
        "rat"
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add_assign(&self, a: &mut BigRational, b: &BigRational) -> Result<()> {
        if !b.is_zero() {
            *a += b;
        }
        Ok(())
    }

    fn sub_assign(&self, a: &mut BigRational, b: &BigRational) -> Result<()> {
        if !b.is_zero() {
            *a -= b;
        }
        Ok(())
    }

    fn neg(&self, a: &BigRational) -> Result<BigRational> {
        Ok(-a)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        if a.is_zero() || b.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(a * b)
    }

    fn div_exact(&self, a: &BigRational, divisor: u64) -> Result<BigRational> {
        if divisor == 0 {
            return Err(Error::InexactDivision { divisor });
        }
        Ok(a / BigRational::from_integer(BigInt::from(divisor)))
    }
}

/// Snapshot of the operation tallies of a [`Counting`] ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounter {
    /// Additions, subtractions and negations.
    pub adds: u64,
    /// Multiplications and exact divisions.
    pub muls: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.adds + self.muls
    }
}

/// Wraps a ring and tallies every operation performed through it.
///
/// Tallies are atomic so a counting context stays exact when kernels run in
/// parallel. Plain rings carry no counters at all.
#[derive(Debug, Default)]
pub struct Counting<R> {
    inner: R,
    adds: AtomicU64,
    muls: AtomicU64,
}

impl<R: Ring> Counting<R> {
    pub fn new(inner: R) -> Self {
        Counting {
            inner,
            adds: AtomicU64::new(0),
            muls: AtomicU64::new(0),
        }
    }

    pub fn inner(&self) -> &R {
        &self.inner
    }

    /// Current tallies; reading does not reset them.
    pub fn snapshot(&self) -> OpCounter {
        OpCounter {
            adds: self.adds.load(Ordering::Relaxed),
            muls: self.muls.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.adds.store(0, Ordering::Relaxed);
        self.muls.store(0, Ordering::Relaxed);
    }

    #[inline]
    fn tally_adds(&self, k: usize) {
        self.adds.fetch_add(k as u64, Ordering::Relaxed);
    }

    #[inline]
    fn tally_muls(&self, k: usize) {
        self.muls.fetch_add(k as u64, Ordering::Relaxed);
    }
}

impl<R: Ring> Ring for Counting<R> {
    type Elem = R::Elem;

    fn name(&self) -> &'static str {
        self.inner.name()
    }
    fn zero(&self) -> R::Elem {
        self.inner.zero()
    }
    fn one(&self) -> R::Elem {
        self.inner.one()
    }
    fn from_i64(&self, v: i64) -> R::Elem {
        self.inner.from_i64(v)
    }
    fn is_zero(&self, a: &R::Elem) -> bool {
        self.inner.is_zero(a)
    }

    fn add_assign(&self, a: &mut R::Elem, b: &R::Elem) -> Result<()> {
        self.tally_adds(1);
        self.inner.add_assign(a, b)
    }

    fn sub_assign(&self, a: &mut R::Elem, b: &R::Elem) -> Result<()> {
        self.tally_adds(1);
        self.inner.sub_assign(a, b)
    }

    fn neg(&self, a: &R::Elem) -> Result<R::Elem> {
        self.tally_adds(1);
        self.inner.neg(a)
    }

    fn mul(&self, a: &R::Elem, b: &R::Elem) -> Result<R::Elem> {
        self.tally_muls(1);
        self.inner.mul(a, b)
    }

    fn div_exact(&self, a: &R::Elem, divisor: u64) -> Result<R::Elem> {
        self.tally_muls(1);
        self.inner.div_exact(a, divisor)
    }

    fn mul_add_assign(&self, acc: &mut R::Elem, a: &R::Elem, b: &R::Elem) -> Result<()> {
        self.tally_adds(1);
        self.tally_muls(1);
        self.inner.mul_add_assign(acc, a, b)
    }

    fn add_slice(&self, dst: &mut [R::Elem], src: &[R::Elem]) -> Result<()> {
        self.tally_adds(dst.len());
        self.inner.add_slice(dst, src)
    }

    fn sub_slice(&self, dst: &mut [R::Elem], src: &[R::Elem]) -> Result<()> {
        self.tally_adds(dst.len());
        self.inner.sub_slice(dst, src)
    }

    fn butterfly(&self, lo: &mut [R::Elem], hi: &mut [R::Elem]) -> Result<()> {
        self.tally_adds(2 * lo.len());
        self.inner.butterfly(lo, hi)
    }
}

/// Formats a rational as `p/q` in lowest terms, or as a bare integer.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
