use crate::error::{Error, Result};
use crate::mask::{GroundSet, Mask};

/// A dense table `S ↦ f(S)` over all subsets of a ground set, indexed by
/// mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction<E> {
    ground: GroundSet,
    values: Vec<E>,
}

impl<E> SetFunction<E> {
    pub fn new(ground: GroundSet, values: Vec<E>) -> Result<Self> {
        if values.len() != ground.size() {
            return Err(Error::LengthMismatch {
                expected: ground.size(),
                actual: values.len(),
            });
        }
        Ok(SetFunction { ground, values })
    }

    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(Mask) -> E) -> Self {
        let values = ground.masks().map(&mut f).collect();
        SetFunction { ground, values }
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
    pub fn get(&self, mask: Mask) -> &E {
        &self.values[mask.index()]
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [E] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<E> {
        self.values
    }

    pub fn map<F, T>(&self, f: F) -> SetFunction<T>
    where
        F: FnMut(&E) -> T,
    {
        SetFunction {
            ground: self.ground,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mask, &E)> {
        self.values.iter().enumerate().map(|(i, v)| (Mask(i as u32), v))
    }
}

impl<E: Clone> SetFunction<E> {
    /// Copies `values` into a new table.
    pub fn from_slice(ground: GroundSet, values: &[E]) -> Result<Self> {
        Self::new(ground, values.to_vec())
    }

    /// `one` on the empty set and `zero` everywhere else; the identity of
    /// subset convolution.
    pub fn delta_empty(ground: GroundSet, one: E, zero: E) -> Self {
        let mut values = vec![zero; ground.size()];
        values[0] = one;
        SetFunction { ground, values }
    }

    pub fn constant(ground: GroundSet, value: E) -> Self {
        SetFunction {
            ground,
            values: vec![value; ground.size()],
        }
    }
}

impl SetFunction<i64> {
    /// Convenience constructor used heavily in tests and examples.
    pub fn from_i64s(n: usize, values: &[i64]) -> Result<Self> {
        Self::from_slice(GroundSet::new(n)?, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        let f = SetFunction::from_i64s(0, &[7]).unwrap();
        assert_eq!(*f.get(Mask::EMPTY), 7);

        let f = SetFunction::from_i64s(2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(*f.get(Mask(0)), 1);
        assert_eq!(*f.get(Mask::from_elements([1])), 2);
        assert_eq!(*f.get(Mask::from_elements([2])), 3);
        assert_eq!(*f.get(Mask::from_elements([1, 2])), 4);
    }

    #[test]
    fn length_mismatch() {
        let err = SetFunction::from_i64s(2, &[1, 2, 3]).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { expected: 4, actual: 3 });
        assert!(err.to_string().contains("expected 4 values"));
    }

    #[test]
    fn input_is_copied() {
        let input = vec![1i64, 2];
        let mut f = SetFunction::from_slice(GroundSet::new(1).unwrap(), &input).unwrap();
        f.values_mut()[0] = 9;
        assert_eq!(input, vec![1, 2]);
    }
}
