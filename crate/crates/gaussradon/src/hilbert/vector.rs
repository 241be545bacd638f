use std::collections::BTreeMap;
use std::fmt;

/// Finite-support coefficient sequence over the fixed orthonormal basis.
///
/// Zero coefficients are never stored, so two vectors are equal iff their
/// stored maps are equal. All coefficients are finite reals.
#[derive(Clone, Default, PartialEq)]
pub struct HVector {
    coeffs: BTreeMap<usize, f64>,
}

impl HVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `e_i`.
    pub fn basis(index: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, 1.0);
        Self { coeffs }
    }

    /// Builds a vector from `(index, coefficient)` pairs. Repeated indices
    /// accumulate. Panics on non-finite coefficients.
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, c) in pairs {
            assert!(c.is_finite(), "coefficient at index {i} is not finite");
            *coeffs.entry(i).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        Self { coeffs }
    }

    /// Builds a vector from dense coordinates starting at index 0.
    pub fn from_dense(values: &[f64]) -> Self {
        Self::from_pairs(values.iter().copied().enumerate())
    }

    /// Bulk construction from index-sorted, duplicate-free, finite, nonzero
    /// pairs; the sampler hot path relies on the B-tree bulk loader.
    pub(crate) fn from_sorted_pairs_unchecked<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let coeffs: BTreeMap<usize, f64> = pairs.into_iter().collect();
        debug_assert!(coeffs.values().all(|c| c.is_finite() && *c != 0.0));
        Self { coeffs }
    }

    pub fn coeff(&self, index: usize) -> f64 {
        self.coeffs.get(&index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, *c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest basis index carrying a nonzero coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn inner(&self, other: &HVector) -> f64 {
        // Iterate the smaller support.
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (i, c) in small.iter() {
            acc += c * large.coeff(i);
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn add(&self, other: &HVector) -> HVector {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &HVector) -> HVector {
        self.add_scaled(other, -1.0)
    }

    /// `self + t * other`, pruning exact zeros.
    pub fn add_scaled(&self, other: &HVector, t: f64) -> HVector {
        let mut coeffs = self.coeffs.clone();
        for (i, c) in other.iter() {
            let entry = coeffs.entry(i).or_insert(0.0);
            *entry += t * c;
            if *entry == 0.0 {
                coeffs.remove(&i);
            }
        }
        HVector { coeffs }
    }

    pub fn scale(&self, t: f64) -> HVector {
        assert!(t.is_finite(), "scale factor is not finite");
        if t == 0.0 {
            return HVector::zero();
        }
        HVector {
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * t)).collect(),
        }
    }

    /// Dense coordinates `[x_0, ..., x_{len-1}]`; higher indices are dropped.
    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (i, c) in self.iter() {
            if i < len {
                out[i] = c;
            }
        }
        out
    }

    /// Restriction to indices `< len`.
    pub fn truncate(&self, len: usize) -> HVector {
        HVector {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| **i < len)
                .map(|(i, c)| (*i, *c))
                .collect(),
        }
    }
}

impl serde::Serialize for HVector {
    /// Serializes as a sparse list of `[index, coefficient]` pairs.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl fmt::Debug for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HVector{{")?;
        for (k, (i, c)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "e{i}: {c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_pruned() {
        let v = HVector::from_pairs([(0, 1.0), (3, 0.0), (5, 2.0)]);
        assert_eq!(v.support_len(), 2);
        assert_eq!(v.coeff(3), 0.0);
        let w = v.add_scaled(&HVector::basis(0), -1.0);
        assert_eq!(w.support_len(), 1);
        assert_eq!(w.coeff(5), 2.0);
    }

    #[test]
    fn inner_product_over_shared_indices() {
        let x = HVector::from_pairs([(0, 1.0), (2, -2.0)]);
        let y = HVector::from_pairs([(2, 3.0), (7, 5.0)]);
        assert_eq!(x.inner(&y), -6.0);
        assert_eq!(y.inner(&x), -6.0);
    }

    #[test]
    fn norm_is_euclidean() {
        let v = HVector::from_pairs([(1, 3.0), (4, 4.0)]);
        assert_eq!(v.norm(), 5.0);
    }

    #[test]
    #[should_panic(expected = "not finite")]
    fn rejects_non_finite() {
        let _ = HVector::from_pairs([(0, f64::NAN)]);
    }
}
