//! Low-level affine Gaussian draws: anchor plus independent standard normal
//! coefficients along an orthonormal frame.
//!
//! The fluctuation is accumulated first (direction by direction, in frame
//! order) and the anchor is added with a single addition per coordinate at
//! the end. Translating a measure by `p` therefore shifts every sample by
//! exactly `p` in floating point, which is what makes the translation
//! identity bit-exact.

use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{Frame, HVector};

pub(crate) struct LinearSampler {
    /// Sorted union of all touched coordinate indices.
    touched: Vec<usize>,
    /// Anchor coordinates aligned with `touched`.
    anchor_vals: Vec<f64>,
    /// Per direction: (slot into `touched`, coefficient).
    directions: Vec<Vec<(usize, f64)>>,
}

impl LinearSampler {
    pub fn new(anchor: &HVector, directions: &Frame) -> Self {
        let mut touched: Vec<usize> = anchor.iter().map(|(i, _)| i).collect();
        for d in directions.iter() {
            touched.extend(d.iter().map(|(i, _)| i));
        }
        touched.sort_unstable();
        touched.dedup();
        let slot = |index: usize| touched.binary_search(&index).expect("index in touched set");
        let anchor_vals = {
            let mut vals = vec![0.0; touched.len()];
            for (i, c) in anchor.iter() {
                vals[slot(i)] = c;
            }
            vals
        };
        let directions = directions
            .iter()
            .map(|d| d.iter().map(|(i, c)| (slot(i), c)).collect())
            .collect();
        Self {
            touched,
            anchor_vals,
            directions,
        }
    }

    /// One draw. The `scratch` buffer is reused across draws and must have
    /// been produced by [`LinearSampler::scratch`].
    pub fn draw(&self, rng: &mut ChaCha8Rng, scratch: &mut [f64]) -> HVector {
        scratch.fill(0.0);
        for d in &self.directions {
            let z: f64 = rand::Rng::sample(rng, StandardNormal);
            for &(slot, c) in d {
                scratch[slot] += z * c;
            }
        }
        HVector::from_sorted_pairs_unchecked(
            self.touched
                .iter()
                .zip(scratch.iter())
                .zip(self.anchor_vals.iter())
                .map(|((&i, &f), &a)| (i, a + f))
                .filter(|(_, v)| *v != 0.0 && v.is_finite()),
        )
    }

    pub fn scratch(&self) -> Vec<f64> {
        vec![0.0; self.touched.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::shard_rng;

    #[test]
    fn translation_is_a_bitwise_shift() {
        let frame = Frame::new(vec![
            HVector::basis(1),
            HVector::basis(2)
                .add(&HVector::basis(3))
                .scale(1.0 / 2f64.sqrt()),
        ])
        .unwrap();
        let p = HVector::from_pairs([(0, 0.75), (2, 0.0)]);
        let centered = LinearSampler::new(&HVector::zero(), &frame);
        let shifted = LinearSampler::new(&p, &frame);
        let mut s1 = centered.scratch();
        let mut s2 = shifted.scratch();
        for k in 0..64 {
            let mut r1 = shard_rng(9, k);
            let mut r2 = shard_rng(9, k);
            let a = centered.draw(&mut r1, &mut s1);
            let b = shifted.draw(&mut r2, &mut s2);
            assert_eq!(p.add(&a), b);
        }
    }

    #[test]
    fn point_mass_without_directions() {
        let p = HVector::basis(4).scale(2.0);
        let sampler = LinearSampler::new(&p, &Frame::empty());
        let mut scratch = sampler.scratch();
        let mut rng = shard_rng(1, 0);
        assert_eq!(sampler.draw(&mut rng, &mut scratch), p);
    }
}
