//! Seeded synthetic datasets for experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::knn::Dataset;
use crate::scalar::{cast, Scalar};

/// `n` samples from two isotropic unit-variance Gaussians in `dim`
/// dimensions whose means are `separation` apart along the first axis.
/// A fraction `minority` of the samples (rounded) gets label 1; rows are
/// interleaved in random order.
pub fn gaussian_classes<T: Scalar>(
    n: usize,
    dim: usize,
    separation: f64,
    minority: f64,
    seed: u64,
) -> Result<Dataset<T>> {
    if dim == 0 || n < 2 {
        return Err(Error::param("n/dim", "need at least two samples and one dimension"));
    }
    if !(0.0..=1.0).contains(&minority) {
        return Err(Error::param("minority", "fraction must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = (minority * n as f64).round() as usize;
    let mut labels: Vec<i64> = (0..n).map(|i| i64::from(i < n1)).collect();
    // Fisher–Yates so the two classes are interleaved
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }
    let mut data = Vec::with_capacity(n * dim);
    for &l in &labels {
        for d in 0..dim {
            let z: f64 = StandardNormal.sample(&mut rng);
            let shift = if d == 0 && l == 1 { separation } else { 0.0 };
            data.push(cast::<T>(z + shift));
        }
    }
    Dataset::new(Matrix::from_row_major(n, dim, data)?)?.with_labels(labels)
}

/// Standard-normal samples scaled by `scale` and shifted by `offset`.
pub fn gaussian_blob<T: Scalar>(n: usize, offset: &[f64], scale: f64, rng: &mut impl Rng) -> Matrix<T> {
    let dim = offset.len();
    let data = (0..n * dim)
        .map(|p| {
            let z: f64 = StandardNormal.sample(rng);
            cast::<T>(offset[p % dim] + scale * z)
        })
        .collect();
    Matrix::from_row_major(n, dim, data).expect("shape matches")
}
