use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::rng::{choose_sorted, derive_seed, rng_from_seed};
use crate::{Error, Result};

/// A set of sampled row indices (0-based, sorted, unique) out of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingScheme {
    n: usize,
    indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bands: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl SamplingScheme {
    pub fn full(n: usize) -> Self {
        SamplingScheme {
            n,
            indices: (0..n).collect(),
            bands: None,
            counts: None,
            seed: None,
        }
    }

    pub fn from_indices(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, dim: n });
        }
        Ok(SamplingScheme {
            n,
            indices,
            bands: None,
            counts: None,
            seed: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn bands(&self) -> Option<&[(usize, usize)]> {
        self.bands.as_deref()
    }

    pub fn counts(&self) -> Option<&[usize]> {
        self.counts.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Draws `m[j]` indices uniformly without replacement from each band `j`.
///
/// Band `j` uses its own stream derived from `(seed, j)`, so changing one
/// band's count leaves the other bands' draws untouched.
pub fn multilevel_scheme(
    n: usize,
    bands: &[Range<usize>],
    m: &[usize],
    seed: u64,
) -> Result<SamplingScheme> {
    if bands.len() != m.len() {
        return Err(Error::LengthMismatch {
            expected: bands.len(),
            got: m.len(),
        });
    }
    let mut indices = Vec::new();
    let mut prev_end = 0;
    for (j, (band, &count)) in bands.iter().zip(m).enumerate() {
        if band.start < prev_end || band.end > n || band.start > band.end {
            return Err(Error::DimensionMismatch(format!(
                "band {j} = {band:?} overlaps or exceeds 0..{n}"
            )));
        }
        prev_end = band.end;
        let width = band.len();
        if count > width {
            return Err(Error::BandOverflow {
                band: j,
                requested: count,
                width,
            });
        }
        let mut rng = rng_from_seed(derive_seed(seed, j as u64));
        indices.extend(choose_sorted(&mut rng, width, count).into_iter().map(|i| band.start + i));
    }
    Ok(SamplingScheme {
        n,
        indices,
        bands: Some(bands.iter().map(|b| (b.start, b.end)).collect()),
        counts: Some(m.to_vec()),
        seed: Some(seed),
    })
}

/// Consecutive bands between the given boundaries.
pub fn dyadic_bands(boundaries: &[usize]) -> Vec<Range<usize>> {
    boundaries.windows(2).map(|w| w[0]..w[1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_empty() {
        let bands = dyadic_bands(&[0, 2, 4, 8]);
        let s = multilevel_scheme(8, &bands, &[2, 2, 4], 1).unwrap();
        assert_eq!(s.indices(), SamplingScheme::full(8).indices());
        assert!(multilevel_scheme(8, &bands, &[0, 0, 0], 1).unwrap().is_empty());
    }

    #[test]
    fn counts_and_determinism() {
        let bands = dyadic_bands(&[0, 16, 32, 64, 128]);
        let m = [16, 5, 9, 20];
        let a = multilevel_scheme(128, &bands, &m, 42).unwrap();
        let b = multilevel_scheme(128, &bands, &m, 42).unwrap();
        assert_eq!(a, b);
        for (band, &c) in bands.iter().zip(&m) {
            assert_eq!(a.indices().iter().filter(|i| band.contains(i)).count(), c);
        }
        assert!(a.indices().windows(2).all(|w| w[0] < w[1]));
        assert_ne!(a, multilevel_scheme(128, &bands, &m, 43).unwrap());
    }

    #[test]
    fn overflow_is_reported() {
        let bands = dyadic_bands(&[0, 2, 4]);
        assert!(matches!(
            multilevel_scheme(4, &bands, &[1, 3], 0),
            Err(Error::BandOverflow { band: 1, .. })
        ));
        assert!(SamplingScheme::from_indices(3, vec![3]).is_err());
    }
}
