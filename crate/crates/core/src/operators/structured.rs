use super::{LinearMap, SensingOperator};
use crate::linalg::{inner, norm2};
use crate::{Error, Result, C64};

struct RankOneDeflation {
    k: Vec<C64>,
    c: f64,
}

impl RankOneDeflation {
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let p = inner(x, &self.k);
        x.iter().zip(&self.k).map(|(xi, ki)| (xi - ki * p) * self.c).collect()
    }
}

impl LinearMap for RankOneDeflation {
    fn n_in(&self) -> usize {
        self.k.len()
    }
    fn n_out(&self) -> usize {
        self.k.len()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.apply(x)
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.apply(y)
    }
    fn descriptor(&self) -> String {
        format!("{}*(I-kk*)({})", self.c, self.k.len())
    }
}

/// `c (I - k k*)` for a unit vector `k`, applied in `O(n)`.
pub fn rank_one_deflation(k: &[C64], c: f64) -> Result<SensingOperator> {
    let nk = norm2(k);
    if (nk - 1.0).abs() > 1e-10 {
        return Err(Error::DimensionMismatch(format!("kernel vector norm {nk} is not 1")));
    }
    Ok(SensingOperator::new(RankOneDeflation { k: k.to_vec(), c }))
}

struct Reorder {
    map: Vec<usize>,
}

impl LinearMap for Reorder {
    fn n_in(&self) -> usize {
        self.map.len()
    }
    fn n_out(&self) -> usize {
        self.map.len()
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.map.iter().map(|&j| x[j]).collect()
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); y.len()];
        for (&j, &v) in self.map.iter().zip(y) {
            out[j] = v;
        }
        out
    }
    fn descriptor(&self) -> String {
        format!("reorder({})", self.map.len())
    }
}

/// Permutation operator `(Rx)[i] = x[map[i]]`.
pub fn reorder(map: Vec<usize>) -> Result<SensingOperator> {
    let n = map.len();
    let mut seen = vec![false; n];
    for &j in &map {
        if j >= n || seen[j] {
            return Err(Error::DimensionMismatch("reorder map is not a bijection".into()));
        }
        seen[j] = true;
    }
    Ok(SensingOperator::new(Reorder { map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vec;

    #[test]
    fn deflation_kills_k() {
        let s = 0.5f64.sqrt();
        let k = real_vec(&[s, s, 0.0]);
        let op = rank_one_deflation(&k, 2.0).unwrap();
        assert!(norm2(&op.apply(&k)) < 1e-15);
        let y = op.apply(&real_vec(&[0.0, 0.0, 1.0]));
        assert!((y[2].re - 2.0).abs() < 1e-15);
        assert!(op.adjoint_mismatch(100, 1) < 1e-10);
        assert!(rank_one_deflation(&real_vec(&[1.0, 1.0]), 1.0).is_err());
    }

    #[test]
    fn reorder_roundtrip() {
        let op = reorder(vec![2, 0, 1]).unwrap();
        let x = real_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(op.apply(&x), real_vec(&[3.0, 1.0, 2.0]));
        assert_eq!(op.apply_adjoint(&op.apply(&x)), x);
        assert!(reorder(vec![0, 0]).is_err());
    }
}
