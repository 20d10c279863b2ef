use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{LinearMap, SensingOperator};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletFamily {
    Haar,
    /// Daubechies with `N` vanishing moments, `N` in `1..=10`.
    Daubechies(u8),
}

impl WaveletFamily {
    pub fn vanishing_moments(self) -> u8 {
        match self {
            WaveletFamily::Haar => 1,
            WaveletFamily::Daubechies(n) => n,
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletFamily::Haar => write!(f, "haar"),
            WaveletFamily::Daubechies(n) => write!(f, "db{n}"),
        }
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if lower == "haar" {
            return Ok(WaveletFamily::Haar);
        }
        lower
            .strip_prefix("db")
            .and_then(|d| d.parse::<u8>().ok())
            .filter(|n| (1..=10).contains(n))
            .map(WaveletFamily::Daubechies)
            .ok_or_else(|| Error::UnsupportedWavelet(s.to_string()))
    }
}

impl Serialize for WaveletFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WaveletFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Periodized orthonormal wavelet transform with `levels` decomposition
/// steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub family: WaveletFamily,
    pub levels: usize,
}

impl WaveletSpec {
    pub fn new(family: WaveletFamily, levels: usize) -> Self {
        WaveletSpec { family, levels }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if let WaveletFamily::Daubechies(k) = self.family {
            if !(1..=10).contains(&k) {
                return Err(Error::UnsupportedWavelet(self.family.to_string()));
            }
        }
        if self.levels >= usize::BITS as usize || n == 0 || !n.is_multiple_of(1usize << self.levels) {
            return Err(Error::LengthNotDivisible {
                n,
                levels: self.levels,
            });
        }
        Ok(())
    }

    /// Coefficient level boundaries `(0, n/2^J, n/2^(J-1), ..., n)`:
    /// the scaling block first, then wavelet levels coarse to fine.
    pub fn level_boundaries(&self, n: usize) -> Result<Vec<usize>> {
        self.validate(n)?;
        let mut m = vec![0, n >> self.levels];
        for j in (0..self.levels).rev() {
            m.push(n >> j);
        }
        Ok(m)
    }
}

/// Orthonormal Daubechies low-pass filter with `n` vanishing moments
/// (length `2n`, sum `sqrt 2`), minimum-phase, in the usual table order.
///
/// Obtained by spectral factorization: the roots `y_i` of
/// `P(y) = sum_{k<n} C(n-1+k, k) y^k` give `z`-roots of
/// `z + 1/z = 2 - 4y`; the root outside the unit circle is kept and
/// `h(z) = sqrt2 ((1+z)/2)^n prod (z - r_i)/(1 - r_i)`.
pub fn daubechies_filter(n: u8) -> Result<Vec<f64>> {
    if !(1..=10).contains(&n) {
        return Err(Error::UnsupportedWavelet(format!("db{n}")));
    }
    let n = n as usize;
    let p: Vec<C64> = (0..n)
        .map(|k| C64::new(binomial(n - 1 + k, k), 0.0))
        .collect();
    let y_roots = poly_roots(&p);
    let mut h = vec![C64::new(2f64.sqrt(), 0.0)];
    for _ in 0..n {
        h = poly_mul(&h, &[C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
    }
    for y in y_roots {
        let b = C64::new(2.0, 0.0) - 4.0 * y;
        let disc = (b * b - 4.0).sqrt();
        let (r1, r2) = ((b + disc) / 2.0, (b - disc) / 2.0);
        let r = if r1.norm() > r2.norm() { r1 } else { r2 };
        let den = C64::new(1.0, 0.0) - r;
        h = poly_mul(&h, &[-r / den, C64::new(1.0, 0.0) / den]);
    }
    Ok(h.iter().map(|c| c.re).collect())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Product of polynomials given by ascending coefficients.
fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(p: &[C64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn poly_deriv(p: &[C64]) -> Vec<C64> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// All roots of `p` (ascending coefficients) by Durand–Kerner iteration
/// followed by Newton polishing.
fn poly_roots(p: &[C64]) -> Vec<C64> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let monic: Vec<C64> = p.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..deg).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = poly_eval(&monic, roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let d = poly_deriv(&monic);
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let dv = poly_eval(&d, *r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= poly_eval(&monic, *r) / dv;
        }
    }
    roots
}

struct Dwt {
    n: usize,
    spec: WaveletSpec,
    h: Vec<f64>,
    g: Vec<f64>,
}

impl Dwt {
    fn analysis(&self, x: &[C64]) -> Vec<C64> {
        let mut out = x.to_vec();
        let mut len = self.n;
        let mut approx = x.to_vec();
        for _ in 0..self.spec.levels {
            let half = len / 2;
            let mut a = vec![C64::new(0.0, 0.0); half];
            let mut d = vec![C64::new(0.0, 0.0); half];
            for k in 0..half {
                for (m, (&hm, &gm)) in self.h.iter().zip(&self.g).enumerate() {
                    let v = approx[(2 * k + m) % len];
                    a[k] += v * hm;
                    d[k] += v * gm;
                }
            }
            out[half..len].copy_from_slice(&d);
            approx = a;
            len = half;
        }
        out[..len].copy_from_slice(&approx);
        out
    }

    fn synthesis(&self, c: &[C64]) -> Vec<C64> {
        let mut len = self.n >> self.spec.levels;
        let mut approx = c[..len].to_vec();
        for _ in 0..self.spec.levels {
            let full = 2 * len;
            let d = &c[len..full];
            let mut x = vec![C64::new(0.0, 0.0); full];
            for k in 0..len {
                for (m, (&hm, &gm)) in self.h.iter().zip(&self.g).enumerate() {
                    x[(2 * k + m) % full] += approx[k] * hm + d[k] * gm;
                }
            }
            approx = x;
            len = full;
        }
        approx
    }
}

impl LinearMap for Dwt {
    fn n_in(&self) -> usize {
        self.n
    }
    fn n_out(&self) -> usize {
        self.n
    }
    fn forward(&self, x: &[C64]) -> Vec<C64> {
        self.analysis(x)
    }
    fn adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.synthesis(y)
    }
    fn descriptor(&self) -> String {
        format!("dwt_{}_{}({})", self.spec.family, self.spec.levels, self.n)
    }
}

fn build(spec: WaveletSpec, n: usize) -> Result<Dwt> {
    spec.validate(n)?;
    let h = daubechies_filter(spec.family.vanishing_moments())?;
    let l = h.len();
    let g = (0..l)
        .map(|m| if m % 2 == 0 { h[l - 1 - m] } else { -h[l - 1 - m] })
        .collect();
    Ok(Dwt { n, spec, h, g })
}

/// Forward (analysis) transform: signal to coefficients laid out as
/// `[a_J | d_J | ... | d_1]`.
pub fn dwt(spec: WaveletSpec, n: usize) -> Result<SensingOperator> {
    Ok(SensingOperator::new(build(spec, n)?))
}

/// Inverse (synthesis) transform, the adjoint of [`dwt`].
pub fn idwt(spec: WaveletSpec, n: usize) -> Result<SensingOperator> {
    Ok(dwt(spec, n)?.adjoint())
}
