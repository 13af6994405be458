//! Truncated complex power series in a local variable h around a point z₀.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series(pub Vec<Complex64>);

impl Series {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn constant_term(&self) -> Complex64 {
        self.0[0]
    }

    #[cfg(test)]
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.get(k).copied().unwrap_or_default()
    }

    pub fn add(&self, other: &Series) -> Series {
        let len = self.len().min(other.len());
        Series((0..len).map(|k| self.0[k] + other.0[k]).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Series {
        Series(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &Series) -> Series {
        let len = self.len().min(other.len());
        let mut out = vec![Complex64::default(); len];
        for (i, a) in self.0[..len].iter().enumerate() {
            for (j, b) in other.0[..len - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    pub fn recip(&self) -> Series {
        let len = self.len();
        let inv0 = 1.0 / self.0[0];
        let mut out = vec![Complex64::default(); len];
        out[0] = inv0;
        for k in 1..len {
            let mut acc = Complex64::default();
            for j in 1..=k {
                acc += self.0[j] * out[k - j];
            }
            out[k] = -acc * inv0;
        }
        Series(out)
    }

    /// Square root whose constant term is `root0` (which must square to the
    /// constant term of `self`).
    pub fn sqrt_with(&self, root0: Complex64) -> Series {
        let len = self.len();
        let mut out = vec![Complex64::default(); len];
        out[0] = root0;
        for k in 1..len {
            let mut acc = self.0[k];
            for j in 1..k {
                acc -= out[j] * out[k - j];
            }
            out[k] = acc / (2.0 * root0);
        }
        Series(out)
    }

    /// `d/dt = (z₀ + h)·d/dh`. The result is one term shorter.
    pub fn d_dt(&self, z0: Complex64) -> Series {
        let len = self.len().saturating_sub(1);
        Series(
            (0..len)
                .map(|j| z0 * (j as f64 + 1.0) * self.0[j + 1] + j as f64 * self.0[j])
                .collect(),
        )
    }

    /// Taylor coefficients of `f` around `z0` from `m` samples on a circle
    /// of the given radius (discrete Cauchy integral).
    pub fn cauchy(
        f: impl Fn(Complex64) -> Result<Complex64>,
        z0: Complex64,
        radius: f64,
        m: usize,
        len: usize,
    ) -> Result<Series> {
        let values = (0..m)
            .map(|j| f(z0 + Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64)))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = (0..len)
            .map(|k| {
                let sum: Complex64 = values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k % m) as f64 / m as f64))
                    .sum();
                sum / (m as f64 * radius.powi(k as i32))
            })
            .collect();
        Ok(Series(coeffs))
    }
}
