//! Monic complex polynomials stored by their zeros.
//!
//! The zero list is the source of truth. Evaluation goes through the product
//! `∏(z − z_j)` or its logarithm, so nothing overflows until the caller asks
//! for the raw value; coefficient expansion is only offered up to
//! [`SAFE_EXPANSION_DEGREE`].

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Largest degree for which coefficient (Vieta) expansion is offered.
pub const SAFE_EXPANSION_DEGREE: usize = 128;

pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Lexicographic order on `(re, im)`, used wherever a deterministic order of
/// points is needed.
pub fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Result of [`MonicPolynomial::evaluate_checked`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation {
    Finite(Complex64),
    /// The product left the range of `f64`; use the log form instead.
    Overflow,
}

/// `∏_{j}(z − z_j)`; multiplicities are encoded by repetition.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    zeros: Vec<Complex64>,
}

impl MonicPolynomial {
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeros);
        }
        if !zeros.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite("zeros"));
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn into_zeros(self) -> Vec<Complex64> {
        self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Direct product evaluation. May overflow to infinity for large degree
    /// far away from the zeros; see [`Self::evaluate_checked`].
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &zj| acc * (z - zj))
    }

    pub fn evaluate_checked(&self, z: Complex64) -> Evaluation {
        let v = self.evaluate(z);
        if is_finite(v) {
            Evaluation::Finite(v)
        } else {
            Evaluation::Overflow
        }
    }

    /// `Σ log|z − z_j|` summed in input order, i.e. `n · U_μ(z)` for the
    /// empirical zero measure `μ`. Returns `-inf` exactly at a zero.
    pub fn log_abs_evaluate(&self, z: Complex64) -> f64 {
        let mut sum = 0.0;
        for &zj in &self.zeros {
            let d = (z - zj).norm();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            sum += d.ln();
        }
        sum
    }

    /// `p′(z)/p(z) = Σ 1/(z − z_j)`, without expanding coefficients.
    pub fn newton_ratio(&self, z: Complex64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for &zj in &self.zeros {
            let d = z - zj;
            if d.norm_sqr() == 0.0 {
                return Err(Error::AtZero);
            }
            sum += d.inv();
        }
        Ok(sum)
    }

    /// `log|p′(z_j)| = Σ_{k≠j} log|z_j − z_k|`; `-inf` if `z_j` is repeated.
    pub fn log_abs_derivative_at_zero(&self, j: usize) -> f64 {
        let zj = self.zeros[j];
        let mut sum = 0.0;
        for (k, &zk) in self.zeros.iter().enumerate() {
            if k == j {
                continue;
            }
            let d = (zj - zk).norm();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            sum += d.ln();
        }
        sum
    }

    pub fn coefficients(&self) -> Result<CoefficientVector> {
        self.coefficients_with_bound(SAFE_EXPANSION_DEGREE)
    }

    /// Vieta expansion by multiplying in one linear factor at a time.
    pub fn coefficients_with_bound(&self, bound: usize) -> Result<CoefficientVector> {
        let n = self.degree();
        if n > bound {
            return Err(Error::DegreeTooLarge { degree: n, bound });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[0] = Complex64::new(1.0, 0.0);
        for (k, &zj) in self.zeros.iter().enumerate() {
            // multiply the degree-k polynomial in c[..=k] by (z - zj)
            for i in (1..=k + 1).rev() {
                c[i] = c[i - 1] - zj * c[i];
            }
            c[0] = -zj * c[0];
        }
        Ok(CoefficientVector { coeffs: c })
    }

    /// The `t`-scaling `t^m p(z/t)`, whose zeros are `t·z_j`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidArgument(format!("scale factor must be positive, got {t}")));
        }
        Self::from_zeros(self.zeros.iter().map(|&z| z * t).collect())
    }

    pub fn centroid(&self) -> Complex64 {
        self.zeros.iter().sum::<Complex64>() / self.degree() as f64
    }

    pub fn to_json(&self) -> String {
        let mut zeros = self.zeros.clone();
        zeros.sort_by(lexicographic);
        serde_json::to_string(&PolynomialFile { zeros }).expect("finite zeros serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(s)?;
        Self::from_zeros(file.zeros)
    }
}

/// On-disk form: `{"zeros": [[re, im], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct PolynomialFile {
    zeros: Vec<Complex64>,
}

/// Coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientVector {
    pub coeffs: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient vector".into()));
        }
        if !coeffs.iter().all(|c| is_finite(*c)) {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(Self { coeffs })
    }

    /// Builds from real coefficients, ascending.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Complex64::new(1.0, 0.0)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the scale against which rounding in [`Self::evaluate`]
    /// is measured.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// `max_k |c_k| · Σ |z|^k`: rounding scale when the coefficients are only
    /// known to working precision relative to the largest one.
    pub fn norm_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        max * self.coeffs.iter().fold(0.0, |acc, _| acc * r + 1.0)
    }

    pub fn derivative(&self) -> CoefficientVector {
        derivative_coefficients(self)
    }

    /// Power-rule derivative of order `k`.
    pub fn nth_derivative(&self, k: usize) -> CoefficientVector {
        let mut d = self.clone();
        for _ in 0..k {
            d = d.derivative();
        }
        d
    }

    /// Subtracts a constant, e.g. to solve `q(z) = w`.
    pub fn minus_constant(&self, w: Complex64) -> CoefficientVector {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= w;
        CoefficientVector { coeffs }
    }
}

/// Power-rule derivative. A constant differentiates to the zero constant.
pub fn derivative_coefficients(c: &CoefficientVector) -> CoefficientVector {
    if c.coeffs.len() <= 1 {
        return CoefficientVector {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        };
    }
    let coeffs = c
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| a * k as f64)
        .collect();
    CoefficientVector { coeffs }
}
