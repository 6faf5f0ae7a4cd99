//! The named polynomial families, built as explicit zero sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{CoefficientVector, MonicPolynomial, SAFE_EXPANSION_DEGREE};
use crate::potential::{equilibrium_sample, CompactSetModel};
use crate::rootfind::{all_roots, critical_points, solve_preimages, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Sign of the constant in `z^n ± 1` and `Q^n ± 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    MinusOne,
    PlusOne,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::MinusOne => -1.0,
            Sign::PlusOne => 1.0,
        }
    }
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

/// `n`-th roots of `−sign`: `w^n = −sign` for each of the `n` returned `w`.
fn roots_of(n: usize, sign: Sign) -> Vec<Complex64> {
    let offset = match sign {
        Sign::MinusOne => 0.0,
        Sign::PlusOne => 1.0,
    };
    (0..n)
        .map(|k| Complex64::from_polar(1.0, PI * (2.0 * k as f64 + offset) / n as f64))
        .collect()
}

/// `z^n − 1` or `z^n + 1`.
pub fn roots_of_unity_poly(n: usize, sign: Sign) -> Result<MonicPolynomial> {
    positive(n, "degree")?;
    MonicPolynomial::from_zeros(roots_of(n, sign))
}

/// Monic Chebyshev polynomial of `[−h, h]`: zeros `h·cos((k − 1/2)π/n)`.
/// With `h = 2` this is `2 T_n(z/2)`, whose critical values all equal `±2`.
pub fn chebyshev_monic(n: usize, half_width: f64) -> Result<MonicPolynomial> {
    positive(n, "degree")?;
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::InvalidArgument(format!("half width must be positive, got {half_width}")));
    }
    MonicPolynomial::from_zeros(
        (1..=n)
            .map(|k| Complex64::new(half_width * ((k as f64 - 0.5) * PI / n as f64).cos(), 0.0))
            .collect(),
    )
}

/// `E_n(z) = (z^n + 1)(z − 1)² / ((z − e^{iπ/n})(z − e^{−iπ/n}))`, built by
/// placing zeros rather than by division.
pub fn ehp_polynomial(n: usize) -> Result<MonicPolynomial> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("EHP polynomials need n ≥ 3, got {n}")));
    }
    let mut zeros: Vec<Complex64> = roots_of(n, Sign::PlusOne)[1..n - 1].to_vec();
    zeros.push(Complex64::new(1.0, 0.0));
    zeros.push(Complex64::new(1.0, 0.0));
    MonicPolynomial::from_zeros(zeros)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledEhp {
    pub polynomial: MonicPolynomial,
    /// Smallest nonzero critical value of `E_n`.
    pub c_n: f64,
    /// `c_n^{−1/n}`; the scaled zeros lie on the circle of this radius.
    pub delta_n: f64,
}

/// `E_n` scaled by `δ_n = c_n^{−1/n}` so that its smallest nonzero critical
/// value becomes exactly the level 1.
pub fn scaled_ehp(n: usize) -> Result<ScaledEhp> {
    let e = ehp_polynomial(n)?;
    let crit = critical_points(&e)?;
    let c_n = crit
        .entries
        .iter()
        .filter(|c| c.value > 0.0)
        .map(|c| c.value)
        .fold(f64::INFINITY, f64::min);
    if !c_n.is_finite() {
        return Err(Error::InvalidArgument("E_n has no nonzero critical value".into()));
    }
    let delta_n = c_n.powf(-1.0 / n as f64);
    Ok(ScaledEhp {
        polynomial: e.scale(delta_n)?,
        c_n,
        delta_n,
    })
}

fn monic_generator(c: &CoefficientVector) -> Result<()> {
    if c.degree() < 1 || !c.is_monic() {
        return Err(Error::InvalidArgument("generating polynomial must be monic of degree ≥ 1".into()));
    }
    Ok(())
}

fn preimages_of(c: &CoefficientVector, targets: impl IntoIterator<Item = Complex64>) -> Result<MonicPolynomial> {
    let mut zeros = Vec::new();
    for t in targets {
        zeros.extend(solve_preimages(c, t)?.expanded());
    }
    MonicPolynomial::from_zeros(zeros)
}

/// `T_n(P_m(z))` with `T_n = 2 T_n(·/2)` the monic Chebyshev polynomial of
/// `[−2, 2]`: the zeros solve `P_m(z) = 2cos((k − 1/2)π/n)`.
pub fn composed_period_m(p_m: &CoefficientVector, n: usize) -> Result<MonicPolynomial> {
    monic_generator(p_m)?;
    positive(n, "n")?;
    let cheb = chebyshev_monic(n, 2.0)?;
    preimages_of(p_m, cheb.zeros().iter().copied())
}

/// `Q_m(z)^n + 1` (or `− 1`): the zeros solve `Q_m(z) = ζ` over the `n`-th
/// roots of `∓1`.
pub fn lemniscate_power(q_m: &CoefficientVector, n: usize, sign: Sign) -> Result<MonicPolynomial> {
    monic_generator(q_m)?;
    positive(n, "n")?;
    preimages_of(q_m, roots_of(n, sign))
}

/// The `n ≤ n_max` for which every nonzero critical value of `Q^n ± 1` has
/// modulus at least 1. The critical points of `Q^n ± 1` are the zeros of `Q`
/// (value `±1`) and the critical points `β` of `Q` (value `Q(β)^n ± 1`), so
/// only the latter are checked.
pub fn lemniscate_power_search(q_m: &CoefficientVector, n_max: usize, sign: Sign) -> Result<Vec<usize>> {
    monic_generator(q_m)?;
    if q_m.degree() == 1 {
        return Ok((1..=n_max).collect());
    }
    let q = MonicPolynomial::from_zeros(all_roots(q_m, DEFAULT_TOL, DEFAULT_MAX_ITER)?.expanded())?;
    let values: Vec<Complex64> = critical_points(&q)?
        .entries
        .iter()
        .map(|c| q_m.evaluate(c.point))
        .collect();
    let s = sign.value();
    Ok((1..=n_max)
        .filter(|&n| {
            values.iter().all(|&v| {
                let w = v.powu(n as u32) + s;
                w.norm() == 0.0 || w.norm() >= 1.0
            })
        })
        .collect())
}

/// Faber polynomials of the exterior map `ψ(w) = w + a₀ + a₁/w + a₂/w² + …`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaberCoefficients {
    pub psi_coeffs: Vec<Complex64>,
    /// `faber[n]` is monic of degree `n`; `faber[0] = 1`.
    pub faber: Vec<CoefficientVector>,
}

impl FaberCoefficients {
    pub fn polynomial(&self, n: usize) -> Option<&CoefficientVector> {
        self.faber.get(n)
    }

    /// Zeros of `F_n` by simultaneous iteration.
    pub fn zeros(&self, n: usize) -> Result<Vec<Complex64>> {
        let f = self
            .faber
            .get(n)
            .ok_or_else(|| Error::InvalidArgument(format!("F_{n} was not computed")))?;
        if n == 0 {
            return Ok(Vec::new());
        }
        Ok(all_roots(f, DEFAULT_TOL, DEFAULT_MAX_ITER)?.expanded())
    }
}

/// `F₀ = 1`, `F₁ = z − a₀`, and for `n ≥ 1`
/// `F_{n+1} = (z − a₀)F_n − Σ_{j=1}^{n−1} a_j F_{n−j} − (n+1)a_n`.
pub fn faber_polynomials(psi_coeffs: &[Complex64], up_to: usize) -> Result<FaberCoefficients> {
    positive(up_to, "up_to")?;
    if up_to > SAFE_EXPANSION_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: up_to,
            bound: SAFE_EXPANSION_DEGREE,
        });
    }
    if !psi_coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonFinite("Laurent coefficients"));
    }
    let a = |j: usize| psi_coeffs.get(j).copied().unwrap_or_default();
    let one = Complex64::new(1.0, 0.0);
    let mut faber: Vec<Vec<Complex64>> = vec![vec![one], vec![-a(0), one]];
    for n in 1..up_to {
        let mut next = vec![Complex64::default(); n + 2];
        for (k, &c) in faber[n].iter().enumerate() {
            next[k + 1] += c;
            next[k] -= a(0) * c;
        }
        for j in 1..n {
            for (k, &c) in faber[n - j].iter().enumerate() {
                next[k] -= a(j) * c;
            }
        }
        next[0] -= (n + 1) as f64 * a(n);
        faber.push(next);
    }
    faber.truncate(up_to + 1);
    Ok(FaberCoefficients {
        psi_coeffs: psi_coeffs.to_vec(),
        faber: faber.into_iter().map(|coeffs| CoefficientVector { coeffs }).collect(),
    })
}

/// `(z − a)^{n₁} ∏_{j ≤ n₂} (z − X_j)` with `X_j` drawn from the equilibrium
/// measure of `arc`.
pub fn cluster_construction(
    a: Complex64,
    arc: &CompactSetModel,
    n1: usize,
    n2: usize,
    seed: u64,
) -> Result<MonicPolynomial> {
    positive(n1 + n2, "n1 + n2")?;
    let mut zeros = vec![a; n1];
    if n2 > 0 {
        zeros.extend_from_slice(equilibrium_sample(arc, n2, seed)?.points());
    }
    MonicPolynomial::from_zeros(zeros)
}
