//! Reference computations that share no code with the library.
#![allow(dead_code)]

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigenvalues of the companion matrix of `Σ c_k z^k` (ascending).
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = c(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    Schur::new(m).eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

/// Largest distance in a greedy nearest-neighbour matching of two equally
/// long point lists.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, &y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// `Σ c_k z^k` by explicit powers.
pub fn power_sum(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().enumerate().map(|(k, &ck)| ck * z.powu(k as u32)).sum()
}

pub fn product(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros.iter().map(|&a| z - a).product()
}

/// Coefficients of `∏ (z − a)` by repeated multiplication, ascending.
pub fn expand(zeros: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![c(1.0, 0.0)];
    for &a in zeros {
        let mut next = vec![c(0.0, 0.0); poly.len() + 1];
        for (k, &p) in poly.iter().enumerate() {
            next[k + 1] += p;
            next[k] -= a * p;
        }
        poly = next;
    }
    poly
}

/// Uniform points in the disc of the given radius.
pub fn zeros_in_disk<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect()
}

/// Coefficients of `2 T_n(z/2)` for `n ≥ 1` from `C_{k+1} = z C_k − C_{k−1}`.
pub fn monic_chebyshev_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![2.0];
    let mut cur = vec![0.0, 1.0];
    for _ in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, &x) in cur.iter().enumerate() {
            next[k + 1] += x;
        }
        for (k, &x) in prev.iter().enumerate() {
            next[k] -= x;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Polynomial part of `Φ(z)^n`, where `Φ` inverts
/// `ψ(w) = w + a₀ + a₁/w + …`, from a discrete Laurent transform of `Φ^n`
/// sampled on `|z| = radius`.
pub fn laurent_faber(psi: &[Complex64], n: usize, radius: f64, samples: usize) -> Vec<Complex64> {
    let psi_at = |w: Complex64| {
        let mut v = w;
        let mut dv = c(1.0, 0.0);
        for (j, &a) in psi.iter().enumerate() {
            v += a * w.powi(-(j as i32));
            if j > 0 {
                dv -= a * (j as f64) * w.powi(-(j as i32) - 1);
            }
        }
        (v, dv)
    };
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    let mut w = c(radius, 0.0);
    for m in 0..samples {
        let theta = std::f64::consts::TAU * m as f64 / samples as f64;
        let z = Complex64::from_polar(radius, theta);
        if m == 0 {
            w = z;
        }
        // Continuation along the circle: start from the previous solution.
        for _ in 0..100 {
            let (v, dv) = psi_at(w);
            let step = (v - z) / dv;
            w -= step;
            if step.norm() < 1e-16 * w.norm() {
                break;
            }
        }
        let f = w.powu(n as u32);
        for (k, ck) in coeffs.iter_mut().enumerate() {
            *ck += f * Complex64::from_polar(radius.powi(-(k as i32)), -(k as f64) * theta);
        }
    }
    coeffs.iter().map(|x| x / samples as f64).collect()
}

/// Components of `{|p| < level}` on a plain raster: cells whose centre
/// satisfies `|∏(z − a)| < level`, 4-connected, over the zeros' bounding
/// box padded by `pad`.
pub fn raster_count(zeros: &[Complex64], level: f64, res: usize, pad: f64) -> usize {
    let x0 = zeros.iter().map(|z| z.re).fold(f64::INFINITY, f64::min) - pad;
    let x1 = zeros.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) + pad;
    let y0 = zeros.iter().map(|z| z.im).fold(f64::INFINITY, f64::min) - pad;
    let y1 = zeros.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max) + pad;
    let h = (x1 - x0).max(y1 - y0) / res as f64;
    let nx = ((x1 - x0) / h).ceil() as usize;
    let ny = ((y1 - y0) / h).ceil() as usize;
    let inside: Vec<bool> = (0..nx * ny)
        .map(|i| {
            let z = c(x0 + ((i % nx) as f64 + 0.5) * h, y0 + ((i / nx) as f64 + 0.5) * h);
            product(zeros, z).norm() < level
        })
        .collect();
    let mut seen = vec![false; nx * ny];
    let mut count = 0;
    for s in 0..nx * ny {
        if !inside[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            let (x, y) = (i % nx, i / nx);
            let mut nb = Vec::with_capacity(4);
            if x > 0 {
                nb.push(i - 1);
            }
            if x + 1 < nx {
                nb.push(i + 1);
            }
            if y > 0 {
                nb.push(i - nx);
            }
            if y + 1 < ny {
                nb.push(i + nx);
            }
            for j in nb {
                if inside[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}
