//! Simultaneous (Aberth–Ehrlich) root finding with multiplicity clustering.
//!
//! Two entry points share the iteration and the clustering:
//!
//! * [`all_roots`] works on a [`CoefficientVector`] with Horner evaluation.
//! * [`critical_points`] never expands `p`: it solves `Σ k_i/(z − a_i) = 0`
//!   over the distinct zeros `a_i` (multiplicities `k_i`) of `p`, so it works
//!   for any degree. Repeated zeros of `p` contribute critical points of
//!   multiplicity `k_i − 1` directly.
//!
//! A multiple root cannot be resolved below roughly `ε^{1/m}` in double
//! precision, so the approximations of an `m`-fold root end up on a small
//! ring. Roots are merged when they are within the cluster radius or when
//! their Weierstrass inclusion discs (inflated by the evaluation noise)
//! overlap. A merged cluster of size `m` is then refined by Newton's method
//! on the `(m−1)`-th derivative of the target, where the root is simple.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{lexicographic, CoefficientVector, MonicPolynomial, SAFE_EXPANSION_DEGREE};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

const EPS: f64 = f64::EPSILON;
/// Offset of the initial guesses, as a fraction of the angular spacing.
const POLISH_SWEEPS: usize = 3;

/// Irrational so that no guess lands on a symmetry axis of the target.
const ROTATION: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl SolverOptions {
    /// Roots closer than this are always merged.
    pub fn cluster_radius(&self) -> f64 {
        (self.tol * 100.0).max(1e-7)
    }

    fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub point: Complex64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Max over returned roots of `|q(r)| / Σ|c_k||r|^k`.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.point, r.multiplicity))
            .collect()
    }
}

pub fn all_roots(c: &CoefficientVector, tol: f64, max_iter: usize) -> Result<RootSet> {
    all_roots_with(c, SolverOptions { tol, max_iter })
}

pub fn all_roots_with(c: &CoefficientVector, opts: SolverOptions) -> Result<RootSet> {
    opts.validate()?;
    let degree = c.degree();
    if degree == 0 {
        return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
    }
    let lead = c.leading();
    if lead.norm() == 0.0 {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    let monic = CoefficientVector {
        coeffs: c.coeffs.iter().map(|&a| a / lead).collect(),
    };

    // Exactly vanishing low-order coefficients are exact roots at 0.
    let zero_roots = monic.coeffs.iter().take_while(|a| a.norm() == 0.0).count();
    let reduced = CoefficientVector {
        coeffs: monic.coeffs[zero_roots..].to_vec(),
    };

    let mut approx: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); zero_roots];
    let mut radii: Vec<f64> = vec![0.0; zero_roots];
    let mut iterations = 0;
    let mut converged = true;

    if reduced.degree() == 1 {
        approx.push(-reduced.coeffs[0]);
        radii.push(0.0);
    } else if reduced.degree() > 1 {
        let run = aberth_coefficients(&reduced, opts);
        iterations = run.iterations;
        converged = run.converged;
        radii.extend(inclusion_radii_coefficients(&reduced, &run.points));
        approx.extend(run.points);
    }

    let clusters: Vec<Vec<usize>> = cluster(&approx, &radii, opts.cluster_radius())
        .into_iter()
        .flat_map(|members| {
            if members.len() == 1 || is_numerical_multiple(&monic, &approx, &members, opts.cluster_radius()) {
                vec![members]
            } else {
                members.into_iter().map(|i| vec![i]).collect()
            }
        })
        .collect();
    let mut roots: Vec<Root> = clusters
        .iter()
        .map(|members| {
            let point = if members.len() == 1 {
                approx[members[0]]
            } else {
                refine_cluster(&monic, &approx, members, opts.cluster_radius())
            };
            Root {
                point,
                multiplicity: members.len(),
            }
        })
        .collect();
    roots.sort_by(|a, b| lexicographic(&a.point, &b.point));

    let residual = roots
        .iter()
        .map(|r| {
            let s = monic.abs_scale(r.point);
            if s == 0.0 {
                0.0
            } else {
                monic.evaluate(r.point).norm() / s
            }
        })
        .fold(0.0, f64::max);

    let set = RootSet {
        roots,
        residual,
        converged,
        iterations,
    };
    if converged {
        Ok(set)
    } else {
        Err(Error::NotConverged {
            iterations,
            residual,
            partial: Box::new(set),
        })
    }
}

/// All solutions of `q(z) = target`.
pub fn solve_preimages(c: &CoefficientVector, target: Complex64) -> Result<RootSet> {
    let opts = SolverOptions::default();
    all_roots_with(&c.minus_constant(target), opts)
}

struct AberthRun {
    points: Vec<Complex64>,
    iterations: usize,
    converged: bool,
}

/// Fujiwara's bound on the moduli of the roots of a monic polynomial.
fn fujiwara_bound(monic: &CoefficientVector) -> f64 {
    let n = monic.degree();
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let a = monic.coeffs[n - k].norm();
        let term = if k == n { (a / 2.0).powf(1.0 / k as f64) } else { a.powf(1.0 / k as f64) };
        bound = bound.max(term);
    }
    2.0 * bound
}

fn initial_guesses(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let theta = 2.0 * PI * (k as f64 + ROTATION) / count as f64;
            center + Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn aberth_coefficients(q: &CoefficientVector, opts: SolverOptions) -> AberthRun {
    let n = q.degree();
    let dq = q.derivative();
    let mut z = initial_guesses(Complex64::new(0.0, 0.0), 1.0 + fujiwara_bound(q), n);
    let mut done = vec![false; n];
    let mut iterations = 0;
    let noise_factor = 4.0 * n as f64 * EPS;

    while iterations < opts.max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let v = q.evaluate(zi);
            // At the noise floor one last step is still taken: it moves the
            // point by at most the noise radius and usually sharpens it.
            let at_floor = v.norm() <= noise_factor * q.norm_scale(zi);
            let dv = dq.evaluate(zi);
            let w = aberth_step(v, dv, &z, i);
            z[i] = zi - w;
            if !crate::poly::is_finite(z[i]) {
                return AberthRun {
                    points: z,
                    iterations,
                    converged: false,
                };
            }
            if at_floor || w.norm() <= opts.tol * zi.norm().max(1.0) {
                done[i] = true;
            }
        }
    }
    // A point frozen at the noise floor can still sit far from an
    // ill-conditioned root while its neighbours moved on; a few joint sweeps
    // bring every point down to the rounding level.
    if done.iter().all(|&d| d) {
        for _ in 0..POLISH_SWEEPS {
            for i in 0..n {
                let w = aberth_step(q.evaluate(z[i]), dq.evaluate(z[i]), &z, i);
                let next = z[i] - w;
                if crate::poly::is_finite(next) {
                    z[i] = next;
                }
            }
        }
    }
    AberthRun {
        points: z,
        iterations,
        converged: done.iter().all(|&d| d),
    }
}

/// Aberth correction given the Newton pair `(v, dv)` at `z[i]`.
fn aberth_step(v: Complex64, dv: Complex64, z: &[Complex64], i: usize) -> Complex64 {
    let zi = z[i];
    let repulsion: Complex64 = z
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &zj)| {
            let d = zi - zj;
            if d.norm_sqr() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                d.inv()
            }
        })
        .sum();
    if dv.norm_sqr() == 0.0 {
        // Stationary point of q: nudge instead of dividing by zero.
        return Complex64::new(1e-8 * zi.norm().max(1.0), 0.0);
    }
    let newton = v / dv;
    let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
    if denom.norm_sqr() == 0.0 {
        newton
    } else {
        newton / denom
    }
}

/// Weierstrass inclusion radii `d·|q(z_i)| / ∏_{j≠i}|z_i − z_j|`, with
/// `|q(z_i)|` floored at the typical rounding noise `√d·eps·Σ|c_k||z|^k`.
fn inclusion_radii_coefficients(q: &CoefficientVector, z: &[Complex64]) -> Vec<f64> {
    let d = z.len() as f64;
    let noise_factor = d.sqrt() * EPS;
    (0..z.len())
        .map(|i| {
            let v = q.evaluate(z[i]).norm().max(noise_factor * q.norm_scale(z[i]));
            inclusion_radius(d.ln() + v.ln(), z, i)
        })
        .collect()
}

fn inclusion_radius(log_numerator: f64, z: &[Complex64], i: usize) -> f64 {
    let mut log_den = 0.0;
    for (j, &zj) in z.iter().enumerate() {
        if j == i {
            continue;
        }
        let dist = (z[i] - zj).norm();
        if dist == 0.0 {
            return f64::INFINITY;
        }
        log_den += dist.ln();
    }
    (log_numerator - log_den).exp()
}

/// Union-find clustering; clusters are ordered by their smallest member.
fn cluster(points: &[Complex64], radii: &[f64], min_radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (points[i] - points[j]).norm();
            if dist <= min_radius.max(radii[i] + radii[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Whether a cluster of `m` approximants is as tight as rounding noise can
/// spread an `m`-fold root: spread ≤ 2·(√d·eps·Σ|c_k||z|^k / |q^{(m)}/m!|)^{1/m}
/// at the centroid. Overlapping inclusion discs of distinct but close roots
/// fail this and are kept apart.
fn is_numerical_multiple(q: &CoefficientVector, approx: &[Complex64], members: &[usize], min_radius: f64) -> bool {
    let m = members.len();
    let centroid = members.iter().map(|&i| approx[i]).sum::<Complex64>() / m as f64;
    let spread = members
        .iter()
        .map(|&i| (approx[i] - centroid).norm())
        .fold(0.0, f64::max);
    if spread <= min_radius {
        return true;
    }
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let top = q.nth_derivative(m).evaluate(centroid).norm() / factorial;
    if top == 0.0 {
        return true;
    }
    let noise = (q.degree() as f64).sqrt() * EPS * q.norm_scale(centroid);
    spread <= 2.0 * (noise / top).powf(1.0 / m as f64)
}

/// Centroid of the cluster, polished by Newton on `q^{(m−1)}` when that stays
/// inside the cluster.
fn refine_cluster(q: &CoefficientVector, approx: &[Complex64], members: &[usize], min_radius: f64) -> Complex64 {
    let m = members.len();
    let centroid = members.iter().map(|&i| approx[i]).sum::<Complex64>() / m as f64;
    let spread = members
        .iter()
        .map(|&i| (approx[i] - centroid).norm())
        .fold(0.0, f64::max);
    let f = q.nth_derivative(m - 1);
    let df = f.derivative();
    let mut x = centroid;
    for _ in 0..30 {
        let dv = df.evaluate(x);
        if dv.norm_sqr() == 0.0 {
            break;
        }
        let step = f.evaluate(x) / dv;
        if !crate::poly::is_finite(step) {
            return centroid;
        }
        x -= step;
        if step.norm() <= 4.0 * EPS * x.norm().max(1.0) {
            break;
        }
    }
    if (x - centroid).norm() <= spread + min_radius {
        x
    } else {
        centroid
    }
}

// ---------------------------------------------------------------------------
// Critical points

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: Complex64,
    pub multiplicity: usize,
    /// `|p(point)|`; may be `inf` for huge degree, see `log_value`.
    pub value: f64,
    /// `log|p(point)|`, `-inf` at a repeated zero of `p`.
    pub log_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet {
    pub entries: Vec<CriticalPoint>,
    pub iterations: usize,
}

impl CriticalSet {
    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// Distinct zeros with multiplicities, in order of first appearance. Zeros
/// within a few ulps of each other count as the same zero.
pub(crate) fn group_zeros(zeros: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &z in zeros {
        let tol = 4.0 * EPS * z.norm().max(1.0);
        match groups.iter_mut().find(|(a, _)| (*a - z).norm() <= tol) {
            Some(g) => g.1 += 1,
            None => groups.push((z, 1)),
        }
    }
    groups
}

pub fn critical_points(p: &MonicPolynomial) -> Result<CriticalSet> {
    critical_points_with(p, SolverOptions::default())
}

pub fn critical_points_with(p: &MonicPolynomial, opts: SolverOptions) -> Result<CriticalSet> {
    opts.validate()?;
    let n = p.degree();
    if n < 2 {
        return Err(Error::InvalidArgument("critical points need degree at least 2".into()));
    }
    let groups = group_zeros(p.zeros());
    let mut entries: Vec<CriticalPoint> = groups
        .iter()
        .filter(|(_, k)| *k >= 2)
        .map(|&(a, k)| CriticalPoint {
            point: a,
            multiplicity: k - 1,
            value: 0.0,
            log_value: f64::NEG_INFINITY,
        })
        .collect();

    let mut iterations = 0;
    if groups.len() >= 2 {
        let run = aberth_product_form(&groups, n, opts);
        iterations = run.iterations;
        let radii = inclusion_radii_product_form(&groups, n, &run.points);
        let clusters = cluster(&run.points, &radii, opts.cluster_radius());
        if !run.converged {
            let partial = RootSet {
                roots: run.points.iter().map(|&point| Root { point, multiplicity: 1 }).collect(),
                residual: f64::NAN,
                converged: false,
                iterations,
            };
            return Err(Error::NotConverged {
                iterations,
                residual: f64::NAN,
                partial: Box::new(partial),
            });
        }
        let expanded = if n <= SAFE_EXPANSION_DEGREE && clusters.iter().any(|c| c.len() > 1) {
            Some(p.coefficients()?)
        } else {
            None
        };
        for members in &clusters {
            let m = members.len();
            let point = if m == 1 {
                run.points[members[0]]
            } else if let Some(coeffs) = &expanded {
                // p' has an m-fold root here, so p^{(m)} = (p')^{(m-1)} has a simple one.
                refine_cluster(&coeffs.derivative(), &run.points, members, opts.cluster_radius())
            } else {
                members.iter().map(|&i| run.points[i]).sum::<Complex64>() / m as f64
            };
            let log_value = p.log_abs_evaluate(point);
            entries.push(CriticalPoint {
                point,
                multiplicity: m,
                value: log_value.exp(),
                log_value,
            });
        }
    }
    entries.sort_by(|a, b| lexicographic(&a.point, &b.point));
    debug_assert_eq!(entries.iter().map(|e| e.multiplicity).sum::<usize>(), n - 1);
    Ok(CriticalSet { entries, iterations })
}

/// Sums over distinct zeros at `z`: `(S, S₁, T, |S| noise)` where
/// `S = Σ k/(z−a)`, `S₁ = Σ 1/(z−a)`, `T = Σ k/(z−a)²`.
fn product_sums(groups: &[(Complex64, usize)], z: Complex64) -> Option<(Complex64, Complex64, Complex64, f64)> {
    let mut s = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut t = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for &(a, k) in groups {
        let d = z - a;
        if d.norm_sqr() == 0.0 {
            return None;
        }
        let inv = d.inv();
        let kf = k as f64;
        s += inv * kf;
        s1 += inv;
        t += inv * inv * kf;
        abs_sum += kf * inv.norm();
    }
    let noise = 4.0 * groups.len() as f64 * EPS * abs_sum;
    Some((s, s1, t, noise))
}

fn aberth_product_form(groups: &[(Complex64, usize)], n: usize, opts: SolverOptions) -> AberthRun {
    let d = groups.len() - 1;
    let center = groups.iter().map(|&(a, k)| a * k as f64).sum::<Complex64>() / n as f64;
    let spread = groups.iter().map(|&(a, _)| (a - center).norm()).fold(0.0, f64::max);
    let radius = 0.5 * spread;
    let mut z = initial_guesses(center, radius, d);
    let mut done = vec![false; d];
    let mut iterations = 0;

    while iterations < opts.max_iter && done.iter().any(|x| !x) {
        iterations += 1;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let Some((s, s1, t, noise)) = product_sums(groups, zi) else {
                z[i] = zi + Complex64::new(1e-8 * radius, 1e-8 * radius);
                continue;
            };
            if s.norm() <= noise {
                done[i] = true;
                continue;
            }
            // R = q·S with q = ∏(z − a_i), so R/R′ = S / (S₁S − T).
            let w = aberth_step(s, s1 * s - t, &z, i);
            z[i] = zi - w;
            if !crate::poly::is_finite(z[i]) {
                return AberthRun {
                    points: z,
                    iterations,
                    converged: false,
                };
            }
            if w.norm() <= opts.tol * zi.norm().max(radius) {
                done[i] = true;
            }
        }
    }
    AberthRun {
        points: z,
        iterations,
        converged: done.iter().all(|&x| x),
    }
}

fn inclusion_radii_product_form(groups: &[(Complex64, usize)], n: usize, z: &[Complex64]) -> Vec<f64> {
    let d = z.len() as f64;
    (0..z.len())
        .map(|i| match product_sums(groups, z[i]) {
            None => f64::INFINITY,
            Some((s, _, _, noise)) => {
                // |R(z)| = |S(z)|·∏|z − a_l|, leading coefficient n.
                let log_q: f64 = groups.iter().map(|&(a, _)| (z[i] - a).norm().ln()).sum();
                let log_num = d.ln() + s.norm().max(noise).ln() + log_q - (n as f64).ln();
                inclusion_radius(log_num, z, i)
            }
        })
        .collect()
}
