//! Raster flood fill of the sublevel set.
//!
//! Cells are classified by the sign of `log|p| − log(level)` at their centre,
//! with a rounding tolerance so that only certainly-inside centres count.
//! Components smaller than a cell are handled by certified discs: a circle
//! around a zero on which `|p| ≥ level` holds at every sample, with enough
//! samples that `log|p|` cannot dip below the level between them. The disc
//! is then rasterized on its own, recursively. A raster component carrying
//! no zero means the grid is too coarse and the resolution is doubled.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_level, ComponentReport, CountMethod};
use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;

pub const MIN_GRID_RESOLUTION: usize = 64;
pub const MAX_GRID_RESOLUTION: usize = 8192;

const LOCAL_RESOLUTION: usize = 64;
const MAX_LOCAL_RESOLUTION: usize = 512;
const MAX_DEPTH: usize = 12;
const PADDING: f64 = 1.05;
const SEGMENT_SAMPLES: usize = 16;
const CHUNK: usize = 8;

/// Zero indices grouped by the component of the sublevel set containing them.
#[derive(Clone, Debug, PartialEq)]
pub struct GridComponents {
    pub components: Vec<Vec<usize>>,
    /// Top-level resolution that succeeded.
    pub resolution: usize,
}

impl GridComponents {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn per_zero_isolated(&self, degree: usize) -> Vec<bool> {
        let mut isolated = vec![false; degree];
        for comp in &self.components {
            if let [j] = comp[..] {
                isolated[j] = true;
            }
        }
        isolated
    }
}

pub fn count_by_grid(p: &MonicPolynomial, resolution: usize, level: f64) -> Result<ComponentReport> {
    let grid = grid_components(p, resolution, level)?;
    Ok(ComponentReport {
        degree: p.degree(),
        count: grid.count(),
        method: CountMethod::Grid,
        margin: f64::NAN,
        ambiguous: false,
        per_zero_isolated: Some(grid.per_zero_isolated(p.degree())),
    })
}

/// Assigns every zero to a component. Starts at `resolution` and doubles up
/// to [`MAX_GRID_RESOLUTION`] while the raster shows a component with no zero.
pub fn grid_components(p: &MonicPolynomial, resolution: usize, level: f64) -> Result<GridComponents> {
    check_level(level)?;
    if resolution < MIN_GRID_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least {MIN_GRID_RESOLUTION}, got {resolution}"
        )));
    }
    let zeros = p.zeros();
    let n = zeros.len();
    let field = Field {
        zeros,
        log_level: level.ln(),
    };
    let ids: Vec<usize> = (0..n).collect();
    if n == 1 {
        return Ok(GridComponents {
            components: vec![ids],
            resolution,
        });
    }
    // Λ lies within distance level^{1/n} of the zeros.
    let pad = PADDING * level.powf(1.0 / n as f64).max(1.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in zeros {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let mut res = resolution;
    loop {
        let window = Window::covering(x0 - pad, x1 + pad, y0 - pad, y1 + pad, res);
        match region(&field, &ids, &window, None, 0) {
            Ok(mut components) => {
                for c in &mut components {
                    c.sort_unstable();
                }
                components.sort();
                return Ok(GridComponents {
                    components,
                    resolution: res,
                });
            }
            Err(_) if res * 2 <= MAX_GRID_RESOLUTION => res *= 2,
            Err(reason) => return Err(Error::UnderResolved { resolution: res, reason }),
        }
    }
}

/// A radius `r` such that `B(z_j, r)` holds no other zero and `|p| ≥ level`
/// on its boundary, certified as for the grid's discs; `None` if the ladder
/// from the single-zero estimate up to the nearest other zero finds none.
/// A returned radius proves that zero `j` is alone in its component.
pub fn certified_isolation_radius(p: &MonicPolynomial, j: usize, level: f64) -> Option<f64> {
    let zeros = p.zeros();
    let zj = *zeros.get(j)?;
    let spacing = zeros
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &z)| (z - zj).norm())
        .fold(f64::INFINITY, f64::min);
    if spacing == 0.0 || level.is_nan() || level <= 0.0 {
        return None;
    }
    let field = Field {
        zeros,
        log_level: level.ln(),
    };
    let log_rest: f64 = zeros
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &z)| (z - zj).norm().ln())
        .sum();
    let mut radius = 2.0 * (field.log_level - log_rest).exp();
    while radius < spacing {
        if field.circle_outside(Disk { center: zj, radius }) {
            return Some(radius);
        }
        radius *= 2.0;
    }
    None
}

/// Whether every raster cell of the sublevel set at `resolution` lies
/// within `radius` plus half a cell diagonal of some zero.
pub fn raster_within_balls(p: &MonicPolynomial, resolution: usize, level: f64, radius: f64) -> Result<bool> {
    check_level(level)?;
    let zeros = p.zeros();
    let field = Field {
        zeros,
        log_level: level.ln(),
    };
    let pad = PADDING * level.powf(1.0 / zeros.len() as f64).max(1.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in zeros {
        x0 = x0.min(z.re - pad);
        x1 = x1.max(z.re + pad);
        y0 = y0.min(z.im - pad);
        y1 = y1.max(z.im + pad);
    }
    let win = Window::covering(x0, x1, y0, y1, resolution.max(MIN_GRID_RESOLUTION));
    let reach = radius + win.cell * std::f64::consts::FRAC_1_SQRT_2;
    let inside = rasterize(&field, &win, None).inside;
    Ok(inside.iter().enumerate().filter(|(_, &b)| b).all(|(i, _)| {
        let z = win.center(i % win.nx, i / win.nx);
        zeros.iter().any(|&a| (z - a).norm() <= reach)
    }))
}

struct Field<'a> {
    zeros: &'a [Complex64],
    log_level: f64,
}

impl Field<'_> {
    /// `log|p(z)|` with a bound on its rounding error. Products of a few
    /// factors are formed before taking logarithms.
    fn log_abs(&self, z: Complex64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut mass = 0.0;
        for chunk in self.zeros.chunks(CHUNK) {
            let mut prod = 1.0;
            for &a in chunk {
                prod *= (z - a).norm_sqr();
            }
            let l = if prod.is_normal() {
                0.5 * prod.ln()
            } else {
                let mut s = 0.0;
                for &a in chunk {
                    let d = (z - a).norm();
                    if d == 0.0 {
                        return (f64::NEG_INFINITY, 0.0);
                    }
                    s += d.ln();
                }
                s
            };
            sum += l;
            mass += l.abs();
        }
        (sum, 16.0 * f64::EPSILON * (self.zeros.len() as f64 + mass))
    }

    fn inside(&self, z: Complex64) -> bool {
        let (v, tol) = self.log_abs(z);
        v < self.log_level - tol
    }

    /// Whether `|p| ≥ level` on the whole circle. Sample spacing is refined
    /// until the margin at each sample exceeds the possible variation of
    /// `log|p|` to the neighbouring samples, bounded through `|p′/p|`.
    fn circle_outside(&self, disk: Disk) -> bool {
        let near = self
            .zeros
            .iter()
            .filter(|&&a| (a - disk.center).norm() < 3.0 * disk.radius)
            .count();
        let mut samples = 256 + 64 * near;
        for _ in 0..4 {
            let step = std::f64::consts::TAU / samples as f64;
            let mut refine = false;
            for s in 0..samples {
                let z = disk.center + Complex64::from_polar(disk.radius, s as f64 * step);
                let mut value = 0.0;
                let mut slope = 0.0;
                let mut mass = 0.0;
                for &a in self.zeros {
                    let d = (z - a).norm();
                    let l = d.ln();
                    value += l;
                    mass += l.abs();
                    slope += 1.0 / d;
                }
                let margin = value - self.log_level - 16.0 * f64::EPSILON * (self.zeros.len() as f64 + mass);
                if margin.is_nan() || margin <= 0.0 {
                    return false;
                }
                if margin <= 0.75 * step * disk.radius * slope {
                    refine = true;
                    break;
                }
            }
            if !refine {
                return true;
            }
            samples *= 2;
        }
        false
    }
}

#[derive(Clone, Copy, Debug)]
struct Disk {
    center: Complex64,
    radius: f64,
}

impl Disk {
    fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Square cells covering a rectangle, centred on it.
struct Window {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
}

impl Window {
    fn covering(x0: f64, x1: f64, y0: f64, y1: f64, res: usize) -> Self {
        let (w, h) = (x1 - x0, y1 - y0);
        let cell = w.max(h) / res as f64;
        let nx = ((w / cell).ceil() as usize).clamp(1, res);
        let ny = ((h / cell).ceil() as usize).clamp(1, res);
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        Window {
            x0: cx - 0.5 * nx as f64 * cell,
            y0: cy - 0.5 * ny as f64 * cell,
            cell,
            nx,
            ny,
        }
    }

    fn center(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.x0 + (ix as f64 + 0.5) * self.cell,
            self.y0 + (iy as f64 + 0.5) * self.cell,
        )
    }

    fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fx = ((z.re - self.x0) / self.cell).floor();
        let fy = ((z.im - self.y0) / self.cell).floor();
        if fx >= 0.0 && fy >= 0.0 && (fx as usize) < self.nx && (fy as usize) < self.ny {
            Some((fx as usize, fy as usize))
        } else {
            None
        }
    }
}

/// Cell centres inside the lemniscate, and those whose margin exceeds the
/// variation of `log|p|` over a cell width (bounded through `|p′/p|`). Two
/// neighbouring inside cells are joined directly when either is solid, and
/// otherwise only if the segment between their centres stays inside. This
/// keeps components that touch at a single point apart.
struct Raster {
    inside: Vec<bool>,
    solid: Vec<bool>,
}

fn rasterize(field: &Field, win: &Window, mask: Option<Disk>) -> Raster {
    let mut cells = vec![(false, false); win.nx * win.ny];
    cells.par_chunks_mut(win.nx).enumerate().for_each(|(iy, row)| {
        for (ix, cell) in row.iter_mut().enumerate() {
            let z = win.center(ix, iy);
            if !mask.is_none_or(|m| m.contains(z)) {
                continue;
            }
            let (v, tol) = field.log_abs(z);
            let margin = field.log_level - tol - v;
            if margin > 0.0 {
                let slope: f64 = field.zeros.iter().map(|&a| 1.0 / (z - a).norm()).sum();
                *cell = (true, margin > 1.5 * win.cell * slope);
            }
        }
    });
    let (inside, solid) = cells.into_iter().unzip();
    Raster { inside, solid }
}

const UNLABELED: u32 = u32::MAX;

/// 4-connected labelling of the inside cells.
fn label(field: &Field, win: &Window, mask: Option<Disk>, raster: &Raster) -> (Vec<u32>, usize) {
    let (nx, ny) = (win.nx, win.ny);
    let Raster { inside, solid } = raster;
    let mut labels = vec![UNLABELED; inside.len()];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..inside.len() {
        if !inside[start] || labels[start] != UNLABELED {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (ix, iy) = (i % nx, i / nx);
            let mut visit = |j: usize| {
                if inside[j]
                    && labels[j] == UNLABELED
                    && (solid[i]
                        || solid[j]
                        || segment_inside(field, win.center(ix, iy), win.center(j % nx, j / nx), mask))
                {
                    labels[j] = next;
                    stack.push(j);
                }
            };
            if ix > 0 {
                visit(i - 1);
            }
            if ix + 1 < nx {
                visit(i + 1);
            }
            if iy > 0 {
                visit(i - nx);
            }
            if iy + 1 < ny {
                visit(i + nx);
            }
        }
        next += 1;
    }
    (labels, next as usize)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn segment_inside(field: &Field, a: Complex64, b: Complex64, mask: Option<Disk>) -> bool {
    (1..=SEGMENT_SAMPLES).all(|k| {
        let z = a + (b - a) * (k as f64 / SEGMENT_SAMPLES as f64);
        mask.is_none_or(|m| m.contains(z)) && field.inside(z)
    })
}

/// Smallest circle around zero `j` from a doubling ladder on which
/// `|p| ≥ level`, starting near the radius where the nearest-zero factor
/// alone reaches the level.
fn certify_disk(field: &Field, j: usize, max_radius: f64, mask: Option<Disk>, taken: &[Disk]) -> Option<Disk> {
    let zj = field.zeros[j];
    let tiny = 1e-12 * (1.0 + zj.norm());
    let mut k = 0usize;
    let mut log_rest = 0.0;
    for &a in field.zeros {
        let d = (a - zj).norm();
        if d <= tiny {
            k += 1;
        } else {
            log_rest += d.ln();
        }
    }
    let estimate = ((field.log_level - log_rest) / k as f64).exp();
    let mut radius = (2.0 * estimate).max(4.0 * tiny);
    while radius <= max_radius {
        if let Some(m) = mask {
            if (zj - m.center).norm() + radius >= m.radius {
                return None;
            }
        }
        let disk = Disk { center: zj, radius };
        let clear = taken.iter().all(|d| (d.center - zj).norm() > d.radius + radius);
        if clear && field.circle_outside(disk) {
            return Some(disk);
        }
        radius *= 2.0;
    }
    None
}

/// Components of `Λ ∩ window` (restricted to `mask`), as lists of the zero
/// indices `ids` they contain. `Err` carries the reason the raster is too
/// coarse.
fn region(
    field: &Field,
    ids: &[usize],
    win: &Window,
    mask: Option<Disk>,
    depth: usize,
) -> std::result::Result<Vec<Vec<usize>>, String> {
    if depth > MAX_DEPTH {
        return Err("certified discs nested too deeply".into());
    }
    let raster = rasterize(field, win, mask);
    let (labels, nlabels) = label(field, win, mask, &raster);
    let inside = &raster.inside;
    let mut parent: Vec<usize> = (0..nlabels).collect();

    let mut zero_label: Vec<(usize, usize)> = Vec::new();
    let mut unresolved: Vec<usize> = Vec::new();
    for &j in ids {
        let zj = field.zeros[j];
        let Some((cx, cy)) = win.cell_of(zj) else {
            unresolved.push(j);
            continue;
        };
        let own = cy * win.nx + cx;
        if inside[own] && segment_inside(field, zj, win.center(cx, cy), mask) {
            zero_label.push((j, labels[own] as usize));
            continue;
        }
        let mut attached: Option<usize> = None;
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (ix, iy) = (cx as i64 + dx, cy as i64 + dy);
                if (dx, dy) == (0, 0) || ix < 0 || iy < 0 || ix >= win.nx as i64 || iy >= win.ny as i64 {
                    continue;
                }
                let (ix, iy) = (ix as usize, iy as usize);
                let cell = iy * win.nx + ix;
                if !inside[cell] || !segment_inside(field, zj, win.center(ix, iy), mask) {
                    continue;
                }
                let l = labels[cell] as usize;
                match attached {
                    None => attached = Some(l),
                    Some(a) => {
                        let (ra, rl) = (find(&mut parent, a), find(&mut parent, l));
                        parent[ra] = rl;
                    }
                }
            }
        }
        match attached {
            Some(l) => zero_label.push((j, l)),
            None => unresolved.push(j),
        }
    }

    // Certified discs for the zeros the raster cannot see.
    let mut disks: Vec<(Disk, Vec<usize>)> = Vec::new();
    let mut covered = vec![false; field.zeros.len()];
    for &j in &unresolved {
        if covered[j] {
            continue;
        }
        let taken: Vec<Disk> = disks.iter().map(|d| d.0).collect();
        let disk = certify_disk(field, j, 2.0 * win.cell, mask, &taken)
            .ok_or_else(|| format!("no certified circle around zero {j}"))?;
        let members: Vec<usize> = ids.iter().copied().filter(|&i| disk.contains(field.zeros[i])).collect();
        for &i in &members {
            covered[i] = true;
        }
        disks.push((disk, members));
    }

    // Raster components touching a disc must lie inside it and are then
    // counted by the disc's own raster.
    let mut in_disk = vec![false; nlabels];
    let mut out_disk = vec![false; nlabels];
    for iy in 0..win.ny {
        for ix in 0..win.nx {
            let cell = iy * win.nx + ix;
            if !inside[cell] {
                continue;
            }
            let root = find(&mut parent, labels[cell] as usize);
            let z = win.center(ix, iy);
            if disks.iter().any(|(d, _)| d.contains(z)) {
                in_disk[root] = true;
            } else {
                out_disk[root] = true;
            }
        }
    }
    let mut zeros_of: Vec<Vec<usize>> = vec![Vec::new(); nlabels];
    for &(j, l) in &zero_label {
        let root = find(&mut parent, l);
        if in_disk[root] {
            if out_disk[root] {
                return Err("raster component crosses a certified circle".into());
            }
            if !covered[j] {
                return Err(format!("zero {j} lost inside a certified disc"));
            }
        } else {
            if covered[j] {
                return Err(format!("zero {j} split from its certified disc"));
            }
            zeros_of[root].push(j);
        }
    }
    let mut components = Vec::new();
    for root in 0..nlabels {
        if find(&mut parent, root) != root || in_disk[root] {
            continue;
        }
        if zeros_of[root].is_empty() {
            return Err("raster component without a zero".into());
        }
        components.push(std::mem::take(&mut zeros_of[root]));
    }

    for (disk, members) in &disks {
        let mut res = LOCAL_RESOLUTION;
        let sub = loop {
            let local = Window::covering(
                disk.center.re - disk.radius,
                disk.center.re + disk.radius,
                disk.center.im - disk.radius,
                disk.center.im + disk.radius,
                res,
            );
            match region(field, members, &local, Some(*disk), depth + 1) {
                Ok(sub) => break sub,
                Err(_) if res * 2 <= MAX_LOCAL_RESOLUTION => res *= 2,
                Err(reason) => return Err(reason),
            }
        };
        components.extend(sub);
    }
    Ok(components)
}
