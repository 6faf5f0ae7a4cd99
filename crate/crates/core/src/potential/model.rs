use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_finite, CoefficientVector};
use crate::rootfind::solve_preimages;

const MIN_CURVE_POINTS: usize = 64;
const DIAMETER_SAMPLES: usize = 1024;

/// A compact subset of the plane. Points serialize as `[re, im]`,
/// coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CompactSetModel {
    Disk { center: Complex64, radius: f64 },
    Circle { center: Complex64, radius: f64 },
    Segment { a: Complex64, b: Complex64 },
    /// Polyline through `points`, joined back to the start when `closed`.
    JordanCurve { points: Vec<Complex64>, closed: bool },
    /// `{z : |Q(z)| ≤ radius}` for monic `Q`.
    LemniscatePreimage { coefficients: Vec<Complex64>, radius: f64 },
    /// `P^{-1}([−2, 2])` for monic `P`.
    PeriodM { coefficients: Vec<Complex64> },
    Union { parts: Vec<CompactSetModel> },
}

impl CompactSetModel {
    pub fn unit_circle() -> Self {
        CompactSetModel::Circle {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let k: CompactSetModel = serde_json::from_str(s)?;
        k.validate()?;
        Ok(k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set models serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let radius_ok = |r: f64| {
            if r.is_finite() && r > 0.0 {
                Ok(())
            } else {
                Err(Error::DegenerateSet(format!("radius must be positive, got {r}")))
            }
        };
        let point_ok = |z: Complex64| if is_finite(z) { Ok(()) } else { Err(Error::NonFinite("set parameters")) };
        match self {
            CompactSetModel::Disk { center, radius } | CompactSetModel::Circle { center, radius } => {
                point_ok(*center)?;
                radius_ok(*radius)
            }
            CompactSetModel::Segment { a, b } => {
                point_ok(*a)?;
                point_ok(*b)?;
                if a == b {
                    return Err(Error::DegenerateSet("segment endpoints coincide".into()));
                }
                Ok(())
            }
            CompactSetModel::JordanCurve { points, .. } => {
                if points.len() < MIN_CURVE_POINTS {
                    return Err(Error::DegenerateSet(format!(
                        "sampled curves need at least {MIN_CURVE_POINTS} points, got {}",
                        points.len()
                    )));
                }
                points.iter().try_for_each(|&z| point_ok(z))
            }
            CompactSetModel::LemniscatePreimage { coefficients, radius } => {
                Self::generating(coefficients)?;
                radius_ok(*radius)
            }
            CompactSetModel::PeriodM { coefficients } => Self::generating(coefficients).map(|_| ()),
            CompactSetModel::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::DegenerateSet("empty union".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }

    fn generating(coefficients: &[Complex64]) -> Result<CoefficientVector> {
        let c = CoefficientVector::new(coefficients.to_vec())?;
        if c.degree() < 1 || !c.is_monic() {
            return Err(Error::DegenerateSet("generating polynomial must be monic of degree ≥ 1".into()));
        }
        Ok(c)
    }

    /// Capacity where a closed form is known: `r` for discs and circles,
    /// `|b − a|/4` for segments, `radius^{1/m}` for lemniscate preimages and
    /// `1` for period-m sets (preimages of `[−2, 2]`, capacity 1).
    pub fn known_capacity(&self) -> Option<f64> {
        match self {
            CompactSetModel::Disk { radius, .. } | CompactSetModel::Circle { radius, .. } => Some(*radius),
            CompactSetModel::Segment { a, b } => Some((b - a).norm() / 4.0),
            CompactSetModel::LemniscatePreimage { coefficients, radius } => {
                Some(radius.powf(1.0 / (coefficients.len() - 1) as f64))
            }
            CompactSetModel::PeriodM { .. } => Some(1.0),
            CompactSetModel::JordanCurve { .. } | CompactSetModel::Union { .. } => None,
        }
    }

    /// Points on the outer boundary of the set (the set itself for curves).
    /// Deterministic; roughly `m` points.
    pub fn boundary_points(&self, m: usize) -> Result<Vec<Complex64>> {
        self.validate()?;
        let m = m.max(2);
        Ok(match self {
            CompactSetModel::Disk { center, radius } | CompactSetModel::Circle { center, radius } => (0..m)
                .map(|k| center + Complex64::from_polar(*radius, TAU * k as f64 / m as f64))
                .collect(),
            CompactSetModel::Segment { a, b } => (0..m)
                .map(|k| a + (b - a) * (0.5 * (1.0 - (PI * k as f64 / (m - 1) as f64).cos())))
                .collect(),
            CompactSetModel::JordanCurve { points, closed } => resample_polyline(points, *closed, m),
            CompactSetModel::LemniscatePreimage { coefficients, radius } => {
                let q = Self::generating(coefficients)?;
                let targets = m.div_ceil(q.degree()).max(2);
                let mut out = Vec::with_capacity(targets * q.degree());
                for k in 0..targets {
                    let t = Complex64::from_polar(*radius, TAU * k as f64 / targets as f64);
                    out.extend(solve_preimages(&q, t)?.expanded());
                }
                out
            }
            CompactSetModel::PeriodM { coefficients } => {
                let q = Self::generating(coefficients)?;
                let targets = m.div_ceil(q.degree()).max(2);
                let mut out = Vec::with_capacity(targets * q.degree());
                for k in 0..targets {
                    let t = Complex64::new(2.0 * (PI * k as f64 / (targets - 1) as f64).cos(), 0.0);
                    out.extend(solve_preimages(&q, t)?.expanded());
                }
                out
            }
            CompactSetModel::Union { parts } => {
                let share = m.div_ceil(parts.len()).max(2);
                let mut out = Vec::new();
                for part in parts {
                    out.extend(part.boundary_points(share)?);
                }
                out
            }
        })
    }

    /// Membership up to distance `tol`. For preimage sets `tol` is scaled by
    /// `|Q′(z)|` to act approximately as a distance.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        match self {
            CompactSetModel::Disk { center, radius } => (z - center).norm() <= radius + tol,
            CompactSetModel::Circle { center, radius } => ((z - center).norm() - radius).abs() <= tol,
            CompactSetModel::Segment { a, b } => segment_distance(z, *a, *b) <= tol,
            CompactSetModel::JordanCurve { points, closed } => {
                let mut d = f64::INFINITY;
                for w in points.windows(2) {
                    d = d.min(segment_distance(z, w[0], w[1]));
                }
                if *closed {
                    d = d.min(segment_distance(z, points[points.len() - 1], points[0]));
                }
                d <= tol
            }
            CompactSetModel::LemniscatePreimage { coefficients, radius } => {
                let Ok(q) = CoefficientVector::new(coefficients.clone()) else {
                    return false;
                };
                let slack = tol * q.derivative().evaluate(z).norm().max(1.0);
                q.evaluate(z).norm() <= radius + slack
            }
            CompactSetModel::PeriodM { coefficients } => {
                let Ok(q) = CoefficientVector::new(coefficients.clone()) else {
                    return false;
                };
                let slack = tol * q.derivative().evaluate(z).norm().max(1.0);
                let w = q.evaluate(z);
                w.im.abs() <= slack && w.re.abs() <= 2.0 + slack
            }
            CompactSetModel::Union { parts } => parts.iter().any(|p| p.contains(z, tol)),
        }
    }

    /// Exact for discs, circles and segments; the largest pairwise distance
    /// among boundary samples otherwise.
    pub fn diameter(&self) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            CompactSetModel::Disk { radius, .. } | CompactSetModel::Circle { radius, .. } => 2.0 * radius,
            CompactSetModel::Segment { a, b } => (b - a).norm(),
            _ => {
                let pts = self.boundary_points(DIAMETER_SAMPLES)?;
                let mut d: f64 = 0.0;
                for (i, &p) in pts.iter().enumerate() {
                    for &q in &pts[i + 1..] {
                        d = d.max((p - q).norm());
                    }
                }
                d
            }
        })
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// `m` points equally spaced in arc length along the polyline.
fn resample_polyline(points: &[Complex64], closed: bool, m: usize) -> Vec<Complex64> {
    let mut verts = points.to_vec();
    if closed {
        verts.push(points[0]);
    }
    let mut cumulative = vec![0.0];
    for w in verts.windows(2) {
        cumulative.push(cumulative.last().unwrap() + (w[1] - w[0]).norm());
    }
    let total = *cumulative.last().unwrap();
    if total == 0.0 {
        return vec![points[0]; m];
    }
    let count = if closed { m } else { m - 1 };
    let mut out = Vec::with_capacity(m);
    let mut seg = 0;
    for k in 0..m {
        let s = total * k as f64 / count as f64;
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < s {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let t = if len > 0.0 { ((s - cumulative[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(verts[seg] + (verts[seg + 1] - verts[seg]) * t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_round_trip() {
        let k = CompactSetModel::Union {
            parts: vec![
                CompactSetModel::Segment {
                    a: Complex64::new(2.0, 0.0),
                    b: Complex64::new(2.1, 0.0),
                },
                CompactSetModel::Disk {
                    center: Complex64::new(0.0, 1.0),
                    radius: 0.5,
                },
            ],
        };
        let s = k.to_json();
        assert_eq!(
            s,
            r#"{"variant":"union","parts":[{"variant":"segment","a":[2.0,0.0],"b":[2.1,0.0]},{"variant":"disk","center":[0.0,1.0],"radius":0.5}]}"#
        );
        assert_eq!(CompactSetModel::from_json(&s).unwrap(), k);
        assert!(CompactSetModel::from_json(r#"{"variant":"disk","center":[0,0],"radius":-1}"#).is_err());
    }

    #[test]
    fn boundary_points_lie_in_the_set() {
        let sets = [
            CompactSetModel::unit_circle(),
            CompactSetModel::Segment {
                a: Complex64::new(-1.0, 0.0),
                b: Complex64::new(1.0, 1.0),
            },
            CompactSetModel::PeriodM {
                coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            },
            CompactSetModel::LemniscatePreimage {
                coefficients: vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(3.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ],
                radius: 1.0,
            },
        ];
        for k in &sets {
            for z in k.boundary_points(200).unwrap() {
                assert!(k.contains(z, 1e-9), "{z} not in {k:?}");
            }
        }
    }

    #[test]
    fn segment_endpoints_are_sampled() {
        let k = CompactSetModel::Segment {
            a: Complex64::new(-1.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        };
        let pts = k.boundary_points(5).unwrap();
        assert_eq!(pts[0], Complex64::new(-1.0, 0.0));
        assert!((pts[4] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diameters() {
        let disk = CompactSetModel::Disk {
            center: Complex64::new(0.0, 0.0),
            radius: 0.5,
        };
        assert_eq!(disk.diameter().unwrap(), 1.0);
        let period = CompactSetModel::PeriodM {
            coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        };
        // (z^2)^{-1}([-2,2]) is the cross of half-length sqrt(2).
        assert!((period.diameter().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn polyline_resampling_is_uniform() {
        let square: Vec<Complex64> = (0..64)
            .map(|k| {
                let s = k as f64 / 16.0;
                match k / 16 {
                    0 => Complex64::new(s, 0.0),
                    1 => Complex64::new(1.0, s - 1.0),
                    2 => Complex64::new(3.0 - s, 1.0),
                    _ => Complex64::new(0.0, 4.0 - s),
                }
            })
            .collect();
        let pts = resample_polyline(&square, true, 8);
        assert_eq!(pts.len(), 8);
        assert!((pts[2] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((pts[5] - Complex64::new(0.5, 1.0)).norm() < 1e-12);
    }
}
