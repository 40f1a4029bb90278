//! Planar pictures of profiles: swap-distance matrices, classical MDS and
//! fitting a voter location to a ranking.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;
use crate::sampling::{ranking_at, Point, PointConfig};

/// Largest matrix handed to the eigensolver.
pub const MAX_EIGEN_DIMENSION: usize = 512;
/// Largest alternative count accepted by [`fit_point_for_ranking`].
pub const MAX_FIT_ALTERNATIVES: usize = 12;
/// Offset used to step off a bisector intersection into adjacent cells.
pub const CELL_EPSILON: f64 = 1e-6;
pub const FIT_GRID: usize = 64;
const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// A dense symmetric matrix stored as its lower triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, values: vec![0.0; n * (n + 1) / 2] }
    }

    /// Builds the matrix from `f(i, j)` for `j <= i`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j))?;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(i: usize, j: usize) -> usize {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[Self::slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::OutOfRange(format!("matrix entry ({i}, {j}) is not finite")));
        }
        self.values[Self::slot(i, j)] = v;
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                out[i * self.n + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Pairwise swap distances.
pub fn distance_matrix(rankings: &[Ranking]) -> Result<SymmetricMatrix> {
    if rankings.len() < 2 {
        return Err(Error::OutOfRange("need at least two rankings".into()));
    }
    let mut d = SymmetricMatrix::zeros(rankings.len());
    for i in 0..rankings.len() {
        for j in 0..i {
            d.set(i, j, rankings[i].swap_distance(&rankings[j])? as f64)?;
        }
    }
    Ok(d)
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations.
pub fn jacobi_eigen(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.n();
    if n > MAX_EIGEN_DIMENSION {
        return Err(Error::Capacity { what: "eigensolver dimension", requested: n, limit: MAX_EIGEN_DIMENSION });
    }
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = JACOBI_TOLERANCE * m.frobenius_norm();
    let off = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].powi(2);
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::OutOfRange("Jacobi iteration did not converge".into()));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].total_cmp(&a[x * n + x]));
    Ok(Eigen {
        values: order.iter().map(|&k| a[k * n + k]).collect(),
        vectors: order.iter().map(|&k| (0..n).map(|i| v[i * n + k]).collect()).collect(),
        sweeps,
    })
}

/// A planar layout of a distance matrix.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub coords: Vec<Point>,
    /// Sum over pairs of squared differences between layout and target
    /// distances.
    pub stress: f64,
    pub eigenvalues: Vec<f64>,
    /// Total magnitude of the negative eigenvalues of the centred matrix.
    pub clamped_mass: f64,
}

pub fn stress(coords: &[Point], d: &SymmetricMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..coords.len() {
        for j in 0..i {
            let e = ((coords[i][0] - coords[j][0]).powi(2) + (coords[i][1] - coords[j][1]).powi(2)).sqrt();
            s += (e - d.get(i, j)).powi(2);
        }
    }
    s
}

/// Torgerson scaling into the plane.
pub fn classical_mds(d: &SymmetricMatrix) -> Result<Embedding> {
    let n = d.n();
    if n < 3 {
        return Err(Error::OutOfRange(format!("classical scaling needs at least 3 points, got {n}")));
    }
    let sq = |i: usize, j: usize| d.get(i, j).powi(2);
    let row: Vec<f64> = (0..n).map(|i| (0..n).map(|j| sq(i, j)).sum::<f64>() / n as f64).collect();
    let all = row.iter().sum::<f64>() / n as f64;
    let b = SymmetricMatrix::from_fn(n, |i, j| -0.5 * (sq(i, j) - row[i] - row[j] + all))?;
    let eig = jacobi_eigen(&b)?;
    let mut coords = vec![[0.0; 2]; n];
    for axis in 0..2 {
        let scale = eig.values[axis].max(0.0).sqrt();
        let vec = &eig.vectors[axis];
        let flip = match vec.iter().find(|x| x.abs() * scale > 1e-12) {
            Some(x) if *x < 0.0 => -1.0,
            _ => 1.0,
        };
        for i in 0..n {
            coords[i][axis] = flip * scale * vec[i];
        }
    }
    let clamped_mass = eig.values.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
    Ok(Embedding { stress: stress(&coords, d), coords, eigenvalues: eig.values, clamped_mass })
}

/// Root of the summed squared distances between `a` and `b` after the
/// best rotation or reflection of `a` about the centroids.
pub fn procrustes_residual(a: &[Point], b: &[Point]) -> f64 {
    assert_eq!(a.len(), b.len());
    let centre = |p: &[Point]| {
        let n = p.len() as f64;
        let c = [p.iter().map(|x| x[0]).sum::<f64>() / n, p.iter().map(|x| x[1]).sum::<f64>() / n];
        p.iter().map(|x| [x[0] - c[0], x[1] - c[1]]).collect::<Vec<_>>()
    };
    let b = centre(b);
    let mut best = f64::INFINITY;
    for mirror in [1.0, -1.0] {
        let a: Vec<Point> = centre(a).into_iter().map(|p| [p[0], mirror * p[1]]).collect();
        let dot: f64 = a.iter().zip(&b).map(|(p, q)| p[0] * q[0] + p[1] * q[1]).sum();
        let cross: f64 = a.iter().zip(&b).map(|(p, q)| p[0] * q[1] - p[1] * q[0]).sum();
        let (s, c) = cross.atan2(dot).sin_cos();
        let r: f64 = a
            .iter()
            .zip(&b)
            .map(|(p, q)| (c * p[0] - s * p[1] - q[0]).powi(2) + (s * p[0] + c * p[1] - q[1]).powi(2))
            .sum();
        best = best.min(r);
    }
    best.sqrt()
}

/// Outcome of [`fit_point_for_ranking`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointFit {
    pub point: Point,
    pub achieved: Ranking,
    /// Swap distance between `achieved` and the target.
    pub defect: u64,
}

/// Points where `|x - a|² = |x - b|²`, as `(normal, offset)` with
/// `normal · x = offset`.
fn bisector(a: &Point, b: &Point) -> ([f64; 2], f64) {
    let n = [2.0 * (b[0] - a[0]), 2.0 * (b[1] - a[1])];
    (n, b[0] * b[0] + b[1] * b[1] - a[0] * a[0] - a[1] * a[1])
}

fn fit_candidates(cfg: &PointConfig) -> Vec<Point> {
    let alts = &cfg.alt_points;
    let mut lines = Vec::new();
    let mut out = Vec::new();
    for i in 0..alts.len() {
        for j in i + 1..alts.len() {
            let (n, c) = bisector(&alts[i], &alts[j]);
            let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
            let mid = [(alts[i][0] + alts[j][0]) / 2.0, (alts[i][1] + alts[j][1]) / 2.0];
            let u = [n[0] / len, n[1] / len];
            out.push([mid[0] + CELL_EPSILON * u[0], mid[1] + CELL_EPSILON * u[1]]);
            out.push([mid[0] - CELL_EPSILON * u[0], mid[1] - CELL_EPSILON * u[1]]);
            lines.push((n, c, [-u[1], u[0]]));
        }
    }
    for (k, (n1, c1, d1)) in lines.iter().enumerate() {
        for (n2, c2, d2) in &lines[k + 1..] {
            let det = n1[0] * n2[1] - n1[1] * n2[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = [(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det];
            for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                out.push([
                    x[0] + CELL_EPSILON * (s1 * d1[0] + s2 * d2[0]),
                    x[1] + CELL_EPSILON * (s1 * d1[1] + s2 * d2[1]),
                ]);
            }
        }
    }
    out.extend(cfg.voter_points.iter().copied());
    let all = || cfg.voter_points.iter().chain(alts);
    let lo = [all().map(|p| p[0]).fold(f64::INFINITY, f64::min), all().map(|p| p[1]).fold(f64::INFINITY, f64::min)];
    let hi = [all().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max), all().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max)];
    for gx in 0..FIT_GRID {
        for gy in 0..FIT_GRID {
            let t = |g: usize, k: usize| lo[k] + (hi[k] - lo[k]) * g as f64 / (FIT_GRID - 1) as f64;
            out.push([t(gx, 0), t(gy, 1)]);
        }
    }
    out
}

/// A location whose distance ranking is as close as possible to `target`.
pub fn fit_point_for_ranking(cfg: &PointConfig, target: &Ranking) -> Result<PointFit> {
    let m = cfg.m();
    if m > MAX_FIT_ALTERNATIVES {
        return Err(Error::Capacity { what: "point fit alternatives", requested: m, limit: MAX_FIT_ALTERNATIVES });
    }
    if target.m() != m {
        return Err(Error::Dimension { expected: m, found: target.m() });
    }
    for i in 0..m {
        for j in 0..i {
            if cfg.alt_points[i] == cfg.alt_points[j] {
                return Err(Error::Incompatible(format!("alternatives {j} and {i} coincide")));
            }
        }
    }
    fit_candidates(cfg)
        .into_par_iter()
        .filter_map(|p| {
            let r = ranking_at(&p, &cfg.alt_points)?;
            let defect = r.swap_distance(target).ok()?;
            Some(PointFit { point: p, achieved: r, defect })
        })
        .min_by(|a, b| {
            a.defect
                .cmp(&b.defect)
                .then(a.point[0].total_cmp(&b.point[0]))
                .then(a.point[1].total_cmp(&b.point[1]))
        })
        .ok_or_else(|| Error::Incompatible("no candidate point induces a strict ranking".into()))
}

/// How an output ranking is drawn on a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// Red diamond.
    Kemeny,
    /// Green square.
    SquaredKemeny,
}

/// Input rankings as blue dots sized by weight plus marked outputs, laid
/// out by classical scaling of their swap distances.
pub fn map_svg(profile: &Profile, outputs: &[(Ranking, Marker)]) -> Result<String> {
    let mut rankings: Vec<Ranking> = profile.support().cloned().collect();
    let weights: Vec<f64> = profile.iter().map(|(_, w)| w.to_f64()).collect();
    rankings.extend(outputs.iter().map(|(r, _)| r.clone()));
    let coords = if rankings.len() >= 3 {
        classical_mds(&distance_matrix(&rankings)?)?.coords
    } else {
        let d = if rankings.len() == 2 { rankings[0].swap_distance(&rankings[1])? as f64 } else { 0.0 };
        let mut c = vec![[0.0, 0.0]];
        if rankings.len() == 2 {
            c.push([d, 0.0]);
        }
        c
    };
    let (size, margin) = (600.0, 50.0);
    let span = |k: usize| {
        let lo = coords.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = coords.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let ((x0, x1), (y0, y1)) = (span(0), span(1));
    let extent = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (size - 2.0 * margin) / extent;
    let at = |p: &Point| {
        let x = margin + (p[0] - x0) * scale + (size - 2.0 * margin - (x1 - x0) * scale) / 2.0;
        let y = margin + (p[1] - y0) * scale + (size - 2.0 * margin - (y1 - y0) * scale) / 2.0;
        (x, size - y)
    };
    let mut svg = String::new();
    writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 600 600" width="600" height="600">"#).unwrap();
    writeln!(svg, r#"<rect width="600" height="600" fill="white"/>"#).unwrap();
    for (k, w) in weights.iter().enumerate() {
        let (x, y) = at(&coords[k]);
        writeln!(svg, r##"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="#1f77b4" fill-opacity="0.7"/>"##, 2.0 + 40.0 * w).unwrap();
    }
    for (k, (_, marker)) in outputs.iter().enumerate() {
        let (x, y) = at(&coords[weights.len() + k]);
        match marker {
            Marker::Kemeny => writeln!(
                svg,
                r##"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="#d62728"/>"##,
                x,
                y - 9.0,
                x + 9.0,
                y,
                x,
                y + 9.0,
                x - 9.0,
                y
            ),
            Marker::SquaredKemeny => {
                writeln!(svg, r##"<rect x="{:.3}" y="{:.3}" width="14" height="14" fill="#2ca02c"/>"##, x - 7.0, y - 7.0)
            }
        }
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
