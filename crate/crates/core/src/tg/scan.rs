//! Fibonacci-lattice scan of the unit sphere with per-point refinement and
//! single-linkage clustering of the survivors.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::refine::{refine_with, RefineOptions};
use super::{Geometry, TgError, UnitField};
use crate::algebra::{Mat3, Vec3};
use crate::exec::{self, Exec};

/// Fraction of samples a planar cluster needs to count as a great circle.
pub const CIRCLE_FRACTION: f64 = 0.05;
/// Fraction of samples a non-planar cluster needs to count as the sphere.
pub const SPHERE_FRACTION: f64 = 0.5;
/// RMS distance from the best-fit plane through the origin.
pub const PLANE_FIT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub resolution: usize,
    pub tol: f64,
    pub exec: Exec,
}

impl ScanOptions {
    pub fn new(resolution: usize, tol: f64) -> Self {
        Self {
            resolution,
            tol,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterShape {
    Point,
    GreatCircle,
    WholeSphere,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub shape: ClusterShape,
    pub size: usize,
    /// Normalised mean direction (zero when the members cancel out).
    pub center: Vec3,
    /// Largest chord from a member to `center`.
    pub spread: f64,
    pub plane_normal: Vec3,
    pub plane_residual: f64,
    #[serde(skip)]
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub resolution: usize,
    pub tol: f64,
    pub spacing: f64,
    /// Lattice points that passed the Lipschitz screen and were refined.
    pub screened: usize,
    #[serde(skip)]
    pub candidates: Vec<UnitField>,
    #[serde(skip)]
    pub residuals: Vec<f64>,
    pub clusters: Vec<Cluster>,
}

impl ScanResult {
    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }
}

/// `n` near-uniform points on the unit sphere (golden-angle spiral).
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Mean distance between neighbouring lattice points.
pub fn lattice_spacing(n: usize) -> f64 {
    (4.0 * std::f64::consts::PI / n as f64).sqrt()
}

struct Grid {
    cell: f64,
    map: HashMap<(i64, i64, i64), Vec<usize>>,
}

impl Grid {
    fn new(points: &[Vec3], cell: f64) -> Self {
        let mut map: HashMap<_, Vec<usize>> = HashMap::new();
        for (n, p) in points.iter().enumerate() {
            map.entry(Self::key(p, cell)).or_default().push(n);
        }
        Self { cell, map }
    }

    fn key(p: &Vec3, cell: f64) -> (i64, i64, i64) {
        (
            (p[0] / cell).floor() as i64,
            (p[1] / cell).floor() as i64,
            (p[2] / cell).floor() as i64,
        )
    }

    /// Calls `f(j)` for every `j > n` within `radius` of `points[n]`.
    fn for_neighbours(&self, points: &[Vec3], n: usize, radius: f64, mut f: impl FnMut(usize)) {
        let (a, b, c) = Self::key(&points[n], self.cell);
        let r2 = radius * radius;
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if let Some(bucket) = self.map.get(&(a + da, b + db, c + dc)) {
                        for &j in bucket {
                            if j > n {
                                let d = points[j] - points[n];
                                if d.dot(&d) <= r2 {
                                    f(j);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage clusters (radius `radius`) with shape classification
/// relative to a lattice of `samples` points.
pub fn cluster_points(points: &[Vec3], radius: f64, samples: usize) -> Vec<Cluster> {
    if points.is_empty() {
        return Vec::new();
    }
    let grid = Grid::new(points, radius);
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for n in 0..points.len() {
        grid.for_neighbours(points, n, radius, |j| {
            let (a, b) = (find(&mut parent, n), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        });
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for n in 0..points.len() {
        let root = find(&mut parent, n);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(n);
    }
    groups
        .into_iter()
        .map(|members| describe(points, members, radius, samples))
        .collect()
}

fn describe(points: &[Vec3], members: Vec<usize>, radius: f64, samples: usize) -> Cluster {
    let size = members.len();
    let mut sum = Vec3::ZERO;
    let mut scatter = Mat3::ZERO;
    for &n in &members {
        sum += points[n];
        scatter = scatter.add(&Mat3::outer(&points[n], &points[n]));
    }
    let center = sum.normalized().filter(|_| sum.norm() > 1e-9 * size as f64).unwrap_or(Vec3::ZERO);
    let spread = if center == Vec3::ZERO {
        2.0
    } else {
        members.iter().fold(0.0_f64, |m, &n| m.max((points[n] - center).norm()))
    };
    let (vals, vecs) = scatter.scale(1.0 / size as f64).symmetric_eigen();
    let plane_residual = vals[0].max(0.0).sqrt();
    let plane_normal = canonical_sign(vecs[0]);

    let n = samples as f64;
    let shape = if center != Vec3::ZERO && spread <= radius {
        ClusterShape::Point
    } else if size as f64 > CIRCLE_FRACTION * n && plane_residual < PLANE_FIT_TOL {
        ClusterShape::GreatCircle
    } else if size as f64 > SPHERE_FRACTION * n && plane_residual >= PLANE_FIT_TOL {
        ClusterShape::WholeSphere
    } else {
        ClusterShape::Unresolved
    };
    Cluster {
        shape,
        size,
        center,
        spread,
        plane_normal,
        plane_residual,
        members,
    }
}

/// Flips `v` so its largest-magnitude coordinate is positive.
fn canonical_sign(v: Vec3) -> Vec3 {
    let mut j = 0;
    for i in 1..3 {
        if v[i].abs() > v[j].abs() {
            j = i;
        }
    }
    if v[j] < 0.0 {
        -v
    } else {
        v
    }
}

/// Scans the sphere for totally geodesic fields.
///
/// Every lattice point whose raw residual is small enough to lie near a
/// zero (an empirical Lipschitz bound over neighbouring lattice points) is
/// polished by Gauss–Newton; refined points with residual below `tol`
/// are the candidates, which are then clustered with radius 2× spacing.
pub fn sphere_scan(geom: &Geometry, opts: &ScanOptions) -> Result<ScanResult, TgError> {
    if opts.resolution < 100 {
        return Err(TgError::ResolutionTooSmall(opts.resolution));
    }
    let n = opts.resolution;
    let spacing = lattice_spacing(n);
    let radius = 2.0 * spacing;
    let lattice = fibonacci_sphere(n);
    let raw: Vec<f64> = exec::map(opts.exec, &lattice, |p| geom.report_at(p).residual);

    let grid = Grid::new(&lattice, radius);
    let mut slope = 0.0_f64;
    for i in 0..n {
        grid.for_neighbours(&lattice, i, radius, |j| {
            let d = (lattice[i] - lattice[j]).norm();
            if d > 0.0 {
                slope = slope.max((raw[i] - raw[j]).abs() / d);
            }
        });
    }
    let reach = (3.0 * spacing).max(0.06);
    let screen = opts.tol.max(1.5 * slope * reach);

    let seeds: Vec<usize> = (0..n).filter(|&i| raw[i] < screen).collect();
    let ropts = RefineOptions::with_tol(opts.tol);
    let refined = exec::map(opts.exec, &seeds, |&i| {
        refine_with(geom, &UnitField { x: lattice[i] }, &ropts).ok()
    });

    let mut candidates = Vec::new();
    let mut residuals = Vec::new();
    for r in refined.into_iter().flatten() {
        candidates.push(r.field);
        residuals.push(r.residual);
    }
    let pts: Vec<Vec3> = candidates.iter().map(|c| c.x).collect();
    let clusters = cluster_points(&pts, radius, n);
    Ok(ScanResult {
        resolution: n,
        tol: opts.tol,
        spacing,
        screened: seeds.len(),
        candidates,
        residuals,
        clusters,
    })
}
