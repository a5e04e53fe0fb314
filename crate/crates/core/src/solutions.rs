//! Symbolic description of a set of totally geodesic unit fields.

use serde::{Deserialize, Serialize};

use crate::algebra::{FrameMap, Vec3};
use crate::tg::{Cluster, ClusterShape, UnitField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionFamily {
    WholeSphere,
    /// Unit vectors in the plane spanned by two frame vectors (0-based, sorted).
    GreatCircle { plane: [usize; 2] },
    /// `±field` for each listed field.
    Isolated { fields: Vec<UnitField> },
    /// The antipodal pair `{field, −field}` from a parameter-dependent formula.
    ParamPair { fields: [UnitField; 2] },
}

impl SolutionFamily {
    pub fn describe(&self) -> String {
        match self {
            SolutionFamily::WholeSphere => "S".into(),
            SolutionFamily::GreatCircle { plane } => format!("S∩{{e{},e{}}}", plane[0] + 1, plane[1] + 1),
            SolutionFamily::Isolated { fields } => fields
                .iter()
                .map(|f| describe_point(&f.x))
                .collect::<Vec<_>>()
                .join(", "),
            SolutionFamily::ParamPair { fields } => describe_point(&fields[0].x),
        }
    }

    /// Chord distance from a unit vector to this family.
    pub fn distance(&self, v: &Vec3) -> f64 {
        match self {
            SolutionFamily::WholeSphere => 0.0,
            SolutionFamily::GreatCircle { plane } => {
                let mut p = Vec3::ZERO;
                p[plane[0]] = v[plane[0]];
                p[plane[1]] = v[plane[1]];
                match p.normalized() {
                    Some(q) => (*v - q).norm(),
                    None => std::f64::consts::SQRT_2,
                }
            }
            SolutionFamily::Isolated { fields } => fields
                .iter()
                .map(|f| (*v - f.x).norm().min((*v + f.x).norm()))
                .fold(f64::INFINITY, f64::min),
            SolutionFamily::ParamPair { fields } => fields
                .iter()
                .map(|f| (*v - f.x).norm())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Representative fields: both signs of every point, `circle` samples
    /// along a great circle, `sphere` lattice samples for the sphere.
    pub fn samples(&self, circle: usize, sphere: usize) -> Vec<UnitField> {
        match self {
            SolutionFamily::WholeSphere => crate::tg::fibonacci_sphere(sphere)
                .into_iter()
                .map(|x| UnitField { x })
                .collect(),
            SolutionFamily::GreatCircle { plane } => (0..circle)
                .map(|n| {
                    let t = 2.0 * std::f64::consts::PI * n as f64 / circle as f64;
                    let mut x = Vec3::ZERO;
                    x[plane[0]] = t.cos();
                    x[plane[1]] = t.sin();
                    UnitField { x }
                })
                .collect(),
            SolutionFamily::Isolated { fields } => fields.iter().flat_map(|f| [*f, f.neg()]).collect(),
            SolutionFamily::ParamPair { fields } => fields.to_vec(),
        }
    }

    /// One field per family, used for the structure reports.
    pub fn representatives(&self) -> Vec<UnitField> {
        match self {
            SolutionFamily::WholeSphere => vec![
                UnitField::basis(0, 1.0),
                UnitField::normalize(Vec3::new(1.0, 2.0, 3.0)).expect("nonzero"),
            ],
            SolutionFamily::GreatCircle { plane } => {
                let mut x = Vec3::ZERO;
                x[plane[0]] = 0.6;
                x[plane[1]] = 0.8;
                vec![UnitField { x }]
            }
            SolutionFamily::Isolated { fields } => fields.clone(),
            SolutionFamily::ParamPair { fields } => vec![fields[0]],
        }
    }

    /// Whether a scan cluster is explained by this family at distance `tol`.
    pub fn covered_by(&self, cluster: &Cluster, tol: f64) -> bool {
        match self {
            SolutionFamily::WholeSphere => cluster.shape == ClusterShape::WholeSphere,
            SolutionFamily::GreatCircle { plane } => {
                let m = 3 - plane[0] - plane[1];
                cluster.shape == ClusterShape::GreatCircle
                    && (cluster.plane_normal - Vec3::basis(m)).norm() < tol
            }
            _ => false,
        }
    }

    pub fn map(&self, frame: &FrameMap) -> SolutionFamily {
        match self {
            SolutionFamily::WholeSphere => SolutionFamily::WholeSphere,
            SolutionFamily::GreatCircle { plane } => {
                let mut p = [frame.user_index(plane[0]), frame.user_index(plane[1])];
                p.sort_unstable();
                SolutionFamily::GreatCircle { plane: p }
            }
            SolutionFamily::Isolated { fields } => SolutionFamily::Isolated {
                fields: fields.iter().map(|f| map_field(f, frame)).collect(),
            },
            SolutionFamily::ParamPair { fields } => SolutionFamily::ParamPair {
                fields: fields.map(|f| map_field(&f, frame)),
            },
        }
    }
}

fn map_field(f: &UnitField, frame: &FrameMap) -> UnitField {
    let x = frame.to_user(&f.x);
    // keep ±e_i listings in "+" orientation
    let nonzero: Vec<usize> = (0..3).filter(|&i| x[i] != 0.0).collect();
    if nonzero.len() == 1 && x[nonzero[0]] < 0.0 {
        UnitField { x: -x }
    } else {
        UnitField { x }
    }
}

fn describe_point(x: &Vec3) -> String {
    let nonzero: Vec<usize> = (0..3).filter(|&i| x[i].abs() > 1e-15).collect();
    if nonzero.len() == 1 {
        format!("±e{}", nonzero[0] + 1)
    } else {
        format!("±({:.6}, {:.6}, {:.6})", x[0], x[1], x[2])
    }
}

/// Union of families with the certificates (fired conditions) behind them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub families: Vec<SolutionFamily>,
    pub certificates: Vec<String>,
}

impl SolutionSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn is_whole_sphere(&self) -> bool {
        self.families.contains(&SolutionFamily::WholeSphere)
    }

    pub fn certify(&mut self, condition: impl Into<String>) {
        let c = condition.into();
        if !self.certificates.contains(&c) {
            self.certificates.push(c);
        }
    }

    /// Adds a family under union semantics: the sphere absorbs everything,
    /// circles absorb points lying on them, duplicates are dropped.
    pub fn add(&mut self, family: SolutionFamily) {
        if self.is_whole_sphere() {
            return;
        }
        match &family {
            SolutionFamily::WholeSphere => {
                self.families.clear();
                self.families.push(family);
            }
            SolutionFamily::GreatCircle { .. } => {
                if self.families.contains(&family) {
                    return;
                }
                for f in self.families.iter_mut() {
                    if let SolutionFamily::Isolated { fields } = f {
                        fields.retain(|p| family.distance(&p.x) > 1e-12);
                    }
                }
                self.families
                    .retain(|f| !matches!(f, SolutionFamily::Isolated { fields } if fields.is_empty()));
                self.families.push(family);
            }
            SolutionFamily::Isolated { fields } => {
                let mut fresh = Vec::new();
                for p in fields {
                    let known = self.families.iter().any(|f| f.distance(&p.x) <= 1e-12)
                        || fresh.iter().any(|q: &UnitField| (q.x - p.x).norm() <= 1e-12 || (q.x + p.x).norm() <= 1e-12);
                    if !known {
                        fresh.push(*p);
                    }
                }
                if fresh.is_empty() {
                    return;
                }
                if let Some(SolutionFamily::Isolated { fields }) =
                    self.families.iter_mut().find(|f| matches!(f, SolutionFamily::Isolated { .. }))
                {
                    fields.extend(fresh);
                } else {
                    self.families.push(SolutionFamily::Isolated { fields: fresh });
                }
            }
            SolutionFamily::ParamPair { fields } => {
                if self.families.iter().all(|f| f.distance(&fields[0].x) > 1e-12) {
                    self.families.push(family);
                }
            }
        }
        self.sort();
    }

    fn sort(&mut self) {
        let rank = |f: &SolutionFamily| match f {
            SolutionFamily::WholeSphere => 0,
            SolutionFamily::Isolated { .. } => 1,
            SolutionFamily::ParamPair { .. } => 2,
            SolutionFamily::GreatCircle { .. } => 3,
        };
        self.families.sort_by_key(rank);
        for f in self.families.iter_mut() {
            if let SolutionFamily::Isolated { fields } = f {
                fields.sort_by(|a, b| {
                    let key = |u: &UnitField| (0..3).position(|i| u.x[i].abs() > 0.5).unwrap_or(3);
                    key(a).cmp(&key(b))
                });
            }
        }
    }

    /// Chord distance from `v` to the set (infinite when empty).
    pub fn distance(&self, v: &Vec3) -> f64 {
        self.families
            .iter()
            .map(|f| f.distance(v))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn samples(&self, circle: usize, sphere: usize) -> Vec<UnitField> {
        self.families.iter().flat_map(|f| f.samples(circle, sphere)).collect()
    }

    pub fn representatives(&self) -> Vec<UnitField> {
        self.families.iter().flat_map(|f| f.representatives()).collect()
    }

    pub fn map(&self, frame: &FrameMap) -> SolutionSet {
        let mut out = SolutionSet {
            families: Vec::new(),
            certificates: self.certificates.clone(),
        };
        for f in &self.families {
            out.add(f.map(frame));
        }
        out
    }

    pub fn describe(&self) -> String {
        if self.families.is_empty() {
            return "∅".into();
        }
        self.families
            .iter()
            .map(|f| f.describe())
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }

    /// Compares scan clusters with this set: every cluster must lie within
    /// `tol` of the set, and every family must be hit by some cluster.
    pub fn match_clusters(&self, clusters: &[Cluster], points: &[UnitField], tol: f64) -> ClusterMatch {
        let mut distances = Vec::with_capacity(clusters.len());
        let mut extra = 0;
        for c in clusters {
            let d = match c.shape {
                ClusterShape::WholeSphere => {
                    if self.is_whole_sphere() {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                }
                _ => c
                    .members
                    .iter()
                    .map(|&n| self.distance(&points[n].x))
                    .fold(0.0_f64, f64::max),
            };
            // NaN distances count as extra
            if d.is_nan() || d >= tol {
                extra += 1;
            }
            distances.push(d);
        }
        let mut missing = Vec::new();
        for f in &self.families {
            let hit = match f {
                SolutionFamily::WholeSphere | SolutionFamily::GreatCircle { .. } => {
                    clusters.iter().any(|c| f.covered_by(c, tol))
                }
                _ => f.samples(0, 0).iter().all(|p| {
                    clusters
                        .iter()
                        .any(|c| c.shape == ClusterShape::Point && (c.center - p.x).norm() < tol)
                }),
            };
            if !hit {
                missing.push(f.describe());
            }
        }
        ClusterMatch {
            distances,
            extra_clusters: extra,
            missing_families: missing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMatch {
    pub distances: Vec<f64>,
    pub extra_clusters: usize,
    pub missing_families: Vec<String>,
}

impl ClusterMatch {
    pub fn ok(&self) -> bool {
        self.extra_clusters == 0 && self.missing_families.is_empty()
    }

    pub fn max_distance(&self) -> f64 {
        self.distances
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }
}
