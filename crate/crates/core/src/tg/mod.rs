//! The total-geodesity tensor of a left-invariant unit vector field,
//! computed from first principles (connection + curvature), plus numeric
//! search for its zeros on the unit sphere of the Lie algebra.

mod refine;
mod scan;

pub use refine::{refine, refine_with, RefineOptions, Refined, MAX_ITERATIONS};
pub use scan::{
    cluster_points, fibonacci_sphere, lattice_spacing, sphere_scan, Cluster, ClusterShape, ScanOptions,
    ScanResult,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    curvature, koszul_connection, Connection3, Curvature3, Mat3, MetricLieAlgebra3, Vec3, VecTable, ZERO_TABLE,
};

/// Allowed deviation of `|ξ|²` from 1.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TgError {
    #[error("field is not unit length (|x|² − 1 = {0:.3e})")]
    NotUnit(f64),
    #[error("field has zero or non-finite length")]
    Degenerate,
    #[error("refinement did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("scan resolution {0} is below the minimum of 100")]
    ResolutionTooSmall(usize),
}

/// A left-invariant unit vector field `ξ = x₁e₁ + x₂e₂ + x₃e₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitField {
    pub x: Vec3,
}

impl UnitField {
    pub fn new(x: Vec3) -> Result<Self, TgError> {
        if !x.is_finite() {
            return Err(TgError::Degenerate);
        }
        let dev = x.dot(&x) - 1.0;
        if dev.abs() > UNIT_TOL {
            return Err(TgError::NotUnit(dev));
        }
        Ok(Self { x })
    }

    pub fn normalize(v: Vec3) -> Result<Self, TgError> {
        v.normalized().map(|x| Self { x }).ok_or(TgError::Degenerate)
    }

    /// `±e_i` (0-based index).
    pub fn basis(i: usize, sign: f64) -> Self {
        Self {
            x: Vec3::basis(i) * sign.signum(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x }
    }

    pub fn coords(&self) -> [f64; 3] {
        self.x.0
    }
}

/// Ordered pairs `(i,k)`, `i ≤ k`, in report order 11, 12, 13, 22, 23, 33.
pub const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// The six components `TG(e_i,e_k)` and their max Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TgReport {
    pub components: [Vec3; 6],
    pub residual: f64,
}

impl TgReport {
    pub fn from_table(t: &VecTable) -> Self {
        let components = PAIRS.map(|(i, k)| t[i][k]);
        let residual = components.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        Self { components, residual }
    }

    pub fn get(&self, i: usize, k: usize) -> Vec3 {
        let (a, b) = if i <= k { (i, k) } else { (k, i) };
        let idx = PAIRS.iter().position(|&p| p == (a, b)).expect("index in range");
        self.components[idx]
    }

    /// Max component-wise absolute difference to another report.
    pub fn max_diff(&self, other: &TgReport) -> f64 {
        self.components
            .iter()
            .zip(other.components.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((*a - *b).max_abs()))
    }

    /// Flattened 18-vector (used as the least-squares residual).
    pub fn stacked(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        for (n, v) in self.components.iter().enumerate() {
            out[3 * n..3 * n + 3].copy_from_slice(&v.0);
        }
        out
    }

    pub fn label(n: usize) -> String {
        let (i, k) = PAIRS[n];
        format!("{}{}", i + 1, k + 1)
    }
}

/// `A_ξ` with `[i][k] = <A_ξ e_k, e_i>`, i.e. column `k` is `−∇_{e_k}ξ`.
pub fn shape_operator(conn: &Connection3, xi: &UnitField) -> Mat3 {
    shape_of(conn, &xi.x)
}

fn shape_of(conn: &Connection3, x: &Vec3) -> Mat3 {
    Mat3::from_columns([0, 1, 2].map(|k| -conn.covariant(&Vec3::basis(k), x)))
}

/// `(∇_{e_i} A_ξ) e_k = −∇_{e_i}∇_{e_k}ξ + ∇_{∇_{e_i}e_k}ξ`, stored at `[i][k]`.
pub fn nabla_a(conn: &Connection3, xi: &UnitField) -> VecTable {
    nabla_a_of(conn, &xi.x)
}

fn nabla_a_of(conn: &Connection3, x: &Vec3) -> VecTable {
    let d = [0, 1, 2].map(|k| conn.covariant(&Vec3::basis(k), x));
    let mut t = ZERO_TABLE;
    for (i, row) in t.iter_mut().enumerate() {
        let ei = Vec3::basis(i);
        for (k, cell) in row.iter_mut().enumerate() {
            let dik = conn.basis_derivative(i, k);
            *cell = conn.covariant(&dik, x) - conn.covariant(&ei, &d[k]);
        }
    }
    t
}

/// `Hess(e_i,e_k) = ½[(∇_{e_k}A)e_i + (∇_{e_i}A)e_k]`.
pub fn hess(nabla: &VecTable) -> VecTable {
    let mut t = ZERO_TABLE;
    for (i, row) in t.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = (nabla[k][i] + nabla[i][k]) * 0.5;
        }
    }
    t
}

/// `Hm(e_i,e_k) = ½[R(ξ, A e_i) e_k + R(ξ, A e_k) e_i]`, contracted
/// directly from the curvature tensor.
pub fn hm(curv: &Curvature3, shape: &Mat3, xi: &UnitField) -> VecTable {
    hm_of(curv, shape, &xi.x)
}

fn hm_of(curv: &Curvature3, shape: &Mat3, x: &Vec3) -> VecTable {
    let r = [0, 1, 2].map(|j| [0, 1, 2].map(|k| curv.apply(x, &shape.column(j), &Vec3::basis(k))));
    let mut t = ZERO_TABLE;
    for (i, row) in t.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            *cell = (r[i][k] + r[k][i]) * 0.5;
        }
    }
    t
}

fn tg_of(conn: &Connection3, curv: &Curvature3, x: &Vec3) -> VecTable {
    let shape = shape_of(conn, x);
    let h = hess(&nabla_a_of(conn, x));
    let m = hm_of(curv, &shape, x);
    let mut t = ZERO_TABLE;
    for (i, row) in t.iter_mut().enumerate() {
        let ai = shape.column(i);
        for (k, cell) in row.iter_mut().enumerate() {
            let ak = shape.column(k);
            *cell = h[i][k] + shape.apply(&m[i][k]) - *x * ai.dot(&ak);
        }
    }
    t
}

/// `TG(X,Y) = Hess(X,Y) + A·Hm(X,Y) − <AX,AY> ξ` on the frame.
pub fn tg_tensor(conn: &Connection3, curv: &Curvature3, xi: &UnitField) -> TgReport {
    TgReport::from_table(&tg_of(conn, curv, &xi.x))
}

/// Everything the oracle needs for one algebra, computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub alg: MetricLieAlgebra3,
    pub conn: Connection3,
    pub curv: Curvature3,
}

impl Geometry {
    pub fn new(alg: MetricLieAlgebra3) -> Self {
        let conn = koszul_connection(&alg);
        let curv = curvature(&conn, &alg);
        Self { alg, conn, curv }
    }

    pub fn report(&self, xi: &UnitField) -> TgReport {
        tg_tensor(&self.conn, &self.curv, xi)
    }

    /// Report at `x/|x|` for any nonzero `x` (no unit check).
    pub(crate) fn report_at(&self, x: &Vec3) -> TgReport {
        TgReport::from_table(&tg_of(&self.conn, &self.curv, x))
    }

    pub fn residual(&self, xi: &UnitField) -> f64 {
        self.report(xi).residual
    }

    pub fn shape(&self, xi: &UnitField) -> Mat3 {
        shape_operator(&self.conn, xi)
    }

    pub fn nabla_a(&self, xi: &UnitField) -> VecTable {
        nabla_a(&self.conn, xi)
    }

    /// `R(e_i,e_k)ξ` for the pairs (1,2), (1,3), (2,3).
    pub fn curvature_xi(&self, xi: &UnitField) -> [Vec3; 3] {
        [(0, 1), (0, 2), (1, 2)].map(|(i, k)| self.curv.apply(&Vec3::basis(i), &Vec3::basis(k), &xi.x))
    }
}
