//! Fixed three-dimensional linear algebra and the first-principles
//! connection/curvature oracle of a metric Lie algebra.
//!
//! All frames are orthonormal and all indices are 0-based; reports convert
//! to 1-based labels at the edges.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the structure-constant checks, scaled by `max(1, |c|²)`.
pub const JACOBI_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("index {0} out of range (expected 0, 1 or 2)")]
    IndexOutOfRange(usize),
    #[error("structure constants contain a non-finite value")]
    NonFinite,
    #[error("structure constants are not antisymmetric (residual {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("Jacobi identity violated (residual {0:.3e})")]
    JacobiViolated(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// The frame vector `e_i` (0-based).
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        cross(self, other)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// Right-handed cross product in the orthonormal frame.
pub fn cross(u: &Vec3, v: &Vec3) -> Vec3 {
    Vec3([
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ])
}

/// Sign of the permutation `(i, k, m)`, zero on repeated indices.
pub fn levi_civita(i: usize, k: usize, m: usize) -> Result<i8, AlgebraError> {
    for idx in [i, k, m] {
        if idx > 2 {
            return Err(AlgebraError::IndexOutOfRange(idx));
        }
    }
    Ok(epsilon(i, k, m))
}

/// Unchecked Levi-Civita symbol for indices already known to be in range.
pub(crate) fn epsilon(i: usize, k: usize, m: usize) -> i8 {
    if i == k || k == m || i == m {
        0
    } else if (k + 3 - i) % 3 == 1 {
        1
    } else {
        -1
    }
}

/// 3×3 matrix; `m[i][k]` is row `i`, column `k`.
///
/// Linear operators are stored so that column `k` is the image of `e_k`,
/// i.e. `m[i][k] = <T e_k, e_i>`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn identity() -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Mat3(rows)
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut m = Self::ZERO;
        for (k, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][k] = col[i];
            }
        }
        m
    }

    pub fn outer(u: &Vec3, v: &Vec3) -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                m.0[i][k] = u[i] * v[k];
            }
        }
        m
    }

    pub fn column(&self, k: usize) -> Vec3 {
        Vec3([self.0[0][k], self.0[1][k], self.0[2][k]])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                m.0[i][k] = self.0[k][i];
            }
        }
        m
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    pub fn matmul(&self, o: &Mat3) -> Mat3 {
        let mut m = Self::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                m.0[i][k] = (0..3).map(|j| self.0[i][j] * o.0[j][k]).sum();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn add(&self, o: &Mat3) -> Mat3 {
        let mut m = *self;
        for i in 0..3 {
            for k in 0..3 {
                m.0[i][k] += o.0[i][k];
            }
        }
        m
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        self.add(&o.scale(-1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn determinant(&self) -> f64 {
        self.row(0).dot(&cross(&self.row(1), &self.row(2)))
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order with unit eigenvectors.
    pub fn symmetric_eigen(&self) -> ([f64; 3], [Vec3; 3]) {
        let mut a = self.0;
        let mut v = Mat3::identity().0;
        for _sweep in 0..64 {
            let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
            if off < 1e-30 {
                break;
            }
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..3 {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..3 {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
                for r in 0..3 {
                    let vrp = v[r][p];
                    let vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
        let mut order = [0usize, 1, 2];
        order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
        let values = order.map(|j| a[j][j]);
        let vectors = order.map(|j| Vec3([v[0][j], v[1][j], v[2][j]]));
        (values, vectors)
    }
}

impl Index<usize> for Mat3 {
    type Output = [f64; 3];
    fn index(&self, i: usize) -> &[f64; 3] {
        &self.0[i]
    }
}

impl IndexMut<usize> for Mat3 {
    fn index_mut(&mut self, i: usize) -> &mut [f64; 3] {
        &mut self.0[i]
    }
}

/// A table of vectors indexed by an ordered pair of frame indices, e.g.
/// `(∇_{e_i} A) e_k` or `TG(e_i, e_k)`.
pub type VecTable = [[Vec3; 3]; 3];

pub(crate) const ZERO_TABLE: VecTable = [[Vec3::ZERO; 3]; 3];

/// Bilinear extension of a frame table: `Σ x_i y_k T[i][k]`.
pub fn table_eval(table: &VecTable, x: &Vec3, y: &Vec3) -> Vec3 {
    let mut out = Vec3::ZERO;
    for i in 0..3 {
        for k in 0..3 {
            let w = x[i] * y[k];
            if w != 0.0 {
                out += table[i][k] * w;
            }
        }
    }
    out
}

/// Orthonormal frame change `e'_j = signs[j] · e_{perm[j]}`.
///
/// Canonicalisation of the group parameters is expressed as one of these;
/// solutions computed in the primed frame are mapped back with
/// [`FrameMap::to_user`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameMap {
    pub perm: [usize; 3],
    pub signs: [f64; 3],
}

impl Default for FrameMap {
    fn default() -> Self {
        Self::identity()
    }
}

impl FrameMap {
    pub fn identity() -> Self {
        Self {
            perm: [0, 1, 2],
            signs: [1.0; 3],
        }
    }

    /// Coordinates in the user frame of a vector given in the primed frame.
    pub fn to_user(&self, v: &Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for j in 0..3 {
            out[self.perm[j]] = self.signs[j] * v[j];
        }
        out
    }

    /// Coordinates in the primed frame of a vector given in the user frame.
    pub fn to_canonical(&self, v: &Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for j in 0..3 {
            out[j] = self.signs[j] * v[self.perm[j]];
        }
        out
    }

    /// User-frame index of primed frame vector `j`.
    pub fn user_index(&self, j: usize) -> usize {
        self.perm[j]
    }

    /// Composition: first `self`, then `next` applied to the primed frame.
    pub fn then(&self, next: &FrameMap) -> FrameMap {
        // e''_j = next.signs[j] e'_{next.perm[j]} = next.signs[j] self.signs[p] e_{self.perm[p]}
        let mut perm = [0; 3];
        let mut signs = [1.0; 3];
        for j in 0..3 {
            let p = next.perm[j];
            perm[j] = self.perm[p];
            signs[j] = next.signs[j] * self.signs[p];
        }
        FrameMap { perm, signs }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// Structure constants `c[i][k][m] = <[e_i, e_k], e_m>` of a
/// three-dimensional Lie algebra in an orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricLieAlgebra3 {
    c: [[[f64; 3]; 3]; 3],
}

impl MetricLieAlgebra3 {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(c: [[[f64; 3]; 3]; 3]) -> Result<Self, AlgebraError> {
        if c.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(AlgebraError::NonFinite);
        }
        let alg = Self { c };
        let scale = alg.max_abs().powi(2).max(1.0);
        let anti = alg.antisymmetry_residual();
        if anti > JACOBI_TOL * scale.sqrt() {
            return Err(AlgebraError::NotAntisymmetric(anti));
        }
        let jac = alg.jacobi_residual();
        if jac > JACOBI_TOL * scale {
            return Err(AlgebraError::JacobiViolated(jac));
        }
        Ok(alg)
    }

    /// Builds an algebra from the three brackets `[e1,e2]`, `[e1,e3]`, `[e2,e3]`.
    pub fn from_brackets(b12: Vec3, b13: Vec3, b23: Vec3) -> Result<Self, AlgebraError> {
        let mut c = [[[0.0; 3]; 3]; 3];
        for (i, k, v) in [(0, 1, b12), (0, 2, b13), (1, 2, b23)] {
            for m in 0..3 {
                c[i][k][m] = v[m];
                c[k][i][m] = -v[m];
            }
        }
        Self::new(c)
    }

    pub fn abelian() -> Self {
        Self {
            c: [[[0.0; 3]; 3]; 3],
        }
    }

    pub fn constants(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.c
    }

    pub fn c(&self, i: usize, k: usize, m: usize) -> f64 {
        self.c[i][k][m]
    }

    /// `[e_i, e_k]` as a vector.
    pub fn bracket_basis(&self, i: usize, k: usize) -> Vec3 {
        Vec3(self.c[i][k])
    }

    /// Bracket of two left-invariant fields with constant frame coefficients.
    pub fn bracket(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                let w = x[i] * y[k];
                if w != 0.0 {
                    out += Vec3(self.c[i][k]) * w;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    r = r.max((self.c[i][k][m] + self.c[k][i][m]).abs());
                }
            }
        }
        r
    }

    /// Max over frame triples of `|[[e_i,e_j],e_k] + cyclic|`.
    pub fn jacobi_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = |n: usize| Vec3::basis(n);
                    let t = self.bracket(&self.bracket(&e(i), &e(j)), &e(k))
                        + self.bracket(&self.bracket(&e(j), &e(k)), &e(i))
                        + self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    r = r.max(t.max_abs());
                }
            }
        }
        r
    }

    /// Structure constants expressed in another orthonormal basis whose
    /// vectors are given in this frame's coordinates.
    pub fn in_basis(&self, basis: &[Vec3; 3]) -> [[[f64; 3]; 3]; 3] {
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                let b = self.bracket(&basis[i], &basis[k]);
                for m in 0..3 {
                    c[i][k][m] = b.dot(&basis[m]);
                }
            }
        }
        c
    }
}

/// Levi-Civita connection coefficients `gamma[i][k][m] = <∇_{e_i} e_k, e_m>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Connection3 {
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl Connection3 {
    /// `∇_{e_i} e_k`.
    pub fn basis_derivative(&self, i: usize, k: usize) -> Vec3 {
        Vec3(self.gamma[i][k])
    }

    /// `∇_X Y` for left-invariant fields with constant frame coefficients.
    pub fn covariant(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                let w = x[i] * y[k];
                if w != 0.0 {
                    out += Vec3(self.gamma[i][k]) * w;
                }
            }
        }
        out
    }

    /// Max of `|gamma[i][k][m] + gamma[i][m][k]|`.
    pub fn metric_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    r = r.max((self.gamma[i][k][m] + self.gamma[i][m][k]).abs());
                }
            }
        }
        r
    }

    /// Max of `|∇_{e_i}e_k − ∇_{e_k}e_i − [e_i,e_k]|`.
    pub fn torsion_residual(&self, alg: &MetricLieAlgebra3) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    let t = self.gamma[i][k][m] - self.gamma[k][i][m] - alg.c(i, k, m);
                    r = r.max(t.abs());
                }
            }
        }
        r
    }

    /// Coefficients `<∇_{b_i} b_k, b_m>` in another orthonormal basis of
    /// left-invariant fields (coordinates given in this frame).
    pub fn in_basis(&self, basis: &[Vec3; 3]) -> Connection3 {
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                let d = self.covariant(&basis[i], &basis[k]);
                for m in 0..3 {
                    gamma[i][k][m] = d.dot(&basis[m]);
                }
            }
        }
        Connection3 { gamma }
    }
}

/// Koszul formula for a left-invariant metric in an orthonormal frame.
pub fn koszul_connection(alg: &MetricLieAlgebra3) -> Connection3 {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for (i, gi) in gamma.iter_mut().enumerate() {
        for (k, gik) in gi.iter_mut().enumerate() {
            for (m, g) in gik.iter_mut().enumerate() {
                *g = 0.5 * (alg.c(i, k, m) - alg.c(k, m, i) + alg.c(m, i, k));
            }
        }
    }
    Connection3 { gamma }
}

/// Riemann tensor `r[i][k][m][p] = <R(e_i,e_k) e_m, e_p>` with
/// `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvature3 {
    pub r: [[[[f64; 3]; 3]; 3]; 3],
}

impl Curvature3 {
    /// `R(X,Y)Z` by trilinear contraction.
    pub fn apply(&self, x: &Vec3, y: &Vec3, z: &Vec3) -> Vec3 {
        let mut out = Vec3::ZERO;
        for i in 0..3 {
            if x[i] == 0.0 {
                continue;
            }
            for k in 0..3 {
                let wxy = x[i] * y[k];
                if wxy == 0.0 {
                    continue;
                }
                for m in 0..3 {
                    let w = wxy * z[m];
                    if w != 0.0 {
                        out += Vec3(self.r[i][k][m]) * w;
                    }
                }
            }
        }
        out
    }

    /// `<R(X,Y)Y, X>` for an orthonormal pair.
    pub fn sectional(&self, x: &Vec3, y: &Vec3) -> f64 {
        self.apply(x, y, y).dot(x)
    }

    /// Largest violation among the antisymmetries, pair symmetry and the
    /// first Bianchi identity.
    pub fn symmetry_residual(&self) -> f64 {
        let r = &self.r;
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    for p in 0..3 {
                        let a = (r[i][k][m][p] + r[k][i][m][p]).abs();
                        let b = (r[i][k][m][p] + r[i][k][p][m]).abs();
                        let c = (r[i][k][m][p] - r[m][p][i][k]).abs();
                        let d = (r[i][k][m][p] + r[k][m][i][p] + r[m][i][k][p]).abs();
                        worst = worst.max(a).max(b).max(c).max(d);
                    }
                }
            }
        }
        worst
    }
}

/// Curvature of the left-invariant frame from the connection and brackets.
pub fn curvature(conn: &Connection3, alg: &MetricLieAlgebra3) -> Curvature3 {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            let ei = Vec3::basis(i);
            let ek = Vec3::basis(k);
            let bracket = alg.bracket_basis(i, k);
            for m in 0..3 {
                let em = Vec3::basis(m);
                let v = conn.covariant(&ei, &conn.covariant(&ek, &em))
                    - conn.covariant(&ek, &conn.covariant(&ei, &em))
                    - conn.covariant(&bracket, &em);
                r[i][k][m] = v.0;
            }
        }
    }
    Curvature3 { r }
}
