//! Closed-form machinery for non-unimodular groups with brackets
//! `[e1,e2] = αe2 + βe3`, `[e1,e3] = −βe2 + δe3`, `[e2,e3] = 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Connection3, FrameMap, Mat3, MetricLieAlgebra3, Vec3, VecTable, ZERO_TABLE};
use crate::solutions::{SolutionFamily, SolutionSet};
use crate::tg::{Geometry, TgReport, UnitField};

pub const EPS_COND: f64 = 1e-9;
/// Below this `m` the singular frame is undefined.
pub const DEGENERATE_M: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NonUnimodularError {
    #[error("parameters must be finite")]
    NonFinite,
    #[error("α+δ = {0:.3e} vanishes: the algebra is unimodular")]
    NotNonUnimodular(f64),
    #[error("field is not in the unimodular kernel (x₁ = {0:.3e})")]
    NotInKernel(f64),
    #[error("singular frame is degenerate (m = {0:.3e})")]
    DegenerateFrame(f64),
    #[error("ξ is not an eigenvector of the kernel of A_ξ (αx₂²+δx₃² = {0:.3e})")]
    FrameNotAligned(f64),
    #[error("group is not on the Sasakian branch (|β| = 1, αδ = −1)")]
    NotSasakianBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonUnimodularGroup {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl NonUnimodularGroup {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self, NonUnimodularError> {
        if ![alpha, beta, delta].iter().all(|v| v.is_finite()) {
            return Err(NonUnimodularError::NonFinite);
        }
        if (alpha + delta).abs() < EPS_COND {
            return Err(NonUnimodularError::NotNonUnimodular(alpha + delta));
        }
        Ok(Self { alpha, beta, delta })
    }

    /// Unchecked constructor (the closed forms stay defined for α+δ = 0).
    pub fn raw(alpha: f64, beta: f64, delta: f64) -> Self {
        Self { alpha, beta, delta }
    }

    pub fn is_canonical(&self) -> bool {
        self.alpha + self.delta > 0.0 && self.alpha >= self.delta
    }

    pub fn algebra(&self) -> MetricLieAlgebra3 {
        brackets(self)
    }
}

pub fn brackets(g: &NonUnimodularGroup) -> MetricLieAlgebra3 {
    MetricLieAlgebra3::from_brackets(
        Vec3::new(0.0, g.alpha, g.beta),
        Vec3::new(0.0, -g.beta, g.delta),
        Vec3::ZERO,
    )
    .expect("non-unimodular brackets satisfy Jacobi")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuCanonical {
    pub group: NonUnimodularGroup,
    pub frame: FrameMap,
}

/// Enforces `α+δ > 0` (flip `e1`) and `α ≥ δ` (swap `e2`, `e3`); both
/// changes negate `β`.
pub fn canonicalize(g: &NonUnimodularGroup) -> NuCanonical {
    let mut cur = *g;
    let mut frame = FrameMap::identity();
    if cur.alpha + cur.delta < 0.0 {
        cur = NonUnimodularGroup::raw(-cur.alpha, -cur.beta, -cur.delta);
        frame = frame.then(&FrameMap {
            perm: [0, 1, 2],
            signs: [-1.0, 1.0, 1.0],
        });
    }
    if cur.alpha < cur.delta {
        cur = NonUnimodularGroup::raw(cur.delta, -cur.beta, cur.alpha);
        frame = frame.then(&FrameMap {
            perm: [0, 2, 1],
            signs: [1.0; 3],
        });
    }
    NuCanonical { group: cur, frame }
}

/// The connection table: `∇_{e1}e2 = βe3`, `∇_{e2}e1 = −αe2`, `∇_{e3}e3 = δe1`, ….
pub fn connection_table(g: &NonUnimodularGroup) -> Connection3 {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let mut gamma = [[[0.0; 3]; 3]; 3];
    gamma[0][1][2] = b;
    gamma[0][2][1] = -b;
    gamma[1][0][1] = -a;
    gamma[1][1][0] = a;
    gamma[2][0][2] = -d;
    gamma[2][2][0] = d;
    Connection3 { gamma }
}

/// `N1 = e1×ξ`, `N2 = e3×ξ`, `N3 = e2×ξ` (note the 2↔3 labelling).
pub fn n_vectors(xi: &UnitField) -> [Vec3; 3] {
    [0, 2, 1].map(|i| Vec3::basis(i).cross(&xi.x))
}

/// Rows `((0, −αx₂, −δx₃), (βx₃, αx₁, 0), (−βx₂, 0, δx₁))`.
pub fn shape_matrix(g: &NonUnimodularGroup, xi: &UnitField) -> Mat3 {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let [x1, x2, x3] = xi.x.0;
    Mat3::from_rows([[0.0, -a * x2, -d * x3], [b * x3, a * x1, 0.0], [-b * x2, 0.0, d * x1]])
}

/// Closed-form `(∇_{e_i}A)e_k` at `[i][k]`.
pub fn lemma31_table(g: &NonUnimodularGroup, xi: &UnitField) -> VecTable {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let x = xi.x;
    let [x1, x2, x3] = x.0;
    let [n1, n2, n3] = n_vectors(xi);
    let e = Vec3::basis;
    let mut t = ZERO_TABLE;
    t[0][0] = (e(0) * x1 - x) * (-b * b);
    t[0][1] = n3 * (b * d) + e(2) * (b * a * x1);
    t[0][2] = n2 * (b * a) - e(1) * (b * d * x1);
    t[1][0] = n2 * (a * a) + e(0) * (b * a * x3);
    t[1][1] = n1 * (b * a) - (e(2) * x3 - x) * (a * a);
    t[1][2] = e(1) * (a * d * x3);
    t[2][0] = n3 * (-d * d) - e(0) * (b * d * x2);
    t[2][1] = e(2) * (a * d * x2);
    t[2][2] = n1 * (b * d) - (e(1) * x2 - x) * (d * d);
    t
}

/// `R(e1,e2)ξ`, `R(e1,e3)ξ`, `R(e2,e3)ξ`.
pub fn curvature_xi(g: &NonUnimodularGroup, xi: &UnitField) -> [Vec3; 3] {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let [n1, n2, n3] = n_vectors(xi);
    [
        n2 * (a * a) + n3 * (b * (a - d)),
        n3 * (-d * d) - n2 * (b * (a - d)),
        n1 * (a * d),
    ]
}

/// Closed-form `TG(e_i,e_k)`.
pub fn tg_equations(g: &NonUnimodularGroup, xi: &UnitField) -> TgReport {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let [x1, x2, x3] = xi.x.0;
    let [n1, n2, n3] = n_vectors(xi);
    let amd = a - d;
    let mut t = ZERO_TABLE;
    t[0][0] = (n2 * (b * (1.0 + a * amd) * x2 + a.powi(3) * x3)
        - n3 * (b * (1.0 - d * amd) * x3 - d.powi(3) * x2))
        * (b * x1);
    t[1][1] = (n1 * (b * (1.0 + a * a * (1.0 - x3 * x3)) - (a + b * b * amd) * x2 * x3)
        + n3 * (a * (1.0 + d * d) * x1 * x3))
        * a;
    t[2][2] = (n1 * (b * (1.0 + d * d * (1.0 - x2 * x2)) + (d - b * b * amd) * x2 * x3)
        - n2 * (d * (1.0 + a * a) * x1 * x2))
        * d;
    // the off-diagonal closed forms are 2·TG
    let t12 = n1 * (b * x1 * ((a + b * b * amd) * x2 + b * a * a * x3))
        + n2 * (a * (a * (1.0 + a * a * (1.0 - x3 * x3)) - b * (1.0 + a * amd) * x2 * x3))
        + n3 * (a * d * (b * d * (1.0 - x1 * x1) - d * d * x2 * x3 + b * amd * (1.0 - x3 * x3))
            + b * a * (x3 * x3 - x1 * x1)
            + b * d);
    let t13 = n1 * (b * x1 * ((d - b * b * amd) * x3 - b * d * d * x2))
        + n2 * (a * d * (a * b * (1.0 - x1 * x1) + a * a * x2 * x3 - b * amd * (1.0 - x2 * x2))
            + b * a
            + b * d * (x2 * x2 - x1 * x1))
        + n3 * (d * (b * (-1.0 + d * amd) * x2 * x3 - d * (1.0 + d * d * (1.0 - x2 * x2))));
    let t23 = n1 * (b * (a * d * (a + d) * x2 * x3 - b * amd * (a * (1.0 - x3 * x3) + d * (1.0 - x2 * x2)))
        + a * d * (x2 * x2 - x3 * x3))
        + n2 * (a * d * (1.0 + a * a) * x1 * x3)
        - n3 * (a * d * (1.0 + d * d) * x1 * x2);
    for (i, k, v) in [(0, 1, t12), (0, 2, t13), (1, 2, t23)] {
        t[i][k] = v * 0.5;
        t[k][i] = v * 0.5;
    }
    TgReport::from_table(&t)
}

/// The field `θ/√(1+α²) e2 + α/√(1+α²) e3` of the Sasakian branch.
pub fn sasakian_field(alpha: f64, theta: f64) -> UnitField {
    let s = (1.0 + alpha * alpha).sqrt();
    UnitField {
        x: Vec3::new(0.0, theta / s, alpha / s),
    }
}

fn sign_or_one(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuClassification {
    pub canonical: NuCanonical,
    pub solutions: SolutionSet,
    pub canonical_solutions: SolutionSet,
}

/// Totally geodesic fields: none off the unimodular kernel; `±e3` when
/// `β = δ = 0`; the pair `±ξ_θ` when `|β| = 1`, `αδ = −1`.
pub fn classify(g: &NonUnimodularGroup) -> NuClassification {
    let canonical = canonicalize(g);
    let c = canonical.group;
    let mut set = SolutionSet::empty();
    if c.beta.abs() < EPS_COND && c.delta.abs() < EPS_COND {
        set.certify("β=δ=0");
        set.add(SolutionFamily::Isolated {
            fields: vec![UnitField::basis(2, 1.0)],
        });
    }
    if (c.beta.abs() - 1.0).abs() < EPS_COND && (c.alpha * c.delta + 1.0).abs() < EPS_COND {
        let theta = sign_or_one(c.beta);
        let xi = sasakian_field(c.alpha, theta);
        set.certify(format!("β=θ={}1, αδ=−1", if theta > 0.0 { "+" } else { "−" }));
        set.add(SolutionFamily::ParamPair { fields: [xi, xi.neg()] });
    }
    NuClassification {
        canonical,
        solutions: set.map(&canonical.frame),
        canonical_solutions: set,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularFrame {
    /// Singular values `(0, |β|, m)` of `A_ξ`.
    pub values: [f64; 3],
    pub e_frame: [Vec3; 3],
    /// `f̃₁`, `f̃₂`.
    pub f_frame: [Vec3; 2],
    pub m: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl SingularFrame {
    /// `f̃_σ` for `σ = 1, 2`.
    pub fn f(&self, sigma: usize) -> Vec3 {
        self.f_frame[sigma - 1]
    }

    /// Matrix of an operator in the `ẽ` basis, `[i][k] = <T ẽ_k, ẽ_i>`.
    pub fn matrix_of(&self, t: &Mat3) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            for k in 0..3 {
                out[i][k] = t.apply(&self.e_frame[k]).dot(&self.e_frame[i]);
            }
        }
        out
    }
}

/// SVD frame of `A_ξ` for a field `ξ = x₂e2 + x₃e3` in the unimodular kernel.
pub fn singular_frame(g: &NonUnimodularGroup, xi: &UnitField) -> Result<SingularFrame, NonUnimodularError> {
    let (a, b, d) = (g.alpha, g.beta, g.delta);
    let [x1, x2, x3] = xi.x.0;
    if x1.abs() > 1e-12 {
        return Err(NonUnimodularError::NotInKernel(x1));
    }
    let m = (a * a * x2 * x2 + d * d * x3 * x3).sqrt();
    if m < DEGENERATE_M {
        return Err(NonUnimodularError::DegenerateFrame(m));
    }
    let e0 = Vec3::new(0.0, -d * x3, a * x2) * (1.0 / m);
    let e1 = Vec3::basis(0);
    let e2 = Vec3::new(0.0, a * x2, d * x3) * (1.0 / m);
    let epsilon = sign_or_one(b);
    let f1 = Vec3::new(0.0, x3, -x2) * epsilon;
    let f2 = -Vec3::basis(0);
    Ok(SingularFrame {
        values: [0.0, b.abs(), m],
        e_frame: [e0, e1, e2],
        f_frame: [f1, f2],
        m,
        epsilon,
        theta: sign_or_one(e0.dot(&xi.x)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForms {
    pub omega1: Mat3,
    pub omega2: Mat3,
}

impl SecondFundamentalForms {
    pub fn max_abs(&self) -> f64 {
        self.omega1.max_abs().max(self.omega2.max_abs())
    }
}

/// Closed-form `Ω̃₁`, `Ω̃₂` in the singular frame, valid when `ẽ₀ = θξ`
/// (`αx₂² + δx₃² = 0`).
pub fn second_fundamental_form(
    g: &NonUnimodularGroup,
    xi: &UnitField,
) -> Result<SecondFundamentalForms, NonUnimodularError> {
    let sf = singular_frame(g, xi)?;
    let [_, x2, x3] = xi.x.0;
    let geodesic = g.alpha * x2 * x2 + g.delta * x3 * x3;
    if geodesic.abs() > 1e-9 * (1.0 + g.alpha.abs() + g.delta.abs()) {
        return Err(NonUnimodularError::FrameNotAligned(geodesic));
    }
    let (b, m, eps, th) = (g.beta, sf.m, sf.epsilon, sf.theta);
    let apd = g.alpha + g.delta;
    let root = ((1.0 + b * b) * (1.0 + m * m)).sqrt();
    let mut o1 = Mat3::ZERO;
    let mut o2 = Mat3::ZERO;
    let w20 = 0.5 * eps * th * m * (m - 2.0 * th * b) * (m * b - th) / root;
    o1[2][0] = w20;
    o1[0][2] = w20;
    o1[2][2] = eps * th * apd * (th * m - b) * (m * b - th) / ((1.0 + b * b).sqrt() * (1.0 + m * m));
    let w10 = 0.5 * m * m * (m * b - th) / root;
    o2[1][0] = w10;
    o2[0][1] = w10;
    let w12 = -apd * (m - th * b) / (2.0 * (1.0 + b * b).sqrt());
    o2[1][2] = w12;
    o2[2][1] = w12;
    Ok(SecondFundamentalForms {
        omega1: o1,
        omega2: o2,
    })
}

/// `Ω̃_{σ|ij}` from the general singular-frame formula, using the
/// first-principles `∇A` and `R`; valid for every kernel field with `m > 0`.
pub fn second_fundamental_form_general(
    g: &NonUnimodularGroup,
    xi: &UnitField,
) -> Result<SecondFundamentalForms, NonUnimodularError> {
    let sf = singular_frame(g, xi)?;
    let geom = Geometry::new(brackets(g));
    let na = geom.nabla_a(xi);
    let da = |x: &Vec3, y: &Vec3| crate::algebra::table_eval(&na, x, y);
    let e = sf.e_frame;
    let lam = sf.values;
    let mut out = [Mat3::ZERO; 2];
    for (s, omega) in [1usize, 2].into_iter().zip(out.iter_mut()) {
        for i in 0..3 {
            for j in 0..3 {
                let big_l = ((1.0 + lam[s] * lam[s]) * (1.0 + lam[i] * lam[i]) * (1.0 + lam[j] * lam[j]))
                    .sqrt()
                    .recip();
                let mut v = -(da(&e[i], &e[j]) + da(&e[j], &e[i])).dot(&sf.f(s));
                if j > 0 {
                    v += lam[s] * lam[j] * geom.curv.apply(&e[s], &e[i], &xi.x).dot(&sf.f(j));
                }
                if i > 0 {
                    v += lam[s] * lam[i] * geom.curv.apply(&e[s], &e[j], &xi.x).dot(&sf.f(i));
                }
                omega[i][j] = 0.5 * big_l * v;
            }
        }
    }
    Ok(SecondFundamentalForms {
        omega1: out[0],
        omega2: out[1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoliationReport {
    /// Second fundamental form of the leaves tangent to `ẽ₀ ∧ ẽ₂` (normal `ẽ₁`).
    pub omega_l1: [[f64; 2]; 2],
    /// Second fundamental form of the leaves tangent to `ẽ₀ ∧ ẽ₁` (normal `ẽ₂`).
    pub omega_l2: [[f64; 2]; 2],
    pub k_ext: [f64; 2],
    /// Gauss equation: `K_ext + det Ω`.
    pub k_int: [f64; 2],
    /// Gauss curvature of the leaf computed from its own bracket structure.
    pub k_int_intrinsic: [f64; 2],
    pub minimal: [bool; 2],
    pub theta: f64,
}

fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Gauss curvature of a 2D metric Lie algebra with `[u,v] = p u + q v`.
fn leaf_curvature(p: f64, q: f64) -> f64 {
    -(p * p + q * q)
}

/// The two integrable foliations through the Sasakian field.
pub fn foliation_report(g: &NonUnimodularGroup) -> Result<FoliationReport, NonUnimodularError> {
    let c = canonicalize(g).group;
    if !((c.beta.abs() - 1.0).abs() < EPS_COND && (c.alpha * c.delta + 1.0).abs() < EPS_COND) {
        return Err(NonUnimodularError::NotSasakianBranch);
    }
    let xi = sasakian_field(c.alpha, sign_or_one(c.beta));
    let sf = singular_frame(&c, &xi)?;
    let geom = Geometry::new(brackets(&c));
    let e = sf.e_frame;
    let cov = |x: &Vec3, y: &Vec3| geom.conn.covariant(x, y);

    let form = |basis: [usize; 2], normal: usize| {
        let mut o = [[0.0; 2]; 2];
        for (p, &bp) in basis.iter().enumerate() {
            for (q, &bq) in basis.iter().enumerate() {
                o[p][q] = cov(&e[bp], &e[bq]).dot(&e[normal]);
            }
        }
        o
    };
    let omega_l1 = form([0, 2], 1);
    let omega_l2 = form([0, 1], 2);
    let k_ext = [geom.curv.sectional(&e[0], &e[2]), geom.curv.sectional(&e[0], &e[1])];
    let k_int = [k_ext[0] + det2(&omega_l1), k_ext[1] + det2(&omega_l2)];
    let leaf = |u: &Vec3, v: &Vec3| {
        let br = geom.alg.bracket(u, v);
        leaf_curvature(br.dot(u), br.dot(v))
    };
    let k_int_intrinsic = [leaf(&e[0], &e[2]), leaf(&e[0], &e[1])];
    let trace = |o: &[[f64; 2]; 2]| o[0][0] + o[1][1];
    Ok(FoliationReport {
        minimal: [trace(&omega_l1).abs() < 1e-12, trace(&omega_l2).abs() < 1e-12],
        omega_l1,
        omega_l2,
        k_ext,
        k_int,
        k_int_intrinsic,
        theta: sf.theta,
    })
}
