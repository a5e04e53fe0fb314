//! Closed-form machinery for unimodular groups with brackets
//! `[e_i, e_k] = ε_ikm λ_m e_m`, and the classification of their totally
//! geodesic left-invariant unit fields.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{epsilon, FrameMap, Mat3, MetricLieAlgebra3, Vec3, VecTable, ZERO_TABLE};
use crate::solutions::{SolutionFamily, SolutionSet};
use crate::tg::{TgReport, UnitField};

/// Tolerance for the polynomial equalities in the classification.
pub const EPS_COND: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnimodularError {
    #[error("structure constants must be finite")]
    NonFinite,
    #[error("sign pattern ({0}) is not in the unimodular table")]
    UnclassifiablePattern(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnimodularGroup {
    pub lambda: [f64; 3],
}

impl UnimodularGroup {
    pub fn new(lambda: [f64; 3]) -> Result<Self, UnimodularError> {
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(UnimodularError::NonFinite);
        }
        Ok(Self { lambda })
    }

    pub fn algebra(&self) -> MetricLieAlgebra3 {
        let mut c = [[[0.0; 3]; 3]; 3];
        for (i, ci) in c.iter_mut().enumerate() {
            for (k, cik) in ci.iter_mut().enumerate() {
                for (m, v) in cik.iter_mut().enumerate() {
                    *v = epsilon(i, k, m) as f64 * self.lambda[m];
                }
            }
        }
        MetricLieAlgebra3::new(c).expect("unimodular brackets satisfy Jacobi")
    }

    pub fn mu(&self) -> ConnectionNumbers {
        connection_numbers(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionNumbers {
    pub mu: [f64; 3],
}

/// `μ_i = ½(λ₁+λ₂+λ₃) − λ_i`.
pub fn connection_numbers(g: &UnimodularGroup) -> ConnectionNumbers {
    let half = 0.5 * g.lambda.iter().sum::<f64>();
    ConnectionNumbers {
        mu: g.lambda.map(|l| half - l),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureScalars {
    /// Sectional curvatures `σ_ik` of the frame planes (zero diagonal).
    pub sigma: [[f64; 3]; 3],
    /// Principal Ricci curvatures.
    pub rho: [f64; 3],
}

impl CurvatureScalars {
    pub fn sigma(&self, i: usize, k: usize) -> f64 {
        self.sigma[i][k]
    }
}

/// `ρ_m = 2μ_iμ_k`, `σ_ik = μ_iμ_m + μ_kμ_m − μ_iμ_k`.
pub fn curvature_scalars(mu: &ConnectionNumbers) -> CurvatureScalars {
    let m = mu.mu;
    let mut sigma = [[0.0; 3]; 3];
    let mut rho = [0.0; 3];
    for (i, k, j) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let s = m[i] * m[j] + m[k] * m[j] - m[i] * m[k];
        sigma[i][k] = s;
        sigma[k][i] = s;
        rho[j] = 2.0 * m[i] * m[k];
    }
    CurvatureScalars { sigma, rho }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupClass {
    SU2,
    SL2R,
    E2,
    E11,
    Heisenberg,
    Abelian,
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupClass::SU2 => "SU(2)",
            GroupClass::SL2R => "SL(2,R)",
            GroupClass::E2 => "E(2)",
            GroupClass::E11 => "E(1,1)",
            GroupClass::Heisenberg => "Heisenberg",
            GroupClass::Abelian => "R+R+R",
        };
        f.write_str(s)
    }
}

fn sign(x: f64) -> i8 {
    if x.abs() < EPS_COND {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

fn pattern_string(p: [i8; 3]) -> String {
    p.iter()
        .map(|s| match s {
            1 => "+",
            -1 => "-",
            _ => "0",
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Class from the sign pattern of `λ` as given (expects canonical order).
pub fn classify_group(g: &UnimodularGroup) -> Result<GroupClass, UnimodularError> {
    let p = g.lambda.map(sign);
    match p {
        [1, 1, 1] => Ok(GroupClass::SU2),
        [1, 1, -1] => Ok(GroupClass::SL2R),
        [1, 1, 0] => Ok(GroupClass::E2),
        [1, -1, 0] => Ok(GroupClass::E11),
        [1, 0, 0] => Ok(GroupClass::Heisenberg),
        [0, 0, 0] => Ok(GroupClass::Abelian),
        _ => Err(UnimodularError::UnclassifiablePattern(pattern_string(p))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Canonical {
    pub group: UnimodularGroup,
    /// `e'_j = signs[j] · e_{perm[j]}` relates the canonical frame to the user's.
    pub frame: FrameMap,
}

fn perm_sign(p: [usize; 3]) -> f64 {
    epsilon(p[0], p[1], p[2]) as f64
}

/// Reorders (and if needed negates) `λ` into a pattern of the group table:
/// descending order, except E(1,1) which is `(+,−,0)`.
///
/// Under `e'_j = s_j e_{π(j)}` the constants become
/// `λ'_j = sgn(π)·s₁s₂s₃·λ_{π(j)}`, so negating all of `λ` is a frame change.
pub fn canonicalize(g: &UnimodularGroup) -> Canonical {
    let l = g.lambda;
    let pos = l.iter().filter(|&&x| sign(x) > 0).count();
    let neg = l.iter().filter(|&&x| sign(x) < 0).count();
    let f = if neg > pos { -1.0 } else { 1.0 };
    let v = l.map(|x| f * x);
    let mut perm = [0usize, 1, 2];
    perm.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    if [sign(v[perm[0]]), sign(v[perm[1]]), sign(v[perm[2]])] == [1, 0, -1] {
        perm.swap(1, 2);
    }
    let s0 = perm_sign(perm) * f;
    let frame = FrameMap {
        perm,
        signs: [s0, 1.0, 1.0],
    };
    Canonical {
        group: UnimodularGroup {
            lambda: perm.map(|p| v[p]),
        },
        frame,
    }
}

/// Sign pattern class after canonicalisation.
pub fn group_class(g: &UnimodularGroup) -> Result<GroupClass, UnimodularError> {
    classify_group(&canonicalize(g).group)
}

/// `N_i = e_i × ξ`.
pub fn n_vectors(xi: &UnitField) -> [Vec3; 3] {
    [0, 1, 2].map(|i| Vec3::basis(i).cross(&xi.x))
}

/// Rows `((0, −μ₂x₃, μ₃x₂), (μ₁x₃, 0, −μ₃x₁), (−μ₁x₂, μ₂x₁, 0))`.
pub fn shape_matrix(mu: &ConnectionNumbers, xi: &UnitField) -> Mat3 {
    let [m1, m2, m3] = mu.mu;
    let [x1, x2, x3] = xi.x.0;
    Mat3::from_rows([
        [0.0, -m2 * x3, m3 * x2],
        [m1 * x3, 0.0, -m3 * x1],
        [-m1 * x2, m2 * x1, 0.0],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma21Tables {
    /// `(∇_{e_i}A)e_k` at `[i][k]`.
    pub nabla_a: VecTable,
    /// `R(e_i,e_k)ξ` for the pairs 12, 13, 23.
    pub r_xi: [Vec3; 3],
}

/// Closed-form `∇A` and `R(·,·)ξ` on the frame.
pub fn lemma21_tables(mu: &ConnectionNumbers, xi: &UnitField) -> Lemma21Tables {
    let m = mu.mu;
    let x = xi.x;
    let n = n_vectors(xi);
    let cs = curvature_scalars(mu);
    let mut t = ZERO_TABLE;
    for i in 0..3 {
        for k in 0..3 {
            t[i][k] = if i == k {
                (x - Vec3::basis(i) * x[i]) * (m[i] * m[i])
            } else {
                let j = 3 - i - k;
                n[j] * (epsilon(i, k, j) as f64 * m[i] * m[j]) - Vec3::basis(k) * (m[i] * m[k] * x[i])
            };
        }
    }
    let r_xi = [(0, 1), (0, 2), (1, 2)].map(|(i, k)| {
        let j = 3 - i - k;
        n[j] * (-(epsilon(i, k, j) as f64) * cs.sigma[i][k])
    });
    Lemma21Tables { nabla_a: t, r_xi }
}

/// Closed-form `TG(e_i,e_k)` from `μ` and `σ`.
pub fn tg_components(mu: &ConnectionNumbers, xi: &UnitField) -> TgReport {
    let m = mu.mu;
    let x = xi.x;
    let n = n_vectors(xi);
    let s = curvature_scalars(mu).sigma;
    let mut t = ZERO_TABLE;
    for i in 0..3 {
        let k = (i + 1) % 3;
        let j = (i + 2) % 3;
        t[i][i] = (n[k] * (x[j] * (s[i][k] * m[k] - m[i])) - n[j] * (x[k] * (s[i][j] * m[j] - m[i])))
            * (x[i] * m[i]);
    }
    for i in 0..3 {
        for k in 0..3 {
            if i == k {
                continue;
            }
            let j = 3 - i - k;
            let e = epsilon(i, k, j) as f64;
            let coeff_m = m[i] * m[j] * (1.0 - s[k][j]) - m[k] * m[j] * (1.0 - s[i][j])
                + m[i] * (s[k][j] * m[j] - m[k]) * x[i] * x[i]
                - m[k] * (s[i][j] * m[j] - m[i]) * x[k] * x[k];
            let v = n[i] * (-x[i] * x[j] * m[i] * (s[i][k] * m[i] - m[k]))
                + n[k] * (x[k] * x[j] * m[k] * (s[i][k] * m[k] - m[i]))
                + n[j] * coeff_m;
            t[i][k] = v * (0.5 * e);
        }
    }
    TgReport::from_table(&t)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < EPS_COND
}

fn points(idx: &[usize]) -> SolutionFamily {
    SolutionFamily::Isolated {
        fields: idx.iter().map(|&i| UnitField::basis(i, 1.0)).collect(),
    }
}

fn circle(i: usize, k: usize) -> SolutionFamily {
    SolutionFamily::GreatCircle {
        plane: [i.min(k), i.max(k)],
    }
}

/// Union of every row of the Ricci/connection-number table that fires,
/// in the group's own frame.
pub fn classify_table1(g: &UnimodularGroup) -> SolutionSet {
    let mu = connection_numbers(g);
    let rho = curvature_scalars(&mu).rho;
    let mut out = SolutionSet::empty();
    let zero = |v: f64| v.abs() < EPS_COND;
    if rho.iter().all(|&r| zero(r)) {
        let nonzero: Vec<usize> = (0..3).filter(|&i| !zero(mu.mu[i])).collect();
        match nonzero.as_slice() {
            [] => {
                out.certify("ρ=(0,0,0), μ=(0,0,0)");
                out.add(SolutionFamily::WholeSphere);
            }
            [i] => {
                let (k, m) = ((i + 1) % 3, (i + 2) % 3);
                out.certify(format!("ρ=(0,0,0), μ{}≠0", i + 1));
                out.add(points(&[*i]));
                out.add(circle(k, m));
            }
            _ => {}
        }
    }
    let two: Vec<usize> = (0..3).filter(|&i| near(rho[i], 2.0)).collect();
    for &i in &two {
        out.certify(format!("ρ{}=2", i + 1));
        out.add(points(&[i]));
    }
    for a in 0..two.len() {
        for b in a + 1..two.len() {
            out.add(circle(two[a], two[b]));
        }
    }
    if two.len() == 3 {
        out.add(SolutionFamily::WholeSphere);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem22 {
    pub class: GroupClass,
    pub canonical: Canonical,
    /// Solutions in the user's frame.
    pub solutions: SolutionSet,
    /// Solutions in the canonical frame.
    pub canonical_solutions: SolutionSet,
    pub conditions: Vec<String>,
}

/// Per-class table of conditions on the canonical `λ`.
pub fn classify_theorem22(g: &UnimodularGroup) -> Result<Theorem22, UnimodularError> {
    let canonical = canonicalize(g);
    let class = classify_group(&canonical.group)?;
    let [l1, l2, l3] = canonical.group.lambda;
    let l = canonical.group.lambda;
    let mut set = SolutionSet::empty();
    let fire = |set: &mut SolutionSet, cond: String, fam: SolutionFamily| {
        set.certify(cond);
        set.add(fam);
    };
    // q_m = λ_m² − (λ_i − λ_k)² = 2ρ_m
    let q = |m: usize| {
        let (i, k) = ((m + 1) % 3, (m + 2) % 3);
        l[m] * l[m] - (l[i] - l[k]).powi(2)
    };
    let qlabel = |m: usize| {
        let (i, k) = ((m + 1) % 3, (m + 2) % 3);
        let (i, k) = (i.min(k), i.max(k));
        format!("λ{}²−(λ{}−λ{})²=4", m + 1, i + 1, k + 1)
    };
    match class {
        GroupClass::SU2 => {
            let eq12 = near(l1, l2);
            let eq23 = near(l2, l3);
            if eq12 && eq23 && near(l1, 2.0) {
                fire(&mut set, "λ1=λ2=λ3=2".into(), SolutionFamily::WholeSphere);
            } else if eq12 && !eq23 && near(l3, 2.0) {
                fire(&mut set, "λ1=λ2=λ>λ3=2".into(), points(&[2]));
            } else if eq12 && !eq23 && l1 > 2.0 && near(l3, l1 - (l1 * l1 - 4.0).sqrt()) {
                fire(&mut set, "λ1=λ2=λ>2>λ3=λ−√(λ²−4)".into(), circle(0, 1));
            } else if eq23 && !eq12 && near(l1, 2.0) {
                fire(&mut set, "λ1=2>λ2=λ3=λ>0".into(), points(&[0]));
            } else if eq23 && !eq12 && l2 > 2.0 && near(l1, l2 + (l2 * l2 - 4.0).sqrt()) {
                fire(&mut set, "λ1=λ+√(λ²−4)>λ=λ2=λ3>2".into(), circle(1, 2));
            } else if !eq12 && !eq23 {
                for m in 0..3 {
                    if near(q(m), 4.0) {
                        fire(&mut set, format!("λ1>λ2>λ3>0, {}", qlabel(m)), points(&[m]));
                    }
                }
            }
        }
        GroupClass::SL2R => {
            if near(q(2), 4.0) {
                fire(&mut set, qlabel(2), points(&[2]));
            }
            if near(q(0), 4.0) {
                fire(&mut set, qlabel(0), points(&[0]));
            }
        }
        GroupClass::E2 => {
            if near(l1, l2) {
                fire(&mut set, "λ1=λ2>0, λ3=0".into(), points(&[2]));
                set.add(circle(0, 1));
            } else if near(l1 * l1 - l2 * l2, 4.0) {
                fire(&mut set, "λ1²−λ2²=4, λ1>λ2>0, λ3=0".into(), points(&[0]));
            }
        }
        GroupClass::E11 => {
            if near(l1 * l1 - l2 * l2, -4.0) {
                fire(&mut set, "λ1²−λ2²=−4, λ1>0, λ2<0, λ3=0".into(), points(&[1]));
            }
            if near(l1 * l1 - l2 * l2, 4.0) {
                fire(&mut set, "λ1²−λ2²=4, λ1>0, λ2<0, λ3=0".into(), points(&[0]));
            }
        }
        GroupClass::Heisenberg => {
            if near(l1, 2.0) {
                fire(&mut set, "λ1=2, λ2=0, λ3=0".into(), points(&[0]));
            }
        }
        GroupClass::Abelian => {
            fire(&mut set, "λ1=λ2=λ3=0".into(), SolutionFamily::WholeSphere);
        }
    }
    let conditions = set.certificates.clone();
    Ok(Theorem22 {
        class,
        canonical,
        solutions: set.map(&canonical.frame),
        canonical_solutions: set,
        conditions,
    })
}
