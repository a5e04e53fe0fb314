//! Contact-geometric properties of the structure `(φ = A_ξ, ξ, η = <ξ,·>)`
//! induced by a left-invariant unit field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat3, MetricLieAlgebra3, Vec3};
use crate::tg::{shape_operator, Geometry, UnitField};

/// Threshold for the composite identities.
pub const PROPERTY_TOL: f64 = 1e-10;
/// Threshold for the exact-zero structure checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactStructure {
    pub phi: Mat3,
    pub xi: UnitField,
    pub eta: Vec3,
}

impl ContactStructure {
    pub fn eta_of(&self, v: &Vec3) -> f64 {
        self.eta.dot(v)
    }
}

/// Worst frame pair (1-based in reports) and its residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub pair: Option<(usize, usize)>,
    pub residual: f64,
}

impl Witness {
    fn none() -> Self {
        Self {
            pair: None,
            residual: 0.0,
        }
    }

    fn update(&mut self, pair: Option<(usize, usize)>, residual: f64) {
        if residual > self.residual || residual.is_nan() {
            self.residual = residual;
            self.pair = pair.map(|(i, k)| (i + 1, k + 1));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Witness,
}

impl Check {
    fn at(witness: Witness, tol: f64) -> Self {
        Self {
            holds: witness.residual <= tol,
            witness,
        }
    }

    fn and(self, other: Check) -> Check {
        let witness = if !self.holds || (other.holds && self.witness.residual >= other.witness.residual) {
            self.witness
        } else {
            other.witness
        };
        Check {
            holds: self.holds && other.holds,
            witness,
        }
    }
}

pub fn build_structure(alg: &MetricLieAlgebra3, xi: &UnitField) -> ContactStructure {
    let geom = Geometry::new(*alg);
    ContactStructure {
        phi: shape_operator(&geom.conn, xi),
        xi: *xi,
        eta: xi.x,
    }
}

/// `φ²X = −X + η(X)ξ`, `φξ = 0`, `η(ξ) = 1` on the frame.
pub fn is_almost_contact(s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    let phi2 = s.phi.matmul(&s.phi);
    for k in 0..3 {
        let ek = Vec3::basis(k);
        let target = -ek + s.xi.x * s.eta_of(&ek);
        w.update(Some((k, k)), (phi2.apply(&ek) - target).norm());
    }
    w.update(None, s.phi.apply(&s.xi.x).norm());
    w.update(None, (s.eta_of(&s.xi.x) - 1.0).abs());
    Check::at(w, PROPERTY_TOL)
}

/// `<φX, φY> = <X,Y> − η(X)η(Y)` on all frame pairs.
pub fn is_metric_compatible(s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    for i in 0..3 {
        for k in i..3 {
            let lhs = s.phi.column(i).dot(&s.phi.column(k));
            let rhs = if i == k { 1.0 } else { 0.0 } - s.eta[i] * s.eta[k];
            w.update(Some((i, k)), (lhs - rhs).abs());
        }
    }
    Check::at(w, PROPERTY_TOL)
}

/// `dη(e_i,e_k) = −½ η([e_i,e_k])`; the derivative terms vanish because `η`
/// has constant coefficients on the left-invariant frame.
pub fn d_eta(alg: &MetricLieAlgebra3, s: &ContactStructure, i: usize, k: usize) -> f64 {
    -0.5 * s.eta_of(&alg.bracket_basis(i, k))
}

/// `dη(X,Y) = <X, φY>` on all frame pairs, plus almost contact and metric.
pub fn is_contact_metric(alg: &MetricLieAlgebra3, s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    for i in 0..3 {
        for k in 0..3 {
            let rhs = s.phi[i][k];
            w.update(Some((i, k)), (d_eta(alg, s, i, k) - rhs).abs());
        }
    }
    Check::at(w, PROPERTY_TOL)
        .and(is_almost_contact(s))
        .and(is_metric_compatible(s))
}

/// `[φ,φ](e_i,e_k) = φ²[X,Y] + [φX,φY] − φ[φX,Y] − φ[X,φY]`.
pub fn nijenhuis(alg: &MetricLieAlgebra3, phi: &Mat3, i: usize, k: usize) -> Vec3 {
    let x = Vec3::basis(i);
    let y = Vec3::basis(k);
    let px = phi.apply(&x);
    let py = phi.apply(&y);
    let phi2 = phi.matmul(phi);
    phi2.apply(&alg.bracket(&x, &y)) + alg.bracket(&px, &py)
        - phi.apply(&alg.bracket(&px, &y))
        - phi.apply(&alg.bracket(&x, &py))
}

/// `[φ,φ](X,Y) + 2dη(X,Y)ξ = 0` on the three frame pairs.
pub fn is_normal(alg: &MetricLieAlgebra3, s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    for (i, k) in [(0, 1), (0, 2), (1, 2)] {
        let v = nijenhuis(alg, &s.phi, i, k) + s.xi.x * (2.0 * d_eta(alg, s, i, k));
        w.update(Some((i, k)), v.norm());
    }
    Check::at(w, PROPERTY_TOL)
}

/// `φ` skew-symmetric.
pub fn is_killing(s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    for i in 0..3 {
        for k in i..3 {
            w.update(Some((i, k)), (s.phi[i][k] + s.phi[k][i]).abs());
        }
    }
    Check::at(w, STRUCTURE_TOL)
}

/// `φ = 0`.
pub fn is_parallel(s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    for i in 0..3 {
        for k in 0..3 {
            w.update(Some((i, k)), s.phi[i][k].abs());
        }
    }
    Check::at(w, STRUCTURE_TOL)
}

/// `φξ = ∇_ξ ξ = 0` (up to sign).
pub fn is_geodesic(s: &ContactStructure) -> Check {
    let mut w = Witness::none();
    w.update(None, s.phi.apply(&s.xi.x).norm());
    Check::at(w, STRUCTURE_TOL)
}

pub fn is_sasakian(alg: &MetricLieAlgebra3, s: &ContactStructure) -> Check {
    is_contact_metric(alg, s).and(is_normal(alg, s))
}

/// The field spans an invariant submanifold of the unit tangent bundle
/// exactly when its induced structure is almost contact.
pub fn is_invariant_field(_alg: &MetricLieAlgebra3, s: &ContactStructure) -> Check {
    is_almost_contact(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub parallel: bool,
    pub geodesic: bool,
    pub killing: bool,
    pub almost_contact: bool,
    pub metric_compatible: bool,
    pub contact_metric: bool,
    pub normal: bool,
    pub sasakian: bool,
    pub invariant_submanifold: bool,
    /// For each failing property, the worst frame pair and its residual.
    pub witnesses: BTreeMap<String, Witness>,
}

impl StructureReport {
    /// The implication chain every report must satisfy.
    pub fn consistent(&self) -> bool {
        (!self.sasakian || (self.contact_metric && self.normal))
            && (!self.contact_metric || (self.almost_contact && self.metric_compatible))
            && (!self.parallel || self.killing)
            && (!self.killing || self.geodesic)
            && self.invariant_submanifold == self.almost_contact
    }
}

pub fn structure_report(alg: &MetricLieAlgebra3, xi: &UnitField) -> StructureReport {
    let s = build_structure(alg, xi);
    let checks = [
        ("parallel", is_parallel(&s)),
        ("geodesic", is_geodesic(&s)),
        ("killing", is_killing(&s)),
        ("almost_contact", is_almost_contact(&s)),
        ("metric_compatible", is_metric_compatible(&s)),
        ("contact_metric", is_contact_metric(alg, &s)),
        ("normal", is_normal(alg, &s)),
        ("sasakian", is_sasakian(alg, &s)),
        ("invariant_submanifold", is_invariant_field(alg, &s)),
    ];
    let witnesses = checks
        .iter()
        .filter(|(_, c)| !c.holds)
        .map(|(name, c)| (name.to_string(), c.witness))
        .collect();
    let h = |n: usize| checks[n].1.holds;
    StructureReport {
        parallel: h(0),
        geodesic: h(1),
        killing: h(2),
        almost_contact: h(3),
        metric_compatible: h(4),
        contact_metric: h(5),
        normal: h(6),
        sasakian: h(7),
        invariant_submanifold: h(8),
        witnesses,
    }
}
