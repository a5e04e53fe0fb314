//! Independent reference geometry on plain arrays, plus random inputs.
#![allow(dead_code)]

use liegeo::nonunimodular::NonUnimodularGroup;
use liegeo::unimodular::UnimodularGroup;
use liegeo::{MetricLieAlgebra3, UnitField, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type V = [f64; 3];
pub type C = [[[f64; 3]; 3]; 3];

pub fn add(a: V, b: V) -> V {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
pub fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
pub fn scale(a: V, s: f64) -> V {
    [a[0] * s, a[1] * s, a[2] * s]
}
pub fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
pub fn norm(a: V) -> f64 {
    dot(a, a).sqrt()
}
pub fn e(i: usize) -> V {
    let mut v = [0.0; 3];
    v[i] = 1.0;
    v
}

/// Reference model of a left-invariant metric built from brackets alone.
pub struct Oracle {
    pub c: C,
}

impl Oracle {
    pub fn new(c: C) -> Self {
        Self { c }
    }

    pub fn of(alg: &MetricLieAlgebra3) -> Self {
        Self::new(*alg.constants())
    }

    pub fn br(&self, x: V, y: V) -> V {
        let mut out = [0.0; 3];
        for i in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    out[m] += x[i] * y[k] * self.c[i][k][m];
                }
            }
        }
        out
    }

    /// `<ad*_x y, z> = <y, [x,z]>`
    fn ad_star(&self, x: V, y: V) -> V {
        [0, 1, 2].map(|m| dot(y, self.br(x, e(m))))
    }

    pub fn nabla(&self, x: V, y: V) -> V {
        scale(sub(sub(self.br(x, y), self.ad_star(x, y)), self.ad_star(y, x)), 0.5)
    }

    pub fn r(&self, x: V, y: V, z: V) -> V {
        let a = self.nabla(x, self.nabla(y, z));
        let b = self.nabla(y, self.nabla(x, z));
        let c = self.nabla(self.br(x, y), z);
        sub(sub(a, b), c)
    }

    pub fn a(&self, xi: V, x: V) -> V {
        scale(self.nabla(x, xi), -1.0)
    }

    /// `(∇_x A)y = ∇_x(Ay) − A(∇_x y)`
    pub fn da(&self, xi: V, x: V, y: V) -> V {
        sub(self.nabla(x, self.a(xi, y)), self.a(xi, self.nabla(x, y)))
    }

    pub fn tg(&self, xi: V, x: V, y: V) -> V {
        let hess = scale(add(self.da(xi, x, y), self.da(xi, y, x)), 0.5);
        let hm = scale(
            add(self.r(xi, self.a(xi, x), y), self.r(xi, self.a(xi, y), x)),
            0.5,
        );
        let ax = self.a(xi, x);
        let ay = self.a(xi, y);
        sub(add(hess, self.a(xi, hm)), scale(xi, dot(ax, ay)))
    }

    pub fn residual(&self, xi: V) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for k in i..3 {
                r = r.max(norm(self.tg(xi, e(i), e(k))));
            }
        }
        r
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut impl Rng) -> UnitField {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return UnitField::normalize(v).unwrap();
        }
    }
}

pub fn lambda(rng: &mut impl Rng) -> [f64; 3] {
    [0; 3].map(|_| rng.gen_range(-3.0..3.0))
}

/// Canonical non-unimodular parameters: α ∈ (0,3], δ ∈ [−3,α], α+δ > 0.
pub fn canonical_nu(rng: &mut impl Rng) -> NonUnimodularGroup {
    loop {
        let a = rng.gen_range(1e-3..=3.0);
        let d = rng.gen_range(-3.0..=a);
        let b = rng.gen_range(-3.0..=3.0);
        if a + d > 1e-3 {
            return NonUnimodularGroup::new(a, b, d).unwrap();
        }
    }
}

/// Random orthonormal frame (Gram–Schmidt of random vectors, right-handed).
pub fn rotation(rng: &mut impl Rng) -> [Vec3; 3] {
    let u = unit(rng).x;
    let mut v = unit(rng).x;
    v = (v - u * u.dot(&v)).normalized().unwrap_or_else(|| u.cross(&Vec3::basis(0)).normalized().unwrap());
    [u, v, u.cross(&v)]
}

/// A random metric Lie algebra: a unimodular or non-unimodular model
/// written in a random orthonormal frame.
pub fn algebra(rng: &mut impl Rng) -> MetricLieAlgebra3 {
    let base = if rng.gen_bool(0.5) {
        UnimodularGroup::new(lambda(rng)).unwrap().algebra()
    } else {
        NonUnimodularGroup::raw(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        )
        .algebra()
    };
    let frame = rotation(rng);
    MetricLieAlgebra3::new(base.in_basis(&frame)).unwrap()
}

pub fn v(x: &Vec3) -> V {
    x.0
}
