mod common;

use common::*;
use liegeo::contact::*;
use liegeo::nonunimodular::{classify, NonUnimodularGroup};
use liegeo::tables::theorem22_instances;
use liegeo::unimodular::{classify_theorem22, UnimodularGroup};
use liegeo::{Geometry, MetricLieAlgebra3, UnitField, Vec3};
use proptest::prelude::*;
use rand::Rng;

/// Mixes random fields with basis fields so the structure flags fire.
fn field(g: &mut impl Rng) -> UnitField {
    if g.gen_bool(0.3) {
        UnitField::basis(g.gen_range(0..3), 1.0)
    } else {
        unit(g)
    }
}

fn simple_algebra(g: &mut impl Rng) -> MetricLieAlgebra3 {
    if g.gen_bool(0.5) {
        let l = [2.0, 2.0, 2.0, 0.0, 1.0, -1.0];
        UnimodularGroup::new([0; 3].map(|_| l[g.gen_range(0..l.len())])).unwrap().algebra()
    } else {
        algebra(g)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn implication_chain(seed in any::<u64>()) {
        let mut g = rng(seed);
        let alg = simple_algebra(&mut g);
        let r = structure_report(&alg, &field(&mut g));
        prop_assert!(r.consistent(), "{:?}", r);
        for (name, w) in &r.witnesses {
            prop_assert!(w.residual > 0.0, "{}", name);
        }
    }

    #[test]
    fn killing_iff_skew(seed in any::<u64>()) {
        let mut g = rng(seed);
        let alg = simple_algebra(&mut g);
        let xi = field(&mut g);
        let o = Oracle::of(&alg);
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                let s = dot(o.nabla(e(i), xi.x.0), e(k)) + dot(o.nabla(e(k), xi.x.0), e(i));
                worst = worst.max(s.abs());
            }
        }
        let s = build_structure(&alg, &xi);
        prop_assert_eq!(is_killing(&s).holds, worst <= STRUCTURE_TOL);
    }

    #[test]
    fn frame_identities(seed in any::<u64>()) {
        let mut g = rng(seed);
        let alg = simple_algebra(&mut g);
        let xi = field(&mut g);
        let o = Oracle::of(&alg);
        let s = build_structure(&alg, &xi);
        let phi = |x: V| o.a(xi.x.0, x);
        // dη(X,Y) = ½(Xη(Y) − Yη(X) − η([X,Y])) with constant η(e_k)
        for i in 0..3 {
            for k in 0..3 {
                let want = -0.5 * dot(xi.x.0, o.br(e(i), e(k)));
                prop_assert!((d_eta(&alg, &s, i, k) - want).abs() < 1e-15);
            }
        }
        let mut eq18 = 0.0_f64;
        let mut eq19 = 0.0_f64;
        for i in 0..3 {
            for k in 0..3 {
                let de = -0.5 * dot(xi.x.0, o.br(e(i), e(k)));
                eq18 = eq18.max((de - dot(e(i), phi(e(k)))).abs());
                let (x, y) = (e(i), e(k));
                let n = add(
                    sub(
                        sub(add(phi(phi(o.br(x, y))), o.br(phi(x), phi(y))), phi(o.br(phi(x), y))),
                        phi(o.br(x, phi(y))),
                    ),
                    scale(xi.x.0, 2.0 * de),
                );
                prop_assert!(norm(sub(nijenhuis(&alg, &s.phi, i, k).0, sub(n, scale(xi.x.0, 2.0 * de)))) < 1e-12);
                eq19 = eq19.max(norm(n));
            }
        }
        let ac = is_almost_contact(&s).holds && is_metric_compatible(&s).holds;
        prop_assert_eq!(is_contact_metric(&alg, &s).holds, eq18 <= PROPERTY_TOL && ac);
        prop_assert_eq!(is_normal(&alg, &s).holds, eq19 <= PROPERTY_TOL);
    }

    #[test]
    fn normality_on_the_su2_boundary(l1 in 2.05..5.0f64, l2 in 0.1..4.0f64, plus in any::<bool>()) {
        // μ₂μ₃ = 1 forces λ3 = λ2 ± √(λ1² − 4)
        let root = (l1 * l1 - 4.0).sqrt();
        let l3 = if plus { l2 + root } else { l2 - root };
        let grp = UnimodularGroup::new([l1, l2, l3]).unwrap();
        let mu = grp.mu().mu;
        prop_assume!((mu[1] * mu[2] - 1.0).abs() < 1e-12);
        let normal = structure_report(&grp.algebra(), &UnitField::basis(0, 1.0)).normal;
        let scalar = (l3 * mu[2] - l2 * mu[1]).abs() < 1e-10;
        prop_assert_eq!(normal, scalar);
    }
}

#[test]
fn normal_instances_from_the_one_parameter_family() {
    for l2 in [1.2, 2.0, 3.5] {
        let l = [l2 + 1.0 / l2, l2, 1.0 / l2];
        let grp = UnimodularGroup::new(l).unwrap();
        let mu = grp.mu().mu;
        assert!((mu[1] * mu[2] - 1.0).abs() < 1e-12);
        assert!((l[2] * mu[2] - l[1] * mu[1]).abs() < 1e-10);
        let r = structure_report(&grp.algebra(), &UnitField::basis(0, 1.0));
        assert!(r.normal && !r.metric_compatible);
    }
}

/// Killing solutions are Sasakian; parallel ones split off the curvature.
#[test]
fn killing_solutions_are_sasakian_or_split() {
    let mut cases: Vec<(MetricLieAlgebra3, UnitField, bool)> = vec![];
    for inst in theorem22_instances() {
        let grp = UnimodularGroup::new(inst.lambda).unwrap();
        let t = classify_theorem22(&grp).unwrap();
        let flat = grp.mu().mu.iter().filter(|m| m.abs() > 1e-12).count() <= 1;
        for f in t.solutions.samples(8, 20) {
            cases.push((grp.algebra(), f, flat));
        }
    }
    for (a, b, d) in [(2.0, 1.0, -0.5), (2.0, -1.0, -0.5), (1.0, 0.0, 0.0), (3.0, 0.0, 0.0)] {
        let grp = NonUnimodularGroup::new(a, b, d).unwrap();
        for f in classify(&grp).solutions.samples(8, 20) {
            cases.push((grp.algebra(), f, false));
        }
    }
    let mut killing = 0;
    for (alg, xi, flat) in cases {
        let r = structure_report(&alg, &xi);
        assert!(Geometry::new(alg).residual(&xi) < 1e-9);
        if r.parallel {
            let geom = Geometry::new(alg);
            for i in 0..3 {
                for k in 0..3 {
                    assert!(geom.curv.apply(&Vec3::basis(i), &Vec3::basis(k), &xi.x).norm() < 1e-12);
                }
            }
        } else if r.killing {
            killing += 1;
            assert!(r.sasakian, "{xi:?}");
        }
        if !r.parallel && !flat {
            assert!(r.invariant_submanifold, "{xi:?}");
        }
    }
    assert!(killing > 0);
}

#[test]
fn flat_circle_field_is_not_invariant() {
    let alg = UnimodularGroup::new([1.0, 1.0, 0.0]).unwrap().algebra();
    let xi = UnitField::normalize(Vec3::new(0.6, 0.8, 0.0)).unwrap();
    assert!(Geometry::new(alg).residual(&xi) < 1e-12);
    let r = structure_report(&alg, &xi);
    assert!(!r.almost_contact && !r.invariant_submanifold);
    assert!(r.consistent());
}
