mod common;

use common::*;
use liegeo::algebra::table_eval;
use liegeo::contact::structure_report;
use liegeo::nonunimodular::*;
use liegeo::solutions::SolutionFamily;
use liegeo::tg::{sphere_scan, ScanOptions, PAIRS};
use liegeo::{Geometry, Mat3, UnitField, Vec3};
use proptest::prelude::*;
use rand::Rng;

/// A kernel field with `αx₂² + δx₃² = 0` (needs `αδ < 0`).
fn aligned_field(g: &NonUnimodularGroup, sign2: f64, sign3: f64) -> UnitField {
    let (a, d) = (g.alpha, g.delta);
    let x2 = (-d / (a - d)).sqrt();
    let x3 = (a / (a - d)).sqrt();
    UnitField::normalize(Vec3::new(0.0, sign2 * x2, sign3 * x3)).unwrap()
}

fn aligned_group(g: &mut impl Rng) -> NonUnimodularGroup {
    let a = g.gen_range(0.3..3.0);
    let d = -g.gen_range(0.1..a * 0.95);
    NonUnimodularGroup::new(a, g.gen_range(-3.0..3.0), d).unwrap()
}

fn on(e: &[Vec3; 3], w: &Vec3) -> V {
    [0, 1, 2].map(|j| w.dot(&e[j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_reference(seed in any::<u64>()) {
        let mut g = rng(seed);
        let grp = canonical_nu(&mut g);
        let xi = unit(&mut g);
        let o = Oracle::of(&grp.algebra());
        let rep = tg_equations(&grp, &xi);
        for &(i, k) in PAIRS.iter() {
            prop_assert!(norm(sub(rep.get(i, k).0, o.tg(xi.x.0, e(i), e(k)))) <= 1e-10);
        }
        let t = lemma31_table(&grp, &xi);
        for i in 0..3 {
            for k in 0..3 {
                prop_assert!(norm(sub(t[i][k].0, o.da(xi.x.0, e(i), e(k)))) < 1e-11);
            }
        }
        for (n, (i, k)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            prop_assert!(norm(sub(curvature_xi(&grp, &xi)[n].0, o.r(e(i), e(k), xi.x.0))) < 1e-11);
        }
        let a = shape_matrix(&grp, &xi);
        for k in 0..3 {
            prop_assert!(norm(sub(a.column(k).0, o.a(xi.x.0, e(k)))) < 1e-14);
        }
    }

    #[test]
    fn canonicalization_preserves_geometry(a in -3.0..3.0f64, b in -3.0..3.0f64, d in -3.0..3.0f64, seed in any::<u64>()) {
        prop_assume!((a + d).abs() > 1e-3);
        let grp = NonUnimodularGroup::new(a, b, d).unwrap();
        let c = canonicalize(&grp);
        prop_assert!(c.group.is_canonical());
        let xi = unit(&mut rng(seed));
        let user = Geometry::new(grp.algebra()).residual(&xi);
        let canon = UnitField::normalize(c.frame.to_canonical(&xi.x)).unwrap();
        let r = Geometry::new(c.group.algebra()).residual(&canon);
        prop_assert!((user - r).abs() < 1e-10);
        prop_assert!((c.frame.to_user(&canon.x) - xi.x).norm() < 1e-12);
    }

    #[test]
    fn singular_frame_tables(seed in any::<u64>()) {
        let mut g = rng(seed);
        let grp = aligned_group(&mut g);
        let xi = aligned_field(&grp, if g.gen_bool(0.5) { 1.0 } else { -1.0 }, if g.gen_bool(0.5) { 1.0 } else { -1.0 });
        let sf = singular_frame(&grp, &xi).unwrap();
        let geom = Geometry::new(grp.algebra());
        let e = sf.e_frame;
        let (b, m, th, s) = (grp.beta, sf.m, sf.theta, grp.alpha + grp.delta);
        let z = [0.0; 3];
        let cov = |i: usize, k: usize| on(&e, &geom.conn.covariant(&e[i], &e[k]));
        let conn = [
            [z, [0.0, 0.0, -th * m], [0.0, th * m, 0.0]],
            [[0.0, 0.0, -b], z, [b, 0.0, 0.0]],
            [[0.0, th * m, 0.0], [-th * m, 0.0, -s], [0.0, s, 0.0]],
        ];
        for i in 0..3 {
            for k in 0..3 {
                prop_assert!(norm(sub(cov(i, k), conn[i][k])) < 1e-11);
            }
        }
        let na = geom.nabla_a(&xi);
        let w = m * (th * m - b);
        let p = s * (m - th * b);
        let da = [
            [z, [0.0, -w, 0.0], [0.0, 0.0, w]],
            [[0.0, -m * b, 0.0], [th * b * b, 0.0, 0.0], z],
            [[0.0, 0.0, -m * b], [0.0, -p, 0.0], [th * m * m, 0.0, p]],
        ];
        for i in 0..3 {
            for k in 0..3 {
                prop_assert!(norm(sub(on(&e, &table_eval(&na, &e[i], &e[k])), da[i][k])) < 1e-11);
            }
        }
        let r = |i: usize, k: usize| on(&e, &geom.curv.apply(&e[i], &e[k], &xi.x));
        prop_assert!(norm(sub(r(0, 1), [0.0, m * (th * m - 2.0 * b), 0.0])) < 1e-11);
        prop_assert!(norm(sub(r(0, 2), [0.0, 0.0, -th * m * m])) < 1e-11);
        prop_assert!(norm(sub(r(1, 2), [0.0, -p, 0.0])) < 1e-11);
    }

    #[test]
    fn closed_form_omega_matches_general(seed in any::<u64>()) {
        let mut g = rng(seed);
        let grp = aligned_group(&mut g);
        let xi = aligned_field(&grp, 1.0, if g.gen_bool(0.5) { 1.0 } else { -1.0 });
        let c = second_fundamental_form(&grp, &xi).unwrap();
        let gen = second_fundamental_form_general(&grp, &xi).unwrap();
        prop_assert!(c.omega1.sub(&gen.omega1).max_abs() < 1e-11);
        prop_assert!(c.omega2.sub(&gen.omega2).max_abs() < 1e-11);
    }
}

fn sasakian_instances() -> Vec<(NonUnimodularGroup, f64)> {
    let mut out = vec![];
    for a in [1.5, 2.0, 3.0] {
        for th in [1.0, -1.0] {
            out.push((NonUnimodularGroup::new(a, th, -1.0 / a).unwrap(), th));
        }
    }
    out
}

#[test]
fn sasakian_branch_is_totally_geodesic_with_vanishing_omega() {
    for (grp, th) in sasakian_instances() {
        let geom = Geometry::new(grp.algebra());
        for xi in [sasakian_field(grp.alpha, th), sasakian_field(grp.alpha, th).neg()] {
            assert!(geom.residual(&xi) < 1e-12);
            assert!(second_fundamental_form(&grp, &xi).unwrap().max_abs() < 1e-12);
            assert!(second_fundamental_form_general(&grp, &xi).unwrap().max_abs() < 1e-12);
            let bumped = NonUnimodularGroup::new(grp.alpha, grp.beta + 1e-2, grp.delta).unwrap();
            assert!(second_fundamental_form_general(&bumped, &xi).unwrap().max_abs() > 1e-4);
            assert!(second_fundamental_form(&bumped, &xi).unwrap().max_abs() > 1e-4);
        }
    }
}

#[test]
fn sasakian_field_is_killing_in_the_singular_frame() {
    for (grp, th) in sasakian_instances() {
        let xi = sasakian_field(grp.alpha, th);
        let sf = singular_frame(&grp, &xi).unwrap();
        let a = sf.matrix_of(&Geometry::new(grp.algebra()).shape(&xi));
        let want = Mat3::from_rows([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]);
        assert!(a.sub(&want).max_abs() < 1e-12, "{grp:?}: {a:?}");
        assert!((sf.e_frame[0] - xi.x * sf.theta).norm() < 1e-12);
    }
}

#[test]
fn classification_of_both_branches() {
    for a in [1.0, 2.0] {
        let grp = NonUnimodularGroup::new(a, 0.0, 0.0).unwrap();
        let c = classify(&grp);
        assert_eq!(c.solutions.describe(), "±e3");
        let r = structure_report(&grp.algebra(), &UnitField::basis(2, 1.0));
        assert!(r.parallel);
    }
    for th in [1.0, -1.0] {
        let grp = NonUnimodularGroup::new(2.0, th, -0.5).unwrap();
        let c = classify(&grp);
        let [fam] = c.solutions.families.as_slice() else { panic!() };
        let SolutionFamily::ParamPair { fields } = fam else { panic!() };
        let want = Vec3::new(0.0, th / 5f64.sqrt(), 2.0 / 5f64.sqrt());
        assert!((fields[0].x - want).norm() < 1e-15);
        assert!((fields[1].x + want).norm() < 1e-15);
    }
}

#[test]
fn user_frame_solutions_hold_for_noncanonical_input() {
    // (−½, −1, 2) is (2, 1, −½) after swapping e2 and e3
    for (a, b, d) in [(-0.5, -1.0, 2.0), (-2.0, -1.0, 0.5), (0.5, 1.0, -2.0), (-1.0, 0.0, 0.0)] {
        let grp = NonUnimodularGroup::new(a, b, d).unwrap();
        let c = classify(&grp);
        assert!(!c.solutions.is_empty(), "{a},{b},{d}");
        let o = Oracle::of(&grp.algebra());
        for f in c.solutions.samples(4, 4) {
            assert!(o.residual(f.x.0) < 1e-12);
        }
    }
}

#[test]
fn solutions_stay_in_the_unimodular_kernel() {
    let mut g = rng(5);
    for _ in 0..6 {
        let grp = canonical_nu(&mut g);
        let res = sphere_scan(&Geometry::new(grp.algebra()), &ScanOptions::new(4000, 1e-4)).unwrap();
        assert!(res.candidates.iter().all(|c| c.x[0].abs() <= 1e-3), "{grp:?}");
    }
}

#[test]
fn generic_group_has_no_solutions() {
    let grp = NonUnimodularGroup::new(1.0, 0.5, 0.5).unwrap();
    assert!(classify(&grp).solutions.is_empty());
    let res = sphere_scan(&Geometry::new(grp.algebra()), &ScanOptions::new(20_000, 1e-4)).unwrap();
    assert!(res.clusters.is_empty());
}

#[test]
fn unaligned_kernel_fields_are_refused_by_the_closed_form() {
    let grp = NonUnimodularGroup::new(2.0, 1.0, -0.5).unwrap();
    let xi = UnitField::basis(1, 1.0);
    assert!(matches!(
        second_fundamental_form(&grp, &xi),
        Err(NonUnimodularError::FrameNotAligned(_))
    ));
    assert!(second_fundamental_form_general(&grp, &xi).is_ok());
    assert!(matches!(
        singular_frame(&NonUnimodularGroup::new(1.0, 0.0, 0.0).unwrap(), &UnitField::basis(2, 1.0)),
        Err(NonUnimodularError::DegenerateFrame(_))
    ));
}
