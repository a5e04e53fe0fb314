mod common;

use common::*;
use liegeo::solutions::{SolutionFamily, SolutionSet};
use liegeo::tg::{sphere_scan, ScanOptions, PAIRS};
use liegeo::unimodular::*;
use liegeo::UnitField;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_reference(l in prop::array::uniform3(-3.0..3.0f64), seed in any::<u64>()) {
        let g = UnimodularGroup::new(l).unwrap();
        let xi = unit(&mut rng(seed));
        let o = Oracle::of(&g.algebra());
        let rep = tg_components(&g.mu(), &xi);
        for &(i, k) in PAIRS.iter() {
            prop_assert!(norm(sub(rep.get(i, k).0, o.tg(xi.x.0, e(i), e(k)))) <= 1e-10);
        }
    }

    #[test]
    fn lemma_tables_match_reference(l in prop::array::uniform3(-3.0..3.0f64), seed in any::<u64>()) {
        let g = UnimodularGroup::new(l).unwrap();
        let xi = unit(&mut rng(seed));
        let o = Oracle::of(&g.algebra());
        let t = lemma21_tables(&g.mu(), &xi);
        for i in 0..3 {
            for k in 0..3 {
                prop_assert!(norm(sub(t.nabla_a[i][k].0, o.da(xi.x.0, e(i), e(k)))) < 1e-11);
            }
        }
        for (n, (i, k)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            prop_assert!(norm(sub(t.r_xi[n].0, o.r(e(i), e(k), xi.x.0))) < 1e-11);
        }
    }

    #[test]
    fn scalar_identities(l in prop::array::uniform3(-3.0..3.0f64)) {
        let g = UnimodularGroup::new(l).unwrap();
        let mu = connection_numbers(&g).mu;
        let cs = curvature_scalars(&g.mu());
        for i in 0..3 {
            prop_assert!((mu[i] - (0.5 * (l[0] + l[1] + l[2]) - l[i])).abs() < 1e-15);
            prop_assert_eq!(cs.sigma[i][i], 0.0);
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            prop_assert_eq!(cs.rho[i], 2.0 * mu[j] * mu[k]);
            prop_assert_eq!(cs.sigma[j][k], cs.sigma[k][j]);
        }
    }

    #[test]
    fn shape_matrix_matches_reference(l in prop::array::uniform3(-3.0..3.0f64), seed in any::<u64>()) {
        let g = UnimodularGroup::new(l).unwrap();
        let xi = unit(&mut rng(seed));
        let o = Oracle::of(&g.algebra());
        let a = shape_matrix(&g.mu(), &xi);
        for k in 0..3 {
            prop_assert!(norm(sub(a.column(k).0, o.a(xi.x.0, e(k)))) < 1e-14);
        }
    }

    #[test]
    fn classification_is_frame_independent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let (inst, expected) = row_instance(&mut g);
        let (user, pi_inv) = transform(&mut g, inst);
        let t = classify_theorem22(&UnimodularGroup::new(user).unwrap()).unwrap();
        prop_assert_eq!(t.solutions.describe(), relabel(&expected, &pi_inv).describe());
        let o = Oracle::of(&UnimodularGroup::new(user).unwrap().algebra());
        for f in t.solutions.samples(32, 100) {
            prop_assert!(o.residual(f.x.0) < 1e-9);
        }
        // canonical ↔ user round trip
        prop_assert_eq!(t.canonical_solutions.map(&t.canonical.frame), t.solutions.clone());
        for f in t.solutions.samples(8, 20) {
            let back = t.canonical.frame.to_canonical(&f.x);
            prop_assert!(t.canonical_solutions.distance(&back) < 1e-12);
        }
    }
}

fn pts(i: usize) -> SolutionFamily {
    SolutionFamily::Isolated {
        fields: vec![UnitField::basis(i, 1.0)],
    }
}

fn circ(i: usize, k: usize) -> SolutionFamily {
    SolutionFamily::GreatCircle { plane: [i.min(k), i.max(k)] }
}

fn set(f: Vec<SolutionFamily>) -> SolutionSet {
    let mut s = SolutionSet::empty();
    for x in f {
        s.add(x);
    }
    s
}

/// A random instance of a random Theorem 2.2 row together with its
/// solution set in the instance frame.
fn row_instance(g: &mut impl Rng) -> ([f64; 3], SolutionSet) {
    let r = |g: &mut dyn rand::RngCore, lo: f64, hi: f64| g.gen_range(lo..hi);
    let q = |x: f64| (4.0 + x * x).sqrt();
    match g.gen_range(0..14) {
        0 => ([2.0, 2.0, 2.0], set(vec![SolutionFamily::WholeSphere])),
        1 => {
            let l = r(g, 2.2, 4.0);
            ([l, l, 2.0], set(vec![pts(2)]))
        }
        2 => {
            let l = r(g, 2.2, 4.0);
            ([l, l, l - (l * l - 4.0).sqrt()], set(vec![circ(0, 1)]))
        }
        3 => {
            let l = r(g, 0.2, 1.8);
            ([2.0, l, l], set(vec![pts(0)]))
        }
        4 => {
            let l = r(g, 2.2, 4.0);
            ([l + (l * l - 4.0).sqrt(), l, l], set(vec![circ(1, 2)]))
        }
        5 => {
            // λ2² − (λ1 − λ3)² = 4 with λ1 > λ2 > λ3 > 0
            let l3 = r(g, 1.0, 2.0);
            let l1 = r(g, (4.0 + l3 * l3) / (2.0 * l3) + 0.3, 6.0);
            ([l1, q(l1 - l3), l3], set(vec![pts(1)]))
        }
        6 => {
            let l2 = r(g, 0.2, 2.0);
            let l1 = l2 + r(g, 0.1, 2.0);
            ([l1, l2, -q(l1 - l2)], set(vec![pts(2)]))
        }
        7 => {
            let l2 = r(g, 0.2, 2.0);
            let l3 = -r(g, 0.2, 2.0);
            ([q(l2 - l3), l2, l3], set(vec![pts(0)]))
        }
        8 => {
            let l = r(g, 0.2, 3.0);
            ([l, l, 0.0], set(vec![pts(2), circ(0, 1)]))
        }
        9 => {
            let l = r(g, 0.2, 3.0);
            ([q(l), l, 0.0], set(vec![pts(0)]))
        }
        10 => {
            let l = r(g, 0.2, 3.0);
            ([l, -q(l), 0.0], set(vec![pts(1)]))
        }
        11 => {
            let l = r(g, 0.2, 3.0);
            ([q(l), -l, 0.0], set(vec![pts(0)]))
        }
        12 => ([2.0, 0.0, 0.0], set(vec![pts(0)])),
        _ => ([0.0; 3], set(vec![SolutionFamily::WholeSphere])),
    }
}

/// Rewrites `λ` in the frame `e'_j = t_j e_{π(j)}`; returns `π⁻¹`.
fn transform(g: &mut impl Rng, l: [f64; 3]) -> ([f64; 3], [usize; 3]) {
    let mut pi = [0usize, 1, 2];
    pi.shuffle(g);
    let sgn = liegeo::algebra::levi_civita(pi[0], pi[1], pi[2]).unwrap() as f64;
    let t: f64 = if g.gen_bool(0.5) { 1.0 } else { -1.0 };
    let user = [0, 1, 2].map(|m| t * sgn * l[pi[m]]);
    let mut inv = [0; 3];
    for j in 0..3 {
        inv[pi[j]] = j;
    }
    (user, inv)
}

fn relabel(s: &SolutionSet, inv: &[usize; 3]) -> SolutionSet {
    let mut out = SolutionSet::empty();
    for f in &s.families {
        out.add(match f {
            SolutionFamily::Isolated { fields } => SolutionFamily::Isolated {
                fields: fields
                    .iter()
                    .map(|x| {
                        let i = (0..3).find(|&i| x.x[i] != 0.0).unwrap();
                        UnitField::basis(inv[i], 1.0)
                    })
                    .collect(),
            },
            SolutionFamily::GreatCircle { plane } => circ(inv[plane[0]], inv[plane[1]]),
            other => other.clone(),
        });
    }
    out
}

#[test]
fn isolated_solutions_sit_on_ricci_eigenvalue_two_or_flat_rows() {
    let mut g = rng(7);
    for _ in 0..200 {
        let (l, _) = row_instance(&mut g);
        let grp = UnimodularGroup::new(l).unwrap();
        let t = classify_theorem22(&grp).unwrap();
        let c = canonicalize(&grp).group;
        let cs = curvature_scalars(&c.mu());
        let flat = cs.rho.iter().all(|r| r.abs() < 1e-9);
        for fam in &t.canonical_solutions.families {
            if let SolutionFamily::Isolated { fields } = fam {
                for f in fields {
                    let m = (0..3).find(|&i| f.x[i].abs() == 1.0).unwrap();
                    assert!((cs.rho[m] - 2.0).abs() < 1e-9 || flat, "λ = {l:?}");
                }
            }
        }
    }
}

#[test]
fn scan_finds_nothing_beyond_the_classification() {
    let mut g = rng(21);
    for _ in 0..12 {
        let (inst, _) = row_instance(&mut g);
        let (user, _) = transform(&mut g, inst);
        let grp = UnimodularGroup::new(user).unwrap();
        let t = classify_theorem22(&grp).unwrap();
        let geom = liegeo::Geometry::new(grp.algebra());
        let res = sphere_scan(&geom, &ScanOptions::new(6000, 1e-4)).unwrap();
        let m = t.solutions.match_clusters(&res.clusters, &res.candidates, 1e-3);
        assert!(m.ok(), "λ = {user:?}: {m:?}");
        for c in &res.candidates {
            assert!(Oracle::of(&grp.algebra()).residual(c.x.0) < 1e-4);
        }
    }
}

#[test]
fn generic_groups_have_no_solutions() {
    for l in [[3.0, 2.0, 1.0], [1.5, -0.7, 0.2], [2.5, 2.5, 1.2]] {
        let t = classify_theorem22(&UnimodularGroup::new(l).unwrap()).unwrap();
        assert!(t.solutions.is_empty(), "{l:?}");
        let geom = liegeo::Geometry::new(UnimodularGroup::new(l).unwrap().algebra());
        let res = sphere_scan(&geom, &ScanOptions::new(4000, 1e-4)).unwrap();
        assert!(res.clusters.is_empty(), "{l:?}");
    }
}

#[test]
fn table1_union_semantics() {
    let s5 = 5f64.sqrt();
    let got = classify_table1(&UnimodularGroup::new([2.0, 2.0, 2.0]).unwrap());
    assert!(got.is_whole_sphere());
    let got = classify_table1(&UnimodularGroup::new([3.0, 3.0, 3.0 - s5]).unwrap());
    assert_eq!(got.describe(), "S∩{e1,e2}");
}
