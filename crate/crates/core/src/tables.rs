//! Reproduction of the two unimodular classification tables over fixed
//! representative parameter instances.

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::solutions::{SolutionFamily, SolutionSet};
use crate::tg::{sphere_scan, Geometry, ScanOptions, UnitField};
use crate::unimodular::{classify_table1, classify_theorem22, UnimodularGroup};

#[derive(Debug, Clone, PartialEq)]
pub struct RowInstance {
    pub group: &'static str,
    pub condition: &'static str,
    pub lambda: [f64; 3],
    pub expected: SolutionSet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    /// Residual bound for every sampled member of the closed-form set.
    pub residual_tol: f64,
    /// Lattice size for the completeness scan; `None` skips it.
    pub scan_resolution: Option<usize>,
    pub scan_tol: f64,
    pub match_tol: f64,
    pub exec: Exec,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-9,
            scan_resolution: Some(20_000),
            scan_tol: 1e-4,
            match_tol: 1e-3,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCheck {
    pub clusters: usize,
    pub extra_clusters: usize,
    pub missing_families: Vec<String>,
    pub max_match_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub row: usize,
    pub group: String,
    pub condition: String,
    pub lambda: [f64; 3],
    pub expected: String,
    pub computed: String,
    pub max_residual: f64,
    pub scan: Option<ScanCheck>,
    pub pass: bool,
}

fn set(families: Vec<SolutionFamily>) -> SolutionSet {
    let mut s = SolutionSet::empty();
    for f in families {
        s.add(f);
    }
    s
}

fn pts(i: usize) -> SolutionFamily {
    SolutionFamily::Isolated {
        fields: vec![UnitField::basis(i, 1.0)],
    }
}

fn circ(i: usize, k: usize) -> SolutionFamily {
    SolutionFamily::GreatCircle { plane: [i, k] }
}

fn sphere() -> SolutionFamily {
    SolutionFamily::WholeSphere
}

pub fn theorem22_instances() -> Vec<RowInstance> {
    let s5 = 5f64.sqrt();
    let s8 = 8f64.sqrt();
    let row = |group, condition, lambda, expected| RowInstance {
        group,
        condition,
        lambda,
        expected: set(expected),
    };
    vec![
        row("SU(2)", "λ1=λ2=λ3=2", [2.0, 2.0, 2.0], vec![sphere()]),
        row("SU(2)", "λ1=λ2=λ>λ3=2", [3.0, 3.0, 2.0], vec![pts(2)]),
        row("SU(2)", "λ1=λ2=λ>2>λ3=λ−√(λ²−4)", [3.0, 3.0, 3.0 - s5], vec![circ(0, 1)]),
        row("SU(2)", "λ1=2>λ2=λ3=λ>0", [2.0, 1.0, 1.0], vec![pts(0)]),
        row("SU(2)", "λ1=λ+√(λ²−4)>λ=λ2=λ3>2", [3.0 + s5, 3.0, 3.0], vec![circ(1, 2)]),
        row("SU(2)", "λ1>λ2>λ3>0, λm²−(λi−λk)²=4", [3.0, s8, 1.0], vec![pts(1)]),
        row("SL(2,R)", "λ3²−(λ1−λ2)²=4", [3.0, 2.0, -s5], vec![pts(2)]),
        row("SL(2,R)", "λ1²−(λ2−λ3)²=4", [s8, 1.0, -1.0], vec![pts(0)]),
        row("E(2)", "λ1=λ2>0, λ3=0", [1.0, 1.0, 0.0], vec![pts(2), circ(0, 1)]),
        row("E(2)", "λ1²−λ2²=4, λ1>λ2>0, λ3=0", [s5, 1.0, 0.0], vec![pts(0)]),
        row("E(1,1)", "λ1²−λ2²=−4, λ1>0, λ2<0, λ3=0", [1.0, -s5, 0.0], vec![pts(1)]),
        row("E(1,1)", "λ1²−λ2²=4, λ1>0, λ2<0, λ3=0", [s5, -1.0, 0.0], vec![pts(0)]),
        row("Heisenberg", "λ1=2, λ2=0, λ3=0", [2.0, 0.0, 0.0], vec![pts(0)]),
        row("R+R+R", "λ1=λ2=λ3=0", [0.0, 0.0, 0.0], vec![sphere()]),
    ]
}

pub fn table1_instances() -> Vec<RowInstance> {
    let s5 = 5f64.sqrt();
    let t = 3.0 - s5;
    let row = |condition, lambda, expected| RowInstance {
        group: "",
        condition,
        lambda,
        expected: set(expected),
    };
    vec![
        row("ρ=0, μ=0", [0.0, 0.0, 0.0], vec![sphere()]),
        row("ρ=0, μ1≠0, μ2=μ3=0", [0.0, 1.0, 1.0], vec![pts(0), circ(1, 2)]),
        row("ρ=0, μ2≠0, μ1=μ3=0", [1.0, 0.0, 1.0], vec![pts(1), circ(0, 2)]),
        row("ρ=0, μ3≠0, μ1=μ2=0", [1.0, 1.0, 0.0], vec![pts(2), circ(0, 1)]),
        row("ρ1=2", [2.0, 0.0, 0.0], vec![pts(0)]),
        row("ρ2=2", [0.0, 2.0, 0.0], vec![pts(1)]),
        row("ρ3=2", [0.0, 0.0, 2.0], vec![pts(2)]),
        row("ρ1=ρ2=2", [3.0, 3.0, t], vec![circ(0, 1)]),
        row("ρ1=ρ3=2", [3.0, t, 3.0], vec![circ(0, 2)]),
        row("ρ2=ρ3=2", [t, 3.0, 3.0], vec![circ(1, 2)]),
        row("ρ1=ρ2=ρ3=2", [2.0, 2.0, 2.0], vec![sphere()]),
    ]
}

fn check_row(
    n: usize,
    inst: &RowInstance,
    computed: &SolutionSet,
    group: String,
    opts: &TableOptions,
) -> TableRow {
    let grp = UnimodularGroup { lambda: inst.lambda };
    let geom = Geometry::new(grp.algebra());
    let max_residual = computed
        .samples(32, 100)
        .iter()
        .map(|f| geom.residual(f))
        .fold(0.0_f64, f64::max);
    let scan = opts.scan_resolution.map(|resolution| {
        let res = sphere_scan(&geom, &ScanOptions::new(resolution, opts.scan_tol).with_exec(opts.exec))
            .expect("table resolutions are valid");
        let m = computed.match_clusters(&res.clusters, &res.candidates, opts.match_tol);
        ScanCheck {
            clusters: res.clusters.len(),
            extra_clusters: m.extra_clusters,
            missing_families: m.missing_families.clone(),
            max_match_distance: m.max_distance(),
        }
    });
    let expected = inst.expected.describe();
    let computed_s = computed.describe();
    let pass = expected == computed_s
        && max_residual < opts.residual_tol
        && scan
            .as_ref()
            .is_none_or(|s| s.extra_clusters == 0 && s.missing_families.is_empty());
    TableRow {
        row: n + 1,
        group,
        condition: inst.condition.to_string(),
        lambda: inst.lambda,
        expected,
        computed: computed_s,
        max_residual,
        scan,
        pass,
    }
}

pub fn run_theorem22(opts: &TableOptions) -> Vec<TableRow> {
    theorem22_instances()
        .iter()
        .enumerate()
        .map(|(n, inst)| {
            let grp = UnimodularGroup { lambda: inst.lambda };
            match classify_theorem22(&grp) {
                Ok(t) => check_row(n, inst, &t.solutions, t.class.to_string(), opts),
                Err(e) => TableRow {
                    row: n + 1,
                    group: inst.group.to_string(),
                    condition: inst.condition.to_string(),
                    lambda: inst.lambda,
                    expected: inst.expected.describe(),
                    computed: format!("error: {e}"),
                    max_residual: f64::NAN,
                    scan: None,
                    pass: false,
                },
            }
        })
        .collect()
}

pub fn run_table1(opts: &TableOptions) -> Vec<TableRow> {
    table1_instances()
        .iter()
        .enumerate()
        .map(|(n, inst)| {
            let computed = classify_table1(&UnimodularGroup { lambda: inst.lambda });
            check_row(n, inst, &computed, String::new(), opts)
        })
        .collect()
}
