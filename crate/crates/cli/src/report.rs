//! RunReport assembly for each subcommand.

use liegeo::contact::{structure_report, StructureReport};
use liegeo::nonunimodular::{self, FoliationReport};
use liegeo::solutions::{ClusterMatch, SolutionFamily, SolutionSet};
use liegeo::tables::TableRow;
use liegeo::tg::{Cluster, ScanResult, TgError, TgReport};
use liegeo::unimodular::{self, classify_theorem22};
use liegeo::{Geometry, UnitField, Vec3};
use serde::Serialize;

use crate::spec::{GroupEcho, GroupSpec};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_set: Option<SolutionSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<SolutionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub foliation: Option<FoliationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine: Option<RefineReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableReport>,
    pub tolerance: f64,
    pub pass: bool,
    pub timing_ms: f64,
}

impl RunReport {
    fn new(command: &'static str, group: Option<GroupEcho>, tolerance: f64) -> Self {
        Self {
            command,
            group,
            class: None,
            solution_set: None,
            solutions: Vec::new(),
            foliation: None,
            verify: None,
            scan: None,
            refine: None,
            table: None,
            tolerance,
            pass: true,
            timing_ms: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionSummary {
    pub description: String,
    pub conditions: Vec<String>,
    pub families: Vec<SolutionFamily>,
}

impl From<&SolutionSet> for SolutionSummary {
    fn from(s: &SolutionSet) -> Self {
        Self {
            description: s.describe(),
            conditions: s.certificates.clone(),
            families: s.families.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub family: String,
    pub field: Vec3,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_residual: Option<f64>,
    pub contact: StructureReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub field: Vec3,
    pub renormalized: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_residual: Option<f64>,
    /// Largest component difference between closed form and oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<f64>,
    pub totally_geodesic: bool,
    pub components: TgReport,
    pub contact: StructureReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub resolution: usize,
    pub tol: f64,
    pub spacing: f64,
    pub screened: usize,
    pub candidates: usize,
    pub clusters: Vec<Cluster>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<MatchSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchSummary {
    pub expected: String,
    pub match_tol: f64,
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub extra_clusters: usize,
    pub missing_families: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefineReport {
    pub seed: Vec3,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec3>,
    pub residual: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact: Option<StructureReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub which: String,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("classify needs a unimodular or non-unimodular group, not raw structure constants")]
    RawClassify,
    #[error(transparent)]
    Parse(#[from] crate::spec::ParseError),
    #[error(transparent)]
    Unimodular(#[from] liegeo::unimodular::UnimodularError),
    #[error(transparent)]
    Tg(#[from] TgError),
}

/// Solution families with their conditions, in the user's frame.
fn closed_form(spec: &GroupSpec) -> Result<Option<(String, SolutionSet)>, CommandError> {
    Ok(match spec {
        GroupSpec::Unimodular(g) => {
            let t = classify_theorem22(g)?;
            Some((t.class.to_string(), t.solutions))
        }
        GroupSpec::NonUnimodular(g) => Some(("non-unimodular".to_string(), nonunimodular::classify(g).solutions)),
        GroupSpec::Raw(_) => None,
    })
}

fn closed_form_report(spec: &GroupSpec, xi: &UnitField) -> Option<TgReport> {
    match spec {
        GroupSpec::Unimodular(g) => Some(unimodular::tg_components(&g.mu(), xi)),
        GroupSpec::NonUnimodular(g) => Some(nonunimodular::tg_equations(g, xi)),
        GroupSpec::Raw(_) => None,
    }
}

pub fn classify(spec: &GroupSpec, tol: f64) -> Result<RunReport, CommandError> {
    let (class, set) = closed_form(spec)?.ok_or(CommandError::RawClassify)?;
    let alg = spec.algebra();
    let geom = Geometry::new(alg);
    let mut r = RunReport::new("classify", Some(GroupEcho::of(spec)), tol);
    r.class = Some(class);
    for fam in &set.families {
        for xi in fam.representatives() {
            let residual = geom.residual(&xi);
            let closed = closed_form_report(spec, &xi).map(|t| t.residual);
            r.pass &= residual < tol && closed.is_none_or(|c| c < tol);
            r.solutions.push(SolutionReport {
                family: fam.describe(),
                field: xi.x,
                residual,
                closed_form_residual: closed,
                contact: structure_report(&alg, &xi),
            });
        }
    }
    if let GroupSpec::NonUnimodular(g) = spec {
        r.foliation = nonunimodular::foliation_report(g).ok();
    }
    r.solution_set = Some((&set).into());
    Ok(r)
}

pub fn verify(spec: &GroupSpec, xi: &UnitField, renormalized: bool, tol: f64) -> RunReport {
    let alg = spec.algebra();
    let oracle = Geometry::new(alg).report(xi);
    let closed = closed_form_report(spec, xi);
    let difference = closed.as_ref().map(|c| c.max_diff(&oracle));
    let mut r = RunReport::new("verify", Some(GroupEcho::of(spec)), tol);
    r.pass = difference.is_none_or(|d| d <= tol);
    r.verify = Some(VerifyReport {
        field: xi.x,
        renormalized,
        residual: oracle.residual,
        closed_form_residual: closed.map(|c| c.residual),
        difference,
        totally_geodesic: oracle.residual < tol,
        components: oracle,
        contact: structure_report(&alg, xi),
    });
    r
}

pub fn scan(spec: &GroupSpec, res: &ScanResult, match_tol: f64) -> Result<RunReport, CommandError> {
    let mut r = RunReport::new("scan", Some(GroupEcho::of(spec)), res.tol);
    let matching = closed_form(spec)?.map(|(class, set)| {
        r.class = Some(class);
        let m: ClusterMatch = set.match_clusters(&res.clusters, &res.candidates, match_tol);
        r.pass = m.ok();
        r.solution_set = Some((&set).into());
        MatchSummary {
            expected: set.describe(),
            match_tol,
            max_distance: m.max_distance(),
            distances: m.distances,
            extra_clusters: m.extra_clusters,
            missing_families: m.missing_families,
        }
    });
    r.scan = Some(ScanSummary {
        resolution: res.resolution,
        tol: res.tol,
        spacing: res.spacing,
        screened: res.screened,
        candidates: res.candidates.len(),
        clusters: res.clusters.clone(),
        matching,
    });
    Ok(r)
}

/// Returns the report and whether refinement converged.
pub fn refine(spec: &GroupSpec, seed: &UnitField, tol: f64) -> (RunReport, bool) {
    let alg = spec.algebra();
    let geom = Geometry::new(alg);
    let mut r = RunReport::new("refine", Some(GroupEcho::of(spec)), tol);
    let out = liegeo::tg::refine(&geom, seed, tol);
    let converged = out.is_ok();
    r.pass = converged;
    r.refine = Some(match out {
        Ok(f) => RefineReport {
            seed: seed.x,
            converged,
            field: Some(f.field.x),
            residual: f.residual,
            iterations: f.iterations,
            contact: Some(structure_report(&alg, &f.field)),
        },
        Err(TgError::NonConvergence { iterations, residual }) => RefineReport {
            seed: seed.x,
            converged,
            field: None,
            residual,
            iterations,
            contact: None,
        },
        Err(_) => RefineReport {
            seed: seed.x,
            converged,
            field: None,
            residual: f64::NAN,
            iterations: 0,
            contact: None,
        },
    });
    (r, converged)
}

pub fn table(which: &str, rows: Vec<TableRow>, tol: f64) -> RunReport {
    let mut r = RunReport::new("table", None, tol);
    r.pass = rows.iter().all(|row| row.pass);
    r.table = Some(TableReport {
        which: which.to_string(),
        rows,
    });
    r
}
