//! Group specifications from flags or JSON files.

use std::path::Path;

use liegeo::nonunimodular::{NonUnimodularError, NonUnimodularGroup};
use liegeo::unimodular::{UnimodularError, UnimodularGroup};
use liegeo::{MetricLieAlgebra3, Vec3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("expected three comma-separated numbers, got {0:?}")]
    Triple(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid group file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("exactly one of --unimodular, --nonunimodular, --group is required")]
    MissingGroup,
    #[error(transparent)]
    Unimodular(#[from] UnimodularError),
    #[error(transparent)]
    NonUnimodular(#[from] NonUnimodularError),
    #[error("invalid structure constants: {0}")]
    Algebra(#[from] liegeo::algebra::AlgebraError),
    #[error("field {0} is not a unit vector (|ξ| = {1})")]
    NonUnitInput(String, f64),
    #[error("LIEGEO_THREADS must be an integer ≥ 1, got {0:?}")]
    Threads(String),
}

pub fn triple(s: &str) -> Result<[f64; 3], ParseError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ParseError::Triple(s.to_string()));
    }
    let mut out = [0.0_f64; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| ParseError::Triple(s.to_string()))?;
        if !slot.is_finite() {
            return Err(ParseError::Triple(s.to_string()));
        }
    }
    Ok(out)
}

/// Accepts `x` when `| |x| − 1 | ≤ 1e−6` and renormalises it.
pub fn unit_field(s: &str) -> Result<(liegeo::UnitField, bool), ParseError> {
    let v = Vec3(triple(s)?);
    let n = v.norm();
    if (n - 1.0).abs() > 1e-6 {
        return Err(ParseError::NonUnitInput(s.to_string(), n));
    }
    let renormalized = (n - 1.0).abs() > liegeo::tg::UNIT_TOL;
    Ok((liegeo::UnitField { x: v * (1.0 / n) }, renormalized))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupSpec {
    Unimodular(UnimodularGroup),
    NonUnimodular(NonUnimodularGroup),
    Raw(MetricLieAlgebra3),
}

/// On-disk form.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GroupFile {
    Unimodular {
        lambda: [f64; 3],
    },
    Nonunimodular {
        alpha: f64,
        beta: f64,
        delta: f64,
    },
    /// `constants[i][k][m] = <[e_i,e_k], e_m>`
    Raw {
        constants: [[[f64; 3]; 3]; 3],
    },
}

impl GroupSpec {
    pub fn from_flags(
        unimodular: Option<&str>,
        nonunimodular: Option<&str>,
        file: Option<&Path>,
    ) -> Result<Self, ParseError> {
        match (unimodular, nonunimodular, file) {
            (Some(s), None, None) => Ok(GroupSpec::Unimodular(UnimodularGroup::new(triple(s)?)?)),
            (None, Some(s), None) => {
                let [a, b, d] = triple(s)?;
                Ok(GroupSpec::NonUnimodular(NonUnimodularGroup::new(a, b, d)?))
            }
            (None, None, Some(p)) => Self::from_file(p),
            _ => Err(ParseError::MissingGroup),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(match serde_json::from_str::<GroupFile>(text)? {
            GroupFile::Unimodular { lambda } => GroupSpec::Unimodular(UnimodularGroup::new(lambda)?),
            GroupFile::Nonunimodular { alpha, beta, delta } => {
                GroupSpec::NonUnimodular(NonUnimodularGroup::new(alpha, beta, delta)?)
            }
            GroupFile::Raw { constants } => GroupSpec::Raw(MetricLieAlgebra3::new(constants)?),
        })
    }

    pub fn algebra(&self) -> MetricLieAlgebra3 {
        match self {
            GroupSpec::Unimodular(g) => g.algebra(),
            GroupSpec::NonUnimodular(g) => g.algebra(),
            GroupSpec::Raw(a) => *a,
        }
    }
}

/// Group echo in reports.
#[derive(Debug, Clone, Serialize)]
pub struct GroupEcho {
    pub kind: &'static str,
    pub input: Vec<f64>,
    pub canonical: Option<Vec<f64>>,
    /// `e'_j = signs[j]·e_{perm[j]+1}`, 1-based
    pub frame: Option<FrameEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<[[[f64; 3]; 3]; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameEcho {
    pub perm: [usize; 3],
    pub signs: [f64; 3],
}

impl From<&liegeo::FrameMap> for FrameEcho {
    fn from(f: &liegeo::FrameMap) -> Self {
        Self {
            perm: f.perm.map(|p| p + 1),
            signs: f.signs,
        }
    }
}

impl GroupEcho {
    pub fn of(spec: &GroupSpec) -> Self {
        match spec {
            GroupSpec::Unimodular(g) => {
                let c = liegeo::unimodular::canonicalize(g);
                GroupEcho {
                    kind: "unimodular",
                    input: g.lambda.to_vec(),
                    canonical: Some(c.group.lambda.to_vec()),
                    frame: Some((&c.frame).into()),
                    constants: None,
                }
            }
            GroupSpec::NonUnimodular(g) => {
                let c = liegeo::nonunimodular::canonicalize(g);
                GroupEcho {
                    kind: "nonunimodular",
                    input: vec![g.alpha, g.beta, g.delta],
                    canonical: Some(vec![c.group.alpha, c.group.beta, c.group.delta]),
                    frame: Some((&c.frame).into()),
                    constants: None,
                }
            }
            GroupSpec::Raw(a) => GroupEcho {
                kind: "raw",
                input: vec![],
                canonical: None,
                frame: None,
                constants: Some(*a.constants()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples() {
        assert_eq!(triple("2, -1,0.5").unwrap(), [2.0, -1.0, 0.5]);
        assert!(triple("1,2").is_err());
        assert!(triple("1,x,2").is_err());
        assert!(triple("1,inf,2").is_err());
    }

    #[test]
    fn unit_fields() {
        let (f, renorm) = unit_field("1,0,0").unwrap();
        assert_eq!(f.x, Vec3::basis(0));
        assert!(!renorm);
        let (f, renorm) = unit_field("1.0000005,0,0").unwrap();
        assert!(renorm && (f.x.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(unit_field("1,1,0"), Err(ParseError::NonUnitInput(..))));
    }

    #[test]
    fn json_specs() {
        let g = GroupSpec::from_json(r#"{"kind":"unimodular","lambda":[2,0,0]}"#).unwrap();
        assert!(matches!(g, GroupSpec::Unimodular(_)));
        let g = GroupSpec::from_json(r#"{"kind":"nonunimodular","alpha":2,"beta":1,"delta":-0.5}"#).unwrap();
        assert!(matches!(g, GroupSpec::NonUnimodular(_)));
        assert!(GroupSpec::from_json(r#"{"kind":"nonunimodular","alpha":1,"beta":1,"delta":-1}"#).is_err());
        assert!(GroupSpec::from_json(r#"{"kind":"other"}"#).is_err());
    }
}
