//! Damped Gauss–Newton on the sphere for zeros of the stacked TG components.

use serde::{Deserialize, Serialize};

use super::{Geometry, TgError, UnitField};
use crate::algebra::Vec3;

pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    /// Success threshold on the max-norm residual.
    pub tol: f64,
    pub max_iterations: usize,
    /// Central-difference step for the tangent Jacobian.
    pub fd_step: f64,
    /// Give up early when the residual drops by less than 10% over this
    /// many iterations while still above `tol`.
    pub stall_window: usize,
}

impl RefineOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iterations: MAX_ITERATIONS,
            fd_step: 1e-6,
            stall_window: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refined {
    pub field: UnitField,
    pub residual: f64,
    pub iterations: usize,
}

pub fn refine(geom: &Geometry, seed: &UnitField, tol: f64) -> Result<Refined, TgError> {
    refine_with(geom, seed, &RefineOptions::with_tol(tol))
}

fn objective(f: &[f64; 18]) -> f64 {
    f.iter().map(|v| v * v).sum()
}

fn tangent_basis(x: &Vec3) -> (Vec3, Vec3) {
    let mut axis = 0;
    for j in 1..3 {
        if x[j].abs() < x[axis].abs() {
            axis = j;
        }
    }
    let t1 = x.cross(&Vec3::basis(axis)).normalized().unwrap_or(Vec3::basis((axis + 1) % 3));
    let t2 = x.cross(&t1);
    (t1, t2)
}

fn retract(x: &Vec3, step: Vec3) -> Vec3 {
    (*x + step).normalized().unwrap_or(*x)
}

pub fn refine_with(geom: &Geometry, seed: &UnitField, opts: &RefineOptions) -> Result<Refined, TgError> {
    let mut x = seed.x.normalized().ok_or(TgError::Degenerate)?;
    let scale = geom.alg.max_abs().max(1.0).powi(3);
    let floor = 1e-14 * scale;

    let mut report = geom.report_at(&x);
    let mut f = report.stacked();
    let mut obj = objective(&f);
    let mut history = Vec::with_capacity(opts.max_iterations + 1);
    history.push(report.residual);
    let mut iterations = 0;

    while iterations < opts.max_iterations && report.residual > floor {
        let (t1, t2) = tangent_basis(&x);
        let h = opts.fd_step;
        let mut jac = [[0.0; 18]; 2];
        for (col, t) in jac.iter_mut().zip([t1, t2]) {
            let fp = geom.report_at(&retract(&x, t * h)).stacked();
            let fm = geom.report_at(&retract(&x, t * -h)).stacked();
            for n in 0..18 {
                col[n] = (fp[n] - fm[n]) / (2.0 * h);
            }
        }
        let dot = |a: &[f64; 18], b: &[f64; 18]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        let mut a11 = dot(&jac[0], &jac[0]);
        let a12 = dot(&jac[0], &jac[1]);
        let mut a22 = dot(&jac[1], &jac[1]);
        let g1 = dot(&jac[0], &f);
        let g2 = dot(&jac[1], &f);
        // tiny Levenberg term keeps the solve defined on solution curves
        let mu = 1e-12 * (a11 + a22) + 1e-300;
        a11 += mu;
        a22 += mu;
        let det = a11 * a22 - a12 * a12;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let d1 = -(a22 * g1 - a12 * g2) / det;
        let d2 = -(a11 * g2 - a12 * g1) / det;
        let dir = t1 * d1 + t2 * d2;

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let y = retract(&x, dir * step);
            let ry = geom.report_at(&y);
            let fy = ry.stacked();
            let oy = objective(&fy);
            if oy < obj {
                x = y;
                report = ry;
                f = fy;
                obj = oy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
        history.push(report.residual);
        let w = opts.stall_window;
        if history.len() > w && report.residual > opts.tol && report.residual > 0.9 * history[history.len() - 1 - w] {
            break;
        }
    }

    if report.residual < opts.tol {
        Ok(Refined {
            field: UnitField { x },
            residual: report.residual,
            iterations,
        })
    } else {
        Err(TgError::NonConvergence {
            iterations,
            residual: report.residual,
        })
    }
}
