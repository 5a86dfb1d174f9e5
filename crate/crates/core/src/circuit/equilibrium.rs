//! Minimum of the two-resonator potential
//! `U = ½E_L1 φ1² + ½E_L2 φ2² − E cos(φ1 − φ2 − ϑ)`.

use crate::error::{Error, Result};
use crate::numeric::safe_newton;

/// Equilibrium phases `(φ1_min, φ2_min)`.
///
/// Stationarity gives `E_L1 φ1 = −E sin δ` and `E_L2 φ2 = E sin δ`, so the
/// problem collapses onto `x = φ1 − φ2` with the reduced potential
/// `½E_r x² − E cos(x − ϑ)`, `1/E_r = 1/E_L1 + 1/E_L2`. Every stationary
/// point has `|x| ≤ E/E_r`; when that ratio is below one there is exactly
/// one, otherwise all are bracketed and the lowest minimum is kept. A few
/// Newton steps on the full 2×2 system finish the job.
pub fn solve_equilibrium_phases(el1: f64, el2: f64, e_eff: f64, theta: f64) -> Result<(f64, f64)> {
    if !(el1 > 0.0 && el2 > 0.0) {
        return Err(Error::PreconditionViolated(
            "inductive energies must be positive".into(),
        ));
    }
    if !(e_eff >= 0.0) || !theta.is_finite() {
        return Err(Error::PreconditionViolated(
            "effective Josephson energy must be non-negative".into(),
        ));
    }
    if e_eff == 0.0 {
        return Ok((0.0, 0.0));
    }
    let er = el1 * el2 / (el1 + el2);
    let kappa = e_eff / er;
    let grad = |x: f64| {
        (
            er * x + e_eff * (x - theta).sin(),
            er + e_eff * (x - theta).cos(),
        )
    };
    let energy = |x: f64| 0.5 * er * x * x - e_eff * (x - theta).cos();

    let x = if kappa < 1.0 {
        let w = kappa * (1.0 + 1e-9);
        safe_newton(grad, -w, w, 1e-15 * kappa)?
    } else {
        global_minimum(&grad, &energy, kappa, er + e_eff)?
    };

    let s = e_eff * (x - theta).sin();
    let (mut p1, mut p2) = (-s / el1, s / el2);
    for _ in 0..4 {
        let d = p1 - p2 - theta;
        let (sd, cd) = d.sin_cos();
        let r1 = el1 * p1 + e_eff * sd;
        let r2 = el2 * p2 - e_eff * sd;
        let (a, b, c, dd) = (el1 + e_eff * cd, -e_eff * cd, -e_eff * cd, el2 + e_eff * cd);
        let det = a * dd - b * c;
        if det <= 0.0 {
            break;
        }
        p1 -= (dd * r1 - b * r2) / det;
        p2 -= (a * r2 - c * r1) / det;
    }
    let d = p1 - p2 - theta;
    let res = (el1 * p1 + e_eff * d.sin())
        .abs()
        .max((el2 * p2 - e_eff * d.sin()).abs());
    if res > 1e-12 * el1 {
        return Err(Error::NotConverged(format!(
            "equilibrium residual {res:e} exceeds tolerance"
        )));
    }
    Ok((p1, p2))
}

fn global_minimum(
    grad: &dyn Fn(f64) -> (f64, f64),
    energy: &dyn Fn(f64) -> f64,
    kappa: f64,
    scale: f64,
) -> Result<f64> {
    let lo = -kappa * (1.0 + 1e-12) - 1e-12;
    let hi = -lo;
    let n = 64 * (kappa.ceil() as usize + 1);
    let step = (hi - lo) / n as f64;
    let mut best: Option<(f64, f64)> = None;
    let mut runner_up = f64::INFINITY;
    let mut prev = grad(lo).0;
    for i in 1..=n {
        let b = lo + step * i as f64;
        let cur = grad(b).0;
        // A minimum is where the gradient goes from negative to positive.
        if prev < 0.0 && cur >= 0.0 {
            let x = safe_newton(grad, b - step, b, 1e-15 * kappa)?;
            let u = energy(x);
            match best {
                Some((_, ub)) if u >= ub => runner_up = runner_up.min(u),
                Some((_, ub)) => {
                    runner_up = ub;
                    best = Some((x, u));
                }
                None => best = Some((x, u)),
            }
        }
        prev = cur;
    }
    let (x, u) = best.ok_or_else(|| Error::NoRoot("no potential minimum bracketed".into()))?;
    if (runner_up - u).abs() < 1e-12 * scale {
        return Err(Error::PreconditionViolated(
            "degenerate potential minima; equilibrium is ambiguous".into(),
        ));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn potential(el1: f64, el2: f64, e: f64, th: f64, p1: f64, p2: f64) -> f64 {
        0.5 * el1 * p1 * p1 + 0.5 * el2 * p2 * p2 - e * (p1 - p2 - th).cos()
    }

    #[test]
    fn decoupled_wells_sit_at_origin() {
        assert_eq!(
            solve_equilibrium_phases(2.0, 3.0, 0.0, 1.0).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn integer_and_half_flux_give_origin() {
        for th in [0.0, PI, 2.0 * PI] {
            let (a, b) = solve_equilibrium_phases(1.5, 3.0, 0.9, th).unwrap();
            assert!(a.abs() < 1e-14 && b.abs() < 1e-14);
        }
    }

    #[test]
    fn strong_coupling_picks_lowest_minimum() {
        // E/E_r > 1: several stationary points, compare with a grid search.
        let (el1, el2, e, th) = (1.5, 0.75, 1.077, 1.19);
        let (p1, p2) = solve_equilibrium_phases(el1, el2, e, th).unwrap();
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let n = 1200;
        for i in 0..=n {
            for j in 0..=n {
                let a = -PI + 2.0 * PI * i as f64 / n as f64;
                let b = -PI + 2.0 * PI * j as f64 / n as f64;
                let u = potential(el1, el2, e, th, a, b);
                if u < best.0 {
                    best = (u, a, b);
                }
            }
        }
        assert!((p1 - best.1).abs() < 1e-2 && (p2 - best.2).abs() < 1e-2);
        assert!(potential(el1, el2, e, th, p1, p2) <= best.0 + 1e-12);
    }
}
