//! Adaptive Dormand–Prince 5(4) on complex state vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-8,
            abs: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel > 0.0 && self.rel < 1.0 && self.abs > 0.0 && self.abs.is_finite()) {
            return Err(Error::Config(format!(
                "tolerances must be positive with rel < 1, got rel {} abs {}",
                self.rel, self.abs
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

pub struct Integrator {
    pub tolerances: Tolerances,
    pub max_steps: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            tolerances: Tolerances::default(),
            max_steps: 1_000_000,
        }
    }
}

fn combo(out: &mut [C], y: &[C], h: f64, terms: &[(f64, &[C])]) {
    for i in 0..y.len() {
        let mut acc = C::new(0.0, 0.0);
        for &(c, k) in terms {
            acc += k[i] * c;
        }
        out[i] = y[i] + acc * h;
    }
}

impl Integrator {
    /// Largest scaled component error. A root-mean-square norm would let
    /// the many exactly-zero entries of a density matrix hide the error.
    fn error_norm(&self, y: &[C], y_new: &[C], err: &[C]) -> f64 {
        let Tolerances { rel, abs } = self.tolerances;
        (0..y.len())
            .map(|i| err[i].norm() / (abs + rel * y[i].norm().max(y_new[i].norm())))
            .fold(0.0, f64::max)
    }

    fn initial_step<F>(
        &self,
        rhs: &mut F,
        t: f64,
        y: &[C],
        f0: &[C],
        span: f64,
        stats: &mut Stats,
    ) -> f64
    where
        F: FnMut(f64, &[C], &mut [C]),
    {
        let Tolerances { rel, abs } = self.tolerances;
        let n = y.len() as f64;
        let rms =
            |v: &dyn Fn(usize) -> f64| ((0..y.len()).map(|i| v(i).powi(2)).sum::<f64>() / n).sqrt();
        let scale = |i: usize| abs + rel * y[i].norm();
        let d0 = rms(&|i| y[i].norm() / scale(i));
        let d1 = rms(&|i| f0[i].norm() / scale(i));
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * span
        } else {
            0.01 * d0 / d1
        }
        .min(span);
        let y1: Vec<C> = y.iter().zip(f0).map(|(a, b)| a + b * h0).collect();
        let mut f1 = vec![C::new(0.0, 0.0); y.len()];
        rhs(t + h0, &y1, &mut f1);
        stats.rhs_evals += 1;
        let d2 = rms(&|i| (f1[i] - f0[i]).norm() / scale(i)) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6 * span)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    }

    /// Integrates from `t0` through every time in `outputs` (ascending,
    /// not before `t0`), landing on each exactly. `observe` sees each
    /// accepted step together with whether it is an output time.
    pub fn run<F, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y: &mut [C],
        outputs: &[f64],
        mut observe: O,
    ) -> Result<Stats>
    where
        F: FnMut(f64, &[C], &mut [C]),
        O: FnMut(f64, &[C], bool) -> Result<()>,
    {
        self.tolerances.validate()?;
        let n = y.len();
        let mut stats = Stats::default();
        let Some(&t_end) = outputs.last() else {
            return Ok(stats);
        };
        if outputs.windows(2).any(|w| w[1] < w[0]) || outputs[0] < t0 {
            return Err(Error::Config(
                "output times must be ascending and not before the initial time".into(),
            ));
        }
        let zero = C::new(0.0, 0.0);
        let mut k: Vec<Vec<C>> = (0..7).map(|_| vec![zero; n]).collect();
        let mut tmp = vec![zero; n];
        let mut y_new = vec![zero; n];
        let mut err = vec![zero; n];

        let mut t = t0;
        let mut next = 0;
        while next < outputs.len() && outputs[next] <= t {
            observe(t, y, true)?;
            next += 1;
        }
        if next == outputs.len() {
            return Ok(stats);
        }
        rhs(t, y, &mut k[0]);
        stats.rhs_evals += 1;
        let span = t_end - t0;
        let mut h = self.initial_step(&mut rhs, t, y, &k[0], span, &mut stats);

        while next < outputs.len() {
            if stats.steps + stats.rejected >= self.max_steps {
                return Err(Error::ToleranceNotMet(format!(
                    "step budget {} exhausted at t = {t:e} s",
                    self.max_steps
                )));
            }
            let target = outputs[next];
            let mut landing = false;
            let mut step = h;
            if t + step >= target || target - (t + step) < 1e-3 * step {
                step = target - t;
                landing = true;
            }
            if step <= 16.0 * f64::EPSILON * t.abs().max(span) {
                return Err(Error::StepFailure {
                    t,
                    reason: format!("step size {step:e} underflowed"),
                });
            }

            let (k0, rest) = k.split_first_mut().unwrap();
            let [k1, k2, k3, k4, k5, k6] = rest else {
                unreachable!()
            };
            combo(&mut tmp, y, step, &[(A21, k0)]);
            rhs(t + C2 * step, &tmp, k1);
            combo(&mut tmp, y, step, &[(A31, k0), (A32, k1)]);
            rhs(t + C3 * step, &tmp, k2);
            combo(&mut tmp, y, step, &[(A41, k0), (A42, k1), (A43, k2)]);
            rhs(t + C4 * step, &tmp, k3);
            combo(
                &mut tmp,
                y,
                step,
                &[(A51, k0), (A52, k1), (A53, k2), (A54, k3)],
            );
            rhs(t + C5 * step, &tmp, k4);
            combo(
                &mut tmp,
                y,
                step,
                &[(A61, k0), (A62, k1), (A63, k2), (A64, k3), (A65, k4)],
            );
            rhs(t + step, &tmp, k5);
            combo(
                &mut y_new,
                y,
                step,
                &[(B1, k0), (B3, k2), (B4, k3), (B5, k4), (B6, k5)],
            );
            let t_new = if landing { target } else { t + step };
            rhs(t_new, &y_new, k6);
            stats.rhs_evals += 6;
            for i in 0..n {
                err[i] =
                    (k0[i] * E1 + k2[i] * E3 + k3[i] * E4 + k4[i] * E5 + k5[i] * E6 + k6[i] * E7)
                        * step;
            }
            let e = self.error_norm(y, &y_new, &err);
            if !e.is_finite() {
                return Err(Error::StepFailure {
                    t,
                    reason: "non-finite state".into(),
                });
            }
            let factor = if e == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * e.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if e <= 1.0 {
                stats.steps += 1;
                t = t_new;
                y.copy_from_slice(&y_new);
                std::mem::swap(k0, k6);
                let mut hit = false;
                while next < outputs.len() && outputs[next] <= t {
                    hit = true;
                    next += 1;
                }
                observe(t, y, hit)?;
                // A landing step says nothing about the natural step size.
                h = if landing {
                    h.max(step * factor)
                } else {
                    step * factor
                };
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
            }
        }
        Ok(stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_and_rotation() {
        let lam = C::new(-0.7, 3.0);
        let mut y = vec![C::new(1.0, 0.0)];
        let outputs = [0.5, 1.0, 2.0];
        let mut seen = Vec::new();
        let stats = Integrator::default()
            .run(
                |_, y, dy| dy[0] = lam * y[0],
                0.0,
                &mut y,
                &outputs,
                |t, y, hit| {
                    if hit {
                        seen.push((t, y[0]));
                    }
                    Ok(())
                },
            )
            .unwrap();
        assert_eq!(seen.len(), 3);
        for (t, v) in seen {
            assert!(outputs.contains(&t));
            assert!((v - (lam * t).exp()).norm() < 1e-8);
        }
        assert!(stats.steps > 5);
    }

    #[test]
    fn time_dependent_rate() {
        // dy/dt = -t y  ⇒  y = exp(-t²/2)
        let mut y = vec![C::new(1.0, 0.0)];
        Integrator::default()
            .run(
                |t, y, dy| dy[0] = -t * y[0],
                0.0,
                &mut y,
                &[3.0],
                |_, _, _| Ok(()),
            )
            .unwrap();
        assert!((y[0].re - (-4.5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn rejects_descending_outputs() {
        let mut y = vec![C::new(1.0, 0.0)];
        let r = Integrator::default().run(
            |_, _, dy| dy[0] = C::new(0.0, 0.0),
            0.0,
            &mut y,
            &[2.0, 1.0],
            |_, _, _| Ok(()),
        );
        assert!(r.is_err());
    }
}
