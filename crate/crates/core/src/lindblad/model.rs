use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::space::{HilbertSpace, JpmLevel};
use super::sparse::Operator;
use crate::error::Result;

/// Time dependence of a dissipator rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rate {
    /// The collapse operator already carries `√rate`.
    Unit,
    /// `r(t) = slope · t`.
    Linear { slope: f64 },
}

impl Rate {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Rate::Unit => 1.0,
            Rate::Linear { slope } => slope * t,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Dissipator {
    pub label: &'static str,
    pub op: Operator,
    pub rate: Rate,
}

/// Rotating-frame Hamiltonian divided by ħ.
pub fn build_hamiltonian(space: &HilbertSpace, p: &ModelParams) -> Result<Operator> {
    space.validate()?;
    p.validate()?;
    let d = p.detunings();
    let a1 = space.a1();
    let a2 = space.a2();
    let af = space.af();
    let (a1d, a2d, afd) = (a1.adjoint(), a2.adjoint(), af.adjoint());
    let a1sq = a1.matmul(&a1);
    let a1dsq = a1d.matmul(&a1d);
    let n2 = a2d.matmul(&a2);

    let mut h = Operator::zeros(space.dim());
    let mut add = |op: Operator| h = h.add(&op);
    add(n2.scale_re(d.buffer));
    add(space.sigma(JpmLevel::E, JpmLevel::E).scale_re(d.e));
    add(space.sigma(JpmLevel::F, JpmLevel::F).scale_re(d.f));
    add(afd.matmul(&af).scale_re(d.filter));
    add(a1dsq.matmul(&a1sq).scale_re(-p.kerr1));
    add(a2d.matmul(&a2d).matmul(&a2).matmul(&a2).scale_re(-p.kerr2));
    add(a1dsq.matmul(&a2).add(&a2d.matmul(&a1sq)).scale_re(p.g21));
    let sge = space.sigma(JpmLevel::G, JpmLevel::E);
    let seg = space.sigma(JpmLevel::E, JpmLevel::G);
    add(a2d.matmul(&sge).add(&seg.matmul(&a2)).scale_re(-p.coupling));
    let drive = space
        .sigma(JpmLevel::F, JpmLevel::E)
        .add(&space.sigma(JpmLevel::E, JpmLevel::F).scale_re(-1.0));
    add(drive.scale(Complex64::new(0.0, p.rabi)));
    Ok(h)
}

/// Collapse operators. Channels with zero rate are omitted.
pub fn build_dissipators(space: &HilbertSpace, p: &ModelParams) -> Result<Vec<Dissipator>> {
    use JpmLevel::*;
    space.validate()?;
    p.validate()?;
    let mut out = Vec::new();
    let mut push = |label, rate: f64, op: Operator| {
        if rate > 0.0 {
            out.push(Dissipator {
                label,
                op: op.scale_re(rate.sqrt()),
                rate: Rate::Unit,
            });
        }
    };
    push("storage_loss", p.loss1, space.a1());
    push("buffer_loss", p.loss2, space.a2());
    push("eg_intrinsic", p.gamma_eg, space.sigma(G, E));
    push("fe", p.gamma_fe + p.kappa_fe, space.sigma(E, F));
    push("fg", p.gamma_fg + p.kappa_fg, space.sigma(G, F));
    push("sink_g", p.sink_g, space.sigma(S, G));
    push("sink_e", p.sink_e, space.sigma(S, E));
    push("sink_f", p.sink_f, space.sigma(S, F));
    if p.kappa_eg > 0.0 || p.kappa_filter > 0.0 {
        let op = space
            .sigma(G, E)
            .scale_re(p.kappa_eg.sqrt())
            .add(&space.af().scale_re(p.kappa_filter.sqrt()));
        out.push(Dissipator {
            label: "waveguide",
            op,
            rate: Rate::Unit,
        });
    }
    for (label, gamma, level) in [
        ("dephasing_e", p.dephasing_e, E),
        ("dephasing_f", p.dephasing_f, F),
    ] {
        if gamma > 0.0 {
            out.push(Dissipator {
                label,
                op: space.sigma(level, level),
                rate: Rate::Linear {
                    slope: 2.0 * gamma * gamma,
                },
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::set_a;

    fn quiet() -> ModelParams {
        let mut c = set_a();
        for v in [
            &mut c.kerr1_mhz,
            &mut c.kerr2_mhz,
            &mut c.g21_mhz,
            &mut c.coupling_mhz,
            &mut c.rabi_mhz,
            &mut c.loss1_mhz,
            &mut c.loss2_mhz,
            &mut c.gamma_eg_mhz,
            &mut c.kappa_eg_mhz,
            &mut c.dephasing_e_mhz,
            &mut c.dephasing_f_mhz,
        ] {
            *v = 0.0;
        }
        c.to_params().unwrap()
    }

    #[test]
    fn silent_model_is_empty() {
        let s = HilbertSpace::default();
        let p = quiet();
        assert!(build_hamiltonian(&s, &p).unwrap().max_abs() < 1e-3);
        assert!(build_dissipators(&s, &p).unwrap().is_empty());
    }

    #[test]
    fn two_photon_matrix_element() {
        let s = HilbertSpace::default();
        let p = ModelParams {
            g21: 2.0,
            ..quiet()
        };
        let h = build_hamiltonian(&s, &p).unwrap();
        let el = h.get(s.index(2, 0, JpmLevel::G, 0), s.index(0, 1, JpmLevel::G, 0));
        assert!((el.re - 2.0 * 2f64.sqrt()).abs() < 1e-12 && el.im == 0.0);
    }

    #[test]
    fn set_a_hamiltonian_is_hermitian() {
        let s = HilbertSpace::default();
        let h = build_hamiltonian(&s, &set_a().to_params().unwrap()).unwrap();
        assert!(h.hermiticity_error() <= 1e-12 * h.max_abs());
    }

    #[test]
    fn waveguide_channel_is_filter_dominated() {
        let s = HilbertSpace::default();
        let d = build_dissipators(&s, &set_a().to_params().unwrap()).unwrap();
        let w = d.iter().find(|x| x.label == "waveguide").unwrap();
        let filter =
            w.op.get(s.index(0, 0, JpmLevel::G, 0), s.index(0, 0, JpmLevel::G, 1))
                .norm();
        let jpm =
            w.op.get(s.index(0, 0, JpmLevel::G, 0), s.index(0, 0, JpmLevel::E, 0))
                .norm();
        assert!((filter / jpm - 10.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rates_are_rejected() {
        let p = ModelParams {
            sink_g: -1.0,
            ..quiet()
        };
        assert!(build_dissipators(&HilbertSpace::default(), &p).is_err());
    }
}
