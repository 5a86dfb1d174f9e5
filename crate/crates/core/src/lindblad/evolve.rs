use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrator::{Integrator, Stats, Tolerances};
use super::model::{Dissipator, Rate};
use super::space::{HilbertSpace, JpmLevel, JPM_LEVELS};
use super::sparse::Operator;
use crate::error::{Error, Result};

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

/// Maximum allowed `|Tr ρ − 1|` over a run.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-7;
/// Maximum allowed `max |ρ − ρ†|` over a run.
pub const HERMITICITY_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    pub space: HilbertSpace,
    pub matrix: DMatrix<C>,
    pub time: f64,
}

impl DensityOperator {
    /// `|n1, n2, level, nf⟩⟨…|` at `t = 0`.
    pub fn fock(
        space: HilbertSpace,
        n1: usize,
        n2: usize,
        level: JpmLevel,
        nf: usize,
    ) -> Result<Self> {
        space.validate()?;
        if n1 >= space.storage || n2 >= space.buffer || nf >= space.filter {
            return Err(Error::InvalidInitialState(format!(
                "Fock state ({n1}, {n2}, {nf}) outside truncation ({}, {}, {})",
                space.storage, space.buffer, space.filter
            )));
        }
        let d = space.dim();
        let mut matrix = DMatrix::zeros(d, d);
        let i = space.index(n1, n2, level, nf);
        matrix[(i, i)] = C::new(1.0, 0.0);
        Ok(DensityOperator {
            space,
            matrix,
            time: 0.0,
        })
    }

    /// `n` storage photons, everything else in its ground state.
    pub fn storage_fock(space: HilbertSpace, n: usize) -> Result<Self> {
        Self::fock(space, n, 0, JpmLevel::G, 0)
    }

    pub fn trace(&self) -> C {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(self.matrix.as_slice(), self.space.dim())
    }

    pub fn purity(&self) -> f64 {
        purity(self.matrix.as_slice(), self.space.dim())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * C::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn observables(&self) -> Observables {
        Observables::of(&self.space, self.matrix.as_slice())
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.space.dim();
        if self.matrix.nrows() != d || self.matrix.ncols() != d {
            return Err(Error::InvalidInitialState(format!(
                "matrix is {}×{}, space needs {d}×{d}",
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        if (self.trace() - C::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidInitialState(format!(
                "trace {} is not 1",
                self.trace()
            )));
        }
        if self.hermiticity_error() > 1e-12 {
            return Err(Error::InvalidInitialState("matrix is not Hermitian".into()));
        }
        if self.min_eigenvalue() < -1e-10 {
            return Err(Error::InvalidInitialState(
                "matrix is not positive semidefinite".into(),
            ));
        }
        Ok(())
    }
}

fn hermiticity_error(rho: &[C], d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for i in 0..=j {
            worst = worst.max((rho[i + j * d] - rho[j + i * d].conj()).norm());
        }
    }
    worst
}

fn purity(rho: &[C], d: usize) -> f64 {
    // Tr ρ² = Σ ρ_ij ρ_ji
    let mut acc = ZERO;
    for j in 0..d {
        for i in 0..d {
            acc += rho[i + j * d] * rho[j + i * d];
        }
    }
    acc.re
}

fn trace(rho: &[C], d: usize) -> C {
    (0..d).map(|i| rho[i * (d + 1)]).sum()
}

/// Populations and photon numbers at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// JPM level populations in the order g, e, f, s.
    pub populations: [f64; JPM_LEVELS],
    pub n_storage: f64,
    pub n_buffer: f64,
    pub n_filter: f64,
    pub purity: f64,
}

impl Observables {
    fn of(space: &HilbertSpace, rho: &[C]) -> Self {
        let d = space.dim();
        let mut o = Observables {
            populations: [0.0; JPM_LEVELS],
            n_storage: 0.0,
            n_buffer: 0.0,
            n_filter: 0.0,
            purity: purity(rho, d),
        };
        for i in 0..d {
            let p = rho[i * (d + 1)].re;
            let (n1, n2, j, nf) = space.decompose(i);
            o.populations[j] += p;
            o.n_storage += n1 as f64 * p;
            o.n_buffer += n2 as f64 * p;
            o.n_filter += nf as f64 * p;
        }
        o
    }

    pub fn population(&self, level: JpmLevel) -> f64 {
        self.populations[level as usize]
    }
}

type Triplets = Vec<(usize, usize, C)>;

/// Right-hand side of the master equation, arranged so that every
/// evaluation returns an exactly Hermitian matrix: `A + A†` with
/// `A = Mρ + ½ Σ r L ρ L†` and `M = −iH − ½ Σ r L†L`. All products run
/// over operator nonzeros; `L ρ L†` costs `nnz(L)²`.
struct Liouvillian {
    dim: usize,
    m_const: Triplets,
    decay_td: Vec<(Triplets, Rate)>,
    jumps: Vec<(Triplets, Rate)>,
    a: Vec<C>,
}

impl Liouvillian {
    fn new(h: &Operator, dissipators: &[Dissipator]) -> Self {
        let dim = h.dim();
        let mut m_const = h.scale(C::new(0.0, -1.0));
        let mut decay_td = Vec::new();
        for d in dissipators {
            let ldl = d.op.adjoint().matmul(&d.op);
            match d.rate {
                Rate::Unit => m_const = m_const.add(&ldl.scale_re(-0.5)),
                r => decay_td.push((ldl.triplets().collect(), r)),
            }
        }
        Liouvillian {
            dim,
            m_const: m_const.triplets().collect(),
            decay_td,
            jumps: dissipators
                .iter()
                .map(|d| (d.op.triplets().collect(), d.rate))
                .collect(),
            a: vec![ZERO; dim * dim],
        }
    }

    fn apply(&mut self, t: f64, rho: &[C], out: &mut [C]) {
        let d = self.dim;
        let a = &mut self.a;
        a.fill(ZERO);
        let mut left_multiply = |ops: &Triplets, s: C| {
            for j in 0..d {
                let col = &rho[j * d..(j + 1) * d];
                let dst = &mut a[j * d..(j + 1) * d];
                for &(r, k, v) in ops {
                    dst[r] += s * v * col[k];
                }
            }
        };
        left_multiply(&self.m_const, C::new(1.0, 0.0));
        for (ldl, rate) in &self.decay_td {
            left_multiply(ldl, C::new(-0.5 * rate.at(t), 0.0));
        }
        for (l, rate) in &self.jumps {
            let half = 0.5 * rate.at(t);
            if half == 0.0 {
                continue;
            }
            for &(i, k, v) in l {
                let v = v * half;
                for &(j, m, w) in l {
                    a[i + j * d] += v * w.conj() * rho[k + m * d];
                }
            }
        }
        for j in 0..d {
            for i in 0..d {
                out[i + j * d] = a[i + j * d] + a[j + i * d].conj();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub samples: Vec<Observables>,
    pub final_state: DensityOperator,
    pub stats: Stats,
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
}

impl EvolutionResult {
    /// Trajectory as CSV with times in nanoseconds.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("time_ns,pop_g,pop_e,pop_f,pop_s,n_storage,n_buffer,n_filter\n");
        for (t, o) in self.times.iter().zip(&self.samples) {
            let [g, e, f, sink] = o.populations;
            s.push_str(&format!(
                "{:.6},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                t * 1e9,
                g,
                e,
                f,
                sink,
                o.n_storage,
                o.n_buffer,
                o.n_filter
            ));
        }
        s
    }
}

/// Integrates the master equation from `rho0` through `output_times`.
pub fn evolve(
    rho0: &DensityOperator,
    h: &Operator,
    dissipators: &[Dissipator],
    output_times: &[f64],
    options: &EvolveOptions,
) -> Result<EvolutionResult> {
    rho0.validate()?;
    let d = rho0.space.dim();
    if h.dim() != d || dissipators.iter().any(|x| x.op.dim() != d) {
        return Err(Error::Config(format!(
            "operator dimensions do not match the state dimension {d}"
        )));
    }
    if h.hermiticity_error() > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::Config("Hamiltonian is not Hermitian".into()));
    }
    if output_times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Config("output times must be finite".into()));
    }
    let mut liouvillian = Liouvillian::new(h, dissipators);
    let integrator = Integrator {
        tolerances: options.tolerances,
        ..Integrator::default()
    };
    let space = rho0.space;
    let mut y = rho0.matrix.as_slice().to_vec();
    let mut times = Vec::new();
    let mut samples = Vec::new();
    let mut drift: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut outputs = output_times.iter().peekable();
    let stats = integrator.run(
        |t, rho, out| liouvillian.apply(t, rho, out),
        rho0.time,
        &mut y,
        output_times,
        |t, rho, hit| {
            drift = drift.max((trace(rho, d) - C::new(1.0, 0.0)).norm());
            herm = herm.max(hermiticity_error(rho, d));
            if drift > TRACE_DRIFT_LIMIT {
                return Err(Error::ToleranceNotMet(format!(
                    "trace drift {drift:e} at t = {t:e} s"
                )));
            }
            if herm > HERMITICITY_LIMIT {
                return Err(Error::ToleranceNotMet(format!(
                    "Hermiticity error {herm:e} at t = {t:e} s"
                )));
            }
            if hit {
                let o = Observables::of(&space, rho);
                while outputs.next_if(|&&s| s <= t).is_some() {
                    times.push(t);
                    samples.push(o);
                }
            }
            Ok(())
        },
    )?;
    let final_time = output_times
        .last()
        .copied()
        .unwrap_or(rho0.time)
        .max(rho0.time);
    Ok(EvolutionResult {
        times,
        samples,
        final_state: DensityOperator {
            space,
            matrix: DMatrix::from_vec(d, d, y),
            time: final_time,
        },
        stats,
        max_trace_drift: drift,
        max_hermiticity_error: herm,
    })
}

/// `η Tr[ρ σ_ss]`.
pub fn click_probability(rho: &DensityOperator, efficiency: f64) -> f64 {
    efficiency * rho.observables().population(JpmLevel::S)
}

/// Dark-count probability `η (1 − e^{−γ_g t})`.
pub fn false_click_probability(sink_g: f64, capture_time: f64, efficiency: f64) -> f64 {
    -efficiency * (-sink_g * capture_time).exp_m1()
}
