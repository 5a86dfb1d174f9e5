//! Master-equation model of the storage, buffer, JPM and filter.
//!
//! The JPM is reduced to `g`, `e`, `f` and a sink `s` that absorbs
//! everything escaping into the deep well. Dynamics are written in a
//! frame rotating with the drives, so the Hamiltonian is static and the
//! only explicit time dependence is in the dephasing rates.

mod evolve;
mod integrator;
mod model;
mod params;
mod space;
mod sparse;

pub use evolve::{
    click_probability, evolve, false_click_probability, DensityOperator, EvolutionResult,
    EvolveOptions, Observables, HERMITICITY_LIMIT, TRACE_DRIFT_LIMIT,
};
pub use integrator::{Integrator, Stats, Tolerances};
pub use model::{build_dissipators, build_hamiltonian, Dissipator, Rate};
pub use params::{Detunings, ModelParams, ResonanceFlags};
pub use space::{HilbertSpace, JpmLevel, JPM_LEVELS, MAX_DIM};
pub use sparse::Operator;
