//! Energy-decay-preserving time stepping for Maxwell's equations in a
//! Cole-Cole dispersive medium.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: convolution quadrature weights (SFTR-theta, companion and
//!   cumulative sequences, F-BDF-2) and their diagnostics.
//! * [`mesh`]: staggered 2D grid with an exactly adjoint discrete curl pair.
//! * [`stepper`]: the implicit theta-scheme with polarisation elimination and
//!   a matrix-free CG solve.
//! * [`energy`]: the discrete energy functional and decay checks.
//! * [`manufactured`]: closed-form solution, sources and convergence driver.
//! * [`experiment`]: the source-free energy decay experiment.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar to `f64`, which is what the experiments use.

pub mod energy;
pub mod error;
pub mod experiment;
pub mod manufactured;
pub mod mesh;
pub mod scalar;
pub mod stepper;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = mesh::GridSpec<f64>;
pub type EdgeField = mesh::VecField<f64>;
pub type CellField = mesh::ScalarField<f64>;
pub type Params = weights::SchemeParams<f64>;
pub type Weights = weights::WeightSequence<f64>;
pub type Material = stepper::MaterialParams<f64>;
pub type Config = stepper::SchemeConfig<f64>;
pub type State = stepper::SimState<f64, mesh::GridSpec<f64>>;
pub type Trace = energy::EnergyTrace<f64>;
pub type Case = manufactured::ManufacturedCase<f64>;
