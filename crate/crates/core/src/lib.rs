//! Order-based solver for parabolic SPDEs with a nondecreasing, possibly
//! discontinuous drift:
//!
//! ```text
//! du + A(u) dt − b(u) dt = f(u) dt + G(u) dW,   u(0) = u_0,
//! ```
//!
//! with `A` the `p`-Laplacian on `(0, L)` (homogeneous Dirichlet) or null in
//! ODE mode, `f` Lipschitz and `G` multiplicative over `K` noise modes.
//!
//! The pipeline mirrors the existence argument by order methods:
//!
//! * [`solver`] integrates the frozen problem where `b(u)` is a given forcing;
//! * [`comparison`] runs two frozen problems on a shared noise path and
//!   measures `‖(u_1 − u_2)⁺‖²`;
//! * [`bracket`] builds the extremal sub/supersolutions and iterates the
//!   nondecreasing solution map from them towards the minimal and maximal
//!   solutions.

pub mod bracket;
pub mod comparison;
pub mod error;
pub mod grid;
pub mod noise;
pub mod operators;
pub mod solver;
pub mod tridiag;

pub use bracket::{
    apply_solution_map, bracket_ensemble, build_extremal, iterate_bracket, verify_interval, BracketOptions,
    BracketResult, DriftSampling, IntervalReport, Side,
};
pub use comparison::{
    comparison_study, energy_trace, run_coupled, sigma_energy_trace, ComparisonReport, FrozenProblem, Witness,
};
pub use error::{Error, Result};
pub use grid::{Field, Grid, GridMode, OrderCheck, TimeGrid};
pub use noise::NoisePath;
pub use solver::{implicit_step, solve_frozen, Excess, Forcing, NewtonOptions, NewtonReport, ProblemSpec, Trajectory};
