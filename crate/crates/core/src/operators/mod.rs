//! Pointwise and differential operators entering the equation, and the
//! sampled checks of their structural hypotheses.

mod assumptions;
mod drift;
mod multiplicative;
mod reaction;
mod sigma;
mod spatial;

pub use assumptions::{
    check_assumptions, t_monotonicity_gap, AssumptionCheck, AssumptionReport, CheckOptions, OrderTest,
    T_MONOTONICITY_TOL,
};
pub use drift::{DriftKind, DriftSpec, JumpSide};
pub use multiplicative::{NoiseSpec, PointwiseKind};
pub use reaction::{ReactionKind, ReactionSpec};
pub use sigma::{SigmaEps, SIGMA_PRIME_SUP};
pub use spatial::{gradient_p_sum, SpatialOpSpec};
