//! Frozen-drift Cauchy problem: the drift `b(u)` is replaced by a known
//! forcing `h`, and the resulting monotone problem is integrated by a
//! drift-implicit, reaction/noise-explicit Euler–Maruyama scheme
//!
//! ```text
//! v + dt·A(v) = u_n + dt·h_n + dt·f(u_n) + Σ_k g_k(u_n)·ΔW_n[k]
//! ```
//!
//! solved by damped Newton on the tridiagonal Jacobian. For `p = 2` the
//! system is linear and one Newton step is an exact Thomas solve.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use log::warn;

use crate::bracket::Side;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, TimeGrid};
use crate::noise::NoisePath;
use crate::operators::{DriftSpec, NoiseSpec, ReactionSpec, SpatialOpSpec};
use crate::tridiag::solve_tridiagonal;

/// Full description of one Cauchy problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub grid: Grid,
    pub time: TimeGrid,
    pub spatial: SpatialOpSpec,
    pub drift: DriftSpec,
    pub reaction: ReactionSpec,
    pub noise: NoiseSpec,
    pub u0: Field,
}

impl ProblemSpec {
    pub fn new(
        time: TimeGrid,
        spatial: SpatialOpSpec,
        drift: DriftSpec,
        reaction: ReactionSpec,
        noise: NoiseSpec,
        u0: Field,
    ) -> Result<Self> {
        let spatial = spatial.validated()?;
        Ok(Self {
            grid: *u0.grid(),
            time,
            spatial,
            drift,
            reaction,
            noise,
            u0,
        })
    }

    /// Same problem with a different initial datum on the same grid.
    pub fn with_u0(&self, u0: Field) -> Result<Self> {
        self.grid.ensure_same(u0.grid())?;
        Ok(Self { u0, ..self.clone() })
    }

    pub fn c_b(&self) -> f64 {
        self.drift.c_b
    }

    pub fn c_f(&self) -> f64 {
        self.reaction.c_f
    }

    pub fn c_g(&self) -> f64 {
        self.noise.c_g
    }

    /// Step-size heuristics under which the explicit parts may break order
    /// preservation: `dt·C_F ≥ 1`, or noise multiplier std `C_G·√dt ≥ 0.2`.
    pub fn step_warnings(&self) -> Vec<String> {
        let dt = self.time.dt();
        let mut out = Vec::new();
        if !self.reaction.is_zero() && dt * self.c_f() >= 1.0 {
            out.push(format!("dt*C_F = {:.3} >= 1", dt * self.c_f()));
        }
        if self.noise.modes() > 0 && self.c_g() * dt.sqrt() >= 0.2 {
            out.push(format!(
                "noise multiplier std C_G*sqrt(dt) = {:.3} >= 0.2",
                self.c_g() * dt.sqrt()
            ));
        }
        out
    }
}

/// Known forcing `h_n` entering step `n`.
#[derive(Clone)]
pub enum Forcing {
    Zero,
    /// Spatially and temporally constant.
    Constant(f64),
    /// Time-independent field.
    Field(Field),
    /// One field per step: `Steps[n]` drives the step `t_n → t_{n+1}`.
    Steps(Vec<Field>),
    /// `±C_B(1 + |u_n|)` evaluated at the current state: `−` for
    /// [`Side::Min`], `+` for [`Side::Max`].
    Envelope {
        side: Side,
        c_b: f64,
    },
    /// Closed form `h(t, x)`.
    Function(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Constant(c) => write!(f, "Constant({c})"),
            Forcing::Field(_) => write!(f, "Field(..)"),
            Forcing::Steps(s) => write!(f, "Steps({} fields)", s.len()),
            Forcing::Envelope { side, c_b } => write!(f, "Envelope({side:?}, c_b = {c_b})"),
            Forcing::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl Forcing {
    fn check(&self, spec: &ProblemSpec) -> Result<()> {
        match self {
            Forcing::Field(h) => spec.grid.ensure_same(h.grid()),
            Forcing::Steps(steps) => {
                if steps.len() < spec.time.n_steps() {
                    return Err(Error::ForcingMismatch(format!(
                        "{} forcing fields for {} steps",
                        steps.len(),
                        spec.time.n_steps()
                    )));
                }
                steps.iter().try_for_each(|h| spec.grid.ensure_same(h.grid()))
            }
            _ => Ok(()),
        }
    }

    /// The forcing field for step `n`, started from state `u_n`.
    pub fn evaluate(&self, n: usize, time: &TimeGrid, u_n: &Field) -> Result<Field> {
        let grid = *u_n.grid();
        Ok(match self {
            Forcing::Zero => Field::zeros(grid),
            Forcing::Constant(c) => Field::constant(grid, *c),
            Forcing::Field(h) => {
                grid.ensure_same(h.grid())?;
                h.clone()
            }
            Forcing::Steps(steps) => {
                let h = steps
                    .get(n)
                    .ok_or_else(|| Error::ForcingMismatch(format!("no forcing field for step {n}")))?;
                grid.ensure_same(h.grid())?;
                h.clone()
            }
            Forcing::Envelope { side, c_b } => {
                let sign = match side {
                    Side::Min => -1.0,
                    Side::Max => 1.0,
                };
                u_n.map(|r| sign * c_b * (1.0 + r.abs()))
            }
            Forcing::Function(h) => {
                let t = time.time(n);
                Field::new(grid, grid.nodes().into_iter().map(|x| h(t, x)).collect())?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Residual tolerance in the discrete `L²` norm, relative to `max(1, ‖rhs‖)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual: f64,
}

/// States at `t_0..=t_N` of one solve, with Newton statistics per step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    time: TimeGrid,
    states: Vec<Field>,
    newton_iters: Vec<usize>,
    max_newton_residual: f64,
}

impl Trajectory {
    /// Wraps externally computed states; there must be `n_steps + 1` of them
    /// on one grid.
    pub fn from_states(time: TimeGrid, states: Vec<Field>) -> Result<Self> {
        if states.len() != time.n_steps() + 1 {
            return Err(Error::GridMismatch(format!(
                "{} states for {} steps",
                states.len(),
                time.n_steps()
            )));
        }
        let grid = *states[0].grid();
        states.iter().try_for_each(|s| grid.ensure_same(s.grid()))?;
        Ok(Self {
            time,
            newton_iters: vec![0; time.n_steps()],
            states,
            max_newton_residual: 0.0,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    pub fn time(&self) -> &TimeGrid {
        &self.time
    }

    pub fn states(&self) -> &[Field] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &Field {
        &self.states[k]
    }

    pub fn terminal(&self) -> &Field {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn newton_iters(&self) -> &[usize] {
        &self.newton_iters
    }

    pub fn max_newton_residual(&self) -> f64 {
        self.max_newton_residual
    }

    fn ensure_matching(&self, other: &Trajectory) -> Result<()> {
        self.grid().ensure_same(other.grid())?;
        if self.time != other.time {
            return Err(Error::GridMismatch(format!(
                "time grids differ: {:?} vs {:?}",
                self.time, other.time
            )));
        }
        Ok(())
    }

    /// `sup_t ‖self(t) − other(t)‖`.
    pub fn sup_distance(&self, other: &Trajectory) -> Result<f64> {
        self.ensure_matching(other)?;
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| a.sub(b).map(|d| d.h_norm()).unwrap_or(f64::NAN))
            .fold(0.0, f64::max))
    }

    /// `max_{t,i} (self − other)` with its `(step, node)` witness.
    pub fn max_excess(&self, other: &Trajectory) -> Result<Excess> {
        self.ensure_matching(other)?;
        let mut best = Excess {
            value: f64::NEG_INFINITY,
            step: 0,
            node: 0,
        };
        for (k, (a, b)) in self.states.iter().zip(&other.states).enumerate() {
            let c = a.order_leq(b, 0.0)?;
            if c.max_violation > best.value {
                best = Excess {
                    value: c.max_violation,
                    step: k,
                    node: c.worst_node,
                };
            }
        }
        Ok(best)
    }

    /// CSV with columns `t,x,value`, one row per time node and grid node.
    /// In ODE mode `x` is reported as 0.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let g = self.grid();
        writeln!(out, "t,x,value")?;
        let nodes = g.nodes();
        for (k, s) in self.states.iter().enumerate() {
            let t = self.time.time(k);
            for (x, v) in nodes.iter().zip(s.values()) {
                writeln!(out, "{t},{x},{v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excess {
    pub value: f64,
    pub step: usize,
    pub node: usize,
}

/// One step `u_n → u_{n+1}` with forcing `h_n` and increments `dw` (one per
/// noise mode of `spec`).
pub fn implicit_step(
    spec: &ProblemSpec,
    newton: &NewtonOptions,
    u_n: &Field,
    h_n: &Field,
    dw: &[f64],
    step: usize,
) -> Result<(Field, NewtonReport)> {
    spec.grid.ensure_same(u_n.grid())?;
    spec.grid.ensure_same(h_n.grid())?;
    if dw.len() < spec.noise.modes() {
        return Err(Error::NoiseMismatch(format!(
            "{} increments for {} modes",
            dw.len(),
            spec.noise.modes()
        )));
    }
    let dt = spec.time.dt();
    let rhs: Vec<f64> = u_n
        .values()
        .iter()
        .zip(h_n.values())
        .map(|(&u, &h)| {
            let mut r = u + dt * h + dt * spec.reaction.eval(u);
            for (k, &w) in dw.iter().take(spec.noise.modes()).enumerate() {
                r += spec.noise.g_unchecked(k, u) * w;
            }
            r
        })
        .collect();
    solve_monotone(spec, newton, u_n.values(), rhs, step)
}

/// Solves `v + dt·A(v) = rhs` by damped Newton started at `guess`.
fn solve_monotone(
    spec: &ProblemSpec,
    newton: &NewtonOptions,
    guess: &[f64],
    rhs: Vec<f64>,
    step: usize,
) -> Result<(Field, NewtonReport)> {
    let grid = spec.grid;
    if grid.is_ode() {
        return Ok((
            Field::from_raw(grid, rhs),
            NewtonReport {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }
    let dt = spec.time.dt();
    let w = grid.weight();
    let n = rhs.len();
    let norm = |r: &[f64]| (r.iter().map(|v| v * v).sum::<f64>() * w).sqrt();
    let tol = newton.tol * norm(&rhs).max(1.0);

    let mut work = vec![0.0; n];
    let mut residual_of = |v: &[f64], out: &mut Vec<f64>| {
        spec.spatial.apply_into(&grid, v, &mut work);
        out.clear();
        out.extend((0..n).map(|i| v[i] + dt * work[i] - rhs[i]));
    };

    let mut v = guess.to_vec();
    let mut r = Vec::with_capacity(n);
    residual_of(&v, &mut r);
    let mut res = norm(&r);
    let mut iterations = 0;
    let mut trial_r = Vec::with_capacity(n);
    while res > tol {
        if iterations == newton.max_iter || !res.is_finite() {
            return Err(Error::NewtonDivergence {
                step,
                iterations,
                residual: res,
            });
        }
        let (mut lower, mut diag, mut upper) = spec.spatial.jacobian(&grid, &v);
        for i in 0..n {
            lower[i] *= dt;
            upper[i] *= dt;
            diag[i] = 1.0 + dt * diag[i];
        }
        let delta = solve_tridiagonal(&lower, &diag, &upper, &r)?;
        // halve the step while the residual grows
        let mut damping = 1.0;
        let mut trial;
        loop {
            trial = v.iter().zip(&delta).map(|(a, d)| a - damping * d).collect::<Vec<_>>();
            residual_of(&trial, &mut trial_r);
            let trial_res = norm(&trial_r);
            if trial_res <= res || damping < 1.0 / 1024.0 {
                res = trial_res;
                break;
            }
            damping *= 0.5;
        }
        v = trial;
        std::mem::swap(&mut r, &mut trial_r);
        iterations += 1;
    }
    Ok((
        Field::from_raw(grid, v),
        NewtonReport {
            iterations,
            residual: res,
        },
    ))
}

/// Integrates the frozen-drift problem over the whole time grid.
pub fn solve_frozen(
    spec: &ProblemSpec,
    forcing: &Forcing,
    path: &NoisePath,
    newton: &NewtonOptions,
) -> Result<Trajectory> {
    check_path(spec, path)?;
    forcing.check(spec)?;
    for w in spec.step_warnings() {
        warn!("step-size guard: {w}");
    }
    let steps = spec.time.n_steps();
    let mut states = Vec::with_capacity(steps + 1);
    let mut newton_iters = Vec::with_capacity(steps);
    let mut max_res = 0.0f64;
    states.push(spec.u0.clone());
    for n in 0..steps {
        let u_n = &states[n];
        let h_n = forcing.evaluate(n, &spec.time, u_n)?;
        let (next, report) = implicit_step(spec, newton, u_n, &h_n, path.step(n), n)?;
        if let Some(i) = next.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NewtonDivergence {
                step: n,
                iterations: report.iterations,
                residual: next.values()[i],
            });
        }
        newton_iters.push(report.iterations);
        max_res = max_res.max(report.residual);
        states.push(next);
    }
    Ok(Trajectory {
        time: spec.time,
        states,
        newton_iters,
        max_newton_residual: max_res,
    })
}

pub(crate) fn check_path(spec: &ProblemSpec, path: &NoisePath) -> Result<()> {
    if path.modes() < spec.noise.modes() {
        return Err(Error::NoiseMismatch(format!(
            "path has {} modes, problem needs {}",
            path.modes(),
            spec.noise.modes()
        )));
    }
    if path.n_steps() != spec.time.n_steps() || (path.dt() - spec.time.dt()).abs() > 1e-15 * spec.time.dt() {
        return Err(Error::NoiseMismatch(format!(
            "path has {} steps of {}, problem has {} steps of {}",
            path.n_steps(),
            path.dt(),
            spec.time.n_steps(),
            spec.time.dt()
        )));
    }
    Ok(())
}
