//! Sub/supersolution brackets and the monotone iteration of the solution map.
//!
//! The lower bracket `u_*` solves the frozen problem with forcing
//! `−C_B(1 + |u_*|)`, the upper bracket `u^*` with `+C_B(1 + |u^*|)`. The
//! solution map `S` sends a candidate `ũ` to the solution of the frozen
//! problem with forcing `b(ũ)`; it is nondecreasing and maps `[u_*, u^*]`
//! into itself. Iterating `S` from `u_*` gives a nondecreasing sequence,
//! from `u^*` a nonincreasing one; their limits are fixed points of `S`,
//! i.e. solutions of the full problem, and bracket every other solution.

use std::io::Write;

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::noise::NoisePath;
use crate::solver::{check_path, solve_frozen, Excess, Forcing, NewtonOptions, ProblemSpec, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Min,
    Max,
}

impl Side {
    pub fn label(&self) -> &'static str {
        match self {
            Side::Min => "min",
            Side::Max => "max",
        }
    }
}

/// Time node at which the candidate `ũ` is sampled to force step `t_n → t_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftSampling {
    /// `h_n = b(ũ(t_n))`.
    Left,
    /// `h_n = b(ũ(t_{n+1}))`; fixed points are drift-implicit in `b`.
    #[default]
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketOptions {
    /// Stop once `sup_t ‖S(u) − u‖ ≤ tol_fixed`.
    pub tol_fixed: f64,
    pub max_outer: usize,
    /// Allowed pointwise violation of the expected order between sweeps.
    pub mono_tol: f64,
    /// Allowed pointwise excursion outside `[u_*, u^*]`.
    pub interval_tol: f64,
    /// Keep every iterate trajectory, not only terminal snapshots.
    pub retain_iterates: bool,
    pub sampling: DriftSampling,
    pub newton: NewtonOptions,
}

impl Default for BracketOptions {
    fn default() -> Self {
        Self {
            tol_fixed: 1e-6,
            max_outer: 100,
            mono_tol: 1e-10,
            interval_tol: 1e-10,
            retain_iterates: false,
            sampling: DriftSampling::Right,
            newton: NewtonOptions::default(),
        }
    }
}

/// `u_*` (`Side::Min`) or `u^*` (`Side::Max`) on one noise path.
pub fn build_extremal(spec: &ProblemSpec, side: Side, path: &NoisePath, newton: &NewtonOptions) -> Result<Trajectory> {
    let forcing = Forcing::Envelope { side, c_b: spec.c_b() };
    solve_frozen(spec, &forcing, path, newton)
}

/// The solution map: solve the frozen problem with forcing `b(ũ)`.
pub fn apply_solution_map(
    spec: &ProblemSpec,
    candidate: &Trajectory,
    path: &NoisePath,
    sampling: DriftSampling,
    newton: &NewtonOptions,
) -> Result<Trajectory> {
    spec.grid.ensure_same(candidate.grid())?;
    if *candidate.time() != spec.time {
        return Err(Error::GridMismatch(
            "candidate time grid differs from the problem".into(),
        ));
    }
    let offset = match sampling {
        DriftSampling::Left => 0,
        DriftSampling::Right => 1,
    };
    let forcing = Forcing::Steps(
        (0..spec.time.n_steps())
            .map(|n| spec.drift.eval_field(candidate.state(n + offset)))
            .collect(),
    );
    solve_frozen(spec, &forcing, path, newton)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketResult {
    pub side: Side,
    /// `u_*`.
    pub lower: Trajectory,
    /// `u^*`.
    pub upper: Trajectory,
    /// `max_{t,i} (u_* − u^*)`; nonpositive when the brackets are ordered.
    pub bracket_order_violation: f64,
    /// Terminal state of each iterate.
    pub snapshots: Vec<Field>,
    /// Full iterates, when retained.
    pub iterates: Option<Vec<Trajectory>>,
    /// `sup_t ‖S(u) − u‖` per sweep.
    pub residual_history: Vec<f64>,
    /// Per sweep, the largest pointwise step against the expected direction.
    pub monotonicity_violations: Vec<f64>,
    /// Per sweep, the largest pointwise excursion outside `[u_*, u^*]`.
    pub interval_violations: Vec<f64>,
    pub converged: bool,
    pub final_trajectory: Trajectory,
    pub options: BracketOptions,
}

impl BracketResult {
    pub fn extremal_start(&self) -> &Trajectory {
        match self.side {
            Side::Min => &self.lower,
            Side::Max => &self.upper,
        }
    }

    pub fn sweeps(&self) -> usize {
        self.residual_history.len()
    }

    pub fn max_monotonicity_violation(&self) -> f64 {
        self.monotonicity_violations
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_interval_violation(&self) -> f64 {
        self.interval_violations
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_monotone(&self) -> bool {
        self.max_monotonicity_violation() <= self.options.mono_tol
    }

    pub fn stays_in_interval(&self) -> bool {
        self.max_interval_violation() <= self.options.interval_tol
    }

    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::INFINITY)
    }

    /// `key = value` lines followed by the per-sweep history.
    pub fn write_summary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "side = {}", self.side.label())?;
        writeln!(out, "converged = {}", self.converged)?;
        writeln!(out, "sweeps = {}", self.sweeps())?;
        writeln!(out, "tol_fixed = {:e}", self.options.tol_fixed)?;
        writeln!(out, "final_residual = {:e}", self.final_residual())?;
        writeln!(out, "monotone = {}", self.is_monotone())?;
        writeln!(
            out,
            "max_monotonicity_violation = {:e}",
            self.max_monotonicity_violation()
        )?;
        writeln!(out, "in_interval = {}", self.stays_in_interval())?;
        writeln!(out, "max_interval_violation = {:e}", self.max_interval_violation())?;
        writeln!(out, "bracket_order_violation = {:e}", self.bracket_order_violation)?;
        writeln!(
            out,
            "final_terminal_norm = {:e}",
            self.final_trajectory.terminal().h_norm()
        )?;
        for (k, ((r, m), i)) in self
            .residual_history
            .iter()
            .zip(&self.monotonicity_violations)
            .zip(&self.interval_violations)
            .enumerate()
        {
            writeln!(
                out,
                "sweep.{} = residual {:e} ; monotonicity {:e} ; interval {:e}",
                k + 1,
                r,
                m,
                i
            )?;
        }
        Ok(())
    }
}

/// Iterates the solution map from the extremal bracket of `side`.
pub fn iterate_bracket(
    spec: &ProblemSpec,
    side: Side,
    path: &NoisePath,
    opts: &BracketOptions,
) -> Result<BracketResult> {
    if opts.tol_fixed.is_nan() || opts.tol_fixed <= 0.0 {
        return Err(Error::invalid("tol_fixed", "must be positive"));
    }
    if opts.max_outer == 0 {
        return Err(Error::invalid("max_outer", "must be at least 1"));
    }
    check_path(spec, path)?;
    let lower = build_extremal(spec, Side::Min, path, &opts.newton)?;
    let upper = build_extremal(spec, Side::Max, path, &opts.newton)?;
    let bracket_order_violation = lower.max_excess(&upper)?.value;
    if bracket_order_violation > opts.interval_tol {
        warn!("extremal brackets out of order by {bracket_order_violation:e}");
    }

    let mut current = match side {
        Side::Min => lower.clone(),
        Side::Max => upper.clone(),
    };
    let mut residual_history = Vec::new();
    let mut monotonicity_violations = Vec::new();
    let mut interval_violations = Vec::new();
    let mut snapshots = Vec::new();
    let mut iterates = opts.retain_iterates.then(Vec::new);
    let mut converged = false;

    for _ in 0..opts.max_outer {
        let next = apply_solution_map(spec, &current, path, opts.sampling, &opts.newton)?;
        let residual = next.sup_distance(&current)?;
        let mono = match side {
            Side::Min => current.max_excess(&next)?.value,
            Side::Max => next.max_excess(&current)?.value,
        };
        let interval = lower.max_excess(&next)?.value.max(next.max_excess(&upper)?.value);
        if mono > opts.mono_tol {
            warn!(
                "{}-side sweep {} is not monotone: violation {mono:e}",
                side.label(),
                residual_history.len() + 1
            );
        }
        residual_history.push(residual);
        monotonicity_violations.push(mono);
        interval_violations.push(interval);
        snapshots.push(next.terminal().clone());
        if let Some(store) = iterates.as_mut() {
            store.push(next.clone());
        }
        current = next;
        if residual <= opts.tol_fixed {
            converged = true;
            break;
        }
    }

    Ok(BracketResult {
        side,
        lower,
        upper,
        bracket_order_violation,
        snapshots,
        iterates,
        residual_history,
        monotonicity_violations,
        interval_violations,
        converged,
        final_trajectory: current,
        options: *opts,
    })
}

/// [`iterate_bracket`] on paths `0..paths`, in parallel; results in path order.
pub fn bracket_ensemble(
    spec: &ProblemSpec,
    side: Side,
    paths: usize,
    master_seed: u64,
    opts: &BracketOptions,
) -> Result<Vec<BracketResult>> {
    (0..paths)
        .into_par_iter()
        .map(|m| {
            let path = NoisePath::sample(master_seed, m as u64, spec.noise.modes(), &spec.time);
            iterate_bracket(spec, side, &path, opts).map_err(|e| Error::on_path(m, e))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalReport {
    /// `max (u_* − u)` and where it occurs.
    pub below: Excess,
    /// `max (u − u^*)` and where it occurs.
    pub above: Excess,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `u_* ≤ u ≤ u^*` at every time node.
pub fn verify_interval(u: &Trajectory, lower: &Trajectory, upper: &Trajectory, tol: f64) -> Result<IntervalReport> {
    let below = lower.max_excess(u)?;
    let above = u.max_excess(upper)?;
    Ok(IntervalReport {
        below,
        above,
        tol,
        passed: below.value <= tol && above.value <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, TimeGrid};
    use crate::operators::{DriftKind, DriftSpec, JumpSide, NoiseSpec, ReactionSpec, SpatialOpSpec};
    use std::f64::consts::{E, PI};

    fn counterexample(steps: usize) -> ProblemSpec {
        ProblemSpec::new(
            TimeGrid::new(1.0, steps).unwrap(),
            SpatialOpSpec::default(),
            DriftSpec::new(DriftKind::SqrtPlus, JumpSide::Lower, 1.0).unwrap(),
            ReactionSpec::zero(),
            NoiseSpec::deterministic(),
            Field::zeros(Grid::ode()),
        )
        .unwrap()
    }

    #[test]
    fn ode_extremals_match_closed_forms() {
        let spec = counterexample(10_000);
        let path = NoisePath::empty(&spec.time);
        let newton = NewtonOptions::default();
        let upper = build_extremal(&spec, Side::Max, &path, &newton).unwrap();
        let lower = build_extremal(&spec, Side::Min, &path, &newton).unwrap();
        // u' = 1 + |u| from 0 gives e^t − 1; u' = −(1 + |u|) gives 1 − e^t.
        assert!((upper.terminal().values()[0] - (E - 1.0)).abs() <= 2e-4);
        assert!((lower.terminal().values()[0] - (1.0 - E)).abs() <= 2e-4);
        assert!(lower.max_excess(&upper).unwrap().value <= 0.0);
    }

    #[test]
    fn solution_map_on_counterexample() {
        let spec = counterexample(10_000);
        let path = NoisePath::empty(&spec.time);
        let newton = NewtonOptions::default();
        let zero = Trajectory::from_states(spec.time, vec![Field::zeros(Grid::ode()); 10_001]).unwrap();
        let s0 = apply_solution_map(&spec, &zero, &path, DriftSampling::Right, &newton).unwrap();
        assert_eq!(s0, zero);

        // S(u^*)(1) = ∫_0^1 sqrt(e^s − 1) ds; Simpson oracle on the closed form
        let n = 20_000;
        let h = 1.0 / n as f64;
        let f = |s: f64| (s.exp() - 1.0).sqrt();
        let mut acc = f(0.0) + f(1.0);
        for j in 1..n {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j as f64 * h);
        }
        let oracle = acc * h / 3.0;
        assert!((oracle - 0.783_451_674).abs() < 1e-6);
        let upper = build_extremal(&spec, Side::Max, &path, &newton).unwrap();
        let s = apply_solution_map(&spec, &upper, &path, DriftSampling::Right, &newton).unwrap();
        assert!((s.terminal().values()[0] - oracle).abs() <= 1e-3);
    }

    #[test]
    fn counterexample_min_side_is_zero() {
        let spec = counterexample(1000);
        let r = iterate_bracket(
            &spec,
            Side::Min,
            &NoisePath::empty(&spec.time),
            &BracketOptions::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!(r.sweeps() <= 2);
        assert!(r.final_trajectory.states().iter().all(|s| s.values()[0] == 0.0));
    }

    #[test]
    fn counterexample_max_side_approaches_quadratic() {
        let spec = counterexample(1000);
        let opts = BracketOptions {
            max_outer: 60,
            ..BracketOptions::default()
        };
        let r = iterate_bracket(&spec, Side::Max, &NoisePath::empty(&spec.time), &opts).unwrap();
        assert!(r.converged, "residuals {:?}", r.residual_history);
        assert!((r.final_trajectory.terminal().values()[0] - 0.25).abs() <= 5e-3);
        assert!(r.is_monotone() && r.stays_in_interval());
        // after the first sweep the residual does not increase
        for w in r.residual_history[1..].windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn left_sampling_collapses_counterexample() {
        // With left-endpoint sampling the discrete map only fixes 0; each
        // sweep delays the onset by one step instead of converging.
        let spec = counterexample(1000);
        let opts = BracketOptions {
            max_outer: 60,
            sampling: DriftSampling::Left,
            ..BracketOptions::default()
        };
        let r = iterate_bracket(&spec, Side::Max, &NoisePath::empty(&spec.time), &opts).unwrap();
        assert!(!r.converged);
        assert!(r.final_trajectory.states()[..=60].iter().all(|s| s.values()[0] == 0.0));
    }

    #[test]
    fn zero_drift_fixes_after_one_sweep() {
        let grid = Grid::pde_1d(16, 1.0).unwrap();
        let spec = ProblemSpec::new(
            TimeGrid::new(0.1, 50).unwrap(),
            SpatialOpSpec::new(3.0, 1.0).unwrap(),
            DriftSpec::zero(),
            ReactionSpec::zero(),
            NoiseSpec::deterministic(),
            Field::from_fn(grid, |x| (PI * x).sin()).unwrap(),
        )
        .unwrap();
        let opts = BracketOptions {
            retain_iterates: true,
            ..BracketOptions::default()
        };
        let r = iterate_bracket(&spec, Side::Max, &NoisePath::empty(&spec.time), &opts).unwrap();
        let its = r.iterates.as_ref().unwrap();
        assert_eq!(its.len(), 2);
        assert_eq!(its[0], its[1]);
        assert_eq!(r.residual_history[1], 0.0);
    }

    #[test]
    fn interval_detector() {
        let spec = counterexample(100);
        let path = NoisePath::empty(&spec.time);
        let newton = NewtonOptions::default();
        let lower = build_extremal(&spec, Side::Min, &path, &newton).unwrap();
        let upper = build_extremal(&spec, Side::Max, &path, &newton).unwrap();
        assert!(verify_interval(&lower, &lower, &upper, 0.0).unwrap().passed);
        let mut states = lower.states().to_vec();
        states[40] = states[40].map(|v| v - 1e-3);
        let bad = Trajectory::from_states(spec.time, states).unwrap();
        let rep = verify_interval(&bad, &lower, &upper, 1e-8).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.below.step, 40);
        assert!((rep.below.value - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_options() {
        let spec = counterexample(10);
        let path = NoisePath::empty(&spec.time);
        let bad_tol = BracketOptions {
            tol_fixed: 0.0,
            ..BracketOptions::default()
        };
        assert!(iterate_bracket(&spec, Side::Min, &path, &bad_tol).is_err());
        let bad_outer = BracketOptions {
            max_outer: 0,
            ..BracketOptions::default()
        };
        assert!(iterate_bracket(&spec, Side::Min, &path, &bad_outer).is_err());
    }
}
