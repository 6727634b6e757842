//! Runs one configured scenario and writes its artifacts.
//!
//! Every artifact is a pure function of the config and seed: no timings, and
//! parallel reductions happen in path order, so outputs are byte-identical
//! across repeated runs and thread counts.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use spde_order::comparison::sigma_energy_trace;
use spde_order::operators::{check_assumptions, DriftKind, JumpSide};
use spde_order::{
    bracket_ensemble, comparison_study, run_coupled, BracketResult, Forcing, FrozenProblem, NoisePath, ProblemSpec,
    Side, Trajectory,
};
use thiserror::Error;

use crate::config::{ConfigError, ReferenceKind, ScenarioConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver failure: {0}")]
    Solver(#[from] spde_order::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// `(gate, passed)` in evaluation order.
    pub gates: Vec<(String, bool)>,
    /// Metric `key=value` pairs, as written to `summary.txt`.
    pub metrics: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|(_, ok)| *ok)
    }

    pub fn gate(&self, name: &str) -> Option<bool> {
        self.gates.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }

    pub fn metric(&self, key: &str) -> Option<&str> {
        self.metrics.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

struct Writer<'a> {
    dir: &'a Path,
    outcome: Outcome,
}

impl Writer<'_> {
    fn file(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
    ) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let io = |source| RunError::Io {
            path: path.clone(),
            source,
        };
        let mut w = BufWriter::new(File::create(&path).map_err(io)?);
        body(&mut w).and_then(|_| w.flush()).map_err(io)?;
        self.outcome.files.push(path.clone());
        Ok(())
    }

    fn metric(&mut self, key: impl Into<String>, value: impl Display) {
        self.outcome.metrics.push((key.into(), value.to_string()));
    }

    fn gate(&mut self, name: impl Into<String>, passed: bool) {
        let name = name.into();
        if !passed {
            warn!("gate {name} failed");
        }
        self.outcome.gates.push((name, passed));
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.run.threads)
        .build()
        .map_err(|e| RunError::ThreadPool(e.to_string()))?;
    let dir = cfg.run.out_dir.as_path();
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut w = Writer {
        dir,
        outcome: Outcome {
            gates: Vec::new(),
            metrics: Vec::new(),
            files: Vec::new(),
        },
    };
    pool.install(|| run_in_pool(cfg, &mut w))?;
    write_summary(cfg, &mut w)?;
    Ok(w.outcome)
}

fn run_in_pool(cfg: &ScenarioConfig, w: &mut Writer) -> Result<(), RunError> {
    let spec = cfg.problem_spec()?;
    for msg in spec.step_warnings() {
        warn!("{msg}");
    }
    assumptions(cfg, &spec, w)?;
    if cfg.comparison.enabled {
        comparison(cfg, &spec, w)?;
    }
    if cfg.bracket.enabled {
        let results = brackets(cfg, &spec, w)?;
        if cfg.reference.kind == ReferenceKind::Counterexample {
            reference(cfg, &results, w);
        }
        if cfg.bracket.dual_jump_side && matches!(spec.drift.kind, DriftKind::Heaviside { .. }) {
            dual_jump_side(cfg, &spec, w)?;
        }
    } else if cfg.reference.kind != ReferenceKind::None {
        warn!("reference checks need bracket.enabled = true; skipped");
    }
    Ok(())
}

fn assumptions(cfg: &ScenarioConfig, spec: &ProblemSpec, w: &mut Writer) -> Result<(), RunError> {
    if !cfg.assumptions.enabled {
        return w.file("assumptions.txt", |f| writeln!(f, "enabled = false"));
    }
    let report = check_assumptions(
        &spec.grid,
        &spec.spatial,
        &spec.drift,
        &spec.reaction,
        &spec.noise,
        &cfg.check_options(),
    );
    w.file("assumptions.txt", |f| write!(f, "{report}"))?;
    w.gate("assumptions", report.all_required_pass());
    Ok(())
}

fn comparison(cfg: &ScenarioConfig, spec: &ProblemSpec, w: &mut Writer) -> Result<(), RunError> {
    let c = &cfg.comparison;
    let mut u1 = cfg.initial_field(&c.first_initial, "comparison.first_initial")?;
    let mut u2 = cfg.initial_field(&c.second_initial, "comparison.second_initial")?;
    if c.reversed {
        std::mem::swap(&mut u1, &mut u2);
    }
    let first = FrozenProblem::new(spec.with_u0(u1)?, Forcing::Constant(c.first_forcing));
    let second = FrozenProblem::new(spec.with_u0(u2)?, Forcing::Constant(c.second_forcing));
    let newton = cfg.newton();
    info!("comparison study over {} paths", cfg.run.paths);
    let report = comparison_study(&first, &second, cfg.run.paths, cfg.run.master_seed, c.tol, &newton)?;
    w.file("comparison.txt", |f| report.write_summary(f))?;
    w.file("comparison.csv", |f| report.write_csv(f))?;

    // path 0 in full: both trajectories and the smoothed energy traces
    let path = NoisePath::sample(cfg.run.master_seed, 0, spec.noise.modes(), &spec.time);
    let (a, b) = run_coupled(&first, &second, &path, &newton)?;
    w.file("trajectory_first.csv", |f| a.write_csv(f))?;
    w.file("trajectory_second.csv", |f| b.write_csv(f))?;
    let eps = &cfg.diagnostics.sigma_eps;
    if !eps.is_empty() {
        let traces = eps
            .iter()
            .map(|&e| sigma_energy_trace(&a, &b, e))
            .collect::<Result<Vec<_>, _>>()?;
        let times = spec.time.times();
        w.file("sigma_trace.csv", |f| {
            write!(f, "t")?;
            for e in eps {
                write!(f, ",eps_{e:e}")?;
            }
            writeln!(f)?;
            for (k, t) in times.iter().enumerate() {
                write!(f, "{t}")?;
                for tr in &traces {
                    write!(f, ",{}", tr[k])?;
                }
                writeln!(f)?;
            }
            Ok(())
        })?;
    }

    w.metric("comparison.max_energy", format!("{:e}", report.overall_max()));
    w.metric("comparison.worst_path", report.worst.path);
    w.metric("comparison.worst_step", report.worst.step);
    w.metric("comparison.reversed", c.reversed);
    w.gate("comparison", report.passed);
    Ok(())
}

fn side_results(cfg: &ScenarioConfig, spec: &ProblemSpec, side: Side) -> Result<Vec<BracketResult>, RunError> {
    Ok(bracket_ensemble(
        spec,
        side,
        cfg.run.paths,
        cfg.run.master_seed,
        &cfg.bracket_options(),
    )?)
}

fn write_bracket_file(w: &mut Writer, name: &str, results: &[BracketResult]) -> Result<(), RunError> {
    w.file(name, |f| {
        writeln!(f, "paths = {}", results.len())?;
        writeln!(
            f,
            "converged_paths = {}",
            results.iter().filter(|r| r.converged).count()
        )?;
        for (m, r) in results.iter().enumerate() {
            writeln!(f)?;
            writeln!(f, "[path {m}]")?;
            r.write_summary(&mut *f)?;
        }
        Ok(())
    })
}

/// Bracket iterations for each configured side. Returns `(side, per-path results)`.
fn brackets(
    cfg: &ScenarioConfig,
    spec: &ProblemSpec,
    w: &mut Writer,
) -> Result<Vec<(Side, Vec<BracketResult>)>, RunError> {
    let mut out = Vec::new();
    for &s in &cfg.bracket.sides {
        let side: Side = s.into();
        if out.iter().any(|(done, _)| *done == side) {
            continue;
        }
        info!("{}-side bracket iteration over {} paths", side.label(), cfg.run.paths);
        let results = side_results(cfg, spec, side)?;
        let label = side.label();
        write_bracket_file(w, &format!("bracket_{label}.txt"), &results)?;
        let first = &results[0];
        if out.is_empty() {
            w.file("trajectory_lower.csv", |f| first.lower.write_csv(f))?;
            w.file("trajectory_upper.csv", |f| first.upper.write_csv(f))?;
        }
        w.file(&format!("trajectory_{label}.csv"), |f| {
            first.final_trajectory.write_csv(f)
        })?;
        if let Some(its) = &first.iterates {
            for (k, t) in its.iter().enumerate() {
                w.file(&format!("trajectory_{label}_iterate_{:03}.csv", k + 1), |f| {
                    t.write_csv(f)
                })?;
            }
        }

        let max_of = |f: &dyn Fn(&BracketResult) -> f64| results.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        w.metric(format!("bracket.{label}.sweeps"), first.sweeps());
        w.metric(
            format!("bracket.{label}.max_final_residual"),
            format!("{:e}", max_of(&|r| r.final_residual())),
        );
        w.metric(
            format!("bracket.{label}.max_monotonicity_violation"),
            format!("{:e}", max_of(&|r| r.max_monotonicity_violation())),
        );
        w.metric(
            format!("bracket.{label}.max_interval_violation"),
            format!("{:e}", max_of(&|r| r.max_interval_violation())),
        );
        w.metric(
            format!("bracket.{label}.final_terminal_h_norm"),
            format!("{:e}", first.final_trajectory.terminal().h_norm()),
        );
        w.gate(
            format!("bracket_{label}_converged"),
            results.iter().all(|r| r.converged),
        );
        w.gate(
            format!("bracket_{label}_monotone"),
            results.iter().all(|r| r.is_monotone()),
        );
        w.gate(
            format!("bracket_{label}_interval"),
            results.iter().all(|r| r.stays_in_interval()),
        );
        out.push((side, results));
    }

    let find = |s: Side| out.iter().find(|(side, _)| *side == s).map(|(_, r)| r);
    if let (Some(lo), Some(hi)) = (find(Side::Min), find(Side::Max)) {
        let mut excess = f64::NEG_INFINITY;
        let mut gap = 0.0f64;
        for (a, b) in lo.iter().zip(hi) {
            excess = excess.max(a.final_trajectory.max_excess(&b.final_trajectory)?.value);
            gap = gap.max(a.final_trajectory.sup_distance(&b.final_trajectory)?);
        }
        w.metric("bracket.min_minus_max_max", format!("{excess:e}"));
        w.metric("bracket.sides_sup_distance", format!("{gap:e}"));
        w.gate("bracket_order", excess <= cfg.bracket.interval_tol);
    }
    Ok(out)
}

/// Counterexample references: minimal solution `0`, maximal `t²/4`.
fn reference(cfg: &ScenarioConfig, results: &[(Side, Vec<BracketResult>)], w: &mut Writer) {
    let sup_error = |t: &Trajectory, exact: &dyn Fn(f64) -> f64| {
        t.states()
            .iter()
            .enumerate()
            .flat_map(|(k, s)| {
                let e = exact(t.time().time(k));
                s.values().iter().map(move |v| (v - e).abs())
            })
            .fold(0.0f64, f64::max)
    };
    for (side, rs) in results {
        let (key, exact, tol): (&str, Box<dyn Fn(f64) -> f64>, f64) = match side {
            Side::Min => ("min", Box::new(|_| 0.0), cfg.reference.min_tol),
            Side::Max => ("max", Box::new(|t| t * t / 4.0), cfg.reference.max_tol),
        };
        let err = rs
            .iter()
            .map(|r| sup_error(&r.final_trajectory, &*exact))
            .fold(0.0f64, f64::max);
        let terminal = rs[0].final_trajectory.terminal().values()[0];
        w.metric(format!("reference.{key}.sup_error"), format!("{err:e}"));
        w.metric(format!("reference.{key}.final_at_T"), format!("{terminal:e}"));
        w.gate(format!("reference_{key}"), err <= tol);
    }
}

/// Reruns the brackets with the Heaviside jump value taken from either side.
/// Reported, not gated: whether the limit depends on the selection is the
/// question being asked.
fn dual_jump_side(cfg: &ScenarioConfig, spec: &ProblemSpec, w: &mut Writer) -> Result<(), RunError> {
    let sides: Vec<Side> = {
        let mut v: Vec<Side> = cfg.bracket.sides.iter().map(|&s| s.into()).collect();
        v.dedup();
        v
    };
    for side in sides {
        let label = side.label();
        let mut finals = Vec::new();
        for (js, name) in [(JumpSide::Lower, "lower"), (JumpSide::Upper, "upper")] {
            let mut s = spec.clone();
            s.drift = cfg.drift_spec_with(js)?;
            let results = side_results(cfg, &s, side)?;
            write_bracket_file(w, &format!("bracket_{label}_jump_{name}.txt"), &results)?;
            w.metric(
                format!("jump_side.{name}.{label}.converged"),
                results.iter().all(|r| r.converged),
            );
            w.metric(
                format!("jump_side.{name}.{label}.final_terminal_h_norm"),
                format!("{:e}", results[0].final_trajectory.terminal().h_norm()),
            );
            finals.push(results);
        }
        let mut gap = 0.0f64;
        for (a, b) in finals[0].iter().zip(&finals[1]) {
            gap = gap.max(a.final_trajectory.sup_distance(&b.final_trajectory)?);
        }
        w.metric(format!("jump_side.{label}.sup_distance"), format!("{gap:e}"));
    }
    Ok(())
}

fn write_summary(cfg: &ScenarioConfig, w: &mut Writer) -> Result<(), RunError> {
    let passed = w.outcome.passed();
    let gates = w.outcome.gates.clone();
    let metrics = w.outcome.metrics.clone();
    w.file("summary.txt", |f| {
        writeln!(f, "scenario={}", cfg.scenario)?;
        writeln!(f, "master_seed={}", cfg.run.master_seed)?;
        writeln!(f, "paths={}", cfg.run.paths)?;
        for (k, v) in &metrics {
            writeln!(f, "{k}={v}")?;
        }
        for (g, ok) in &gates {
            writeln!(f, "gate.{g}={}", if *ok { "pass" } else { "fail" })?;
        }
        writeln!(f, "status={}", if passed { "pass" } else { "fail" })
    })
}

pub fn list_scenarios() -> String {
    crate::config::PRESETS
        .iter()
        .map(|p| format!("{:<20} {}\n", p.name, p.description))
        .collect()
}
