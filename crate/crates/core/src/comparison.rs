//! Pathwise-coupled runs: two frozen-drift problems driven by the same
//! noise path, and the positive-part diagnostics that certify their order.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::NoisePath;
use crate::operators::SigmaEps;
use crate::solver::{solve_frozen, Forcing, NewtonOptions, ProblemSpec, Trajectory};

/// A frozen-drift problem: the problem data together with the forcing replacing `b(u)`.
#[derive(Debug, Clone)]
pub struct FrozenProblem {
    pub spec: ProblemSpec,
    pub forcing: Forcing,
}

impl FrozenProblem {
    pub fn new(spec: ProblemSpec, forcing: Forcing) -> Self {
        Self { spec, forcing }
    }
}

fn ensure_compatible(a: &ProblemSpec, b: &ProblemSpec) -> Result<()> {
    let mismatch = if a.grid != b.grid {
        Some("grid")
    } else if a.time != b.time {
        Some("time grid")
    } else if a.spatial != b.spatial {
        Some("spatial operator")
    } else if a.reaction != b.reaction {
        Some("reaction")
    } else if a.noise != b.noise {
        Some("noise")
    } else {
        None
    };
    match mismatch {
        Some(what) => Err(Error::IncompatibleSpecs(format!("{what} differs"))),
        None => Ok(()),
    }
}

/// Solves both problems on the same noise path.
pub fn run_coupled(
    first: &FrozenProblem,
    second: &FrozenProblem,
    path: &NoisePath,
    newton: &NewtonOptions,
) -> Result<(Trajectory, Trajectory)> {
    ensure_compatible(&first.spec, &second.spec)?;
    let a = solve_frozen(&first.spec, &first.forcing, path, newton)?;
    let b = solve_frozen(&second.spec, &second.forcing, path, newton)?;
    Ok((a, b))
}

/// `t_n ↦ ‖(u_1(t_n) − u_2(t_n))⁺‖²`.
pub fn energy_trace(first: &Trajectory, second: &Trajectory) -> Result<Vec<f64>> {
    first
        .states()
        .iter()
        .zip(second.states())
        .map(|(a, b)| a.positive_part_energy(b))
        .collect()
}

/// `t_n ↦ Σ_ε(u_1(t_n) − u_2(t_n))`; approaches half the positive-part
/// energy from below as `eps → 0`.
pub fn sigma_energy_trace(first: &Trajectory, second: &Trajectory, eps: f64) -> Result<Vec<f64>> {
    let sigma = SigmaEps::new(eps)?;
    first
        .states()
        .iter()
        .zip(second.states())
        .map(|(a, b)| a.sub(b).map(|d| sigma.functional(&d)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub path: usize,
    pub step: usize,
    pub energy: f64,
}

/// Ensemble statistics of `‖(u_1 − u_2)⁺‖²` over paths and times.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    pub max_energy: Vec<f64>,
    pub mean_energy: Vec<f64>,
    pub paths: usize,
    pub master_seed: u64,
    pub worst: Witness,
    pub tol: f64,
    pub passed: bool,
}

impl ComparisonReport {
    pub fn overall_max(&self) -> f64 {
        self.worst.energy
    }

    /// `key = value` lines.
    pub fn write_summary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "paths = {}", self.paths)?;
        writeln!(out, "master_seed = {}", self.master_seed)?;
        writeln!(out, "steps = {}", self.times.len().saturating_sub(1))?;
        writeln!(out, "tolerance = {:e}", self.tol)?;
        writeln!(out, "max_energy = {:e}", self.worst.energy)?;
        writeln!(
            out,
            "mean_energy_terminal = {:e}",
            self.mean_energy.last().copied().unwrap_or(0.0)
        )?;
        writeln!(out, "worst_path = {}", self.worst.path)?;
        writeln!(out, "worst_step = {}", self.worst.step)?;
        writeln!(out, "passed = {}", self.passed)
    }

    /// CSV with columns `t,max_energy,mean_energy`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,max_energy,mean_energy")?;
        for ((t, m), e) in self.times.iter().zip(&self.max_energy).zip(&self.mean_energy) {
            writeln!(out, "{t},{m},{e}")?;
        }
        Ok(())
    }
}

/// Runs [`run_coupled`] on paths `0..paths` and aggregates the energies.
/// Paths run in parallel; the reduction is done in path order.
pub fn comparison_study(
    first: &FrozenProblem,
    second: &FrozenProblem,
    paths: usize,
    master_seed: u64,
    tol: f64,
    newton: &NewtonOptions,
) -> Result<ComparisonReport> {
    if paths == 0 {
        return Err(Error::invalid("paths", "at least one path is required"));
    }
    ensure_compatible(&first.spec, &second.spec)?;
    let time = first.spec.time;
    let modes = first.spec.noise.modes();
    let per_path: Vec<Vec<f64>> = (0..paths)
        .into_par_iter()
        .map(|m| {
            let path = NoisePath::sample(master_seed, m as u64, modes, &time);
            run_coupled(first, second, &path, newton)
                .and_then(|(a, b)| energy_trace(&a, &b))
                .map_err(|e| Error::on_path(m, e))
        })
        .collect::<Result<_>>()?;

    let len = time.n_steps() + 1;
    let mut max_energy = vec![0.0f64; len];
    let mut sum = vec![0.0f64; len];
    let mut worst = Witness {
        path: 0,
        step: 0,
        energy: 0.0,
    };
    for (m, trace) in per_path.iter().enumerate() {
        for (k, &e) in trace.iter().enumerate() {
            sum[k] += e;
            if e > max_energy[k] {
                max_energy[k] = e;
            }
            if e > worst.energy {
                worst = Witness {
                    path: m,
                    step: k,
                    energy: e,
                };
            }
        }
    }
    let mean_energy = sum.into_iter().map(|s| s / paths as f64).collect();
    Ok(ComparisonReport {
        times: time.times(),
        max_energy,
        mean_energy,
        paths,
        master_seed,
        worst,
        tol,
        passed: worst.energy <= tol,
    })
}
