//! Sampled verification of the structural hypotheses on the data.
//!
//! Failures are collected into an [`AssumptionReport`]; nothing here
//! returns an error. Checks flagged `required = false` are informational
//! (a discontinuous drift is expected to fail the Lipschitz probe).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DriftSpec, NoiseSpec, ReactionSpec, SigmaEps, SpatialOpSpec};
use crate::grid::{Field, Grid};

/// Nondecreasing test function for the T-monotonicity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderTest {
    Identity,
    PositivePart,
    Smoothed(SigmaEps),
}

impl OrderTest {
    pub fn apply(&self, r: f64) -> f64 {
        match self {
            OrderTest::Identity => r,
            OrderTest::PositivePart => r.max(0.0),
            OrderTest::Smoothed(s) => s.value(r),
        }
    }

    fn label(&self) -> String {
        match self {
            OrderTest::Identity => "identity".into(),
            OrderTest::PositivePart => "positive part".into(),
            OrderTest::Smoothed(s) => format!("sigma_eps(eps={:e})", s.eps()),
        }
    }
}

/// `⟨A(φ) − A(ψ), σ(φ − ψ)⟩_dx` together with the magnitude
/// `Σ (|A(φ)_i| + |A(ψ)_i|)·|σ_i| dx` that bounds its rounding error.
pub fn t_monotonicity_gap(spec: &SpatialOpSpec, phi: &Field, psi: &Field, test: OrderTest) -> (f64, f64) {
    let a_phi = spec.apply(phi);
    let a_psi = spec.apply(psi);
    let w = phi.grid().weight();
    let mut value = 0.0;
    let mut scale = 0.0;
    for i in 0..phi.len() {
        let s = test.apply(phi.values()[i] - psi.values()[i]);
        value += (a_phi.values()[i] - a_psi.values()[i]) * s;
        scale += (a_phi.values()[i].abs() + a_psi.values()[i].abs()) * s.abs();
    }
    (value * w, scale * w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub required: bool,
    pub passed: bool,
    /// Worst sampled value of the checked quantity (see `witness`).
    pub worst: f64,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
}

impl AssumptionReport {
    pub fn all_required_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.required).all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} = {}{} ; worst = {:e} ; {}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                if c.required { "" } else { " (informational)" },
                c.worst,
                c.witness
            )?;
        }
        writeln!(
            f,
            "all_required = {}",
            if self.all_required_pass() { "pass" } else { "fail" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Points of the dense scalar sample grid.
    pub samples: usize,
    /// Sampled half-width: scalar checks run on `[−range, range]`.
    pub range: f64,
    /// Random field pairs for the operator checks.
    pub pairs: usize,
    pub seed: u64,
    /// `eps` of the smoothed positive part in the T-monotonicity probe.
    pub sigma_eps: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            samples: 20_001,
            range: 10.0,
            pairs: 1000,
            seed: 0x5eed,
            sigma_eps: 1e-3,
        }
    }
}

/// Rounding allowance of the T-monotonicity probe, relative to its scale.
pub const T_MONOTONICITY_TOL: f64 = 1e-14;

pub fn check_assumptions(
    grid: &Grid,
    spatial: &SpatialOpSpec,
    drift: &DriftSpec,
    reaction: &ReactionSpec,
    noise: &NoiseSpec,
    opts: &CheckOptions,
) -> AssumptionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = sample_points(opts, &drift.breakpoints());
    let checks = vec![
        coercivity(grid, spatial, opts, &mut rng),
        t_monotonicity(grid, spatial, opts, &mut rng),
        drift_monotone(drift, &samples),
        drift_growth(drift, &samples),
        drift_lipschitz(drift, &samples),
        reaction_lipschitz(reaction, &samples),
        noise_summability(noise),
        noise_lipschitz(noise, &samples),
    ];
    AssumptionReport { checks }
}

fn sample_points(opts: &CheckOptions, breakpoints: &[f64]) -> Vec<f64> {
    let n = opts.samples.max(3);
    let mut pts: Vec<f64> = (0..n)
        .map(|i| -opts.range + 2.0 * opts.range * i as f64 / (n - 1) as f64)
        .collect();
    for &b in breakpoints {
        for d in [-1e-9, 0.0, 1e-9] {
            pts.push(b + d);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> Field {
    Field::from_raw(
        *grid,
        (0..grid.n_interior()).map(|_| rng.random_range(-1.0..1.0)).collect(),
    )
}

fn coercivity(grid: &Grid, spatial: &SpatialOpSpec, opts: &CheckOptions, rng: &mut ChaCha8Rng) -> AssumptionCheck {
    // ⟨A u, u⟩ − α Σ|D|^p dx, relative; equality holds for the power law.
    let mut worst = 0.0f64;
    for _ in 0..opts.pairs.max(1) {
        let u = random_field(grid, rng);
        let lhs = spatial.apply(&u).inner(&u).unwrap_or(f64::NAN);
        let rhs = spatial.energy(&u);
        let rel = if rhs > 0.0 { (lhs - rhs) / rhs } else { lhs - rhs };
        if rel.abs() > worst.abs() || rel.is_nan() {
            worst = rel;
        }
    }
    AssumptionCheck {
        name: "coercivity",
        required: true,
        passed: worst >= -1e-12,
        worst,
        witness: format!("<A(u),u> vs alpha*|u|_V^p (relative deviation {worst:e})"),
    }
}

fn t_monotonicity(grid: &Grid, spatial: &SpatialOpSpec, opts: &CheckOptions, rng: &mut ChaCha8Rng) -> AssumptionCheck {
    let tests = [
        OrderTest::Identity,
        OrderTest::PositivePart,
        OrderTest::Smoothed(SigmaEps::new(opts.sigma_eps).unwrap_or(SigmaEps::new(1e-3).unwrap())),
    ];
    let mut worst = f64::INFINITY;
    let mut witness = String::from("no samples");
    for pair in 0..opts.pairs.max(1) {
        let phi = random_field(grid, rng);
        let psi = random_field(grid, rng);
        for test in tests {
            let (value, scale) = t_monotonicity_gap(spatial, &phi, &psi, test);
            let normalized = if scale > 0.0 { value / scale } else { 0.0 };
            if normalized < worst {
                worst = normalized;
                witness = format!("pair {pair}, {}: value {value:e}, scale {scale:e}", test.label());
            }
        }
    }
    AssumptionCheck {
        name: "t_monotonicity",
        required: true,
        passed: worst >= -T_MONOTONICITY_TOL,
        worst,
        witness,
    }
}

fn drift_monotone(drift: &DriftSpec, samples: &[f64]) -> AssumptionCheck {
    let mut worst = f64::NEG_INFINITY;
    let mut at = 0.0;
    for w in samples.windows(2) {
        let drop = drift.eval(w[0]) - drift.eval(w[1]);
        if drop > worst {
            worst = drop;
            at = w[0];
        }
    }
    AssumptionCheck {
        name: "drift_monotone",
        required: true,
        passed: worst <= 0.0,
        worst,
        witness: format!("largest decrease b(r)-b(r') near r = {at}"),
    }
}

fn drift_growth(drift: &DriftSpec, samples: &[f64]) -> AssumptionCheck {
    let mut worst = f64::NEG_INFINITY;
    let mut at = 0.0;
    for &r in samples {
        let excess = drift.eval(r).abs() - drift.c_b * (1.0 + r.abs());
        if excess > worst {
            worst = excess;
            at = r;
        }
    }
    AssumptionCheck {
        name: "drift_linear_growth",
        required: true,
        passed: worst <= 0.0,
        worst,
        witness: format!("max |b(r)| - C_B(1+|r|) at r = {at} with C_B = {}", drift.c_b),
    }
}

/// Difference-quotient probe at two resolutions; a slope that keeps growing
/// under refinement flags a non-Lipschitz function.
fn max_slope(f: impl Fn(f64) -> f64, samples: &[f64], h: f64) -> (f64, f64) {
    samples
        .iter()
        .map(|&r| (((f(r + h) - f(r - h)) / (2.0 * h)).abs(), r))
        .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

fn drift_lipschitz(drift: &DriftSpec, samples: &[f64]) -> AssumptionCheck {
    let f = |r| drift.eval(r);
    let (coarse, _) = max_slope(f, samples, 1e-4);
    let (fine, at) = max_slope(f, samples, 1e-7);
    let passed = fine <= 10.0 * coarse.max(1e-300) && fine.is_finite();
    AssumptionCheck {
        name: "drift_lipschitz",
        required: false,
        passed,
        worst: fine,
        witness: format!("slope {coarse:e} at h=1e-4 vs {fine:e} at h=1e-7 near r = {at}"),
    }
}

fn reaction_lipschitz(reaction: &ReactionSpec, samples: &[f64]) -> AssumptionCheck {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for w in samples.windows(2) {
        let q = (reaction.eval(w[1]) - reaction.eval(w[0])).abs() / (w[1] - w[0]);
        if q > worst {
            worst = q;
            at = w[0];
        }
    }
    AssumptionCheck {
        name: "reaction_lipschitz",
        required: true,
        passed: worst <= reaction.c_f * (1.0 + 1e-9),
        worst,
        witness: format!("max difference quotient near r = {at} with C_F = {}", reaction.c_f),
    }
}

fn noise_summability(noise: &NoiseSpec) -> AssumptionCheck {
    let sum = noise.coeff_square_sum();
    AssumptionCheck {
        name: "noise_summability",
        required: true,
        passed: sum <= noise.c_g * noise.c_g,
        worst: sum,
        witness: format!("sum c_k^2 = {sum:e} vs C_G^2 = {:e}", noise.c_g * noise.c_g),
    }
}

fn noise_lipschitz(noise: &NoiseSpec, samples: &[f64]) -> AssumptionCheck {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for w in samples.windows(2) {
        let num: f64 = (0..noise.modes())
            .map(|k| {
                let d = noise.g_unchecked(k, w[1]) - noise.g_unchecked(k, w[0]);
                d * d
            })
            .sum();
        let q = num / ((w[1] - w[0]) * (w[1] - w[0]));
        if q > worst {
            worst = q;
            at = w[0];
        }
    }
    let cg2 = noise.c_g * noise.c_g;
    AssumptionCheck {
        name: "noise_lipschitz",
        required: true,
        passed: worst <= cg2 * (1.0 + 1e-9),
        worst,
        witness: format!("max sum_k |g_k(r)-g_k(s)|^2/|r-s|^2 near r = {at} vs C_G^2 = {cg2:e}"),
    }
}
