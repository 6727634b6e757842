use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

/// Power-law diffusion `−(α |u_x|^{p−2} u_x)_x` with homogeneous Dirichlet data.
///
/// Discretized in flux form: with `D_{i+1/2} = (u_{i+1} − u_i)/dx` and
/// `F_{i+1/2} = α |D|^{p−2} D`, the operator value at node `i` is
/// `−(F_{i+1/2} − F_{i−1/2})/dx`. For `p = 2` this is `α` times the
/// standard second-difference Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialOpSpec {
    pub p: f64,
    pub alpha: f64,
    /// Regularizer for `|D|^{p−2}` inside the Newton Jacobian only.
    pub reg_delta: f64,
}

impl Default for SpatialOpSpec {
    fn default() -> Self {
        Self {
            p: 2.0,
            alpha: 1.0,
            reg_delta: 1e-12,
        }
    }
}

impl SpatialOpSpec {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        Self {
            p,
            alpha,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_reg_delta(mut self, reg_delta: f64) -> Result<Self> {
        self.reg_delta = reg_delta;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.p.is_finite() && self.p >= 2.0) {
            return Err(Error::invalid("p", format!("must be >= 2, got {}", self.p)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if !(self.reg_delta.is_finite() && self.reg_delta >= 0.0) {
            return Err(Error::invalid(
                "reg_delta",
                format!("must be nonnegative, got {}", self.reg_delta),
            ));
        }
        Ok(self)
    }

    /// `a(ξ) = α |ξ|^{p−2} ξ`.
    pub fn flux(&self, slope: f64) -> f64 {
        if self.p == 2.0 {
            self.alpha * slope
        } else {
            self.alpha * slope.abs().powf(self.p - 2.0) * slope
        }
    }

    /// Regularized derivative `α (p−1) (ξ² + δ)^{(p−2)/2}` used by Newton.
    pub(crate) fn flux_slope(&self, slope: f64) -> f64 {
        if self.p == 2.0 {
            self.alpha
        } else {
            self.alpha * (self.p - 1.0) * (slope * slope + self.reg_delta).powf(0.5 * (self.p - 2.0))
        }
    }

    /// Applies the operator to `u`. Returns zeros in ODE mode.
    pub fn apply(&self, u: &Field) -> Field {
        let mut out = vec![0.0; u.len()];
        self.apply_into(u.grid(), u.values(), &mut out);
        Field::from_raw(*u.grid(), out)
    }

    pub(crate) fn apply_into(&self, grid: &Grid, u: &[f64], out: &mut [f64]) {
        let Some(dx) = grid.spacing() else {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        };
        let n = u.len();
        // left face of node 0 sees the ghost zero
        let mut left = self.flux(u[0] / dx);
        for i in 0..n {
            let next = if i + 1 < n { u[i + 1] } else { 0.0 };
            let right = self.flux((next - u[i]) / dx);
            out[i] = -(right - left) / dx;
            left = right;
        }
    }

    /// Tridiagonal Jacobian of the operator at `u`: `(lower, diag, upper)`,
    /// with `lower[0]` and `upper[n−1]` unused. All zeros in ODE mode.
    pub(crate) fn jacobian(&self, grid: &Grid, u: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = u.len();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let Some(dx) = grid.spacing() else {
            return (lower, diag, upper);
        };
        let inv_dx2 = 1.0 / (dx * dx);
        // faces j = 0..=n, face j sits between node j−1 and node j
        let face = |j: usize| -> f64 {
            let l = if j == 0 { 0.0 } else { u[j - 1] };
            let r = if j == n { 0.0 } else { u[j] };
            self.flux_slope((r - l) / dx) * inv_dx2
        };
        let mut left = face(0);
        for i in 0..n {
            let right = face(i + 1);
            diag[i] = left + right;
            if i > 0 {
                lower[i] = -left;
            }
            if i + 1 < n {
                upper[i] = -right;
            }
            left = right;
        }
        (lower, diag, upper)
    }

    /// `α Σ_faces |D|^p dx`, the value of `⟨A(u), u⟩` by summation by parts.
    pub fn energy(&self, u: &Field) -> f64 {
        self.alpha * gradient_p_sum(u, self.p)
    }
}

/// `Σ_faces |D_{j}|^p dx` over all `n+1` faces, ghosts included; `0` in ODE mode.
pub fn gradient_p_sum(u: &Field, p: f64) -> f64 {
    let Some(dx) = u.grid().spacing() else {
        return 0.0;
    };
    let v = u.values();
    let n = v.len();
    (0..=n)
        .map(|j| {
            let l = if j == 0 { 0.0 } else { v[j - 1] };
            let r = if j == n { 0.0 } else { v[j] };
            ((r - l) / dx).abs().powf(p)
        })
        .sum::<f64>()
        * dx
}
