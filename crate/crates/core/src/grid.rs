//! Uniform 1D grids, discrete fields and the pointwise order on them.
//!
//! A [`Field`] holds the values of a function at the interior nodes of a
//! [`Grid`]. Homogeneous Dirichlet data is implicit: the two boundary nodes
//! are ghost zeros and never stored. The ODE mode is a one-node grid whose
//! spatial operator vanishes identically, so scalar problems go through the
//! same pipeline as the PDE.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridMode {
    /// Interior nodes of `(0, L)` with ghost zeros at both ends.
    Pde1d,
    /// A single scalar unknown; spatial operators are nulled.
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    mode: GridMode,
    n_interior: usize,
    length: f64,
}

impl Grid {
    /// Interior nodes `x_i = i·dx`, `i = 1..=n_interior`, with `dx = L/(n_interior+1)`.
    pub fn pde_1d(n_interior: usize, length: f64) -> Result<Self> {
        if n_interior < 2 {
            return Err(Error::invalid(
                "n_interior",
                format!("a 1D grid needs at least 2 interior nodes, got {n_interior}"),
            ));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid(
                "length",
                format!("must be positive and finite, got {length}"),
            ));
        }
        Ok(Self {
            mode: GridMode::Pde1d,
            n_interior,
            length,
        })
    }

    pub fn ode() -> Self {
        Self {
            mode: GridMode::Ode,
            n_interior: 1,
            length: 1.0,
        }
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    pub fn is_ode(&self) -> bool {
        self.mode == GridMode::Ode
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Node spacing; `None` in ODE mode.
    pub fn spacing(&self) -> Option<f64> {
        match self.mode {
            GridMode::Pde1d => Some(self.length / (self.n_interior + 1) as f64),
            GridMode::Ode => None,
        }
    }

    /// Quadrature weight of a node: `dx` on a 1D grid, `1` in ODE mode.
    pub fn weight(&self) -> f64 {
        self.spacing().unwrap_or(1.0)
    }

    /// Coordinate of interior node `i` (0-based). Always `0` in ODE mode.
    pub fn node(&self, i: usize) -> f64 {
        match self.spacing() {
            Some(dx) => (i + 1) as f64 * dx,
            None => 0.0,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_interior).map(|i| self.node(i)).collect()
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Uniform time grid `t_k = k·dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    final_time: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(final_time: f64, n_steps: usize) -> Result<Self> {
        if !(final_time.is_finite() && final_time > 0.0) {
            return Err(Error::invalid(
                "final_time",
                format!("must be positive and finite, got {final_time}"),
            ));
        }
        if n_steps == 0 {
            return Err(Error::invalid("n_steps", "must be at least 1"));
        }
        Ok(Self { final_time, n_steps })
    }

    /// Builds the grid from a step size; `final_time` must be an integer
    /// multiple of `dt` up to rounding.
    pub fn from_step(final_time: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        let steps = (final_time / dt).round();
        if steps < 1.0 || ((steps * dt) - final_time).abs() > 1e-9 * final_time.abs().max(dt) {
            return Err(Error::invalid(
                "dt",
                format!("final time {final_time} is not a multiple of dt = {dt}"),
            ));
        }
        Self::new(final_time, steps as usize)
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.final_time / self.n_steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| self.time(k)).collect()
    }
}

/// Outcome of a pointwise order test `a ≤ b + tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderCheck {
    pub holds: bool,
    /// `max_i (a_i − b_i)`; negative when `a` lies strictly below `b`.
    pub max_violation: f64,
    /// Node attaining `max_violation`.
    pub worst_node: usize,
}

/// Values at the interior nodes of a grid. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_interior() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid with {} interior nodes",
                values.len(),
                grid.n_interior()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "values",
                format!("entry {i} is not finite ({})", values[i]),
            ));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_interior());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self::from_raw(grid, vec![value; grid.n_interior()])
    }

    /// Samples `f` at the interior nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise `self − other`.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Field::from_raw(
            self.grid,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Weighted inner product `Σ a_i b_i · w` with `w` the node weight.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let sum: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(sum * self.grid.weight())
    }

    /// Discrete `L²` norm: `sqrt(Σ u_i² dx)` on a 1D grid, `|u|` in ODE mode.
    pub fn h_norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v * v).sum();
        (sum * self.grid.weight()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn order_leq(&self, other: &Field, tol: f64) -> Result<OrderCheck> {
        self.grid.ensure_same(&other.grid)?;
        let (worst_node, max_violation) = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |(bi, bv), (i, v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                },
            );
        Ok(OrderCheck {
            holds: max_violation <= tol,
            max_violation,
            worst_node,
        })
    }

    /// `‖(self − other)⁺‖²` in the discrete `L²` norm.
    pub fn positive_part_energy(&self, other: &Field) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let d = (a - b).max(0.0);
                d * d
            })
            .sum();
        Ok(sum * self.grid.weight())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit(n: usize) -> Grid {
        Grid::pde_1d(n, 1.0).unwrap()
    }

    #[test]
    fn grid_invariants() {
        assert!(Grid::pde_1d(1, 1.0).is_err());
        assert!(Grid::pde_1d(4, 0.0).is_err());
        let g = unit(3);
        assert_abs_diff_eq!(g.spacing().unwrap(), 0.25);
        assert_eq!(g.nodes(), vec![0.25, 0.5, 0.75]);
        let o = Grid::ode();
        assert_eq!(o.n_interior(), 1);
        assert_eq!(o.spacing(), None);
        assert_eq!(o.weight(), 1.0);
    }

    #[test]
    fn time_grid_from_step() {
        let t = TimeGrid::from_step(0.25, 1e-3).unwrap();
        assert_eq!(t.n_steps(), 250);
        assert!(TimeGrid::from_step(0.25, -1e-3).is_err());
        assert!(TimeGrid::from_step(0.25, 0.3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn field_rejects_bad_values() {
        assert!(Field::new(unit(3), vec![0.0; 2]).is_err());
        assert!(Field::new(unit(3), vec![0.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn h_norm_examples() {
        assert_eq!(Field::zeros(unit(17)).h_norm(), 0.0);
        // Riemann sum of sin² over (0,1) with n+1 = 512 cells is exactly 1/2.
        let u = Field::from_fn(unit(511), |x| (PI * x).sin()).unwrap();
        let oracle: f64 = u.values().iter().map(|v| v * v / 512.0).sum::<f64>().sqrt();
        assert_abs_diff_eq!(u.h_norm(), oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(u.h_norm(), 0.5f64.sqrt(), epsilon = 1e-4);
        let s = Field::new(Grid::ode(), vec![-3.0]).unwrap();
        assert_eq!(s.h_norm(), 3.0);
    }

    #[test]
    fn order_examples() {
        let g = unit(5);
        let zero = Field::zeros(g);
        let one = Field::constant(g, 1.0);
        let c = zero.order_leq(&zero, 0.0).unwrap();
        assert!(c.holds);
        assert_eq!(c.max_violation, 0.0);
        let c = zero.order_leq(&one, 0.0).unwrap();
        assert_eq!((c.holds, c.max_violation), (true, -1.0));
        let c = one.order_leq(&zero, 0.0).unwrap();
        assert_eq!((c.holds, c.max_violation), (false, 1.0));
        assert!(zero.order_leq(&Field::zeros(unit(4)), 0.0).is_err());
    }

    #[test]
    fn positive_part_energy_examples() {
        let g = unit(9);
        let a = Field::from_fn(g, |x| x).unwrap();
        let b = Field::from_fn(g, |x| x + 0.1).unwrap();
        assert_eq!(a.positive_part_energy(&b).unwrap(), 0.0);
        let two = Field::new(Grid::ode(), vec![2.0]).unwrap();
        let one = Field::new(Grid::ode(), vec![1.0]).unwrap();
        assert_eq!(two.positive_part_energy(&one).unwrap(), 1.0);
        let g = unit(99);
        let e = Field::constant(g, 1.0).positive_part_energy(&Field::zeros(g)).unwrap();
        assert_abs_diff_eq!(e, 0.99, epsilon = 1e-12);
    }

    fn field_strategy(n: usize) -> impl Strategy<Value = Field> {
        prop::collection::vec(-5.0f64..5.0, n).prop_map(move |v| Field::new(unit(n), v).unwrap())
    }

    proptest! {
        #[test]
        fn h_norm_is_a_norm(a in field_strategy(12), b in field_strategy(12), s in -3.0f64..3.0) {
            let sum = Field::new(*a.grid(), a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect()).unwrap();
            prop_assert!(sum.h_norm() <= a.h_norm() + b.h_norm() + 1e-12);
            let scaled = a.map(|v| s * v);
            prop_assert!((scaled.h_norm() - s.abs() * a.h_norm()).abs() <= 1e-12 * (1.0 + a.h_norm()));
        }

        #[test]
        fn order_is_partial(a in field_strategy(8), b in field_strategy(8), c in field_strategy(8)) {
            prop_assert!(a.order_leq(&a, 0.0).unwrap().holds);
            let ab = a.order_leq(&b, 0.0).unwrap().holds;
            let ba = b.order_leq(&a, 0.0).unwrap().holds;
            if ab && ba {
                prop_assert_eq!(&a, &b);
            }
            if ab && b.order_leq(&c, 0.0).unwrap().holds {
                prop_assert!(a.order_leq(&c, 0.0).unwrap().holds);
            }
        }

        #[test]
        fn energy_matches_order(a in field_strategy(10), b in field_strategy(10)) {
            let e = a.positive_part_energy(&b).unwrap();
            prop_assert_eq!(e == 0.0, a.order_leq(&b, 0.0).unwrap().holds);
            let d = a.sub(&b).unwrap().h_norm();
            prop_assert!(e <= d * d + 1e-12);
        }
    }
}
