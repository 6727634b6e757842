use crate::error::{Error, Result};
use crate::grid::Field;

/// Value picked by a step function exactly at its jump point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JumpSide {
    #[default]
    Lower,
    Mid,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DriftKind {
    Zero,
    /// `(max{r, 0})^{1/2}`.
    SqrtPlus,
    /// `low` below `s0`, `high` above, selected by [`JumpSide`] at `s0`.
    Heaviside {
        s0: f64,
        low: f64,
        high: f64,
    },
    /// `scale · tanh(r)`.
    LipschitzTanh {
        scale: f64,
    },
    /// Linear interpolation between knots `(r, b(r))`, constant beyond the ends.
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
}

/// A nondecreasing scalar drift `b`, applied pointwise.
///
/// Monotonicity and the linear growth bound `|b(r)| ≤ C_B(1 + |r|)` are
/// assumptions on the data; they are verified by sampling in
/// [`check_assumptions`](crate::operators::check_assumptions) rather than
/// enforced here.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    pub kind: DriftKind,
    pub jump_side: JumpSide,
    pub c_b: f64,
}

impl DriftSpec {
    pub fn new(kind: DriftKind, jump_side: JumpSide, c_b: f64) -> Result<Self> {
        if !(c_b.is_finite() && c_b > 0.0) {
            return Err(Error::invalid("c_b", format!("must be positive, got {c_b}")));
        }
        match &kind {
            DriftKind::Heaviside { s0, low, high } => {
                if ![*s0, *low, *high].iter().all(|v| v.is_finite()) {
                    return Err(Error::invalid("heaviside", "parameters must be finite"));
                }
            }
            DriftKind::LipschitzTanh { scale } if !scale.is_finite() => {
                return Err(Error::invalid("scale", "must be finite"));
            }
            DriftKind::PiecewiseLinear { knots } => {
                if knots.is_empty() {
                    return Err(Error::invalid("knots", "at least one knot is required"));
                }
                if knots.iter().any(|(r, b)| !r.is_finite() || !b.is_finite()) {
                    return Err(Error::invalid("knots", "knots must be finite"));
                }
                if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::invalid("knots", "abscissae must be strictly increasing"));
                }
            }
            _ => {}
        }
        Ok(Self { kind, jump_side, c_b })
    }

    pub fn zero() -> Self {
        Self {
            kind: DriftKind::Zero,
            jump_side: JumpSide::Lower,
            c_b: 1.0,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.kind {
            DriftKind::Zero => 0.0,
            DriftKind::SqrtPlus => r.max(0.0).sqrt(),
            DriftKind::Heaviside { s0, low, high } => {
                if r < *s0 {
                    *low
                } else if r > *s0 {
                    *high
                } else {
                    match self.jump_side {
                        JumpSide::Lower => *low,
                        JumpSide::Upper => *high,
                        JumpSide::Mid => 0.5 * (low + high),
                    }
                }
            }
            DriftKind::LipschitzTanh { scale } => scale * r.tanh(),
            DriftKind::PiecewiseLinear { knots } => interpolate(knots, r),
        }
    }

    pub fn eval_field(&self, u: &Field) -> Field {
        u.map(|r| self.eval(r))
    }

    /// Abscissae where `b` is not smooth; used to place extra samples.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            DriftKind::SqrtPlus => vec![0.0],
            DriftKind::Heaviside { s0, .. } => vec![*s0],
            DriftKind::PiecewiseLinear { knots } => knots.iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }
}

fn interpolate(knots: &[(f64, f64)], r: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if r <= first.0 {
        return first.1;
    }
    if r >= last.0 {
        return last.1;
    }
    let j = knots.partition_point(|k| k.0 <= r);
    let (r0, b0) = knots[j - 1];
    let (r1, b1) = knots[j];
    b0 + (b1 - b0) * (r - r0) / (r1 - r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use proptest::prelude::*;

    #[test]
    fn sqrt_plus_example() {
        let g = Grid::pde_1d(3, 1.0).unwrap();
        let u = Field::new(g, vec![4.0, -1.0, 0.0]).unwrap();
        let b = DriftSpec::new(DriftKind::SqrtPlus, JumpSide::Lower, 1.0).unwrap();
        assert_eq!(b.eval_field(&u).values(), &[2.0, 0.0, 0.0]);
    }

    #[test]
    fn heaviside_jump_selection() {
        let kind = DriftKind::Heaviside {
            s0: 0.5,
            low: 0.0,
            high: 1.0,
        };
        let at = |side| DriftSpec::new(kind.clone(), side, 1.0).unwrap().eval(0.5);
        assert_eq!(at(JumpSide::Lower), 0.0);
        assert_eq!(at(JumpSide::Mid), 0.5);
        assert_eq!(at(JumpSide::Upper), 1.0);
    }

    #[test]
    fn piecewise_linear_interpolates() {
        let b = DriftSpec::new(
            DriftKind::PiecewiseLinear {
                knots: vec![(-1.0, -1.0), (1.0, 1.0)],
            },
            JumpSide::Lower,
            1.0,
        )
        .unwrap();
        assert_eq!(b.eval(0.25), 0.25);
        assert_eq!(b.eval(5.0), 1.0);
        assert_eq!(b.eval(-5.0), -1.0);
    }

    #[test]
    fn rejects_unsorted_knots() {
        let kind = DriftKind::PiecewiseLinear {
            knots: vec![(1.0, 0.0), (0.0, 1.0)],
        };
        assert!(DriftSpec::new(kind, JumpSide::Lower, 1.0).is_err());
        assert!(DriftSpec::new(DriftKind::Zero, JumpSide::Lower, 0.0).is_err());
    }

    fn drifts() -> Vec<DriftSpec> {
        let mut out = Vec::new();
        for side in [JumpSide::Lower, JumpSide::Mid, JumpSide::Upper] {
            for kind in [
                DriftKind::Zero,
                DriftKind::SqrtPlus,
                DriftKind::Heaviside {
                    s0: 0.5,
                    low: 0.0,
                    high: 1.0,
                },
                DriftKind::LipschitzTanh { scale: 1.0 },
                DriftKind::PiecewiseLinear {
                    knots: vec![(-1.0, -1.0), (0.0, 0.0), (2.0, 0.5)],
                },
            ] {
                out.push(DriftSpec::new(kind, side, 1.0).unwrap());
            }
        }
        out
    }

    proptest! {
        #[test]
        fn preserves_pointwise_order(
            pairs in prop::collection::vec((-3.0f64..3.0, 0.0f64..2.0), 6)
        ) {
            let g = Grid::pde_1d(6, 1.0).unwrap();
            let u = Field::new(g, pairs.iter().map(|p| p.0).collect()).unwrap();
            let v = Field::new(g, pairs.iter().map(|p| p.0 + p.1).collect()).unwrap();
            for b in drifts() {
                prop_assert!(b.eval_field(&u).order_leq(&b.eval_field(&v), 0.0).unwrap().holds);
            }
        }

        #[test]
        fn linear_growth(values in prop::collection::vec(-50.0f64..50.0, 5)) {
            let g = Grid::pde_1d(5, 1.0).unwrap();
            let u = Field::new(g, values).unwrap();
            for b in drifts() {
                prop_assert!(b.eval_field(&u).max_abs() <= b.c_b * (1.0 + u.max_abs()));
            }
        }
    }
}
