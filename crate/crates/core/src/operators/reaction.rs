use crate::error::{Error, Result};
use crate::grid::Field;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReactionKind {
    Zero,
    /// `slope · r + offset`.
    Linear {
        slope: f64,
        offset: f64,
    },
    /// `scale · tanh(r)`.
    LipschitzTanh {
        scale: f64,
    },
}

/// Lipschitz reaction term `f`, applied pointwise and treated explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionSpec {
    pub kind: ReactionKind,
    pub c_f: f64,
}

impl ReactionSpec {
    pub fn new(kind: ReactionKind, c_f: f64) -> Result<Self> {
        if !(c_f.is_finite() && c_f > 0.0) {
            return Err(Error::invalid("c_f", format!("must be positive, got {c_f}")));
        }
        let finite = match kind {
            ReactionKind::Zero => true,
            ReactionKind::Linear { slope, offset } => slope.is_finite() && offset.is_finite(),
            ReactionKind::LipschitzTanh { scale } => scale.is_finite(),
        };
        if !finite {
            return Err(Error::invalid("reaction", "parameters must be finite"));
        }
        Ok(Self { kind, c_f })
    }

    pub fn zero() -> Self {
        Self {
            kind: ReactionKind::Zero,
            c_f: 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == ReactionKind::Zero
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self.kind {
            ReactionKind::Zero => 0.0,
            ReactionKind::Linear { slope, offset } => slope * r + offset,
            ReactionKind::LipschitzTanh { scale } => scale * r.tanh(),
        }
    }

    pub fn eval_field(&self, u: &Field) -> Field {
        u.map(|r| self.eval(r))
    }
}
