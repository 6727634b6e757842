//! C² approximation of the positive part.
//!
//! ```text
//! σ_ε(r) = r                                   r > ε
//!        = (3/ε⁴) r⁵ − (8/ε³) r⁴ + (6/ε²) r³  0 < r ≤ ε
//!        = 0                                   r ≤ 0
//! ```
//!
//! In the scaled variable `s = r/ε` the middle branch is `ε q(s)` with
//! `q(s) = 3s⁵ − 8s⁴ + 6s³`, which makes `σ_ε′` and `σ_ε σ_ε″` independent
//! of `ε` while `σ_ε″` grows like `1/ε`.

use crate::error::{Error, Result};
use crate::grid::Field;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEps {
    eps: f64,
}

impl SigmaEps {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid("eps", format!("must be positive, got {eps}")));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else if r > self.eps {
            r
        } else {
            let s = r / self.eps;
            self.eps * s * s * s * (6.0 + s * (-8.0 + 3.0 * s))
        }
    }

    pub fn first(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else if r > self.eps {
            1.0
        } else {
            let s = r / self.eps;
            s * s * (18.0 + s * (-32.0 + 15.0 * s))
        }
    }

    pub fn second(&self, r: f64) -> f64 {
        if r <= 0.0 || r > self.eps {
            0.0
        } else {
            let s = r / self.eps;
            s * (36.0 + s * (-96.0 + 60.0 * s)) / self.eps
        }
    }

    /// `σ̂_ε(r) = ∫_0^r σ_ε`.
    pub fn primitive(&self, r: f64) -> f64 {
        let e2 = self.eps * self.eps;
        if r <= 0.0 {
            0.0
        } else if r > self.eps {
            0.5 * r * r - 0.1 * e2
        } else {
            let s = r / self.eps;
            e2 * s * s * s * s * (1.5 + s * (-1.6 + 0.5 * s))
        }
    }

    /// `Σ_ε(u) = Σ_i σ̂_ε(u_i) · w`.
    pub fn functional(&self, u: &Field) -> f64 {
        u.values().iter().map(|&r| self.primitive(r)).sum::<f64>() * u.grid().weight()
    }
}

/// Location and value of `sup |σ_ε′|`: attained at `r = 0.6 ε` where
/// `σ_ε′ = 1.512`, independently of `ε`.
pub const SIGMA_PRIME_SUP: f64 = 1.512;
