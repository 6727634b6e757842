use crate::error::{Error, Result};
use crate::grid::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointwiseKind {
    /// `g_k(r) = c_k · r`.
    #[default]
    Linear,
    /// `g_k(r) = c_k · tanh(r)`.
    LipschitzTanh,
}

/// Multiplicative noise acting mode by mode: mode `k` of the Wiener
/// process is multiplied by the Nemytskii operator `g_k(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    coeffs: Vec<f64>,
    pub pointwise: PointwiseKind,
    pub c_g: f64,
}

impl NoiseSpec {
    pub fn new(coeffs: Vec<f64>, pointwise: PointwiseKind, c_g: f64) -> Result<Self> {
        if !(c_g.is_finite() && c_g > 0.0) {
            return Err(Error::invalid("c_g", format!("must be positive, got {c_g}")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coeffs", "mode coefficients must be finite"));
        }
        Ok(Self { coeffs, pointwise, c_g })
    }

    /// `c_k = γ · 2^{−k/2}` for `k < modes`.
    pub fn geometric(modes: usize, gamma: f64, pointwise: PointwiseKind, c_g: f64) -> Result<Self> {
        let coeffs = (0..modes).map(|k| gamma * 2f64.powf(-0.5 * k as f64)).collect();
        Self::new(coeffs, pointwise, c_g)
    }

    pub fn deterministic() -> Self {
        Self {
            coeffs: Vec::new(),
            pointwise: PointwiseKind::Linear,
            c_g: 1.0,
        }
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff_square_sum(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc + c * c)
    }

    pub(crate) fn g_unchecked(&self, k: usize, r: f64) -> f64 {
        let c = self.coeffs[k];
        match self.pointwise {
            PointwiseKind::Linear => c * r,
            PointwiseKind::LipschitzTanh => c * r.tanh(),
        }
    }

    pub fn g(&self, k: usize, r: f64) -> Result<f64> {
        self.check_mode(k)?;
        Ok(self.g_unchecked(k, r))
    }

    pub fn eval_field(&self, k: usize, u: &Field) -> Result<Field> {
        self.check_mode(k)?;
        Ok(u.map(|r| self.g_unchecked(k, r)))
    }

    fn check_mode(&self, k: usize) -> Result<()> {
        if k < self.modes() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: k,
                modes: self.modes(),
            })
        }
    }
}
