//! A real function together with its (ordinary or conjugated) Hilbert
//! transform, i.e. the boundary values of an analytic function.

use num_complex::Complex64;

use super::halfline::HalfLineFunction;
use super::kernel::hilbert_alpha;
use super::line::LineFunction;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPair<F> {
    pub real_part: F,
    pub imag_part: F,
}

impl ComplexPair<LineFunction> {
    pub fn from_real(f: LineFunction) -> Result<Self> {
        let h = f.hilbert()?;
        Ok(ComplexPair { real_part: f, imag_part: h })
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        Complex64::new(self.real_part.eval(z), self.imag_part.eval(z))
    }

    /// Sup-norm gap between the imaginary part and H of the real part.
    pub fn transform_defect(&self) -> Result<f64> {
        let h = self.real_part.hilbert()?;
        Ok(h.sub(&self.imag_part)?.sup_norm())
    }
}

impl ComplexPair<HalfLineFunction> {
    pub fn from_real(f: HalfLineFunction) -> Result<Self> {
        let h = hilbert_alpha(f.n(), &f)?;
        Ok(ComplexPair { real_part: f, imag_part: h })
    }

    pub fn eval(&self, w: f64) -> Complex64 {
        Complex64::new(self.real_part.eval(w), self.imag_part.eval(w))
    }

    pub fn transform_defect(&self) -> Result<f64> {
        let h = hilbert_alpha(self.real_part.n(), &self.real_part)?;
        Ok(h.sub(&self.imag_part)?.sup_norm())
    }
}
