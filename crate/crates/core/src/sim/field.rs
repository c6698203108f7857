//! The vorticity field on either domain and the right-hand sides of the
//! evolution equations.

use std::f64::consts::PI;

use crate::error::{OswError, Result};
use super::tail::AlgebraicTail;
use crate::exact::ProfilePair;
use crate::funcspace::{spectral, LineFunction, Parity, PeriodicFunction};

/// Vorticity on the line: a body resolved by the rational basis plus an
/// optional closed-form algebraic tail that the dynamics leave fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    pub body: LineFunction,
    pub tail: Option<AlgebraicTail>,
}

impl LineField {
    pub fn new(body: LineFunction) -> Self {
        LineField { body, tail: None }
    }

    pub fn with_tail(body: LineFunction, tail: AlgebraicTail) -> Self {
        LineField { body, tail: Some(tail) }
    }

    /// Sample a profile, splitting off its far field as a closed-form tail.
    pub fn from_profile(pair: &ProfilePair, modes: usize, map_scale: f64) -> Result<Self> {
        let tail = AlgebraicTail::from_profile(pair)?;
        let body = LineFunction::from_fn(modes, map_scale, Parity::Odd, |z| pair.eval_profile(z) - tail.value(z))?;
        Ok(LineField::with_tail(body, tail))
    }

    fn tail_values(&self, f: impl Fn(&AlgebraicTail, f64) -> f64) -> Vec<f64> {
        let z = self.body.z();
        match &self.tail {
            None => vec![0.0; z.len()],
            Some(t) => z.iter().map(|&x| if x.is_finite() { f(t, x) } else { 0.0 }).collect(),
        }
    }

    /// Nodal values of body plus tail.
    pub fn full_values(&self) -> Vec<f64> {
        match &self.tail {
            None => self.body.values().to_vec(),
            Some(_) => {
                let t = self.tail_values(AlgebraicTail::value);
                self.body.values().iter().zip(t).map(|(b, t)| b + t).collect()
            }
        }
    }

    /// The whole field as a single rational-basis function.
    pub fn combined(&self) -> LineFunction {
        match &self.tail {
            None => self.body.clone(),
            Some(_) => self.body.with_values(self.full_values(), self.body.parity()),
        }
    }

    pub fn hilbert_values(&self) -> Result<Vec<f64>> {
        let h = self.body.hilbert()?;
        let t = self.tail_values(AlgebraicTail::hilbert);
        Ok(h.values().iter().zip(t).map(|(a, b)| a + b).collect())
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        let mut v = self.body.eval_many(xs);
        if let Some(t) = &self.tail {
            for (o, &x) in v.iter_mut().zip(xs) {
                *o += t.value(x);
            }
        }
        v
    }

    /// Re-expand the body on a map of a different scale.
    pub fn remap(&self, map_scale: f64) -> Result<LineField> {
        Ok(LineField { body: self.body.remap(self.body.mode_count(), map_scale)?, tail: self.tail })
    }
}

/// Vorticity sampled on the rational line grid or the periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Line(LineField),
    Circle(PeriodicFunction),
}

/// Which evolution law the right-hand side implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    /// ∂ₜω + a·u·∂ₓω = 2ω·∂ₓu with u = −Λ⁻¹ω.
    #[default]
    Osw,
    /// ∂ₜω = a·Hω(0)·x∂ₓω − 2Hω(0)·ω, coefficients frozen at the origin.
    Toy,
}

impl Field {
    pub fn line(f: LineFunction) -> Field {
        Field::Line(LineField::new(f))
    }

    /// Stored degrees of freedom; on the line these exclude the tail.
    pub fn values(&self) -> &[f64] {
        match self {
            Field::Line(f) => f.body.values(),
            Field::Circle(f) => f.values(),
        }
    }

    /// Nodal values of ω itself.
    pub fn full_values(&self) -> Vec<f64> {
        match self {
            Field::Line(f) => f.full_values(),
            Field::Circle(f) => f.values().to_vec(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.values().len()
    }

    pub fn parity(&self) -> Parity {
        match self {
            Field::Line(f) => f.body.parity(),
            Field::Circle(f) => f.parity(),
        }
    }

    pub fn parity_defect(&self) -> f64 {
        match self {
            Field::Line(f) => f.combined().parity_defect(),
            Field::Circle(f) => f.parity_defect(),
        }
    }

    /// Grid points in physical space; the line grid starts at infinity.
    pub fn nodes(&self) -> Vec<f64> {
        match self {
            Field::Line(f) => f.body.z(),
            Field::Circle(f) => f.nodes(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.full_values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Interpolated peak of |ω| and its location.
    pub fn sup_and_argmax(&self) -> (f64, f64) {
        match self {
            Field::Line(f) => f.combined().sup_and_argmax(),
            Field::Circle(f) => f.sup_and_argmax(),
        }
    }

    pub fn sobolev_norm(&self, s: usize) -> Result<f64> {
        match self {
            Field::Line(f) => f.combined().sobolev_norm(s),
            Field::Circle(f) => f.sobolev_norm(s),
        }
    }

    pub fn hilbert_sup(&self) -> Result<f64> {
        Ok(match self {
            Field::Line(f) => f.hilbert_values()?.iter().fold(0.0, |m, v| m.max(v.abs())),
            Field::Circle(f) => f.hilbert().sup_norm(),
        })
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        match self {
            Field::Line(f) => f.eval_many(xs),
            Field::Circle(f) => {
                let c = f.fourier_modes();
                xs.iter().map(|&x| spectral::evaluate(&c, x)).collect()
            }
        }
    }

    /// self + s·other on the same grid, keeping the parity and tail of self.
    pub fn axpy(&self, s: f64, other: &Field) -> Result<Field> {
        let (a, b) = (self.values(), other.values());
        if a.len() != b.len() {
            return Err(OswError::Mismatch("fields of different sizes".into()));
        }
        let values: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + s * y).collect();
        Ok(self.with_values(values))
    }

    /// Replace the stored degrees of freedom.
    pub fn with_values(&self, values: Vec<f64>) -> Field {
        match self {
            Field::Line(f) => Field::Line(LineField { body: f.body.with_values(values, f.body.parity()), tail: f.tail }),
            Field::Circle(f) => Field::Circle(f.with_values(values, f.parity())),
        }
    }

    /// Local grid spacing at each node; infinite at the point at infinity.
    pub fn spacing(&self) -> Vec<f64> {
        let n = self.mode_count();
        let h = 2.0 * PI / n as f64;
        match self {
            Field::Line(f) => {
                let l = f.body.map_scale();
                f.body.z().into_iter().map(|z| if z.is_finite() { h * (l * l + z * z) / (2.0 * l) } else { f64::INFINITY }).collect()
            }
            Field::Circle(_) => vec![h; n],
        }
    }

    /// Velocity u = −Λ⁻¹ω sampled on the grid.
    pub fn velocity(&self) -> Result<Vec<f64>> {
        Ok(match self {
            Field::Line(f) => f.velocity_values()?,
            Field::Circle(f) => f.lambda_inv().values().iter().map(|v| -v).collect(),
        })
    }
}

/// Padding ratio of the dealiased products (the 2/3 rule).
pub const DEFAULT_PADDING: f64 = 1.5;

/// The OSW right-hand side −a·u·∂ₓω + 2ω·∂ₓu with ∂ₓu = −Hω.
pub fn rhs(field: &Field, a: f64) -> Result<Field> {
    rhs_padded(field, a, DEFAULT_PADDING)
}

/// As [`rhs`], with products dealiased on a grid `padding` times finer.
/// On the line the result is the time derivative of the body; the tail
/// is stationary because its own contribution decays faster than itself.
pub fn rhs_padded(field: &Field, a: f64, padding: f64) -> Result<Field> {
    match field {
        Field::Line(line) => {
            let omega = &line.body;
            let h = omega.hilbert()?;
            let stretch = spectral::product_dealiased(omega.values(), h.values(), -PI, padding);
            let mut out: Vec<f64> = stretch.iter().map(|v| -2.0 * v).collect();
            if let Some(tail) = &line.tail {
                // the cross terms and the tail square, pointwise
                let z = omega.z();
                for j in 1..z.len() {
                    let (t, ht) = (tail.value(z[j]), tail.hilbert(z[j]));
                    out[j] -= 2.0 * (omega.values()[j] * ht + t * h.values()[j] + t * ht);
                }
            }
            if a != 0.0 {
                // u has a nonzero limit at infinity, so the transport product
                // is taken pointwise; ∂ₓω vanishes at the point at infinity.
                let u = line.velocity_values()?;
                let dx = line.derivative_values();
                for (j, o) in out.iter_mut().enumerate().skip(1) {
                    *o -= a * u[j] * dx[j];
                }
            }
            out[0] = 0.0;
            Ok(field.with_values(out))
        }
        Field::Circle(omega) => {
            let h = omega.hilbert();
            let stretch = spectral::product_dealiased(omega.values(), h.values(), 0.0, padding);
            let mut out: Vec<f64> = stretch.iter().map(|v| -2.0 * v).collect();
            if a != 0.0 {
                // −a·u·∂ₓω with u = −Λ⁻¹ω
                let transport =
                    spectral::product_dealiased(omega.lambda_inv().values(), omega.derivative().values(), 0.0, padding);
                for (o, t) in out.iter_mut().zip(&transport) {
                    *o += a * t;
                }
            }
            Ok(Field::Circle(omega.with_values(out, omega.parity())))
        }
    }
}

impl LineField {
    fn velocity_values(&self) -> Result<Vec<f64>> {
        let body = self.body.lambda_inv()?;
        let tail = self.tail_values(AlgebraicTail::lambda_inv);
        Ok(body.values().iter().zip(tail).map(|(b, t)| -(b + t)).collect())
    }

    fn derivative_values(&self) -> Vec<f64> {
        let d = self.body.derivative();
        let tail = self.tail_values(AlgebraicTail::derivative);
        d.values().iter().zip(tail).map(|(a, b)| a + b).collect()
    }
}

/// The toy-model right-hand side a·c·x∂ₓω − 2c·ω with c = Hω(0).
pub fn toy_rhs(field: &Field, a: f64) -> Result<Field> {
    match field {
        Field::Line(LineField { tail: Some(_), .. }) => {
            Err(OswError::Mismatch("the toy model takes data without a split tail".into()))
        }
        Field::Line(LineField { body: omega, tail: None }) => {
            let c = omega.hilbert()?.values()[omega.origin_index()];
            let dx = omega.derivative();
            let z = omega.z();
            let out: Vec<f64> = (0..z.len())
                .map(|j| if j == 0 { 0.0 } else { c * (a * z[j] * dx.values()[j] - 2.0 * omega.values()[j]) })
                .collect();
            Ok(Field::line(omega.with_values(out, omega.parity())))
        }
        Field::Circle(_) => Err(OswError::Mismatch("the toy model is posed on the line".into())),
    }
}

pub fn model_rhs(model: Model, field: &Field, a: f64, padding: f64) -> Result<Field> {
    match model {
        Model::Osw => rhs_padded(field, a, padding),
        Model::Toy => toy_rhs(field, a),
    }
}
